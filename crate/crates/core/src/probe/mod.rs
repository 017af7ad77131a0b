//! Boundary-behaviour instruments: coverage probes on approach regions and
//! radii, the Fatou probe, the `u_k` diagnostic and the Bernstein check.

pub mod bernstein;
pub mod coverage;
pub mod fatou;
pub mod uk;

use crate::numerics::{ComplexValue, Poly};
use crate::universal::UniversalSeries;

pub use bernstein::{bernstein_verify, BernsteinReport};
pub use coverage::{
    boundedness_report, coverage, plessner_curve, plessner_probe, radial_density, BoundednessReport, CoverageScore,
    Window,
};
pub use fatou::{fatou_probe, fatou_probe_with, FatouConfig, FatouVerdict};
pub use uk::{polar_grid, uk_diagnostic, TailBound, UkPoint, UkReport, UkStatus};

/// Anything that can be evaluated at a point of the disc.
pub trait Evaluable {
    fn eval_at(&self, z: &ComplexValue) -> ComplexValue;
}

impl Evaluable for Poly {
    fn eval_at(&self, z: &ComplexValue) -> ComplexValue {
        self.eval(z)
    }
}

impl Evaluable for UniversalSeries {
    fn eval_at(&self, z: &ComplexValue) -> ComplexValue {
        self.eval(z)
    }
}

impl<F: Fn(&ComplexValue) -> ComplexValue> Evaluable for F {
    fn eval_at(&self, z: &ComplexValue) -> ComplexValue {
        self(z)
    }
}
