//! Build schedules: the set `A`, the weight `w`, and the finite list of
//! `(K_k, p_k)` steps that replaces the countable enumeration.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{connected_complement_check, CompactSet, ComplementVerdict, SampleDensity, Shape};
use crate::numerics::{ComplexValue, Poly, Precision, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Disc,
    Strip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildMode {
    /// Paper tolerances; any missed bound aborts the build.
    Strict,
    /// Tolerances relaxed to the schedule's `tau`; misses are recorded.
    Empirical,
}

/// Growth weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFn {
    /// `max(1, |z - 1|^{-1/2})`.
    InvSqrtDistance,
    /// `exp(scale (P(g(z), 1) + P(g(z), -1)))` with `g(z) = tan(pi z / 4)`
    /// mapping the strip onto the disc and `+-1` to `+-1`.
    StripPoisson {
        scale: f64,
    },
    Constant {
        value: f64,
    },
}

impl WeightFn {
    /// `w(z)`; `+inf` at the singular boundary points.
    pub fn eval(&self, z: &ComplexValue) -> Real {
        let p = z.prec();
        match self {
            WeightFn::InvSqrtDistance => {
                let d = (z - &ComplexValue::one(z.precision())).abs();
                let w = d.sqrt().recip();
                w.max(&Real::with_val(p, 1))
            }
            WeightFn::StripPoisson { scale } => {
                let one = ComplexValue::one(z.precision());
                // tan rounds near +-1, so the poles are detected in z.
                let eps = Real::with_val(p, 1) >> (p as i32 / 2);
                if (z - &one).abs() <= eps || (z + &one).abs() <= eps {
                    return Real::with_val(p, rug::float::Special::Infinity);
                }
                let g = tan_quarter_pi(z);
                let num = Real::with_val(p, 1u32 - g.norm_sqr());
                let h = Real::with_val(p, &num / (&g - &one).norm_sqr()) + num / (&g + &one).norm_sqr();
                (h * Real::with_val(p, *scale)).exp()
            }
            WeightFn::Constant { value } => Real::with_val(p, *value),
        }
    }
}

/// `tan(pi z / 4)`, via `tan(x + iy) = (sin 2x + i sinh 2y) / (cos 2x + cosh 2y)`.
fn tan_quarter_pi(z: &ComplexValue) -> ComplexValue {
    let p = z.prec();
    let quarter = Real::with_val(p, rug::float::Constant::Pi) / 2u32;
    let x2 = Real::with_val(p, z.re() * &quarter);
    let y2 = Real::with_val(p, z.im() * &quarter);
    let (s, c) = x2.sin_cos(Real::new(p));
    let den = c + y2.clone().cosh();
    ComplexValue::new(s / &den, y2.sinh() / den)
}

fn default_max_degree() -> usize {
    160
}

fn default_n_max() -> usize {
    1 << 20
}

fn default_density() -> SampleDensity {
    SampleDensity { boundary: 256, interior: 64 }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    /// Exponent search limit.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_density")]
    pub density: SampleDensity,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams { max_degree: default_max_degree(), n_max: default_n_max(), density: default_density() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub set: Shape,
    /// Coefficients `[re, im]` of `p_k`, lowest degree first.
    pub target: Vec<[f64; 2]>,
    /// Mergelyan tolerance used in empirical mode.
    #[serde(default)]
    pub tau: Option<f64>,
}

/// Schedule as written in a schedule file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub domain: DomainKind,
    pub a: Shape,
    pub weight: WeightFn,
    #[serde(default)]
    pub build: BuildParams,
    pub steps: Vec<StepSpec>,
}

impl ScheduleSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Schedule(format!("cannot parse schedule: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("schedule serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

pub struct Step {
    pub k: usize,
    pub set: CompactSet,
    pub target: Poly,
    pub tau: Option<Real>,
}

/// Schedule with sampled sets at a working precision.
pub struct Schedule {
    pub spec: ScheduleSpec,
    pub prec: Precision,
    pub a: CompactSet,
    pub steps: Vec<Step>,
    /// Notes from validation that did not block the build.
    pub warnings: Vec<String>,
}

impl Schedule {
    pub fn new(spec: ScheduleSpec, prec: Precision) -> Result<Self> {
        if spec.steps.is_empty() {
            return Err(Error::Schedule("schedule has no steps".into()));
        }
        let density = spec.build.density;
        // A polynomial of degree >= the number of boundary samples can vanish
        // on a whole component of the fitting grid.
        if density.boundary <= spec.build.max_degree {
            return Err(Error::Schedule(format!(
                "{} boundary samples per component cannot pin down degree {}",
                density.boundary, spec.build.max_degree
            )));
        }
        let a = CompactSet::sample("A", spec.a.clone(), density, prec)?;
        let steps = spec
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let pairs: Vec<(f64, f64)> = s.target.iter().map(|c| (c[0], c[1])).collect();
                Ok(Step {
                    k: i + 1,
                    set: CompactSet::sample(format!("K{}", i + 1), s.set.clone(), density, prec)?,
                    target: Poly::from_f64_pairs(prec, &pairs),
                    tau: s.tau.map(|t| prec.real(t)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut schedule = Schedule { spec, prec, a, steps, warnings: Vec::new() };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn domain(&self) -> DomainKind {
        self.spec.domain
    }

    pub fn weight(&self) -> WeightFn {
        self.spec.weight
    }

    /// `D(0, k/(k+1))` for the disc, `R_k` for the strip.
    pub fn core_shape(&self, k: usize) -> Shape {
        let kf = k as f64;
        match self.spec.domain {
            DomainKind::Disc => Shape::Disc { center: [0.0, 0.0], radius: kf / (kf + 1.0) },
            DomainKind::Strip => {
                let x = kf / (kf + 1.0);
                Shape::Rectangle { min: [-x, -kf], max: [x, kf] }
            }
        }
    }

    pub fn core_set(&self, k: usize) -> CompactSet {
        CompactSet::sample(format!("core{k}"), self.core_shape(k), self.spec.build.density, self.prec)
            .expect("core shapes are valid")
    }

    fn validate(&mut self) -> Result<()> {
        let one = Real::with_val(self.prec.bits(), 1);
        // Samples may sit on the boundary only at the singular points of w.
        let slack = Real::with_val(self.prec.bits(), 1) >> 40;
        let singular = |z: &ComplexValue| self.spec.weight.eval(z).is_infinite();
        for z in self.a.samples() {
            let outside = match self.spec.domain {
                DomainKind::Disc => z.abs() >= Real::with_val(self.prec.bits(), &one - &slack),
                DomainKind::Strip => {
                    Real::with_val(self.prec.bits(), z.re().abs_ref())
                        >= Real::with_val(self.prec.bits(), &one - &slack)
                }
            };
            if outside && !singular(z) {
                return Err(Error::Schedule(format!("A reaches the boundary at {z}, where w is finite")));
            }
            if self.spec.weight.eval(z) < 1u32 {
                return Err(Error::Schedule(format!("w < 1 at {z} in A")));
            }
        }
        for step in &self.steps {
            for z in step.set.samples() {
                let inside = match self.spec.domain {
                    DomainKind::Disc => z.abs() < 1u32,
                    DomainKind::Strip => Real::with_val(self.prec.bits(), z.re().abs_ref()) < 1u32,
                };
                if inside {
                    return Err(Error::Schedule(format!("K{} meets the domain at {z}", step.k)));
                }
            }
            let core = self.core_shape(step.k);
            let shapes = [&self.spec.a, &core, &step.set.shape];
            match connected_complement_check(&shapes, None, 96) {
                ComplementVerdict::Pass => {}
                ComplementVerdict::Fail => {
                    return Err(Error::Schedule(format!("complement of A, core and K{} is not connected", step.k)))
                }
                ComplementVerdict::Inconclusive => self
                    .warnings
                    .push(format!("connected-complement check for step {} is inconclusive at this resolution", step.k)),
            }
        }
        Ok(())
    }
}

pub const DISC_DEFAULT: &str = include_str!("../../schedules/disc_default.toml");
pub const DISC_DEEP: &str = include_str!("../../schedules/disc_deep.toml");
pub const STRIP_DEFAULT: &str = include_str!("../../schedules/strip_default.toml");
