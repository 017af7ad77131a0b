//! `utaylor potential`: thin wrappers over the potential-theory kernels.

use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use utaylor_core::geometry::{tangent_disc, DomainDesc, PowerPsi};
use utaylor_core::numerics::Quadrature;
use utaylor_core::potential::{
    green_arc_complement, harmonic_measure, minthin_psi_test, poisson_kernel, ArcOnCircle, MeasureEstimate, ThinVerdict,
};
use utaylor_core::ComplexValue;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{Check, Writer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phi {
    /// `phi = 1`.
    One,
    /// `phi = cos(m theta)`, extended by `Re z^m`.
    Cos,
    /// `phi = sin(m theta)`, extended by `Im z^m`.
    Sin,
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum PotentialCmd {
    /// Poisson kernel `P(z, e^{i theta})`.
    Poisson {
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["RE", "IM"])]
        z: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Minimal thinness at 1 of `{Re z > 1 - scale |Im z|^a}`.
    Minthin {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Harmonic measure of the unit disc by walk-on-spheres.
    Hmeasure {
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["RE", "IM"])]
        z: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Phi::One)]
        phi: Phi,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Green function of the complement of an arc, against its capacity
    /// asymptote on `|z| = R`.
    GreenArc {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mid: f64,
        /// Half angle of the arc.
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1e6)]
        r: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// The disc `{P(., e^{i theta}) > c}` and its boundary residual.
    TangentDisc {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

impl PotentialCmd {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialCmd::Poisson { .. } => "poisson",
            PotentialCmd::Minthin { .. } => "minthin",
            PotentialCmd::Hmeasure { .. } => "hmeasure",
            PotentialCmd::GreenArc { .. } => "green-arc",
            PotentialCmd::TangentDisc { .. } => "tangent-disc",
        }
    }
}

pub struct PotentialOutcome {
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Body {
    Poisson { z: [f64; 2], theta: f64, value: f64 },
    Minthin { a: f64, scale: f64, verdict: ThinVerdict, partials_last: f64, decay_slope: f64 },
    Hmeasure { z: [f64; 2], phi: Phi, m: u32, estimate: MeasureEstimate, exact: f64 },
    GreenArc { mid: f64, beta: f64, r: f64, capacity: f64, minus_log_capacity: f64, max_deviation: f64 },
    TangentDisc { c: f64, theta: f64, center: [f64; 2], radius: f64, max_residual: f64 },
}

#[derive(Serialize)]
struct PotentialReport {
    #[serde(flatten)]
    body: Body,
    checks: Vec<Check>,
}

fn point(v: &[f64]) -> CliResult<Complex64> {
    match v {
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(CliError::Validation("a point needs two coordinates".into())),
    }
}

pub fn cmd_potential(cfg: &RunConfig, cmd: &PotentialCmd) -> CliResult<PotentialOutcome> {
    let prec = cfg.precision()?;
    let (body, checks) = match cmd {
        PotentialCmd::Poisson { z, theta } => {
            let z = point(z)?;
            let v = poisson_kernel(&ComplexValue::from_c64(prec, z), &ComplexValue::unit(&prec.real(*theta)))?.to_f64();
            (
                Body::Poisson { z: [z.re, z.im], theta: *theta, value: v },
                vec![Check::at_least("kernel positive", v, 0.0)],
            )
        }
        PotentialCmd::Minthin { a, scale } => {
            let psi = PowerPsi { a: *a, scale: *scale };
            let rep = minthin_psi_test(|t| psi.eval(t), &Quadrature::default())?;
            let decided = (rep.verdict != ThinVerdict::Inconclusive) as u8 as f64;
            let body = Body::Minthin {
                a: *a,
                scale: *scale,
                verdict: rep.verdict,
                partials_last: rep.partials.last().copied().unwrap_or(0.0),
                decay_slope: rep.decay_slope,
            };
            (body, vec![Check::at_least("verdict decided", decided, 1.0)])
        }
        PotentialCmd::Hmeasure { z, phi, m } => {
            let z = point(z)?;
            let m = *m as i32;
            let f = |zeta: Complex64| match phi {
                Phi::One => 1.0,
                Phi::Cos => (m as f64 * zeta.arg()).cos(),
                Phi::Sin => (m as f64 * zeta.arg()).sin(),
            };
            let exact = match phi {
                Phi::One => 1.0,
                Phi::Cos => z.powi(m).re,
                Phi::Sin => z.powi(m).im,
            };
            let est = harmonic_measure(&DomainDesc::UnitDisc, z, f, cfg.params.walks, cfg.seed)?;
            let err = (est.functional_value - exact).abs();
            let checks = vec![Check::at_most("within confidence radius", err, est.confidence_radius)];
            (Body::Hmeasure { z: [z.re, z.im], phi: *phi, m: m as u32, estimate: est, exact }, checks)
        }
        PotentialCmd::GreenArc { mid, beta, r, points, tol } => {
            let arc = ArcOnCircle::centered(*mid, *beta)?;
            let cap = arc.capacity();
            let n = (*points).max(1);
            let mut dev: f64 = 0.0;
            for j in 0..n {
                let z = ComplexValue::from_c64(
                    prec,
                    Complex64::from_polar(*r, std::f64::consts::TAU * j as f64 / n as f64),
                );
                let g = green_arc_complement(&z, &arc)?.to_f64();
                dev = dev.max((g - r.ln() + cap.ln()).abs());
            }
            let body = Body::GreenArc {
                mid: *mid,
                beta: *beta,
                r: *r,
                capacity: cap,
                minus_log_capacity: -cap.ln(),
                max_deviation: dev,
            };
            (body, vec![Check::at_most("G - log|z| against -log cap", dev, *tol)])
        }
        PotentialCmd::TangentDisc { c, theta, points, tol } => {
            let zeta = ComplexValue::unit(&prec.real(*theta));
            let (center, radius) = tangent_disc(&zeta, &prec.real(*c))?;
            let n = (*points).max(1);
            let mut res: f64 = 0.0;
            // Boundary points away from the tangency point, where P is singular.
            for j in 1..=n {
                let t = prec.real(*theta + std::f64::consts::TAU * (j as f64 - 0.5) / n as f64);
                let z = &center + &ComplexValue::unit(&t).scale(&radius);
                let p = poisson_kernel(&z, &zeta)?;
                res = res.max((p - prec.real(*c)).abs().to_f64());
            }
            let cc = center.to_c64();
            let body = Body::TangentDisc {
                c: *c,
                theta: *theta,
                center: [cc.re, cc.im],
                radius: radius.to_f64(),
                max_residual: res,
            };
            (body, vec![Check::at_most("boundary residual |P - c|", res, *tol)])
        }
    };
    let mut w = Writer::new(&cfg.out, cfg)?;
    w.toml(&format!("potential-{}.toml", cmd.name()), &PotentialReport { body, checks: checks.clone() })?;
    Ok(PotentialOutcome { checks, files: w.into_written() })
}
