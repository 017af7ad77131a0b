//! The diagnostic `u_k = (1/N) log |S_N(f) - f|` against `(log |z|)/2`.
//!
//! `f` is known only through its built blocks. The unbuilt tail
//! `T = f - f_built` is bounded by a [`TailBound`]; each grid point is then
//! classified as certainly below, certainly above, or indeterminate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;
use crate::universal::UniversalSeries;

/// `|T(z)| <= (|z| / radius)^valuation * sup` for `|z| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub valuation: usize,
    pub radius: f64,
    pub sup: f64,
}

impl TailBound {
    /// `log` of the bound at modulus `r`; `+inf` beyond the radius.
    pub fn ln_at(&self, r: f64) -> f64 {
        if r > self.radius {
            return f64::INFINITY;
        }
        if self.sup == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.valuation as f64 * (r / self.radius).ln() + self.sup.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UkStatus {
    Below,
    Above,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UkPoint {
    pub z: [f64; 2],
    /// `u_k` from the built blocks; `-inf` where `S_N(f_built) = f_built`.
    pub u: f64,
    /// `u - log |z|`.
    pub margin: f64,
    pub status: UkStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UkReport {
    pub n: usize,
    pub points: Vec<UkPoint>,
    pub fraction_below: f64,
    pub fraction_above: f64,
    pub fraction_indeterminate: f64,
}

pub fn uk_diagnostic(
    f: &UniversalSeries,
    n: usize,
    grid: &[ComplexValue],
    tail: Option<&TailBound>,
) -> Result<UkReport> {
    if n == 0 {
        return Err(Error::Precondition("N_k must be positive".into()));
    }
    let available = f.available_coefficients();
    // Coefficients past the built degree are known to vanish below the
    // valuation of the tail.
    let known = tail.map_or(available, |t| available.max(t.valuation));
    if n + 1 > known {
        return Err(Error::BeyondBuiltBlocks { index: n, available: known });
    }
    let diff = f.sum().tail_after(n);
    let mut points = Vec::with_capacity(grid.len());
    for z in grid {
        let r = z.abs().to_f64();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("grid point {z} is not in the punctured disc")));
        }
        let ln_d = diff.eval(z).abs().ln().to_f64();
        let ln_b = tail.map_or(f64::NEG_INFINITY, |t| t.ln_at(r));
        let half = 0.5 * r.ln();
        let upper = log_add(ln_d, ln_b) / n as f64;
        let lower = log_sub(ln_d, ln_b) / n as f64;
        let status = if upper <= half {
            UkStatus::Below
        } else if lower > half {
            UkStatus::Above
        } else {
            UkStatus::Indeterminate
        };
        let u = ln_d / n as f64;
        let c = z.to_c64();
        points.push(UkPoint { z: [c.re, c.im], u, margin: u - r.ln(), status });
    }
    let frac = |s: UkStatus| points.iter().filter(|p| p.status == s).count() as f64 / points.len().max(1) as f64;
    Ok(UkReport {
        n,
        fraction_below: frac(UkStatus::Below),
        fraction_above: frac(UkStatus::Above),
        fraction_indeterminate: frac(UkStatus::Indeterminate),
        points,
    })
}

/// `log(e^a + e^b)`.
fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `log(e^a - e^b)`, `-inf` when `b >= a`.
fn log_sub(a: f64, b: f64) -> f64 {
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp()).ln_1p()
}

/// Polar grid of the disc `|z| <= rmax`: `rings` radii, `per_ring` angles.
pub fn polar_grid(rmax: f64, rings: usize, per_ring: usize, prec: crate::numerics::Precision) -> Vec<ComplexValue> {
    let mut out = Vec::with_capacity(rings * per_ring);
    for i in 1..=rings {
        let r = rmax * i as f64 / rings as f64;
        for j in 0..per_ring {
            let t = std::f64::consts::TAU * (j as f64 + 0.5 * (i % 2) as f64) / per_ring as f64;
            out.push(ComplexValue::from_c64(prec, Complex64::from_polar(r, t)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Poly, Precision};
    use crate::universal::{Block, BuildMode, DomainKind, StepCertificate};

    fn p() -> Precision {
        Precision::default()
    }

    fn series(blocks: &[(usize, &[(f64, f64)])]) -> UniversalSeries {
        let r = |x: f64| p().real(x);
        let mut s = UniversalSeries::new(DomainKind::Disc, BuildMode::Empirical, p(), String::new());
        for (k, (n, q)) in blocks.iter().enumerate() {
            let cert = StepCertificate {
                k: k + 1,
                n_k: *n,
                exponent_condition_met: true,
                requested_growth_ratio: r(0.5),
                achieved_growth_ratio: r(0.1),
                requested_growth_bound: r(0.5),
                achieved_growth_margin: r(0.4),
                requested_target_err: r(0.25),
                achieved_target_err: r(0.01),
                mergelyan_tol_required: r(0.25),
                mergelyan_tol_used: r(0.25),
                mergelyan_achieved: r(0.01),
                mergelyan_degree: q.len() - 1,
                validation_points: 1000,
                strip: None,
                relaxation_note: None,
            };
            s.push(Block { k: k + 1, shift: *n, exponent: *n, qstar: Poly::from_f64_pairs(p(), q) }, cert);
        }
        s
    }

    #[test]
    fn polynomial_gives_minus_infinity() {
        let s = series(&[(0, &[(1.0, 0.0), (2.0, 0.0), (0.5, 0.5)])]);
        let grid = polar_grid(0.9, 5, 12, p());
        let rep = uk_diagnostic(&s, 2, &grid, None).unwrap();
        assert!(rep.points.iter().all(|q| q.u == f64::NEG_INFINITY && q.margin == f64::NEG_INFINITY));
        assert_eq!(rep.fraction_below, 1.0);
    }

    #[test]
    fn monomial_tail_matches_closed_form() {
        // S_N(f) - f = -z^M for f = 1 + z^M, so u = (M/N) log|z| exactly.
        let mut q = vec![(0.0, 0.0); 21];
        q[0] = (1.0, 0.0);
        q[20] = (1.0, 0.0);
        let s = series(&[(0, &q)]);
        let grid = polar_grid(0.75, 6, 10, p());
        let rep = uk_diagnostic(&s, 10, &grid, None).unwrap();
        for pt in &rep.points {
            let r = Complex64::new(pt.z[0], pt.z[1]).norm();
            assert!((pt.u - 2.0 * r.ln()).abs() < 1e-12);
            assert_eq!(pt.status, UkStatus::Below);
        }
    }

    #[test]
    fn coefficients_must_be_built() {
        let s = series(&[(3, &[(1.0, 0.0)])]);
        let grid = polar_grid(0.5, 2, 4, p());
        assert!(matches!(uk_diagnostic(&s, 4, &grid, None), Err(Error::BeyondBuiltBlocks { .. })));
        let t = TailBound { valuation: 9, radius: 0.8, sup: 0.1 };
        assert!(uk_diagnostic(&s, 8, &grid, Some(&t)).is_ok());
        assert!(uk_diagnostic(&s, 9, &grid, Some(&t)).is_err());
    }

    #[test]
    fn tail_bound_decides_or_flags() {
        // Built part vanishes beyond N; only the tail bound speaks.
        let s = series(&[(0, &[(1.0, 0.0)])]);
        let t = TailBound { valuation: 60, radius: 0.8, sup: 0.25 };
        let grid = vec![ComplexValue::from_f64(p(), 0.3, 0.0), ComplexValue::from_f64(p(), 0.75, 0.0)];
        let rep = uk_diagnostic(&s, 59, &grid, Some(&t)).unwrap();
        assert_eq!(rep.points[0].status, UkStatus::Below);
        assert_eq!(rep.points[1].status, UkStatus::Indeterminate);
    }

    #[test]
    fn margin_obeys_the_maximum_principle() {
        // u - log|z| is subharmonic, so its max over |z| = rho dominates
        // interior values.
        let s = series(&[(0, &[(0.5, 0.0), (1.0, 0.3)]), (4, &[(0.2, 0.1), (-0.4, 0.0), (0.3, 0.3)])]);
        let rho = 0.7;
        let circle: Vec<ComplexValue> = (0..720)
            .map(|j| ComplexValue::from_c64(p(), Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / 720.0)))
            .collect();
        let inner = polar_grid(0.65, 8, 24, p());
        let on = uk_diagnostic(&s, 2, &circle, None).unwrap();
        let inside = uk_diagnostic(&s, 2, &inner, None).unwrap();
        let top = on.points.iter().map(|q| q.margin).fold(f64::NEG_INFINITY, f64::max);
        assert!(inside.points.iter().all(|q| q.margin <= top + 1e-9));
    }

    #[test]
    fn log_helpers() {
        assert!((log_add(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_add(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert!((log_sub(2f64.ln(), 0.0)).abs() < 1e-15);
        assert_eq!(log_sub(0.0, 0.0), f64::NEG_INFINITY);
    }
}
