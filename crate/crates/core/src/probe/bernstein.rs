//! Bernstein's lemma off an arc `I` of the circle:
//! `log |S| <= N G(., infinity) + log sup_I |S|` for `deg S = N`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{ComplexValue, Poly, Precision, Real};
use crate::potential::{green_arc_many, map_tolerance, ArcOnCircle};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinReport {
    pub degree: usize,
    pub sup_on_arc: f64,
    pub points: usize,
    /// `max (LHS - RHS)` over the grid; `-inf` if `S` vanishes everywhere
    /// on it.
    pub max_violation: f64,
    pub tolerance: f64,
    /// Points with `LHS - RHS > tolerance`.
    pub violations: usize,
}

/// Arc samples used for `sup_I |S|` before local refinement.
fn arc_samples(degree: usize) -> usize {
    (64 * (degree + 1)).max(4096)
}

pub fn bernstein_verify(s: &Poly, arc: &ArcOnCircle, grid: &[ComplexValue]) -> Result<BernsteinReport> {
    let prec = s.precision();
    let n = s.degree().max(0) as usize;
    let sup = sup_on_arc(s, arc, prec);
    let ln_sup = sup.clone().ln().to_f64();
    let g = green_arc_many(grid, arc, prec)?;
    let tolerance = 1e-9 + 10.0 * map_tolerance(prec);
    let mut max_violation = f64::NEG_INFINITY;
    let mut violations = 0;
    for (z, gz) in grid.iter().zip(&g) {
        let lhs = s.eval(z).abs().ln().to_f64();
        if lhs == f64::NEG_INFINITY {
            continue;
        }
        let v = lhs - (n as f64 * gz.to_f64() + ln_sup);
        if v > tolerance {
            violations += 1;
        }
        max_violation = max_violation.max(v);
    }
    Ok(BernsteinReport {
        degree: n,
        sup_on_arc: sup.to_f64(),
        points: grid.len(),
        max_violation,
        tolerance,
        violations,
    })
}

/// Dense sampling, then golden-section refinement around the three largest
/// samples.
fn sup_on_arc(s: &Poly, arc: &ArcOnCircle, prec: Precision) -> Real {
    let m = arc_samples(s.degree().max(0) as usize);
    let (lo, hi) = (arc.theta_lo, arc.theta_hi);
    let h = (hi - lo) / (m - 1) as f64;
    let at = |t: f64| s.eval(&ComplexValue::unit(&prec.real(t))).abs();
    let vals: Vec<Real> = (0..m).map(|j| at(lo + h * j as f64)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = vals[order[0]].clone();
    for &j in order.iter().take(3) {
        let (mut a, mut b) = ((lo + h * (j as f64 - 1.0)).max(lo), (lo + h * (j as f64 + 1.0)).min(hi));
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
        let (mut fc, mut fd) = (at(c), at(d));
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = at(d);
            }
        }
        for v in [fc, fd] {
            if v > best {
                best = v;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn ring(r: f64, n: usize) -> Vec<ComplexValue> {
        (0..n)
            .map(|j| ComplexValue::unit(&p().real(std::f64::consts::TAU * j as f64 / n as f64)).scale(&p().real(r)))
            .collect()
    }

    #[test]
    fn constants_are_tight() {
        let arc = ArcOnCircle::centered(0.0, 1.0).unwrap();
        let one = Poly::constant(ComplexValue::one(p()));
        let rep = bernstein_verify(&one, &arc, &ring(2.0, 32)).unwrap();
        assert_eq!(rep.degree, 0);
        assert!(rep.max_violation.abs() < 1e-30);
    }

    #[test]
    fn powers_obey_the_capacity_bound() {
        // Oracle: sup_I |z^N| = 1 and G(z) >= log|z|, so LHS - RHS <= 0.
        for beta in [std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_3, 2.0 * std::f64::consts::FRAC_PI_3] {
            let arc = ArcOnCircle::centered(0.4, beta).unwrap();
            let s = Poly::monomial(p(), 7);
            for r in [1.1, 2.0, 10.0] {
                let rep = bernstein_verify(&s, &arc, &ring(r, 48)).unwrap();
                assert!((rep.sup_on_arc - 1.0).abs() < 1e-12);
                assert_eq!(rep.violations, 0);
                assert!(rep.max_violation <= 0.0);
            }
        }
    }

    #[test]
    fn refinement_finds_the_peak() {
        // |1 + z| on the arc |theta| <= 1 peaks at theta = 0 with value 2.
        let arc = ArcOnCircle::centered(0.0, 1.0).unwrap();
        let s = Poly::from_f64_pairs(p(), &[(1.0, 0.0), (1.0, 0.0)]);
        assert!((sup_on_arc(&s, &arc, p()).to_f64() - 2.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn random_polynomials_never_violate(
            coeffs in proptest::collection::vec((-0.7f64..0.7, -0.7f64..0.7), 1..12),
            mid in -3.0f64..3.0,
            beta in 0.3f64..2.8,
            r in 0.2f64..3.0,
        ) {
            let arc = ArcOnCircle::centered(mid, beta).unwrap();
            let s = Poly::from_f64_pairs(p(), &coeffs);
            let grid: Vec<ComplexValue> = ring(r, 16).into_iter().filter(|z| arc.distance(z) > 1e-6).collect();
            let rep = bernstein_verify(&s, &arc, &grid).unwrap();
            prop_assert_eq!(rep.violations, 0, "max violation {}", rep.max_violation);
        }
    }
}
