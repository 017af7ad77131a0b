//! Green function with pole at infinity for the complement of a closed arc
//! of the unit circle, by explicit conformal maps:
//!
//! 1. rotate so the arc is `{e^{i theta} : |theta| <= beta}`;
//! 2. `w = i (1 - z) / ((1 + z) tan(beta/2))` sends the arc onto `[-1, 1]`;
//! 3. `u = w + sqrt(w^2 - 1)` with `|u| > 1` sends the slit plane onto the
//!    exterior of the unit disc;
//! 4. `G = log |(conj(a) u - 1) / (u - a)|` with `a` the image of infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, Precision, Real};

/// Closed arc `{e^{i theta} : theta_lo <= theta <= theta_hi}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcOnCircle {
    pub theta_lo: f64,
    pub theta_hi: f64,
}

/// Ties between the two square-root branches closer than this are refused.
pub const BRANCH_TIE: f64 = 1e-30;

impl ArcOnCircle {
    pub fn new(theta_lo: f64, theta_hi: f64) -> Result<Self> {
        let span = theta_hi - theta_lo;
        if !(span > 0.0 && span < std::f64::consts::TAU) {
            return Err(Error::Precondition(format!("arc span {span} must lie in (0, 2 pi)")));
        }
        Ok(ArcOnCircle { theta_lo, theta_hi })
    }

    /// Arc of half-angle `beta` centered at angle `mid`.
    pub fn centered(mid: f64, beta: f64) -> Result<Self> {
        ArcOnCircle::new(mid - beta, mid + beta)
    }

    pub fn half_angle(&self) -> f64 {
        0.5 * (self.theta_hi - self.theta_lo)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.theta_hi + self.theta_lo)
    }

    /// Logarithmic capacity `sin(beta/2)`.
    pub fn capacity(&self) -> f64 {
        (0.5 * self.half_angle()).sin()
    }

    /// `n` equally spaced points on the arc, endpoints included.
    pub fn points(&self, n: usize, prec: Precision) -> Vec<ComplexValue> {
        let n = n.max(2);
        (0..n)
            .map(|j| {
                let t = prec.real(self.theta_lo) + prec.real(self.theta_hi - self.theta_lo) * j as u32 / (n - 1) as u32;
                ComplexValue::unit(&t)
            })
            .collect()
    }

    /// Distance from `z` to the arc.
    pub fn distance(&self, z: &ComplexValue) -> Real {
        let p = z.prec();
        let beta = Real::with_val(p, self.half_angle());
        let rot = z * &ComplexValue::unit(&-Real::with_val(p, self.mid()));
        let phi = rot.arg();
        if Real::with_val(p, phi.abs_ref()) <= beta {
            Real::with_val(p, rot.abs() - 1u32).abs()
        } else {
            let e1 = ComplexValue::unit(&beta);
            let e2 = e1.conj();
            let (d1, d2) = ((&rot - &e1).abs(), (&rot - &e2).abs());
            d1.min(&d2)
        }
    }
}

struct ArcMap {
    prec: u32,
    rot: ComplexValue,
    tan_half: Real,
    a: ComplexValue,
}

impl ArcMap {
    fn new(arc: &ArcOnCircle, prec: u32) -> Self {
        let beta = Real::with_val(prec, arc.half_angle());
        let tan_half = Real::with_val(prec, &beta / 2u32).tan();
        let rot = ComplexValue::unit(&-Real::with_val(prec, arc.mid()));
        // Image of infinity: w = -i cot(beta/2), then the exterior branch.
        let w_inf = ComplexValue::new(Real::with_val(prec, 0), -tan_half.clone().recip());
        let a = exterior_branch(&w_inf).expect("w_inf is off the slit");
        ArcMap { prec, rot, tan_half, a }
    }

    fn green(&self, z: &ComplexValue) -> Result<Real> {
        let p = self.prec;
        let zr = z * &self.rot;
        let one = ComplexValue::one(Precision::new(p)?);
        let den = &one + &zr;
        if den.is_zero() {
            // z = -1 goes to w = infinity, where G = log|a|.
            return Ok(self.a.abs().ln());
        }
        let i = ComplexValue::from_f64(Precision::new(p)?, 0.0, 1.0);
        let w = (&i * &(&one - &zr)) / den.scale(&self.tan_half);
        let u = exterior_branch(&w)?;
        let num = &(&self.a.conj() * &u) - &one;
        let den = &u - &self.a;
        Ok((num.abs() / den.abs()).ln())
    }
}

/// `w + sqrt(w^2 - 1)` on the branch with modulus above 1.
fn exterior_branch(w: &ComplexValue) -> Result<ComplexValue> {
    let one = ComplexValue::one(w.precision());
    let s = (&(w * w) - &one).sqrt();
    let (u1, u2) = (w + &s, w - &s);
    let (m1, m2) = (u1.abs(), u2.abs());
    let gap = Real::with_val(w.prec(), &m1 - &m2).abs();
    if gap < BRANCH_TIE {
        return Err(Error::BranchTie(gap.to_f64()));
    }
    Ok(if m1 > m2 { u1 } else { u2 })
}

/// Accuracy of the Green function from the explicit maps at `prec`: the
/// square root near the arc endpoints costs half the bits.
pub fn map_tolerance(prec: Precision) -> f64 {
    (-(prec.bits() as f64) / 2.0).exp2()
}

/// `G(z, infinity)` for the complement of `arc`; 0 on the arc itself
/// (points within `BRANCH_TIE` of it).
pub fn green_arc_complement(z: &ComplexValue, arc: &ArcOnCircle) -> Result<Real> {
    let p = z.prec().max(crate::numerics::MIN_PRECISION);
    if arc.distance(z) <= BRANCH_TIE {
        return Ok(Real::with_val(p, 0));
    }
    ArcMap::new(arc, p).green(z)
}

/// Evaluates the Green function at many points, building the map once.
pub fn green_arc_many(points: &[ComplexValue], arc: &ArcOnCircle, prec: Precision) -> Result<Vec<Real>> {
    let map = ArcMap::new(arc, prec.bits());
    points
        .iter()
        .map(|z| if arc.distance(z) <= BRANCH_TIE { Ok(Real::with_val(prec.bits(), 0)) } else { map.green(z) })
        .collect()
}

/// `-1/2` for `|z| < 1 - 1/j`, else `G(z, infinity) / log(1/|z|)`.
pub fn psi_j_barrier(z: &ComplexValue, j: u32, arc: &ArcOnCircle) -> Result<Real> {
    if j < 2 {
        return Err(Error::Precondition("psi_j needs j >= 2".into()));
    }
    let p = z.prec();
    let r = z.abs();
    if r >= 1u32 {
        return Err(Error::Domain("psi_j needs |z| < 1".into()));
    }
    let edge = Real::with_val(p, 1u32) - Real::with_val(p, 1u32) / j;
    if r < edge {
        return Ok(Real::with_val(p, -0.5));
    }
    let g = green_arc_complement(z, arc)?;
    Ok(g / (-r.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::from_f64(p(), re, im)
    }

    #[test]
    fn zero_on_arc_and_positive_off_it() {
        let arc = ArcOnCircle::centered(0.3, 0.8).unwrap();
        for t in [-0.5, 0.0, 0.3, 1.1] {
            let z = ComplexValue::unit(&p().real(t));
            assert_eq!(green_arc_complement(&z, &arc).unwrap(), 0);
        }
        for z in [c(0.0, 0.0), c(-1.0, 0.0), c(2.0, 1.0), c(0.9, 0.3)] {
            assert!(green_arc_complement(&z, &arc).unwrap() > 0);
        }
    }

    #[test]
    fn capacity_asymptote() {
        // Oracle: the capacity of an arc of half-angle beta is sin(beta/2).
        for beta in [std::f64::consts::PI / 6.0, 1.0, 2.5] {
            let arc = ArcOnCircle::centered(0.7, beta).unwrap();
            let big = 1e6;
            let g = green_arc_complement(&c(0.0, big), &arc).unwrap().to_f64();
            assert!((g - big.ln() - (1.0 / (beta / 2.0).sin()).ln()).abs() < 1e-3, "beta {beta}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let arc = ArcOnCircle::centered(0.0, 1.2).unwrap();
        for (x, y) in [(0.2, 0.4), (1.5, -0.7), (-3.0, 0.1)] {
            let a = green_arc_complement(&c(x, y), &arc).unwrap();
            let b = green_arc_complement(&c(x, -y), &arc).unwrap();
            assert!((a - b).abs() < 1e-60);
        }
    }

    #[test]
    fn decreases_along_normal() {
        let arc = ArcOnCircle::centered(0.0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=40 {
            let r = 1.0 + 0.5 / k as f64;
            let g =
                green_arc_complement(&ComplexValue::unit(&p().real(0.4)).scale(&p().real(r)), &arc).unwrap().to_f64();
            assert!(g > 0.0 && g < prev);
            prev = g;
        }
    }

    #[test]
    fn minus_one_is_the_image_of_infinity_slot() {
        let arc = ArcOnCircle::centered(0.0, 0.9).unwrap();
        let at = green_arc_complement(&c(-1.0, 0.0), &arc).unwrap().to_f64();
        let near = green_arc_complement(&c(-1.0, 1e-20), &arc).unwrap().to_f64();
        assert!((at - near).abs() < 1e-15);
    }

    #[test]
    fn full_circle_limit() {
        // Oracle: as the arc closes up, G tends to log|z| outside the circle.
        let arc = ArcOnCircle::centered(0.0, std::f64::consts::PI - 1e-6).unwrap();
        let g = green_arc_complement(&c(2.0, 0.0), &arc).unwrap().to_f64();
        assert!((g - 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn psi_barrier() {
        let arc = ArcOnCircle::centered(0.0, 0.5).unwrap();
        assert_eq!(psi_j_barrier(&c(0.3, 0.0), 2, &arc).unwrap(), -0.5);
        let z = c(0.0, 0.95);
        assert!(psi_j_barrier(&z, 2, &arc).unwrap() > 0);
        assert_eq!(psi_j_barrier(&z, 1000, &arc).unwrap(), -0.5);
        // One-sided values at the switch radius 1 - 1/j.
        let j = 4;
        let below = ComplexValue::from_real(p().real(0.75) - p().real(1e-30));
        assert_eq!(psi_j_barrier(&below, j, &arc).unwrap(), -0.5);
        let at = ComplexValue::from_real(p().real(0.75));
        let expect = green_arc_complement(&at, &arc).unwrap() / -p().real(0.75).ln();
        assert_eq!(psi_j_barrier(&at, j, &arc).unwrap(), expect);
        assert!(psi_j_barrier(&c(0.1, 0.0), 1, &arc).is_err());
    }

    proptest! {
        #[test]
        fn dominates_log_modulus(r in 1.01f64..50.0, t in 0.0f64..6.3, beta in 0.1f64..3.0) {
            let arc = ArcOnCircle::centered(0.0, beta).unwrap();
            let z = ComplexValue::unit(&p().real(t)).scale(&p().real(r));
            let g = green_arc_complement(&z, &arc).unwrap().to_f64();
            prop_assert!(g >= r.ln() - 1e-12);
        }
    }
}
