use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, Precision, Real};

/// Stolz-type region `{z : |z - zeta| < alpha (1 - |z|) < alpha t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproachRegion {
    pub zeta: ComplexValue,
    pub alpha: Real,
    pub t: Real,
}

/// f64 parameters of an approach region, for configs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionParams {
    /// Boundary point as an angle.
    pub theta: f64,
    pub alpha: f64,
    pub t: f64,
}

impl ApproachRegion {
    pub fn new(zeta: ComplexValue, alpha: Real, t: Real) -> Result<Self> {
        let guard = Real::with_val(zeta.prec(), 1) >> (zeta.prec() as i32 - 8).max(8);
        let dev = Real::with_val(zeta.prec(), zeta.abs() - 1u32).abs();
        if dev > guard {
            return Err(Error::Precondition(format!("|zeta| = {} is not 1", zeta.abs().to_f64())));
        }
        if alpha <= 1u32 {
            return Err(Error::Precondition("alpha must exceed 1".into()));
        }
        if t <= 0u32 || t > 1u32 {
            return Err(Error::Precondition("t must lie in (0, 1]".into()));
        }
        Ok(ApproachRegion { zeta, alpha, t })
    }

    pub fn from_params(p: RegionParams, prec: Precision) -> Result<Self> {
        ApproachRegion::new(ComplexValue::unit(&prec.real(p.theta)), prec.real(p.alpha), prec.real(p.t))
    }

    pub fn precision(&self) -> Precision {
        self.zeta.precision()
    }

    /// Half-width of the stratum `1 - |z| = s` as seen from the origin.
    fn half_angle(&self, s: &Real) -> Real {
        let p = self.zeta.prec();
        let a2 = Real::with_val(p, &self.alpha * &self.alpha) - 1u32;
        let s2 = Real::with_val(p, s * s);
        let one_minus = Real::with_val(p, 1u32 - s);
        let c = Real::with_val(p, 1u32 - a2 * s2 / (one_minus * 2u32));
        if c <= -1i32 {
            self.precision().pi()
        } else {
            c.acos()
        }
    }
}

pub fn region_membership(r: &ApproachRegion, z: &ComplexValue) -> bool {
    let p = r.zeta.prec().max(z.prec());
    let gap = Real::with_val(p, 1u32 - z.abs());
    let dist = (z - &r.zeta).abs();
    let mid = Real::with_val(p, &r.alpha * &gap);
    let top = Real::with_val(p, &r.alpha * &r.t);
    dist < mid && mid < top
}

/// Points of the region with `1 - |z| = t 2^{-m}` for `m = 1..=depth_levels`,
/// `per_level` per stratum, spread over the open angular window of the
/// stratum. Samples for smaller depth are a prefix of those for larger depth.
pub fn region_samples(r: &ApproachRegion, depth_levels: usize, per_level: usize) -> Vec<ComplexValue> {
    let prec = r.precision();
    let mut out = Vec::with_capacity(depth_levels * per_level);
    for m in 1..=depth_levels {
        out.extend(stratum(r, m, per_level, prec));
    }
    out
}

pub(crate) fn stratum(r: &ApproachRegion, m: usize, per_level: usize, prec: Precision) -> Vec<ComplexValue> {
    let p = prec.bits();
    let s = Real::with_val(p, &r.t) >> m as i32;
    let radius = Real::with_val(p, 1u32 - &s);
    // Stay a little inside the window so rounding never puts a sample on its edge.
    let phi_max = r.half_angle(&s) * prec.real(0.98);
    let base = r.zeta.arg();
    (0..per_level)
        .map(|j| {
            let frac = Real::with_val(p, (2 * j + 1) as u32) / per_level as u32 - 1u32;
            let theta = Real::with_val(p, &phi_max * &frac) + &base;
            ComplexValue::from_polar(&radius, &theta)
        })
        .collect()
}

/// The disc `{P(., zeta) > c}`: center `zeta c/(c+1)`, radius `1/(c+1)`.
pub fn tangent_disc(zeta: &ComplexValue, c: &Real) -> Result<(ComplexValue, Real)> {
    if *c <= 0u32 {
        return Err(Error::Precondition("tangent disc needs c > 0".into()));
    }
    let p = zeta.prec().max(c.prec());
    let denom = Real::with_val(p, c + 1u32);
    let center = zeta.scale(&Real::with_val(p, c / &denom));
    Ok((center, denom.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::kernel::poisson_kernel;
    use proptest::prelude::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn region(theta: f64, alpha: f64, t: f64) -> ApproachRegion {
        ApproachRegion::from_params(RegionParams { theta, alpha, t }, p()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let r = region(0.0, 2.0, 1.0);
        assert!(!region_membership(&r, &ComplexValue::zero(p())));
        assert!(region_membership(&r, &ComplexValue::from_f64(p(), 0.5, 0.0)));
        let shallow = region(0.0, 2.0, 0.1);
        assert!(!region_membership(&shallow, &ComplexValue::from_f64(p(), 0.5, 0.0)));
    }

    #[test]
    fn samples_lie_on_strata() {
        let r = region(0.0, 2.0, 1.0);
        let pts = region_samples(&r, 3, 7);
        assert_eq!(pts.len(), 21);
        for (i, z) in pts.iter().enumerate() {
            assert!(region_membership(&r, z));
            let m = i / 7 + 1;
            let gap = 1.0 - z.abs().to_f64();
            assert!((gap - 0.5f64.powi(m as i32)).abs() < 1e-15);
        }
        assert_eq!(region_samples(&r, 1, 1).len(), 1);
    }

    #[test]
    fn samples_are_nested() {
        let r = region(1.0, 3.0, 0.5);
        let small = region_samples(&r, 2, 5);
        let big = region_samples(&r, 4, 5);
        assert_eq!(&big[..small.len()], &small[..]);
    }

    #[test]
    fn tangent_disc_examples() {
        let one = ComplexValue::one(p());
        let (c, r) = tangent_disc(&one, &p().real(1.0)).unwrap();
        assert_eq!(c.to_c64().re, 0.5);
        assert_eq!(r.to_f64(), 0.5);
        let (c, r) = tangent_disc(&one, &p().real(1e-12)).unwrap();
        assert!(c.abs().to_f64() < 1e-11 && (r.to_f64() - 1.0).abs() < 1e-11);
        assert!(tangent_disc(&one, &p().real(0.0)).is_err());
    }

    #[test]
    fn tangent_disc_is_poisson_level_set() {
        // Oracle: on the real axis P(x, 1) = (1 + x)/(1 - x), which equals c at
        // x = (c - 1)/(c + 1), the left end of the disc.
        for c in [0.5, 1.0, 4.0] {
            let zeta = ComplexValue::unit(&p().real(0.7));
            let (center, radius) = tangent_disc(&zeta, &p().real(c)).unwrap();
            let left = (c - 1.0) / (c + 1.0);
            let (c1, r1) = tangent_disc(&ComplexValue::one(p()), &p().real(c)).unwrap();
            assert!((c1.re().to_f64() - r1.to_f64() - left).abs() < 1e-15);
            for j in 1..1000 {
                let theta = p().real(std::f64::consts::TAU * j as f64 / 1000.0) + zeta.arg();
                let z = &center + &ComplexValue::from_polar(&radius, &theta);
                let v = poisson_kernel(&z, &zeta).unwrap().to_f64();
                assert!((v - c).abs() < 1e-10, "c={c} j={j}");
            }
        }
    }

    proptest! {
        #[test]
        fn samples_always_members(theta in 0.0f64..std::f64::consts::TAU, alpha in 1.05f64..6.0, t in 0.01f64..1.0, depth in 1usize..8, per in 1usize..12) {
            let r = region(theta, alpha, t);
            for z in region_samples(&r, depth, per) {
                prop_assert!(region_membership(&r, &z));
            }
        }

        #[test]
        fn tangency(theta in 0.0f64..std::f64::consts::TAU, c in 0.01f64..100.0) {
            let zeta = ComplexValue::unit(&p().real(theta));
            let (center, radius) = tangent_disc(&zeta, &p().real(c)).unwrap();
            let touch = &center + &zeta.scale(&radius);
            prop_assert!((&touch - &zeta).abs().to_f64() < 1e-70);
        }
    }
}
