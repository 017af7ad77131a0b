use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, Real};

/// `P(z, zeta) = (1 - |z|^2) / |z - zeta|^2`.
pub fn poisson_kernel(z: &ComplexValue, zeta: &ComplexValue) -> Result<Real> {
    let p = z.prec().max(zeta.prec());
    let num = Real::with_val(p, 1u32 - z.norm_sqr());
    if num <= 0u32 {
        return Err(Error::Domain(format!("Poisson kernel needs |z| < 1, got {z}")));
    }
    let den = (z - zeta).norm_sqr();
    if den.is_zero() {
        return Err(Error::Domain("Poisson kernel evaluated at its pole".into()));
    }
    Ok(num / den)
}

pub fn poisson_kernel_f64(z: Complex64, zeta: Complex64) -> f64 {
    (1.0 - z.norm_sqr()) / (z - zeta).norm_sqr()
}

/// Green function of the disc with pole at 0: `log(1/|z|)`.
pub fn green_disc(z: &ComplexValue) -> Result<Real> {
    if z.is_zero() {
        return Err(Error::Domain("Green function evaluated at its pole".into()));
    }
    let r = z.abs();
    if r >= 1u32 {
        return Err(Error::Domain(format!("Green function needs |z| < 1, got {}", r.to_f64())));
    }
    Ok(-r.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate_interval, Quadrature};
    use crate::numerics::Precision;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::from_f64(Precision::default(), re, im)
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson_kernel(&c(0.0, 0.0), &c(0.0, 1.0)).unwrap(), 1);
        assert!((poisson_kernel(&c(0.5, 0.0), &c(1.0, 0.0)).unwrap().to_f64() - 3.0).abs() < 1e-60);
        assert!((poisson_kernel(&c(0.9, 0.0), &c(1.0, 0.0)).unwrap().to_f64() - 19.0).abs() < 1e-12);
        assert!(poisson_kernel(&c(1.0, 0.0), &c(0.0, 1.0)).is_err());
    }

    #[test]
    fn green_examples() {
        let p = Precision::default();
        let inv_e = ComplexValue::from_real(p.real(1.0).exp().recip());
        assert!((green_disc(&inv_e).unwrap().to_f64() - 1.0).abs() < 1e-70);
        assert!((green_disc(&c(0.0, 0.5)).unwrap().to_f64() - 2f64.ln()).abs() < 1e-15);
        assert!(green_disc(&c(0.0, 0.0)).is_err());
        assert!(green_disc(&c(1.0, 0.0)).is_err());
        let near = green_disc(&c(1.0 - 1e-12, 0.0)).unwrap().to_f64();
        assert!(near > 0.0 && near < 2e-12);
    }

    proptest! {
        #[test]
        fn poisson_positive_with_unit_mass(r in 0.0f64..0.95, phi in 0.0f64..6.3) {
            let z = Complex64::from_polar(r, phi);
            let q = Quadrature { abs_tol: 1e-10, ..Quadrature::default() };
            let est = integrate_interval(
                |t| poisson_kernel_f64(z, Complex64::from_polar(1.0, t)),
                0.0,
                std::f64::consts::TAU,
                &q,
            );
            prop_assert!(poisson_kernel_f64(z, Complex64::new(1.0, 0.0)) > 0.0);
            prop_assert!((est.estimate / std::f64::consts::TAU - 1.0).abs() <= 1e-9);
        }
    }
}
