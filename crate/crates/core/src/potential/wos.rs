//! Harmonic measure functionals by walk-on-spheres.
//!
//! Walk `i` draws from the ChaCha stream `(seed, i)` and the results are
//! reduced in walk order, so an estimate depends only on `(seed, walks)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Domain;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub functional_value: f64,
    pub walks: u64,
    /// Three sample standard deviations over `sqrt(walks)`.
    pub confidence_radius: f64,
    pub seed: u64,
    /// Walks that hit the step budget and were dropped.
    pub discarded: u64,
    /// More than 1% of walks were discarded.
    pub inconclusive: bool,
}

impl MeasureEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.functional_value - value).abs() <= self.confidence_radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WosConfig {
    /// Stopping shell, relative to the domain scale.
    pub eps_stop: f64,
    pub max_steps: u32,
}

impl Default for WosConfig {
    fn default() -> Self {
        WosConfig { eps_stop: 1e-6, max_steps: 10_000 }
    }
}

fn walk<D: Domain + ?Sized>(
    domain: &D,
    z: Complex64,
    eps: f64,
    max_steps: u32,
    rng: &mut ChaCha8Rng,
) -> Option<Complex64> {
    let mut x = z;
    for _ in 0..max_steps {
        let r = domain.distance(x);
        if r <= eps {
            return Some(domain.nearest_boundary(x));
        }
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        x += Complex64::from_polar(r, theta);
    }
    None
}

/// Runs the walks and reduces `value(exit point)` in walk order.
fn estimate<D, V>(domain: &D, z: Complex64, value: V, walks: u64, seed: u64, cfg: &WosConfig) -> Result<MeasureEstimate>
where
    D: Domain + ?Sized,
    V: Fn(Complex64) -> Result<f64>,
{
    if !domain.contains(z) {
        return Err(Error::Precondition(format!("start point {z} is not inside the domain")));
    }
    if walks == 0 {
        return Err(Error::Precondition("need at least one walk".into()));
    }
    let eps = cfg.eps_stop * domain.scale();
    let mut values = Vec::with_capacity(walks as usize);
    let mut discarded = 0u64;
    for i in 0..walks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        match walk(domain, z, eps, cfg.max_steps, &mut rng) {
            Some(zeta) => values.push(value(zeta)?),
            None => discarded += 1,
        }
    }
    let n = values.len() as f64;
    let mean = if values.is_empty() { f64::NAN } else { values.iter().sum::<f64>() / n };
    let var =
        if values.len() > 1 { values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Ok(MeasureEstimate {
        functional_value: mean,
        walks,
        confidence_radius: 3.0 * var.sqrt() / n.sqrt(),
        seed,
        discarded,
        inconclusive: discarded as f64 > 0.01 * walks as f64,
    })
}

/// Estimate of `int phi d(mu_z)` for harmonic measure of `domain` at `z`.
pub fn harmonic_measure<D, F>(domain: &D, z: Complex64, phi: F, walks: u64, seed: u64) -> Result<MeasureEstimate>
where
    D: Domain + ?Sized,
    F: Fn(Complex64) -> f64,
{
    harmonic_measure_with(domain, z, phi, walks, seed, &WosConfig::default())
}

pub fn harmonic_measure_with<D, F>(
    domain: &D,
    z: Complex64,
    phi: F,
    walks: u64,
    seed: u64,
    cfg: &WosConfig,
) -> Result<MeasureEstimate>
where
    D: Domain + ?Sized,
    F: Fn(Complex64) -> f64,
{
    estimate(domain, z, |zeta| Ok(phi(zeta)), walks, seed, cfg)
}

/// Estimate of `int phi d(mu*_z)`, where `mu*_z` weights harmonic measure by
/// `log(1/|zeta|) / log(1/|z|)`. Requires `0` outside the closure of the
/// domain and the domain inside the unit disc.
pub fn modified_measure_functional<D, F>(
    domain: &D,
    z: Complex64,
    phi: F,
    walks: u64,
    seed: u64,
) -> Result<MeasureEstimate>
where
    D: Domain + ?Sized,
    F: Fn(Complex64) -> f64,
{
    let cfg = WosConfig::default();
    let origin = Complex64::new(0.0, 0.0);
    if domain.contains(origin) || (domain.nearest_boundary(origin)).norm() <= cfg.eps_stop * domain.scale() {
        return Err(Error::Precondition("0 lies in the closure of the domain".into()));
    }
    let r = z.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Precondition(format!("need 0 < |z| < 1, got |z| = {r}")));
    }
    let gz = -r.ln();
    let tol = 1e-9;
    estimate(
        domain,
        z,
        |zeta| {
            let s = zeta.norm();
            if s >= 1.0 + tol {
                return Err(Error::Precondition(format!("walk exited at |zeta| = {s} >= 1")));
            }
            Ok(-s.min(1.0).ln() / gz * phi(zeta))
        },
        walks,
        seed,
        &cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainDesc;
    use crate::numerics::quadrature::{integrate_interval, Quadrature};
    use crate::potential::kernel::poisson_kernel_f64;

    #[test]
    fn total_mass_is_exact() {
        let m = harmonic_measure(&DomainDesc::UnitDisc, Complex64::new(0.3, -0.2), |_| 1.0, 2000, 7).unwrap();
        assert_eq!(m.functional_value, 1.0);
        assert_eq!(m.confidence_radius, 0.0);
    }

    #[test]
    fn symmetry_at_origin() {
        let m = harmonic_measure(&DomainDesc::UnitDisc, Complex64::new(0.0, 0.0), |z| z.re, 20_000, 1).unwrap();
        assert!(m.contains(0.0), "{m:?}");
    }

    #[test]
    fn matches_poisson_integral() {
        let z = Complex64::new(0.5, 0.0);
        let phi = |zeta: Complex64| if zeta.re > 0.0 { 1.0 } else { 0.0 };
        let q = Quadrature { abs_tol: 1e-12, ..Quadrature::default() };
        let half = std::f64::consts::FRAC_PI_2;
        let exact = integrate_interval(|t| poisson_kernel_f64(z, Complex64::from_polar(1.0, t)), -half, half, &q)
            .estimate
            / std::f64::consts::TAU;
        let m = harmonic_measure(&DomainDesc::UnitDisc, z, phi, 100_000, 11).unwrap();
        assert!(m.contains(exact), "{m:?} vs {exact}");
        assert!(!m.inconclusive);
    }

    #[test]
    fn deterministic() {
        let d = DomainDesc::Disc { center: Complex64::new(0.75, 0.0), radius: 0.25 };
        let a = harmonic_measure(&d, Complex64::new(0.7, 0.05), |z| z.im, 500, 3).unwrap();
        let b = harmonic_measure(&d, Complex64::new(0.7, 0.05), |z| z.im, 500, 3).unwrap();
        assert_eq!(a.functional_value.to_bits(), b.functional_value.to_bits());
    }

    #[test]
    fn modified_measure_mass_and_cross_check() {
        let d = DomainDesc::Disc { center: Complex64::new(0.75, 0.0), radius: 0.25 };
        let z = Complex64::new(0.8, 0.05);
        let mass = modified_measure_functional(&d, z, |_| 1.0, 100_000, 5).unwrap();
        assert!(mass.contains(1.0), "{mass:?}");
        let g = |zeta: Complex64| -zeta.norm().ln();
        let weighted = modified_measure_functional(&d, z, g, 20_000, 9).unwrap();
        let plain = harmonic_measure(&d, z, |zeta| g(zeta).powi(2), 20_000, 10).unwrap();
        let scale = -z.norm().ln();
        let diff = (weighted.functional_value - plain.functional_value / scale).abs();
        assert!(diff <= weighted.confidence_radius + plain.confidence_radius / scale);
        let pos = modified_measure_functional(&d, z, |zeta| zeta.im.abs(), 2000, 2).unwrap();
        assert!(pos.functional_value >= -pos.confidence_radius);
    }

    #[test]
    fn modified_measure_preconditions() {
        assert!(modified_measure_functional(&DomainDesc::UnitDisc, Complex64::new(0.5, 0.0), |_| 1.0, 10, 0).is_err());
        let touching = DomainDesc::Disc { center: Complex64::new(0.25, 0.0), radius: 0.25 };
        assert!(modified_measure_functional(&touching, Complex64::new(0.25, 0.0), |_| 1.0, 10, 0).is_err());
        let outside = DomainDesc::Disc { center: Complex64::new(1.0, 0.0), radius: 0.25 };
        assert!(modified_measure_functional(&outside, Complex64::new(0.9, 0.0), |_| 1.0, 1000, 0).is_err());
    }
}
