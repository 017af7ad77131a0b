//! Minimal thinness at 1 of `{Re z > 1 - psi(|Im z|)}`, decided through the
//! convergence of `int_0^1 t^{-2} psi(t) dt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{dyadic_panels, Quadrature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThinVerdict {
    MinimallyThin,
    NotMinimallyThin,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinThinReport {
    pub verdict: ThinVerdict,
    /// `I_m = int_{2^{-m}}^1 t^{-2} psi(t) dt`, `m = 1..=levels`.
    pub partials: Vec<f64>,
    /// Least-squares slope of `log2` of the panel integrals over the last half.
    pub decay_slope: f64,
    /// Least-squares slope of `I_m` against `m` over the last half.
    pub growth_slope: f64,
    /// Geometric extrapolation of `I_m` at the last level, when it exists.
    pub limit: Option<f64>,
}

pub const DEFAULT_LEVELS: usize = 40;
/// Panel integrals must shrink by at least this much per level (in `log2`)
/// before the sequence counts as convergent.
pub const DECAY_SLOPE_TOL: f64 = 0.05;

pub fn minthin_psi_test<F: Fn(f64) -> f64>(psi: F, q: &Quadrature) -> Result<MinThinReport> {
    minthin_psi_test_with_levels(psi, q, DEFAULT_LEVELS)
}

pub fn minthin_psi_test_with_levels<F: Fn(f64) -> f64>(psi: F, q: &Quadrature, levels: usize) -> Result<MinThinReport> {
    validate_psi(&psi)?;
    let levels = levels.max(4);
    let panels = dyadic_panels(|t| psi(t) / (t * t), q, levels);
    let j: Vec<f64> = panels.iter().map(|p| p.estimate).collect();
    let partials: Vec<f64> = j
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let tail = levels / 2..levels;
    let xs: Vec<f64> = tail.clone().map(|m| (m + 1) as f64).collect();

    let all_zero = tail.clone().all(|m| j[m] == 0.0);
    let decay_slope = if all_zero {
        f64::NEG_INFINITY
    } else if tail.clone().any(|m| j[m] <= 0.0) {
        f64::NAN
    } else {
        slope(&xs, &tail.clone().map(|m| j[m].log2()).collect::<Vec<_>>())
    };
    let growth_slope = slope(&xs, &partials[tail.clone()]);

    // Extrapolated limits from the geometric ratio of the last panels.
    let extrapolate = |m: usize| -> Option<f64> {
        if j[m] == 0.0 {
            return Some(partials[m]);
        }
        let r = j[m] / j[m - 1];
        (r > 0.0 && r < 1.0).then(|| partials[m] + j[m] * r / (1.0 - r))
    };
    let limit = extrapolate(levels - 1);
    let cauchy = match (limit, extrapolate(levels / 2)) {
        (Some(a), Some(b)) => (a - b).abs() <= q.abs_tol.max(1e-12 * a.abs()),
        _ => false,
    };

    let verdict = if decay_slope < -DECAY_SLOPE_TOL && cauchy {
        ThinVerdict::MinimallyThin
    } else if decay_slope >= -DECAY_SLOPE_TOL && growth_slope > q.abs_tol {
        ThinVerdict::NotMinimallyThin
    } else {
        ThinVerdict::Inconclusive
    };
    Ok(MinThinReport { verdict, partials, decay_slope, growth_slope, limit })
}

fn validate_psi<F: Fn(f64) -> f64>(psi: &F) -> Result<()> {
    const N: usize = 1024;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=N {
        let t = i as f64 / N as f64;
        let v = psi(t);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Precondition(format!("psi({t}) = {v} is outside [0, 1]")));
        }
        if v < prev {
            return Err(Error::Precondition(format!("psi decreases near t = {t}")));
        }
        prev = v;
    }
    Ok(())
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(a: f64) -> MinThinReport {
        minthin_psi_test(|t: f64| t.powf(a), &Quadrature::default()).unwrap()
    }

    #[test]
    fn power_profiles() {
        let thin = verdict(2.0);
        assert_eq!(thin.verdict, ThinVerdict::MinimallyThin);
        assert!((thin.limit.unwrap() - 1.0).abs() < 1e-7);
        // Closed form: int_0^1 t^{-1/2} dt = 2.
        let r = verdict(1.5);
        assert_eq!(r.verdict, ThinVerdict::MinimallyThin);
        assert!((r.limit.unwrap() - 2.0).abs() < 1e-6);
        let harmonic = verdict(1.0);
        assert_eq!(harmonic.verdict, ThinVerdict::NotMinimallyThin);
        // Each dyadic panel of dt/t contributes log 2.
        let inc = harmonic.partials[20] - harmonic.partials[19];
        assert!((inc - 2f64.ln()).abs() < 1e-9);
        assert_eq!(verdict(0.5).verdict, ThinVerdict::NotMinimallyThin);
    }

    #[test]
    fn zero_profile_is_thin() {
        let r = minthin_psi_test(|_| 0.0, &Quadrature::default()).unwrap();
        assert_eq!(r.verdict, ThinVerdict::MinimallyThin);
    }

    #[test]
    fn bad_profiles_rejected() {
        assert!(minthin_psi_test(|t: f64| 1.0 - t, &Quadrature::default()).is_err());
        assert!(minthin_psi_test(|t: f64| 2.0 * t, &Quadrature::default()).is_err());
    }

    #[test]
    fn borderline_log_profile_not_thin() {
        // t / log(e/t) still diverges, slowly.
        let psi = |t: f64| if t == 0.0 { 0.0 } else { t / (1.0 - t.ln()) };
        let r = minthin_psi_test(psi, &Quadrature::default()).unwrap();
        assert_ne!(r.verdict, ThinVerdict::MinimallyThin);
    }
}
