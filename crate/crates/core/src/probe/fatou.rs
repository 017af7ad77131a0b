//! Non-tangential limit probe: value spreads over the strata of an approach
//! region, with a Richardson-extrapolated limit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::region::stratum;
use crate::geometry::ApproachRegion;

use super::Evaluable;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatouConfig {
    /// Spreads and mean increments must fall below this.
    pub tol: f64,
    /// Number of trailing strata that must satisfy the test.
    pub window: usize,
    pub per_level: usize,
}

impl Default for FatouConfig {
    fn default() -> Self {
        FatouConfig { tol: 1e-6, window: 3, per_level: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FatouVerdict {
    Convergent { limit: [f64; 2], spread: f64 },
    Divergent { spread: f64 },
}

impl FatouVerdict {
    pub fn is_convergent(&self) -> bool {
        matches!(self, FatouVerdict::Convergent { .. })
    }
}

pub fn fatou_probe<F: Evaluable + ?Sized>(f: &F, r: &ApproachRegion, depth: usize) -> FatouVerdict {
    fatou_probe_with(f, r, depth, &FatouConfig::default())
}

/// Stratum `m` has `1 - |z| = t 2^{-m}`. Convergent when the last
/// `cfg.window` spreads are below `cfg.tol` and non-increasing and the
/// stratum means move by less than `cfg.tol`.
pub fn fatou_probe_with<F: Evaluable + ?Sized>(
    f: &F,
    r: &ApproachRegion,
    depth: usize,
    cfg: &FatouConfig,
) -> FatouVerdict {
    let prec = r.precision();
    let mut spreads = Vec::with_capacity(depth);
    let mut means = Vec::with_capacity(depth);
    for m in 1..=depth {
        let vals: Vec<Complex64> = stratum(r, m, cfg.per_level, prec).iter().map(|z| f.eval_at(z).to_c64()).collect();
        spreads.push(diameter(&vals));
        means.push(vals.iter().sum::<Complex64>() / vals.len().max(1) as f64);
    }
    let last = spreads.last().copied().unwrap_or(f64::INFINITY);
    let w = cfg.window.max(1);
    if depth < w + 1 {
        return FatouVerdict::Divergent { spread: last };
    }
    let tail = &spreads[depth - w..];
    let small = tail.iter().all(|s| *s < cfg.tol);
    let monotone = tail.windows(2).all(|p| p[1] <= p[0]);
    let cauchy = means[depth - w - 1..].windows(2).all(|p| (p[1] - p[0]).norm() < cfg.tol);
    if small && monotone && cauchy {
        // The stratum depth halves each level, so a first-order error in the
        // depth cancels in 2 mean_m - mean_{m-1}.
        let limit = means[depth - 1] * 2.0 - means[depth - 2];
        FatouVerdict::Convergent { limit: [limit.re, limit.im], spread: last }
    } else {
        FatouVerdict::Divergent { spread: last }
    }
}

/// Largest pairwise distance; infinite if any value is not finite.
fn diameter(vals: &[Complex64]) -> f64 {
    if vals.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    let mut d: f64 = 0.0;
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}
