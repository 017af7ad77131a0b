use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Domain;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperharmonicReport {
    pub trials: usize,
    pub violations: usize,
    /// Smallest `u(c) - mean over the circle` seen; negative means a violation.
    pub worst_margin: f64,
}

/// Mean-value audit of superharmonicity: for random discs `D(c, r)` inside
/// the domain checks `u(c) >= average of u over the circle - tol`.
///
/// Centers are drawn from `[-scale, scale]^2` (scaled by the domain) and
/// radii from `(0.1, 0.9)` of the distance to the boundary. A violating disc
/// is re-averaged with up to 4096 nodes before it counts.
pub fn superharmonicity_check<D, F>(u: F, domain: &D, trials: usize, seed: u64) -> SuperharmonicReport
where
    D: Domain + ?Sized,
    F: Fn(Complex64) -> f64,
{
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 2.0 * domain.scale();
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut done = 0;
    let mut attempts = 0usize;
    while done < trials && attempts < 1000 * trials.max(1) {
        attempts += 1;
        let c = Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
        if !domain.contains(c) {
            continue;
        }
        let r = rng.gen_range(0.1..0.9) * domain.distance(c);
        if r <= 0.0 {
            continue;
        }
        done += 1;
        let center = u(c);
        let mut nodes = 256;
        let margin = loop {
            let mean = (0..nodes)
                .map(|k| u(c + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / nodes as f64)))
                .sum::<f64>()
                / nodes as f64;
            let m = center - mean;
            if m >= -TOL || nodes >= 4096 {
                break m;
            }
            nodes *= 4;
        };
        worst = worst.min(margin);
        if margin < -TOL {
            violations += 1;
        }
    }
    SuperharmonicReport { trials: done, violations, worst_margin: worst }
}
