//! One-dimensional quadrature on finite intervals and on `(0, 1]` with a
//! possible singularity at the origin, handled by dyadic panels
//! `[2^{-m-1}, 2^{-m}]`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadRule {
    /// Composite midpoint, doubled until successive estimates agree.
    MidpointDyadic,
    /// Adaptive Gauss-Kronrod (7/15) bisection.
    AdaptiveSubdivision,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub rule: QuadRule,
    pub abs_tol: f64,
    /// Bound on bisection depth per panel and on the number of dyadic panels.
    pub max_refinements: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { rule: QuadRule::AdaptiveSubdivision, abs_tol: 1e-7, max_refinements: 60 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub estimate: f64,
    pub bound: f64,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> QuadEstimate {
    let (k, err) = kronrod(f, a, b);
    if err <= tol || !err.is_finite() && !k.is_finite() {
        return QuadEstimate { estimate: k, bound: err, converged: err.is_finite() };
    }
    if depth == 0 {
        return QuadEstimate { estimate: k, bound: err, converged: false };
    }
    let m = 0.5 * (a + b);
    let l = adaptive(f, a, m, 0.5 * tol, depth - 1);
    let r = adaptive(f, m, b, 0.5 * tol, depth - 1);
    QuadEstimate { estimate: l.estimate + r.estimate, bound: l.bound + r.bound, converged: l.converged && r.converged }
}

fn midpoint<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_doublings: u32) -> QuadEstimate {
    let composite = |n: usize| {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    let mut n = 4;
    let mut prev = composite(n);
    for _ in 0..max_doublings.min(24) {
        n *= 2;
        let cur = composite(n);
        // Richardson: midpoint error is O(h^2).
        let err = (cur - prev).abs() / 3.0;
        let extrapolated = cur + (cur - prev) / 3.0;
        if err <= tol {
            return QuadEstimate { estimate: extrapolated, bound: err, converged: true };
        }
        prev = cur;
    }
    QuadEstimate { estimate: prev, bound: f64::INFINITY, converged: false }
}

/// Integral of `f` over the finite interval `[a, b]`.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: &Quadrature) -> QuadEstimate {
    match q.rule {
        QuadRule::AdaptiveSubdivision => adaptive(&f, a, b, q.abs_tol, q.max_refinements.min(40)),
        QuadRule::MidpointDyadic => midpoint(&f, a, b, q.abs_tol, q.max_refinements),
    }
}

/// Integrals over the dyadic panels `[2^{-m-1}, 2^{-m}]`, `m = 0..levels`.
pub fn dyadic_panels<F: Fn(f64) -> f64>(f: F, q: &Quadrature, levels: usize) -> Vec<QuadEstimate> {
    (0..levels)
        .map(|m| {
            let hi = 0.5f64.powi(m as i32);
            let panel_tol = q.abs_tol * 0.5f64.powi(m.min(40) as i32 + 2);
            integrate_interval(&f, 0.5 * hi, hi, &Quadrature { abs_tol: panel_tol, ..*q })
        })
        .collect()
}

/// Integral of `f` over `(0, 1]`, refining dyadically toward 0.
///
/// Panels are summed until a geometric extrapolation of the remaining tail
/// plus the accumulated panel error falls below `abs_tol`. If the panel
/// integrals stop decaying the result is returned with `converged = false`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, q: &Quadrature) -> QuadEstimate {
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut panels: Vec<f64> = Vec::new();
    let mut all_converged = true;
    for m in 0..q.max_refinements.max(3) as usize {
        let hi = 0.5f64.powi(m as i32);
        let panel_tol = q.abs_tol * 0.5f64.powi(m.min(40) as i32 + 2);
        let est = integrate_interval(&f, 0.5 * hi, hi, &Quadrature { abs_tol: panel_tol, ..*q });
        sum += est.estimate;
        err += est.bound;
        all_converged &= est.converged;
        panels.push(est.estimate);
        if let Some(tail) = geometric_tail(&panels) {
            if tail.abs() + err <= q.abs_tol {
                return QuadEstimate { estimate: sum + tail, bound: err + tail.abs(), converged: all_converged };
            }
        }
    }
    QuadEstimate { estimate: sum, bound: f64::INFINITY, converged: false }
}

/// Remaining sum of a panel sequence that decays geometrically, using the
/// slower of the last two ratios.
fn geometric_tail(panels: &[f64]) -> Option<f64> {
    let n = panels.len();
    if n < 3 {
        return None;
    }
    let (a, b, c) = (panels[n - 3], panels[n - 2], panels[n - 1]);
    if c == 0.0 && b == 0.0 {
        return Some(0.0);
    }
    if a == 0.0 || b == 0.0 {
        return None;
    }
    let r1 = b / a;
    let r2 = c / b;
    if !(0.0..0.95).contains(&r1) || !(0.0..0.95).contains(&r2) {
        return None;
    }
    let r = r1.max(r2);
    Some(c * r / (1.0 - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear() {
        let q = Quadrature::default();
        let one = integrate(|_| 1.0, &q);
        assert!(one.converged);
        assert!((one.estimate - 1.0).abs() <= one.bound.max(1e-12));
        let lin = integrate(|t| t, &q);
        assert!(lin.converged);
        assert!((lin.estimate - 0.5).abs() <= lin.bound.max(1e-12));
    }

    #[test]
    fn inverse_sqrt_singularity() {
        // Closed form: integral of t^{-1/2} over (0, 1] is 2 sqrt(t) |_0^1 = 2.
        let q = Quadrature { abs_tol: 1e-6, ..Quadrature::default() };
        let r = integrate(|t: f64| t.powf(-0.5), &q);
        assert!(r.converged);
        assert!((r.estimate - 2.0).abs() <= 1e-6, "{r:?}");
    }

    #[test]
    fn divergence_is_flagged() {
        let q = Quadrature { max_refinements: 30, ..Quadrature::default() };
        let r = integrate(|t: f64| 1.0 / t, &q);
        assert!(!r.converged);
    }

    #[test]
    fn midpoint_rule_agrees() {
        let q = Quadrature { rule: QuadRule::MidpointDyadic, abs_tol: 1e-8, max_refinements: 40 };
        let r = integrate_interval(|t: f64| t.sin(), 0.0, std::f64::consts::PI, &q);
        assert!(r.converged);
        assert!((r.estimate - 2.0).abs() < 1e-8);
        let s = integrate(|t: f64| t * t, &q);
        assert!((s.estimate - 1.0 / 3.0).abs() < 1e-7, "{s:?}");
    }

    #[test]
    fn monotone_under_domination() {
        let q = Quadrature::default();
        let f = |t: f64| t.sqrt();
        let g = |t: f64| t.sqrt() + 0.1 * t;
        let (a, b) = (integrate(f, &q), integrate(g, &q));
        assert!(a.estimate <= b.estimate + 2.0 * (a.bound + b.bound));
    }
}
