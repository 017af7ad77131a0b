//! Polynomial approximation on discretized compact sets.
//!
//! Weighted discrete least squares in a basis orthonormalized against the
//! sample inner product (Vandermonde with Arnoldi), so every degree up to the
//! requested one is available from a single factorization. The chosen
//! polynomial is converted to monomial form and its sup error is measured on
//! a grid at least four times denser than the fitting grid.

use rug::Assign;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CompactSet;
use crate::numerics::{ComplexValue, Poly, Precision, Real};

pub type Target<'a> = &'a dyn Fn(&ComplexValue) -> ComplexValue;

pub struct ApproxProblem<'a> {
    pub target: Target<'a>,
    pub set: &'a CompactSet,
    pub degree: usize,
    pub tol: Real,
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub poly: Poly,
    /// Sup of `|poly - target|` over the validation grid.
    pub achieved_error: Real,
    pub requested_tol: Real,
    pub met: bool,
    pub validation_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxConfig {
    /// A degree is a candidate once its fitting-grid error is below
    /// `margin * tol`.
    pub margin: f64,
    /// Validation grid density relative to the fitting grid (at least 4).
    pub validation_factor: usize,
    /// Minimum boundary points per component in the validation grid.
    pub min_validation_points: usize,
    pub interior_weight: f64,
    /// Candidate degrees tried after the first one fails validation.
    pub max_candidates: usize,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig {
            margin: 0.25,
            validation_factor: 4,
            min_validation_points: 1000,
            interior_weight: 0.25,
            max_candidates: 6,
        }
    }
}

/// Orthonormal basis `q_0..q_n` of polynomials sampled on the fitting grid,
/// with the Hessenberg recurrence `z q_k = sum_{j<=k+1} h_{jk} q_j`. Grown
/// on demand.
struct Arnoldi {
    q: Vec<Vec<ComplexValue>>,
    h: Vec<Vec<ComplexValue>>,
    norm0: Real,
    /// Set once a new direction was numerically dependent on the old ones.
    exhausted: bool,
}

fn inner(weights: &[Real], a: &[ComplexValue], b: &[ComplexValue], prec: Precision) -> ComplexValue {
    let mut re = Real::with_val(prec.bits(), 0);
    let mut im = Real::with_val(prec.bits(), 0);
    let mut t = Real::new(prec.bits());
    for ((w, x), y) in weights.iter().zip(a).zip(b) {
        // conj(x) y = (xr yr + xi yi) + i (xr yi - xi yr)
        t.assign(x.re() * y.re());
        t += x.im() * y.im();
        t *= w;
        re += &t;
        t.assign(x.re() * y.im());
        t -= x.im() * y.re();
        t *= w;
        im += &t;
    }
    ComplexValue::new(re, im)
}

impl Arnoldi {
    /// Starts from `factor` sampled at `points`.
    fn new(points: &[ComplexValue], weights: &[Real], factor: &Poly, prec: Precision) -> Self {
        let start: Vec<ComplexValue> = points.iter().map(|z| factor.eval(z)).collect();
        let norm0 = inner(weights, &start, &start, prec).re().clone().sqrt();
        let inv = Real::with_val(prec.bits(), norm0.clone().recip());
        let q0 = start.iter().map(|v| v.scale(&inv)).collect();
        Arnoldi { q: vec![q0], h: Vec::new(), norm0, exhausted: false }
    }

    fn grow_to(&mut self, points: &[ComplexValue], weights: &[Real], degree: usize, prec: Precision) {
        let floor = Real::with_val(prec.bits(), 1u32) >> (prec.bits() as i32 / 2);
        let cap = degree.min(points.len().saturating_sub(1));
        while !self.exhausted && self.max_degree() < cap {
            let k = self.max_degree();
            let mut v: Vec<ComplexValue> = points.iter().zip(&self.q[k]).map(|(z, qk)| z * qk).collect();
            let before = inner(weights, &v, &v, prec).re().clone().sqrt();
            let mut col = Vec::with_capacity(k + 2);
            for qj in self.q.iter() {
                let hjk = inner(weights, qj, &v, prec);
                for (vi, qi) in v.iter_mut().zip(qj) {
                    *vi -= &(&hjk * qi);
                }
                col.push(hjk);
            }
            let hn = inner(weights, &v, &v, prec).re().clone().sqrt();
            if hn <= Real::with_val(prec.bits(), &before * &floor) || hn.is_zero() {
                self.exhausted = true;
                break;
            }
            let inv = Real::with_val(prec.bits(), hn.clone().recip());
            for vi in v.iter_mut() {
                *vi = vi.scale(&inv);
            }
            col.push(ComplexValue::from_real(hn));
            self.h.push(col);
            self.q.push(v);
        }
    }

    fn max_degree(&self) -> usize {
        self.q.len() - 1
    }

    /// Extends `out` with the monomial coefficients of `q_len(out)..=q_k`.
    fn monomials_to(&self, out: &mut Vec<Poly>, k: usize, prec: Precision) {
        if out.is_empty() {
            out.push(Poly::constant(ComplexValue::from_real(Real::with_val(prec.bits(), self.norm0.clone().recip()))));
        }
        let z = Poly::monomial(prec, 1);
        while out.len() <= k {
            let j0 = out.len() - 1;
            let col = &self.h[j0];
            let mut next = &z * &out[j0];
            for (j, hjk) in col[..=j0].iter().enumerate() {
                next = &next - &out[j].scale(hjk);
            }
            let inv = col[j0 + 1].recip();
            out.push(next.scale(&inv));
        }
    }
}

/// Least-squares coefficients and fitting-grid sup errors, grown with the basis.
struct Fitter<'a> {
    points: &'a [ComplexValue],
    weights: &'a [Real],
    values: Vec<ComplexValue>,
    prec: Precision,
    basis: Arnoldi,
    coeffs: Vec<ComplexValue>,
    residual: Vec<ComplexValue>,
    fit_err: Vec<Real>,
}

impl<'a> Fitter<'a> {
    fn new(
        points: &'a [ComplexValue],
        weights: &'a [Real],
        values: Vec<ComplexValue>,
        factor: &Poly,
        prec: Precision,
    ) -> Self {
        Fitter {
            points,
            weights,
            residual: values.clone(),
            values,
            prec,
            basis: Arnoldi::new(points, weights, factor, prec),
            coeffs: Vec::new(),
            fit_err: Vec::new(),
        }
    }

    /// Grows to `degree` (or as far as the basis goes); returns the top degree.
    fn grow_to(&mut self, degree: usize) -> usize {
        self.basis.grow_to(self.points, self.weights, degree, self.prec);
        while self.coeffs.len() < self.basis.q.len() {
            let qk = &self.basis.q[self.coeffs.len()];
            let ck = inner(self.weights, qk, &self.values, self.prec);
            let mut worst = Real::with_val(self.prec.bits(), 0);
            for (ri, qi) in self.residual.iter_mut().zip(qk) {
                *ri -= &(&ck * qi);
                let a = ri.abs();
                if a > worst {
                    worst = a;
                }
            }
            self.coeffs.push(ck);
            self.fit_err.push(worst);
        }
        self.basis.max_degree()
    }
}

fn weights_for(set: &CompactSet, interior_weight: f64) -> Vec<Real> {
    let prec = set.precision();
    let b = set.boundary_samples.len();
    let i = set.interior_samples.len();
    std::iter::repeat_n(prec.real(1.0), b).chain(std::iter::repeat_n(prec.real(interior_weight), i)).collect()
}

/// Densified copy of `set` used for validation.
pub fn validation_set(set: &CompactSet, cfg: &ApproxConfig) -> CompactSet {
    let per_part = set.density.boundary.max(1);
    let factor = cfg.validation_factor.max(4).max(cfg.min_validation_points.div_ceil(per_part));
    set.densified(factor)
}

/// Sup of `|p - target|` over the samples of `set`.
pub fn sup_error(p: &Poly, target: Target<'_>, set: &CompactSet) -> Real {
    let one = Poly::constant(ComplexValue::one(set.precision()));
    sup_error_times(p, &one, target, set)
}

fn sup_error_times(p: &Poly, factor: &Poly, target: Target<'_>, set: &CompactSet) -> Real {
    let mut worst = Real::with_val(set.precision().bits(), 0);
    for z in set.samples() {
        let e = (&(&p.eval(z) * &factor.eval(z)) - &target(z)).abs();
        if e > worst {
            worst = e;
        }
    }
    worst
}

pub fn mergelyan_approximate(prob: &ApproxProblem<'_>) -> Result<ApproxResult> {
    mergelyan_approximate_with(prob, &ApproxConfig::default())
}

pub fn mergelyan_approximate_with(prob: &ApproxProblem<'_>, cfg: &ApproxConfig) -> Result<ApproxResult> {
    let validation = validation_set(prob.set, cfg);
    fit_and_validate(prob, cfg, &validation)
}

/// Fits with a caller-supplied validation grid (it must be at least four
/// times denser than `prob.set`).
pub fn fit_and_validate(prob: &ApproxProblem<'_>, cfg: &ApproxConfig, validation: &CompactSet) -> Result<ApproxResult> {
    let one = Poly::constant(ComplexValue::one(prob.set.precision()));
    fit_and_validate_times(prob, &one, cfg, validation)
}

/// Fits `factor * q` to the target, with `deg q <= prob.degree`. The
/// returned polynomial is `q`; the errors refer to `factor * q`.
pub fn fit_and_validate_times(
    prob: &ApproxProblem<'_>,
    factor: &Poly,
    cfg: &ApproxConfig,
    validation: &CompactSet,
) -> Result<ApproxResult> {
    if prob.tol <= 0u32 {
        return Err(Error::Precondition("approximation tolerance must be positive".into()));
    }
    let set = prob.set;
    let prec = set.precision();
    let points: Vec<ComplexValue> = set.samples().cloned().collect();
    let weights = weights_for(set, cfg.interior_weight);
    let values: Vec<ComplexValue> = points.iter().map(|z| (prob.target)(z)).collect();

    let mut fitter = Fitter::new(&points, &weights, values, factor, prec);
    let goal = Real::with_val(prec.bits(), &prob.tol * cfg.margin);
    // First degree whose fitting-grid error is below the goal.
    const CHUNK: usize = 8;
    let mut first = None;
    let mut checked = 0;
    loop {
        let top = fitter.grow_to((checked + CHUNK).min(prob.degree));
        if let Some(i) = fitter.fit_err[checked..].iter().position(|e| *e <= goal) {
            first = Some(checked + i);
            break;
        }
        checked = top + 1;
        if top >= prob.degree || fitter.basis.exhausted {
            break;
        }
    }
    let first = first.unwrap_or_else(|| fitter.basis.max_degree());
    let mut candidates = vec![first];
    let mut d = first;
    while candidates.len() < cfg.max_candidates && d < prob.degree {
        d = (d + (d / 4).max(2)).min(prob.degree);
        candidates.push(d);
    }
    if *candidates.last().unwrap() != prob.degree {
        candidates.push(prob.degree);
    }

    let mut monomials = Vec::new();
    let mut poly = Poly::zero(prec);
    let mut built = 0usize;
    let mut best: Option<(Poly, Real)> = None;
    for &cand in &candidates {
        let cand = cand.min(fitter.grow_to(cand));
        if cand < built {
            break;
        }
        fitter.basis.monomials_to(&mut monomials, cand, prec);
        while built <= cand {
            poly = &poly + &monomials[built].scale(&fitter.coeffs[built]);
            built += 1;
        }
        check_conditioning(&poly, factor, set, &prob.tol, prec, cand)?;
        let err = sup_error_times(&poly, factor, prob.target, validation);
        let met = err <= prob.tol;
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((poly.clone(), err));
        }
        if met {
            break;
        }
    }
    let (poly, achieved_error) = best.expect("at least one candidate");
    Ok(ApproxResult {
        met: achieved_error <= prob.tol,
        poly,
        achieved_error,
        requested_tol: prob.tol.clone(),
        validation_points: validation.len(),
    })
}

/// Rounding in the monomial coefficients must stay well below the tolerance.
fn check_conditioning(
    p: &Poly,
    factor: &Poly,
    set: &CompactSet,
    tol: &Real,
    prec: Precision,
    degree: usize,
) -> Result<()> {
    let d = Real::with_val(prec.bits(), set.d_max.clone().max(&Real::with_val(prec.bits(), 1)));
    let noise = (p.abs_sum_at(&d) * factor.abs_sum_at(&d)) >> (prec.bits() as i32 - 4);
    if noise * 16u32 > *tol {
        return Err(Error::IllConditioned {
            degree,
            detail: format!("coefficient rounding at {} bits reaches the tolerance {:e}", prec.bits(), tol.to_f64()),
        });
    }
    Ok(())
}

/// Fits `q*` to the target and returns `z^n q*`; the error bound is the
/// validated error times `max(1, d_max)^n`.
pub fn shifted_fit(prob: &ApproxProblem<'_>, n: usize) -> Result<ApproxResult> {
    shifted_fit_with(prob, n, &ApproxConfig::default())
}

pub fn shifted_fit_with(prob: &ApproxProblem<'_>, n: usize, cfg: &ApproxConfig) -> Result<ApproxResult> {
    let base = mergelyan_approximate_with(prob, cfg)?;
    if n == 0 {
        return Ok(base);
    }
    let prec = prob.set.precision();
    let d = Real::with_val(prec.bits(), prob.set.d_max.clone().max(&Real::with_val(prec.bits(), 1)));
    let scale = Real::with_val(prec.bits(), rug::ops::Pow::pow(&d, n as u32));
    let bound = Real::with_val(prec.bits(), &base.achieved_error * &scale);
    Ok(ApproxResult {
        poly: base.poly.shift(n),
        met: bound <= prob.tol,
        achieved_error: bound,
        requested_tol: prob.tol.clone(),
        validation_points: base.validation_points,
    })
}
