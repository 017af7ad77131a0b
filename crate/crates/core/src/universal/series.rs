use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, Poly, Precision, Real};

use super::schedule::{BuildMode, DomainKind};

/// One block `q_k = z^shift q*_k`. Both builders use `shift = exponent = n_k`
/// (for the strip `n_k` is also the power of `F+-`).
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub k: usize,
    pub shift: usize,
    pub exponent: usize,
    pub qstar: Poly,
}

impl Block {
    pub fn q(&self) -> Poly {
        self.qstar.shift(self.shift)
    }

    /// `q_k(z)` without forming the shifted polynomial.
    pub fn eval(&self, z: &ComplexValue) -> ComplexValue {
        &self.qstar.eval(z) * &z.powu(self.shift as u64)
    }
}

/// Strip-only bounds of a step.
#[derive(Clone, Debug, PartialEq)]
pub struct StripBounds {
    pub delta: Real,
    /// `delta` after relaxation; equal to `delta` in strict mode.
    pub delta_used: Real,
    pub w_core: Real,
    pub b: ComplexValue,
    pub c: ComplexValue,
    /// `sup |q_k|` over `R_k`, requested `<= 2^{-k} delta`.
    pub core_requested: Real,
    pub core_achieved: Real,
    /// `sup |p_k - (q_1 + ... + q_k)|` over `K_k`, requested `<= 2^{-k}`.
    pub step_target_requested: Real,
    pub step_target_achieved: Real,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepCertificate {
    pub k: usize,
    pub n_k: usize,
    /// False when no exponent up to the search limit satisfied the
    /// smallness condition and the smallest admissible one was used.
    pub exponent_condition_met: bool,
    /// `2^{-k}`: the bound on `|q_k| / w`.
    pub requested_growth_ratio: Real,
    /// `max |q_k| / w` on the validation grid.
    pub achieved_growth_ratio: Real,
    /// `2^{-k} min w` on the validation grid.
    pub requested_growth_bound: Real,
    /// `min (2^{-k} w - |q_k|)`; nonnegative when the growth bound holds.
    pub achieved_growth_margin: Real,
    pub requested_target_err: Real,
    pub achieved_target_err: Real,
    pub mergelyan_tol_required: Real,
    pub mergelyan_tol_used: Real,
    pub mergelyan_achieved: Real,
    pub mergelyan_degree: usize,
    pub validation_points: usize,
    pub strip: Option<StripBounds>,
    pub relaxation_note: Option<String>,
}

impl StepCertificate {
    pub fn growth_met(&self) -> bool {
        self.achieved_growth_ratio <= self.requested_growth_ratio
    }

    pub fn target_met(&self) -> bool {
        self.achieved_target_err <= self.requested_target_err
    }

    pub fn mergelyan_met(&self) -> bool {
        self.mergelyan_achieved <= self.mergelyan_tol_required
    }

    /// Every required bound holds.
    pub fn all_met(&self) -> bool {
        let strip = self
            .strip
            .as_ref()
            .is_none_or(|s| s.core_achieved <= s.core_requested && s.step_target_achieved <= s.step_target_requested);
        self.exponent_condition_met && self.growth_met() && self.target_met() && self.mergelyan_met() && strip
    }

    /// Lists the required bounds that were missed.
    pub fn misses(&self) -> Vec<String> {
        let mut out = Vec::new();
        let e = |x: &Real| x.to_f64();
        if !self.exponent_condition_met {
            out.push(format!("exponent condition unmet; n_k = {} is the smallest admissible value", self.n_k));
        }
        if !self.mergelyan_met() {
            out.push(format!(
                "Mergelyan error {:.3e} above required tolerance {:.3e} (used {:.3e})",
                e(&self.mergelyan_achieved),
                e(&self.mergelyan_tol_required),
                e(&self.mergelyan_tol_used)
            ));
        }
        if !self.growth_met() {
            out.push(format!(
                "growth ratio {:.3e} above {:.3e}",
                e(&self.achieved_growth_ratio),
                e(&self.requested_growth_ratio)
            ));
        }
        if !self.target_met() {
            out.push(format!(
                "target error {:.3e} above {:.3e}",
                e(&self.achieved_target_err),
                e(&self.requested_target_err)
            ));
        }
        if let Some(s) = &self.strip {
            if s.delta_used != s.delta {
                out.push(format!("delta relaxed from {:.3e} to {:.3e}", e(&s.delta), e(&s.delta_used)));
            }
            if s.core_achieved > s.core_requested {
                out.push(format!("sup |q_k| on R_k {:.3e} above {:.3e}", e(&s.core_achieved), e(&s.core_requested)));
            }
            if s.step_target_achieved > s.step_target_requested {
                out.push(format!(
                    "step target error {:.3e} above {:.3e}",
                    e(&s.step_target_achieved),
                    e(&s.step_target_requested)
                ));
            }
        }
        out
    }

    pub(crate) fn refresh_note(&mut self) {
        let misses = self.misses();
        self.relaxation_note = if misses.is_empty() { None } else { Some(misses.join("; ")) };
    }
}

/// A finite prefix `q_1 + ... + q_K` of a universal series with its
/// certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalSeries {
    pub domain: DomainKind,
    pub mode: BuildMode,
    pub prec: Precision,
    pub schedule_hash: String,
    pub blocks: Vec<Block>,
    pub certificates: Vec<StepCertificate>,
    sum: Poly,
}

impl UniversalSeries {
    pub fn new(domain: DomainKind, mode: BuildMode, prec: Precision, schedule_hash: String) -> Self {
        UniversalSeries {
            domain,
            mode,
            prec,
            schedule_hash,
            blocks: Vec::new(),
            certificates: Vec::new(),
            sum: Poly::zero(prec),
        }
    }

    pub(crate) fn push(&mut self, block: Block, cert: StepCertificate) {
        self.sum = &self.sum + &block.q();
        self.blocks.push(block);
        self.certificates.push(cert);
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    /// `f_K = q_1 + ... + q_K`.
    pub fn sum(&self) -> &Poly {
        &self.sum
    }

    pub fn eval(&self, z: &ComplexValue) -> ComplexValue {
        self.sum.eval(z)
    }

    /// Number of Taylor coefficients fixed by the built blocks.
    pub fn available_coefficients(&self) -> usize {
        (self.sum.degree() + 1).max(0) as usize
    }

    /// `S_n(f_K)`, the partial sum of degree at most `n`.
    pub fn partial_sum(&self, n: usize) -> Poly {
        self.sum.truncate(n)
    }

    pub fn exponents(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.exponent).collect()
    }
}

/// Coefficient `a_j` of the built series.
pub fn series_coefficient(series: &UniversalSeries, j: usize) -> Result<ComplexValue> {
    let available = series.available_coefficients();
    if j >= available {
        return Err(Error::BeyondBuiltBlocks { index: j, available });
    }
    Ok(series.sum.coeff(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(k: usize) -> StepCertificate {
        let p = Precision::default();
        let r = |x: f64| p.real(x);
        StepCertificate {
            k,
            n_k: 0,
            exponent_condition_met: true,
            requested_growth_ratio: r(0.5),
            achieved_growth_ratio: r(0.1),
            requested_growth_bound: r(0.5),
            achieved_growth_margin: r(0.4),
            requested_target_err: r(0.25),
            achieved_target_err: r(0.01),
            mergelyan_tol_required: r(0.25),
            mergelyan_tol_used: r(0.25),
            mergelyan_achieved: r(0.01),
            mergelyan_degree: 3,
            validation_points: 1000,
            strip: None,
            relaxation_note: None,
        }
    }

    #[test]
    fn coefficient_access() {
        let p = Precision::default();
        let mut s = UniversalSeries::new(DomainKind::Disc, BuildMode::Strict, p, String::new());
        let qstar = Poly::from_f64_pairs(p, &[(1.0, 0.0), (2.0, 0.0)]);
        s.push(Block { k: 1, shift: 3, exponent: 3, qstar }, cert(1));
        assert_eq!(s.available_coefficients(), 5);
        assert!(series_coefficient(&s, 0).unwrap().is_zero());
        assert_eq!(series_coefficient(&s, 4).unwrap().to_c64().re, 2.0);
        assert!(matches!(series_coefficient(&s, 5), Err(Error::BeyondBuiltBlocks { index: 5, available: 5 })));
        let z = ComplexValue::from_f64(p, 0.5, 0.25);
        let d = (&s.blocks[0].eval(&z) - &s.eval(&z)).abs();
        assert!(d < 1e-70);
        assert_eq!(s.partial_sum(3).degree(), 3);
    }

    #[test]
    fn notes_follow_misses() {
        let mut c = cert(1);
        c.refresh_note();
        assert!(c.relaxation_note.is_none() && c.all_met());
        c.achieved_growth_ratio = Precision::default().real(0.9);
        c.refresh_note();
        assert!(c.relaxation_note.unwrap().contains("growth ratio"));
    }
}
