//! Universal Taylor series on the unit disc.
//!
//! Step `k` picks `n_k` so that `z^{n_k} r(1)` is small on `A` and on
//! `D(0, k/(k+1))`, where `r = p_k - (q_1 + ... + q_{k-1})`, then fits `q*_k`
//! to `z^{-n_k} r` outside the disc and to the constant `r(1)` inside it,
//! and sets `q_k = z^{n_k} q*_k`.

use crate::approx::{fit_and_validate, validation_set, ApproxProblem};
use crate::error::{Error, Result};
use crate::geometry::CompactSet;
use crate::numerics::{ComplexValue, Poly, Real};
use crate::probe::TailBound;
use num_complex::Complex64;

use super::check::{growth, pow2, smallest_passing, sup_abs};
use super::schedule::{BuildMode, DomainKind, Schedule, WeightFn};
use super::series::{Block, StepCertificate, UniversalSeries};
use super::BuildConfig;

/// Smallest `n > deg(prev_sum)` with
/// `|z|^n |p_k(1) - prev_sum(1)| <= 2^{-k-1} w(z)` at every point.
///
/// The points must lie in the closed unit disc (points where `w` is infinite
/// are skipped).
pub fn choose_exponent_disc(
    k: usize,
    prev_sum: &Poly,
    target: &Poly,
    points: &[ComplexValue],
    w: WeightFn,
    n_max: usize,
) -> Result<usize> {
    let prec = target.precision();
    let bits = prec.bits();
    let one = ComplexValue::one(prec);
    let r1 = (&target.eval(&one) - &prev_sum.eval(&one)).abs();
    let lo = (prev_sum.degree() + 1).max(0) as usize;
    let scale = pow2(prec, -(k as i32) - 1);
    let mut checks = Vec::with_capacity(points.len());
    for z in points {
        let wz = w.eval(z);
        if wz.is_infinite() {
            continue;
        }
        let m = z.abs();
        if m > 1u32 {
            return Err(Error::Precondition(format!("exponent check point {z} lies outside the disc")));
        }
        checks.push((m, Real::with_val(bits, &wz * &scale)));
    }
    let ok = |n: usize| {
        checks.iter().all(|(m, bound)| {
            let lhs = Real::with_val(bits, rug::ops::Pow::pow(m, n as u32)) * &r1;
            lhs <= *bound
        })
    };
    smallest_passing(lo, n_max, ok)
        .ok_or_else(|| Error::Schedule(format!("no exponent up to {n_max} satisfies the step-{k} smallness condition")))
}

pub struct DiscBuilder<'s> {
    schedule: &'s Schedule,
    cfg: BuildConfig,
    a_val: CompactSet,
    series: UniversalSeries,
}

impl<'s> DiscBuilder<'s> {
    pub fn new(schedule: &'s Schedule, cfg: BuildConfig) -> Result<Self> {
        if schedule.domain() != DomainKind::Disc {
            return Err(Error::Schedule("disc builder needs a disc schedule".into()));
        }
        Ok(DiscBuilder {
            schedule,
            cfg,
            a_val: validation_set(&schedule.a, &cfg.approx),
            series: UniversalSeries::new(DomainKind::Disc, cfg.mode, schedule.prec, schedule.spec.hash()),
        })
    }

    /// Continues from a series built earlier from the same schedule.
    pub fn resume(schedule: &'s Schedule, cfg: BuildConfig, series: UniversalSeries) -> Result<Self> {
        let mut b = Self::new(schedule, cfg)?;
        if series.domain != DomainKind::Disc || series.schedule_hash != schedule.spec.hash() {
            return Err(Error::Schedule("series was not built from this schedule".into()));
        }
        if series.prec != schedule.prec {
            return Err(Error::Schedule(format!(
                "series precision {} differs from schedule precision {}",
                series.prec.bits(),
                schedule.prec.bits()
            )));
        }
        b.series = series;
        Ok(b)
    }

    pub fn built(&self) -> usize {
        self.series.depth()
    }

    pub fn series(&self) -> &UniversalSeries {
        &self.series
    }

    pub fn into_series(self) -> UniversalSeries {
        self.series
    }

    /// `n_{K+1}` for the next scheduled step without fitting its block.
    pub fn next_exponent(&self) -> Result<usize> {
        let s = self.schedule;
        let k = self.built() + 1;
        let step =
            s.steps.get(k - 1).ok_or_else(|| Error::Schedule(format!("schedule has only {} steps", s.steps.len())))?;
        let core_val = validation_set(&s.core_set(k), &self.cfg.approx);
        let check: Vec<ComplexValue> = self.a_val.samples().chain(core_val.samples()).cloned().collect();
        choose_exponent_disc(k, self.series.sum(), &step.target, &check, s.weight(), s.spec.build.n_max)
    }

    /// Bound on the unbuilt tail `q_{K+1} + q_{K+2} + ...` with valuation
    /// `n_{K+1}`, from the step bounds `|q_j| <= 2^{-j} w` on
    /// `D(0, j/(j+1))`: on `|z| = (K+1)/(K+2)` the tail is at most
    /// `2^{-K} max w`, and Schwarz's lemma gives the rest.
    pub fn tail_bound(&self, next_exponent: usize) -> TailBound {
        let kk = self.built();
        let radius = (kk + 1) as f64 / (kk + 2) as f64;
        let w = self.schedule.weight();
        let prec = self.schedule.prec;
        let wmax = (0..4096)
            .map(|j| {
                let z = ComplexValue::from_c64(
                    prec,
                    Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / 4096.0),
                );
                w.eval(&z).to_f64()
            })
            .fold(w.eval(&ComplexValue::from_f64(prec, radius, 0.0)).to_f64(), f64::max);
        TailBound { valuation: next_exponent, radius, sup: wmax * (-(kk as f64)).exp2() }
    }

    /// Builds the next block.
    pub fn step(&mut self) -> Result<&StepCertificate> {
        let s = self.schedule;
        let k = self.built() + 1;
        let step =
            s.steps.get(k - 1).ok_or_else(|| Error::Schedule(format!("schedule has only {} steps", s.steps.len())))?;
        let prec = s.prec;
        let bits = prec.bits();
        let w = s.weight();
        let core = s.core_set(k);
        let core_val = validation_set(&core, &self.cfg.approx);
        let k_val = validation_set(&step.set, &self.cfg.approx);

        let prev = self.series.sum().clone();
        let check: Vec<ComplexValue> = self.a_val.samples().chain(core_val.samples()).cloned().collect();
        let (n, exponent_condition_met) =
            match choose_exponent_disc(k, &prev, &step.target, &check, w, s.spec.build.n_max) {
                Ok(n) => (n, true),
                Err(Error::Schedule(_)) if self.cfg.mode == BuildMode::Empirical => {
                    ((prev.degree() + 1).max(0) as usize, false)
                }
                Err(e) => return Err(e),
            };

        let r = &step.target - &prev;
        let r1 = r.eval(&ComplexValue::one(prec));
        let pstar = |z: &ComplexValue| {
            if z.norm_sqr() >= 1u32 {
                &r.eval(z) * &z.powu(n as u64).recip()
            } else {
                r1.clone()
            }
        };

        let fit = CompactSet::union(format!("fit{k}"), &[&s.a, &core, &step.set]);
        let val = CompactSet::union(format!("val{k}"), &[&self.a_val, &core_val, &k_val]);
        let d = fit.d_max.clone().max(&Real::with_val(bits, 1));
        let d_n = Real::with_val(bits, rug::ops::Pow::pow(&d, n as u32));
        let tol_required = (d_n << (k as i32 + 1)).recip();
        let tol_used = match (self.cfg.mode, &step.tau) {
            (BuildMode::Empirical, Some(t)) => tol_required.clone().max(t),
            _ => tol_required.clone(),
        };
        let prob = ApproxProblem { target: &pstar, set: &fit, degree: s.spec.build.max_degree, tol: tol_used.clone() };
        let res = fit_and_validate(&prob, &self.cfg.approx, &val)?;

        let block = Block { k, shift: n, exponent: n, qstar: res.poly };
        let ratio_bound = pow2(prec, -(k as i32));
        let g = growth(|z| block.eval(z), self.a_val.samples().chain(core_val.samples()), w, &ratio_bound, prec);
        let target_err = sup_abs(|z| &(&step.target.eval(z) - &prev.eval(z)) - &block.eval(z), k_val.samples(), prec);
        let mut cert = StepCertificate {
            k,
            n_k: n,
            exponent_condition_met,
            requested_growth_bound: Real::with_val(bits, &ratio_bound * &g.min_w),
            requested_growth_ratio: ratio_bound,
            achieved_growth_ratio: g.ratio,
            achieved_growth_margin: g.margin,
            requested_target_err: pow2(prec, -(k as i32) - 1),
            achieved_target_err: target_err,
            mergelyan_tol_required: tol_required,
            mergelyan_tol_used: tol_used,
            mergelyan_achieved: res.achieved_error,
            mergelyan_degree: block.qstar.degree().max(0) as usize,
            validation_points: res.validation_points,
            strip: None,
            relaxation_note: None,
        };
        cert.refresh_note();
        if self.cfg.mode == BuildMode::Strict && !cert.all_met() {
            return Err(Error::Certificate { step: k, detail: cert.misses().join("; ") });
        }
        self.series.push(block, cert);
        Ok(self.series.certificates.last().expect("just pushed"))
    }
}

/// Builds the first `k_max` blocks of `schedule`.
pub fn build_universal_disc(schedule: &Schedule, k_max: usize, cfg: BuildConfig) -> Result<UniversalSeries> {
    if k_max > schedule.steps.len() {
        return Err(Error::Schedule(format!("K_max = {k_max} exceeds the {} scheduled steps", schedule.steps.len())));
    }
    let mut b = DiscBuilder::new(schedule, cfg)?;
    for _ in 0..k_max {
        b.step()?;
    }
    Ok(b.into_series())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;
    use crate::universal::schedule::{ScheduleSpec, DISC_DEFAULT};

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn zero_residual_takes_the_next_degree() {
        let prev = Poly::from_f64_pairs(p(), &[(1.0, 0.0), (0.0, 0.0), (2.0, 0.0)]);
        let pts = vec![ComplexValue::from_f64(p(), 0.5, 0.0)];
        let n = choose_exponent_disc(2, &prev, &prev, &pts, WeightFn::Constant { value: 2.0 }, 100).unwrap();
        assert_eq!(n, 3);
    }

    #[test]
    fn exponent_is_minimal() {
        // Oracle: |r(1)| = 1, one point of modulus 1/2, bound 2^{-3} * 2 = 1/4,
        // so the answer is the least n >= 1 with 2^{-n} <= 1/4.
        let prev = Poly::zero(p());
        let target = Poly::from_f64_pairs(p(), &[(1.0, 0.0)]);
        let pts = vec![ComplexValue::from_f64(p(), 0.0, 0.5)];
        let n = choose_exponent_disc(2, &prev, &target, &pts, WeightFn::Constant { value: 2.0 }, 100).unwrap();
        assert_eq!(n, 2);
        let n = choose_exponent_disc(2, &prev, &target, &pts, WeightFn::Constant { value: 1e-6 }, 100).unwrap();
        assert_eq!(n, (1e6f64 * 8.0).log2().ceil() as usize);
    }

    #[test]
    fn exponent_search_gives_up() {
        let prev = Poly::zero(p());
        let target = Poly::from_f64_pairs(p(), &[(1.0, 0.0)]);
        let pts = vec![ComplexValue::from_f64(p(), 0.999, 0.0)];
        let r = choose_exponent_disc(1, &prev, &target, &pts, WeightFn::Constant { value: 1e-30 }, 1000);
        assert!(matches!(r, Err(Error::Schedule(_))));
    }

    #[test]
    fn two_strict_steps() {
        let schedule = Schedule::new(ScheduleSpec::from_toml(DISC_DEFAULT).unwrap(), p()).unwrap();
        let series = build_universal_disc(&schedule, 2, BuildConfig::strict()).unwrap();
        assert_eq!(series.depth(), 2);
        let n = series.exponents();
        assert!(n[1] as isize > series.blocks[0].q().degree());
        for c in &series.certificates {
            assert!(c.all_met() && c.relaxation_note.is_none(), "{c:?}");
            assert!(c.validation_points >= 1000);
        }
        // The gap below n_2 is empty.
        let q2 = series.blocks[1].q();
        assert_eq!(q2.valuation().unwrap_or(usize::MAX).min(n[1]), n[1]);
    }
}
