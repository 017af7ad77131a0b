//! Universal Taylor series on the strip `S = {-1 < Re z < 1}`.
//!
//! Step `k` uses the powers `F+^n`, `F-^n` to push the residual at `+-1`
//! out of `A` and the rectangle `R_k`, with `n` chosen against the scale
//! `delta_k`. The target `p*_k` vanishes to order `n` at 0, so the block is
//! fitted as `q_k = z^n q*_k`; with `n > m_{k-1}` the partial sum `S_{m_k}(f)`
//! is exactly `q_1 + ... + q_k`.

use crate::approx::{fit_and_validate_times, validation_set, ApproxProblem};
use crate::error::{Error, Result};
use crate::geometry::CompactSet;
use crate::numerics::{ComplexValue, Poly, Precision, Real};

use super::check::{growth, pow2, smallest_passing, sup_abs};
use super::conformal::{fminus_closure, fplus_closure};
use super::schedule::{BuildMode, DomainKind, Schedule, WeightFn};
use super::series::{Block, StepCertificate, StripBounds, UniversalSeries};
use super::BuildConfig;

/// `delta_k = 2^{-k} (2D)^{-(m_prev + 1)}`, halved further if needed so that
/// it stays below `prev_delta`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn choose_delta_k(k: usize, m_prev: usize, d: f64, prev_delta: Option<&Real>, prec: Precision) -> Result<Real> {
    if k == 0 || !(d >= 1.0) {
        return Err(Error::Precondition(format!("delta needs k >= 1 and D >= 1 (k = {k}, D = {d})")));
    }
    let bits = prec.bits();
    let base = Real::with_val(bits, 2.0 * d);
    let pow = Real::with_val(bits, rug::ops::Pow::pow(&base, (m_prev + 1) as u32));
    let delta = (pow << k as i32).recip();
    Ok(match prev_delta {
        Some(p) if delta >= *p => Real::with_val(bits, p >> 1),
        _ => delta,
    })
}

/// Smallest `n >= max(1, m_prev + 1)` with
/// `|F+-(z)|^n |r(+-1)| <= 2^{-k-2} delta w(z) / w_core` at every point and
/// `3^{-n} |r(+-1)| < 2^{-k-1} delta`.
#[allow(clippy::too_many_arguments)]
pub fn choose_exponent_strip(
    k: usize,
    m_prev: usize,
    r_plus: &ComplexValue,
    r_minus: &ComplexValue,
    delta: &Real,
    w_core: &Real,
    points: &[ComplexValue],
    w: WeightFn,
    n_max: usize,
) -> Result<usize> {
    let prec = r_plus.precision();
    let bits = prec.bits();
    let (ap, am) = (r_plus.abs(), r_minus.abs());
    let scale = Real::with_val(bits, delta * &pow2(prec, -(k as i32) - 2)) / w_core;
    let edge = Real::with_val(bits, delta * &pow2(prec, -(k as i32) - 1));
    let third = Real::with_val(bits, 1) / 3u32;
    let mut checks = Vec::with_capacity(points.len());
    for z in points {
        let wz = w.eval(z);
        if wz.is_infinite() {
            continue;
        }
        let (fp, fm) = (fplus_closure(z).abs(), fminus_closure(z).abs());
        if fp > 1u32 || fm > 1u32 {
            return Err(Error::Precondition(format!("exponent check point {z} lies outside the strip")));
        }
        checks.push((fp, fm, Real::with_val(bits, &wz * &scale)));
    }
    let pw = |x: &Real, n: usize| Real::with_val(bits, rug::ops::Pow::pow(x, n as u32));
    let ok = |n: usize| {
        let t = pw(&third, n);
        if Real::with_val(bits, &t * &ap) >= edge || Real::with_val(bits, &t * &am) >= edge {
            return false;
        }
        checks.iter().all(|(fp, fm, b)| pw(fp, n) * &ap <= *b && pw(fm, n) * &am <= *b)
    };
    smallest_passing((m_prev + 1).max(1), n_max, ok)
        .ok_or_else(|| Error::Schedule(format!("no exponent up to {n_max} satisfies the step-{k} strip condition")))
}

pub struct StripBuilder<'s> {
    schedule: &'s Schedule,
    cfg: BuildConfig,
    a_val: CompactSet,
    k_vals: Vec<CompactSet>,
    deltas: Vec<Real>,
    series: UniversalSeries,
}

impl<'s> StripBuilder<'s> {
    pub fn new(schedule: &'s Schedule, cfg: BuildConfig) -> Result<Self> {
        if schedule.domain() != DomainKind::Strip {
            return Err(Error::Schedule("strip builder needs a strip schedule".into()));
        }
        Ok(StripBuilder {
            schedule,
            cfg,
            a_val: validation_set(&schedule.a, &cfg.approx),
            k_vals: Vec::new(),
            deltas: Vec::new(),
            series: UniversalSeries::new(DomainKind::Strip, cfg.mode, schedule.prec, schedule.spec.hash()),
        })
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
        let m_prev = prev.degree().max(0) as usize;
        let d = s.steps[..k].iter().map(|st| st.set.shape.max_modulus()).fold(1.0, f64::max);
        let delta = choose_delta_k(k, m_prev, d, self.deltas.last(), prec)?;
        let delta_used = match (self.cfg.mode, &step.tau) {
            (BuildMode::Empirical, Some(t)) => delta.clone().max(&Real::with_val(bits, t << (k as i32 + 1))),
            _ => delta.clone(),
        };

        let r = &step.target - &prev;
        let one = ComplexValue::one(prec);
        let (r_plus, r_minus) = (r.eval(&one), r.eval(&-&one));
        let mut w_core = Real::with_val(bits, 1);
        for z in core_val.samples() {
            let wz = w.eval(z);
            if wz > w_core {
                w_core = wz;
            }
        }
        let check: Vec<ComplexValue> = self.a_val.samples().chain(core_val.samples()).cloned().collect();
        let (n, exponent_condition_met) = match choose_exponent_strip(
            k,
            m_prev,
            &r_plus,
            &r_minus,
            &delta_used,
            &w_core,
            &check,
            w,
            s.spec.build.n_max,
        ) {
            Ok(n) => (n, true),
            Err(Error::Schedule(_)) if self.cfg.mode == BuildMode::Empirical => ((m_prev + 1).max(1), false),
            Err(e) => return Err(e),
        };

        let third = ComplexValue::from_real(-(Real::with_val(bits, 1) / 3u32)).powu(n as u64);
        let b = &third * &r_minus;
        let c = &third * &r_plus;
        let pstar = |z: &ComplexValue| {
            if *z.re() >= 1u32 {
                &r.eval(z) + &b
            } else if *z.re() <= -1i32 {
                &r.eval(z) + &c
            } else {
                let fp = fplus_closure(z).powu(n as u64);
                let fm = fminus_closure(z).powu(n as u64);
                &(&fp * &r_plus) + &(&fm * &r_minus)
            }
        };

        let fit = CompactSet::union(format!("fit{k}"), &[&s.a, &core, &step.set]);
        let val = CompactSet::union(format!("val{k}"), &[&self.a_val, &core_val, &k_val]);
        let tol_required = Real::with_val(bits, &delta * &pow2(prec, -(k as i32) - 1));
        let tol_used = Real::with_val(bits, &delta_used * &pow2(prec, -(k as i32) - 1));
        let prob = ApproxProblem { target: &pstar, set: &fit, degree: s.spec.build.max_degree, tol: tol_used.clone() };
        // When the residual vanishes at +-1, p*_k is 0 on the strip and the
        // block is taken with the factor z^2 - 1, so later residuals vanish
        // there too and no F+- peak has to be resolved.
        let negligible = Real::with_val(bits, &tol_used >> 64);
        let vanishing = r_plus.abs() <= negligible && r_minus.abs() <= negligible;
        let edge = if vanishing {
            Poly::from_f64_pairs(prec, &[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
        } else {
            Poly::constant(ComplexValue::one(prec))
        };
        let factor = edge.shift(n);
        let res = fit_and_validate_times(&prob, &factor, &self.cfg.approx, &val)?;
        let block = Block { k, shift: n, exponent: n, qstar: &edge * &res.poly };

        let ratio_bound = pow2(prec, -(k as i32));
        let g = growth(|z| block.eval(z), self.a_val.samples(), w, &ratio_bound, prec);
        let core_achieved = sup_abs(|z| block.eval(z), core_val.samples(), prec);
        let step_target = sup_abs(|z| &(&step.target.eval(z) - &prev.eval(z)) - &block.eval(z), k_val.samples(), prec);
        let cert = StepCertificate {
            k,
            n_k: n,
            exponent_condition_met,
            requested_growth_bound: Real::with_val(bits, &ratio_bound * &g.min_w),
            requested_growth_ratio: ratio_bound.clone(),
            achieved_growth_ratio: g.ratio,
            achieved_growth_margin: g.margin,
            requested_target_err: pow2(prec, 1 - k as i32),
            // Filled in by `refresh_final`.
            achieved_target_err: Real::with_val(bits, 0),
            mergelyan_tol_required: tol_required,
            mergelyan_tol_used: tol_used,
            mergelyan_achieved: res.achieved_error,
            mergelyan_degree: block.qstar.degree().max(0) as usize,
            validation_points: res.validation_points,
            strip: Some(StripBounds {
                core_requested: Real::with_val(bits, &delta * &ratio_bound),
                delta: delta.clone(),
                delta_used,
                w_core,
                b,
                c,
                core_achieved,
                step_target_requested: ratio_bound,
                step_target_achieved: step_target,
            }),
            relaxation_note: None,
        };
        self.series.push(block, cert);
        self.deltas.push(delta);
        self.k_vals.push(k_val);
        self.refresh_final();
        if self.cfg.mode == BuildMode::Strict {
            if let Some(c) = self.series.certificates.iter().find(|c| !c.all_met()) {
                return Err(Error::Certificate { step: c.k, detail: c.misses().join("; ") });
            }
        }
        Ok(self.series.certificates.last().expect("just pushed"))
    }

    /// Recomputes `sup |p_j - S_{m_j}(f)|` on `K_j` for every built step,
    /// where `m_j = deg(q_1 + ... + q_j)`.
    fn refresh_final(&mut self) {
        let prec = self.schedule.prec;
        let mut running = Poly::zero(prec);
        let degrees: Vec<usize> = self
            .series
            .blocks
            .iter()
            .map(|b| {
                running = &running + &b.q();
                running.degree().max(0) as usize
            })
            .collect();
        for (j, m) in degrees.into_iter().enumerate() {
            let partial = self.series.partial_sum(m);
            let target = &self.schedule.steps[j].target;
            let err = sup_abs(|z| &target.eval(z) - &partial.eval(z), self.k_vals[j].samples(), prec);
            let cert = &mut self.series.certificates[j];
            cert.achieved_target_err = err;
            cert.refresh_note();
        }
    }
}

pub fn build_universal_strip(schedule: &Schedule, k_max: usize, cfg: BuildConfig) -> Result<UniversalSeries> {
    if k_max > schedule.steps.len() {
        return Err(Error::Schedule(format!("K_max = {k_max} exceeds the {} scheduled steps", schedule.steps.len())));
    }
    let mut b = StripBuilder::new(schedule, cfg)?;
    for _ in 0..k_max {
        b.step()?;
    }
    Ok(b.into_series())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universal::schedule::{ScheduleSpec, STRIP_DEFAULT};

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn delta_examples() {
        let d = choose_delta_k(1, 0, 1.0, None, p()).unwrap();
        assert_eq!(d, 0.25);
        let d2 = choose_delta_k(2, 3, 1.5, Some(&d), p()).unwrap();
        assert_eq!(d2.to_f64(), 0.25 / 3f64.powi(4));
        // Forced below the previous value.
        let big = p().real(1e-9);
        let d3 = choose_delta_k(3, 0, 1.0, Some(&big), p()).unwrap();
        assert_eq!(d3, big.clone() / 2u32);
        assert!(choose_delta_k(1, 0, 0.5, None, p()).is_err());
    }

    #[test]
    fn zero_residual_takes_the_floor() {
        let z = ComplexValue::zero(p());
        let pts = vec![ComplexValue::from_f64(p(), 0.5, 0.5)];
        let n = choose_exponent_strip(
            2,
            7,
            &z,
            &z,
            &p().real(1e-3),
            &p().real(1.0),
            &pts,
            WeightFn::Constant { value: 1.0 },
            100,
        )
        .unwrap();
        assert_eq!(n, 8);
    }

    #[test]
    fn exponent_oracle() {
        // One point at 0 where F+- vanish: only the b, c condition binds,
        // 3^{-n} < 2^{-2} delta with delta = 1/8 gives 3^n > 32.
        let one = ComplexValue::one(p());
        let pts = vec![ComplexValue::zero(p())];
        let n = choose_exponent_strip(
            1,
            0,
            &one,
            &one,
            &p().real(0.125),
            &p().real(1.0),
            &pts,
            WeightFn::Constant { value: 1.0 },
            100,
        )
        .unwrap();
        assert_eq!(n, 4);
    }

    #[test]
    fn one_empirical_step() {
        let schedule = Schedule::new(ScheduleSpec::from_toml(STRIP_DEFAULT).unwrap(), p()).unwrap();
        let mut b = StripBuilder::new(&schedule, BuildConfig::empirical()).unwrap();
        let c = b.step().unwrap().clone();
        assert!(c.growth_met(), "{c:?}");
        assert!(c.n_k >= 1);
        let s = c.strip.unwrap();
        assert!(s.b.abs() < Real::with_val(256, &s.delta_used / 4u32));
        // With one block, S_{m_1}(f) = q_1 and the two target errors agree.
        assert_eq!(c.achieved_target_err, s.step_target_achieved);
    }
}
