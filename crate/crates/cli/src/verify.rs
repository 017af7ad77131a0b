//! `utaylor verify`: re-checks a stored series on fresh grids and runs the
//! boundary probes.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use utaylor_core::geometry::{ApproachRegion, CompactSet, RegionParams, SampleDensity};
use utaylor_core::probe::{coverage, plessner_curve, polar_grid, uk_diagnostic, TailBound, UkStatus, Window};
use utaylor_core::universal::{
    read_artifact, BuildConfig, BuildMode, DiscBuilder, DomainKind, Schedule, ScheduleSpec, UniversalSeries,
};
use utaylor_core::{ComplexValue, Poly, Real};

use crate::build::SCHEDULE_FILE;
use crate::config::{schedule_text, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{num, Check, Writer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Growth,
    Targets,
    Uk,
    Plessner,
    Radial,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Growth => "growth",
            Suite::Targets => "targets",
            Suite::Uk => "uk",
            Suite::Plessner => "plessner",
            Suite::Radial => "radial",
        }
    }
}

pub struct VerifyOutcome {
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct SuiteReport<'a> {
    suite: Suite,
    artifact_config_hash: &'a str,
    passed: bool,
    checks: &'a [Check],
}

/// Loads the series and the schedule it was built from: `cfg.schedule` when
/// set, else the schedule copy next to the artifact.
pub fn load(cfg: &RunConfig, artifact: &Path) -> CliResult<(UniversalSeries, String, Schedule)> {
    let text = std::fs::read_to_string(artifact).map_err(|e| CliError::io("read", artifact, e))?;
    let a = read_artifact(&text)?;
    let schedule_src = match &cfg.schedule {
        Some(s) => schedule_text(s)?,
        None => {
            let p = artifact.parent().unwrap_or(Path::new(".")).join(SCHEDULE_FILE);
            std::fs::read_to_string(&p).map_err(|e| CliError::io("read", &p, e))?
        }
    };
    let spec = ScheduleSpec::from_toml(&schedule_src)?;
    if spec.hash() != a.series.schedule_hash {
        return Err(CliError::Validation("schedule does not match the one recorded in the artifact".into()));
    }
    let schedule = Schedule::new(spec, a.series.prec)?;
    Ok((a.series, a.config_hash, schedule))
}

pub fn cmd_verify(cfg: &RunConfig, artifact: &Path, suite: Suite) -> CliResult<VerifyOutcome> {
    let (series, hash, schedule) = load(cfg, artifact)?;
    let mut w = Writer::new(&cfg.out, cfg)?;
    let checks = match suite {
        Suite::Growth => growth_suite(cfg, &series, &schedule)?,
        Suite::Targets => targets_suite(cfg, &series, &schedule)?,
        Suite::Uk => uk_suite(cfg, &series, &schedule, &mut w)?,
        Suite::Plessner => plessner_suite(cfg, &series, &mut w)?,
        Suite::Radial => radial_suite(cfg, &series, &mut w)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    w.toml(
        &format!("verify-{}.toml", suite.name()),
        &SuiteReport { suite, artifact_config_hash: &hash, passed, checks: &checks },
    )?;
    Ok(VerifyOutcome { checks, files: w.into_written() })
}

fn fresh(set: &CompactSet, grid: usize) -> CliResult<CompactSet> {
    let density = SampleDensity { boundary: grid.max(8), interior: (grid / 4).max(2) };
    Ok(CompactSet::sample(set.id.clone(), set.shape.clone(), density, set.precision())?)
}

fn sup<'a>(f: impl Fn(&ComplexValue) -> Real, pts: impl Iterator<Item = &'a ComplexValue>) -> f64 {
    pts.map(|z| f(z).to_f64()).fold(0.0, f64::max)
}

/// `max |q| / w` over the points where `w` is finite.
fn growth_ratio<'a>(q: &Poly, schedule: &Schedule, pts: impl Iterator<Item = &'a ComplexValue>) -> f64 {
    let w = schedule.weight();
    pts.filter_map(|z| {
        let wz = w.eval(z);
        (!wz.is_infinite()).then(|| (q.eval(z).abs() / wz).to_f64())
    })
    .fold(0.0, f64::max)
}

fn growth_suite(cfg: &RunConfig, series: &UniversalSeries, schedule: &Schedule) -> CliResult<Vec<Check>> {
    let g = cfg.params.grid;
    let a = fresh(&schedule.a, g)?;
    let mut checks = Vec::new();
    for (b, c) in series.blocks.iter().zip(&series.certificates) {
        let k = b.k;
        let q = b.q();
        let core = fresh(&schedule.core_set(k), g)?;
        let bound = c.requested_growth_ratio.to_f64();
        match series.domain {
            DomainKind::Disc => {
                let r = growth_ratio(&q, schedule, a.samples().chain(core.samples()));
                checks.push(Check::at_most(format!("step {k}: |q_k|/w on A and core"), r, bound));
            }
            DomainKind::Strip => {
                checks.push(Check::at_most(
                    format!("step {k}: |q_k|/w on A"),
                    growth_ratio(&q, schedule, a.samples()),
                    bound,
                ));
                let s = c.strip.as_ref().ok_or_else(|| CliError::Validation(format!("step {k} lacks strip bounds")))?;
                let core_sup = sup(|z| q.eval(z).abs(), core.samples());
                checks.push(Check::at_most(format!("step {k}: |q_k| on R_k"), core_sup, s.core_requested.to_f64()));
            }
        }
    }
    Ok(checks)
}

/// Degree of the partial sum compared with `p_k`: `n_{k+1} - 1` on the
/// disc, `deg(q_1 + ... + q_k)` on the strip.
fn target_degree(series: &UniversalSeries, j: usize) -> usize {
    match series.domain {
        DomainKind::Disc => series.blocks.get(j + 1).map_or(series.available_coefficients(), |b| b.exponent - 1),
        DomainKind::Strip => {
            let mut s = Poly::zero(series.prec);
            for b in &series.blocks[..=j] {
                s = &s + &b.q();
            }
            s.degree().max(0) as usize
        }
    }
}

fn targets_suite(cfg: &RunConfig, series: &UniversalSeries, schedule: &Schedule) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (j, c) in series.certificates.iter().enumerate() {
        let k = c.k;
        let set = fresh(&schedule.steps[j].set, cfg.params.grid)?;
        let partial = series.partial_sum(target_degree(series, j));
        let target = &schedule.steps[j].target;
        let err = sup(|z| (&target.eval(z) - &partial.eval(z)).abs(), set.samples());
        checks.push(Check::at_most(format!("step {k}: |p_k - S| on K_k"), err, c.requested_target_err.to_f64()));
        let cert = c.achieved_target_err.to_f64();
        checks.push(Check::at_most(format!("step {k}: fresh error within 2x certificate"), err, 2.0 * cert));
    }
    Ok(checks)
}

fn uk_suite(cfg: &RunConfig, series: &UniversalSeries, schedule: &Schedule, w: &mut Writer) -> CliResult<Vec<Check>> {
    if series.domain != DomainKind::Disc {
        return Err(CliError::Validation("the uk suite applies to disc series only".into()));
    }
    let bcfg = match series.mode {
        BuildMode::Strict => BuildConfig::strict(),
        BuildMode::Empirical => BuildConfig::empirical(),
    };
    let depth = series.depth();
    let builder = DiscBuilder::resume(schedule, bcfg, series.clone())?;
    let tail = match builder.next_exponent() {
        Ok(n) => Some(builder.tail_bound(n)),
        Err(utaylor_core::Error::Schedule(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let grid = polar_grid(0.75, cfg.params.uk_rings, cfg.params.uk_per_ring, series.prec);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=depth {
        let n = match (series.blocks.get(k), &tail) {
            (Some(b), _) => b.exponent - 1,
            (None, Some(t)) => t.valuation - 1,
            (None, None) => continue,
        };
        let rep = uk_diagnostic(series, n, &grid, tail.as_ref())?;
        for p in &rep.points {
            let status = match p.status {
                UkStatus::Below => "below",
                UkStatus::Above => "above",
                UkStatus::Indeterminate => "indeterminate",
            };
            rows.push(vec![
                k.to_string(),
                n.to_string(),
                num(p.z[0]),
                num(p.z[1]),
                num(p.u),
                num(p.margin),
                status.into(),
            ]);
        }
        checks.push(Check::at_least(
            format!("k = {k}, N = {n}: below or tail-indeterminate"),
            rep.fraction_below + rep.fraction_indeterminate,
            0.99,
        ));
    }
    w.csv("uk-margins.csv", &["k", "n", "re", "im", "u", "margin", "status"], &rows)?;
    if let Some(t) = tail {
        w.toml("uk-tail.toml", &TailRow::from(t))?;
    }
    Ok(checks)
}

#[derive(Serialize)]
struct TailRow {
    valuation: usize,
    radius: f64,
    sup: f64,
}

impl From<TailBound> for TailRow {
    fn from(t: TailBound) -> Self {
        TailRow { valuation: t.valuation, radius: t.radius, sup: t.sup }
    }
}

/// Boundary point drawn from the run seed.
pub fn seeded_theta(seed: u64) -> f64 {
    ChaCha8Rng::seed_from_u64(seed).gen::<f64>() * std::f64::consts::TAU
}

fn plessner_suite(cfg: &RunConfig, series: &UniversalSeries, w: &mut Writer) -> CliResult<Vec<Check>> {
    let p = &cfg.params;
    let theta = seeded_theta(cfg.seed);
    let region = ApproachRegion::from_params(RegionParams { theta, alpha: p.alpha, t: p.t }, series.prec)?;
    let window = Window::centered(p.window);
    let curve = plessner_curve(series, &region, window, p.coverage_grid, p.depth, p.per_level)?;
    let c0 = series.eval(&ComplexValue::zero(series.prec));
    let base = plessner_curve(&|_: &ComplexValue| c0.clone(), &region, window, p.coverage_grid, p.depth, p.per_level)?;
    let id = plessner_curve(&|z: &ComplexValue| z.clone(), &region, window, p.coverage_grid, p.depth, p.per_level)?;
    let rows: Vec<Vec<String>> = curve
        .iter()
        .zip(&base)
        .enumerate()
        .map(|(d, (c, b))| {
            vec![(d + 1).to_string(), num(c.hit_fraction), c.hit_cells().to_string(), num(b.hit_fraction)]
        })
        .collect();
    w.csv("plessner-coverage.csv", &["depth", "hit_fraction", "hit_cells", "baseline_fraction"], &rows)?;
    let last = curve.last().ok_or_else(|| CliError::Validation("depth must be positive".into()))?;
    let base_last = base.last().expect("same depth");
    let drops = curve.windows(2).filter(|p| p[1].hit_fraction < p[0].hit_fraction).count();
    let outside = id.last().expect("same depth").hits_outside_disc(Complex64::new(0.0, 0.0), 1.0);
    Ok(vec![
        Check::at_most("coverage non-decreasing in depth (drops)", drops as f64, 0.0),
        Check::at_least(
            format!("coverage at depth {} over constant baseline", p.depth),
            last.hit_fraction / base_last.hit_fraction.max(f64::MIN_POSITIVE),
            10.0,
        ),
        Check::at_most("bounded reference confined to its disc (cells outside)", outside as f64, 0.0),
    ])
}

fn radial_suite(cfg: &RunConfig, series: &UniversalSeries, w: &mut Writer) -> CliResult<Vec<Check>> {
    let p = &cfg.params;
    let theta = seeded_theta(cfg.seed);
    let prec = series.prec;
    let zeta = ComplexValue::unit(&prec.real(theta));
    let values: Vec<ComplexValue> = (1..=p.radial_levels)
        .map(|m| {
            let r = Real::with_val(prec.bits(), 1u32) - (Real::with_val(prec.bits(), 1u32) >> m as i32);
            series.eval(&zeta.scale(&r))
        })
        .collect();
    let window = Window::centered(p.window);
    let mut rows = Vec::new();
    let mut prev = 0.0;
    let mut drops = 0;
    for m in 1..=values.len() {
        let c = coverage(&values[..m], window, p.coverage_grid)?;
        let v = values[m - 1].to_c64();
        rows.push(vec![m.to_string(), num(v.re), num(v.im), num(v.norm()), num(c.hit_fraction)]);
        if c.hit_fraction < prev {
            drops += 1;
        }
        prev = c.hit_fraction;
    }
    w.csv("radial-density.csv", &["level", "re", "im", "abs", "hit_fraction"], &rows)?;
    Ok(vec![Check::at_most("radial coverage non-decreasing (drops)", drops as f64, 0.0)])
}
