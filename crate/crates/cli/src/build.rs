//! `utaylor build`: runs a builder and writes the series artifact, a
//! certificate report and a summary.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use utaylor_core::universal::{
    write_artifact, BuildConfig, BuildMode, DiscBuilder, DomainKind, Schedule, ScheduleSpec, StepCertificate,
    StripBuilder, UniversalSeries,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::Writer;

pub const ARTIFACT_FILE: &str = "series.utaylor";
pub const SCHEDULE_FILE: &str = "schedule.toml";
pub const CERTIFICATES_FILE: &str = "certificates.toml";
pub const SUMMARY_FILE: &str = "summary.txt";

pub struct BuildOutcome {
    pub series: UniversalSeries,
    pub files: Vec<PathBuf>,
    /// Steps whose certificate records a missed required bound.
    pub relaxations: usize,
}

enum Builder<'s> {
    Disc(DiscBuilder<'s>),
    Strip(StripBuilder<'s>),
}

impl Builder<'_> {
    fn step(&mut self) -> utaylor_core::Result<()> {
        match self {
            Builder::Disc(b) => b.step().map(|_| ()),
            Builder::Strip(b) => b.step().map(|_| ()),
        }
    }

    fn series(&self) -> &UniversalSeries {
        match self {
            Builder::Disc(b) => b.series(),
            Builder::Strip(b) => b.series(),
        }
    }
}

#[derive(Serialize)]
struct CertReport {
    domain: DomainKind,
    mode: BuildMode,
    schedule_hash: String,
    steps_requested: usize,
    steps_built: usize,
    all_met: bool,
    relaxations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    steps: Vec<CertRow>,
}

#[derive(Serialize)]
struct CertRow {
    k: usize,
    n_k: usize,
    exponent_condition_met: bool,
    growth_ratio: f64,
    growth_ratio_bound: f64,
    growth_margin: f64,
    target_err: f64,
    target_bound: f64,
    mergelyan_tol_required: f64,
    mergelyan_tol_used: f64,
    mergelyan_achieved: f64,
    mergelyan_degree: usize,
    validation_points: usize,
    all_met: bool,
    misses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strip: Option<StripRow>,
}

#[derive(Serialize)]
struct StripRow {
    delta: f64,
    delta_used: f64,
    core_sup: f64,
    core_bound: f64,
    step_target_err: f64,
    step_target_bound: f64,
}

fn row(c: &StepCertificate) -> CertRow {
    CertRow {
        k: c.k,
        n_k: c.n_k,
        exponent_condition_met: c.exponent_condition_met,
        growth_ratio: c.achieved_growth_ratio.to_f64(),
        growth_ratio_bound: c.requested_growth_ratio.to_f64(),
        growth_margin: c.achieved_growth_margin.to_f64(),
        target_err: c.achieved_target_err.to_f64(),
        target_bound: c.requested_target_err.to_f64(),
        mergelyan_tol_required: c.mergelyan_tol_required.to_f64(),
        mergelyan_tol_used: c.mergelyan_tol_used.to_f64(),
        mergelyan_achieved: c.mergelyan_achieved.to_f64(),
        mergelyan_degree: c.mergelyan_degree,
        validation_points: c.validation_points,
        all_met: c.all_met(),
        misses: c.misses(),
        strip: c.strip.as_ref().map(|s| StripRow {
            delta: s.delta.to_f64(),
            delta_used: s.delta_used.to_f64(),
            core_sup: s.core_achieved.to_f64(),
            core_bound: s.core_requested.to_f64(),
            step_target_err: s.step_target_achieved.to_f64(),
            step_target_bound: s.step_target_requested.to_f64(),
        }),
    }
}

pub fn load_schedule(cfg: &RunConfig) -> CliResult<Schedule> {
    let spec = ScheduleSpec::from_toml(&cfg.schedule_text()?)?;
    Ok(Schedule::new(spec, cfg.precision()?)?)
}

pub fn cmd_build(cfg: &RunConfig) -> CliResult<BuildOutcome> {
    let schedule = load_schedule(cfg)?;
    let k_max = cfg.params.k_max.unwrap_or(schedule.steps.len());
    if k_max == 0 || k_max > schedule.steps.len() {
        return Err(CliError::Validation(format!(
            "K_max = {k_max} must lie in 1..={} for this schedule",
            schedule.steps.len()
        )));
    }
    let bcfg = match cfg.mode {
        BuildMode::Strict => BuildConfig::strict(),
        BuildMode::Empirical => BuildConfig::empirical(),
    };
    let mut builder = match schedule.domain() {
        DomainKind::Disc => Builder::Disc(DiscBuilder::new(&schedule, bcfg)?),
        DomainKind::Strip => Builder::Strip(StripBuilder::new(&schedule, bcfg)?),
    };
    let mut failure = None;
    for _ in 0..k_max {
        if let Err(e) = builder.step() {
            failure = Some(e);
            break;
        }
    }
    // A non-certificate failure leaves nothing worth writing.
    let failure = match failure {
        Some(e @ utaylor_core::Error::Certificate { .. }) => Some(e),
        Some(e) => return Err(e.into()),
        None => None,
    };
    let series = builder.series().clone();
    let relaxations = series.certificates.iter().filter(|c| !c.all_met()).count();

    let mut w = Writer::new(&cfg.out, cfg)?;
    w.text(SCHEDULE_FILE, &schedule.spec.to_toml())?;
    w.artifact(ARTIFACT_FILE, &write_artifact(&series, &cfg.hash()))?;
    let report = CertReport {
        domain: series.domain,
        mode: series.mode,
        schedule_hash: series.schedule_hash.clone(),
        steps_requested: k_max,
        steps_built: series.depth(),
        all_met: failure.is_none() && relaxations == 0,
        relaxations,
        failure: failure.as_ref().map(|e| e.to_string()),
        steps: series.certificates.iter().map(row).collect(),
    };
    w.toml(CERTIFICATES_FILE, &report)?;
    w.text(SUMMARY_FILE, &summary(&schedule, &series, k_max, failure.as_ref()))?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(BuildOutcome { series, files: w.into_written(), relaxations }),
    }
}

fn summary(
    schedule: &Schedule,
    series: &UniversalSeries,
    k_max: usize,
    failure: Option<&utaylor_core::Error>,
) -> String {
    let mut s = String::new();
    let mode = match series.mode {
        BuildMode::Strict => "strict",
        BuildMode::Empirical => "empirical",
    };
    let _ = writeln!(
        s,
        "{:?} series, {mode} mode, {} bits, {}/{} steps built",
        series.domain,
        series.prec.bits(),
        series.depth(),
        k_max
    );
    for w in &schedule.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    for c in &series.certificates {
        let _ = writeln!(
            s,
            "step {}: n_k = {}, degree {}, growth {:.3e} (bound {:.3e}), target {:.3e} (bound {:.3e}), {}",
            c.k,
            c.n_k,
            c.mergelyan_degree,
            c.achieved_growth_ratio.to_f64(),
            c.requested_growth_ratio.to_f64(),
            c.achieved_target_err.to_f64(),
            c.requested_target_err.to_f64(),
            if c.all_met() { "met" } else { "relaxed" }
        );
        for m in c.misses() {
            let _ = writeln!(s, "  relaxation: {m}");
        }
    }
    let relaxed = series.certificates.iter().filter(|c| !c.all_met()).count();
    let _ = writeln!(s, "relaxations: {relaxed}");
    if let Some(e) = failure {
        let _ = writeln!(s, "FAILED: {e}");
    }
    s
}
