//! Constructive universal Taylor series: schedules, the disc and strip
//! builders, certificates, and the on-disk artifact.

pub mod artifact;
mod check;
pub mod conformal;
pub mod disc;
pub mod schedule;
pub mod series;
pub mod strip;

use serde::{Deserialize, Serialize};

use crate::approx::ApproxConfig;

pub use artifact::{read_artifact, write_artifact, Artifact};
pub use conformal::{conformal_fminus, conformal_fplus};
pub use disc::{build_universal_disc, choose_exponent_disc, DiscBuilder};
pub use schedule::{BuildMode, BuildParams, DomainKind, Schedule, ScheduleSpec, StepSpec, WeightFn};
pub use series::{series_coefficient, Block, StepCertificate, StripBounds, UniversalSeries};
pub use strip::{build_universal_strip, choose_delta_k, choose_exponent_strip, StripBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub mode: BuildMode,
    pub approx: ApproxConfig,
}

impl BuildConfig {
    pub fn strict() -> Self {
        BuildConfig { mode: BuildMode::Strict, approx: ApproxConfig::default() }
    }

    pub fn empirical() -> Self {
        BuildConfig { mode: BuildMode::Empirical, approx: ApproxConfig::default() }
    }
}

/// Builds `k_max` blocks with the builder matching the schedule's domain.
pub fn build_universal(schedule: &Schedule, k_max: usize, cfg: BuildConfig) -> crate::error::Result<UniversalSeries> {
    match schedule.domain() {
        DomainKind::Disc => build_universal_disc(schedule, k_max, cfg),
        DomainKind::Strip => build_universal_strip(schedule, k_max, cfg),
    }
}
