//! Text artifact for a built series: a magic line followed by TOML in which
//! every multiprecision value is a hex float, so a round trip is bit-exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::hexfloat::{decode_complex, decode_real, encode_complex, encode_real};
use crate::numerics::{Poly, Precision, Real};

use super::schedule::{BuildMode, DomainKind};
use super::series::{Block, StepCertificate, StripBounds, UniversalSeries};

pub const MAGIC: &str = "UTAYLOR-SERIES 1";

#[derive(Serialize, Deserialize)]
struct FileRec {
    domain: DomainKind,
    mode: BuildMode,
    precision: u32,
    schedule_hash: String,
    config_hash: String,
    blocks: Vec<BlockRec>,
    certificates: Vec<CertRec>,
}

#[derive(Serialize, Deserialize)]
struct BlockRec {
    k: usize,
    shift: usize,
    exponent: usize,
    qstar: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CertRec {
    k: usize,
    n_k: usize,
    exponent_condition_met: bool,
    requested_growth_ratio: String,
    achieved_growth_ratio: String,
    requested_growth_bound: String,
    achieved_growth_margin: String,
    requested_target_err: String,
    achieved_target_err: String,
    mergelyan_tol_required: String,
    mergelyan_tol_used: String,
    mergelyan_achieved: String,
    mergelyan_degree: usize,
    validation_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relaxation_note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strip: Option<StripRec>,
}

#[derive(Serialize, Deserialize)]
struct StripRec {
    delta: String,
    delta_used: String,
    w_core: String,
    b: [String; 2],
    c: [String; 2],
    core_requested: String,
    core_achieved: String,
    step_target_requested: String,
    step_target_achieved: String,
}

/// A series read back from disk with the hash of the run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub series: UniversalSeries,
    pub config_hash: String,
}

pub fn write_artifact(series: &UniversalSeries, config_hash: &str) -> String {
    let e = encode_real;
    let rec = FileRec {
        domain: series.domain,
        mode: series.mode,
        precision: series.prec.bits(),
        schedule_hash: series.schedule_hash.clone(),
        config_hash: config_hash.to_string(),
        blocks: series
            .blocks
            .iter()
            .map(|b| BlockRec {
                k: b.k,
                shift: b.shift,
                exponent: b.exponent,
                qstar: b.qstar.coeffs().iter().map(encode_complex).collect(),
            })
            .collect(),
        certificates: series
            .certificates
            .iter()
            .map(|c| CertRec {
                k: c.k,
                n_k: c.n_k,
                exponent_condition_met: c.exponent_condition_met,
                requested_growth_ratio: e(&c.requested_growth_ratio),
                achieved_growth_ratio: e(&c.achieved_growth_ratio),
                requested_growth_bound: e(&c.requested_growth_bound),
                achieved_growth_margin: e(&c.achieved_growth_margin),
                requested_target_err: e(&c.requested_target_err),
                achieved_target_err: e(&c.achieved_target_err),
                mergelyan_tol_required: e(&c.mergelyan_tol_required),
                mergelyan_tol_used: e(&c.mergelyan_tol_used),
                mergelyan_achieved: e(&c.mergelyan_achieved),
                mergelyan_degree: c.mergelyan_degree,
                validation_points: c.validation_points,
                relaxation_note: c.relaxation_note.clone(),
                strip: c.strip.as_ref().map(|s| StripRec {
                    delta: e(&s.delta),
                    delta_used: e(&s.delta_used),
                    w_core: e(&s.w_core),
                    b: encode_complex(&s.b),
                    c: encode_complex(&s.c),
                    core_requested: e(&s.core_requested),
                    core_achieved: e(&s.core_achieved),
                    step_target_requested: e(&s.step_target_requested),
                    step_target_achieved: e(&s.step_target_achieved),
                }),
            })
            .collect(),
    };
    let body = toml::to_string(&rec).expect("artifact serializes");
    format!("{MAGIC}\n{body}")
}

pub fn read_artifact(text: &str) -> Result<Artifact> {
    let body = text
        .strip_prefix(MAGIC)
        .and_then(|r| r.strip_prefix('\n'))
        .ok_or_else(|| Error::Format(format!("missing magic line {MAGIC:?}")))?;
    let rec: FileRec = toml::from_str(body).map_err(|e| Error::Format(format!("bad artifact body: {e}")))?;
    let prec = Precision::new(rec.precision)?;
    let r = |s: &str| -> Result<Real> { decode_real(s, prec) };
    if rec.blocks.len() != rec.certificates.len() {
        return Err(Error::Format("block and certificate counts differ".into()));
    }
    let mut series = UniversalSeries::new(rec.domain, rec.mode, prec, rec.schedule_hash);
    for (b, c) in rec.blocks.into_iter().zip(rec.certificates) {
        let coeffs = b.qstar.iter().map(|pair| decode_complex(pair, prec)).collect::<Result<Vec<_>>>()?;
        let block = Block { k: b.k, shift: b.shift, exponent: b.exponent, qstar: Poly::new(prec, coeffs) };
        let strip = match c.strip {
            None => None,
            Some(s) => Some(StripBounds {
                delta: r(&s.delta)?,
                delta_used: r(&s.delta_used)?,
                w_core: r(&s.w_core)?,
                b: decode_complex(&s.b, prec)?,
                c: decode_complex(&s.c, prec)?,
                core_requested: r(&s.core_requested)?,
                core_achieved: r(&s.core_achieved)?,
                step_target_requested: r(&s.step_target_requested)?,
                step_target_achieved: r(&s.step_target_achieved)?,
            }),
        };
        let cert = StepCertificate {
            k: c.k,
            n_k: c.n_k,
            exponent_condition_met: c.exponent_condition_met,
            requested_growth_ratio: r(&c.requested_growth_ratio)?,
            achieved_growth_ratio: r(&c.achieved_growth_ratio)?,
            requested_growth_bound: r(&c.requested_growth_bound)?,
            achieved_growth_margin: r(&c.achieved_growth_margin)?,
            requested_target_err: r(&c.requested_target_err)?,
            achieved_target_err: r(&c.achieved_target_err)?,
            mergelyan_tol_required: r(&c.mergelyan_tol_required)?,
            mergelyan_tol_used: r(&c.mergelyan_tol_used)?,
            mergelyan_achieved: r(&c.mergelyan_achieved)?,
            mergelyan_degree: c.mergelyan_degree,
            validation_points: c.validation_points,
            strip,
            relaxation_note: c.relaxation_note,
        };
        series.push(block, cert);
    }
    Ok(Artifact { series, config_hash: rec.config_hash })
}
