//! JSON schemas for densities, block collections, paths, and laws.
//!
//! Rationals serialize as `"p/q"` strings so exact artifacts never pass
//! through floats. Every written document embeds the schema version;
//! readers accept documents without one.

use serde::{Deserialize, Serialize};

use crate::assembly::{FillMode, Knot, PiecewiseLinearPath};
use crate::blocks::{Block, BlockCollection, BlockKind};
use crate::density::{DensityReport, StepDensity};
use crate::error::{Error, Result};
use crate::oracle::{Provenance, SupLocationLaw};
use crate::rat::{fmt_rat, parse_rat};

pub const SCHEMA_VERSION: &str = "1";

fn check_version(v: &Option<String>) -> Result<()> {
    match v {
        None => Ok(()),
        Some(v) if v == SCHEMA_VERSION => Ok(()),
        Some(v) => Err(Error::Structural(format!(
            "unsupported schema version {v:?}, expected {SCHEMA_VERSION:?}"
        ))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub until: String,
    pub value: String,
}

/// `{"T": "p/q", "pieces": [{"until": …, "value": …}, …]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(rename = "T")]
    pub t_end: String,
    pub pieces: Vec<PieceJson>,
}

pub fn density_to_json(f: &StepDensity) -> DensityJson {
    let pieces = f
        .breaks()
        .iter()
        .skip(1)
        .zip(f.values())
        .map(|(b, v)| PieceJson { until: fmt_rat(b), value: fmt_rat(v) })
        .collect();
    DensityJson {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        t_end: fmt_rat(f.t_end()),
        pieces,
    }
}

pub fn density_from_json(j: &DensityJson) -> Result<StepDensity> {
    check_version(&j.schema_version)?;
    let t_end = parse_rat(&j.t_end)?;
    let mut pieces = Vec::with_capacity(j.pieces.len());
    for p in &j.pieces {
        pieces.push((parse_rat(&p.until)?, parse_rat(&p.value)?));
    }
    StepDensity::from_pieces(&t_end, &pieces)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockJson {
    pub kind: String,
    pub u: String,
    pub v: String,
}

/// `{"T": …, "H": …, "blocks": [{"kind": …, "u": …, "v": …}, …]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlocksJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(rename = "T")]
    pub t_end: String,
    #[serde(rename = "H")]
    pub period_factor: String,
    pub blocks: Vec<BlockJson>,
}

pub fn blocks_to_json(c: &BlockCollection) -> BlocksJson {
    BlocksJson {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        t_end: fmt_rat(c.t_end()),
        period_factor: fmt_rat(c.period_factor()),
        blocks: c
            .blocks()
            .iter()
            .map(|b| BlockJson {
                kind: b.kind.as_str().to_string(),
                u: fmt_rat(&b.u),
                v: fmt_rat(&b.v),
            })
            .collect(),
    }
}

pub fn blocks_from_json(j: &BlocksJson) -> Result<BlockCollection> {
    check_version(&j.schema_version)?;
    let t_end = parse_rat(&j.t_end)?;
    let h = parse_rat(&j.period_factor)?;
    let mut blocks = Vec::with_capacity(j.blocks.len());
    for b in &j.blocks {
        let blk = Block::new(parse_rat(&b.u)?, parse_rat(&b.v)?, &t_end)?;
        let declared = BlockKind::parse(&b.kind)?;
        if declared != blk.kind {
            return Err(Error::Structural(format!(
                "block ({}, {}) declared {} but classifies as {}",
                b.u,
                b.v,
                b.kind,
                blk.kind.as_str()
            )));
        }
        blocks.push(blk);
    }
    BlockCollection::new(t_end, h, blocks)
}

/// `{"period": …, "knots": [["pos", "val"], …], "mode": …}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    pub period: String,
    pub knots: Vec<(String, String)>,
    pub mode: String,
}

pub fn path_to_json(p: &PiecewiseLinearPath, mode: FillMode) -> PathJson {
    PathJson {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        period: fmt_rat(p.period()),
        knots: p
            .knots()
            .iter()
            .map(|k| (fmt_rat(&k.pos), fmt_rat(&k.val)))
            .collect(),
        mode: mode.as_str().to_string(),
    }
}

pub fn path_from_json(j: &PathJson) -> Result<(PiecewiseLinearPath, FillMode)> {
    check_version(&j.schema_version)?;
    let period = parse_rat(&j.period)?;
    let mut knots = Vec::with_capacity(j.knots.len());
    for (p, v) in &j.knots {
        knots.push(Knot { pos: parse_rat(p)?, val: parse_rat(v)? });
    }
    Ok((PiecewiseLinearPath::new(period, knots)?, FillMode::parse(&j.mode)?))
}

/// `{"T": …, "atom0": …, "atomT": …, "interior": [...], "provenance": …}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(rename = "T")]
    pub t_end: String,
    pub atom0: String,
    #[serde(rename = "atomT")]
    pub atom_t: String,
    pub interior: Vec<PieceJson>,
    pub provenance: String,
}

pub fn law_to_json(law: &SupLocationLaw) -> LawJson {
    LawJson {
        schema_version: Some(SCHEMA_VERSION.to_string()),
        t_end: fmt_rat(&law.t_end),
        atom0: fmt_rat(&law.atom0),
        atom_t: fmt_rat(&law.atom_t),
        interior: density_to_json(&law.interior).pieces,
        provenance: law.provenance.as_str().to_string(),
    }
}

pub fn law_from_json(j: &LawJson) -> Result<SupLocationLaw> {
    check_version(&j.schema_version)?;
    let t_end = parse_rat(&j.t_end)?;
    let mut pieces = Vec::with_capacity(j.interior.len());
    for p in &j.interior {
        pieces.push((parse_rat(&p.until)?, parse_rat(&p.value)?));
    }
    Ok(SupLocationLaw {
        interior: StepDensity::from_pieces(&t_end, &pieces)?,
        t_end,
        atom0: parse_rat(&j.atom0)?,
        atom_t: parse_rat(&j.atom_t)?,
        provenance: Provenance::parse(&j.provenance)?,
    })
}

/// Validation report as emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityReportJson {
    pub schema_version: String,
    pub tv: String,
    pub f0plus: String,
    #[serde(rename = "fTminus")]
    pub ft_minus: String,
    pub inf_value: String,
    pub integral: String,
    pub is_uniform: bool,
    pub passes_a: bool,
    pub passes_b: bool,
    pub passes_c: bool,
    pub passes_universal_bound: bool,
    pub admissible: bool,
}

pub fn report_to_json(r: &DensityReport) -> DensityReportJson {
    DensityReportJson {
        schema_version: SCHEMA_VERSION.to_string(),
        tv: fmt_rat(&r.tv),
        f0plus: fmt_rat(&r.f0plus),
        ft_minus: fmt_rat(&r.ftminus),
        inf_value: fmt_rat(&r.inf_value),
        integral: fmt_rat(&r.integral),
        is_uniform: r.is_uniform,
        passes_a: r.passes_a,
        passes_b: r.passes_b,
        passes_c: r.passes_c,
        passes_universal_bound: r.passes_universal_bound,
        admissible: r.admissible(),
    }
}
