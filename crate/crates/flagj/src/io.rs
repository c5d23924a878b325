//! Config loading and report emission.
//!
//! Configs are JSON (TOML is accepted as a convenience at the loader);
//! all rationals travel as strings like `"2/3"` and Gaussian rationals as
//! `"p/q+r/si"`, so no floating point ever enters the pipeline.  Reports
//! serialize with a stable field order and sorted maps, so identical
//! configs produce byte-identical reports.

use crate::classify::Seeds;
use crate::gacs::{RootJ, Structure};
use crate::liealg::RegularElement;
use crate::rootsystem::{AlgebraSpec, RootSystem};
use crate::scalar::{parse_gauss, parse_rat};
use crate::twisted::{InvariantThreeForm, InvariantTwoForm};
use crate::FlagError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Deserialize, Serialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    pub family: String,
    pub rank: usize,
}

#[derive(Deserialize, Serialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct RawBlock {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
}

#[derive(Deserialize, Serialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub blocks: BTreeMap<String, RawBlock>,
}

#[derive(Deserialize, Serialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct RawSeed {
    pub a: String,
    pub x: String,
}

/// The on-disk run configuration.
#[derive(Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub algebra: Option<RawAlgebra>,
    #[serde(rename = "H", default)]
    pub h: Option<Vec<String>>,
    #[serde(default)]
    pub structure: Option<RawStructure>,
    #[serde(default)]
    pub theta: Option<Vec<String>>,
    #[serde(default)]
    pub seeds: Option<BTreeMap<String, RawSeed>>,
    #[serde(default)]
    pub signs: Option<BTreeMap<String, i8>>,
    #[serde(default)]
    pub omega: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConfigFormat {
    Json,
    Toml,
}

pub fn parse_config(text: &str, format: ConfigFormat) -> Result<RawConfig, FlagError> {
    match format {
        ConfigFormat::Json => serde_json::from_str(text)
            .map_err(|e| FlagError::Parse(format!("config JSON: {e}"))),
        ConfigFormat::Toml => {
            toml::from_str(text).map_err(|e| FlagError::Parse(format!("config TOML: {e}")))
        }
    }
}

/// Fully resolved inputs for one run.
pub struct Resolved {
    pub rs: RootSystem,
    pub h: RegularElement,
    pub structure: Option<Structure>,
    pub theta: Option<BTreeSet<usize>>,
    pub seeds: Option<Seeds>,
    pub signs: Option<BTreeMap<usize, bool>>,
    pub omega: Option<InvariantTwoForm>,
}

pub fn resolve(
    raw: &RawConfig,
    algebra_override: Option<AlgebraSpec>,
) -> Result<Resolved, FlagError> {
    let spec = match (algebra_override, &raw.algebra) {
        (Some(s), _) => s,
        (None, Some(a)) => AlgebraSpec::new(a.family.parse()?, a.rank)?,
        (None, None) => {
            return Err(FlagError::InvalidAlgebra(
                "no algebra given (config key \"algebra\" or --algebra)".into(),
            ))
        }
    };
    let rs = RootSystem::build(spec)?;

    let h = match &raw.h {
        None => RegularElement::ones(rs.rank()),
        Some(values) => {
            if values.len() != rs.rank() {
                return Err(FlagError::Parse(format!(
                    "H has {} entries, rank is {}",
                    values.len(),
                    rs.rank()
                )));
            }
            let c = values
                .iter()
                .map(|s| parse_rat(s).map_err(FlagError::Parse))
                .collect::<Result<Vec<_>, _>>()?;
            RegularElement::new(c)?
        }
    };

    let structure = raw
        .structure
        .as_ref()
        .map(|s| resolve_structure(&rs, s))
        .transpose()?;

    let theta = raw
        .theta
        .as_ref()
        .map(|names| {
            names
                .iter()
                .map(|n| rs.parse_simple(n))
                .collect::<Result<BTreeSet<_>, _>>()
        })
        .transpose()?;

    let seeds = raw
        .seeds
        .as_ref()
        .map(|m| {
            m.iter()
                .map(|(name, seed)| {
                    let idx = rs.parse_simple(name)?;
                    let a = parse_rat(&seed.a).map_err(FlagError::Parse)?;
                    let x = parse_rat(&seed.x).map_err(FlagError::Parse)?;
                    Ok((idx, (a, x)))
                })
                .collect::<Result<Seeds, FlagError>>()
        })
        .transpose()?;

    let signs = raw
        .signs
        .as_ref()
        .map(|m| {
            m.iter()
                .map(|(name, sign)| {
                    let idx = rs.parse_root(name)?;
                    let pos = match sign {
                        1 => true,
                        -1 => false,
                        other => {
                            return Err(FlagError::Parse(format!(
                                "sign for '{name}' must be 1 or -1, got {other}"
                            )))
                        }
                    };
                    Ok((idx, pos))
                })
                .collect::<Result<BTreeMap<usize, bool>, FlagError>>()
        })
        .transpose()?;

    let omega = raw
        .omega
        .as_ref()
        .map(|m| {
            let mut w = InvariantTwoForm::zero();
            for (name, value) in m {
                let idx = rs.parse_root(name)?;
                let g = parse_gauss(value).map_err(FlagError::Parse)?;
                w.set(idx, g);
            }
            Ok::<_, FlagError>(w)
        })
        .transpose()?;

    Ok(Resolved {
        rs,
        h,
        structure,
        theta,
        seeds,
        signs,
        omega,
    })
}

/// Decode a structure, requiring exactly one valid block per positive root.
pub fn resolve_structure(rs: &RootSystem, raw: &RawStructure) -> Result<Structure, FlagError> {
    let mut blocks: Vec<Option<RootJ>> = vec![None; rs.num_positive()];
    for (name, b) in &raw.blocks {
        let idx = rs.parse_root(name)?;
        if blocks[idx].is_some() {
            return Err(FlagError::InvalidStructure(format!(
                "duplicate block for root '{name}'"
            )));
        }
        blocks[idx] = Some(resolve_block(name, b)?);
    }
    let mut out = Vec::with_capacity(rs.num_positive());
    for (idx, b) in blocks.into_iter().enumerate() {
        match b {
            Some(j) => out.push(j),
            None => return Err(FlagError::MissingBlock(rs.root_name(idx))),
        }
    }
    let s = Structure::new(out, rs)?;
    crate::gacs::validate_or_err(&s, rs)?;
    Ok(s)
}

fn resolve_block(name: &str, raw: &RawBlock) -> Result<RootJ, FlagError> {
    match raw.kind.as_str() {
        "complex" => {
            let sign = raw.sign.ok_or_else(|| {
                FlagError::Parse(format!("complex block '{name}' needs \"sign\""))
            })?;
            match sign {
                1 => Ok(RootJ::complex(true)),
                -1 => Ok(RootJ::complex(false)),
                other => Err(FlagError::Parse(format!(
                    "sign of '{name}' must be 1 or -1, got {other}"
                ))),
            }
        }
        "noncomplex" => {
            let field = |v: &Option<String>, f: &str| {
                v.clone().ok_or_else(|| {
                    FlagError::Parse(format!("noncomplex block '{name}' needs \"{f}\""))
                })
            };
            let a = parse_rat(&field(&raw.a, "a")?).map_err(FlagError::Parse)?;
            let x = parse_rat(&field(&raw.x, "x")?).map_err(FlagError::Parse)?;
            let y = parse_rat(&field(&raw.y, "y")?).map_err(FlagError::Parse)?;
            Ok(RootJ::noncomplex(a, x, y))
        }
        other => Err(FlagError::Parse(format!(
            "block '{name}' has unknown kind '{other}'"
        ))),
    }
}

/// Structure in the external JSON shape.
pub fn structure_to_raw(rs: &RootSystem, s: &Structure) -> RawStructure {
    let mut blocks = BTreeMap::new();
    for (idx, j) in s.blocks().iter().enumerate() {
        let raw = match j {
            RootJ::Complex { pos } => RawBlock {
                kind: "complex".into(),
                sign: Some(if *pos { 1 } else { -1 }),
                a: None,
                x: None,
                y: None,
            },
            RootJ::NonComplex { a, x, y } => RawBlock {
                kind: "noncomplex".into(),
                sign: None,
                a: Some(a.to_string()),
                x: Some(x.to_string()),
                y: Some(y.to_string()),
            },
        };
        blocks.insert(rs.root_name(idx), raw);
    }
    RawStructure { blocks }
}

pub fn two_form_to_map(rs: &RootSystem, w: &InvariantTwoForm) -> BTreeMap<String, String> {
    w.entries()
        .map(|(idx, g)| (rs.root_name(*idx), g.to_string()))
        .collect()
}

pub fn three_form_to_map(rs: &RootSystem, o: &InvariantThreeForm) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for t in rs.zero_sum_triples() {
        let v = o.value(t);
        if !v.is_zero() {
            out.insert(rs.triple_name(t), v.to_string());
        }
    }
    out
}

#[derive(Serialize, Debug, Clone)]
pub struct TripleReport {
    pub triple: String,
    pub status: String,
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<[String; 2]>,
}

#[derive(Serialize, Debug, Clone)]
pub struct OracleReport {
    pub agreed: bool,
    pub integrable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct SurveyRow {
    pub theta: Vec<String>,
    pub closure_size: usize,
    pub admissible_patterns: u64,
    pub total_patterns: u64,
}

#[derive(Serialize, Debug, Clone)]
pub struct RootInfo {
    pub name: String,
    pub height: i64,
    pub coeffs: Vec<i64>,
    pub length_sq: String,
}

/// Machine-readable run report.  Maps are sorted and the field order is
/// fixed, so serialization is deterministic.
#[derive(Serialize, Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub algebra: String,
    pub ok: bool,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<TripleReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_system: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<RawStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega3: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survey: Option<Vec<SurveyRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<RootInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, algebra: &str) -> Self {
        Report {
            command: command.into(),
            algebra: algebra.into(),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
