//! Serializable report schema, version 1.
//!
//! Every exact in-memory rational is serialized as an integer (num, den)
//! pair; floats appear only in the optional timings block, which golden
//! comparisons exclude.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{GrowthStats, TriplingBoundCheck};
use crate::stability::StabilityProfile;
use crate::structure::CosetStructure;

pub const SCHEMA_VERSION: u32 = 1;

/// Exact rational as an integer pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRepr {
    pub num: u64,
    pub den: u64,
}

impl RatioRepr {
    pub fn from_rational(r: &BigRational) -> Result<RatioRepr> {
        let (num, den) = (r.numer().to_u64(), r.denom().to_u64());
        match (num, den) {
            (Some(num), Some(den)) => Ok(RatioRepr { num, den }),
            _ => Err(Error::InvalidParam(format!(
                "rational {r} exceeds the u64 report range"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub id: String,
    pub group: String,
    pub set: String,
    pub seed: u64,
    /// The resolved element indices.
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRepr {
    pub set_card: usize,
    pub doubling: RatioRepr,
    pub tripling: RatioRepr,
    pub symmetrized_card: usize,
    pub triple_cube_card: usize,
}

impl GrowthRepr {
    pub fn from_stats(s: &GrowthStats) -> Result<GrowthRepr> {
        Ok(GrowthRepr {
            set_card: s.set_card,
            doubling: RatioRepr::from_rational(&s.doubling)?,
            tripling: RatioRepr::from_rational(&s.tripling)?,
            symmetrized_card: s.symmetrized_card,
            triple_cube_card: s.triple_cube_card,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderRepr {
    pub r: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityRepr {
    pub cap: usize,
    pub max_ladder: usize,
    pub witness: Option<LadderRepr>,
    pub wn_degree: usize,
    pub wn_witness_point: Option<usize>,
    pub wn_undefined: bool,
    pub sidon: Option<bool>,
}

impl StabilityRepr {
    pub fn from_profile(p: &StabilityProfile) -> StabilityRepr {
        StabilityRepr {
            cap: p.cap,
            max_ladder: p.max_ladder,
            witness: p.witness.as_ref().map(|w| LadderRepr {
                r: w.r,
                a: w.a.clone(),
                b: w.b.clone(),
            }),
            wn_degree: p.wn_degree,
            wn_witness_point: p.wn_witness_point,
            wn_undefined: p.wn_undefined,
            sidon: p.sidon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureRepr {
    pub h: Vec<usize>,
    pub c: Vec<usize>,
    pub c_prime: Vec<usize>,
    pub symdiff: usize,
    pub ratio_h: RatioRepr,
    pub ratio_a: RatioRepr,
    pub cover_size: usize,
}

impl StructureRepr {
    pub fn from_structure(s: &CosetStructure) -> Result<StructureRepr> {
        Ok(StructureRepr {
            h: s.h.elements(),
            c: s.c.clone(),
            c_prime: s.c_prime.clone(),
            symdiff: s.symdiff,
            ratio_h: RatioRepr::from_rational(&s.ratio_h)?,
            ratio_a: RatioRepr::from_rational(&s.ratio_a)?,
            cover_size: s.cover_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckRepr {
    pub pass: bool,
    pub tripling: RatioRepr,
    pub bbb_card: usize,
    pub bound: RatioRepr,
    pub mu_a: RatioRepr,
}

impl BoundCheckRepr {
    pub fn from_check(c: &TriplingBoundCheck) -> Result<BoundCheckRepr> {
        Ok(BoundCheckRepr {
            pass: c.pass,
            tripling: RatioRepr::from_rational(&c.tripling)?,
            bbb_card: c.bbb_card,
            bound: RatioRepr::from_rational(&c.bound)?,
            mu_a: RatioRepr::from_rational(&c.mu_a)?,
        })
    }
}

/// Named pass/fail record with a human-readable detail string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationRepr {
    pub r: usize,
    pub k: usize,
    pub l: usize,
    pub valid: bool,
    pub degrees_b: Vec<usize>,
    pub degrees_c: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub instance: InstanceEcho,
    pub growth: GrowthRepr,
    pub stability: StabilityRepr,
    /// Pareto frontier of theorem_a_search when an eps was configured.
    pub structures: Vec<StructureRepr>,
    pub representation: Option<RepresentationRepr>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    /// Canonical byte encoding: pretty JSON plus a trailing newline.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Report> {
        Ok(serde_json::from_slice(bytes)?)
    }
}
