//! Full arithmetic classification of a single pure cubic field.

use serde::Serialize;

use crate::arith::{normalize_radicand, Radicand, Species};
use crate::conductor::{conductor_of, multiplicity, Conductor};
use crate::error::Result;
use crate::pftype::{possible_types, resolve_type, PfConstraints, PfResolution, PfType, ResolutionMethod};
use crate::rank::{
    bwb_bounds, classify_item, ramification_profile, BwbProfile, RamificationProfile, TheoremItem,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldClassification {
    pub radicand: Radicand,
    pub conductor: Conductor,
    pub m: u64,
    pub profile: RamificationProfile,
    pub item: TheoremItem,
    pub bwb: BwbProfile,
    pub constraints: PfConstraints,
    pub resolution: PfResolution,
}

/// Classifies the field generated by `n` (any integer that is not a cube).
pub fn classify(n: u64) -> Result<FieldClassification> {
    classify_radicand(normalize_radicand(n)?)
}

pub fn classify_radicand(radicand: Radicand) -> Result<FieldClassification> {
    let conductor = conductor_of(&radicand);
    let m = multiplicity(&conductor)?;
    let profile = ramification_profile(&conductor);
    let item = classify_item(&conductor);
    let bwb = bwb_bounds(&conductor);
    let constraints = possible_types(&conductor, &profile)?;
    let resolution = resolve_type(&conductor, item, &constraints)?;
    Ok(FieldClassification {
        radicand,
        conductor,
        m,
        profile,
        item,
        bwb,
        constraints,
        resolution,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BwbSummary {
    pub lower: i32,
    pub upper: i32,
    pub exact_r: Option<u32>,
}

/// Flat record emitted by `classify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyRecord {
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
    pub species: Species,
    pub f: u64,
    pub m: u64,
    pub t: u32,
    pub s: u32,
    pub qstar: u32,
    pub rank: u32,
    pub item: TheoremItem,
    pub bwb: BwbSummary,
    pub possible_types: Vec<PfType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_type: Option<PfType>,
    pub method: ResolutionMethod,
    pub conjectural: bool,
}

impl FieldClassification {
    pub fn record(&self) -> ClassifyRecord {
        ClassifyRecord {
            d: self.radicand.d,
            d1: self.radicand.d1,
            d2: self.radicand.d2,
            species: self.radicand.species,
            f: self.conductor.f,
            m: self.m,
            t: self.profile.t,
            s: self.profile.s,
            qstar: self.profile.qstar,
            rank: self.profile.ambiguous_rank,
            item: self.item,
            bwb: BwbSummary {
                lower: self.bwb.lower,
                upper: self.bwb.upper,
                exact_r: self.bwb.exact_r,
            },
            possible_types: self.constraints.possible.clone(),
            resolved_type: self.resolution.resolved,
            method: self.resolution.method,
            conjectural: self.resolution.conjectural,
        }
    }
}
