//! Sweep over all normalized radicands `d < max_d`, tallying species,
//! theorem items, principal factorization types, and multiplet
//! completeness.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{sieve_spf, Radicand, SpfTable, Species, MAX_SIEVE_LIMIT};
use crate::conductor::companion_values;
use crate::error::{Error, Result};
use crate::field::classify_radicand;
use crate::pftype::{
    check_record_standalone, read_class_records, ClassDataRecord, PfType, ResolutionMethod,
    Violation,
};
use crate::rank::{
    ismaili2_item5_has_q8, matches_rank_one_form, matches_rank_zero_form, TheoremItem,
};

pub const PARADIGM_CAP: usize = 8;
const CHUNK: u64 = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableId {
    Species,
    Honda,
    Ismaili1,
    Ismaili2,
    Typesplit,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::Species,
        TableId::Honda,
        TableId::Ismaili1,
        TableId::Ismaili2,
        TableId::Typesplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Species => "species",
            TableId::Honda => "honda",
            TableId::Ismaili1 => "ismaili1",
            TableId::Ismaili2 => "ismaili2",
            TableId::Typesplit => "typesplit",
        }
    }

    /// Parses a comma-separated list such as `honda,ismaili1`.
    pub fn parse_list(s: &str) -> Result<Vec<TableId>> {
        let mut out: Vec<TableId> = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown table {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    /// Exclusive bound on normalized radicands.
    pub max_d: u64,
    pub jobs: usize,
    pub tables: Vec<TableId>,
    pub ingest: Option<PathBuf>,
}

impl CensusConfig {
    pub fn new(max_d: u64) -> Self {
        Self {
            max_d,
            jobs: 1,
            tables: TableId::ALL.to_vec(),
            ingest: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_SIEVE_LIMIT).contains(&self.max_d) {
            return Err(Error::Config(format!(
                "max_d must lie in [2, {MAX_SIEVE_LIMIT}], got {}",
                self.max_d
            )));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if self.tables.is_empty() {
            return Err(Error::Config("no tables selected".into()));
        }
        Ok(())
    }
}

/// The smallest radicands seen, increasing, at most [`PARADIGM_CAP`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Paradigms(Vec<u64>);

impl Paradigms {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    fn push(&mut self, d: u64) {
        if self.0.len() == PARADIGM_CAP && d >= self.0[PARADIGM_CAP - 1] {
            return;
        }
        let at = self.0.partition_point(|&x| x < d);
        self.0.insert(at, d);
        self.0.truncate(PARADIGM_CAP);
    }

    fn merge(&mut self, other: &Paradigms) {
        for &d in &other.0 {
            self.push(d);
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub count: u64,
    pub paradigms: Paradigms,
}

impl Tally {
    fn add(&mut self, d: u64) {
        self.count += 1;
        self.paradigms.push(d);
    }

    fn merge(&mut self, other: &Tally) {
        self.count += other.count;
        self.paradigms.merge(&other.paradigms);
    }
}

/// Fields of multiplets (`m ≥ 2`) split by whether every companion lies
/// below the bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MultipletTally {
    /// Complete multiplets, counted once at their smallest member.
    pub complete: u64,
    /// Fields belonging to complete multiplets.
    pub complete_fields: u64,
    /// Fields whose multiplet has a companion at or above the bound.
    pub pseudo: u64,
}

impl MultipletTally {
    fn merge(&mut self, o: &MultipletTally) {
        self.complete += o.complete;
        self.complete_fields += o.complete_fields;
        self.pseudo += o.pseudo;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupTally {
    pub fields: Tally,
    pub multiplets: MultipletTally,
}

impl GroupTally {
    fn merge(&mut self, o: &GroupTally) {
        self.fields.merge(&o.fields);
        self.multiplets.merge(&o.multiplets);
    }
}

/// Resolved types of the members of a complete multiplet, sorted;
/// `None` marks an unresolved member.
pub type TypePattern = Vec<Option<PfType>>;

pub fn pattern_label(p: &TypePattern) -> String {
    let names: Vec<&str> = p
        .iter()
        .map(|t| t.map(PfType::name).unwrap_or("unresolved"))
        .collect();
    format!("({})", names.join(","))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ItemTally {
    pub all: GroupTally,
    pub by_type: BTreeMap<Option<PfType>, GroupTally>,
    pub patterns: BTreeMap<TypePattern, Tally>,
    /// Sub-rows keyed by variant shape (only for `Ismaili2(5)`).
    pub variants: BTreeMap<&'static str, GroupTally>,
}

impl ItemTally {
    fn merge(&mut self, o: &ItemTally) {
        self.all.merge(&o.all);
        for (k, v) in &o.by_type {
            self.by_type.entry(*k).or_default().merge(v);
        }
        for (k, v) in &o.patterns {
            self.patterns.entry(k.clone()).or_default().merge(v);
        }
        for (k, v) in &o.variants {
            self.variants.entry(k).or_default().merge(v);
        }
    }
}

pub const VARIANT_Q25: &str = "9q1q2, q1,q2≡2,5 (9)";
pub const VARIANT_Q8: &str = "9q1q2, q1≡2,5 (9), q2≡8 (9)";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusTables {
    pub max_d: u64,
    pub tables: Vec<TableId>,
    pub total_fields: u64,
    pub species: BTreeMap<Species, Tally>,
    pub items: BTreeMap<TheoremItem, ItemTally>,
    pub rank_distribution: BTreeMap<u32, u64>,
    /// Fields with `m(f) = 1`.
    pub singulets: u64,
    /// `Σ m(f)` over complete multiplets.
    pub complete_multiplet_fields: u64,
    pub pseudo_fields: u64,
    /// Some field was typed by the conjectured direction of the symbol test.
    pub conjectural_rules_used: bool,
    pub sampled_checks: u64,
    /// Findings from ingested records, sorted by radicand.
    pub findings: Vec<Violation>,
}

impl CensusTables {
    fn merge(&mut self, o: &CensusTables) {
        self.total_fields += o.total_fields;
        for (k, v) in &o.species {
            self.species.entry(*k).or_default().merge(v);
        }
        for (k, v) in &o.items {
            self.items.entry(*k).or_default().merge(v);
        }
        for (k, v) in &o.rank_distribution {
            *self.rank_distribution.entry(*k).or_default() += v;
        }
        self.singulets += o.singulets;
        self.complete_multiplet_fields += o.complete_multiplet_fields;
        self.pseudo_fields += o.pseudo_fields;
        self.conjectural_rules_used |= o.conjectural_rules_used;
        self.sampled_checks += o.sampled_checks;
    }

    pub fn item(&self, item: TheoremItem) -> ItemTally {
        self.items.get(&item).cloned().unwrap_or_default()
    }

    pub fn item_count(&self, item: TheoremItem) -> u64 {
        self.items.get(&item).map_or(0, |t| t.all.fields.count)
    }

    pub fn species_count(&self, s: Species) -> u64 {
        self.species.get(&s).map_or(0, |t| t.count)
    }

    pub fn type_count(&self, item: TheoremItem, ty: Option<PfType>) -> u64 {
        self.items
            .get(&item)
            .and_then(|t| t.by_type.get(&ty))
            .map_or(0, |g| g.fields.count)
    }

    pub fn has_hard_findings(&self) -> bool {
        self.findings.iter().any(|v| v.kind.is_hard())
    }
}

/// Record lookup shared read-only by the workers.
type Ingest = HashMap<u64, ClassDataRecord>;

fn load_ingest(cfg: &CensusConfig) -> Result<Vec<ClassDataRecord>> {
    let Some(path) = &cfg.ingest else {
        return Ok(Vec::new());
    };
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Config(format!("cannot open ingest file {}: {e}", path.display())))?;
    read_class_records(file)
}

pub fn run_census(cfg: &CensusConfig) -> Result<CensusTables> {
    cfg.validate()?;
    let records = load_ingest(cfg)?;
    run_census_with_records(cfg, records)
}

/// [`run_census`] with class data supplied directly.
pub fn run_census_with_records(
    cfg: &CensusConfig,
    records: Vec<ClassDataRecord>,
) -> Result<CensusTables> {
    cfg.validate()?;
    let mut findings = Vec::new();
    let mut ingest: Ingest = HashMap::with_capacity(records.len());
    for rec in records {
        findings.extend(check_record_standalone(&rec)?);
        if ingest.insert(rec.d, rec.clone()).is_some() {
            return Err(Error::Parse(format!("duplicate ingest record for d={}", rec.d)));
        }
    }
    findings.sort_by(|a, b| (a.d, a.kind).cmp(&(b.d, b.kind)));

    let spf = sieve_spf((cfg.max_d - 1).max(2))?;
    let ranges: Vec<(u64, u64)> = (2..cfg.max_d)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK).min(cfg.max_d)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let partials: Vec<CensusTables> = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(lo, hi)| sweep(&spf, &ingest, cfg.max_d, lo, hi))
            .collect::<Result<_>>()
    })?;

    let mut out = CensusTables {
        max_d: cfg.max_d,
        tables: cfg.tables.clone(),
        ..Default::default()
    };
    for p in &partials {
        out.merge(p);
    }
    out.findings = findings;

    let accounted = out.singulets + out.complete_multiplet_fields + out.pseudo_fields;
    if accounted != out.total_fields {
        return Err(Error::Inconsistent(format!(
            "multiplet accounting covers {accounted} fields, census counted {}",
            out.total_fields
        )));
    }
    let by_species: u64 = out.species.values().map(|t| t.count).sum();
    let by_item: u64 = out.items.values().map(|t| t.all.fields.count).sum();
    if by_species != out.total_fields || by_item != out.total_fields {
        return Err(Error::Inconsistent("species or item counts do not sum to total".into()));
    }
    Ok(out)
}

/// 1% deterministic sample for the radicand-shape cross-check.
fn sampled(d: u64) -> bool {
    d % 100 == 37
}

fn sweep(spf: &SpfTable, ingest: &Ingest, max_d: u64, lo: u64, hi: u64) -> Result<CensusTables> {
    let mut t = CensusTables::default();
    for d in lo..hi {
        let fact = spf.factorize(d)?;
        if !fact.is_cube_free() {
            continue;
        }
        let radicand = Radicand::from_cube_free(&fact)?;
        if !radicand.normalized {
            continue;
        }
        let fc = classify_radicand(radicand)?;
        let rank = fc.profile.ambiguous_rank;
        if sampled(d) {
            t.sampled_checks += 1;
            if matches_rank_one_form(&fact) != (rank == 1)
                || matches_rank_zero_form(&fact) != (rank == 0)
            {
                return Err(Error::Inconsistent(format!(
                    "d={d}: rank {rank} disagrees with the radicand-shape test"
                )));
            }
        }

        let base = fc.resolution;
        let type_of = |x: u64| match (base.method, ingest.get(&x)) {
            (ResolutionMethod::Unresolved, Some(rec)) => Some(rec.pf_type),
            _ => base.resolved,
        };
        let ty = type_of(d);
        t.conjectural_rules_used |= base.conjectural;

        t.total_fields += 1;
        t.species.entry(fc.radicand.species).or_default().add(d);
        *t.rank_distribution.entry(rank).or_default() += 1;

        let mut mt = MultipletTally::default();
        let mut pattern = None;
        if fc.m == 1 {
            t.singulets += 1;
        } else {
            let comps = companion_values(&fc.conductor)?;
            if comps.len() as u64 != fc.m {
                return Err(Error::Inconsistent(format!(
                    "conductor {}: {} companions for m = {}",
                    fc.conductor.f,
                    comps.len(),
                    fc.m
                )));
            }
            if comps.iter().all(|&c| c < max_d) {
                mt.complete_fields = 1;
                if comps[0] == d {
                    mt.complete = 1;
                    t.complete_multiplet_fields += fc.m;
                    let mut p: TypePattern = comps.iter().map(|&c| type_of(c)).collect();
                    p.sort();
                    pattern = Some(p);
                }
            } else {
                mt.pseudo = 1;
                t.pseudo_fields += 1;
            }
        }

        let item = t.items.entry(fc.item).or_default();
        for g in [&mut item.all, item.by_type.entry(ty).or_default()] {
            g.fields.add(d);
            g.multiplets.merge(&mt);
        }
        if let Some(p) = pattern {
            item.patterns.entry(p).or_default().add(d);
        }
        if fc.item == TheoremItem::Ismaili2(5) {
            let key = if ismaili2_item5_has_q8(&fc.conductor) {
                VARIANT_Q8
            } else {
                VARIANT_Q25
            };
            let g = item.variants.entry(key).or_default();
            g.fields.add(d);
            g.multiplets.merge(&mt);
        }
    }
    Ok(t)
}
