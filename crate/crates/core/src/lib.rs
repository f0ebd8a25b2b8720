//! Arithmetic classification of pure cubic fields `Q(∛d)` and of their
//! normal closures `Q(∛d, ζ₃)` viewed as cyclic cubic Kummer extensions of
//! `Q(ζ₃)`: conductors, multiplets, ambiguous 3-class ranks, principal
//! factorization types, and a census over all normalized radicands below
//! a bound.

pub mod arith;
pub mod census;
pub mod conductor;
pub mod eisenstein;
pub mod emit;
pub mod error;
pub mod field;
pub mod pftype;
pub mod rank;

pub use arith::{
    factorize, normalize_radicand, sieve_spf, Factorization, PrimeClass, PrimeKind, Radicand,
    SpfTable, Species,
};
pub use census::{run_census, CensusConfig, CensusTables, TableId};
pub use conductor::{conductor_of, enumerate_companions, multiplicity, Conductor, Multiplet};
pub use eisenstein::{cubic_symbol_rational, split_prime, CubicSymbol, EisensteinInt, PrimarySplit};
pub use error::{Error, Result};
pub use field::{classify, classify_radicand, ClassifyRecord, FieldClassification};
pub use pftype::{
    check_class_record, genus_scenario, possible_types, read_class_records, resolve_type,
    ClassDataRecord, GenusScenario, GroupStructure, PfConstraints, PfResolution, PfType,
    ResolutionMethod, Violation, ViolationKind,
};
pub use rank::{
    bwb_bounds, classify_item, ramification_profile, BwbProfile, RamificationProfile,
    TheoremItem,
};
