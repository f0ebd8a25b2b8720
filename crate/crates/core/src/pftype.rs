//! Principal factorization types α, β, γ: which types a conductor admits,
//! resolution by cubic residue symbols, and consistency laws for ingested
//! class-group data.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{normalize_radicand, PrimeKind};
use crate::conductor::{conductor_of, Conductor};
use crate::eisenstein::cubic_symbol_rational;
use crate::error::{Error, Result};
use crate::rank::{classify_item, ramification_profile, RamificationProfile, TheoremItem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PfType {
    Alpha,
    Beta,
    Gamma,
}

/// Row of the type table: unit-norm exponent `U`, absolute principal
/// factors `A`, relative principal factors `R`. `A + R = U + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeInvariants {
    pub u: u32,
    pub a: u32,
    pub r: u32,
}

impl PfType {
    pub const ALL: [PfType; 3] = [PfType::Alpha, PfType::Beta, PfType::Gamma];

    pub fn name(self) -> &'static str {
        match self {
            PfType::Alpha => "alpha",
            PfType::Beta => "beta",
            PfType::Gamma => "gamma",
        }
    }

    pub fn invariants(self) -> TypeInvariants {
        match self {
            PfType::Alpha => TypeInvariants { u: 1, a: 1, r: 1 },
            PfType::Beta => TypeInvariants { u: 1, a: 2, r: 0 },
            PfType::Gamma => TypeInvariants { u: 0, a: 1, r: 0 },
        }
    }

    /// Subfield unit index `Q = (E_k : E₀)`.
    pub fn unit_index(self) -> u64 {
        match self {
            PfType::Alpha => 1,
            _ => 3,
        }
    }
}

impl fmt::Display for PfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PfType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alpha" | "α" => Ok(PfType::Alpha),
            "beta" | "β" => Ok(PfType::Beta),
            "gamma" | "γ" => Ok(PfType::Gamma),
            other => Err(Error::Parse(format!("unknown type {other:?}"))),
        }
    }
}

impl Serialize for PfType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfConstraints {
    pub s: u32,
    pub t: u32,
    pub gamma_allowed: bool,
    /// Admissible types in the order α, β, γ.
    pub possible: Vec<PfType>,
}

impl PfConstraints {
    pub fn allows(&self, ty: PfType) -> bool {
        self.possible.contains(&ty)
    }
}

/// Types compatible with `1 ≤ A ≤ t − s`, `0 ≤ R ≤ s`, `A + R ≤ t`, and the
/// norm condition for units (γ needs every prime of `f` to be 3 or `≡ ±1 (mod 9)`).
pub fn possible_types(c: &Conductor, prof: &RamificationProfile) -> Result<PfConstraints> {
    let (t, s) = (prof.t, prof.s);
    let gamma_allowed = c.primes.iter().all(|p| p.is_pm1_mod9());
    let possible: Vec<PfType> = PfType::ALL
        .into_iter()
        .filter(|&ty| {
            let inv = ty.invariants();
            let fits = inv.a >= 1 && inv.a <= t - s && inv.r <= s && inv.a + inv.r <= t;
            fits && (ty != PfType::Gamma || gamma_allowed)
        })
        .collect();
    if possible.is_empty() {
        return Err(Error::Inconsistent(format!(
            "conductor {} admits no principal factorization type",
            c.f
        )));
    }
    Ok(PfConstraints {
        s,
        t,
        gamma_allowed,
        possible,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResolutionMethod {
    Forced,
    Symbol,
    Ingested,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PfResolution {
    pub resolved: Option<PfType>,
    pub method: ResolutionMethod,
    /// Set when β was inferred from a trivial symbol, the direction that
    /// is only conjectured.
    pub conjectural: bool,
}

impl PfResolution {
    pub const UNRESOLVED: Self = Self {
        resolved: None,
        method: ResolutionMethod::Unresolved,
        conjectural: false,
    };

    pub fn ingested(ty: PfType) -> Self {
        Self {
            resolved: Some(ty),
            method: ResolutionMethod::Ingested,
            conjectural: false,
        }
    }
}

/// `(c, p₁)` for the symbol test of Ismaili1 items (2)–(4): `c = 3` for
/// items (2), (3) and `c = q` for item (4), `p₁` the split prime of `f`.
pub fn symbol_arguments(c: &Conductor, item: TheoremItem) -> Option<(u64, u64)> {
    let n = match item {
        TheoremItem::Ismaili1(n @ 2..=4) => n,
        _ => return None,
    };
    let p1 = c.split_primes().next()?.prime;
    let num = if n == 4 {
        c.primes.iter().find(|p| p.kind == PrimeKind::InertQ)?.prime
    } else {
        3
    };
    Some((num, p1))
}

pub fn resolve_type(
    c: &Conductor,
    item: TheoremItem,
    constraints: &PfConstraints,
) -> Result<PfResolution> {
    if let [only] = constraints.possible[..] {
        return Ok(PfResolution {
            resolved: Some(only),
            method: ResolutionMethod::Forced,
            conjectural: false,
        });
    }
    if let Some((num, p1)) = symbol_arguments(c, item) {
        let sym = cubic_symbol_rational(num as i64, p1)?;
        let (ty, conjectural) = if sym.trivial() {
            (PfType::Beta, true)
        } else {
            (PfType::Alpha, false)
        };
        return Ok(PfResolution {
            resolved: Some(ty),
            method: ResolutionMethod::Symbol,
            conjectural,
        });
    }
    Ok(PfResolution::UNRESOLVED)
}

/// Abelian type of a finite 3-group, invariants in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupStructure(pub Vec<u64>);

impl GroupStructure {
    pub fn trivial() -> Self {
        Self(Vec::new())
    }

    /// `(3^a, 3^b, ...)` with trivial factors dropped.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v: Vec<u64> = exps.iter().filter(|&&e| e > 0).map(|&e| 3u64.pow(e)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }

    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl FromStr for GroupStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s == "()" {
            return Ok(Self::trivial());
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("abelian type {s:?} is not parenthesized")))?;
        let mut v = Vec::new();
        for part in inner.split(',') {
            let n: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad invariant {part:?} in {s:?}")))?;
            let mut m = n;
            while m > 1 && m % 3 == 0 {
                m /= 3;
            }
            if n < 3 || m != 1 {
                return Err(Error::Parse(format!(
                    "invariant {n} in {s:?} is not a nontrivial power of 3"
                )));
            }
            v.push(n);
        }
        if v.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("invariants of {s:?} must be non-increasing")));
        }
        Ok(Self(v))
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        f.write_str("(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(")")
    }
}

/// One row of an ingest file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDataRecord {
    pub d: u64,
    pub pf_type: PfType,
    /// `C_{L,3} ≅ (3^w)`; 0 stands for a trivial 3-class group.
    pub w: u32,
    pub h_l: u64,
    pub ck3: GroupStructure,
    pub h_k: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    d: u64,
    pf_type: String,
    w: u32,
    #[serde(rename = "h_L")]
    h_l: u64,
    ck3: String,
    #[serde(default)]
    h_k: Option<u64>,
}

const INGEST_HEADER: [&str; 5] = ["d", "pf_type", "w", "h_L", "ck3"];

/// Reads an ingest CSV with header `d,pf_type,w,h_L,ck3[,h_k]`.
pub fn read_class_records<R: Read>(reader: R) -> Result<Vec<ClassDataRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("ingest header: {e}")))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let ok = names.len() >= 5
        && names[..5] == INGEST_HEADER
        && (names.len() == 5 || (names.len() == 6 && names[5] == "h_k"));
    if !ok {
        return Err(Error::Parse(format!(
            "ingest header must be d,pf_type,w,h_L,ck3[,h_k], found {}",
            names.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<RawRecord>().enumerate() {
        let line = i + 2;
        let raw = row.map_err(|e| Error::Parse(format!("ingest line {line}: {e}")))?;
        let at = |e: Error| Error::Parse(format!("ingest line {line}: {e}"));
        if raw.d < 2 || raw.h_l == 0 || raw.h_k == Some(0) {
            return Err(Error::Parse(format!(
                "ingest line {line}: d must be ≥ 2 and class numbers positive"
            )));
        }
        out.push(ClassDataRecord {
            d: raw.d,
            pf_type: raw.pf_type.parse().map_err(at)?,
            w: raw.w,
            h_l: raw.h_l,
            ck3: raw.ck3.parse().map_err(at)?,
            h_k: raw.h_k,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ViolationKind {
    NotNormalized,
    TypeNotPossible,
    ClassNumber,
    ExponentRange,
    Structure,
    ClassNumberRelation,
    SymbolMismatch,
    /// β recorded where the symbol is nontrivial is impossible; α recorded
    /// where the symbol is trivial contradicts only the conjectured direction.
    ConjectureCounterexample,
    /// `w > 1` where the bound `w = 1` is open.
    OpenBound,
}

impl ViolationKind {
    /// Findings against conjectures are reported but are not violations of
    /// proven statements.
    pub fn is_hard(self) -> bool {
        !matches!(
            self,
            ViolationKind::ConjectureCounterexample | ViolationKind::OpenBound
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub d: u64,
    pub kind: ViolationKind,
    pub message: String,
}

fn v3(mut n: u64) -> u32 {
    let mut k = 0;
    while n > 0 && n % 3 == 0 {
        n /= 3;
        k += 1;
    }
    k
}

/// Shape law for `C_{k,3}`: expected exponent pair, minimal `w`, and
/// whether `w = 1` is forced (`Some(true)` proven, `Some(false)` open).
struct ShapeLaw {
    ck: fn(u32) -> Vec<u32>,
    min_w: u32,
    w_is_one: Option<bool>,
}

fn shape_law(item: TheoremItem, ty: PfType) -> Option<ShapeLaw> {
    use PfType::*;
    use TheoremItem::*;
    let equal = |w: u32| vec![w, w];
    let drop_one = |w: u32| vec![w, w.saturating_sub(1)];
    let cyclic = |w: u32| vec![w];
    let law = |ck: fn(u32) -> Vec<u32>, min_w, w_is_one| ShapeLaw { ck, min_w, w_is_one };
    Some(match (item, ty) {
        (Honda(_), _) => law(|_| vec![], 0, None),
        (Ismaili1(1), Alpha) => law(drop_one, 1, None),
        (Ismaili1(1), Gamma) => law(equal, 2, None),
        (Ismaili1(2), Alpha) => law(cyclic, 1, Some(true)),
        (Ismaili1(2), Beta) => law(equal, 1, Some(true)),
        (Ismaili1(3 | 4), Alpha) => law(cyclic, 1, Some(false)),
        (Ismaili1(3 | 4), Beta) => law(equal, 1, Some(false)),
        (Ismaili2(1), Beta | Gamma) => law(equal, 1, None),
        (Ismaili2(2), Beta) => law(equal, 1, None),
        (Ismaili2(2), Gamma) => law(equal, 2, None),
        (Ismaili2(3 | 6), Beta) => law(equal, 1, Some(false)),
        (Ismaili2(4 | 5 | 7), Beta) => law(equal, 1, None),
        _ => return None,
    })
}

/// Checks an ingested record against the admissible types, the symbol
/// resolution, the class number relation `h_k = (Q/3)·h_L²`, and the
/// structure of `C_{L,3}` and `C_{k,3}` for its item.
pub fn check_class_record(
    rec: &ClassDataRecord,
    item: TheoremItem,
    constraints: &PfConstraints,
    res: &PfResolution,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, message: String| {
        out.push(Violation {
            d: rec.d,
            kind,
            message,
        })
    };
    let ty = rec.pf_type;
    match normalize_radicand(rec.d) {
        Ok(r) if r.d == rec.d => {}
        Ok(r) => push(
            ViolationKind::NotNormalized,
            format!("d={} is not normalized (use {})", rec.d, r.d),
        ),
        Err(e) => push(ViolationKind::NotNormalized, format!("d={}: {e}", rec.d)),
    }
    if !constraints.allows(ty) {
        let names: Vec<&str> = constraints.possible.iter().map(|t| t.name()).collect();
        push(
            ViolationKind::TypeNotPossible,
            format!("type {ty} not admissible, possible: {}", names.join(",")),
        );
    }
    if v3(rec.h_l) != rec.w {
        push(
            ViolationKind::ClassNumber,
            format!("3-part of h_L={} is not 3^{}", rec.h_l, rec.w),
        );
    }
    if let Some(h_k) = rec.h_k {
        let lhs = 3 * h_k as u128;
        let rhs = ty.unit_index() as u128 * rec.h_l as u128 * rec.h_l as u128;
        if lhs != rhs {
            push(
                ViolationKind::ClassNumberRelation,
                format!("h_k={h_k} differs from (Q/3)·h_L² with Q={}", ty.unit_index()),
            );
        }
    }
    if res.method == ResolutionMethod::Symbol && res.resolved != Some(ty) {
        if res.conjectural {
            push(
                ViolationKind::ConjectureCounterexample,
                format!("trivial cubic residue symbol but recorded type {ty}"),
            );
        } else {
            push(
                ViolationKind::SymbolMismatch,
                format!("nontrivial cubic residue symbol forces alpha, recorded {ty}"),
            );
        }
    }
    let Some(law) = shape_law(item, ty) else {
        return out;
    };
    let w = rec.w;
    if matches!(item, TheoremItem::Honda(_)) && w != 0 {
        push(
            ViolationKind::ExponentRange,
            format!("{item} has 3 ∤ h_L, got w = {w}"),
        );
        return out;
    }
    if w < law.min_w {
        push(
            ViolationKind::ExponentRange,
            format!("{item} type {ty} needs w ≥ {}, got {w}", law.min_w),
        );
        return out;
    }
    if let Some(proven) = law.w_is_one {
        if w != 1 {
            let kind = if proven {
                ViolationKind::ExponentRange
            } else {
                ViolationKind::OpenBound
            };
            push(kind, format!("{item} type {ty} has w = 1, got {w}"));
            if proven {
                return out;
            }
        }
    }
    let expected = GroupStructure::from_exponents(&(law.ck)(w));
    if rec.ck3 != expected {
        push(
            ViolationKind::Structure,
            format!("{item} type {ty} with w={w} needs C_k3 = {expected}, got {}", rec.ck3),
        );
    }
    out
}

/// Runs [`check_class_record`] after deriving item, constraints, and symbol
/// resolution from `rec.d`.
pub fn check_record_standalone(rec: &ClassDataRecord) -> Result<Vec<Violation>> {
    let r = normalize_radicand(rec.d)?;
    let c = conductor_of(&r);
    let prof = ramification_profile(&c);
    let item = classify_item(&c);
    let cons = possible_types(&c, &prof)?;
    let res = resolve_type(&c, item, &cons)?;
    Ok(check_class_record(rec, item, &cons, &res))
}

/// Where the relative 3-genus field sits among the unramified cyclic cubic
/// extensions of `k` when `C_{k,3}` is elementary bicyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GenusScenario {
    I,
    II,
    III,
    NA,
}

pub fn genus_scenario(item: TheoremItem, rec: Option<&ClassDataRecord>) -> GenusScenario {
    let Some(rec) = rec else {
        return GenusScenario::NA;
    };
    if rec.ck3 != GroupStructure(vec![3, 3]) {
        return GenusScenario::NA;
    }
    match item {
        TheoremItem::Ismaili1(2..=4) => GenusScenario::I,
        TheoremItem::Ismaili2(_) => GenusScenario::II,
        TheoremItem::RankTwoOrMore => {
            let s = normalize_radicand(rec.d)
                .map(|r| ramification_profile(&conductor_of(&r)).s)
                .unwrap_or(0);
            if s == 1 {
                GenusScenario::III
            } else {
                GenusScenario::NA
            }
        }
        _ => GenusScenario::NA,
    }
}
