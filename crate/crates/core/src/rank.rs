//! Ramification profile and ambiguous 3-class rank of `k = Q(∛d, ζ₃)` over
//! `Q(ζ₃)`, bounds for the 3-rank of the pure
//! cubic field, and the assignment of conductors to theorem items.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{Factorization, PrimeKind};
use crate::conductor::Conductor;

/// `(t, s, q*)` and the ambiguous rank `t − 2 + q*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    /// Primes of `Q(ζ₃)` ramified in `k`.
    pub t: u32,
    /// Rational primes `p ≡ 1 (mod 3)` dividing `f`; each contributes two to `t`.
    pub s: u32,
    /// 1 when `ζ₃` is a norm from `k`.
    pub qstar: u32,
    pub ambiguous_rank: u32,
}

/// The norm-index invariant: `ζ₃` is a norm from `k` exactly when every
/// primary prime in the radicand is `≡ 1 (mod λ³)`, which for rational
/// primes `ℓ ≠ 3` means `ℓ ≡ ±1 (mod 9)`.
pub fn norm_index_qstar(c: &Conductor) -> u32 {
    c.primes.iter().all(|p| p.is_pm1_mod9()) as u32
}

pub fn ramification_profile(c: &Conductor) -> RamificationProfile {
    let s = c.split_primes().count() as u32;
    let inert = c.inert_primes().count() as u32;
    let t = 2 * s + inert + (c.e > 0) as u32;
    let qstar = norm_index_qstar(c);
    RamificationProfile {
        t,
        s,
        qstar,
        ambiguous_rank: (t + qstar).saturating_sub(2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BwbProfile {
    pub t_tilde: u32,
    pub s_tilde: u32,
    pub v_tilde: u32,
    pub epsilon_tilde: u32,
    pub delta_tilde: i32,
    pub lower: i32,
    pub upper: i32,
    pub exact_r: Option<u32>,
}

/// `max(s̃, δ̃) ≤ rank(C_{L,3}) ≤ s̃ + δ̃` with `δ̃ = t̃ − 1 − min(1, ṽ)`.
pub fn bwb_bounds(c: &Conductor) -> BwbProfile {
    let t_tilde = c.n() + (c.e > 0) as u32;
    let s_tilde = c.split_primes().count() as u32;
    let v_tilde = c.primes.iter().filter(|p| p.is_pm2_pm4_mod9()).count() as u32;
    let epsilon_tilde = v_tilde.min(1);
    let delta_tilde = t_tilde as i32 - 1 - epsilon_tilde as i32;
    let lower = (s_tilde as i32).max(delta_tilde);
    let upper = s_tilde as i32 + delta_tilde;
    BwbProfile {
        t_tilde,
        s_tilde,
        v_tilde,
        epsilon_tilde,
        delta_tilde,
        lower,
        upper,
        exact_r: (lower == upper && lower >= 0).then_some(lower as u32),
    }
}

/// Item of the classification theorems a conductor belongs to.
///
/// `Honda(1..=5)` are the rank-0 conductors, `Ismaili1(1..=4)` the rank-1
/// conductors divisible by a split prime, `Ismaili2(1..=7)` the rank-1
/// conductors with only inert primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremItem {
    Honda(u8),
    Ismaili1(u8),
    Ismaili2(u8),
    RankTwoOrMore,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankClaim {
    Exact(u32),
    AtLeastTwo,
    Unknown,
}

impl TheoremItem {
    pub fn rank_claim(self) -> RankClaim {
        match self {
            TheoremItem::Honda(_) => RankClaim::Exact(0),
            TheoremItem::Ismaili1(_) | TheoremItem::Ismaili2(_) => RankClaim::Exact(1),
            TheoremItem::RankTwoOrMore => RankClaim::AtLeastTwo,
            TheoremItem::Other => RankClaim::Unknown,
        }
    }

    /// Stable text code, e.g. `Ismaili1(2)`.
    pub fn code(self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s {
            "RankTwoOrMore" => return Some(TheoremItem::RankTwoOrMore),
            "Other" => return Some(TheoremItem::Other),
            _ => {}
        }
        let (name, rest) = s.split_once('(')?;
        let n: u8 = rest.strip_suffix(')')?.parse().ok()?;
        let item = match name {
            "Honda" if (1..=5).contains(&n) => TheoremItem::Honda(n),
            "Ismaili1" if (1..=4).contains(&n) => TheoremItem::Ismaili1(n),
            "Ismaili2" if (1..=7).contains(&n) => TheoremItem::Ismaili2(n),
            _ => return None,
        };
        Some(item)
    }

    /// Every rank-0 and rank-1 item, in table order.
    pub fn low_rank_items() -> impl Iterator<Item = TheoremItem> {
        (1..=5)
            .map(TheoremItem::Honda)
            .chain((1..=4).map(TheoremItem::Ismaili1))
            .chain((1..=7).map(TheoremItem::Ismaili2))
    }

    /// Conductor shape as printed in the census tables.
    pub fn shape(self) -> &'static str {
        use TheoremItem::*;
        match self {
            Honda(1) => "9",
            Honda(2) => "q, q≡8 (9)",
            Honda(3) => "3q, q≡2,5 (9)",
            Honda(4) => "9q, q≡2,5 (9)",
            Honda(5) => "q1q2, qj≡2,5 (9)",
            Ismaili1(1) => "p1, p1≡1 (9)",
            Ismaili1(2) => "3p1, p1≡4,7 (9)",
            Ismaili1(3) => "9p1, p1≡4,7 (9)",
            Ismaili1(4) => "p1q1, p1≡4,7 (9), q1≡2,5 (9)",
            Ismaili2(1) => "9q1, q1≡8 (9)",
            Ismaili2(2) => "q1q2, q1,q2≡8 (9)",
            Ismaili2(3) => "3q1q2, q1,q2≡2,5 (9)",
            Ismaili2(4) => "3q1q2, q1≡2,5 (9), q2≡8 (9)",
            Ismaili2(5) => "9q1q2, q1≡2,5 (9), q2≡2 (3)",
            Ismaili2(6) => "q1q2q3, q1,q2,q3≡2,5 (9)",
            Ismaili2(7) => "q1q2q3, q1,q2≡2,5 (9), q3≡8 (9)",
            RankTwoOrMore => "rank ≥ 2",
            _ => "other",
        }
    }
}

impl fmt::Display for TheoremItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremItem::Honda(n) => write!(f, "Honda({n})"),
            TheoremItem::Ismaili1(n) => write!(f, "Ismaili1({n})"),
            TheoremItem::Ismaili2(n) => write!(f, "Ismaili2({n})"),
            TheoremItem::RankTwoOrMore => f.write_str("RankTwoOrMore"),
            TheoremItem::Other => f.write_str("Other"),
        }
    }
}

impl Serialize for TheoremItem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Counts of the prime divisors `ℓ ≠ 3` of a conductor by class mod 9.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct ClassCounts {
    p1: u32,
    p47: u32,
    q8: u32,
    q25: u32,
}

fn class_counts(c: &Conductor) -> ClassCounts {
    let mut k = ClassCounts::default();
    for p in &c.primes {
        match (p.kind, p.mod9) {
            (PrimeKind::SplitP, 1) => k.p1 += 1,
            (PrimeKind::SplitP, _) => k.p47 += 1,
            (PrimeKind::InertQ, 8) => k.q8 += 1,
            _ => k.q25 += 1,
        }
    }
    k
}

/// Assigns the theorem item. Depends only on `e` and the classes mod 9 of
/// the primes of `f`.
pub fn classify_item(c: &Conductor) -> TheoremItem {
    use TheoremItem::*;
    let rank = ramification_profile(c).ambiguous_rank;
    if rank >= 2 {
        return RankTwoOrMore;
    }
    let k = class_counts(c);
    let item = match (c.e, k.p1, k.p47, k.q8, k.q25) {
        (2, 0, 0, 0, 0) => Honda(1),
        (0, 0, 0, 1, 0) => Honda(2),
        (1, 0, 0, 0, 1) => Honda(3),
        (2, 0, 0, 0, 1) => Honda(4),
        (0, 0, 0, 0, 2) => Honda(5),
        (0, 1, 0, 0, 0) => Ismaili1(1),
        (1, 0, 1, 0, 0) => Ismaili1(2),
        (2, 0, 1, 0, 0) => Ismaili1(3),
        (0, 0, 1, 0, 1) => Ismaili1(4),
        (2, 0, 0, 1, 0) => Ismaili2(1),
        (0, 0, 0, 2, 0) => Ismaili2(2),
        (1, 0, 0, 0, 2) => Ismaili2(3),
        (1, 0, 0, 1, 1) => Ismaili2(4),
        (2, 0, 0, 0, 2) | (2, 0, 0, 1, 1) => Ismaili2(5),
        (0, 0, 0, 0, 3) => Ismaili2(6),
        (0, 0, 0, 1, 2) => Ismaili2(7),
        _ => Other,
    };
    match item.rank_claim() {
        RankClaim::Exact(r) if r == rank => item,
        _ => Other,
    }
}

/// For `Ismaili2(5)` (`f = 9q₁q₂`): whether the second inert prime is
/// `≡ 8 (mod 9)` (otherwise both are `≡ 2,5`).
pub fn ismaili2_item5_has_q8(c: &Conductor) -> bool {
    class_counts(c).q8 > 0
}

fn pm1_mod9(n: u64) -> bool {
    matches!(n % 9, 1 | 8)
}

/// Direct test of the nine radicand forms `d` whose closure has ambiguous
/// 3-rank one, read off the factorization of a cube-free `d` (not
/// necessarily normalized). Independent of the conductor machinery.
pub fn matches_rank_one_form(d: &Factorization) -> bool {
    let n = d.value();
    let has3 = d.exponent_of(3) > 0;
    let others: Vec<u64> = d.primes().filter(|&p| p != 3).collect();
    let r9 = |p: u64| p % 9;
    let is_p = |p: u64| p % 3 == 1;
    let is_p47 = |p: u64| matches!(r9(p), 4 | 7);
    let is_q = |p: u64| p % 3 == 2;
    let is_q25 = |p: u64| matches!(r9(p), 2 | 5);
    let is_q8 = |p: u64| r9(p) == 8;
    match (has3, others.as_slice()) {
        // p₁^e₁, p₁ ≡ 1 (mod 3)
        (false, &[p]) if is_p(p) => true,
        // 3^e·p₁^e₁, p₁ ≡ 4, 7 (mod 9)
        (true, &[p]) if is_p47(p) => true,
        // 3^e·q₁^f₁, q₁ ≡ −1 (mod 9)
        (true, &[q]) if is_q8(q) => true,
        (false, &[a, b]) => {
            let (p, q) = if is_p(a) { (a, b) } else { (b, a) };
            // p₁^e₁·q₁^f₁ ≡ ±1 (mod 9), p₁, −q₁ ≡ 4, 7 (mod 9)
            if is_p(p) && is_q(q) {
                return is_p47(p) && is_q25(q) && pm1_mod9(n);
            }
            if !(is_q(a) && is_q(b)) {
                return false;
            }
            // q₁^f₁·q₂^f₂ with q₁ ≡ q₂ ≡ −1 (mod 9)
            if is_q8(a) && is_q8(b) {
                return true;
            }
            // q₁^f₁·q₂^f₂ ≢ ±1 (mod 9), some qᵢ ≢ −1 (mod 9)
            !pm1_mod9(n)
        }
        // 3^e·q₁^f₁·q₂^f₂, some qᵢ ≢ −1 (mod 9)
        (true, &[a, b]) => is_q(a) && is_q(b) && !(is_q8(a) && is_q8(b)),
        (false, &[a, b, c]) => {
            if !pm1_mod9(n) || ![a, b, c].iter().all(|&q| is_q(q)) {
                return false;
            }
            let n25 = [a, b, c].iter().filter(|&&q| is_q25(q)).count();
            let n8 = [a, b, c].iter().filter(|&&q| is_q8(q)).count();
            (n25 == 2 && n8 == 1) || n25 == 3
        }
        _ => false,
    }
}

/// Direct test of the radicand forms with `3 ∤ h_L` (ambiguous rank zero).
pub fn matches_rank_zero_form(d: &Factorization) -> bool {
    let n = d.value();
    let has3 = d.exponent_of(3) > 0;
    let others: Vec<u64> = d.primes().filter(|&p| p != 3).collect();
    let is_q25 = |p: u64| matches!(p % 9, 2 | 5);
    match (has3, others.as_slice()) {
        (true, &[]) => true,
        (false, &[q]) => q % 9 == 8 || is_q25(q),
        (true, &[q]) => is_q25(q),
        (false, &[a, b]) => is_q25(a) && is_q25(b) && pm1_mod9(n),
        _ => false,
    }
}
