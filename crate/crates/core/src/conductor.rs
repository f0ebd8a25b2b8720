//! Conductors `f = 3^e·ℓ₁⋯ℓₙ` of the Kummer extensions, their multiplicity,
//! and the multiplets of companion radicands that share one conductor.

use std::collections::BTreeSet;

use crate::arith::{factorize, PrimeClass, PrimeKind, Radicand, Species, MAX_RADICAND};
use crate::error::{Error, Result};

/// Conductor of `Q(∛d, ζ₃)/Q(ζ₃)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conductor {
    pub f: u64,
    /// 3-adic exponent, in `{0, 1, 2}`.
    pub e: u8,
    /// Prime divisors other than 3, increasing.
    pub primes: Vec<PrimeClass>,
    /// Number of `ℓⱼ ≡ ±1 (mod 9)`.
    pub u: u32,
    /// Number of `ℓⱼ ≡ ±2, ±4 (mod 9)`.
    pub v: u32,
}

impl Conductor {
    fn from_parts(e: u8, primes: Vec<PrimeClass>) -> Self {
        let u = primes.iter().filter(|c| c.is_pm1_mod9()).count() as u32;
        let v = primes.len() as u32 - u;
        let f = 3u64.pow(e as u32) * primes.iter().map(|c| c.prime).product::<u64>();
        Self { f, e, primes, u, v }
    }

    /// Parses a conductor value, checking it has the shape `3^e·ℓ₁⋯ℓₙ`
    /// with `e ≤ 2`, square-free prime-to-3 part, and `n ≥ 1` unless `e = 2`.
    pub fn from_value(f: u64) -> Result<Self> {
        if f < 2 {
            return Err(Error::InvalidInput(format!("{f} is not a conductor")));
        }
        let fact = factorize(f)?;
        let e = fact.exponent_of(3);
        if e > 2 {
            return Err(Error::InvalidInput(format!("conductor {f}: 27 divides it")));
        }
        let mut primes = Vec::new();
        for &(p, k) in fact.factors() {
            if p == 3 {
                continue;
            }
            if k > 1 {
                return Err(Error::InvalidInput(format!(
                    "conductor {f}: {p}² divides it"
                )));
            }
            primes.push(PrimeClass::of_prime_unchecked(p));
        }
        if e <= 1 && primes.is_empty() {
            return Err(Error::InvalidInput(format!(
                "conductor {f}: needs a prime other than 3 unless 9 divides it"
            )));
        }
        if (f as u128) * 3 >= u64::MAX as u128 {
            return Err(Error::Overflow(format!("conductor {f} too large")));
        }
        Ok(Self::from_parts(e as u8, primes))
    }

    pub fn n(&self) -> u32 {
        self.u + self.v
    }

    /// Species shared by every field with this conductor.
    pub fn species(&self) -> Species {
        match self.e {
            2 => Species::S1a,
            1 => Species::S1b,
            _ => Species::S2,
        }
    }

    pub fn split_primes(&self) -> impl Iterator<Item = &PrimeClass> {
        self.primes.iter().filter(|c| c.kind == PrimeKind::SplitP)
    }

    pub fn inert_primes(&self) -> impl Iterator<Item = &PrimeClass> {
        self.primes.iter().filter(|c| c.kind == PrimeKind::InertQ)
    }
}

/// Conductor of the normal closure of `Q(∛d)`; `d` need not be normalized.
pub fn conductor_of(d: &Radicand) -> Conductor {
    let primes = d
        .support
        .iter()
        .filter(|&&p| p != 3)
        .map(|&p| PrimeClass::of_prime_unchecked(p))
        .collect();
    Conductor::from_parts(d.species.conductor_exponent(), primes)
}

/// `3·X_k = 2^k − (−1)^k` for `k ≥ 0`.
fn three_x(k: u32) -> u64 {
    let two_k = 1u64 << k;
    if k % 2 == 0 {
        two_k - 1
    } else {
        two_k + 1
    }
}

/// Number of non-isomorphic pure cubic fields with conductor `f`.
///
/// `2^n` for `e = 2`, `2^u·X_v` for `e = 1`, `2^u·X_{v−1}` for `e = 0`,
/// where `X_k = (2^k − (−1)^k)/3` and `X_{−1} = 1/2`.
pub fn multiplicity(c: &Conductor) -> Result<u64> {
    if c.n() > 62 {
        return Err(Error::Overflow(format!("conductor {} has too many primes", c.f)));
    }
    let m = match c.e {
        2 => 1u64 << c.n(),
        1 => (1u64 << c.u) * three_x(c.v) / 3,
        _ => {
            if c.n() == 0 {
                return Err(Error::InvalidInput("conductor 1 has no field".into()));
            }
            if c.v == 0 {
                1u64 << (c.u - 1)
            } else {
                (1u64 << c.u) * three_x(c.v - 1) / 3
            }
        }
    };
    if m == 0 {
        return Err(Error::NoFieldExists(c.f));
    }
    Ok(m)
}

/// Fields sharing a conductor, listed by normalized companion radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplet {
    pub conductor: Conductor,
    pub m: u64,
    pub companions: Vec<Radicand>,
}

fn companion_radicand(c: &Conductor, e0: u32, exps: u64) -> Option<Result<Radicand>> {
    let (mut d1, mut d2) = (1u128, 1u128);
    match e0 {
        1 => d1 *= 3,
        2 => d2 *= 3,
        _ => {}
    }
    for (j, pc) in c.primes.iter().enumerate() {
        if exps >> j & 1 == 0 {
            d1 *= pc.prime as u128;
        } else {
            d2 *= pc.prime as u128;
        }
    }
    if d1 < d2 {
        std::mem::swap(&mut d1, &mut d2);
    }
    let d = d1 * d2 * d2;
    if d >= MAX_RADICAND as u128 {
        return Some(Err(Error::Overflow(format!(
            "companion radicand of conductor {} exceeds 2^62",
            c.f
        ))));
    }
    let d = d as u64;
    let species = Species::of(d);
    // species decides the 3-part of the conductor; the prime support is shared
    if species.conductor_exponent() != c.e {
        return None;
    }
    let mut support: Vec<u64> = c.primes.iter().map(|p| p.prime).collect();
    if e0 > 0 {
        support.push(3);
        support.sort_unstable();
    }
    Some(Ok(Radicand {
        d,
        d1: d1 as u64,
        d2: d2 as u64,
        species,
        normalized: true,
        support,
    }))
}

fn raw_companions(c: &Conductor) -> Result<Vec<Radicand>> {
    if c.n() > 20 {
        return Err(Error::Overflow(format!("conductor {} has too many primes", c.f)));
    }
    let e0s: &[u32] = if c.e == 2 { &[1, 2] } else { &[0] };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &e0 in e0s {
        for exps in 0..(1u64 << c.n()) {
            if let Some(r) = companion_radicand(c, e0, exps) {
                let r = r?;
                debug_assert_eq!(conductor_of(&r).f, c.f);
                if seen.insert(r.d) {
                    out.push(r);
                }
            }
        }
    }
    out.sort_by_key(|r| r.d);
    Ok(out)
}

/// Builds every normalized radicand with conductor `f` by varying the prime
/// exponents, and cross-checks the count against [`multiplicity`].
pub fn enumerate_companions(c: &Conductor) -> Result<Multiplet> {
    let m = multiplicity(c)?;
    let companions = raw_companions(c)?;
    if companions.len() as u64 != m {
        return Err(Error::Inconsistent(format!(
            "conductor {}: formula gives {m} fields, enumeration finds {}",
            c.f,
            companions.len()
        )));
    }
    Ok(Multiplet {
        conductor: c.clone(),
        m,
        companions,
    })
}

/// Normalized companion radicands of `c` in increasing order, without the
/// multiplicity cross-check.
pub fn companion_values(c: &Conductor) -> Result<Vec<u64>> {
    Ok(raw_companions(c)?.into_iter().map(|r| r.d).collect())
}
