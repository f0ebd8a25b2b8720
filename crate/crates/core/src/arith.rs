//! Exact 64-bit integer arithmetic: primality, factorization, the
//! smallest-prime-factor sieve, cube-free radicands and prime classes.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest sieve limit (and census bound) accepted anywhere in the crate.
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Normalized radicands must stay below this so that `3·d1·d2` fits in a `u64`.
pub const MAX_RADICAND: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128) * ((x + 1) as u128) <= n as u128 {
        x += 1;
    }
    x
}

// First twelve primes: a witness set that is exact for every n < 3.3·10^24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin, exact on the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys);
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                let steps = 128.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += steps;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn collect_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let g = pollard_brent(n);
    collect_prime_factors(g, out);
    collect_prime_factors(n / g, out);
}

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking every
    /// invariant (strictly increasing primes, positive exponents, no overflow).
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value = 1u64;
        let mut prev = 1u64;
        for &(p, e) in &factors {
            if p <= prev || !is_prime(p) {
                return Err(Error::InvalidInput(format!(
                    "factor list must hold strictly increasing primes, got {p}"
                )));
            }
            if e == 0 {
                return Err(Error::InvalidInput(format!("zero exponent on prime {p}")));
            }
            let pe = p
                .checked_pow(e)
                .ok_or_else(|| Error::Overflow(format!("{p}^{e}")))?;
            value = value
                .checked_mul(pe)
                .ok_or_else(|| Error::Overflow("factorization product".into()))?;
            prev = p;
        }
        Ok(Self { value, factors })
    }

    // Caller guarantees the invariants.
    pub(crate) fn from_parts_unchecked(value: u64, factors: Vec<(u64, u32)>) -> Self {
        Self { value, factors }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_cube_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e <= 2)
    }
}

/// Factorizes any `n ≥ 1` (trial division by small primes, then Pollard rho).
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
    }
    collect_prime_factors(rest, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization::from_parts_unchecked(n, factors))
}

/// Smallest-prime-factor table for `2 ≤ n ≤ limit`.
///
/// Built once, then shared read-only (it is `Sync`). Memory use is four bytes
/// per integer.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
}

/// Builds the smallest-prime-factor table up to and including `limit`.
pub fn sieve_spf(limit: u64) -> Result<SpfTable> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::Config(format!(
            "sieve limit must lie in [2, {MAX_SIEVE_LIMIT}], got {limit}"
        )));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let root = isqrt(limit) as usize;
    for i in 2..=n {
        if spf[i] != 0 {
            continue;
        }
        spf[i] = i as u32;
        if i <= root {
            let mut j = i * i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    Ok(SpfTable { spf })
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Least prime dividing `n`, or `None` outside `[2, limit]`.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit() {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    /// Factorizes `n` by repeated table lookup; falls back to [`factorize`]
    /// above the table limit.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::InvalidInput("cannot factor 0".into()));
        }
        if n > self.limit() {
            return factorize(n);
        }
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(8);
        let mut rest = n as usize;
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization::from_parts_unchecked(n, factors))
    }
}

/// Dedekind species of a pure cubic field, governing how 3 ramifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    /// `3 | d`.
    S1a,
    /// `3 ∤ d` and `d ≢ ±1 (mod 9)`.
    S1b,
    /// `d ≡ ±1 (mod 9)`.
    S2,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::S1a, Species::S1b, Species::S2];

    pub fn of(d: u64) -> Species {
        if d % 3 == 0 {
            Species::S1a
        } else if matches!(d % 9, 1 | 8) {
            Species::S2
        } else {
            Species::S1b
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Species::S1a => "1a",
            Species::S1b => "1b",
            Species::S2 => "2",
        }
    }

    /// 3-adic exponent of the conductor of a field of this species.
    pub fn conductor_exponent(self) -> u8 {
        match self {
            Species::S1a => 2,
            Species::S1b => 1,
            Species::S2 => 0,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Species {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Cube-free radicand `d = d1·d2²` with `d1, d2` square-free and coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Radicand {
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
    pub species: Species,
    /// `d1 > d2`, i.e. `d` is smaller than its co-radicand `d1²·d2`.
    pub normalized: bool,
    /// Distinct primes dividing `d`, increasing.
    pub support: Vec<u64>,
}

impl Radicand {
    /// Wraps a cube-free factorization as-is (no normalization).
    pub fn from_cube_free(fact: &Factorization) -> Result<Self> {
        let d = fact.value();
        if d < 2 {
            return Err(Error::InvalidInput(format!("radicand must exceed 1, got {d}")));
        }
        if !fact.is_cube_free() {
            return Err(Error::InvalidInput(format!("{d} is not cube-free")));
        }
        if d >= MAX_RADICAND {
            return Err(Error::Overflow(format!("radicand {d} exceeds 2^62")));
        }
        let (mut d1, mut d2) = (1u64, 1u64);
        for &(p, e) in fact.factors() {
            if e == 1 {
                d1 *= p;
            } else {
                d2 *= p;
            }
        }
        Ok(Self {
            d,
            d1,
            d2,
            species: Species::of(d),
            normalized: d1 > d2,
            support: fact.primes().collect(),
        })
    }

    /// The co-radicand `d1²·d2`, which generates the same field.
    pub fn co_radicand(&self) -> Result<Radicand> {
        let d = (self.d2 as u128) * (self.d1 as u128) * (self.d1 as u128);
        if d >= MAX_RADICAND as u128 {
            return Err(Error::Overflow(format!("co-radicand of {} exceeds 2^62", self.d)));
        }
        let d = d as u64;
        Ok(Radicand {
            d,
            d1: self.d2,
            d2: self.d1,
            species: Species::of(d),
            normalized: self.d2 > self.d1,
            support: self.support.clone(),
        })
    }

    pub fn normalize(self) -> Result<Radicand> {
        if self.normalized {
            Ok(self)
        } else {
            self.co_radicand()
        }
    }
}

/// Cube-free part of a factorization: exponents reduced mod 3, zeros dropped.
pub fn cube_free_part(fact: &Factorization) -> Factorization {
    let mut value = 1u64;
    let factors: Vec<(u64, u32)> = fact
        .factors()
        .iter()
        .filter_map(|&(p, e)| {
            let r = e % 3;
            (r != 0).then(|| {
                value *= p.pow(r);
                (p, r)
            })
        })
        .collect();
    Factorization::from_parts_unchecked(value, factors)
}

/// Removes cube factors from `n`, then picks the representative of
/// `{d1·d2², d1²·d2}` with `d1 > d2`.
pub fn normalize_radicand(n: u64) -> Result<Radicand> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("radicand must exceed 1, got {n}")));
    }
    let fact = factorize(n)?;
    normalize_factorization(&fact)
}

/// [`normalize_radicand`] for an already factored integer.
pub fn normalize_factorization(fact: &Factorization) -> Result<Radicand> {
    let cf = cube_free_part(fact);
    if cf.value() == 1 {
        return Err(Error::NotAField(fact.value()));
    }
    let (mut d1, mut d2) = (1u128, 1u128);
    for &(p, e) in cf.factors() {
        if e == 1 {
            d1 *= p as u128;
        } else {
            d2 *= p as u128;
        }
    }
    if d1 < d2 {
        std::mem::swap(&mut d1, &mut d2);
    }
    let d = d1 * d2 * d2;
    if d >= MAX_RADICAND as u128 {
        return Err(Error::Overflow(format!(
            "normalized radicand of {} exceeds 2^62",
            fact.value()
        )));
    }
    let d = d as u64;
    Ok(Radicand {
        d,
        d1: d1 as u64,
        d2: d2 as u64,
        species: Species::of(d),
        normalized: true,
        support: cf.primes().collect(),
    })
}

/// Behaviour of a rational prime in `Q(ζ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PrimeKind {
    /// The ramified prime 3.
    Three,
    /// `p ≡ 1 (mod 3)`, split.
    SplitP,
    /// `q ≡ 2 (mod 3)`, inert.
    InertQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimeClass {
    pub prime: u64,
    pub kind: PrimeKind,
    /// Residue mod 9 (0 is never stored; for 3 this is 3).
    pub mod9: u8,
}

impl PrimeClass {
    /// Builds the class of a number already known to be prime.
    pub(crate) fn of_prime_unchecked(prime: u64) -> Self {
        let kind = match prime % 3 {
            0 => PrimeKind::Three,
            1 => PrimeKind::SplitP,
            _ => PrimeKind::InertQ,
        };
        Self {
            prime,
            kind,
            mod9: (prime % 9) as u8,
        }
    }

    /// `ℓ ≡ ±1 (mod 9)`.
    pub fn is_pm1_mod9(&self) -> bool {
        matches!(self.mod9, 1 | 8)
    }

    /// `ℓ ≡ ±2, ±4 (mod 9)`.
    pub fn is_pm2_pm4_mod9(&self) -> bool {
        matches!(self.mod9, 2 | 4 | 5 | 7)
    }
}

pub fn classify_prime(l: u64) -> Result<PrimeClass> {
    if !is_prime(l) {
        return Err(Error::InvalidInput(format!("{l} is not prime")));
    }
    Ok(PrimeClass::of_prime_unchecked(l))
}
