//! Arithmetic in the Eisenstein integers `Z[ζ₃]`: prime splitting, primary
//! associates, congruences modulo powers of `λ = 1 − ζ₃`, and the rational
//! cubic residue symbol.
//!
//! An element `a + b·ζ₃` is reduced with `ζ₃² = −1 − ζ₃`. An element is
//! *primary* when it is `≡ 1 (mod 3)`, i.e. `a ≡ 1` and `b ≡ 0 (mod 3)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::arith::{factorize, is_prime, isqrt, mul_mod, pow_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EisensteinInt {
    pub a: i64,
    pub b: i64,
}

impl EisensteinInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const ZETA: Self = Self::new(0, 1);
    /// `λ = 1 − ζ₃`, the prime above 3.
    pub const LAMBDA: Self = Self::new(1, -1);

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub const fn rational(a: i64) -> Self {
        Self { a, b: 0 }
    }

    /// `N(a + bζ₃) = a² − ab + b²`.
    pub fn norm(self) -> u64 {
        let (a, b) = (self.a as i128, self.b as i128);
        (a * a - a * b + b * b) as u64
    }

    /// Image under `ζ₃ ↦ ζ₃²`: `a + bζ₃ ↦ (a − b) − bζ₃`.
    pub fn conj(self) -> Self {
        Self::new(self.a - self.b, -self.b)
    }

    /// Multiplication by `ζ₃`: `a + bζ₃ ↦ −b + (a − b)ζ₃`.
    pub fn mul_zeta(self) -> Self {
        Self::new(-self.b, self.a - self.b)
    }

    /// The six associates `±x, ±ζ₃x, ±ζ₃²x`.
    pub fn associates(self) -> [Self; 6] {
        let z1 = self.mul_zeta();
        let z2 = z1.mul_zeta();
        [self, z1, z2, -self, -z1, -z2]
    }

    pub fn is_primary(self) -> bool {
        self.a.rem_euclid(3) == 1 && self.b.rem_euclid(3) == 0
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `self / rhs` when the quotient lies in `Z[ζ₃]`.
    pub fn div_exact(self, rhs: Self) -> Option<Self> {
        let n = rhs.norm() as i128;
        if n == 0 {
            return None;
        }
        let num = self.widen_mul(rhs.conj());
        if num.0 % n != 0 || num.1 % n != 0 {
            return None;
        }
        Some(Self::new((num.0 / n) as i64, (num.1 / n) as i64))
    }

    pub fn divides(self, rhs: Self) -> bool {
        rhs.div_exact(self).is_some()
    }

    fn widen_mul(self, rhs: Self) -> (i128, i128) {
        let (a, b) = (self.a as i128, self.b as i128);
        let (c, d) = (rhs.a as i128, rhs.b as i128);
        // (a + bζ)(c + dζ) = ac + (ad + bc)ζ + bdζ², with ζ² = −1 − ζ
        (a * c - b * d, a * d + b * c - b * d)
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ζ₃"),
            (a, b) if b < 0 => write!(f, "{a}−{}ζ₃", -b),
            (a, b) => write!(f, "{a}+{b}ζ₃"),
        }
    }
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Mul for EisensteinInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = self.widen_mul(rhs);
        Self::new(a as i64, b as i64)
    }
}

/// The two conjugate primary primes above a rational prime `p ≡ 1 (mod 3)`.
///
/// `pi1` is the factor with positive `ζ₃`-coefficient; `pi2 = conj(pi1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimarySplit {
    pub p: u64,
    pub pi1: EisensteinInt,
    pub pi2: EisensteinInt,
}

// Keeps every coefficient product inside i64.
const MAX_SPLIT_PRIME: u64 = 1 << 60;

/// Square root of `n` modulo an odd prime `p` (Tonelli–Shanks), if any.
fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c) = (s, pow_mod(z, q, p));
    let (mut t, mut r) = (pow_mod(n, q, p), pow_mod(n, (q + 1) / 2, p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Splits `p ≡ 1 (mod 3)` as `p = π₁·π₂` with both factors primary.
///
/// Cornacchia's algorithm gives `p = x² + 3y²`; then `x + y√−3 = (x+y) + 2yζ₃`
/// has norm `p`.
pub fn split_prime(p: u64) -> Result<PrimarySplit> {
    if p % 3 != 1 || !is_prime(p) {
        return Err(Error::InvalidInput(format!(
            "{p} is not a prime congruent to 1 mod 3"
        )));
    }
    if p > MAX_SPLIT_PRIME {
        return Err(Error::Overflow(format!("{p} too large to split")));
    }
    let no_rep = || Error::Inconsistent(format!("no representation x² + 3y² = {p}"));
    let mut r0 = sqrt_mod(p - 3, p).ok_or_else(no_rep)?;
    if r0 > p / 2 {
        r0 = p - r0;
    }
    let (mut a, mut b) = (p, r0);
    let limit = isqrt(p);
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = p - b * b;
    if rest % 3 != 0 {
        return Err(no_rep());
    }
    let y = isqrt(rest / 3);
    if 3 * y * y != rest {
        return Err(no_rep());
    }
    let (x, y) = (b as i64, y as i64);
    let root = EisensteinInt::new(x + y, 2 * y);
    debug_assert_eq!(root.norm(), p);
    let pi = primary_associate(root)?;
    let (pi1, pi2) = if pi.b > 0 { (pi, pi.conj()) } else { (pi.conj(), pi) };
    Ok(PrimarySplit { p, pi1, pi2 })
}

/// The unique associate of `x` that is `≡ 1 (mod 3)`.
pub fn primary_associate(x: EisensteinInt) -> Result<EisensteinInt> {
    if x.norm() % 3 == 0 {
        return Err(Error::InvalidInput(format!(
            "{x} has norm divisible by 3 and no primary associate"
        )));
    }
    x.associates()
        .into_iter()
        .find(|y| y.is_primary())
        .ok_or_else(|| Error::Inconsistent(format!("no primary associate of {x}")))
}

/// `x ≡ 1 (mod λ³)` for primary `x`, tested by exact division of `x − 1` by `λ³`.
pub fn lambda_cube_congruent_one(x: EisensteinInt) -> Result<bool> {
    if !x.is_primary() {
        return Err(Error::InvalidInput(format!("{x} is not primary")));
    }
    Ok(EisensteinInt::LAMBDA.pow(3).divides(x - EisensteinInt::ONE))
}

/// Value `ζ₃^exponent` of a cubic residue symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CubicSymbol {
    pub exponent: u8,
}

impl CubicSymbol {
    pub fn trivial(self) -> bool {
        self.exponent == 0
    }

    /// Symbols are multiplicative: exponents add mod 3.
    pub fn combine(self, other: Self) -> Self {
        Self {
            exponent: (self.exponent + other.exponent) % 3,
        }
    }
}

/// Least primitive root modulo an odd prime `p`.
pub fn least_primitive_root(p: u64) -> Result<u64> {
    if p == 2 {
        return Ok(1);
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let phi = p - 1;
    let fact = factorize(phi)?;
    (2..p)
        .find(|&g| fact.primes().all(|r| pow_mod(g, phi / r, p) != 1))
        .ok_or_else(|| Error::Inconsistent(format!("no primitive root mod {p}")))
}

/// Cubic residue symbol of a rational integer `c` at a prime above `p ≡ 1 (mod 3)`.
///
/// The residue field is `F_p`. The exponent is the `k ∈ {0,1,2}` with
/// `c^((p−1)/3) ≡ g^(k(p−1)/3) (mod p)`, `g` the least primitive root mod `p`.
pub fn cubic_symbol_rational(c: i64, p: u64) -> Result<CubicSymbol> {
    if p % 3 != 1 || !is_prime(p) {
        return Err(Error::InvalidInput(format!(
            "{p} is not a prime congruent to 1 mod 3"
        )));
    }
    let c = (c as i128).rem_euclid(p as i128) as u64;
    if c == 0 {
        return Err(Error::InvalidInput(format!("{p} divides the numerator")));
    }
    let e = (p - 1) / 3;
    let v = pow_mod(c, e, p);
    let omega = pow_mod(least_primitive_root(p)?, e, p);
    let exponent = if v == 1 {
        0
    } else if v == omega {
        1
    } else if v == crate::arith::mul_mod(omega, omega, p) {
        2
    } else {
        return Err(Error::Inconsistent(format!(
            "{c}^{e} mod {p} is not a cube root of unity"
        )));
    };
    Ok(CubicSymbol { exponent })
}
