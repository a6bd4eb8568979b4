//! Arithmetic in the truncated Witt rings `W_m = Z/p^m` of the prime field.
//!
//! The base ring is fixed to `W = W(F_p) = Z_p`, so the ramification index is
//! one and the uniformizer is `p` itself. Every value is an ordinary residue
//! modulo `p^m`; intermediate products go through `u128` and factorial-type
//! quantities go through big integers before reduction.

mod linear;

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use linear::{solve_linear, InconsistencyCertificate, LinearSolution, ZpMatrix};

/// Largest modulus we allow, so that sums of two residues never overflow.
const MODULUS_LIMIT: u64 = 1 << 62;

/// The base ring data: a prime `p`, with `e = 1` and uniformizer `u = p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct RingParams {
    p: u64,
}

#[derive(Deserialize)]
struct RawParams {
    p: u64,
}

impl TryFrom<RawParams> for RingParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        RingParams::new(raw.p)
    }
}

impl RingParams {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(RingParams { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Absolute ramification index. Always 1 for `W(F_p)`.
    pub fn ramification_index(&self) -> u32 {
        1
    }

    pub fn uniformizer(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self, m: u32) -> Result<u64> {
        checked_pow(self.p, m)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `p^m`, refusing anything at or above 2^62.
pub fn checked_pow(p: u64, m: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc
            .checked_mul(p)
            .filter(|v| *v < MODULUS_LIMIT)
            .ok_or(Error::PrecisionOverflow { p, m })?;
    }
    Ok(acc)
}

pub(crate) fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, modulus: u64) -> u64 {
    let s = a + b;
    if s >= modulus {
        s - modulus
    } else {
        s
    }
}

pub(crate) fn sub_mod(a: u64, b: u64, modulus: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + modulus - b
    }
}

pub(crate) fn reduce_i128(v: i128, modulus: u64) -> u64 {
    v.rem_euclid(modulus as i128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub(crate) fn inverse_mod(a: u64, modulus: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(modulus as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(reduce_i128(e.x, modulus))
}

/// The p-adic valuation of a nonzero integer.
pub(crate) fn v_p(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Valuation of an element of `W_m`. The zero residue only tells us the true
/// valuation is at least `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound usable for comparisons (`AtLeast(m)` counts as `m`).
    pub fn floor(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(m) => write!(f, ">= {m}"),
        }
    }
}

/// An element of `W_m = Z/p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittInt {
    value: u64,
    p: u64,
    m: u32,
    modulus: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittOp {
    Add,
    Sub,
    Mul,
}

impl WittInt {
    pub fn new(p: u64, m: u32, value: i128) -> Result<Self> {
        let modulus = checked_pow(p, m)?;
        Ok(WittInt {
            value: reduce_i128(value, modulus),
            p,
            m,
            modulus,
        })
    }

    pub(crate) fn from_reduced(p: u64, m: u32, modulus: u64, value: u64) -> Self {
        debug_assert!(value < modulus);
        WittInt {
            value,
            p,
            m,
            modulus,
        }
    }

    pub fn zero(p: u64, m: u32) -> Result<Self> {
        Self::new(p, m, 0)
    }

    pub fn one(p: u64, m: u32) -> Result<Self> {
        Self::new(p, m, 1)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check_same(&self, other: &WittInt) -> Result<()> {
        if self.p != other.p || self.m != other.m {
            return Err(Error::ModulusMismatch {
                left: format!("{}^{}", self.p, self.m),
                right: format!("{}^{}", other.p, other.m),
            });
        }
        Ok(())
    }

    pub fn arith(&self, other: &WittInt, op: WittOp) -> Result<WittInt> {
        self.check_same(other)?;
        let value = match op {
            WittOp::Add => add_mod(self.value, other.value, self.modulus),
            WittOp::Sub => sub_mod(self.value, other.value, self.modulus),
            WittOp::Mul => mul_mod(self.value, other.value, self.modulus),
        };
        Ok(WittInt { value, ..*self })
    }

    pub fn try_add(&self, other: &WittInt) -> Result<WittInt> {
        self.arith(other, WittOp::Add)
    }

    pub fn try_sub(&self, other: &WittInt) -> Result<WittInt> {
        self.arith(other, WittOp::Sub)
    }

    pub fn try_mul(&self, other: &WittInt) -> Result<WittInt> {
        self.arith(other, WittOp::Mul)
    }

    pub fn neg(&self) -> WittInt {
        WittInt {
            value: sub_mod(0, self.value, self.modulus),
            ..*self
        }
    }

    pub fn pow(&self, exp: u64) -> WittInt {
        WittInt {
            value: pow_mod(self.value, exp, self.modulus),
            ..*self
        }
    }

    /// `ord_p` of the residue; zero maps to the `AtLeast(m)` sentinel.
    pub fn ord_p(&self) -> Valuation {
        if self.value == 0 {
            Valuation::AtLeast(self.m)
        } else {
            Valuation::Finite(v_p(self.value, self.p))
        }
    }

    pub fn is_unit(&self) -> bool {
        self.ord_p() == Valuation::Finite(0)
    }

    pub fn unit_inverse(&self) -> Result<WittInt> {
        if !self.is_unit() {
            return Err(Error::NonUnit(format!("{} mod {}", self.value, self.modulus)));
        }
        let inv = inverse_mod(self.value, self.modulus).expect("unit has an inverse");
        Ok(WittInt { value: inv, ..*self })
    }

    /// Same integer representative, reduced to precision `m`.
    pub fn reduce_to(&self, m: u32) -> Result<WittInt> {
        WittInt::new(self.p, m, self.value as i128)
    }
}

impl fmt::Display for WittInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.p, self.m)
    }
}

impl Serialize for WittInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

/// `ord_p(n!)` via Legendre's formula `(n - s_p(n)) / (p - 1)`.
pub fn factorial_valuation(p: u64, n: u64) -> u64 {
    let mut digits = 0;
    let mut k = n;
    while k > 0 {
        digits += k % p;
        k /= p;
    }
    (n - digits) / (p - 1)
}

fn big_factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn reduce_big(v: &BigUint, p: u64, m: u32) -> Result<WittInt> {
    let modulus = checked_pow(p, m)?;
    let r = (v % modulus).to_u64().expect("residue fits");
    Ok(WittInt::from_reduced(p, m, modulus, r))
}

/// The unit `u` with `n! = p^v u`, reduced mod `p^m`.
pub fn factorial_unit_part(p: u64, n: u64, m: u32) -> Result<WittInt> {
    let v = factorial_valuation(p, n);
    let mut f = big_factorial(n);
    let pv = BigUint::from(p).pow(v as u32);
    debug_assert!((&f % &pv).is_zero());
    f /= pv;
    reduce_big(&f, p, m)
}

/// `C(a, b) mod p^m`, computed exactly before reduction.
pub fn binomial_mod(p: u64, a: u64, b: u64, m: u32) -> Result<WittInt> {
    if b > a {
        return WittInt::zero(p, m);
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    reduce_big(&acc, p, m)
}

/// The integer `(na)! / (n! (a!)^n)` governing `gamma^n(gamma^a(x))`, mod `p^m`.
pub fn pd_composition_constant(p: u64, n: u64, a: u64, m: u32) -> Result<WittInt> {
    let num = big_factorial(n * a);
    let den = big_factorial(n) * big_factorial(a).pow(n as u32);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    reduce_big(&q, p, m)
}

/// `p^k / k!` in `W_m`; always integral since `ord_p(k!) < k`.
pub(crate) fn divided_power_of_p(p: u64, k: u64, m: u32) -> Result<WittInt> {
    let v = factorial_valuation(p, k);
    let shift = k - v;
    let modulus = checked_pow(p, m)?;
    if shift >= m as u64 {
        return Ok(WittInt::from_reduced(p, m, modulus, 0));
    }
    let unit = factorial_unit_part(p, k, m)?.unit_inverse()?;
    let pk = pow_mod(p, shift, modulus);
    Ok(WittInt::from_reduced(p, m, modulus, mul_mod(pk, unit.value, modulus)))
}
