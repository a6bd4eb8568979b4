//! Curve rings `W[[T]]/(p - g(T) T^n, T^d)`.
//!
//! The ring is a quotient of a DVR with uniformizer `T`, so every element has
//! a unique expansion `sum_{i<d} a_i T^i` with digits `0 <= a_i < p`. Products
//! are computed on digits and carried upwards with `p = g(T) T^n`. The
//! `W`-basis used by [`ArtinTestRing`] is `T^r` for `r < min(n, d)`, where
//! `T^r` has additive order `p^{ceil((d - r) / n)}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ArtinTestRing, BasisSymbol, RingDescriptor};
use crate::error::{Error, Result};
use crate::witt::{checked_pow, inverse_mod, pow_mod, reduce_i128};

/// The factor `g` in `p = g(T) T^n`: zero, or a power series with unit
/// constant term given by its low coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CurveFactor {
    Zero,
    Unit(Vec<i64>),
}

impl fmt::Display for CurveFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFactor::Zero => f.write_str("0"),
            CurveFactor::Unit(cs) => {
                let mut first = true;
                for (i, c) in cs.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{c}")?,
                        1 => write!(f, "{c}T")?,
                        _ => write!(f, "{c}T^{i}")?,
                    }
                }
                if first {
                    f.write_str("0")?;
                }
                Ok(())
            }
        }
    }
}

/// Digit arithmetic in `W[[T]]/(p - g T^n, T^d)`.
#[derive(Debug, Clone)]
pub(crate) struct DigitEngine {
    p: i128,
    n: usize,
    g: Vec<i128>,
    d: usize,
}

impl DigitEngine {
    pub(crate) fn new(p: u64, n: u32, g: &CurveFactor, d: u32) -> Result<Self> {
        let d = d as usize;
        let (n, g) = match g {
            // p = 0; an n past the truncation makes every carry vanish.
            CurveFactor::Zero => (d.max(1), Vec::new()),
            CurveFactor::Unit(cs) => {
                if n == 0 {
                    return Err(Error::InvalidRing("curve ring needs n >= 1".into()));
                }
                let g0 = cs.first().copied().unwrap_or(0);
                if (g0 as i128).rem_euclid(p as i128) == 0 {
                    return Err(Error::InvalidRing(format!(
                        "g = {g} must have a unit constant term"
                    )));
                }
                (n as usize, cs.iter().map(|&c| c as i128).collect())
            }
        };
        Ok(DigitEngine {
            p: p as i128,
            n,
            g,
            d,
        })
    }

    /// Bring an arbitrary coefficient vector to digit normal form.
    pub(crate) fn normalize(&self, raw: &[i128]) -> Vec<i128> {
        let mut digits = vec![0i128; self.d];
        for (i, c) in raw.iter().enumerate().take(self.d) {
            digits[i] = *c;
        }
        for i in 0..self.d {
            let q = digits[i].div_euclid(self.p);
            digits[i] = digits[i].rem_euclid(self.p);
            if q == 0 {
                continue;
            }
            for (k, gk) in self.g.iter().enumerate() {
                let pos = i + self.n + k;
                if pos >= self.d {
                    break;
                }
                digits[pos] += q * gk;
            }
        }
        digits
    }

    #[cfg(test)]
    pub(crate) fn mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut raw = vec![0i128; self.d];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < self.d {
                    raw[i + j] += x * y;
                }
            }
        }
        self.normalize(&raw)
    }

    pub(crate) fn add(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let raw: Vec<i128> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&raw)
    }

    /// Digits of `c T^r` for an integer `c`.
    pub(crate) fn monomial(&self, c: i128, r: usize) -> Vec<i128> {
        let mut raw = vec![0i128; self.d];
        if r < self.d {
            raw[r] = c;
        }
        self.normalize(&raw)
    }

    pub(crate) fn w_rank(&self) -> usize {
        self.n.min(self.d)
    }

    pub(crate) fn w_exp(&self, r: usize) -> u32 {
        (self.d - r).div_ceil(self.n) as u32
    }

    /// Digits of the element with `W`-coordinates `coords`.
    #[cfg(test)]
    #[allow(clippy::wrong_self_convention)]
    pub(crate) fn from_w_coords(&self, coords: &[i128]) -> Vec<i128> {
        let mut acc = vec![0i128; self.d];
        for (r, c) in coords.iter().enumerate() {
            acc = self.add(&acc, &self.monomial(*c, r));
        }
        acc
    }

    /// `W`-coordinates of a digit vector, reduced mod `p^{w_exp(r)}`.
    pub(crate) fn to_w_coords(&self, digits: &[i128]) -> Result<Vec<u64>> {
        let p = self.p as u64;
        let g0 = self.g.first().map(|g| reduce_i128(*g, p)).unwrap_or(1);
        let g0_inv = inverse_mod(g0, p).expect("unit constant term");
        let mut rest = self.normalize(digits);
        let mut coords = vec![0i128; self.w_rank()];
        for i in 0..self.d {
            let v = rest[i];
            if v == 0 {
                continue;
            }
            let (q, r) = (i / self.n, i % self.n);
            let unit = pow_mod(g0_inv, q as u64, p) as i128;
            let c = (v * unit).rem_euclid(self.p);
            let pq = checked_pow(p, q as u32)? as i128;
            coords[r] += c * pq;
            let step = self.monomial(-c * pq, r);
            rest = self.add(&rest, &step);
            debug_assert_eq!(rest[i], 0);
        }
        coords
            .iter()
            .enumerate()
            .map(|(r, c)| Ok(reduce_i128(*c, checked_pow(p, self.w_exp(r))?)))
            .collect()
    }
}

pub(super) fn build(
    descriptor: &RingDescriptor,
    n: u32,
    g: &CurveFactor,
    d: u32,
) -> Result<ArtinTestRing> {
    if d == 0 {
        return Err(Error::InvalidRing("curve ring needs d >= 1".into()));
    }
    let engine = DigitEngine::new(descriptor.p(), n, g, d)?;
    let rank = engine.w_rank();
    let basis = (0..rank as u32).map(BasisSymbol::TPow).collect();
    let exps = (0..rank).map(|r| engine.w_exp(r)).collect();
    let mut ring = ArtinTestRing::skeleton(descriptor.clone(), basis, exps, d)?;
    for i in 0..rank {
        for j in 0..rank {
            let digits = engine.monomial(1, i + j);
            ring.set_product(i, j, engine.to_w_coords(&digits)?);
        }
    }
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_carries_with_g() {
        // p = 2 = T in W[[T]]/(p - T, T^4): the integer 2 is T, 3 is 1 + T.
        let e = DigitEngine::new(2, 1, &CurveFactor::Unit(vec![1]), 4).unwrap();
        assert_eq!(e.normalize(&[2]), vec![0, 1, 0, 0]);
        assert_eq!(e.normalize(&[3]), vec![1, 1, 0, 0]);
        // -1 = 1 + T + T^2 + T^3 mod T^4 since T = 2.
        assert_eq!(e.normalize(&[-1]), vec![1, 1, 1, 1]);
    }

    #[test]
    fn w_coords_roundtrip() {
        let e = DigitEngine::new(3, 2, &CurveFactor::Unit(vec![2, 1]), 5).unwrap();
        assert_eq!(e.w_rank(), 2);
        assert_eq!((e.w_exp(0), e.w_exp(1)), (3, 2));
        for a in 0..27i128 {
            for b in 0..9i128 {
                let digits = e.from_w_coords(&[a, b]);
                assert_eq!(e.to_w_coords(&digits).unwrap(), vec![a as u64, b as u64]);
            }
        }
    }

    #[test]
    fn zero_factor_is_residue_series() {
        let e = DigitEngine::new(5, 1, &CurveFactor::Zero, 3).unwrap();
        assert_eq!(e.normalize(&[5, 7, 12]), vec![0, 2, 2]);
        assert_eq!(e.w_rank(), 3);
        assert_eq!(e.w_exp(2), 1);
    }

    #[test]
    fn rejects_nonunit_factor() {
        assert!(DigitEngine::new(3, 1, &CurveFactor::Unit(vec![3, 1]), 3).is_err());
        assert!(DigitEngine::new(3, 0, &CurveFactor::Unit(vec![1]), 3).is_err());
    }
}
