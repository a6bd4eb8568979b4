//! Divided powers on the PD families.
//!
//! An element of the PD ideal is split along the basis as
//! `p u + sum c_a gamma^a(T) + sum c'_b gamma^b(T) e`, and the divided powers
//! of each piece are known in closed form:
//!
//! * `gamma^k(p u) = u^k p^k / k!`
//! * `gamma^k(c gamma^a) = c^k ((ka)! / (k! (a!)^k)) gamma^{ka}`
//! * `gamma^k(y e) = 0` for `k >= 2`
//!
//! The pieces are then combined with `gamma^n(x + y) = sum gamma^i(x) gamma^{n-i}(y)`.

use super::{ArtinTestRing, BasisSymbol, RingElem, RingHandle};
use crate::error::{Error, Result};
use crate::witt::{divided_power_of_p, mul_mod, pd_composition_constant, pow_mod};
use std::sync::Arc;

/// `gamma^n(x)` for `x` in the PD ideal of a PD-family ring.
pub fn gamma(x: &RingElem, n: u32) -> Result<RingElem> {
    let ring = x.ring();
    if !ring.is_pd() {
        return Err(Error::NotPdRing(ring.descriptor().to_string()));
    }
    if !x.in_max_ideal() {
        return Err(Error::NotInPdIdeal(x.to_string()));
    }
    let n = n as usize;
    let mut total = unit_series(ring, n);
    for (i, &c) in x.coords().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let piece = piece_series(ring, i, c, n)?;
        total = convolve(&total, &piece);
    }
    Ok(total.swap_remove(n))
}

/// `[1, 0, 0, ...]` of length `n + 1`.
fn unit_series(ring: &Arc<ArtinTestRing>, n: usize) -> Vec<RingElem> {
    let mut s = vec![ring.zero(); n + 1];
    s[0] = ring.one();
    s
}

/// `[gamma^0, ..., gamma^n]` of `c e_i`.
fn piece_series(ring: &Arc<ArtinTestRing>, i: usize, c: u64, n: usize) -> Result<Vec<RingElem>> {
    let p = ring.p();
    let mut s = unit_series(ring, n);
    match ring.basis()[i] {
        BasisSymbol::Gamma { index: 0, eps: false } => {
            let a0 = ring.mod_exps()[0];
            let q = ring.moduli()[0];
            let u = c / p;
            for (k, slot) in s.iter_mut().enumerate().skip(1) {
                let dp = divided_power_of_p(p, k as u64, a0)?.value();
                *slot = ring.scalar(mul_mod(pow_mod(u, k as u64, q), dp, q) as i128);
            }
        }
        BasisSymbol::Gamma { index: a, eps: false } => {
            for (k, slot) in s.iter_mut().enumerate().skip(1) {
                let target = BasisSymbol::Gamma {
                    index: a * k as u32,
                    eps: false,
                };
                let Some(j) = ring.index_of(&target) else {
                    break;
                };
                let q = ring.moduli()[j];
                let exp = ring.mod_exps()[j];
                let constant = pd_composition_constant(p, k as u64, a as u64, exp)?.value();
                let coeff = mul_mod(pow_mod(c, k as u64, q), constant, q);
                *slot = ring.basis_elem(j).scale(coeff as i128);
            }
        }
        BasisSymbol::Gamma { eps: true, .. } => {
            if n >= 1 {
                s[1] = ring.basis_elem(i).scale(c as i128);
            }
        }
        BasisSymbol::TPow(_) => return Err(Error::NotPdRing(ring.descriptor().to_string())),
    }
    Ok(s)
}

fn convolve(a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
    let n = a.len();
    (0..n)
        .map(|k| {
            (0..=k).fold(a[0].ring().zero(), |acc, i| {
                if a[i].is_zero() || b[k - i].is_zero() {
                    acc
                } else {
                    &acc + &(&a[i] * &b[k - i])
                }
            })
        })
        .collect()
}
