//! Brute-force oracles shared by the integration tests. None of them call the
//! lifting or linear-algebra engines they are used to check.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use pdlift::lifting::AlgebraMap;
use pdlift::pd_rings::{ArtinTestRing, BasisSymbol, Family, RingElem, RingHandle, TruncationMap};
use pdlift::series::Presentation;
use pdlift::witt::ZpMatrix;

/// `f(x)` by plain ring arithmetic, one monomial at a time.
pub fn eval_poly(pres: &Presentation, j: usize, ring: &Arc<ArtinTestRing>, xs: &[RingElem]) -> RingElem {
    let mut acc = ring.zero();
    for (exps, c) in pres.generators()[j].terms() {
        let mut term = ring.scalar(c as i128);
        for (x, &e) in xs.iter().zip(exps) {
            term = &term * &x.pow(e);
        }
        acc = &acc + &term;
    }
    acc
}

pub fn kills_all(pres: &Presentation, ring: &Arc<ArtinTestRing>, xs: &[RingElem]) -> bool {
    (0..pres.generators().len()).all(|j| eval_poly(pres, j, ring, xs).is_zero())
}

/// Every element of a finite ring, by running over all coordinate vectors.
pub fn all_elements(ring: &Arc<ArtinTestRing>) -> Vec<RingElem> {
    let moduli = ring.moduli().to_vec();
    let mut out = Vec::new();
    let mut digits = vec![0u64; moduli.len()];
    loop {
        let coords: Vec<i128> = digits.iter().map(|&d| d as i128).collect();
        out.push(ring.from_coords(&coords).unwrap());
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] < moduli[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Reduction along a truncation, read off from the basis labels alone.
pub fn reduce_by_labels(x: &RingElem, target: &Arc<ArtinTestRing>) -> RingElem {
    let src_labels = x.ring().labels();
    let coords: Vec<i128> = target
        .labels()
        .iter()
        .map(|l| {
            src_labels
                .iter()
                .position(|s| s == l)
                .map_or(0, |i| x.coord(i) as i128)
        })
        .collect();
    target.from_coords(&coords).unwrap()
}

/// Search every preimage tuple of the base images for one that kills the
/// ideal. Returns the number of lifts found, stopping at `stop_after`.
pub fn exhaustive_lift_count(base: &AlgebraMap, surj: &TruncationMap, stop_after: usize) -> usize {
    let source = surj.source();
    let target = surj.target();
    let elements = all_elements(source);
    let fibers: Vec<Vec<RingElem>> = base
        .images()
        .iter()
        .map(|y| {
            elements
                .iter()
                .filter(|x| reduce_by_labels(x, target) == *y)
                .cloned()
                .collect()
        })
        .collect();
    let pres = base.presentation();
    let mut found = 0;
    let mut idx = vec![0usize; fibers.len()];
    loop {
        let xs: Vec<RingElem> = idx.iter().zip(&fibers).map(|(&i, f)| f[i].clone()).collect();
        if kills_all(pres, source, &xs) {
            found += 1;
            if found >= stop_after {
                return found;
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return found;
            }
            idx[k] += 1;
            if idx[k] < fibers[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// All solutions of `A x = b` over `Z/q`, by trying every `x`.
pub fn brute_force_solutions(a: &ZpMatrix, b: &[u64]) -> Vec<Vec<u64>> {
    let q = a.modulus();
    let n = a.cols();
    let mut out = Vec::new();
    let mut x = vec![0u64; n];
    loop {
        if a.apply(&x).iter().zip(b).all(|(l, r)| l == r) {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            x[k] += 1;
            if x[k] < q {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// The `Z/q`-span of `gens`, as a set.
pub fn span(gens: &[Vec<u64>], n: usize, q: u64) -> HashSet<Vec<u64>> {
    let mut set: HashSet<Vec<u64>> = HashSet::from([vec![0; n]]);
    for g in gens {
        let mut next = HashSet::new();
        for v in &set {
            let mut w = v.clone();
            for _ in 0..q {
                next.insert(w.clone());
                for (wi, gi) in w.iter_mut().zip(g) {
                    *wi = (*wi + gi) % q;
                }
            }
        }
        set = next;
    }
    set
}

/// `W_{m,d}` and `W_{m,d}[e]` inside `Q[T, e]/(T^d, e^2)`, with
/// `gamma^k(T) = T^k / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPd {
    pub p: u64,
    pub m: u32,
    pub d: usize,
    /// `[plain part, e part]`, each by powers of `T`.
    pub parts: [Vec<BigRational>; 2],
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl RationalPd {
    pub fn zero(p: u64, m: u32, d: usize) -> Self {
        RationalPd {
            p,
            m,
            d,
            parts: [vec![BigRational::zero(); d], vec![BigRational::zero(); d]],
        }
    }

    pub fn one(p: u64, m: u32, d: usize) -> Self {
        let mut out = Self::zero(p, m, d);
        out.parts[0][0] = BigRational::one();
        out
    }

    /// Read an element of a `Pd` or `PdEps` ring through its basis labels.
    pub fn from_elem(x: &RingElem) -> Self {
        let ring = x.ring();
        let (m, d) = match ring.descriptor().family {
            Family::Pd { m, d } | Family::PdEps { m, d } => (m, d as usize),
            ref f => panic!("not a PD family: {f:?}"),
        };
        let mut out = Self::zero(ring.p(), m, d);
        for (sym, &c) in ring.basis().iter().zip(x.coords()) {
            let BasisSymbol::Gamma { index, eps } = *sym else {
                unreachable!()
            };
            let k = index as usize;
            out.parts[eps as usize][k] = rat(BigInt::from(c)) / rat(factorial(k));
        }
        out
    }

    /// Back to `ring`, reducing each `gamma^k` coefficient mod `p^m`.
    pub fn to_elem(&self, ring: &Arc<ArtinTestRing>) -> RingElem {
        let q = BigInt::from(self.p).pow(self.m);
        let coords: Vec<i128> = ring
            .basis()
            .iter()
            .map(|sym| {
                let BasisSymbol::Gamma { index, eps } = *sym else {
                    unreachable!()
                };
                let c = &self.parts[eps as usize][index as usize] * rat(factorial(index as usize));
                reduce_rational(&c, &q, self.p)
            })
            .collect();
        ring.from_coords(&coords).unwrap()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for e in 0..2 {
            for k in 0..self.d {
                out.parts[e][k] += &other.parts[e][k];
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p, self.m, self.d);
        for (e1, a) in self.parts.iter().enumerate() {
            for (e2, b) in other.parts.iter().enumerate() {
                if e1 + e2 > 1 {
                    continue;
                }
                for (i, ai) in a.iter().enumerate() {
                    for (j, bj) in b[..self.d - i].iter().enumerate() {
                        out.parts[e1 + e2][i + j] += ai * bj;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.p, self.m, self.d), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for part in out.parts.iter_mut() {
            for v in part.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    /// `x^n / n!`
    pub fn gamma(&self, n: u32) -> Self {
        self.pow(n).scale(&(BigRational::one() / rat(factorial(n as usize))))
    }
}

/// `a/b mod q` for `b` prime to `p`; panics when the value is not `p`-integral.
pub fn reduce_rational(c: &BigRational, q: &BigInt, p: u64) -> i128 {
    let den = c.denom();
    assert!(
        !(den % BigInt::from(p)).is_zero() || den.is_one(),
        "{c} is not p-integral"
    );
    let num = c.numer().mod_floor(q);
    let den = den.mod_floor(q);
    let inv = den.extended_gcd(q).x.mod_floor(q);
    let v = (num * inv).mod_floor(q);
    debug_assert!(!v.is_negative());
    v.to_i128().unwrap()
}
