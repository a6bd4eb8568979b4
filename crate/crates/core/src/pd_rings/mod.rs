//! Finite local test algebras over `W = Z_p`.
//!
//! Every ring here is a finite `W`-module with an explicit basis, where basis
//! vector `i` carries its own coefficient modulus `p^{a_i}`, together with a
//! table of structure constants. Basis vector `0` is always the unit and all
//! other basis vectors are nilpotent, so the maximal ideal is exactly the set
//! of elements whose unit coordinate is divisible by `p`.
//!
//! The families are the truncated Witt rings `W_m`, the dual numbers over them,
//! the divided-power algebras `W_{m,d} = W_m<T>/(gamma^d(T), gamma^{d+1}(T), ...)`
//! with their dual-number extensions, and the curve rings
//! `W[[T]]/(p - g T^n, T^d)`.

mod enumerate;
mod gamma;
mod maps;
mod ramified;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witt::{add_mod, binomial_mod, checked_pow, mul_mod, reduce_i128, sub_mod, RingParams};

pub use enumerate::MaxIdealIter;
pub use gamma::gamma;
pub use maps::{
    eps_restriction, make_truncation, make_truncation_between, shift_substitution, KernelGenerator,
    RingHom, TruncationMap,
};
pub use ramified::CurveFactor;

/// The ring families understood by [`make_ring`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    /// `W_m`
    Wm { m: u32 },
    /// `W_m[e]`
    WmEps { m: u32 },
    /// `W_{m+1}[e]/(p^m e)`
    WmMixedEps { m: u32 },
    /// `W_{m,d}`
    Pd { m: u32, d: u32 },
    /// `W_{m,d}[e]`
    PdEps { m: u32, d: u32 },
    /// `W_{m,d}[e]/(gamma^{d-1}(T) e)`
    PdEpsQuot { m: u32, d: u32 },
    /// `W[[T]]/(p - g T^n, T^d)`
    Ramified { n: u32, g: CurveFactor, d: u32 },
    /// `k[T]/(T^d)`
    ResidueSeries { d: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub family: Family,
    pub params: RingParams,
}

impl RingDescriptor {
    pub fn new(family: Family, params: RingParams) -> Self {
        RingDescriptor { family, params }
    }

    pub fn p(&self) -> u64 {
        self.params.p()
    }

    /// Whether the ring carries the divided-power structure used by [`gamma`].
    pub fn is_pd(&self) -> bool {
        !matches!(
            self.family,
            Family::Ramified { .. } | Family::ResidueSeries { .. }
        )
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Wm { m } => write!(f, "W_{m}"),
            Family::WmEps { m } => write!(f, "W_{m}[e]"),
            Family::WmMixedEps { m } => write!(f, "W_{}[e]/(p^{m} e)", m + 1),
            Family::Pd { m, d } => write!(f, "W_{{{m},{d}}}"),
            Family::PdEps { m, d } => write!(f, "W_{{{m},{d}}}[e]"),
            Family::PdEpsQuot { m, d } => {
                write!(f, "W_{{{m},{d}}}[e]/(g{} e)", d.saturating_sub(1))
            }
            Family::Ramified { n, g, d } => write!(f, "W[[T]]/(p - ({g}) T^{n}, T^{d})"),
            Family::ResidueSeries { d } => write!(f, "k[T]/(T^{d})"),
        }?;
        write!(f, " (p = {})", self.p())
    }
}

/// A basis vector. `Gamma { index, eps }` is `gamma^index(T)`, times `e` when
/// `eps` is set; the plain Witt families only use index 0. `TPow(i)` is `T^i`
/// in a curve ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisSymbol {
    Gamma { index: u32, eps: bool },
    TPow(u32),
}

impl BasisSymbol {
    pub fn label(&self) -> String {
        match *self {
            BasisSymbol::Gamma { index: 0, eps: false } | BasisSymbol::TPow(0) => "1".into(),
            BasisSymbol::Gamma { index: 0, eps: true } => "e".into(),
            BasisSymbol::Gamma { index, eps: false } => format!("g{index}"),
            BasisSymbol::Gamma { index, eps: true } => format!("g{index}e"),
            BasisSymbol::TPow(i) => format!("t{i}"),
        }
    }

    /// Parse a label, accepting `g0`/`g0e` as aliases of `1`/`e`.
    pub fn parse(label: &str) -> Option<BasisSymbol> {
        match label {
            "1" => return Some(BasisSymbol::Gamma { index: 0, eps: false }),
            "e" => return Some(BasisSymbol::Gamma { index: 0, eps: true }),
            _ => {}
        }
        if let Some(rest) = label.strip_prefix('g') {
            let (digits, eps) = match rest.strip_suffix('e') {
                Some(d) => (d, true),
                None => (rest, false),
            };
            let index = digits.parse().ok()?;
            return Some(BasisSymbol::Gamma { index, eps });
        }
        if let Some(rest) = label.strip_prefix('t') {
            return rest.parse().ok().map(BasisSymbol::TPow);
        }
        None
    }

    pub fn has_eps(&self) -> bool {
        matches!(self, BasisSymbol::Gamma { eps: true, .. })
    }

    /// The same symbol with the `e` factor removed.
    pub fn without_eps(&self) -> BasisSymbol {
        match *self {
            BasisSymbol::Gamma { index, .. } => BasisSymbol::Gamma { index, eps: false },
            other => other,
        }
    }

    pub fn with_eps(&self) -> BasisSymbol {
        match *self {
            BasisSymbol::Gamma { index, .. } => BasisSymbol::Gamma { index, eps: true },
            other => other,
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A finite local `W`-algebra presented by a basis and structure constants.
#[derive(Debug)]
pub struct ArtinTestRing {
    descriptor: RingDescriptor,
    basis: Vec<BasisSymbol>,
    mod_exps: Vec<u32>,
    moduli: Vec<u64>,
    /// `table[i * n + j]` is the coordinate vector of `e_i * e_j`.
    table: Vec<Vec<u64>>,
    nilpotency_bound: u32,
    index: HashMap<BasisSymbol, usize>,
}

impl PartialEq for ArtinTestRing {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

impl Eq for ArtinTestRing {}

/// Build and verify a ring from its descriptor.
pub fn make_ring(descriptor: &RingDescriptor) -> Result<Arc<ArtinTestRing>> {
    let ring = match &descriptor.family {
        Family::Ramified { n, g, d } => ramified::build(descriptor, *n, g, *d)?,
        Family::ResidueSeries { d } => ramified::build(descriptor, 1, &CurveFactor::Zero, *d)?,
        _ => build_pd_family(descriptor)?,
    };
    let ring = Arc::new(ring);
    verify_structure(&ring)?;
    Ok(ring)
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidRing(msg.into()))
    }
}

fn build_pd_family(descriptor: &RingDescriptor) -> Result<ArtinTestRing> {
    let gamma = |index: u32, eps: bool| BasisSymbol::Gamma { index, eps };
    let (basis, mod_exps, nilpotency_bound): (Vec<BasisSymbol>, Vec<u32>, u32) =
        match descriptor.family {
            Family::Wm { m } => {
                require(m >= 1, "W_m needs m >= 1")?;
                (vec![gamma(0, false)], vec![m], m)
            }
            Family::WmEps { m } => {
                require(m >= 1, "W_m[e] needs m >= 1")?;
                (vec![gamma(0, false), gamma(0, true)], vec![m, m], m + 1)
            }
            Family::WmMixedEps { m } => {
                require(m >= 1, "W_{m+1}[e]/(p^m e) needs m >= 1")?;
                (vec![gamma(0, false), gamma(0, true)], vec![m + 1, m], m + 1)
            }
            Family::Pd { m, d } => {
                require(m >= 1 && d >= 1, "W_{m,d} needs m, d >= 1")?;
                let basis = (0..d).map(|i| gamma(i, false)).collect();
                (basis, vec![m; d as usize], m + d - 1)
            }
            Family::PdEps { m, d } => {
                require(m >= 1 && d >= 1, "W_{m,d}[e] needs m, d >= 1")?;
                let basis = (0..d)
                    .map(|i| gamma(i, false))
                    .chain((0..d).map(|i| gamma(i, true)))
                    .collect();
                (basis, vec![m; 2 * d as usize], m + d)
            }
            Family::PdEpsQuot { m, d } => {
                require(m >= 1 && d >= 1, "W_{m,d}[e]/(g_{d-1} e) needs m, d >= 1")?;
                let basis: Vec<_> = (0..d)
                    .map(|i| gamma(i, false))
                    .chain((0..d - 1).map(|i| gamma(i, true)))
                    .collect();
                let len = basis.len();
                (basis, vec![m; len], m + d)
            }
            Family::Ramified { .. } | Family::ResidueSeries { .. } => unreachable!(),
        };

    let p = descriptor.p();
    let mut ring = ArtinTestRing::skeleton(descriptor.clone(), basis, mod_exps, nilpotency_bound)?;
    let n = ring.dim();
    for i in 0..n {
        for j in 0..n {
            let mut out = vec![0u64; n];
            if let (
                BasisSymbol::Gamma { index: a, eps: e1 },
                BasisSymbol::Gamma { index: b, eps: e2 },
            ) = (ring.basis[i], ring.basis[j])
            {
                if !(e1 && e2) {
                    let target = gamma(a + b, e1 || e2);
                    if let Some(&k) = ring.index.get(&target) {
                        let c = binomial_mod(p, (a + b) as u64, a as u64, ring.mod_exps[k])?;
                        out[k] = c.value();
                    }
                }
            }
            ring.table[i * n + j] = out;
        }
    }
    Ok(ring)
}

impl ArtinTestRing {
    pub(crate) fn skeleton(
        descriptor: RingDescriptor,
        basis: Vec<BasisSymbol>,
        mod_exps: Vec<u32>,
        nilpotency_bound: u32,
    ) -> Result<Self> {
        let p = descriptor.p();
        let moduli = mod_exps
            .iter()
            .map(|&a| checked_pow(p, a))
            .collect::<Result<Vec<_>>>()?;
        let index = basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let n = basis.len();
        Ok(ArtinTestRing {
            descriptor,
            basis,
            mod_exps,
            moduli,
            table: vec![Vec::new(); n * n],
            nilpotency_bound,
            index,
        })
    }

    pub(crate) fn set_product(&mut self, i: usize, j: usize, coords: Vec<u64>) {
        let n = self.dim();
        self.table[i * n + j] = coords;
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }

    pub fn p(&self) -> u64 {
        self.descriptor.p()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisSymbol] {
        &self.basis
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(BasisSymbol::label).collect()
    }

    pub fn mod_exps(&self) -> &[u32] {
        &self.mod_exps
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn max_mod_exp(&self) -> u32 {
        self.mod_exps.iter().copied().max().unwrap_or(0)
    }

    pub fn nilpotency_bound(&self) -> u32 {
        self.nilpotency_bound
    }

    pub fn index_of(&self, symbol: &BasisSymbol) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Coordinates of `e_i * e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[u64] {
        &self.table[i * self.dim() + j]
    }

    /// Number of elements, `prod p^{a_i}`.
    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&q| q as u128).product()
    }

    pub fn is_pd(&self) -> bool {
        self.descriptor.is_pd()
    }

    fn elem(self: &Arc<Self>, coords: Vec<u64>) -> RingElem {
        RingElem {
            ring: Arc::clone(self),
            coords,
        }
    }
}

/// Check unit, commutativity, associativity, and that `p^{a_i}` kills every
/// product `e_i e_j`, so that multiplication is well defined on residues.
fn verify_structure(ring: &Arc<ArtinTestRing>) -> Result<()> {
    let n = ring.dim();
    let one = ring.one();
    let basis: Vec<RingElem> = (0..n).map(|i| ring.basis_elem(i)).collect();
    for (i, e) in basis.iter().enumerate() {
        if &(&one * e) != e {
            return Err(Error::InvalidRing(format!("basis {i} breaks the unit law")));
        }
        for (j, f) in basis.iter().enumerate() {
            let ef = e * f;
            if ef != f * e {
                return Err(Error::InvalidRing(format!("e_{i} e_{j} is not commutative")));
            }
            if !ef.scale(ring.moduli[i] as i128).is_zero() {
                return Err(Error::InvalidRing(format!(
                    "e_{i} e_{j} is not annihilated by the modulus of e_{i}"
                )));
            }
            for (k, g) in basis.iter().enumerate() {
                if &ef * g != e * &(f * g) {
                    return Err(Error::InvalidRing(format!(
                        "(e_{i} e_{j}) e_{k} differs from e_{i} (e_{j} e_{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Helpers that hand out elements of a shared ring.
#[allow(clippy::wrong_self_convention)]
pub trait RingHandle {
    fn zero(&self) -> RingElem;
    fn one(&self) -> RingElem;
    fn basis_elem(&self, i: usize) -> RingElem;
    fn scalar(&self, c: i128) -> RingElem;
    fn from_coords(&self, coords: &[i128]) -> Result<RingElem>;
    fn symbol(&self, symbol: BasisSymbol) -> Result<RingElem>;
    fn label(&self, label: &str) -> Result<RingElem>;
    /// Parse a signed sum of `c*label` terms, e.g. `9*g1 - 2*g2e + 3`.
    fn parse_element(&self, src: &str) -> Result<RingElem>;
    fn max_ideal_generators(&self) -> Vec<RingElem>;
    fn enumerate_max_ideal(&self) -> MaxIdealIter;
    fn max_ideal_size(&self) -> u128;
    fn max_ideal_element(&self, index: u128) -> RingElem;
}

impl RingHandle for Arc<ArtinTestRing> {
    fn zero(&self) -> RingElem {
        self.elem(vec![0; self.dim()])
    }

    fn one(&self) -> RingElem {
        self.scalar(1)
    }

    fn basis_elem(&self, i: usize) -> RingElem {
        let mut coords = vec![0; self.dim()];
        coords[i] = 1 % self.moduli[i];
        self.elem(coords)
    }

    fn scalar(&self, c: i128) -> RingElem {
        let mut coords = vec![0; self.dim()];
        coords[0] = reduce_i128(c, self.moduli[0]);
        self.elem(coords)
    }

    fn from_coords(&self, coords: &[i128]) -> Result<RingElem> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a ring of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        let reduced = coords
            .iter()
            .zip(&self.moduli)
            .map(|(c, q)| reduce_i128(*c, *q))
            .collect();
        Ok(self.elem(reduced))
    }

    fn symbol(&self, symbol: BasisSymbol) -> Result<RingElem> {
        self.index_of(&symbol)
            .map(|i| self.basis_elem(i))
            .ok_or_else(|| {
                Error::InvalidRing(format!("{} has no basis symbol {symbol}", self.descriptor))
            })
    }

    fn label(&self, label: &str) -> Result<RingElem> {
        let symbol = BasisSymbol::parse(label)
            .ok_or_else(|| Error::InvalidRing(format!("unknown basis symbol '{label}'")))?;
        self.symbol(symbol)
    }

    fn parse_element(&self, src: &str) -> Result<RingElem> {
        let err = |column: usize, message: String| Error::Parse { column, message };
        let chars: Vec<char> = src.chars().collect();
        let mut acc = self.zero();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let mut first = true;
        loop {
            skip_ws(&mut i);
            let mut sign = 1i128;
            if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                sign = if chars[i] == '-' { -1 } else { 1 };
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(err(i + 1, "expected '+' or '-'".into()));
            }
            first = false;
            let start = i;
            let mut coeff: Option<i128> = None;
            if i < chars.len() && chars[i].is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                coeff = Some(digits.parse().map_err(|_| err(start + 1, "coefficient too large".into()))?);
                skip_ws(&mut i);
                if i < chars.len() && chars[i] == '*' {
                    i += 1;
                    skip_ws(&mut i);
                } else {
                    acc = &acc + &self.scalar(sign * coeff.unwrap_or(1));
                    if i >= chars.len() {
                        return Ok(acc);
                    }
                    continue;
                }
            }
            let lstart = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            if lstart == i {
                return Err(err(lstart + 1, "expected a coefficient or a basis label".into()));
            }
            let label: String = chars[lstart..i].iter().collect();
            let elem = self
                .label(&label)
                .map_err(|e| err(lstart + 1, e.to_string()))?;
            acc = &acc + &elem.scale(sign * coeff.unwrap_or(1));
            skip_ws(&mut i);
            if i >= chars.len() {
                return Ok(acc);
            }
        }
    }

    fn max_ideal_generators(&self) -> Vec<RingElem> {
        let mut gens = Vec::new();
        let p_one = self.scalar(self.p() as i128);
        if !p_one.is_zero() {
            gens.push(p_one);
        }
        gens.extend((1..self.dim()).map(|i| self.basis_elem(i)));
        gens
    }

    fn enumerate_max_ideal(&self) -> MaxIdealIter {
        MaxIdealIter::new(Arc::clone(self))
    }

    fn max_ideal_size(&self) -> u128 {
        self.order() / self.p() as u128
    }

    fn max_ideal_element(&self, index: u128) -> RingElem {
        enumerate::max_ideal_element(self, index)
    }
}

/// An element of an [`ArtinTestRing`]; coordinate `i` is reduced mod `p^{a_i}`.
#[derive(Clone)]
pub struct RingElem {
    ring: Arc<ArtinTestRing>,
    coords: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemOp {
    Add,
    Sub,
    Mul,
}

impl RingElem {
    pub fn ring(&self) -> &Arc<ArtinTestRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> u64 {
        self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Residue mod the maximal ideal vanishes.
    pub fn in_max_ideal(&self) -> bool {
        self.coords[0].is_multiple_of(self.ring.p())
    }

    /// Membership in the divided-power ideal; for the PD families this is the
    /// maximal ideal, other rings have no PD ideal here.
    pub fn in_pd_ideal(&self) -> bool {
        self.ring.is_pd() && self.in_max_ideal()
    }

    pub fn same_ring(&self, other: &RingElem) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    fn check_same(&self, other: &RingElem) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.descriptor.to_string(),
                right: other.ring.descriptor.to_string(),
            })
        }
    }

    pub fn arith(&self, other: &RingElem, op: ElemOp) -> Result<RingElem> {
        self.check_same(other)?;
        Ok(match op {
            ElemOp::Add => self.add_unchecked(other),
            ElemOp::Sub => self.sub_unchecked(other),
            ElemOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem> {
        self.arith(other, ElemOp::Add)
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.arith(other, ElemOp::Sub)
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.arith(other, ElemOp::Mul)
    }

    fn add_unchecked(&self, other: &RingElem) -> RingElem {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(&self.ring.moduli)
            .map(|((a, b), q)| add_mod(*a, *b, *q))
            .collect();
        RingElem {
            ring: Arc::clone(&self.ring),
            coords,
        }
    }

    fn sub_unchecked(&self, other: &RingElem) -> RingElem {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(&self.ring.moduli)
            .map(|((a, b), q)| sub_mod(*a, *b, *q))
            .collect();
        RingElem {
            ring: Arc::clone(&self.ring),
            coords,
        }
    }

    fn mul_unchecked(&self, other: &RingElem) -> RingElem {
        let ring = &self.ring;
        let n = ring.dim();
        let mut out = vec![0u64; n];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let prod = &ring.table[i * n + j];
                for (k, &t) in prod.iter().enumerate() {
                    if t == 0 {
                        continue;
                    }
                    let q = ring.moduli[k];
                    let ab = mul_mod(a, b, q);
                    out[k] = add_mod(out[k], mul_mod(ab, t, q), q);
                }
            }
        }
        RingElem {
            ring: Arc::clone(ring),
            coords: out,
        }
    }

    pub fn neg(&self) -> RingElem {
        let coords = self
            .coords
            .iter()
            .zip(&self.ring.moduli)
            .map(|(a, q)| sub_mod(0, *a, *q))
            .collect();
        RingElem {
            ring: Arc::clone(&self.ring),
            coords,
        }
    }

    /// Multiply by an integer.
    pub fn scale(&self, c: i128) -> RingElem {
        let coords = self
            .coords
            .iter()
            .zip(&self.ring.moduli)
            .map(|(a, q)| mul_mod(*a, reduce_i128(c, *q), *q))
            .collect();
        RingElem {
            ring: Arc::clone(&self.ring),
            coords,
        }
    }

    pub fn pow(&self, k: u32) -> RingElem {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Nonzero `(label, coefficient)` pairs in basis order.
    pub fn terms(&self) -> Vec<(String, u64)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (self.ring.basis[i].label(), *c))
            .collect()
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.coords == other.coords
    }
}

impl Eq for RingElem {}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring.descriptor)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (label, c)) in terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match (label.as_str(), *c) {
                ("1", c) => write!(f, "{c}")?,
                (l, 1) => f.write_str(l)?,
                (l, c) => write!(f, "{c}*{l}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RingElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RingElem", 3)?;
        st.serialize_field("labels", &self.ring.labels())?;
        st.serialize_field("coords", &self.coords)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RingElem> for &RingElem {
            type Output = RingElem;

            /// Panics if the operands live in different rings.
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.check_same(rhs).expect("ring mismatch");
                self.$inner(rhs)
            }
        }

        impl $tr<RingElem> for RingElem {
            type Output = RingElem;

            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_unchecked);
forward_binop!(Sub, sub, sub_unchecked);
forward_binop!(Mul, mul, mul_unchecked);

impl Neg for &RingElem {
    type Output = RingElem;

    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

/// Convenience constructor for the common `W_{m,d}` case.
pub fn pd_ring(p: u64, m: u32, d: u32) -> Result<Arc<ArtinTestRing>> {
    make_ring(&RingDescriptor::new(Family::Pd { m, d }, RingParams::new(p)?))
}
