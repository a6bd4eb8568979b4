//! Truncated multivariate power series over `W_m = Z/p^m`.
//!
//! A [`TruncatedSeries`] lives in a [`SeriesSpace`]: fixed variables, fixed
//! coefficient precision `m`, and a degree cap `D`. Terms of total degree
//! `>= D` are dropped, so every operation is exact in
//! `W[[T_1..T_r]] / (p^m, (T_1..T_r)^D)`.

mod eval;
mod expr;
mod presentation;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::witt::{
    add_mod, checked_pow, mul_mod, reduce_i128, sub_mod, v_p, RingParams, Valuation, WittInt,
};

pub use eval::{evaluate, evaluate_all};
pub use expr::parse_series;
pub use presentation::{Elimination, LinearDiagnostics, LinearTerm, Minimized, Presentation};

/// Variables, precision and degree cap shared by a family of series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesSpace {
    params: RingParams,
    precision: u32,
    modulus: u64,
    degree_cap: u32,
    vars: Vec<String>,
}

impl SeriesSpace {
    pub fn new(
        params: RingParams,
        precision: u32,
        degree_cap: u32,
        vars: Vec<String>,
    ) -> Result<Arc<Self>> {
        if precision == 0 {
            return Err(Error::SeriesMismatch("precision must be at least 1".into()));
        }
        if degree_cap == 0 {
            return Err(Error::SeriesMismatch("degree cap must be at least 1".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::SeriesMismatch(format!("variable '{v}' repeated")));
            }
        }
        let modulus = checked_pow(params.p(), precision)?;
        Ok(Arc::new(SeriesSpace {
            params,
            precision,
            modulus,
            degree_cap,
            vars,
        }))
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same precision and cap, different variables.
    pub fn with_vars(&self, vars: Vec<String>) -> Result<Arc<Self>> {
        SeriesSpace::new(self.params, self.precision, self.degree_cap, vars)
    }
}

/// A series in a [`SeriesSpace`]. Only nonzero coefficients of degree `< D`
/// are stored.
#[derive(Clone)]
pub struct TruncatedSeries {
    space: Arc<SeriesSpace>,
    terms: BTreeMap<Vec<u32>, u64>,
}

fn degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

impl TruncatedSeries {
    pub fn zero(space: &Arc<SeriesSpace>) -> Self {
        TruncatedSeries {
            space: Arc::clone(space),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &Arc<SeriesSpace>, c: i128) -> Self {
        Self::monomial(space, vec![0; space.num_vars()], c)
    }

    pub fn one(space: &Arc<SeriesSpace>) -> Self {
        Self::constant(space, 1)
    }

    /// The `i`-th variable.
    pub fn var(space: &Arc<SeriesSpace>, i: usize) -> Self {
        let mut exps = vec![0; space.num_vars()];
        exps[i] = 1;
        Self::monomial(space, exps, 1)
    }

    pub fn monomial(space: &Arc<SeriesSpace>, exps: Vec<u32>, c: i128) -> Self {
        assert_eq!(exps.len(), space.num_vars(), "exponent length");
        let mut s = Self::zero(space);
        s.insert(exps, reduce_i128(c, space.modulus));
        s
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(
        space: &Arc<SeriesSpace>,
        terms: impl IntoIterator<Item = (Vec<u32>, i128)>,
    ) -> Result<Self> {
        let mut s = Self::zero(space);
        for (exps, c) in terms {
            if exps.len() != space.num_vars() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    space.num_vars()
                )));
            }
            s.accumulate(exps, reduce_i128(c, space.modulus));
        }
        Ok(s)
    }

    fn insert(&mut self, exps: Vec<u32>, c: u64) {
        if c != 0 && degree(&exps) < self.space.degree_cap {
            self.terms.insert(exps, c);
        } else {
            self.terms.remove(&exps);
        }
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: u64) {
        if c == 0 || degree(&exps) >= self.space.degree_cap {
            return;
        }
        let q = self.space.modulus;
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = add_mod(*o.get(), c, q);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn space(&self) -> &Arc<SeriesSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn coeff_witt(&self, exps: &[u32]) -> WittInt {
        WittInt::new(self.space.p(), self.space.precision, self.coeff(exps) as i128)
            .expect("space parameters are valid")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&vec![0; self.space.num_vars()])
    }

    /// Coefficient of `T_i` for each variable.
    pub fn linear_coeffs(&self) -> Vec<u64> {
        (0..self.space.num_vars())
            .map(|i| {
                let mut e = vec![0; self.space.num_vars()];
                e[i] = 1;
                self.coeff(&e)
            })
            .collect()
    }

    /// Smallest total degree of a stored term; `AtLeast(D)` for zero.
    pub fn ord(&self) -> Valuation {
        self.terms
            .keys()
            .map(|e| degree(e))
            .min()
            .map_or(Valuation::AtLeast(self.space.degree_cap), Valuation::Finite)
    }

    /// Largest total degree of a stored term.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    /// The homogeneous component of degree `n`.
    pub fn homogeneous(&self, n: u32) -> Self {
        TruncatedSeries {
            space: Arc::clone(&self.space),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) == n)
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    /// Minimum `ord_p` over the coefficients.
    pub fn content_valuation(&self) -> Valuation {
        let m = self.space.precision;
        self.terms
            .values()
            .map(|&c| v_p(c, self.space.p()).min(m))
            .min()
            .map_or(Valuation::AtLeast(m), Valuation::Finite)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space == other.space || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::SeriesMismatch(format!(
                "{:?} (m = {}, D = {}) vs {:?} (m = {}, D = {})",
                self.space.vars,
                self.space.precision,
                self.space.degree_cap,
                other.space.vars,
                other.space.precision,
                other.space.degree_cap
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), *c);
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let q = self.space.modulus;
        let cap = self.space.degree_cap;
        let mut out = Self::zero(&self.space);
        for (e1, c1) in &self.terms {
            let d1 = degree(e1);
            for (e2, c2) in &other.terms {
                if d1 + degree(e2) >= cap {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.accumulate(e, mul_mod(*c1, *c2, q));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let q = self.space.modulus;
        TruncatedSeries {
            space: Arc::clone(&self.space),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), sub_mod(0, *c, q)))
                .collect(),
        }
    }

    pub fn scale(&self, c: i128) -> Self {
        let q = self.space.modulus;
        let c = reduce_i128(c, q);
        let mut out = Self::zero(&self.space);
        for (e, v) in &self.terms {
            out.insert(e.clone(), mul_mod(*v, c, q));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.space);
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `d/dT_i`. The result stays in the same space; its degree is below `D - 1`
    /// automatically.
    pub fn derivative(&self, i: usize) -> Self {
        let q = self.space.modulus;
        let mut out = Self::zero(&self.space);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.accumulate(e2, mul_mod(*c, e[i] as u64 % q, q));
        }
        out
    }

    /// `f(images)`, where `images[i]` replaces variable `i`. Images share a
    /// target space with the same `p` and precision; each needs a constant
    /// term in `pW` so the substitution converges.
    pub fn compose(&self, images: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if images.len() != self.space.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.space.num_vars()
            )));
        }
        let target = match images.first() {
            Some(img) => Arc::clone(&img.space),
            None => Arc::clone(&self.space),
        };
        if target.p() != self.space.p() || target.precision != self.space.precision {
            return Err(Error::SeriesMismatch(
                "composition needs matching p and precision".into(),
            ));
        }
        for (i, img) in images.iter().enumerate() {
            if *img.space != *target {
                return Err(Error::SeriesMismatch("images live in different spaces".into()));
            }
            if img.constant_term() % self.space.p() != 0 {
                return Err(Error::UnitConstantSubstitution(self.space.vars[i].clone()));
            }
        }
        let mut powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|img| vec![TruncatedSeries::one(&target), img.clone()])
            .collect();
        let mut out = TruncatedSeries::zero(&target);
        for (e, c) in &self.terms {
            let mut term = TruncatedSeries::constant(&target, *c as i128);
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul_unchecked(&powers[i][k]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add_unchecked(&term);
        }
        Ok(out)
    }

    /// Re-read the coefficients in another space with the same variables
    /// (different precision or cap), truncating as needed.
    pub fn recast(&self, space: &Arc<SeriesSpace>) -> Result<TruncatedSeries> {
        if space.vars != self.space.vars || space.p() != self.space.p() {
            return Err(Error::SeriesMismatch("recast needs the same variables and p".into()));
        }
        if space.precision > self.space.precision {
            return Err(Error::InsufficientPrecision(format!(
                "series known mod p^{} cannot be read mod p^{}",
                self.space.precision, space.precision
            )));
        }
        let mut out = TruncatedSeries::zero(space);
        for (e, c) in &self.terms {
            out.accumulate(e.clone(), c % space.modulus);
        }
        Ok(out)
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        *self.space == *other.space && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints in the input grammar, lowest degree first.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| degree(a).cmp(&degree(b)).then_with(|| b.cmp(a)));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || degree(e) == 0 {
                factors.push(c.to_string());
            }
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(self.space.vars[i].clone()),
                    _ => factors.push(format!("{}^{a}", self.space.vars[i])),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;

            /// Panics on mismatched spaces.
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.$checked(rhs).expect("series space mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}
