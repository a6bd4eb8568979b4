//! `R = W[T]/(T^p)`, the algebra representing `A -> {a : a^p = 0}`. It is not
//! smooth, and the restriction of `T^1` along `W_{m,p+1} -> W_{m,p}` with
//! `m = 2p + 1` fails to be surjective.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::t1::{t1_lifting_check, T1LiftingReport, T1Verdict};
use super::{check_well_defined, AlgebraMap};
use crate::error::{Error, Result};
use crate::pd_rings::{make_ring, make_truncation, BasisSymbol, Family, RingDescriptor, RingElem, RingHandle};
use crate::series::{parse_series, Presentation, SeriesSpace};
use crate::witt::{checked_pow, is_prime, mul_mod, pow_mod, RingParams};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeligneCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeligneReport {
    pub p: u64,
    pub m: u32,
    pub lambda: u64,
    pub modulus: u64,
    /// `p * lambda^p mod p^m`
    pub p_lambda_p: u64,
    /// `p^2 * lambda^(p-1) mod p^m`
    pub p2_lambda_pm1: u64,
    pub s_power: RingElem,
    pub r_prime_power: RingElem,
    /// Coefficients of `x^0 .. x^p` in `r^p`, where
    /// `r = (lambda + e) gamma^1(T) + x gamma^p(T)`.
    pub r_power: Vec<RingElem>,
    /// `p^2 lambda^(p-1) (p-1)! mod p^m`, by integer arithmetic.
    pub expected_coefficient: u64,
    pub t1: T1LiftingReport,
    pub checks: Vec<DeligneCheck>,
}

impl DeligneReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn check(name: &str, holds: bool, detail: String) -> DeligneCheck {
    DeligneCheck {
        name: name.into(),
        holds,
        detail,
    }
}

/// Polynomials in `x` over a ring, truncated above degree `cap`.
fn poly_mul(a: &[RingElem], b: &[RingElem], cap: usize) -> Vec<RingElem> {
    let zero = a[0].ring().zero();
    let mut out = vec![zero; (a.len() + b.len() - 1).min(cap + 1)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= cap {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

pub fn deligne_example(p: u64) -> Result<DeligneReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let params = RingParams::new(p)?;
    let m = 2 * p as u32 + 1;
    let pd = |m, d| RingDescriptor::new(Family::Pd { m, d }, params);
    let pd_eps = |m, d| RingDescriptor::new(Family::PdEps { m, d }, params);
    let modulus = checked_pow(p, m)?;
    let lambda = p * p;
    let pu = p as u32;
    let mut checks = Vec::new();

    // (a) the two congruences that pin down lambda
    let p_lambda_p = mul_mod(p, pow_mod(lambda, p, modulus), modulus);
    let p2_lambda_pm1 = mul_mod(p * p, pow_mod(lambda, p - 1, modulus), modulus);
    checks.push(check(
        "p * lambda^p = 0",
        p_lambda_p == 0,
        format!("{p} * {lambda}^{p} = {p_lambda_p} mod {modulus}"),
    ));
    checks.push(check(
        "p^2 * lambda^(p-1) != 0",
        p2_lambda_pm1 != 0,
        format!("{p}^2 * {lambda}^{} = {p2_lambda_pm1} mod {modulus}", p - 1),
    ));

    // (b) s = lambda gamma^1 in W_{m,p+1}
    let big = make_ring(&pd(m, pu + 1))?;
    let g1 = big.symbol(BasisSymbol::Gamma { index: 1, eps: false })?;
    let s = g1.scale(lambda as i128);
    let s_power = s.pow(pu);
    let raw: u128 = (lambda as u128).pow(pu) * (1..=p as u128).product::<u128>();
    checks.push(check(
        "s^p = 0",
        s_power.is_zero(),
        format!("s = {s}; s^{p} = lambda^{p} * {p}! * g{p} = {raw} * g{p} = {s_power} mod {modulus}"),
    ));

    // (c) r' = (lambda + e) gamma^1 in W_{m,p}[e]
    let small_eps = make_ring(&pd_eps(m, pu))?;
    let r_prime = &small_eps.symbol(BasisSymbol::Gamma { index: 1, eps: false })?.scale(lambda as i128)
        + &small_eps.symbol(BasisSymbol::Gamma { index: 1, eps: true })?;
    let r_prime_power = r_prime.pow(pu);
    checks.push(check(
        "r'^p = 0",
        r_prime_power.is_zero(),
        format!("r' = {r_prime}; r'^{p} = {r_prime_power}"),
    ));

    // (d) r = (lambda + e) gamma^1 + x gamma^p in W_{m,p+1}[e][x]
    let big_eps = make_ring(&pd_eps(m, pu + 1))?;
    let eg1 = big_eps.symbol(BasisSymbol::Gamma { index: 1, eps: true })?;
    let r0 = &big_eps.symbol(BasisSymbol::Gamma { index: 1, eps: false })?.scale(lambda as i128) + &eg1;
    let r1 = big_eps.symbol(BasisSymbol::Gamma { index: pu, eps: false })?;
    let r = vec![r0, r1];
    let cap = p as usize;
    let mut r_power = vec![big_eps.one()];
    for _ in 0..p {
        r_power = poly_mul(&r_power, &r, cap);
    }
    let fact = (1..p).fold(1u64, |acc, k| mul_mod(acc, k, modulus));
    let expected_coefficient = mul_mod(p2_lambda_pm1, fact, modulus);
    let egp = big_eps.symbol(BasisSymbol::Gamma { index: pu, eps: true })?;
    let expected = egp.scale(expected_coefficient as i128);
    let x_free = r_power[1..].iter().all(RingElem::is_zero);
    checks.push(check(
        "r^p does not depend on x",
        x_free,
        format!(
            "coefficients of x^1..x^{p}: [{}]",
            r_power[1..].iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ),
    ));
    checks.push(check(
        "r^p = p^2 lambda^(p-1) (p-1)! e g^p != 0",
        r_power[0] == expected && expected_coefficient != 0,
        format!(
            "r^{p} = {}; p^2 lambda^(p-1) (p-1)! = {p2_lambda_pm1} * {fact} = {expected_coefficient} mod {modulus}",
            r_power[0]
        ),
    ));

    // (e) the same failure through the generic T^1 machinery
    let space = SeriesSpace::new(params, m, m + pu + 1, vec!["T".into()])?;
    let pres = Arc::new(Presentation::new(Arc::clone(&space), vec![parse_series("T^p", &space)?])?);
    let x = into_map(&pres, &big, &s)?;
    let surj = make_truncation(&pd(m, pu + 1), &pd(m, pu))?;
    let x_prime = x.push_forward(surj.hom())?;
    let t1 = t1_lifting_check(&x, &x_prime, &surj)?;
    let (not_onto, detail) = match &t1.verdict {
        T1Verdict::NotSurjective { witness, .. } => {
            let is_r_prime = witness.deformation.images()[0] == r_prime;
            (true, format!("class {witness} has no preimage; it is r': {is_r_prime}"))
        }
        T1Verdict::Surjective => (false, "every class lifts".into()),
        T1Verdict::PrecisionLimited { reason } => (false, reason.clone()),
    };
    checks.push(check("T^1 restriction is not surjective", not_onto, detail));

    Ok(DeligneReport {
        p,
        m,
        lambda,
        modulus,
        p_lambda_p,
        p2_lambda_pm1,
        s_power,
        r_prime_power,
        r_power,
        expected_coefficient,
        t1,
        checks,
    })
}

fn into_map(pres: &Arc<Presentation>, ring: &Arc<crate::pd_rings::ArtinTestRing>, image: &RingElem) -> Result<AlgebraMap> {
    check_well_defined(pres, ring, vec![image.clone()])?
        .into_map()
        .ok_or_else(|| Error::IllDefinedMap("T -> s does not kill T^p".into()))
}

impl fmt::Display for DeligneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "R = W[T]/(T^{p}), p = {p}, m = 2p+1 = {m}, lambda = p^2 = {l}, working mod {q}",
            p = self.p,
            m = self.m,
            l = self.lambda,
            q = self.modulus
        )?;
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.holds { "ok" } else { "FAILED" }, c.name, c.detail)?;
        }
        if self.all_hold() {
            write!(
                f,
                "conclusion: {} != 0 mod {}, so T^1 over W_({m},{}) -> T^1 over W_({m},{}) is not onto and R fails the T^1-lifting property",
                self.expected_coefficient,
                self.modulus,
                self.p + 1,
                self.p,
                m = self.m
            )
        } else {
            write!(f, "conclusion: the chain does not go through at this p")
        }
    }
}
