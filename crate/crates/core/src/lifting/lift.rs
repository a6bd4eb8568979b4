use std::time::Instant;

use serde::Serialize;

use super::{check_well_defined, evaluate_images, AlgebraMap};
use crate::error::{Error, Result};
use crate::pd_rings::{RingElem, TruncationMap};
use crate::witt::{checked_pow, mul_mod, reduce_i128, solve_linear, InconsistencyCertificate, LinearSolution, WittInt, ZpMatrix};

/// A map into `A'` together with a square-zero surjection `A -> A'`.
#[derive(Debug, Clone)]
pub struct LiftProblem {
    base: AlgebraMap,
    surjection: TruncationMap,
}

impl LiftProblem {
    pub fn new(base: AlgebraMap, surjection: TruncationMap) -> Result<Self> {
        if **surjection.target() != **base.target() {
            return Err(Error::Incompatible(format!(
                "map lands in {} but the surjection ends in {}",
                base.target().descriptor(),
                surjection.target().descriptor()
            )));
        }
        if !surjection.is_square_zero() {
            return Err(Error::Incompatible(format!(
                "kernel of {} -> {} does not square to zero",
                surjection.source().descriptor(),
                surjection.target().descriptor()
            )));
        }
        Ok(LiftProblem { base, surjection })
    }

    pub fn base(&self) -> &AlgebraMap {
        &self.base
    }

    pub fn surjection(&self) -> &TruncationMap {
        &self.surjection
    }
}

/// The inconsistent system behind a failed lift.
///
/// Unknown `(T_i, k_l)` is the coefficient of the kernel generator `k_l` in
/// the correction of `T_i`; row `(f_j, k_l')` is the `k_l'`-coordinate of
/// `f_j`. All rows are scaled into the common modulus `p^M`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NoLiftCertificate {
    pub system: ZpMatrix,
    pub rhs: Vec<u64>,
    pub certificate: InconsistencyCertificate,
    pub modulus_exp: u32,
    pub rows: Vec<String>,
    pub columns: Vec<String>,
}

impl NoLiftCertificate {
    /// Re-check the row combination against the stored system.
    pub fn verify(&self) -> bool {
        self.certificate.verify(&self.system, &self.rhs)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum LiftVerdict {
    Lifted { map: AlgebraMap },
    NoLift { certificate: Box<NoLiftCertificate> },
    PrecisionLimited { reason: String },
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftStats {
    pub unknowns: usize,
    pub equations: usize,
    pub modulus_exp: u32,
    pub micros: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub verdict: LiftVerdict,
    pub stats: LiftStats,
}

impl LiftReport {
    pub fn lifted(&self) -> Option<&AlgebraMap> {
        match &self.verdict {
            LiftVerdict::Lifted { map } => Some(map),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&NoLiftCertificate> {
        match &self.verdict {
            LiftVerdict::NoLift { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn is_no_lift(&self) -> bool {
        self.certificate().is_some()
    }
}

fn precision_limited(reason: String, start: Instant) -> LiftReport {
    LiftReport {
        verdict: LiftVerdict::PrecisionLimited { reason },
        stats: LiftStats {
            micros: start.elapsed().as_micros(),
            ..LiftStats::default()
        },
    }
}

/// Decide whether `problem.base` lifts along the square-zero surjection.
///
/// Starting from the coordinate-wise lift `x` of the images, every lift is
/// `x + delta` with `delta` in `K^r`, `K` the kernel, and because `K^2 = 0`
/// `f(x + delta) = f(x) + sum_i (df/dT_i)(x) delta_i` exactly. The column for
/// `(T_i, k_l)` is computed as the difference `f(x + k_l e_i) - f(x)`, which is
/// that product without forming derivatives.
pub fn lift_square_zero(problem: &LiftProblem) -> Result<LiftReport> {
    let start = Instant::now();
    let surj = &problem.surjection;
    let source = surj.source();
    let pres = problem.base.presentation();
    let p = source.p();

    let base_lift = problem
        .base
        .images()
        .iter()
        .map(|y| surj.canonical_lift(y))
        .collect::<Result<Vec<_>>>()?;
    let f0 = match evaluate_images(pres, source, &base_lift) {
        Ok(v) => v,
        Err(Error::InsufficientPrecision(reason)) => return Ok(precision_limited(reason, start)),
        Err(e) => return Err(e),
    };

    let kernel = surj.kernel_generators();
    let kernel_elems = surj.kernel_elements();
    let r = pres.num_vars();
    let nk = kernel.len();
    let big_m = kernel.iter().map(|k| k.order_exp).max().unwrap_or(0);
    let stats = |equations: usize| LiftStats {
        unknowns: r * nk,
        equations,
        modulus_exp: big_m,
        micros: start.elapsed().as_micros(),
    };

    if f0.iter().all(RingElem::is_zero) {
        let map = check_well_defined(pres, source, base_lift)?
            .into_map()
            .expect("all generators vanish");
        return Ok(LiftReport {
            verdict: LiftVerdict::Lifted { map },
            stats: stats(0),
        });
    }

    let coords_in_kernel = |x: &RingElem| {
        surj.kernel_coords(x)
            .ok_or_else(|| Error::Incompatible(format!("{x} is not in the kernel of the surjection")))
    };
    let modulus = checked_pow(p, big_m)?;
    let scale: Vec<u64> = kernel
        .iter()
        .map(|k| checked_pow(p, big_m - k.order_exp))
        .collect::<Result<_>>()?;
    let ngen = f0.len();
    let mut system = ZpMatrix::zeros(p, big_m, ngen * nk, r * nk)?;
    let mut rhs = vec![0u64; ngen * nk];
    for (j, v) in f0.iter().enumerate() {
        for (l2, c) in coords_in_kernel(v)?.into_iter().enumerate() {
            rhs[j * nk + l2] = mul_mod(reduce_i128(-(c as i128), modulus), scale[l2], modulus);
        }
    }
    for i in 0..r {
        for (l, k) in kernel_elems.iter().enumerate() {
            let mut moved = base_lift.clone();
            moved[i] = &moved[i] + k;
            let fl = evaluate_images(pres, source, &moved)?;
            for j in 0..ngen {
                let diff = &fl[j] - &f0[j];
                for (l2, c) in coords_in_kernel(&diff)?.into_iter().enumerate() {
                    system.set(j * nk + l2, i * nk + l, mul_mod(c % modulus, scale[l2], modulus));
                }
            }
        }
    }

    let rhs_w = rhs
        .iter()
        .map(|&v| WittInt::new(p, big_m, v as i128))
        .collect::<Result<Vec<_>>>()?;
    match solve_linear(&system, &rhs_w)? {
        LinearSolution::Solution { x, .. } => {
            let images = (0..r)
                .map(|i| {
                    (0..nk).fold(base_lift[i].clone(), |acc, l| {
                        let c = x[i * nk + l].value() as i128;
                        &acc + &kernel_elems[l].scale(c)
                    })
                })
                .collect::<Vec<_>>();
            let map = check_well_defined(pres, source, images)?.into_map().ok_or_else(|| {
                Error::Incompatible("linear solution does not give a lift".into())
            })?;
            Ok(LiftReport {
                verdict: LiftVerdict::Lifted { map },
                stats: stats(ngen * nk),
            })
        }
        LinearSolution::NoSolution(certificate) => {
            let klabels: Vec<String> = kernel_elems.iter().map(|k| k.to_string()).collect();
            let rows = (0..ngen)
                .flat_map(|j| klabels.iter().map(move |k| format!("f{j}[{k}]")))
                .collect();
            let columns = pres
                .vars()
                .iter()
                .flat_map(|v| klabels.iter().map(move |k| format!("{v}:{k}")))
                .collect();
            Ok(LiftReport {
                verdict: LiftVerdict::NoLift {
                    certificate: Box::new(NoLiftCertificate {
                        system,
                        rhs,
                        certificate,
                        modulus_exp: big_m,
                        rows,
                        columns,
                    }),
                },
                stats: stats(ngen * nk),
            })
        }
    }
}
