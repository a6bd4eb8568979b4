//! First-order deformations of a map `X: R -> A` and the `T^1`-lifting check
//! along `W_{m+1} -> W_m` and `W_{m,d} -> W_{m,d-1}`.
//!
//! For `R` representable every deformation is a map `Y: R -> A[e]` reducing to
//! `X`, so `T^1(X/A)` is the set of `delta` in `(A e)^r` killed by the Jacobian
//! at `X`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::lift::{lift_square_zero, LiftProblem, LiftReport, LiftVerdict};
use super::{check_well_defined, evaluate_images, AlgebraMap};
use crate::error::{Error, Result};
use crate::pd_rings::{
    eps_restriction, make_ring, make_truncation_between, ArtinTestRing, Family, RingDescriptor,
    RingElem, RingHandle, RingHom, TruncationMap,
};
use crate::witt::{solve_linear, LinearSolution, WittInt, ZpMatrix};

/// A deformation `Y` of `X` over the dual numbers of the target of `X`.
#[derive(Debug, Clone, Serialize)]
pub struct T1Class {
    pub base: AlgebraMap,
    pub deformation: AlgebraMap,
}

impl T1Class {
    /// Check that `images` define a map into `A[e]` reducing to `base`.
    pub fn new(base: &AlgebraMap, images: Vec<RingElem>) -> Result<T1Class> {
        let ext = dual_numbers(base.target())?;
        let deformation = check_well_defined(base.presentation(), &ext, images)?
            .into_map()
            .ok_or_else(|| Error::IllDefinedMap("deformation does not kill every generator".into()))?;
        let restricted = deformation.push_forward(&eps_restriction(&ext)?)?;
        if restricted.images() != base.images() {
            return Err(Error::Incompatible("deformation does not reduce to the base map".into()));
        }
        Ok(T1Class {
            base: base.clone(),
            deformation,
        })
    }

    /// The `e`-parts of the deformed images.
    pub fn delta(&self) -> Vec<RingElem> {
        let ext = self.deformation.target();
        self.deformation
            .images()
            .iter()
            .map(|y| {
                let coords: Vec<i128> = ext
                    .basis()
                    .iter()
                    .enumerate()
                    .map(|(k, s)| if s.has_eps() { y.coord(k) as i128 } else { 0 })
                    .collect();
                ext.from_coords(&coords).expect("coordinates of an element")
            })
            .collect()
    }
}

impl fmt::Display for T1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.deformation)
    }
}

/// `T^1(X/A)` as a submodule of `(A e)^r`, flattened to coordinates over `W_m`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct T1Module {
    pub base: AlgebraMap,
    /// Column `(var, symbol)` is the coefficient of `symbol * e` in `delta_var`.
    pub columns: Vec<String>,
    /// Jacobian system whose kernel is the module.
    pub system: ZpMatrix,
    /// A generating set: coordinate unit vectors in the kernel first, then
    /// the solver's kernel generators. Not a basis.
    pub generators: Vec<Vec<u64>>,
    pub classes: Vec<T1Class>,
}

/// `A[e]` for `A = W_m` or `W_{m,d}`.
pub(crate) fn dual_numbers(ring: &Arc<ArtinTestRing>) -> Result<Arc<ArtinTestRing>> {
    let desc = ring.descriptor();
    let family = match desc.family {
        Family::Wm { m } => Family::WmEps { m },
        Family::Pd { m, d } => Family::PdEps { m, d },
        _ => {
            return Err(Error::Incompatible(format!(
                "no dual-number extension of {desc} is supported"
            )))
        }
    };
    make_ring(&RingDescriptor::new(family, desc.params))
}

/// The fiber ring `A x_{A'} A'[e] = A[e]/(e ker)` of a supported truncation.
fn fiber_ring(surj: &TruncationMap) -> Result<Arc<ArtinTestRing>> {
    let (a, b) = (surj.source().descriptor(), surj.target().descriptor());
    let family = match (&a.family, &b.family) {
        (Family::Wm { m: m1 }, Family::Wm { m: m2 }) if *m1 == m2 + 1 => Family::WmMixedEps { m: *m2 },
        (Family::Pd { m: m1, d: d1 }, Family::Pd { m: m2, d: d2 }) if m1 == m2 && *d1 == d2 + 1 => {
            Family::PdEpsQuot { m: *m1, d: *d1 }
        }
        _ => {
            return Err(Error::Incompatible(format!(
                "T^1-lifting is checked along W_(m+1) -> W_m and W_(m,d) -> W_(m,d-1), not {a} -> {b}"
            )))
        }
    };
    make_ring(&RingDescriptor::new(family, a.params))
}

fn inclusion(ring: &Arc<ArtinTestRing>, ext: &Arc<ArtinTestRing>) -> Result<RingHom> {
    RingHom::by_symbols(Arc::clone(ring), Arc::clone(ext), Some)
}

/// Compute `T^1(X/A)` as the kernel of the Jacobian at `X`.
pub fn t1_module(x: &AlgebraMap) -> Result<T1Module> {
    let ring = x.target();
    let ext = dual_numbers(ring)?;
    let pres = x.presentation();
    let incl = inclusion(ring, &ext)?;
    let base: Vec<RingElem> = x.images().iter().map(|y| incl.apply(y)).collect::<Result<_>>()?;

    let m = ring.max_mod_exp();
    if ring.mod_exps().iter().any(|&e| e != m) {
        return Err(Error::Incompatible(format!("{} is not free over W_{m}", ring.descriptor())));
    }
    let eps_index: Vec<usize> = ring
        .basis()
        .iter()
        .map(|s| ext.index_of(&s.with_eps()).expect("dual numbers carry every symbol times e"))
        .collect();
    let n = ring.dim();
    let r = pres.num_vars();
    let columns: Vec<String> = pres
        .vars()
        .iter()
        .flat_map(|v| ring.basis().iter().map(move |s| format!("{v}:{}", s.with_eps())))
        .collect();

    let f0 = evaluate_images(pres, &ext, &base)?;
    let ngen = f0.len();
    let mut system = ZpMatrix::zeros(ring.p(), m, ngen * n, r * n)?;
    for i in 0..r {
        for (k, &col_sym) in eps_index.iter().enumerate() {
            let mut moved = base.clone();
            moved[i] = &moved[i] + &ext.basis_elem(col_sym);
            let fl = evaluate_images(pres, &ext, &moved)?;
            for j in 0..ngen {
                let diff = &fl[j] - &f0[j];
                for (k2, &row_sym) in eps_index.iter().enumerate() {
                    system.set(j * n + k2, i * n + k, diff.coord(row_sym));
                }
            }
        }
    }

    let cols = r * n;
    let unit = |c: usize| (0..cols).map(|k| (k == c) as u64).collect::<Vec<u64>>();
    let mut generators: Vec<Vec<u64>> = (0..cols)
        .filter(|&c| (0..system.rows()).all(|row| system.get(row, c) == 0))
        .map(unit)
        .collect();
    if ngen > 0 {
        let zero: Vec<WittInt> = (0..system.rows())
            .map(|_| WittInt::new(ring.p(), m, 0))
            .collect::<Result<_>>()?;
        let LinearSolution::Solution { kernel, .. } = solve_linear(&system, &zero)? else {
            unreachable!("a homogeneous system is solvable")
        };
        for v in kernel {
            let v: Vec<u64> = v.iter().map(WittInt::value).collect();
            if v.iter().any(|&c| c != 0) && !generators.contains(&v) {
                generators.push(v);
            }
        }
    }

    let classes = generators
        .iter()
        .map(|v| {
            let images = (0..r)
                .map(|i| {
                    (0..n).fold(base[i].clone(), |acc, k| {
                        &acc + &ext.basis_elem(eps_index[k]).scale(v[i * n + k] as i128)
                    })
                })
                .collect();
            T1Class::new(x, images)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(T1Module {
        base: x.clone(),
        columns,
        system,
        generators,
        classes,
    })
}

/// Try to lift a class of `T^1(X'/A')` to `T^1(X/A)`, where `X` reduces to the
/// base of `class` along `surj: A -> A'`.
///
/// `X` and the class together give a map into the fiber ring
/// `B = A x_{A'} A'[e]`, and a preimage in `T^1(X/A)` is exactly a lift of that
/// map along the square-zero surjection `A[e] -> B`.
pub fn lift_t1_class(x: &AlgebraMap, class: &T1Class, surj: &TruncationMap) -> Result<LiftReport> {
    check_restriction(x, &class.base, surj)?;
    let fiber = fiber_ring(surj)?;
    let ext = dual_numbers(x.target())?;
    let ext_prime = class.deformation.target();
    let images = (0..x.images().len())
        .map(|i| {
            let coords: Vec<i128> = fiber
                .basis()
                .iter()
                .map(|s| {
                    let v = if s.has_eps() {
                        class.deformation.images()[i].coord(ext_prime.index_of(s).expect("e-symbol of A'[e]"))
                    } else {
                        x.images()[i].coord(x.target().index_of(s).expect("symbol of A"))
                    };
                    v as i128
                })
                .collect();
            fiber.from_coords(&coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let z = check_well_defined(x.presentation(), &fiber, images)?
        .into_map()
        .ok_or_else(|| Error::Incompatible("class and base map do not glue to the fiber ring".into()))?;
    let proj = make_truncation_between(ext, fiber)?;
    lift_square_zero(&LiftProblem::new(z, proj)?)
}

fn check_restriction(x: &AlgebraMap, x_prime: &AlgebraMap, surj: &TruncationMap) -> Result<()> {
    if **surj.source() != **x.target() || **surj.target() != **x_prime.target() {
        return Err(Error::Incompatible(format!(
            "maps into {} and {} do not match the surjection {} -> {}",
            x.target().descriptor(),
            x_prime.target().descriptor(),
            surj.source().descriptor(),
            surj.target().descriptor()
        )));
    }
    if x.presentation() != x_prime.presentation() {
        return Err(Error::Incompatible("maps come from different presentations".into()));
    }
    if x.push_forward(surj.hom())?.images() != x_prime.images() {
        return Err(Error::Incompatible("X does not restrict to X'".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum T1Verdict {
    Surjective,
    NotSurjective { witness: T1Class, lift: LiftReport },
    PrecisionLimited { reason: String },
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct T1LiftingReport {
    pub verdict: T1Verdict,
    pub source: String,
    pub target: String,
    pub fiber: String,
    pub generators: usize,
    pub checked: usize,
}

impl T1LiftingReport {
    pub fn is_surjective(&self) -> bool {
        matches!(self.verdict, T1Verdict::Surjective)
    }

    pub fn witness(&self) -> Option<&T1Class> {
        match &self.verdict {
            T1Verdict::NotSurjective { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Whether `T^1(X/A) -> T^1(X'/A')` is onto, tested on generators of the
/// target module. Stops at the first class without a preimage.
pub fn t1_lifting_check(x: &AlgebraMap, x_prime: &AlgebraMap, surj: &TruncationMap) -> Result<T1LiftingReport> {
    check_restriction(x, x_prime, surj)?;
    let fiber = fiber_ring(surj)?;
    let module = t1_module(x_prime)?;
    let mut report = T1LiftingReport {
        verdict: T1Verdict::Surjective,
        source: surj.source().descriptor().to_string(),
        target: surj.target().descriptor().to_string(),
        fiber: fiber.descriptor().to_string(),
        generators: module.classes.len(),
        checked: 0,
    };
    for class in &module.classes {
        report.checked += 1;
        let lift = lift_t1_class(x, class, surj)?;
        match &lift.verdict {
            LiftVerdict::Lifted { .. } => {}
            LiftVerdict::NoLift { .. } => {
                report.verdict = T1Verdict::NotSurjective {
                    witness: class.clone(),
                    lift,
                };
                return Ok(report);
            }
            LiftVerdict::PrecisionLimited { reason } => {
                report.verdict = T1Verdict::PrecisionLimited { reason: reason.clone() };
                return Ok(report);
            }
        }
    }
    Ok(report)
}

impl fmt::Display for T1LiftingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "T^1 restriction along {} -> {} (fiber ring {})", self.source, self.target, self.fiber)?;
        writeln!(f, "checked {} of {} generating classes", self.checked, self.generators)?;
        match &self.verdict {
            T1Verdict::Surjective => write!(f, "verdict: surjective"),
            T1Verdict::NotSurjective { witness, lift } => {
                writeln!(f, "verdict: not surjective")?;
                writeln!(f, "class without preimage: {witness}")?;
                if let Some(cert) = lift.certificate() {
                    write!(
                        f,
                        "certificate: row combination {:?} kills the system mod p^{} but not the right-hand side (residual {})",
                        cert.certificate.combination, cert.certificate.threshold, cert.certificate.residual
                    )?;
                }
                Ok(())
            }
            T1Verdict::PrecisionLimited { reason } => write!(f, "verdict: precision limited ({reason})"),
        }
    }
}
