//! The lifting conditions checked by the probe, each as a scan over maps into
//! a test ring followed by a square-zero lift along a fixed surjection.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::lift::{lift_square_zero, LiftProblem, LiftReport};
use super::{check_well_defined, AlgebraMap, WellDefinedness};
use crate::error::{Error, Result};
use crate::pd_rings::{make_truncation, ArtinTestRing, CurveFactor, Family, RingDescriptor, RingElem, RingHandle, TruncationMap};
use crate::series::{Presentation, TruncatedSeries};
use crate::witt::{reduce_i128, solve_linear, LinearSolution, RingParams, WittInt, ZpMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum ConditionId {
    /// Maps into `W_{m+1}[e]/(p^m e)` lifting to `W_{m+1}[e]`.
    #[serde(rename = "ii")]
    II { m: u32 },
    /// Maps into `W_{m,d}` lifting to `W_{m,d+1}`.
    #[serde(rename = "iii")]
    III { m: u32, d: u32 },
    /// Maps into `W[[T]]/(p - g T^n, T^d)` lifting to `T^{d+1}`.
    #[serde(rename = "curve")]
    Curve { n: u32, g: CurveFactor, d: u32 },
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionId::II { m } => write!(f, "condition (ii) at m = {m}"),
            ConditionId::III { m, d } => write!(f, "condition (iii) at (m, d) = ({m}, {d})"),
            ConditionId::Curve { n, g, d } => write!(f, "curve criterion n = {n}, g = {g}, d = {d}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ConditionOutcome {
    /// Every map in the cell lifts.
    Pass,
    Refuted { witness: AlgebraMap, lift: LiftReport },
    /// The cell was not decided. `coverage` is the scanned fraction.
    PrecisionLimited { coverage: f64, reason: String },
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanStats {
    /// Number of candidate maps in the cell, saturating.
    pub total: u128,
    pub scanned: u128,
    pub well_defined: u128,
    pub lifts: u128,
    /// Variables that occur in no generator, held at 0.
    pub pinned_vars: Vec<String>,
    pub micros: u128,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub outcome: ConditionOutcome,
    pub stats: ScanStats,
    /// Set when a pass does not carry the meaning of the condition in the
    /// theory (the curve criterion wants an algebraically closed residue field).
    pub heuristic: bool,
}

impl ConditionReport {
    pub fn is_refuted(&self) -> bool {
        matches!(self.outcome, ConditionOutcome::Refuted { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self.outcome, ConditionOutcome::Pass)
    }
}

fn descriptor(params: &RingParams, family: Family) -> RingDescriptor {
    RingDescriptor::new(family, *params)
}

/// Maps `R -> W_{m+1}[e]/(p^m e)` and their lifts to `W_{m+1}[e]`.
pub fn condition_ii(pres: &Arc<Presentation>, m: u32, budget: u64) -> Result<ConditionReport> {
    if m == 0 {
        return Err(Error::InvalidRing("condition (ii) needs m >= 1".into()));
    }
    let params = pres.space().params();
    let surj = make_truncation(
        &descriptor(params, Family::WmEps { m: m + 1 }),
        &descriptor(params, Family::WmMixedEps { m }),
    )?;
    scan(pres, &surj, ConditionId::II { m }, budget, false)
}

/// Maps `R -> W_{m,d}` and their lifts to `W_{m,d+1}`.
pub fn condition_iii(pres: &Arc<Presentation>, m: u32, d: u32, budget: u64) -> Result<ConditionReport> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidRing("condition (iii) needs m, d >= 1".into()));
    }
    let params = pres.space().params();
    let surj = make_truncation(
        &descriptor(params, Family::Pd { m, d: d + 1 }),
        &descriptor(params, Family::Pd { m, d }),
    )?;
    scan(pres, &surj, ConditionId::III { m, d }, budget, false)
}

/// The curve criterion for `d = 1..=d_max`, stopping at the first refutation.
///
/// The criterion is stated over an algebraically closed residue field; here
/// `k = F_p`, so a pass is only evidence. A refutation is still a failed lift
/// along a small extension of Artin rings and therefore sound.
pub fn curve_criterion_probe(
    pres: &Arc<Presentation>,
    n: u32,
    g: CurveFactor,
    d_max: u32,
    budget: u64,
) -> Result<Vec<ConditionReport>> {
    let params = pres.space().params();
    let mut out = Vec::new();
    for d in 1..=d_max {
        let surj = make_truncation(
            &descriptor(params, Family::Ramified { n, g: g.clone(), d: d + 1 }),
            &descriptor(params, Family::Ramified { n, g: g.clone(), d }),
        )?;
        let report = scan(pres, &surj, ConditionId::Curve { n, g: g.clone(), d }, budget, true)?;
        let refuted = report.is_refuted();
        out.push(report);
        if refuted {
            break;
        }
    }
    Ok(out)
}

/// What a single candidate map did.
enum Step {
    IllDefined,
    Lifts,
    Witness(AlgebraMap, LiftReport),
}

struct Cell<'a> {
    pres: &'a Arc<Presentation>,
    target: &'a Arc<ArtinTestRing>,
    surj: &'a TruncationMap,
    active: Vec<usize>,
    size: u128,
}

impl Cell<'_> {
    fn images(&self, mut idx: u128) -> Vec<RingElem> {
        let mut images = vec![self.target.zero(); self.pres.num_vars()];
        for &v in self.active.iter().rev() {
            images[v] = self.target.max_ideal_element(idx % self.size);
            idx /= self.size;
        }
        images
    }

    fn step(&self, idx: u128) -> Result<Step> {
        let map = match check_well_defined(self.pres, self.target, self.images(idx))? {
            WellDefinedness::Map(map) => map,
            WellDefinedness::Fails(_) => return Ok(Step::IllDefined),
        };
        let lift = lift_square_zero(&LiftProblem::new(map.clone(), self.surj.clone())?)?;
        if lift.is_no_lift() {
            Ok(Step::Witness(map, lift))
        } else if lift.lifted().is_some() {
            Ok(Step::Lifts)
        } else {
            Err(Error::InsufficientPrecision(format!(
                "lift into {} could not be decided",
                self.surj.source().descriptor()
            )))
        }
    }
}

#[derive(Default)]
struct Chunk {
    scanned: u128,
    well_defined: u128,
    lifts: u128,
    witness: Option<(u128, AlgebraMap, LiftReport)>,
}

fn run_chunk(cell: &Cell<'_>, start: u128, end: u128, best: &AtomicU64) -> Result<Chunk> {
    let mut out = Chunk::default();
    for idx in start..end {
        if idx > best.load(Ordering::Relaxed) as u128 {
            break;
        }
        out.scanned += 1;
        match cell.step(idx)? {
            Step::IllDefined => {}
            Step::Lifts => {
                out.well_defined += 1;
                out.lifts += 1;
            }
            Step::Witness(map, lift) => {
                out.well_defined += 1;
                best.fetch_min(idx as u64, Ordering::Relaxed);
                out.witness = Some((idx, map, lift));
                break;
            }
        }
    }
    Ok(out)
}

const PARALLEL_THRESHOLD: u128 = 2048;

/// Scan candidate maps in lexicographic order of their coordinate vectors and
/// report the first one that does not lift.
///
/// Chunks run in parallel; a chunk stops once an earlier witness is known, so
/// the reported witness and counters do not depend on scheduling.
fn scan(
    pres: &Arc<Presentation>,
    surj: &TruncationMap,
    condition: ConditionId,
    budget: u64,
    heuristic: bool,
) -> Result<ConditionReport> {
    let start = Instant::now();
    let target = surj.target();
    let source = surj.source();
    let unused = pres.unused_vars();
    let pinned_vars = unused.iter().map(|&i| pres.vars()[i].clone()).collect();
    let report = |outcome, stats: ScanStats| ConditionReport {
        condition: condition.clone(),
        outcome,
        stats: ScanStats {
            micros: start.elapsed().as_micros(),
            ..stats
        },
        heuristic,
    };

    if pres.is_free() {
        return Ok(report(ConditionOutcome::Pass, ScanStats { pinned_vars, ..ScanStats::default() }));
    }
    let space = pres.space();
    let needed_precision = source.max_mod_exp().max(target.max_mod_exp());
    let needed_degree = source.nilpotency_bound().max(target.nilpotency_bound());
    if space.precision() < needed_precision || space.degree_cap() < needed_degree {
        let reason = format!(
            "{} needs precision {} and degree cap {}, have {} and {}",
            source.descriptor(),
            needed_precision,
            needed_degree,
            space.precision(),
            space.degree_cap()
        );
        return Ok(report(
            ConditionOutcome::PrecisionLimited { coverage: 0.0, reason },
            ScanStats { pinned_vars, ..ScanStats::default() },
        ));
    }

    let active: Vec<usize> = (0..pres.num_vars()).filter(|i| !unused.contains(i)).collect();
    let size = target.max_ideal_size();
    let total = u32::try_from(active.len())
        .ok()
        .and_then(|k| size.checked_pow(k))
        .unwrap_or(u128::MAX);
    let limit = total.min(budget as u128);
    let cell = Cell {
        pres,
        target,
        surj,
        active,
        size,
    };

    let best = AtomicU64::new(u64::MAX);
    let threads = if limit < PARALLEL_THRESHOLD {
        1
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get()).min(16) as u128
    };
    let chunk_len = limit.div_ceil(threads).max(1);
    let chunks: Vec<Result<Chunk>> = if threads == 1 {
        vec![run_chunk(&cell, 0, limit, &best)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let (cell, best) = (&cell, &best);
                    let lo = (t * chunk_len).min(limit);
                    let hi = ((t + 1) * chunk_len).min(limit);
                    s.spawn(move || run_chunk(cell, lo, hi, best))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan thread panicked")).collect()
        })
    };

    let mut stats = ScanStats {
        total,
        pinned_vars,
        ..ScanStats::default()
    };
    for chunk in chunks {
        let chunk = match chunk {
            Ok(c) => c,
            Err(Error::InsufficientPrecision(reason)) => {
                return Ok(report(ConditionOutcome::PrecisionLimited { coverage: 0.0, reason }, stats));
            }
            Err(e) => return Err(e),
        };
        stats.scanned += chunk.scanned;
        stats.well_defined += chunk.well_defined;
        stats.lifts += chunk.lifts;
        if let Some((_, witness, lift)) = chunk.witness {
            return Ok(report(ConditionOutcome::Refuted { witness, lift }, stats));
        }
    }
    if limit < total {
        let coverage = limit as f64 / total as f64;
        let reason = format!(
            "budget of {budget} candidate maps covers {limit} of {total} maps into {}",
            target.descriptor()
        );
        return Ok(report(ConditionOutcome::PrecisionLimited { coverage, reason }, stats));
    }
    Ok(report(ConditionOutcome::Pass, stats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PointMethod {
    Supplied,
    Origin,
    /// Hensel iteration from 0 with a Jacobian of full row rank mod p; the
    /// point is the truncation of a genuine `W`-point.
    Newton,
    /// Found by search mod `p^m`. Only a point at the working precision.
    ExhaustiveModPm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ConditionI {
    Point { point: Vec<i128>, method: PointMethod },
    /// No point was found. This never means that none exists.
    Unknown { reason: String },
}

impl ConditionI {
    pub fn point(&self) -> Option<&[i128]> {
        match self {
            ConditionI::Point { point, .. } => Some(point),
            ConditionI::Unknown { .. } => None,
        }
    }
}

fn values_at(gens: &[TruncatedSeries], pres: &Presentation, point: &[i128]) -> Result<Vec<u64>> {
    let constants: Vec<TruncatedSeries> = point
        .iter()
        .map(|a| TruncatedSeries::constant(pres.space(), *a))
        .collect();
    gens.iter()
        .map(|g| Ok(g.compose(&constants)?.constant_term()))
        .collect()
}

/// Look for a `W`-point of `R`, i.e. a zero of all generators in `(pW)^r`,
/// at the precision of the presentation.
pub fn condition_i(pres: &Presentation, candidate: Option<&[i128]>, budget: u64) -> ConditionI {
    match find_point(pres, candidate, budget) {
        Ok(c) => c,
        Err(e) => ConditionI::Unknown { reason: e.to_string() },
    }
}

fn find_point(pres: &Presentation, candidate: Option<&[i128]>, budget: u64) -> Result<ConditionI> {
    let space = pres.space();
    let p = space.p();
    let q = space.modulus();
    let r = pres.num_vars();
    let gens = pres.generators();
    let is_zero = |pt: &[i128]| -> Result<bool> { Ok(values_at(gens, pres, pt)?.iter().all(|&v| v == 0)) };

    if let Some(pt) = candidate {
        if pt.len() != r {
            return Err(Error::DimensionMismatch(format!("point has {} coordinates for {r} variables", pt.len())));
        }
        if let Some(i) = pt.iter().position(|a| a.rem_euclid(p as i128) != 0) {
            return Ok(ConditionI::Unknown {
                reason: format!("supplied coordinate {} is not divisible by p", space.vars()[i]),
            });
        }
        let pt: Vec<i128> = pt.iter().map(|a| reduce_i128(*a, q) as i128).collect();
        return Ok(if is_zero(&pt)? {
            ConditionI::Point { point: pt, method: PointMethod::Supplied }
        } else {
            ConditionI::Unknown { reason: "supplied point is not a zero of the generators".into() }
        });
    }

    let origin = vec![0i128; r];
    if is_zero(&origin)? {
        return Ok(ConditionI::Point { point: origin, method: PointMethod::Origin });
    }
    if values_at(gens, pres, &origin)?.iter().all(|v| v % p == 0) {
        if let Some(pt) = newton(pres)? {
            return Ok(ConditionI::Point { point: pt, method: PointMethod::Newton });
        }
    }

    let per_coord = q / p;
    let total = u32::try_from(r)
        .ok()
        .and_then(|k| (per_coord as u128).checked_pow(k))
        .unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Ok(ConditionI::Unknown {
            reason: format!("no point found; search over {total} candidates exceeds the budget"),
        });
    }
    for mut idx in 0..total {
        let mut pt = vec![0i128; r];
        for c in pt.iter_mut().rev() {
            *c = (idx % per_coord as u128) as i128 * p as i128;
            idx /= per_coord as u128;
        }
        if is_zero(&pt)? {
            return Ok(ConditionI::Point { point: pt, method: PointMethod::ExhaustiveModPm });
        }
    }
    Ok(ConditionI::Unknown {
        reason: format!("no point found mod p^{}", space.precision()),
    })
}

fn jacobian_at(pres: &Presentation, point: &[i128], precision: u32) -> Result<ZpMatrix> {
    let space = pres.space();
    let rows = pres
        .jacobian()
        .iter()
        .map(|row| {
            values_at(row, pres, point).map(|v| v.into_iter().map(|c| c as i128).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return ZpMatrix::zeros(space.p(), precision, 0, pres.num_vars());
    }
    ZpMatrix::from_rows(space.p(), precision, &rows)
}

/// Hensel iteration from the origin. Requires `J(0)` of full row rank mod p.
fn newton(pres: &Presentation) -> Result<Option<Vec<i128>>> {
    let space = pres.space();
    let (p, m, q) = (space.p(), space.precision(), space.modulus());
    let gens = pres.generators();
    let r = pres.num_vars();

    let j0 = jacobian_at(pres, &vec![0; r], 1)?;
    for row in 0..j0.rows() {
        let unit: Vec<WittInt> = (0..j0.rows())
            .map(|k| WittInt::new(p, 1, (k == row) as i128))
            .collect::<Result<_>>()?;
        if !solve_linear(&j0, &unit)?.is_solvable() {
            return Ok(None);
        }
    }

    let mut point = vec![0i128; r];
    for _ in 0..=m {
        let values = values_at(gens, pres, &point)?;
        if values.iter().all(|&v| v == 0) {
            return Ok(Some(point));
        }
        let jac = jacobian_at(pres, &point, m)?;
        let rhs: Vec<WittInt> = values
            .iter()
            .map(|&v| WittInt::new(p, m, -(v as i128)))
            .collect::<Result<_>>()?;
        let LinearSolution::Solution { x, .. } = solve_linear(&jac, &rhs)? else {
            return Ok(None);
        };
        for (a, dx) in point.iter_mut().zip(&x) {
            *a = reduce_i128(*a + dx.value() as i128, q) as i128;
        }
        if point.iter().any(|a| a % p as i128 != 0) {
            return Ok(None);
        }
    }
    Ok(values_at(gens, pres, &point)?.iter().all(|&v| v == 0).then_some(point))
}
