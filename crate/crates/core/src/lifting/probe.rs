//! Bounded search for an obstruction to smoothness.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::conditions::{
    condition_i, condition_ii, condition_iii, ConditionI, ConditionId, ConditionOutcome, ConditionReport,
};
use super::lift::{lift_square_zero, LiftProblem, LiftReport};
use super::{check_well_defined, AlgebraMap};
use crate::error::{Error, Result};
use crate::pd_rings::{make_truncation, Family, RingDescriptor, RingElem, RingHandle};
use crate::series::{evaluate, LinearDiagnostics, Minimized, Presentation};

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeBounds {
    pub m_max: u32,
    pub d_max: u32,
    /// Candidate maps per cell.
    pub budget: u64,
}

impl Default for ProbeBounds {
    fn default() -> Self {
        ProbeBounds {
            m_max: 4,
            d_max: 4,
            budget: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ProbeVerdict {
    /// Some condition fails, so `R` is not smooth.
    RefutedWithWitness,
    /// Nothing failed within the bounds. Not a proof of smoothness.
    NoObstructionFound,
    /// Nothing failed, but part of the grid was not decided.
    PrecisionLimited,
}

/// A failing map, pulled back to the variables of the input presentation and
/// checked again there.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub condition: ConditionId,
    /// The witness on the input variables.
    pub map: AlgebraMap,
    pub lift: LiftReport,
    /// The witness on the minimized presentation, as found by the scan.
    pub reduced_map: AlgebraMap,
    /// Whether the pulled-back map is well defined and again has no lift.
    pub reverified: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Elimination {
    pub var: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub bounds: ProbeBounds,
    pub precision: u32,
    pub degree_cap: u32,
    pub condition_i: ConditionI,
    /// Variables and generators that were scanned.
    pub vars: Vec<String>,
    pub generators: Vec<String>,
    pub eliminated: Vec<Elimination>,
    pub diagnostics: Option<LinearDiagnostics>,
    pub cells: Vec<ConditionReport>,
    pub witness: Option<WitnessReport>,
    pub caveats: Vec<String>,
    pub micros: u128,
}

impl ProbeReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            ProbeVerdict::NoObstructionFound => 0,
            ProbeVerdict::RefutedWithWitness => 2,
            ProbeVerdict::PrecisionLimited => 3,
        }
    }
}

/// Grid order: condition (ii) at `m*` first when the linear terms suggest it,
/// then condition (iii) with `d` outermost, then the rest of condition (ii).
fn grid(bounds: &ProbeBounds, m_star: Option<u32>) -> Vec<ConditionId> {
    let mut cells = Vec::new();
    let first_ii = m_star.filter(|m| (1..=bounds.m_max).contains(m));
    if let Some(m) = first_ii {
        cells.push(ConditionId::II { m });
    }
    for d in 2..=bounds.d_max {
        for m in 1..=bounds.m_max {
            cells.push(ConditionId::III { m, d });
        }
    }
    for m in 1..=bounds.m_max {
        if Some(m) != first_ii {
            cells.push(ConditionId::II { m });
        }
    }
    cells
}

/// Run condition (i), normalize the presentation at the point found, and
/// scan conditions (ii) and (iii) over the bounded grid.
///
/// The presentation should have precision at least `m_max + 1` and degree
/// cap at least `m_max + d_max`; cells needing more are reported as
/// precision limited.
pub fn probe_smoothness(
    pres: &Arc<Presentation>,
    point: Option<&[i128]>,
    bounds: &ProbeBounds,
) -> Result<ProbeReport> {
    let start = Instant::now();
    let space = pres.space();
    let mut caveats = vec![
        format!(
            "coefficients are exact mod p^{} and series are truncated below total degree {}",
            space.precision(),
            space.degree_cap()
        ),
        "condition (iii) is scanned for d >= 2 only; d = 1 factors through d = 2".into(),
    ];

    let cond_i = condition_i(pres, point, bounds.budget);
    let (scanned, eliminated) = match cond_i.point() {
        Some(pt) => {
            let translated = pres.translate_to_point(pt)?;
            let Minimized {
                presentation,
                eliminated,
            } = translated.minimize()?;
            (Arc::new(presentation), eliminated)
        }
        None => {
            caveats.push("no W-point was found, so the presentation is scanned as given".into());
            (Arc::clone(pres), Vec::new())
        }
    };
    let diagnostics = cond_i.point().map(|_| scanned.linear_diagnostics());
    if let Some(diag) = &diagnostics {
        if !diag.generators_with_ord_ge_2.is_empty() {
            caveats.push("ord >= 2 is verified for the listed generators, not for every element of I".into());
        }
    }

    let mut cells = Vec::new();
    let mut witness = None;
    let m_star = diagnostics.as_ref().and_then(|d| d.m_star);
    for id in grid(bounds, m_star) {
        let report = match id {
            ConditionId::II { m } => condition_ii(&scanned, m, bounds.budget)?,
            ConditionId::III { m, d } => condition_iii(&scanned, m, d, bounds.budget)?,
            ConditionId::Curve { .. } => unreachable!("not part of the grid"),
        };
        if let ConditionOutcome::Refuted { witness: map, .. } = &report.outcome {
            witness = Some(pull_back(pres, cond_i.point(), &eliminated, &report.condition, map)?);
        }
        cells.push(report);
        if witness.is_some() {
            break;
        }
    }

    let verdict = if witness.is_some() {
        ProbeVerdict::RefutedWithWitness
    } else if cond_i.point().is_none()
        || cells
            .iter()
            .any(|c| matches!(c.outcome, ConditionOutcome::PrecisionLimited { .. }))
    {
        ProbeVerdict::PrecisionLimited
    } else {
        caveats.push("no obstruction within the bounds; this is not a proof of smoothness".into());
        ProbeVerdict::NoObstructionFound
    };

    Ok(ProbeReport {
        verdict,
        bounds: *bounds,
        precision: space.precision(),
        degree_cap: space.degree_cap(),
        condition_i: cond_i,
        vars: scanned.vars().to_vec(),
        generators: scanned.generators().iter().map(|g| g.to_string()).collect(),
        eliminated: eliminated
            .iter()
            .map(|e| Elimination {
                var: e.var.clone(),
                value: e.value.to_string(),
            })
            .collect(),
        diagnostics,
        cells,
        witness,
        caveats,
        micros: start.elapsed().as_micros(),
    })
}

/// Express a witness on the scanned presentation as a map from the input
/// presentation and re-run the lift there.
fn pull_back(
    original: &Arc<Presentation>,
    point: Option<&[i128]>,
    eliminated: &[crate::series::Elimination],
    condition: &ConditionId,
    reduced: &AlgebraMap,
) -> Result<WitnessReport> {
    let ring = reduced.target();
    let reduced_vars = reduced.presentation().vars();
    let images = original
        .vars()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let shift = ring.scalar(point.map_or(0, |pt| pt[i]));
            let moved = if let Some(k) = reduced_vars.iter().position(|w| w == v) {
                reduced.images()[k].clone()
            } else {
                let e = eliminated
                    .iter()
                    .find(|e| &e.var == v)
                    .ok_or_else(|| Error::Incompatible(format!("variable {v} vanished without an elimination")))?;
                evaluate(&e.value, ring, reduced.images())?
            };
            Ok(&shift + &moved)
        })
        .collect::<Result<Vec<RingElem>>>()?;

    let surj = make_truncation(&lift_source(condition, ring.descriptor())?, ring.descriptor())?;
    let (map, reverified, lift) = match check_well_defined(original, ring, images.clone())?.into_map() {
        Some(map) => {
            let lift = lift_square_zero(&LiftProblem::new(map.clone(), surj)?)?;
            (map, lift.is_no_lift(), lift)
        }
        None => {
            // keep the scanned witness; the input form failed to re-verify
            let lift = lift_square_zero(&LiftProblem::new(reduced.clone(), surj)?)?;
            (reduced.clone(), false, lift)
        }
    };
    Ok(WitnessReport {
        condition: condition.clone(),
        map,
        lift,
        reduced_map: reduced.clone(),
        reverified,
    })
}

fn lift_source(condition: &ConditionId, target: &RingDescriptor) -> Result<RingDescriptor> {
    let family = match condition {
        ConditionId::II { m } => Family::WmEps { m: m + 1 },
        ConditionId::III { m, d } => Family::Pd { m: *m, d: d + 1 },
        ConditionId::Curve { n, g, d } => Family::Ramified {
            n: *n,
            g: g.clone(),
            d: d + 1,
        },
    };
    Ok(RingDescriptor::new(family, target.params))
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            ProbeVerdict::RefutedWithWitness => "refuted with witness (R is not smooth)",
            ProbeVerdict::NoObstructionFound => "no obstruction found",
            ProbeVerdict::PrecisionLimited => "precision limited",
        };
        writeln!(f, "verdict: {verdict}")?;
        match &self.condition_i {
            ConditionI::Point { point, method } => writeln!(f, "condition (i): point {point:?} ({method:?})")?,
            ConditionI::Unknown { reason } => writeln!(f, "condition (i): unknown, {reason}")?,
        }
        for e in &self.eliminated {
            writeln!(f, "eliminated {} = {}", e.var, e.value)?;
        }
        writeln!(
            f,
            "scanned presentation: vars [{}], generators [{}]",
            self.vars.join(", "),
            self.generators.join(", ")
        )?;
        if let Some(m) = self.diagnostics.as_ref().and_then(|d| d.m_star) {
            writeln!(f, "smallest valuation of a linear coefficient: {m}")?;
        }
        for c in &self.cells {
            let outcome = match &c.outcome {
                ConditionOutcome::Pass => "pass".to_string(),
                ConditionOutcome::Refuted { .. } => "REFUTED".to_string(),
                ConditionOutcome::PrecisionLimited { coverage, reason } => {
                    format!("undecided ({:.1}% covered: {reason})", coverage * 100.0)
                }
            };
            writeln!(
                f,
                "  {}: {outcome} [{} scanned, {} well defined]",
                c.condition, c.stats.scanned, c.stats.well_defined
            )?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness at {}: {}", w.condition, w.map)?;
            if let Some(cert) = w.lift.certificate() {
                writeln!(
                    f,
                    "no lift: combination {:?} of rows [{}] vanishes mod p^{} on the matrix but gives {} on the right-hand side",
                    cert.certificate.combination,
                    cert.rows.join(", "),
                    cert.certificate.threshold,
                    cert.certificate.residual
                )?;
            }
            writeln!(f, "re-verified on input variables: {}", w.reverified)?;
        }
        for c in &self.caveats {
            writeln!(f, "note: {c}")?;
        }
        Ok(())
    }
}
