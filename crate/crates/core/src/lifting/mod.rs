//! Maps from presented formal algebras into test rings, and the lifting
//! questions asked about them.
//!
//! A `W`-algebra map `R = W[[T]]/I -> A` into a finite local ring is the same
//! thing as a choice of images of the `T_i` in the maximal ideal of `A` on which
//! every generator of `I` vanishes. Along a square-zero surjection `A -> A'`
//! the set of lifts of a map is either empty or a torsor under a linear
//! module, so deciding whether a lift exists is a linear system over
//! `Z/p^M` ([`lift_square_zero`]).

mod conditions;
mod deligne;
mod lift;
mod probe;
mod t1;

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pd_rings::{ArtinTestRing, RingElem, RingHom};
use crate::series::{evaluate_all, Presentation};

pub use conditions::{
    condition_i, condition_ii, condition_iii, curve_criterion_probe, ConditionI, ConditionId,
    ConditionOutcome, ConditionReport, PointMethod, ScanStats,
};
pub use deligne::{deligne_example, DeligneReport};
pub use lift::{lift_square_zero, LiftProblem, LiftReport, LiftStats, LiftVerdict, NoLiftCertificate};
pub use probe::{probe_smoothness, ProbeBounds, ProbeReport, ProbeVerdict, WitnessReport};
pub use t1::{
    lift_t1_class, t1_lifting_check, t1_module, T1Class, T1LiftingReport, T1Module, T1Verdict,
};

/// A verified `W`-algebra map `R -> A`.
#[derive(Clone)]
pub struct AlgebraMap {
    pres: Arc<Presentation>,
    target: Arc<ArtinTestRing>,
    images: Vec<RingElem>,
}

/// A generator that does not vanish under the proposed images.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorFailure {
    pub index: usize,
    pub value: RingElem,
}

#[derive(Debug, Clone)]
pub enum WellDefinedness {
    Map(AlgebraMap),
    Fails(Vec<GeneratorFailure>),
}

impl WellDefinedness {
    pub fn into_map(self) -> Option<AlgebraMap> {
        match self {
            WellDefinedness::Map(m) => Some(m),
            WellDefinedness::Fails(_) => None,
        }
    }

    pub fn is_map(&self) -> bool {
        matches!(self, WellDefinedness::Map(_))
    }
}

/// Evaluate every generator at `images` and keep the map if all vanish.
pub fn check_well_defined(
    pres: &Arc<Presentation>,
    target: &Arc<ArtinTestRing>,
    images: Vec<RingElem>,
) -> Result<WellDefinedness> {
    let values = evaluate_images(pres, target, &images)?;
    let failures: Vec<GeneratorFailure> = values
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(index, value)| GeneratorFailure { index, value })
        .collect();
    if failures.is_empty() {
        Ok(WellDefinedness::Map(AlgebraMap {
            pres: Arc::clone(pres),
            target: Arc::clone(target),
            images,
        }))
    } else {
        Ok(WellDefinedness::Fails(failures))
    }
}

fn evaluate_images(
    pres: &Presentation,
    target: &Arc<ArtinTestRing>,
    images: &[RingElem],
) -> Result<Vec<RingElem>> {
    if images.len() != pres.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "{} images for {} variables",
            images.len(),
            pres.num_vars()
        )));
    }
    if pres.generators().is_empty() {
        // still validate the images themselves
        for (i, img) in images.iter().enumerate() {
            if **img.ring() != **target {
                return Err(Error::RingMismatch {
                    left: img.ring().descriptor().to_string(),
                    right: target.descriptor().to_string(),
                });
            }
            if !img.in_max_ideal() {
                return Err(Error::ImageNotInMaxIdeal(pres.vars()[i].clone()));
            }
        }
        return Ok(Vec::new());
    }
    evaluate_all(pres.generators(), target, images)
}

impl AlgebraMap {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn target(&self) -> &Arc<ArtinTestRing> {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    /// Compose with a ring map out of the target.
    pub fn push_forward(&self, hom: &RingHom) -> Result<AlgebraMap> {
        let images = self
            .images
            .iter()
            .map(|x| hom.apply(x))
            .collect::<Result<Vec<_>>>()?;
        check_well_defined(&self.pres, hom.target(), images)?
            .into_map()
            .ok_or_else(|| Error::IllDefinedMap("push-forward is not well defined".into()))
    }
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pres
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, x)| format!("{v} -> {x}"))
            .collect();
        write!(f, "{} into {}", parts.join(", "), self.target.descriptor())
    }
}

impl Serialize for AlgebraMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraMap", 4)?;
        st.serialize_field("target", &self.target.descriptor().to_string())?;
        st.serialize_field("ring", self.target.descriptor())?;
        st.serialize_field("vars", self.pres.vars())?;
        st.serialize_field("images", &self.images)?;
        st.end()
    }
}
