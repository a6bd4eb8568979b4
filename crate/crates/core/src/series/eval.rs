use std::sync::Arc;

use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::pd_rings::{ArtinTestRing, RingElem, RingHandle};

fn check(f: &TruncatedSeries, ring: &Arc<ArtinTestRing>, images: &[RingElem]) -> Result<()> {
    let space = f.space();
    if images.len() != space.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "{} images for {} variables",
            images.len(),
            space.num_vars()
        )));
    }
    if space.p() != ring.p() {
        return Err(Error::Incompatible(format!(
            "series over p = {} evaluated in a ring over p = {}",
            space.p(),
            ring.p()
        )));
    }
    if space.degree_cap() < ring.nilpotency_bound() {
        return Err(Error::InsufficientPrecision(format!(
            "degree cap {} is below the nilpotency bound {} of {}",
            space.degree_cap(),
            ring.nilpotency_bound(),
            ring.descriptor()
        )));
    }
    if space.precision() < ring.max_mod_exp() {
        return Err(Error::InsufficientPrecision(format!(
            "coefficients mod p^{} cannot be read in {}",
            space.precision(),
            ring.descriptor()
        )));
    }
    for (i, img) in images.iter().enumerate() {
        if **img.ring() != **ring {
            return Err(Error::RingMismatch {
                left: img.ring().descriptor().to_string(),
                right: ring.descriptor().to_string(),
            });
        }
        if !img.in_max_ideal() {
            return Err(Error::ImageNotInMaxIdeal(space.vars()[i].clone()));
        }
    }
    Ok(())
}

/// Powers `x^0 .. x^{n-1}` of every image.
fn power_table(ring: &Arc<ArtinTestRing>, images: &[RingElem], n: usize) -> Vec<Vec<RingElem>> {
    images
        .iter()
        .map(|x| {
            let mut pw = vec![ring.one()];
            for k in 1..n {
                let next = &pw[k - 1] * x;
                let done = next.is_zero();
                pw.push(next);
                if done {
                    break;
                }
            }
            pw
        })
        .collect()
}

fn eval_with(
    f: &TruncatedSeries,
    ring: &Arc<ArtinTestRing>,
    powers: &[Vec<RingElem>],
) -> RingElem {
    let bound = ring.nilpotency_bound();
    let mut acc = ring.zero();
    'terms: for (e, c) in f.terms() {
        if e.iter().sum::<u32>() >= bound {
            continue;
        }
        let mut term = ring.scalar(c as i128);
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            match powers[i].get(k as usize) {
                Some(pw) => term = &term * pw,
                // the power table stops once a power vanishes
                None => continue 'terms,
            }
            if term.is_zero() {
                continue 'terms;
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// The image of `f` under the continuous map sending `T_i` to `images[i]`.
pub fn evaluate(
    f: &TruncatedSeries,
    ring: &Arc<ArtinTestRing>,
    images: &[RingElem],
) -> Result<RingElem> {
    check(f, ring, images)?;
    let powers = power_table(ring, images, ring.nilpotency_bound() as usize);
    Ok(eval_with(f, ring, &powers))
}

/// [`evaluate`] for several series at the same point, sharing the powers.
pub fn evaluate_all(
    fs: &[TruncatedSeries],
    ring: &Arc<ArtinTestRing>,
    images: &[RingElem],
) -> Result<Vec<RingElem>> {
    if let Some(f) = fs.first() {
        check(f, ring, images)?;
    }
    let powers = power_table(ring, images, ring.nilpotency_bound() as usize);
    fs.iter()
        .map(|f| {
            if **f.space() != **fs[0].space() {
                return Err(Error::SeriesMismatch("series in different spaces".into()));
            }
            Ok(eval_with(f, ring, &powers))
        })
        .collect()
}
