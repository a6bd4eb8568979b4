use std::sync::Arc;

use super::{ArtinTestRing, RingElem, RingHandle};

/// Elements of the maximal ideal in lexicographic coordinate order, the unit
/// coordinate most significant.
///
/// Element `k` of the order is available directly through
/// [`RingHandle::max_ideal_element`], so a scan can be split into index ranges
/// or resumed from a saved position.
#[derive(Debug, Clone)]
pub struct MaxIdealIter {
    ring: Arc<ArtinTestRing>,
    next: u128,
    end: u128,
}

impl MaxIdealIter {
    pub(crate) fn new(ring: Arc<ArtinTestRing>) -> Self {
        let end = ring.max_ideal_size();
        MaxIdealIter { ring, next: 0, end }
    }

    /// Only the indices in `start..end` (clamped to the ideal size).
    pub fn range(ring: Arc<ArtinTestRing>, start: u128, end: u128) -> Self {
        let end = end.min(ring.max_ideal_size());
        MaxIdealIter {
            ring,
            next: start.min(end),
            end,
        }
    }

    /// Index of the element the next call to `next` returns.
    pub fn position(&self) -> u128 {
        self.next
    }
}

impl Iterator for MaxIdealIter {
    type Item = RingElem;

    fn next(&mut self) -> Option<RingElem> {
        if self.next >= self.end {
            return None;
        }
        let e = self.ring.max_ideal_element(self.next);
        self.next += 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.end - self.next).unwrap_or(usize::MAX);
        (left, Some(left))
    }
}

pub(super) fn max_ideal_element(ring: &Arc<ArtinTestRing>, mut index: u128) -> RingElem {
    let p = ring.p();
    let moduli = ring.moduli();
    let mut coords = vec![0i128; ring.dim()];
    for i in (0..ring.dim()).rev() {
        let radix = if i == 0 { moduli[0] / p } else { moduli[i] } as u128;
        let digit = (index % radix) as i128;
        index /= radix;
        coords[i] = if i == 0 { digit * p as i128 } else { digit };
    }
    ring.from_coords(&coords).expect("dimension matches")
}
