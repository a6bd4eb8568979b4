//! Ring maps between test rings: general homomorphisms given on a basis, the
//! coordinate truncations `A' -> A`, and the shift `T -> T + e`.

use std::sync::Arc;

use super::{make_ring, ArtinTestRing, BasisSymbol, Family, RingDescriptor, RingElem, RingHandle};
use crate::error::{Error, Result};
use crate::witt::RingParams;

/// A `W`-algebra map, determined by the images of the source basis.
#[derive(Debug, Clone)]
pub struct RingHom {
    source: Arc<ArtinTestRing>,
    target: Arc<ArtinTestRing>,
    images: Vec<RingElem>,
}

impl RingHom {
    /// Checks that the images respect additive orders, the unit and all basis
    /// products.
    pub fn new(
        source: Arc<ArtinTestRing>,
        target: Arc<ArtinTestRing>,
        images: Vec<RingElem>,
    ) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a basis of size {}",
                images.len(),
                source.dim()
            )));
        }
        for img in &images {
            if **img.ring() != *target {
                return Err(Error::RingMismatch {
                    left: img.ring().descriptor().to_string(),
                    right: target.descriptor().to_string(),
                });
            }
        }
        let hom = RingHom {
            source,
            target,
            images,
        };
        hom.check()?;
        Ok(hom)
    }

    /// Send each basis symbol `s` to the target basis vector `f(s)`, or to zero.
    pub fn by_symbols(
        source: Arc<ArtinTestRing>,
        target: Arc<ArtinTestRing>,
        f: impl Fn(BasisSymbol) -> Option<BasisSymbol>,
    ) -> Result<Self> {
        let images = source
            .basis()
            .iter()
            .map(|s| match f(*s).and_then(|t| target.index_of(&t)) {
                Some(j) => target.basis_elem(j),
                None => target.zero(),
            })
            .collect();
        RingHom::new(source, target, images)
    }

    fn check(&self) -> Result<()> {
        let src = &self.source;
        if self.images[0] != self.target.one() {
            return Err(Error::IllDefinedMap("1 does not map to 1".into()));
        }
        for (i, img) in self.images.iter().enumerate() {
            if !img.scale(src.moduli()[i] as i128).is_zero() {
                return Err(Error::IllDefinedMap(format!(
                    "image of {} is not killed by p^{}",
                    src.basis()[i],
                    src.mod_exps()[i]
                )));
            }
        }
        for i in 0..src.dim() {
            for j in i..src.dim() {
                let lhs = &self.images[i] * &self.images[j];
                let rhs = self.apply_coords(src.product_of_basis(i, j));
                if lhs != rhs {
                    return Err(Error::IllDefinedMap(format!(
                        "{} * {} is not preserved",
                        src.basis()[i],
                        src.basis()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<ArtinTestRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ArtinTestRing> {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    fn apply_coords(&self, coords: &[u64]) -> RingElem {
        coords
            .iter()
            .zip(&self.images)
            .filter(|(c, _)| **c != 0)
            .fold(self.target.zero(), |acc, (c, img)| {
                &acc + &img.scale(*c as i128)
            })
    }

    pub fn apply(&self, x: &RingElem) -> Result<RingElem> {
        if **x.ring() != *self.source {
            return Err(Error::RingMismatch {
                left: x.ring().descriptor().to_string(),
                right: self.source.descriptor().to_string(),
            });
        }
        Ok(self.apply_coords(x.coords()))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingHom) -> Result<RingHom> {
        let images = self
            .images
            .iter()
            .map(|img| next.apply(img))
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(Arc::clone(&self.source), Arc::clone(&next.target), images)
    }
}

/// `p^shift e_index`, a kernel generator of additive order `p^order_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelGenerator {
    pub index: usize,
    pub shift: u32,
    pub order_exp: u32,
}

/// A surjection `A' -> A` that keeps basis coordinates with matching symbols.
#[derive(Debug, Clone)]
pub struct TruncationMap {
    hom: RingHom,
    lift_index: Vec<usize>,
    kernel: Vec<KernelGenerator>,
    square_zero: bool,
}

impl TruncationMap {
    pub fn source(&self) -> &Arc<ArtinTestRing> {
        self.hom.source()
    }

    pub fn target(&self) -> &Arc<ArtinTestRing> {
        self.hom.target()
    }

    pub fn hom(&self) -> &RingHom {
        &self.hom
    }

    pub fn apply(&self, x: &RingElem) -> Result<RingElem> {
        self.hom.apply(x)
    }

    pub fn kernel_generators(&self) -> &[KernelGenerator] {
        &self.kernel
    }

    pub fn kernel_elements(&self) -> Vec<RingElem> {
        self.kernel
            .iter()
            .map(|k| {
                let p = self.source().p() as i128;
                self.source().basis_elem(k.index).scale(p.pow(k.shift))
            })
            .collect()
    }

    /// Whether `I^2 = 0` for the kernel `I`.
    pub fn is_square_zero(&self) -> bool {
        self.square_zero
    }

    /// The coordinate-wise lift of `y`, using the smallest residues.
    pub fn canonical_lift(&self, y: &RingElem) -> Result<RingElem> {
        if **y.ring() != **self.target() {
            return Err(Error::RingMismatch {
                left: y.ring().descriptor().to_string(),
                right: self.target().descriptor().to_string(),
            });
        }
        let mut coords = vec![0i128; self.source().dim()];
        for (j, &i) in self.lift_index.iter().enumerate() {
            coords[i] = y.coord(j) as i128;
        }
        self.source().from_coords(&coords)
    }

    /// Coefficients of `x` on the kernel generators, or `None` when `x` is not
    /// in the kernel.
    pub fn kernel_coords(&self, x: &RingElem) -> Option<Vec<u64>> {
        if !self.hom.apply(x).ok()?.is_zero() {
            return None;
        }
        let p = self.source().p();
        Some(
            self.kernel
                .iter()
                .map(|k| x.coord(k.index) / p.pow(k.shift))
                .collect(),
        )
    }
}

fn supported(source: &RingDescriptor, target: &RingDescriptor) -> bool {
    use Family::*;
    if source.params != target.params || source == target {
        return false;
    }
    match (&source.family, &target.family) {
        (Wm { m: a }, Wm { m: b }) | (WmEps { m: a }, WmEps { m: b }) => a >= b,
        (WmEps { m: a }, WmMixedEps { m: b }) => *a == b + 1,
        (WmMixedEps { m: a }, WmEps { m: b }) => a >= b,
        (Pd { m: m1, d: d1 }, Pd { m: m2, d: d2 })
        | (PdEps { m: m1, d: d1 }, PdEps { m: m2, d: d2 }) => m1 >= m2 && d1 >= d2,
        (PdEps { m: m1, d: d1 }, PdEpsQuot { m: m2, d: d2 }) => m1 == m2 && d1 == d2,
        (PdEpsQuot { m: m1, d: d1 }, PdEps { m: m2, d: d2 }) => m1 == m2 && *d1 == d2 + 1,
        (
            Ramified {
                n: n1,
                g: g1,
                d: d1,
            },
            Ramified {
                n: n2,
                g: g2,
                d: d2,
            },
        ) => n1 == n2 && g1 == g2 && d1 >= d2,
        (ResidueSeries { d: d1 }, ResidueSeries { d: d2 }) => d1 >= d2,
        _ => false,
    }
}

/// The truncation between two descriptors, if it is one of the supported
/// surjections.
pub fn make_truncation(source: &RingDescriptor, target: &RingDescriptor) -> Result<TruncationMap> {
    make_truncation_between(make_ring(source)?, make_ring(target)?)
}

pub fn make_truncation_between(
    source: Arc<ArtinTestRing>,
    target: Arc<ArtinTestRing>,
) -> Result<TruncationMap> {
    if !supported(source.descriptor(), target.descriptor()) {
        return Err(Error::UnsupportedTruncation {
            source_ring: source.descriptor().to_string(),
            target: target.descriptor().to_string(),
        });
    }
    let hom = RingHom::by_symbols(Arc::clone(&source), Arc::clone(&target), Some)?;
    let lift_index = target
        .basis()
        .iter()
        .map(|s| source.index_of(s).expect("truncation target symbol missing in source"))
        .collect();
    let kernel: Vec<KernelGenerator> = source
        .basis()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let a = source.mod_exps()[i];
            let shift = target.index_of(s).map_or(0, |j| target.mod_exps()[j]);
            (shift < a).then_some(KernelGenerator {
                index: i,
                shift,
                order_exp: a - shift,
            })
        })
        .collect();
    let mut map = TruncationMap {
        hom,
        lift_index,
        kernel,
        square_zero: false,
    };
    let elems = map.kernel_elements();
    map.square_zero = elems
        .iter()
        .enumerate()
        .all(|(i, a)| elems[i..].iter().all(|b| (a * b).is_zero()));
    Ok(map)
}

/// `W_{m,d+1} -> W_{m,d}[e]` with `gamma^n(T) -> gamma^n(T) + gamma^{n-1}(T) e`,
/// the divided powers of `T -> T + e`.
pub fn shift_substitution(params: RingParams, m: u32, d: u32) -> Result<RingHom> {
    let source = make_ring(&RingDescriptor::new(Family::Pd { m, d: d + 1 }, params))?;
    let target = make_ring(&RingDescriptor::new(Family::PdEps { m, d }, params))?;
    let images = source
        .basis()
        .iter()
        .map(|s| {
            let BasisSymbol::Gamma { index: n, .. } = *s else {
                unreachable!("PD basis")
            };
            let mut img = target.zero();
            if let Some(j) = target.index_of(&BasisSymbol::Gamma { index: n, eps: false }) {
                img = &img + &target.basis_elem(j);
            }
            if n >= 1 {
                let j = target
                    .index_of(&BasisSymbol::Gamma {
                        index: n - 1,
                        eps: true,
                    })
                    .expect("n - 1 < d");
                img = &img + &target.basis_elem(j);
            }
            img
        })
        .collect();
    RingHom::new(source, target, images)
}

/// `A[e] -> A`, killing `e`. `ring` must be one of the dual-number families.
pub fn eps_restriction(ring: &Arc<ArtinTestRing>) -> Result<RingHom> {
    let desc = ring.descriptor();
    let family = match desc.family {
        Family::WmEps { m } => Family::Wm { m },
        Family::WmMixedEps { m } => Family::Wm { m: m + 1 },
        Family::PdEps { m, d } | Family::PdEpsQuot { m, d } => Family::Pd { m, d },
        _ => {
            return Err(Error::InvalidRing(format!(
                "{desc} has no dual-number variable"
            )))
        }
    };
    let target = make_ring(&RingDescriptor::new(family, desc.params))?;
    RingHom::by_symbols(Arc::clone(ring), target, |s| (!s.has_eps()).then_some(s))
}
