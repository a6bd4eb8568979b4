//! Presentations `R = W[[T_1..T_r]]/I` with `I` given by generators, and the
//! normalizations that move a presentation to one with `ord(f) >= 1` and no
//! unit linear terms.

use std::sync::Arc;

use serde::Serialize;

use super::{SeriesSpace, TruncatedSeries};
use crate::error::{Error, Result};
use crate::witt::{inverse_mod, reduce_i128, v_p, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    space: Arc<SeriesSpace>,
    generators: Vec<TruncatedSeries>,
}

/// A variable removed by [`Presentation::minimize`], with the series it was
/// set to, written in the surviving variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub var: String,
    pub value: TruncatedSeries,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimized {
    pub presentation: Presentation,
    pub eliminated: Vec<Elimination>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearTerm {
    pub generator: usize,
    pub var: String,
    pub coefficient: u64,
    pub valuation: Valuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LinearDiagnostics {
    /// Nonzero linear coefficients of every generator.
    pub terms: Vec<LinearTerm>,
    /// Minimum valuation of a nonzero linear coefficient, if any exists.
    pub m_star: Option<u32>,
    /// Generators whose order is at least 2 at the working precision. This is
    /// a statement about the generators only, not about all of `I`.
    pub generators_with_ord_ge_2: Vec<usize>,
}

impl Presentation {
    pub fn new(space: Arc<SeriesSpace>, generators: Vec<TruncatedSeries>) -> Result<Self> {
        for g in &generators {
            if **g.space() != *space {
                return Err(Error::SeriesMismatch(
                    "generator lives in a different space".into(),
                ));
            }
        }
        Ok(Presentation { space, generators })
    }

    /// `W[[vars]]` with `I = 0`.
    pub fn free(space: Arc<SeriesSpace>) -> Self {
        Presentation {
            space,
            generators: Vec::new(),
        }
    }

    pub fn space(&self) -> &Arc<SeriesSpace> {
        &self.space
    }

    pub fn vars(&self) -> &[String] {
        self.space.vars()
    }

    pub fn num_vars(&self) -> usize {
        self.space.num_vars()
    }

    pub fn generators(&self) -> &[TruncatedSeries] {
        &self.generators
    }

    /// Whether every generator is zero at the working precision.
    pub fn is_free(&self) -> bool {
        self.generators.iter().all(TruncatedSeries::is_zero)
    }

    /// Variables that occur in no generator.
    pub fn unused_vars(&self) -> Vec<usize> {
        (0..self.num_vars())
            .filter(|&i| {
                self.generators
                    .iter()
                    .all(|g| g.terms().all(|(e, _)| e[i] == 0))
            })
            .collect()
    }

    /// Substitute `T_i + a_i` for `T_i`, after checking that every generator
    /// vanishes at `a`.
    pub fn translate_to_point(&self, point: &[i128]) -> Result<Presentation> {
        if point.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates for {} variables",
                point.len(),
                self.num_vars()
            )));
        }
        let p = self.space.p() as i128;
        let q = self.space.modulus();
        for (i, a) in point.iter().enumerate() {
            if a.rem_euclid(p) != 0 {
                return Err(Error::UnitConstantSubstitution(self.space.vars()[i].clone()));
            }
        }
        let constants: Vec<TruncatedSeries> = point
            .iter()
            .map(|a| TruncatedSeries::constant(&self.space, *a))
            .collect();
        for (index, g) in self.generators.iter().enumerate() {
            let value = g.compose(&constants)?.constant_term();
            if value != 0 {
                return Err(Error::PointNotAZero {
                    index,
                    value: format!("{value} mod {q}"),
                });
            }
        }
        let images: Vec<TruncatedSeries> = point
            .iter()
            .enumerate()
            .map(|(i, a)| &TruncatedSeries::var(&self.space, i) + &TruncatedSeries::constant(&self.space, *a))
            .collect();
        let generators = self
            .generators
            .iter()
            .map(|g| g.compose(&images))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation {
            space: Arc::clone(&self.space),
            generators,
        })
    }

    /// Eliminate variables with a unit linear coefficient until none is left.
    ///
    /// Repeatedly takes the first generator (then the first variable) with a
    /// unit linear coefficient `lambda`, solves `f = 0` for that variable by
    /// the fixed-point iteration `t <- -lambda^{-1} (f - lambda t)`, and
    /// substitutes. Generators should have `ord >= 1` (see
    /// [`Presentation::translate_to_point`]).
    pub fn minimize(&self) -> Result<Minimized> {
        let mut pres = self.clone();
        pres.generators.retain(|g| !g.is_zero());
        let mut eliminated: Vec<Elimination> = Vec::new();
        while let Some((j, i, lambda)) = pres.find_unit_linear() {
            let space = Arc::clone(&pres.space);
            let q = space.modulus();
            let f = &pres.generators[j];
            let var = TruncatedSeries::var(&space, i);
            let rest = f - &var.scale(lambda as i128);
            let neg_inv = reduce_i128(-(inverse_mod(lambda, q).expect("unit") as i128), q);

            let mut t = TruncatedSeries::zero(&space);
            let mut images: Vec<TruncatedSeries> =
                (0..space.num_vars()).map(|k| TruncatedSeries::var(&space, k)).collect();
            for _ in 0..space.degree_cap() {
                images[i] = t.clone();
                let next = rest.compose(&images)?.scale(neg_inv as i128);
                if next == t {
                    break;
                }
                t = next;
            }

            // Move to the space without variable i.
            let mut vars = space.vars().to_vec();
            let name = vars.remove(i);
            let small = space.with_vars(vars)?;
            let mut down: Vec<TruncatedSeries> = Vec::with_capacity(space.num_vars());
            for k in 0..space.num_vars() {
                down.push(match k.cmp(&i) {
                    std::cmp::Ordering::Less => TruncatedSeries::var(&small, k),
                    std::cmp::Ordering::Equal => TruncatedSeries::zero(&small),
                    std::cmp::Ordering::Greater => TruncatedSeries::var(&small, k - 1),
                });
            }
            let value = t.compose(&down)?;
            down[i] = value.clone();

            let generators = pres
                .generators
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, g)| g.compose(&down))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|g| !g.is_zero())
                .collect();
            for e in &mut eliminated {
                e.value = e.value.compose(&down)?;
            }
            eliminated.push(Elimination { var: name, value });
            pres = Presentation {
                space: small,
                generators,
            };
        }
        Ok(Minimized {
            presentation: pres,
            eliminated,
        })
    }

    fn find_unit_linear(&self) -> Option<(usize, usize, u64)> {
        let p = self.space.p();
        self.generators.iter().enumerate().find_map(|(j, g)| {
            g.linear_coeffs()
                .into_iter()
                .enumerate()
                .find(|(_, c)| c % p != 0)
                .map(|(i, c)| (j, i, c))
        })
    }

    pub fn linear_diagnostics(&self) -> LinearDiagnostics {
        let p = self.space.p();
        let m = self.space.precision();
        let mut terms = Vec::new();
        for (j, g) in self.generators.iter().enumerate() {
            for (i, c) in g.linear_coeffs().into_iter().enumerate() {
                if c != 0 {
                    terms.push(LinearTerm {
                        generator: j,
                        var: self.space.vars()[i].clone(),
                        coefficient: c,
                        valuation: Valuation::Finite(v_p(c, p).min(m)),
                    });
                }
            }
        }
        let m_star = terms.iter().map(|t| t.valuation.floor()).min();
        let generators_with_ord_ge_2 = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.ord().floor() >= 2)
            .map(|(j, _)| j)
            .collect();
        LinearDiagnostics {
            terms,
            m_star,
            generators_with_ord_ge_2,
        }
    }

    /// Entry `[j][i]` is `d f_j / d T_i`.
    pub fn jacobian(&self) -> Vec<Vec<TruncatedSeries>> {
        self.generators
            .iter()
            .map(|g| (0..self.num_vars()).map(|i| g.derivative(i)).collect())
            .collect()
    }

    /// The same generators read in another space with the same variables.
    pub fn recast(&self, space: &Arc<SeriesSpace>) -> Result<Presentation> {
        let generators = self
            .generators
            .iter()
            .map(|g| g.recast(space))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation {
            space: Arc::clone(space),
            generators,
        })
    }
}
