//! Linear systems over `Z/p^m`.
//!
//! `Z/p^m` is a local principal ideal ring, so every nonzero entry is a unit
//! times a power of `p` and the matrix can be brought to diagonal (Smith) form
//! by pivoting on an entry of minimal valuation. Row and column operations are
//! recorded so that solutions, kernel generators and inconsistency
//! certificates can be expressed in the original coordinates.

use serde::Serialize;

use super::{add_mod, checked_pow, inverse_mod, mul_mod, reduce_i128, sub_mod, v_p, WittInt};
use crate::error::{Error, Result};

/// A dense matrix over `Z/p^m`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZpMatrix {
    p: u64,
    m: u32,
    #[serde(skip)]
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ZpMatrix {
    pub fn zeros(p: u64, m: u32, rows: usize, cols: usize) -> Result<Self> {
        let modulus = checked_pow(p, m)?;
        Ok(ZpMatrix {
            p,
            m,
            modulus,
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    pub fn from_rows(p: u64, m: u32, rows: &[Vec<i128>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut out = Self::zeros(p, m, rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                out.set(i, j, reduce_i128(*v, out.modulus));
            }
        }
        Ok(out)
    }

    pub fn identity(p: u64, m: u32, n: usize) -> Result<Self> {
        let mut out = Self::zeros(p, m, n, n)?;
        for i in 0..n {
            out.set(i, i, 1 % out.modulus);
        }
        Ok(out)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.modulus);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entry(&self, i: usize, j: usize) -> WittInt {
        WittInt::from_reduced(self.p, self.m, self.modulus, self.get(i, j))
    }

    /// `A x` for a vector of residues.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| {
                    add_mod(acc, mul_mod(self.get(i, j), x[j], self.modulus), self.modulus)
                })
            })
            .collect()
    }

    /// `c^T A` for a row combination `c`.
    pub fn combine_rows(&self, c: &[u64]) -> Vec<u64> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(0, |acc, i| {
                    add_mod(acc, mul_mod(c[i], self.get(i, j), self.modulus), self.modulus)
                })
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, i: usize, s: u64) {
        for j in 0..self.cols {
            let v = mul_mod(self.get(i, j), s, self.modulus);
            self.set(i, j, v);
        }
    }

    /// row_target -= s * row_source
    fn sub_row(&mut self, target: usize, source: usize, s: u64) {
        for j in 0..self.cols {
            let v = sub_mod(
                self.get(target, j),
                mul_mod(s, self.get(source, j), self.modulus),
                self.modulus,
            );
            self.set(target, j, v);
        }
    }

    /// col_target -= s * col_source
    fn sub_col(&mut self, target: usize, source: usize, s: u64) {
        for i in 0..self.rows {
            let v = sub_mod(
                self.get(i, target),
                mul_mod(s, self.get(i, source), self.modulus),
                self.modulus,
            );
            self.set(i, target, v);
        }
    }
}

/// A row combination `c` with `c^T A ≡ 0 (mod p^k)` but `c^T b ≢ 0 (mod p^k)`.
/// Any solution `x` would give `c^T b = c^T A x ≡ 0 (mod p^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InconsistencyCertificate {
    pub combination: Vec<u64>,
    pub threshold: u32,
    pub residual: u64,
}

impl InconsistencyCertificate {
    pub fn verify(&self, a: &ZpMatrix, b: &[u64]) -> bool {
        if self.combination.len() != a.rows() || b.len() != a.rows() {
            return false;
        }
        let pk = match checked_pow(a.p(), self.threshold) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let lhs_ok = a.combine_rows(&self.combination).iter().all(|v| v % pk == 0);
        let rhs = self
            .combination
            .iter()
            .zip(b)
            .fold(0, |acc, (c, v)| add_mod(acc, mul_mod(*c, *v, a.modulus()), a.modulus()));
        lhs_ok && rhs % pk != 0 && rhs == self.residual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// One particular solution plus generators of the solution module of `A x = 0`.
    Solution { x: Vec<WittInt>, kernel: Vec<Vec<WittInt>> },
    NoSolution(InconsistencyCertificate),
}

impl LinearSolution {
    pub fn is_solvable(&self) -> bool {
        matches!(self, LinearSolution::Solution { .. })
    }
}

/// Solve `A x = b` over `Z/p^m`.
///
/// Pivots are chosen with minimal valuation, ties broken by lowest row index
/// and then lowest column index.
pub fn solve_linear(a: &ZpMatrix, b: &[WittInt]) -> Result<LinearSolution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    if let Some(bad) = b.iter().find(|v| v.p() != a.p() || v.precision() != a.precision()) {
        return Err(Error::ModulusMismatch {
            left: format!("{}^{}", a.p(), a.precision()),
            right: format!("{}^{}", bad.p(), bad.precision()),
        });
    }
    let rhs: Vec<u64> = b.iter().map(WittInt::value).collect();
    Ok(solve_residues(a, &rhs))
}

pub(crate) fn solve_residues(a: &ZpMatrix, rhs: &[u64]) -> LinearSolution {
    let (p, m, q) = (a.p(), a.precision(), a.modulus());
    let (rows, cols) = (a.rows(), a.cols());

    let mut d = a.clone();
    // u tracks row operations (U A V = D), v tracks column operations.
    let mut u = ZpMatrix::identity(p, m, rows).expect("modulus already validated");
    let mut v = ZpMatrix::identity(p, m, cols).expect("modulus already validated");
    let mut pivots: Vec<u32> = Vec::new();

    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let e = d.get(i, j);
                if e == 0 {
                    continue;
                }
                let val = v_p(e, p);
                if best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((k, pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let pk = super::pow_mod(p, k as u64, q);
        let unit = d.get(t, t) / pk;
        let inv = inverse_mod(unit % q, q).expect("pivot unit part is invertible");
        d.scale_row(t, inv);
        u.scale_row(t, inv);
        debug_assert_eq!(d.get(t, t), pk);

        for i in (t + 1)..rows {
            let e = d.get(i, t);
            if e != 0 {
                let s = e / pk;
                d.sub_row(i, t, s);
                u.sub_row(i, t, s);
            }
        }
        for j in (t + 1)..cols {
            let e = d.get(t, j);
            if e != 0 {
                let s = e / pk;
                d.sub_col(j, t, s);
                v.sub_col(j, t, s);
            }
        }
        pivots.push(k);
    }

    let rank = pivots.len();
    let ub = u.apply(rhs);

    for (t, &ubt) in ub.iter().enumerate() {
        let threshold = if t < rank { pivots[t] } else { m };
        let pk = super::checked_pow(p, threshold).expect("bounded by modulus");
        if ubt % pk != 0 {
            let combination: Vec<u64> = (0..rows).map(|j| u.get(t, j)).collect();
            return LinearSolution::NoSolution(InconsistencyCertificate {
                combination,
                threshold,
                residual: ubt,
            });
        }
    }

    let mut y = vec![0u64; cols];
    for t in 0..rank {
        let pk = super::pow_mod(p, pivots[t] as u64, q);
        y[t] = ub[t] / pk;
    }
    let x = v.apply(&y);
    let wrap = |vals: Vec<u64>| -> Vec<WittInt> {
        vals.into_iter()
            .map(|val| WittInt::from_reduced(p, m, q, val))
            .collect()
    };

    let mut kernel = Vec::new();
    for t in 0..cols {
        let gen_coeff = if t < rank {
            if pivots[t] == 0 {
                continue;
            }
            super::pow_mod(p, (m - pivots[t]) as u64, q)
        } else {
            1 % q
        };
        if gen_coeff == 0 {
            continue;
        }
        let mut e = vec![0u64; cols];
        e[t] = gen_coeff;
        kernel.push(wrap(v.apply(&e)));
    }

    LinearSolution::Solution { x: wrap(x), kernel }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: u64, m: u32, v: i128) -> WittInt {
        WittInt::new(p, m, v).unwrap()
    }

    fn exhaustive(a: &ZpMatrix, b: &[u64]) -> Vec<Vec<u64>> {
        let q = a.modulus();
        let n = a.cols();
        let mut out = Vec::new();
        let mut x = vec![0u64; n];
        loop {
            if a.apply(&x) == b {
                out.push(x.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                x[i] += 1;
                if x[i] < q {
                    break;
                }
                x[i] = 0;
            }
        }
    }

    #[test]
    fn three_x_equals_three_mod_nine() {
        let a = ZpMatrix::from_rows(3, 2, &[vec![3]]).unwrap();
        let sol = solve_linear(&a, &[w(3, 2, 3)]).unwrap();
        let LinearSolution::Solution { x, kernel } = sol else {
            panic!("expected a solution")
        };
        assert_eq!(x[0].value(), 1);
        assert_eq!(kernel.len(), 1);
        assert_eq!(kernel[0][0].value(), 3);
        // frozen from the exhaustive oracle: {1, 4, 7}
        assert_eq!(exhaustive(&a, &[3]), vec![vec![1], vec![4], vec![7]]);
    }

    #[test]
    fn three_x_equals_one_has_no_solution() {
        let a = ZpMatrix::from_rows(3, 2, &[vec![3]]).unwrap();
        let sol = solve_linear(&a, &[w(3, 2, 1)]).unwrap();
        let LinearSolution::NoSolution(cert) = sol else {
            panic!("expected no solution")
        };
        assert!(cert.verify(&a, &[1]));
        assert!(exhaustive(&a, &[1]).is_empty());
    }

    #[test]
    fn identity_returns_rhs_with_empty_kernel() {
        let a = ZpMatrix::identity(5, 2, 3).unwrap();
        let b = [w(5, 2, 7), w(5, 2, 0), w(5, 2, 24)];
        let LinearSolution::Solution { x, kernel } = solve_linear(&a, &b).unwrap() else {
            panic!()
        };
        assert_eq!(x, b.to_vec());
        assert!(kernel.is_empty());
    }

    #[test]
    fn zero_rows_produce_full_precision_certificates() {
        let a = ZpMatrix::from_rows(2, 3, &[vec![0, 0], vec![2, 4]]).unwrap();
        let LinearSolution::NoSolution(cert) = solve_linear(&a, &[w(2, 3, 4), w(2, 3, 2)]).unwrap()
        else {
            panic!()
        };
        assert!(cert.verify(&a, &[4, 2]));
        assert_eq!(cert.threshold, 3);
    }

    #[test]
    fn dimension_and_modulus_errors() {
        let a = ZpMatrix::from_rows(3, 2, &[vec![1, 2]]).unwrap();
        assert!(matches!(
            solve_linear(&a, &[w(3, 2, 1), w(3, 2, 1)]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            solve_linear(&a, &[w(3, 3, 1)]),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn wide_system_kernel() {
        // x + 3y = 0 mod 9: kernel generated by (-3, 1) and nothing else
        let a = ZpMatrix::from_rows(3, 2, &[vec![1, 3]]).unwrap();
        let LinearSolution::Solution { kernel, .. } = solve_linear(&a, &[w(3, 2, 0)]).unwrap()
        else {
            panic!()
        };
        let zero: Vec<u64> = vec![0];
        for g in &kernel {
            let vals: Vec<u64> = g.iter().map(WittInt::value).collect();
            assert_eq!(a.apply(&vals), zero);
        }
        assert_eq!(exhaustive(&a, &[0]).len(), 9);
    }
}
