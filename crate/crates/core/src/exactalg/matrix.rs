//! Dense rational matrices: Gram inversion, inertia, rank and affine solves.

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Inertia counts `(positive, negative, zero)`.
pub type Inertia = (usize, usize, usize);

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn diag(values: &[Rat]) -> Self {
        let mut m = RatMatrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn diag_int(values: &[i64]) -> Self {
        RatMatrix::diag(&values.iter().map(|v| Rat::from_int(*v)).collect::<Vec<_>>())
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| Rat::from_int(*v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Bilinear form `x^T M y`.
    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if y[j].is_zero() || self.get(i, j).is_zero() {
                    continue;
                }
                acc += &(&x[i] * self.get(i, j) * &y[j]);
            }
        }
        acc
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    /// `P^T self P`.
    pub fn congruent(&self, p: &RatMatrix) -> RatMatrix {
        &(&p.transpose() * self) * p
    }

    /// Submatrix on the given row/column index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> RatMatrix {
        let mut m = RatMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn determinant(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m.get(r, k).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m.get(k, k).clone();
            det *= &pivot;
            let inv = pivot.recip().expect("nonzero pivot");
            for r in k + 1..n {
                let f = m.get(r, k) * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = m.get(r, c) - &(&f * m.get(k, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse; `DegenerateMetric` when singular.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .find(|&r| !a.get(r, k).is_zero())
                .ok_or(Error::DegenerateMetric)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pinv = a.get(k, k).recip().expect("nonzero pivot");
            for c in 0..n {
                let v = a.get(k, c) * &pinv;
                a.set(k, c, v);
                let w = inv.get(k, c) * &pinv;
                inv.set(k, c, w);
            }
            for r in 0..n {
                if r == k || a.get(r, k).is_zero() {
                    continue;
                }
                let f = a.get(r, k).clone();
                for c in 0..n {
                    let v = a.get(r, c) - &(&f * a.get(k, c));
                    a.set(r, c, v);
                    let w = inv.get(r, c) - &(&f * inv.get(k, c));
                    inv.set(r, c, w);
                }
            }
        }
        Ok(inv)
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = Rat::one();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(p, rank);
            let pivot = m.get(rank, col).clone();
            for r in rank + 1..m.rows {
                for c in col + 1..m.cols {
                    let v = (&pivot * m.get(r, c) - m.get(r, col) * m.get(rank, c)) / &prev;
                    m.set(r, c, v);
                }
                m.set(r, col, Rat::zero());
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Symmetric congruence reduction: returns `(P, d)` with `P^T self P = diag(d)`
    /// and `P` invertible. When every remaining diagonal entry vanishes, a
    /// hyperbolic pair `e_i + e_j` with `g(e_i, e_j) != 0` supplies the pivot.
    pub fn congruence_diagonalize(&self) -> Result<(RatMatrix, Vec<Rat>)> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut p = RatMatrix::identity(n);
        for k in 0..n {
            let pivot = match (k..n).find(|&i| !m.get(i, i).is_zero()) {
                Some(i) => Some(i),
                None => {
                    let pair = (k..n)
                        .flat_map(|i| (k..n).map(move |j| (i, j)))
                        .find(|&(i, j)| i != j && !m.get(i, j).is_zero());
                    pair.map(|(i, j)| {
                        for r in 0..n {
                            let v = m.get(i, r) + m.get(j, r);
                            m.set(i, r, v);
                        }
                        for r in 0..n {
                            let v = m.get(r, i) + m.get(r, j);
                            m.set(r, i, v);
                        }
                        for r in 0..n {
                            let v = p.get(r, i) + p.get(r, j);
                            p.set(r, i, v);
                        }
                        i
                    })
                }
            };
            let Some(i) = pivot else { break };
            m.swap_rows(i, k);
            m.swap_cols(i, k);
            p.swap_cols(i, k);
            let inv = m.get(k, k).recip().expect("nonzero pivot");
            for r in k + 1..n {
                let f = m.get(r, k) * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m.get(r, c) - &(&f * m.get(k, c));
                    m.set(r, c, v);
                }
                for c in 0..n {
                    let v = m.get(c, r) - &(&f * m.get(c, k));
                    m.set(c, r, v);
                }
                for c in 0..n {
                    let v = p.get(c, r) - &(&f * p.get(c, k));
                    p.set(c, r, v);
                }
            }
        }
        let d = (0..n).map(|i| m.get(i, i).clone()).collect();
        Ok((p, d))
    }

    /// Inertia `(p, q, z)` of a symmetric matrix.
    pub fn signature(&self) -> Result<Inertia> {
        let (_, d) = self.congruence_diagonalize()?;
        Ok(d.iter().fold((0, 0, 0), |(p, q, z), v| match v.signum() {
            1 => (p + 1, q, z),
            -1 => (p, q + 1, z),
            _ => (p, q, z + 1),
        }))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Rat::to_f64).collect())
            .collect()
    }
}

impl Mul<&RatMatrix> for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(Rat::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Inverse of a nondegenerate Gram matrix.
pub fn invert_gram(g: &RatMatrix) -> Result<RatMatrix> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    g.inverse()
}

/// Inertia of a symmetric matrix by exact congruence reduction.
pub fn signature(g: &RatMatrix) -> Result<Inertia> {
    g.signature()
}

/// Solution set of the affine system `A x = b` as `(x0, basis of ker A)`,
/// or `None` when inconsistent.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat], nvars: usize) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let mut rows: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, c)| {
            let mut row = r.clone();
            row.push(c.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][col].recip().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for c in col..=nvars {
                let v = &rows[i][c] - &(&f * &rows[r][c]);
                rows[i][c] = v;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let mut x0 = vec![Rat::zero(); nvars];
    for (k, &col) in pivots.iter().enumerate() {
        x0[col] = rows[k][nvars].clone();
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); nvars];
            v[f] = Rat::one();
            for (k, &col) in pivots.iter().enumerate() {
                v[col] = -&rows[k][f];
            }
            v
        })
        .collect();
    Some((x0, basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form_c() -> RatMatrix {
        RatMatrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]])
    }

    #[test]
    fn invert_involutive_diagonal() {
        let g = RatMatrix::diag_int(&[1, 1, -1]);
        assert_eq!(invert_gram(&g).unwrap(), g);
    }

    #[test]
    fn null_block_form_is_its_own_inverse() {
        let g = form_c();
        assert_eq!(&g * &g, RatMatrix::identity(4));
        assert_eq!(invert_gram(&g).unwrap(), g);
    }

    #[test]
    fn degenerate_gram_is_rejected() {
        assert_eq!(
            invert_gram(&RatMatrix::diag_int(&[1, 1, 0])),
            Err(Error::DegenerateMetric)
        );
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(signature(&RatMatrix::diag_int(&[1, 1, 1, -1])).unwrap(), (3, 1, 0));
        assert_eq!(signature(&form_c()).unwrap(), (3, 1, 0));
        let restricted = form_c().principal_submatrix(&[0, 1, 2]);
        assert_eq!(signature(&restricted).unwrap(), (2, 0, 1));
        let asym = RatMatrix::from_int_rows(&[&[1, 2], &[0, 1]]);
        assert_eq!(signature(&asym), Err(Error::NotSymmetric));
    }

    #[test]
    fn diagonalization_certificate() {
        let g = RatMatrix::from_int_rows(&[&[0, 2, 1], &[2, 0, 0], &[1, 0, 0]]);
        let (p, d) = g.congruence_diagonalize().unwrap();
        assert_eq!(g.congruent(&p), RatMatrix::diag(&d));
        assert!(!p.determinant().unwrap().is_zero());
        assert_eq!(g.signature().unwrap(), (1, 1, 1));
    }

    #[test]
    fn rank_and_affine_solve() {
        let m = RatMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(RatMatrix::zeros(3, 3).rank(), 0);
        let a = vec![
            vec![Rat::from_int(1), Rat::from_int(1), Rat::zero()],
            vec![Rat::zero(), Rat::zero(), Rat::from_int(1)],
        ];
        let (x0, ker) = solve_affine(&a, &[Rat::from_int(2), Rat::from_int(5)], 3).unwrap();
        assert_eq!(x0, vec![Rat::from_int(2), Rat::zero(), Rat::from_int(5)]);
        assert_eq!(ker, vec![vec![Rat::from_int(-1), Rat::one(), Rat::zero()]]);
        let inconsistent = vec![vec![Rat::zero(), Rat::zero(), Rat::zero()]];
        assert!(solve_affine(&inconsistent, &[Rat::one()], 3).is_none());
    }
}
