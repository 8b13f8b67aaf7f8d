//! Lie algebras given by structure constants.
//!
//! Basis indices are zero-based throughout the API; reports shift them to
//! the one-based labels `e1, e2, ...`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactalg::{Bindings, Poly, Rat, RatMatrix};

/// Square matrix of scalars, row-major.
pub type ScalarMatrix = Vec<Vec<Poly>>;

/// Structure constants `c[i][j][k]` with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// Only the brackets with `i < j` are stored; the rest are synthesized on
/// read, so antisymmetry holds by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    n: usize,
    upper: Vec<Vec<Poly>>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn check_len(n: usize, v: &[Poly]) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

pub fn basis_vector(n: usize, i: usize) -> Vec<Poly> {
    let mut v = vec![Poly::zero(); n];
    v[i] = Poly::one();
    v
}

/// One residual of the Jacobi identity on `(e_i, e_j, e_k)`, component `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiResidual {
    pub triple: (usize, usize, usize),
    pub component: usize,
    pub value: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub residuals: Vec<JacobiResidual>,
    pub all_zero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unimodularity {
    pub unimodular: bool,
    /// `trace(ad e_i)` for every basis vector.
    pub traces: Vec<Poly>,
}

impl LieAlgebra {
    pub const MAX_DIM: usize = 8;

    /// Abelian algebra of dimension `n` (`2 <= n <= 8`).
    pub fn abelian(n: usize) -> Result<Self> {
        if !(2..=Self::MAX_DIM).contains(&n) {
            return Err(Error::DimensionMismatch {
                expected: Self::MAX_DIM,
                found: n,
            });
        }
        Ok(LieAlgebra {
            n,
            upper: vec![vec![Poly::zero(); n]; n * (n - 1) / 2],
        })
    }

    /// Build from a list of brackets `[e_i, e_j] = sum_k coeffs[k] e_k` with `i != j`.
    pub fn from_brackets(n: usize, brackets: &[(usize, usize, Vec<Poly>)]) -> Result<Self> {
        let mut l = LieAlgebra::abelian(n)?;
        for (i, j, v) in brackets {
            l.set_bracket(*i, *j, v.clone())?;
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn set_bracket(&mut self, i: usize, j: usize, coeffs: Vec<Poly>) -> Result<()> {
        check_len(self.n, &coeffs)?;
        if i >= self.n || j >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: i.max(j) + 1,
            });
        }
        if i == j {
            if coeffs.iter().all(Poly::is_zero) {
                return Ok(());
            }
            return Err(Error::parse(format!("[e{0}, e{0}] must vanish", i + 1), 0));
        }
        let (a, b, v) = if i < j {
            (i, j, coeffs)
        } else {
            (j, i, coeffs.iter().map(|c| -c).collect())
        };
        let idx = pair_index(self.n, a, b);
        self.upper[idx] = v;
        Ok(())
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Poly> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => vec![Poly::zero(); self.n],
            std::cmp::Ordering::Less => self.upper[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => self.upper[pair_index(self.n, j, i)].iter().map(|c| -c).collect(),
        }
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Poly {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Poly::zero(),
            std::cmp::Ordering::Less => self.upper[pair_index(self.n, i, j)][k].clone(),
            std::cmp::Ordering::Greater => -&self.upper[pair_index(self.n, j, i)][k],
        }
    }

    /// Free parameters occurring in the structure constants.
    pub fn params(&self) -> BTreeSet<String> {
        self.upper.iter().flatten().flat_map(|c| c.variables()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.upper.iter().flatten().all(Poly::is_constant)
    }

    pub fn max_degree(&self) -> u32 {
        self.upper.iter().flatten().map(Poly::total_degree).max().unwrap_or(0)
    }

    pub fn is_abelian(&self) -> bool {
        self.upper.iter().flatten().all(Poly::is_zero)
    }

    pub fn substitute(&self, bindings: &Bindings) -> LieAlgebra {
        LieAlgebra {
            n: self.n,
            upper: self
                .upper
                .iter()
                .map(|v| v.iter().map(|c| c.substitute(bindings)).collect())
                .collect(),
        }
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, x: &[Poly], y: &[Poly]) -> Result<Vec<Poly>> {
        check_len(self.n, x)?;
        check_len(self.n, y)?;
        let mut out = vec![Poly::zero(); self.n];
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn jacobi(&self) -> JacobiReport {
        let n = self.n;
        let mut residuals = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (basis_vector(n, i), basis_vector(n, j), basis_vector(n, k));
                    let a = self.bracket(&self.basis_bracket(i, j), &ek).expect("dims");
                    let b = self.bracket(&self.basis_bracket(j, k), &ei).expect("dims");
                    let c = self.bracket(&self.basis_bracket(k, i), &ej).expect("dims");
                    for l in 0..n {
                        let r = &(&a[l] + &b[l]) + &c[l];
                        if !r.is_zero() {
                            residuals.push(JacobiResidual {
                                triple: (i, j, k),
                                component: l,
                                value: r,
                            });
                        }
                    }
                }
            }
        }
        JacobiReport {
            all_zero: residuals.is_empty(),
            residuals,
        }
    }

    /// Matrix of `ad_x`: column `j` holds `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[Poly]) -> Result<ScalarMatrix> {
        check_len(self.n, x)?;
        let mut m = vec![vec![Poly::zero(); self.n]; self.n];
        for j in 0..self.n {
            let col = self.bracket(x, &basis_vector(self.n, j))?;
            for (i, v) in col.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        Ok(m)
    }

    pub fn unimodularity(&self) -> Unimodularity {
        let traces: Vec<Poly> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.structure_constant(i, j, j)).sum())
            .collect();
        Unimodularity {
            unimodular: traces.iter().all(Poly::is_zero),
            traces,
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodularity().unimodular
    }

    /// Rational structure constants, if no parameters remain.
    pub fn rational_brackets(&self) -> Result<Vec<Vec<Rat>>> {
        let mut missing = BTreeSet::new();
        let rows = self
            .upper
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| match c.as_constant() {
                        Some(r) => r,
                        None => {
                            missing.extend(c.variables());
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        if missing.is_empty() {
            Ok(rows)
        } else {
            Err(Error::SymbolicInput(missing.into_iter().collect()))
        }
    }

    /// `dim [L, L]` after binding parameters.
    pub fn derived_subalgebra_dim(&self, at: &Bindings) -> Result<usize> {
        let rows = self.substitute(at).rational_brackets()?;
        if rows.is_empty() {
            return Ok(0);
        }
        Ok(RatMatrix::from_rows(rows)?.rank())
    }

    /// Sub-algebra on the basis vectors `span`, re-indexed in the given order.
    pub fn restrict(&self, span: &[usize]) -> Result<LieAlgebra> {
        let inside: BTreeSet<usize> = span.iter().copied().collect();
        if inside.len() != span.len() || span.iter().any(|&i| i >= self.n) {
            return Err(Error::NotASubalgebra(span.to_vec()));
        }
        let mut out = LieAlgebra::abelian(span.len())?;
        for (a, &i) in span.iter().enumerate() {
            for (b, &j) in span.iter().enumerate().skip(a + 1) {
                let v = self.basis_bracket(i, j);
                if v.iter().enumerate().any(|(k, c)| !inside.contains(&k) && !c.is_zero()) {
                    return Err(Error::NotASubalgebra(span.to_vec()));
                }
                out.set_bracket(a, b, span.iter().map(|&k| v[k].clone()).collect())?;
            }
        }
        Ok(out)
    }

    /// Adjoin `e_{n+1}` with `[e_i, e_{n+1}] = sum_k d[k][i] e_k`.
    /// The result satisfies Jacobi iff `d` is a derivation.
    pub fn semidirect_extend(&self, d: &[Vec<Poly>]) -> Result<LieAlgebra> {
        if d.len() != self.n || d.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: d.len(),
            });
        }
        let m = self.n + 1;
        let mut out = LieAlgebra::abelian(m)?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let mut v = self.basis_bracket(i, j);
                v.push(Poly::zero());
                out.set_bracket(i, j, v)?;
            }
            let mut v: Vec<Poly> = (0..self.n).map(|k| d[k][i].clone()).collect();
            v.push(Poly::zero());
            out.set_bracket(i, self.n, v)?;
        }
        Ok(out)
    }

    /// Structure constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &RatMatrix) -> Result<LieAlgebra> {
        if p.rows() != self.n || p.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.rows(),
            });
        }
        let pinv = p.inverse()?;
        let cols: Vec<Vec<Poly>> = (0..self.n)
            .map(|j| p.column(j).into_iter().map(Poly::constant).collect())
            .collect();
        let mut out = LieAlgebra::abelian(self.n)?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let old = self.bracket(&cols[i], &cols[j])?;
                let new: Vec<Poly> = (0..self.n)
                    .map(|k| (0..self.n).map(|m| old[m].scale(pinv.get(k, m))).sum())
                    .collect();
                out.set_bracket(i, j, new)?;
            }
        }
        Ok(out)
    }

    /// Relabel the basis: new `e_a` is old `e_{perm[a]}`.
    pub fn permute(&self, perm: &[usize]) -> Result<LieAlgebra> {
        let mut p = RatMatrix::zeros(self.n, self.n);
        for (a, &i) in perm.iter().enumerate() {
            p.set(i, a, Rat::one());
        }
        self.change_basis(&p)
    }

    /// `true` iff `[e_i, e_j]` lies in `span` for every `i` in `ideal` and every `j`.
    pub fn is_ideal(&self, ideal: &[usize]) -> bool {
        let inside: BTreeSet<usize> = ideal.iter().copied().collect();
        ideal.iter().all(|&i| {
            (0..self.n).all(|j| {
                self.basis_bracket(i, j)
                    .iter()
                    .enumerate()
                    .all(|(k, c)| inside.contains(&k) || c.is_zero())
            })
        })
    }
}

pub fn trace(m: &ScalarMatrix) -> Poly {
    m.iter().enumerate().map(|(i, r)| r[i].clone()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::p;

    fn alg(n: usize, br: &[(usize, usize, &[&str])]) -> LieAlgebra {
        LieAlgebra::from_brackets(
            n,
            &br.iter()
                .map(|(i, j, v)| (i - 1, j - 1, v.iter().map(|s| p(s)).collect()))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn g3() -> LieAlgebra {
        alg(
            3,
            &[
                (1, 2, &["0", "0", "-gamma"]),
                (1, 3, &["0", "-beta", "0"]),
                (2, 3, &["alpha", "0", "0"]),
            ],
        )
    }

    fn g1() -> LieAlgebra {
        alg(
            3,
            &[
                (1, 2, &["alpha", "0", "-beta"]),
                (1, 3, &["-alpha", "-beta", "0"]),
                (2, 3, &["beta", "alpha", "alpha"]),
            ],
        )
    }

    fn heisenberg() -> LieAlgebra {
        alg(3, &[(2, 3, &["1", "0", "0"])])
    }

    #[test]
    fn bracket_reads_structure_constants() {
        let l = g3();
        let e = |i| basis_vector(3, i);
        assert_eq!(l.bracket(&e(0), &e(1)).unwrap(), vec![p("0"), p("0"), p("-gamma")]);
        assert_eq!(
            g1().bracket(&e(1), &e(2)).unwrap(),
            vec![p("beta"), p("alpha"), p("alpha")]
        );
        let x = vec![p("1"), p("t"), p("2")];
        assert!(l.bracket(&x, &x).unwrap().iter().all(Poly::is_zero));
        assert!(matches!(
            l.bracket(&e(0)[..2], &e(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jacobi_examples() {
        assert!(g3().jacobi().all_zero);
        assert!(LieAlgebra::abelian(3).unwrap().jacobi().all_zero);
        let bad = alg(3, &[(1, 2, &["0", "0", "1"]), (1, 3, &["1", "0", "0"])]);
        let rep = bad.jacobi();
        assert!(!rep.all_zero);
        assert_eq!(
            rep.residuals,
            vec![JacobiResidual {
                triple: (0, 1, 2),
                component: 2,
                value: p("-1")
            }]
        );
    }

    #[test]
    fn ad_traces() {
        let abelian = LieAlgebra::abelian(3).unwrap();
        assert!(abelian
            .ad_matrix(&basis_vector(3, 0))
            .unwrap()
            .iter()
            .flatten()
            .all(Poly::is_zero));
        let g5 = alg(3, &[(1, 3, &["alpha", "beta", "0"]), (2, 3, &["gamma", "delta", "0"])]);
        assert_eq!(trace(&g5.ad_matrix(&basis_vector(3, 2)).unwrap()), p("-alpha - delta"));
        let u = g5.unimodularity();
        assert!(!u.unimodular);
        assert_eq!(u.traces[2], p("-alpha - delta"));
        assert!(g3().is_unimodular());
        assert!(abelian.is_unimodular());
        // [e3,e1] = lambda e1, [e3,e2] = -lambda e2, [e2,e1] = e3
        let sl = alg(
            3,
            &[
                (3, 1, &["lambda", "0", "0"]),
                (3, 2, &["0", "-lambda", "0"]),
                (2, 1, &["0", "0", "1"]),
            ],
        );
        let ad = sl.ad_matrix(&basis_vector(3, 2)).unwrap();
        assert_eq!(ad[0][0], p("lambda"));
        assert_eq!(ad[1][1], p("-lambda"));
        assert!(ad[0][1].is_zero() && ad[1][0].is_zero());
    }

    #[test]
    fn derived_dimensions() {
        let none = Bindings::new();
        assert_eq!(
            LieAlgebra::abelian(3).unwrap().derived_subalgebra_dim(&none).unwrap(),
            0
        );
        assert_eq!(heisenberg().derived_subalgebra_dim(&none).unwrap(), 1);
        let ones: Bindings = ["alpha", "beta", "gamma"]
            .iter()
            .map(|v| (v.to_string(), p("1")))
            .collect();
        assert_eq!(g3().derived_subalgebra_dim(&ones).unwrap(), 3);
        assert!(matches!(
            g3().derived_subalgebra_dim(&none),
            Err(Error::SymbolicInput(_))
        ));
    }

    #[test]
    fn restriction() {
        let l = g3();
        assert_eq!(l.restrict(&[0, 1, 2]).unwrap(), l);
        let yy = alg(
            4,
            &[
                (1, 2, &["alpha", "0", "0", "0"]),
                (1, 3, &["beta", "0", "0", "0"]),
                (1, 4, &["c1", "0", "0", "0"]),
                (2, 4, &["0", "p2", "p3", "0"]),
            ],
        );
        assert_eq!(yy.restrict(&[0, 1, 3]), Err(Error::NotASubalgebra(vec![0, 1, 3])));
        assert!(yy.restrict(&[0, 1, 2]).is_ok());
    }

    #[test]
    fn semidirect_extensions() {
        let abelian = LieAlgebra::abelian(3).unwrap();
        let d: Vec<Vec<Poly>> = (0..3)
            .map(|i| (0..3).map(|j| p(&format!("d{i}{j}"))).collect())
            .collect();
        assert!(abelian.semidirect_extend(&d).unwrap().jacobi().all_zero);

        let diag = vec![
            vec![p("1"), p("0"), p("0")],
            vec![p("0"), p("0"), p("0")],
            vec![p("0"), p("0"), p("0")],
        ];
        let ext = heisenberg().semidirect_extend(&diag).unwrap();
        assert!(!ext.jacobi().all_zero);
        assert_eq!(ext.basis_bracket(0, 3), vec![p("1"), p("0"), p("0"), p("0")]);
    }

    #[test]
    fn change_of_basis_round_trip() {
        let l = g1();
        let back = l.permute(&[2, 0, 1]).unwrap().permute(&[1, 2, 0]).unwrap();
        assert_eq!(back, l);
        let scaled = heisenberg().change_basis(&RatMatrix::diag_int(&[2, 1, 2])).unwrap();
        // [e2', e3'] = [e2, 2 e3] = 2 e1 = e1'
        assert_eq!(scaled.basis_bracket(1, 2), vec![p("1"), p("0"), p("0")]);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-7i64..=7, 1i64..=7).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn rational_algebra(n: usize) -> impl Strategy<Value = LieAlgebra> {
        proptest::collection::vec(small_rat(), n * n * (n - 1) / 2).prop_map(move |cs| {
            let mut l = LieAlgebra::abelian(n).unwrap();
            let mut it = cs.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let v = (0..n).map(|_| Poly::constant(it.next().unwrap())).collect();
                    l.set_bracket(i, j, v).unwrap();
                }
            }
            l
        })
    }

    fn vector(n: usize) -> impl Strategy<Value = Vec<Poly>> {
        proptest::collection::vec(small_rat().prop_map(Poly::constant), n)
    }

    proptest! {
        #[test]
        fn bracket_is_antisymmetric(l in rational_algebra(4), x in vector(4), y in vector(4)) {
            let xy = l.bracket(&x, &y).unwrap();
            let yx = l.bracket(&y, &x).unwrap();
            prop_assert!(xy.iter().zip(&yx).all(|(a, b)| (a + b).is_zero()));
        }

        #[test]
        fn jacobi_survives_relabelling(l in rational_algebra(3), k in 0usize..6) {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let q = l.permute(&perms[k]).unwrap();
            prop_assert_eq!(l.jacobi().all_zero, q.jacobi().all_zero);
            prop_assert_eq!(l.is_unimodular(), q.is_unimodular());
            let none = Bindings::new();
            prop_assert_eq!(l.derived_subalgebra_dim(&none).unwrap(), q.derived_subalgebra_dim(&none).unwrap());
        }
    }
}
