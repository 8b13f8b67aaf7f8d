//! Left-invariant pseudo-Riemannian geometry on a Lie algebra: Levi-Civita
//! connection, the homogeneous structure it defines, and curvature.
//!
//! Conventions: `R(x,y) = ∇_x∇_y - ∇_y∇_x - ∇_[x,y]`, `R_ijkl = g(R(e_i,e_j)e_k, e_l)`,
//! sectional curvature `K(x,y) = g(R(x,y)y, x) / (g(x,x)g(y,y) - g(x,y)^2)` and
//! `ric(x,y) = tr(z -> R(z,x)y)`.

use crate::error::{Error, Result};
use crate::exactalg::{invert_gram, Inertia, Poly, Rat, RatMatrix};
use crate::liealg::LieAlgebra;

pub const DEFAULT_DEGREE_BOUND: u32 = 8;

/// Dense tensor with all indices ranging over `0..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    n: usize,
    rank: usize,
    data: Vec<Poly>,
}

impl Tensor {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Tensor {
            n,
            rank,
            data: vec![Poly::zero(); n.pow(rank as u32)],
        }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, idx: &[usize]) -> &Poly {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Poly) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.data.iter().map(Poly::total_degree).max().unwrap_or(0)
    }

    /// Every multi-index in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.data.len()).map(move |mut o| {
            let mut idx = vec![0; self.rank];
            for slot in idx.iter_mut().rev() {
                *slot = o % self.n;
                o /= self.n;
            }
            idx
        })
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &Poly)> + '_ {
        self.indices().zip(self.data.iter()).filter(|(_, v)| !v.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Tensor {
        Tensor {
            n: self.n,
            rank: self.rank,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Constant symmetric nondegenerate bilinear form on the Lie algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Metric {
    g: RatMatrix,
    ginv: RatMatrix,
    eps: Option<Vec<i32>>,
}

impl Metric {
    pub fn new(g: RatMatrix) -> Result<Self> {
        let ginv = invert_gram(&g)?;
        let eps = if g.is_diagonal() {
            (0..g.rows())
                .map(|i| {
                    let d = g.get(i, i);
                    if d.abs().is_one() {
                        Some(d.signum())
                    } else {
                        None
                    }
                })
                .collect()
        } else {
            None
        };
        Ok(Metric { g, ginv, eps })
    }

    pub fn diag(signs: &[i64]) -> Result<Self> {
        Metric::new(RatMatrix::diag_int(signs))
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.g
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.ginv
    }

    /// `ε_i = g(e_i, e_i)` when the basis is pseudo-orthonormal.
    pub fn eps(&self) -> Option<&[i32]> {
        self.eps.as_deref()
    }

    pub fn signature(&self) -> Inertia {
        self.g.signature().expect("gram is symmetric")
    }

    pub fn g(&self, i: usize, j: usize) -> &Rat {
        self.g.get(i, j)
    }

    pub fn ginv(&self, i: usize, j: usize) -> &Rat {
        self.ginv.get(i, j)
    }
}

fn check_dims(l: &LieAlgebra, g: &Metric) -> Result<()> {
    if l.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: g.dim(),
        });
    }
    Ok(())
}

/// Left-invariant affine connection: `∇_{e_i} e_j = Σ_l Γ^l_ij e_l`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connection {
    /// Stored as `[i][j][l]`.
    gamma: Tensor,
}

impl Connection {
    pub fn from_tensor(gamma: Tensor) -> Self {
        assert_eq!(gamma.rank(), 3);
        Connection { gamma }
    }

    pub fn zero(n: usize) -> Self {
        Connection {
            gamma: Tensor::zeros(n, 3),
        }
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `Γ^l_ij`.
    pub fn coeff(&self, i: usize, j: usize, l: usize) -> &Poly {
        self.gamma.get(&[i, j, l])
    }

    pub fn tensor(&self) -> &Tensor {
        &self.gamma
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.is_zero()
    }

    pub fn difference(&self, other: &Connection) -> Connection {
        let mut out = self.gamma.clone();
        for idx in self.gamma.indices() {
            let v = self.gamma.get(&idx) - other.gamma.get(&idx);
            out.set(&idx, v);
        }
        Connection { gamma: out }
    }

    /// `T(e_i, e_j) = ∇_i e_j - ∇_j e_i - [e_i, e_j]` stored as `[i][j][l]`.
    pub fn torsion(&self, l: &LieAlgebra) -> Tensor {
        let n = self.dim();
        let mut t = Tensor::zeros(n, 3);
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    let v = &(self.coeff(i, j, m) - self.coeff(j, i, m)) - &l.structure_constant(i, j, m);
                    t.set(&[i, j, m], v);
                }
            }
        }
        t
    }

    /// `R^l_ijk` stored as `[i][j][k][l]`.
    pub fn curvature_tensor(&self, alg: &LieAlgebra) -> Tensor {
        let n = self.dim();
        let mut r = Tensor::zeros(n, 4);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c: Vec<Poly> = (0..n).map(|m| alg.structure_constant(i, j, m)).collect();
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = Poly::zero();
                        for m in 0..n {
                            let a = self.coeff(j, k, m) * self.coeff(i, m, l);
                            let b = self.coeff(i, k, m) * self.coeff(j, m, l);
                            acc = &acc + &(&a - &b);
                            if !c[m].is_zero() {
                                acc = &acc - &(&c[m] * self.coeff(m, k, l));
                            }
                        }
                        r.set(&[i, j, k, l], acc);
                    }
                }
            }
        }
        r
    }
}

/// Fully covariant `S_ijk = g(S_{e_i} e_j, e_k)` with `S_ijk = -S_ikj`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomStructure {
    s: Tensor,
}

impl HomStructure {
    pub fn new(s: Tensor) -> Result<Self> {
        if s.rank() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: s.rank(),
            });
        }
        let n = s.dim();
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    if !(s.get(&[i, j, k]) + s.get(&[i, k, j])).is_zero() {
                        return Err(Error::NotHomogeneousStructure);
                    }
                }
            }
        }
        Ok(HomStructure { s })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        self.s.get(&[i, j, k])
    }

    pub fn tensor(&self) -> &Tensor {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero()
    }

    /// Raise the last index: the connection `X ↦ S_X` as coefficients.
    pub fn raised(&self, g: &Metric) -> Connection {
        let n = self.dim();
        let mut gamma = Tensor::zeros(n, 3);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let v: Poly = (0..n)
                        .filter(|&k| !g.ginv(k, l).is_zero())
                        .map(|k| self.get(i, j, k).scale(g.ginv(k, l)))
                        .sum();
                    gamma.set(&[i, j, l], v);
                }
            }
        }
        Connection { gamma }
    }
}

/// `g([e_i, e_j], e_k)` stored as `[i][j][k]`.
pub fn lowered_brackets(l: &LieAlgebra, g: &Metric) -> Tensor {
    let n = l.dim();
    let mut c = Tensor::zeros(n, 3);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let br = l.basis_bracket(i, j);
            for k in 0..n {
                let v: Poly = (0..n)
                    .filter(|&m| !br[m].is_zero() && !g.g(m, k).is_zero())
                    .map(|m| br[m].scale(g.g(m, k)))
                    .sum();
                c.set(&[i, j, k], v);
            }
        }
    }
    c
}

/// Koszul formula for left-invariant fields.
pub fn homogeneous_structure(l: &LieAlgebra, g: &Metric) -> Result<HomStructure> {
    check_dims(l, g)?;
    let n = l.dim();
    let c = lowered_brackets(l, g);
    let half = Rat::new(1, 2);
    let mut s = Tensor::zeros(n, 3);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = &(c.get(&[i, j, k]) - c.get(&[j, k, i])) + c.get(&[k, i, j]);
                s.set(&[i, j, k], v.scale(&half));
            }
        }
    }
    HomStructure::new(s)
}

pub fn levi_civita(l: &LieAlgebra, g: &Metric) -> Result<Connection> {
    Ok(homogeneous_structure(l, g)?.raised(g))
}

/// Checks that `∇ - S` has vanishing coefficients, torsion `-[·,·]` and zero curvature.
pub fn cartan_schouten_check(l: &LieAlgebra, g: &Metric) -> Result<bool> {
    let lc = levi_civita(l, g)?;
    let s = homogeneous_structure(l, g)?.raised(g);
    let tilde = lc.difference(&s);
    if !tilde.is_zero() {
        return Ok(false);
    }
    let t = tilde.torsion(l);
    let n = l.dim();
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                if !(t.get(&[i, j, m]) + &l.structure_constant(i, j, m)).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(tilde.curvature_tensor(l).is_zero())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curvature {
    /// `R^l_ijk` as `[i][j][k][l]`.
    pub rup: Tensor,
    /// `R_ijkl`.
    pub rdown: Tensor,
    pub ricci: Vec<Vec<Poly>>,
    pub scalar: Poly,
}

impl Curvature {
    pub fn is_zero(&self) -> bool {
        self.rup.is_zero()
    }
}

fn guard(t: &Tensor, bound: u32) -> Result<()> {
    let degree = t.max_degree();
    if degree > bound {
        return Err(Error::SymbolicOverflow { degree, bound });
    }
    Ok(())
}

pub fn curvature(l: &LieAlgebra, g: &Metric) -> Result<Curvature> {
    curvature_with_bound(l, g, DEFAULT_DEGREE_BOUND)
}

pub fn curvature_with_bound(l: &LieAlgebra, g: &Metric, bound: u32) -> Result<Curvature> {
    check_dims(l, g)?;
    let lc = levi_civita(l, g)?;
    guard(lc.tensor(), bound)?;
    // R's degree is at most twice the connection's
    if 2 * lc.tensor().max_degree() > bound {
        return Err(Error::SymbolicOverflow {
            degree: 2 * lc.tensor().max_degree(),
            bound,
        });
    }
    let n = l.dim();
    let rup = lc.curvature_tensor(l);
    let mut rdown = Tensor::zeros(n, 4);
    for idx in rup.indices() {
        let (i, j, k, m) = (idx[0], idx[1], idx[2], idx[3]);
        let v: Poly = (0..n)
            .filter(|&p| !g.g(p, m).is_zero())
            .map(|p| rup.get(&[i, j, k, p]).scale(g.g(p, m)))
            .sum();
        rdown.set(&[i, j, k, m], v);
    }
    let ricci: Vec<Vec<Poly>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| (0..n).map(|m| rup.get(&[m, j, k, m]).clone()).sum())
                .collect()
        })
        .collect();
    let scalar = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .filter(|&(j, k)| !g.ginv(j, k).is_zero())
        .map(|(j, k)| ricci[j][k].scale(g.ginv(j, k)))
        .sum();
    Ok(Curvature {
        rup,
        rdown,
        ricci,
        scalar,
    })
}

/// `K(x, y)` for rational vectors spanning a nondegenerate plane.
pub fn sectional_curvature(c: &Curvature, g: &Metric, x: &[Rat], y: &[Rat]) -> Result<Poly> {
    let n = g.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len().min(y.len()),
        });
    }
    let gr = g.gram();
    let q = &(gr.bilinear(x, x) * gr.bilinear(y, y)) - &(gr.bilinear(x, y).pow(2));
    let Some(qinv) = q.recip() else {
        return Err(Error::DegeneratePlane);
    };
    let mut num = Poly::zero();
    for (idx, r) in c.rdown.nonzero() {
        let w = &(&x[idx[0]] * &y[idx[1]]) * &(&y[idx[2]] * &x[idx[3]]);
        if !w.is_zero() {
            num = &num + &r.scale(&w);
        }
    }
    Ok(num.scale(&qinv))
}

/// `(∇_{e_m} R)_ijkl` stored as `[m][i][j][k][l]`.
pub fn nabla_r(l: &LieAlgebra, g: &Metric) -> Result<Tensor> {
    let c = curvature(l, g)?;
    let lc = levi_civita(l, g)?;
    let n = l.dim();
    let r = &c.rdown;
    let mut out = Tensor::zeros(n, 5);
    for m in 0..n {
        for idx in r.indices() {
            let mut acc = Poly::zero();
            for p in 0..n {
                for slot in 0..4 {
                    let gm = lc.coeff(m, idx[slot], p);
                    if gm.is_zero() {
                        continue;
                    }
                    let mut moved = idx.clone();
                    moved[slot] = p;
                    acc = &acc - &(gm * r.get(&moved));
                }
            }
            let mut full = vec![m];
            full.extend_from_slice(&idx);
            out.set(&full, acc);
        }
    }
    Ok(out)
}

pub fn is_flat(l: &LieAlgebra, g: &Metric) -> Result<bool> {
    Ok(curvature(l, g)?.is_zero())
}

pub fn is_locally_symmetric(l: &LieAlgebra, g: &Metric) -> Result<bool> {
    Ok(nabla_r(l, g)?.is_zero())
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

    fn heisenberg() -> LieAlgebra {
        alg(3, &[(2, 3, &["1", "0", "0"])])
    }

    fn e(i: usize) -> Vec<Rat> {
        (0..3).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect()
    }

    fn euclid() -> Metric {
        Metric::diag(&[1, 1, 1]).unwrap()
    }

    fn lor() -> Metric {
        Metric::diag(&[1, 1, -1]).unwrap()
    }

    #[test]
    fn metric_caches_inverse_and_signs() {
        let g = lor();
        assert_eq!(g.eps(), Some(&[1, 1, -1][..]));
        assert_eq!(g.signature(), (2, 1, 0));
        assert!(Metric::new(RatMatrix::diag_int(&[2, 1, 1])).unwrap().eps().is_none());
        assert_eq!(Metric::diag(&[1, 1, 0]), Err(Error::DegenerateMetric));
    }

    #[test]
    fn abelian_is_flat_and_symmetric() {
        let a = LieAlgebra::abelian(3).unwrap();
        let g = Metric::new(RatMatrix::from_int_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, -3]])).unwrap();
        assert!(levi_civita(&a, &g).unwrap().is_zero());
        assert!(homogeneous_structure(&a, &g).unwrap().is_zero());
        assert!(cartan_schouten_check(&a, &g).unwrap());
        let c = curvature(&a, &g).unwrap();
        assert!(c.is_zero() && c.scalar.is_zero());
        assert!(is_flat(&a, &g).unwrap());
        assert!(is_locally_symmetric(&a, &g).unwrap());
    }

    #[test]
    fn heisenberg_connection() {
        let lc = levi_civita(&heisenberg(), &euclid()).unwrap();
        let half = p("1/2");
        assert_eq!(lc.coeff(1, 2, 0), &half);
        assert_eq!(lc.coeff(2, 0, 1), &half);
        assert_eq!(lc.coeff(0, 2, 1), &half);
        let s = homogeneous_structure(&heisenberg(), &euclid()).unwrap();
        assert_eq!(s.get(1, 2, 0), &half);
        assert_eq!(s.get(1, 0, 2), &p("-1/2"));
        for (idx, v) in s.tensor().nonzero() {
            let mut sorted = idx.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 1, 2]);
            assert!(v == &half || v == &p("-1/2"));
        }
        assert!(cartan_schouten_check(&heisenberg(), &euclid()).unwrap());
    }

    #[test]
    fn su2_connection_is_half_bracket() {
        let l = alg(
            3,
            &[
                (1, 2, &["0", "0", "lambda"]),
                (2, 3, &["lambda", "0", "0"]),
                (3, 1, &["0", "lambda", "0"]),
            ],
        );
        let lc = levi_civita(&l, &euclid()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(lc.coeff(i, j, k), &l.structure_constant(i, j, k).scale(&Rat::new(1, 2)));
                }
            }
        }
    }

    #[test]
    fn heisenberg_curvature() {
        let (h, g) = (heisenberg(), euclid());
        let c = curvature(&h, &g).unwrap();
        assert_eq!(sectional_curvature(&c, &g, &e(1), &e(2)).unwrap(), p("-3/4"));
        assert_eq!(sectional_curvature(&c, &g, &e(0), &e(1)).unwrap(), p("1/4"));
        assert_eq!(sectional_curvature(&c, &g, &e(0), &e(2)).unwrap(), p("1/4"));
        assert_eq!(c.scalar, p("-1/2"));
        let nr = nabla_r(&h, &g).unwrap();
        assert!(!nr.is_zero());
        assert!(!is_flat(&h, &g).unwrap());
        assert!(!is_locally_symmetric(&h, &g).unwrap());
    }

    #[test]
    fn sectional_curvature_depends_on_plane_only() {
        let (h, g) = (heisenberg(), euclid());
        let c = curvature(&h, &g).unwrap();
        let x: Vec<Rat> = [1, 2, 0].iter().map(|&v| Rat::from_int(v)).collect();
        let y: Vec<Rat> = [0, 1, 3].iter().map(|&v| Rat::from_int(v)).collect();
        let x2: Vec<Rat> = x.iter().zip(&y).map(|(a, b)| a * Rat::from_int(2) + b).collect();
        let y2: Vec<Rat> = x.iter().zip(&y).map(|(a, b)| a - b * Rat::from_int(3)).collect();
        assert_eq!(
            sectional_curvature(&c, &g, &x, &y).unwrap(),
            sectional_curvature(&c, &g, &x2, &y2).unwrap()
        );
        assert_eq!(sectional_curvature(&c, &g, &x, &x), Err(Error::DegeneratePlane));
    }

    #[test]
    fn null_plane_is_degenerate() {
        let g = lor();
        let c = curvature(&heisenberg(), &g).unwrap();
        let null: Vec<Rat> = [0, 1, 1].iter().map(|&v| Rat::from_int(v)).collect();
        assert_eq!(sectional_curvature(&c, &g, &e(0), &null), Err(Error::DegeneratePlane));
    }

    #[test]
    fn g7_family_flat_points() {
        // [e1,e2] = -αe1-βe2-βe3, [e1,e3] = αe1+βe2+βe3, [e2,e3] = γe1+δe2+δe3
        let g7 = alg(
            3,
            &[
                (1, 2, &["-alpha", "-beta", "-beta"]),
                (1, 3, &["alpha", "beta", "beta"]),
                (2, 3, &["gamma", "delta", "delta"]),
            ],
        );
        let b: crate::exactalg::Bindings = [("alpha", "0"), ("gamma", "0"), ("delta", "1")]
            .iter()
            .map(|(k, v)| (k.to_string(), p(v)))
            .collect();
        assert!(is_flat(&g7.substitute(&b), &lor()).unwrap());
        let c = curvature(&g7, &lor()).unwrap();
        assert!(!c.is_zero());
    }

    #[test]
    fn degree_guard() {
        let l = alg(3, &[(1, 2, &["0", "0", "a^3"]), (2, 3, &["a", "0", "0"])]);
        assert!(matches!(
            curvature_with_bound(&l, &euclid(), 4),
            Err(Error::SymbolicOverflow { .. })
        ));
        assert!(curvature_with_bound(&l, &euclid(), 6).is_ok());
    }

    #[test]
    fn rejects_non_antisymmetric_structure() {
        let mut t = Tensor::zeros(2, 3);
        t.set(&[0, 0, 1], p("1"));
        assert_eq!(HomStructure::new(t), Err(Error::NotHomogeneousStructure));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-7i64..=7, 1i64..=7).prop_map(|(n, d)| Rat::new(n, d))
    }

    /// `R^2 ⋊ D` plus a random nondegenerate symmetric Gram.
    fn instance() -> impl Strategy<Value = (LieAlgebra, Metric)> {
        (
            proptest::collection::vec(small_rat(), 4),
            proptest::collection::vec(small_rat(), 6),
        )
            .prop_filter_map("degenerate gram", |(d, gv)| {
                let dm = vec![
                    vec![Poly::constant(d[0].clone()), Poly::constant(d[1].clone())],
                    vec![Poly::constant(d[2].clone()), Poly::constant(d[3].clone())],
                ];
                let l = LieAlgebra::abelian(2).unwrap().semidirect_extend(&dm).unwrap();
                let rows = vec![
                    vec![gv[0].clone(), gv[1].clone(), gv[2].clone()],
                    vec![gv[1].clone(), gv[3].clone(), gv[4].clone()],
                    vec![gv[2].clone(), gv[4].clone(), gv[5].clone()],
                ];
                let g = Metric::new(RatMatrix::from_rows(rows).ok()?).ok()?;
                Some((l, g))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn koszul_identities((l, g) in instance()) {
            let s = homogeneous_structure(&l, &g).unwrap();
            let c = lowered_brackets(&l, &g);
            let lc = levi_civita(&l, &g).unwrap();
            let t = lc.torsion(&l);
            prop_assert!(t.is_zero());
            for i in 0..3 { for j in 0..3 { for k in 0..3 {
                prop_assert!((s.get(i, j, k) + s.get(i, k, j)).is_zero());
                let rhs = &(c.get(&[i, j, k]) - c.get(&[j, k, i])) + c.get(&[k, i, j]);
                prop_assert_eq!(s.get(i, j, k).scale(&Rat::from_int(2)), rhs);
            }}}
        }

        #[test]
        fn curvature_symmetries((l, g) in instance()) {
            let c = curvature(&l, &g).unwrap();
            let r = &c.rdown;
            for i in 0..3 { for j in 0..3 { for k in 0..3 { for m in 0..3 {
                prop_assert!((r.get(&[i, j, k, m]) + r.get(&[j, i, k, m])).is_zero());
                prop_assert!((r.get(&[i, j, k, m]) + r.get(&[i, j, m, k])).is_zero());
                prop_assert_eq!(r.get(&[i, j, k, m]), r.get(&[k, m, i, j]));
                let bianchi = &(r.get(&[i, j, k, m]) + r.get(&[j, k, i, m])) + r.get(&[k, i, j, m]);
                prop_assert!(bianchi.is_zero());
            }}}}
            let trace: Poly = (0..3).flat_map(|j| (0..3).map(move |k| (j, k)))
                .map(|(j, k)| c.ricci[j][k].scale(g.ginv(j, k))).sum();
            prop_assert_eq!(trace, c.scalar.clone());
            for j in 0..3 { for k in 0..3 {
                prop_assert_eq!(&c.ricci[j][k], &c.ricci[k][j]);
            }}
        }
    }
}
