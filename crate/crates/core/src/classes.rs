//! Decomposition of homogeneous structures into three orthogonal classes and
//! the cyclic condition.

use serde::Serialize;

use crate::error::Result;
use crate::exactalg::{Poly, Rat, RatMatrix};
use crate::geometry::{homogeneous_structure, lowered_brackets, HomStructure, Metric, Tensor};
use crate::liealg::LieAlgebra;

/// `ω(e_i)` for each basis vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Covector(pub Vec<Poly>);

impl Covector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }
}

/// `D_ijk = 𝔖 g([e_i,e_j],e_k)` for every `i < j < k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicDefect {
    pub entries: Vec<((usize, usize, usize), Poly)>,
}

impl CyclicDefect {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, d)| d.is_zero())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<&Poly> {
        self.entries.iter().find(|(t, _)| *t == (i, j, k)).map(|(_, d)| d)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter().map(|(_, d)| d).filter(|d| !d.is_zero())
    }
}

/// Defined for any symmetric Gram, degenerate or not.
pub fn cyclic_defect(l: &LieAlgebra, gram: &RatMatrix) -> CyclicDefect {
    let n = l.dim();
    let lower = |i: usize, j: usize, k: usize| -> Poly {
        l.basis_bracket(i, j)
            .iter()
            .enumerate()
            .filter(|(m, c)| !c.is_zero() && !gram.get(*m, k).is_zero())
            .map(|(m, c)| c.scale(gram.get(m, k)))
            .sum()
    };
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let d = &(&lower(i, j, k) + &lower(j, k, i)) + &lower(k, i, j);
                entries.push(((i, j, k), d));
            }
        }
    }
    CyclicDefect { entries }
}

pub fn is_cyclic(l: &LieAlgebra, gram: &RatMatrix) -> bool {
    cyclic_defect(l, gram).is_zero()
}

/// `g(ad_x y, z) + g(y, ad_x z) = 0` on basis triples.
pub fn is_bi_invariant(l: &LieAlgebra, g: &Metric) -> bool {
    let c = lowered_brackets(l, g);
    let n = l.dim();
    (0..n).all(|i| (0..n).all(|j| (j..n).all(|k| (c.get(&[i, j, k]) + c.get(&[i, k, j])).is_zero())))
}

fn raise_all(t: &Tensor, g: &Metric) -> Tensor {
    let n = t.dim();
    let mut cur = t.clone();
    for slot in 0..3 {
        let mut next = Tensor::zeros(n, 3);
        for idx in cur.indices() {
            let v: Poly = (0..n)
                .filter(|&a| !g.ginv(idx[slot], a).is_zero())
                .map(|a| {
                    let mut moved = idx.clone();
                    moved[slot] = a;
                    cur.get(&moved).scale(g.ginv(idx[slot], a))
                })
                .sum();
            next.set(&idx, v);
        }
        cur = next;
    }
    cur
}

/// `⟨A, B⟩ = Σ G^ia G^jb G^kc A_ijk B_abc`.
pub fn s_inner_product(a: &HomStructure, b: &HomStructure, g: &Metric) -> Poly {
    let braised = raise_all(b.tensor(), g);
    a.tensor().nonzero().map(|(idx, v)| v * braised.get(&idx)).sum()
}

/// `c12(S)_k = Σ G^ij S_ijk`.
pub fn c12(s: &HomStructure, g: &Metric) -> Covector {
    let n = s.dim();
    Covector(
        (0..n)
            .map(|k| {
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !g.ginv(i, j).is_zero())
                    .map(|(i, j)| s.get(i, j, k).scale(g.ginv(i, j)))
                    .sum()
            })
            .collect(),
    )
}

/// `(s1)_ijk = g_ij ω_k - g_ik ω_j`.
pub fn s1_from_omega(omega: &Covector, g: &Metric) -> HomStructure {
    let n = g.dim();
    let mut t = Tensor::zeros(n, 3);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = &omega.0[k].scale(g.g(i, j)) - &omega.0[j].scale(g.g(i, k));
                t.set(&[i, j, k], v);
            }
        }
    }
    HomStructure::new(t).expect("antisymmetric by construction")
}

/// `𝔖 S_ijk` for every index triple.
pub fn cyclic_sum(s: &HomStructure) -> Tensor {
    let n = s.dim();
    let mut t = Tensor::zeros(n, 3);
    for idx in t.indices().collect::<Vec<_>>() {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        t.set(&idx, &(s.get(i, j, k) + s.get(j, k, i)) + s.get(k, i, j));
    }
    t
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ClassFlags {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    pub s1_s2: bool,
    pub s2_s3: bool,
    pub s1_s3: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TVDecomposition {
    pub s1: HomStructure,
    pub s2: HomStructure,
    pub s3: HomStructure,
    pub omega: Covector,
    pub flags: ClassFlags,
}

fn omega_of(s: &HomStructure, g: &Metric) -> Covector {
    let n = s.dim();
    let inv = Rat::new(1, (n as i64 - 1).max(1));
    Covector(c12(s, g).0.iter().map(|c| c.scale(&inv)).collect())
}

fn symmetrized_first_pair_matches(s: &HomStructure, g: &Metric, omega: &Covector) -> bool {
    let n = s.dim();
    let two = Rat::from_int(2);
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let lhs = s.get(i, j, k) + s.get(j, i, k);
                let rhs = &(&omega.0[k].scale(&(g.g(i, j) * &two)) - &omega.0[j].scale(g.g(i, k)))
                    - &omega.0[i].scale(g.g(j, k));
                if !(lhs - rhs).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Membership predicates evaluated from their defining conditions.
pub fn class_flags(s: &HomStructure, g: &Metric) -> ClassFlags {
    let n = s.dim();
    let omega = omega_of(s, g);
    let is_s1 = s1_from_omega(&omega, g) == *s;
    if n < 3 {
        return ClassFlags {
            s1: is_s1,
            s2: s.is_zero(),
            s3: s.is_zero(),
            s1_s2: is_s1,
            s2_s3: s.is_zero(),
            s1_s3: is_s1,
        };
    }
    let cyc = cyclic_sum(s).is_zero();
    let trace_free = omega.is_zero();
    let mut skew = true;
    'outer: for i in 0..n {
        for j in i..n {
            for k in 0..n {
                if !(s.get(i, j, k) + s.get(j, i, k)).is_zero() {
                    skew = false;
                    break 'outer;
                }
            }
        }
    }
    ClassFlags {
        s1: is_s1,
        s2: cyc && trace_free,
        s3: skew,
        s1_s2: cyc,
        s2_s3: trace_free,
        s1_s3: symmetrized_first_pair_matches(s, g, &omega),
    }
}

pub fn tv_decompose(s: &HomStructure, g: &Metric) -> Result<TVDecomposition> {
    let n = s.dim();
    let omega = omega_of(s, g);
    let s1 = s1_from_omega(&omega, g);
    let zero = HomStructure::new(Tensor::zeros(n, 3))?;
    let flags = class_flags(s, g);
    if n < 3 {
        return Ok(TVDecomposition {
            s1: s.clone(),
            s2: zero.clone(),
            s3: zero,
            omega,
            flags,
        });
    }
    let third = Rat::new(1, 3);
    let s3 = HomStructure::new(cyclic_sum(s).map(|v| v.scale(&third)))?;
    let mut rest = Tensor::zeros(n, 3);
    for idx in rest.indices().collect::<Vec<_>>() {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        rest.set(&idx, &(s.get(i, j, k) - s1.get(i, j, k)) - s3.get(i, j, k));
    }
    Ok(TVDecomposition {
        s1,
        s2: HomStructure::new(rest)?,
        s3,
        omega,
        flags,
    })
}

/// Canonical structure of `(L, g)` followed by its decomposition.
pub fn decompose_canonical(l: &LieAlgebra, g: &Metric) -> Result<TVDecomposition> {
    tv_decompose(&homogeneous_structure(l, g)?, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::p;
    use crate::geometry::homogeneous_structure;

    fn alg(n: usize, br: &[(usize, usize, &[&str])]) -> LieAlgebra {
        LieAlgebra::from_brackets(
            n,
            &br.iter()
                .map(|(i, j, v)| (i - 1, j - 1, v.iter().map(|s| p(s)).collect()))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn lor3() -> RatMatrix {
        RatMatrix::diag_int(&[1, 1, -1])
    }

    #[test]
    fn three_dimensional_defects() {
        let g3 = alg(
            3,
            &[
                (1, 2, &["0", "0", "-gamma"]),
                (1, 3, &["0", "-beta", "0"]),
                (2, 3, &["alpha", "0", "0"]),
            ],
        );
        assert_eq!(
            cyclic_defect(&g3, &lor3()).get(0, 1, 2),
            Some(&p("alpha + beta + gamma"))
        );
        let g1 = alg(
            3,
            &[
                (1, 2, &["alpha", "0", "-beta"]),
                (1, 3, &["-alpha", "-beta", "0"]),
                (2, 3, &["beta", "alpha", "alpha"]),
            ],
        );
        assert_eq!(cyclic_defect(&g1, &lor3()).get(0, 1, 2), Some(&p("3*beta")));
        let g6 = alg(3, &[(1, 2, &["0", "1", "1"]), (1, 3, &["0", "1", "1"])]);
        assert_eq!(cyclic_defect(&g6, &lor3()).get(0, 1, 2), Some(&p("-2")));
        assert!(!is_cyclic(&g6, &lor3()));
        let g2 = alg(
            3,
            &[
                (1, 2, &["0", "-gamma", "-beta"]),
                (1, 3, &["0", "-beta", "gamma"]),
                (2, 3, &["-2*beta", "0", "0"]),
            ],
        );
        assert!(is_cyclic(&g2, &lor3()));
        assert!(is_cyclic(&LieAlgebra::abelian(4).unwrap(), &RatMatrix::identity(4)));
    }

    #[test]
    fn four_dimensional_defects() {
        let l = alg(
            4,
            &[
                (1, 2, &["0", "0", "a3", "0"]),
                (2, 3, &["a1", "0", "0", "0"]),
                (3, 1, &["0", "a2", "0", "0"]),
                (1, 4, &["c1", "c2", "c3", "0"]),
                (2, 4, &["p1", "p2", "p3", "0"]),
                (3, 4, &["q1", "q2", "q3", "0"]),
            ],
        );
        let d = cyclic_defect(&l, &RatMatrix::diag_int(&[1, 1, 1, -1]));
        assert_eq!(d.get(0, 1, 2), Some(&p("a1 + a2 + a3")));
        assert_eq!(d.get(0, 1, 3), Some(&p("p1 - c2")));
        assert_eq!(d.get(0, 2, 3), Some(&p("q1 - c3")));
        assert_eq!(d.get(1, 2, 3), Some(&p("q2 - p3")));
    }

    #[test]
    fn inner_product_examples() {
        let g = Metric::diag(&[1, 1, -1]).unwrap();
        let mut t = Tensor::zeros(3, 3);
        t.set(&[0, 1, 2], p("1"));
        t.set(&[0, 2, 1], p("-1"));
        let a = HomStructure::new(t).unwrap();
        assert_eq!(s_inner_product(&a, &a, &g), p("-2"));
        let zero = HomStructure::new(Tensor::zeros(3, 3)).unwrap();
        assert!(s_inner_product(&zero, &a, &g).is_zero());
    }

    #[test]
    fn c12_of_pure_s1_is_scaled_omega() {
        let g = Metric::new(RatMatrix::from_int_rows(&[
            &[0, 1, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 2],
        ]))
        .unwrap();
        let omega = Covector(vec![p("1"), p("-2"), p("x"), p("1/3")]);
        let s = s1_from_omega(&omega, &g);
        let c = c12(&s, &g);
        assert_eq!(
            c.0,
            omega.0.iter().map(|w| w.scale(&Rat::from_int(3))).collect::<Vec<_>>()
        );
        let d = tv_decompose(&s, &g).unwrap();
        assert_eq!(d.omega, omega);
        assert!(d.s2.is_zero() && d.s3.is_zero());
        assert!(d.flags.s1 && !d.flags.s3);
    }

    #[test]
    fn su2_structure_is_totally_skew() {
        let l = alg(
            3,
            &[
                (1, 2, &["0", "0", "1"]),
                (2, 3, &["1", "0", "0"]),
                (3, 1, &["0", "1", "0"]),
            ],
        );
        let g = Metric::diag(&[1, 1, 1]).unwrap();
        let d = decompose_canonical(&l, &g).unwrap();
        assert!(d.s1.is_zero() && d.s2.is_zero());
        assert_eq!(d.s3, homogeneous_structure(&l, &g).unwrap());
        assert!(d.flags.s3 && !d.flags.s1_s2);
        assert!(is_bi_invariant(&l, &g));
    }

    #[test]
    fn heisenberg_is_not_bi_invariant() {
        let h = alg(3, &[(2, 3, &["1", "0", "0"])]);
        assert!(!is_bi_invariant(&h, &Metric::diag(&[1, 1, 1]).unwrap()));
        assert!(is_bi_invariant(
            &LieAlgebra::abelian(3).unwrap(),
            &Metric::diag(&[1, 1, 1]).unwrap()
        ));
    }

    #[test]
    fn cyclic_heisenberg_lorentzian() {
        // g4 with alpha = 0, beta = epsilon = 1
        let l = alg(3, &[(1, 2, &["0", "-1", "1"]), (1, 3, &["0", "-1", "1"])]);
        let g = Metric::diag(&[1, 1, -1]).unwrap();
        let d = decompose_canonical(&l, &g).unwrap();
        assert!(d.s3.is_zero());
        assert!(!homogeneous_structure(&l, &g).unwrap().is_zero());
        assert!(d.flags.s1_s2);
    }

    #[test]
    fn zero_structure_is_everywhere() {
        let g = Metric::diag(&[1, -1, 1]).unwrap();
        let d = tv_decompose(&HomStructure::new(Tensor::zeros(3, 3)).unwrap(), &g).unwrap();
        let f = d.flags;
        assert!(f.s1 && f.s2 && f.s3 && f.s1_s2 && f.s2_s3 && f.s1_s3);
    }

    #[test]
    fn two_dimensional_structures_are_pure_s1() {
        let l = alg(2, &[(1, 2, &["a", "b"])]);
        let g = Metric::diag(&[1, -1]).unwrap();
        let d = decompose_canonical(&l, &g).unwrap();
        assert!(d.flags.s1);
        assert_eq!(s1_from_omega(&d.omega, &g), d.s1);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-7i64..=7, 1i64..=7).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn grams() -> Vec<Metric> {
        vec![
            Metric::diag(&[1, 1, 1, 1]).unwrap(),
            Metric::diag(&[1, 1, 1, -1]).unwrap(),
            Metric::new(RatMatrix::from_int_rows(&[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[0, 0, 0, 1],
                &[0, 0, 1, 0],
            ]))
            .unwrap(),
        ]
    }

    /// Random element of 𝒮(V) for `n = 4`: free entries `S_ijk` with `j < k`.
    fn structure() -> impl Strategy<Value = HomStructure> {
        proptest::collection::vec(small_rat(), 24).prop_map(|v| {
            let mut t = Tensor::zeros(4, 3);
            let mut it = v.into_iter();
            for i in 0..4 {
                for j in 0..4 {
                    for k in j + 1..4 {
                        let x = Poly::constant(it.next().unwrap());
                        t.set(&[i, k, j], -&x);
                        t.set(&[i, j, k], x);
                    }
                }
            }
            HomStructure::new(t).unwrap()
        })
    }

    fn sum(a: &HomStructure, b: &HomStructure) -> HomStructure {
        let mut t = a.tensor().clone();
        for idx in t.indices().collect::<Vec<_>>() {
            t.set(&idx, a.tensor().get(&idx) + b.tensor().get(&idx));
        }
        HomStructure::new(t).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn decomposition_is_orthogonal_and_exact(s in structure(), gi in 0usize..3) {
            let g = &grams()[gi];
            let d = tv_decompose(&s, g).unwrap();
            prop_assert_eq!(&sum(&sum(&d.s1, &d.s2), &d.s3), &s);
            prop_assert!(s_inner_product(&d.s1, &d.s2, g).is_zero());
            prop_assert!(s_inner_product(&d.s1, &d.s3, g).is_zero());
            prop_assert!(s_inner_product(&d.s2, &d.s3, g).is_zero());
            prop_assert_eq!(s_inner_product(&d.s1, &d.s3, g), s_inner_product(&d.s3, &d.s1, g));
        }

        #[test]
        fn projectors_are_idempotent(s in structure(), gi in 0usize..3) {
            let g = &grams()[gi];
            let d = tv_decompose(&s, g).unwrap();
            let d1 = tv_decompose(&d.s1, g).unwrap();
            prop_assert!(d1.flags.s1 && d1.s2.is_zero() && d1.s3.is_zero());
            let d2 = tv_decompose(&d.s2, g).unwrap();
            prop_assert!(d2.flags.s2 && d2.s1.is_zero() && d2.s3.is_zero());
            let d3 = tv_decompose(&d.s3, g).unwrap();
            prop_assert!(d3.flags.s3 && d3.s1.is_zero() && d3.s2.is_zero());
        }

        #[test]
        fn characterizations_match_parts(s in structure(), gi in 0usize..3, drop in 0usize..3) {
            let g = &grams()[gi];
            let d = tv_decompose(&s, g).unwrap();
            let zero = HomStructure::new(Tensor::zeros(4, 3)).unwrap();
            // remove one part so every two-class sum gets exercised
            let parts = [&d.s1, &d.s2, &d.s3];
            let kept: Vec<&HomStructure> = (0..3).map(|k| if k == drop { &zero } else { parts[k] }).collect();
            let t = sum(&sum(kept[0], kept[1]), kept[2]);
            let f = class_flags(&t, g);
            let (z1, z2, z3) = (kept[0].is_zero(), kept[1].is_zero(), kept[2].is_zero());
            prop_assert_eq!(f.s1_s2, z3);
            prop_assert_eq!(f.s2_s3, z1);
            prop_assert_eq!(f.s1_s3, z2);
            prop_assert_eq!(f.s3, z1 && z2);
            prop_assert_eq!(f.s1, z2 && z3);
            prop_assert_eq!(f.s2, z1 && z3);
        }
    }
}
