use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{to_bindings, Sampler, Values};
use crate::catalog::{with_derivation, DERIVATION_PARAMS};
use crate::classes::cyclic_defect;
use crate::error::{Error, Result};
use crate::exactalg::{p, solve_affine, Bindings, Poly, Rat, RatMatrix};
use crate::liealg::LieAlgebra;

/// Evenly spaced rationals `lo, lo + step, ..., <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub lo: Rat,
    pub hi: Rat,
    pub step: Rat,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            lo: Rat::from_int(-2),
            hi: Rat::from_int(2),
            step: Rat::new(1, 2),
        }
    }
}

impl Grid {
    pub fn values(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut x = self.lo.clone();
        while x <= self.hi {
            out.push(x.clone());
            x = &x + &self.step;
        }
        out
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(Error::input("grid", format!("expected lo:hi:step, got {s:?}")));
        };
        let parse = |name: &str, v: &str| {
            v.trim()
                .parse::<Rat>()
                .map_err(|e| Error::input(format!("grid {name}"), e.to_string()))
        };
        let g = Grid {
            lo: parse("lo", lo)?,
            hi: parse("hi", hi)?,
            step: parse("step", step)?,
        };
        if g.step <= 0 || g.hi < g.lo {
            return Err(Error::input("grid", "need lo <= hi and step > 0"));
        }
        Ok(g)
    }
}

struct Branch {
    id: &'static str,
    description: &'static str,
    grid_params: &'static [&'static str],
    /// Parameters fixed by the part of the cyclic condition internal to `h`.
    eliminated: &'static [(&'static str, &'static str)],
    h: LieAlgebra,
    nonzero: &'static [&'static str],
    /// Gram entry `g(e1,e2) = k` with `|k| < 1`.
    k_entry: bool,
    dim_h_prime: Option<usize>,
    expect_witnesses: bool,
}

fn h3(br: &[(usize, usize, [&str; 3])]) -> LieAlgebra {
    let list: Vec<(usize, usize, Vec<Poly>)> = br
        .iter()
        .map(|(i, j, v)| (i - 1, j - 1, v.iter().map(|s| p(s)).collect()))
        .collect();
    LieAlgebra::from_brackets(3, &list).expect("valid template")
}

fn branches() -> Vec<Branch> {
    let dimh2_a = || {
        h3(&[
            (1, 2, ["a1", "a2", "0"]),
            (1, 3, ["b1", "b2", "0"]),
            (2, 3, ["t1", "t2", "0"]),
        ])
    };
    vec![
        Branch {
            id: "4c-dimh2-a",
            description: "dim h' = 2 with h' = span(e1, e2) space-like",
            grid_params: &["a1", "a2", "b1", "b2", "t2"],
            eliminated: &[("t1", "b2")],
            h: dimh2_a(),
            nonzero: &[],
            k_entry: false,
            dim_h_prime: Some(2),
            expect_witnesses: false,
        },
        Branch {
            id: "4c-dimh2-b",
            description: "dim h' = 2 with h' = span(e1, e3) degenerate",
            grid_params: &["a1", "a3", "b1", "b3", "t3"],
            eliminated: &[("t1", "0")],
            h: h3(&[
                (1, 2, ["a1", "0", "a3"]),
                (1, 3, ["b1", "0", "b3"]),
                (2, 3, ["t1", "0", "t3"]),
            ]),
            nonzero: &[],
            k_entry: false,
            dim_h_prime: Some(2),
            expect_witnesses: false,
        },
        Branch {
            id: "4c-dimh3-a",
            description: "dim h' = 3, [e3,e1] = lambda e1, [e3,e2] = -lambda e2, [e2,e1] = e3",
            grid_params: &["lambda", "k"],
            eliminated: &[],
            h: h3(&[
                (1, 2, ["0", "0", "-1"]),
                (1, 3, ["-lambda", "0", "0"]),
                (2, 3, ["0", "lambda", "0"]),
            ]),
            nonzero: &["lambda"],
            k_entry: true,
            dim_h_prime: Some(3),
            expect_witnesses: false,
        },
        Branch {
            id: "4c-dimh3-b",
            description: "dim h' = 3, [e3,e1] = beta e2, [e3,e2] = -beta e1, [e1,e2] = beta e3",
            grid_params: &["beta", "k"],
            eliminated: &[],
            h: h3(&[
                (1, 2, ["0", "0", "beta"]),
                (1, 3, ["0", "-beta", "0"]),
                (2, 3, ["beta", "0", "0"]),
            ]),
            nonzero: &["beta"],
            k_entry: true,
            dim_h_prime: Some(3),
            expect_witnesses: false,
        },
        Branch {
            id: "4c-dimh2-a-weak",
            description: "4c-dimh2-a without the dim h' = 2 requirement; witnesses expected",
            grid_params: &["a1", "a2", "b1", "b2", "t2"],
            eliminated: &[("t1", "b2")],
            h: dimh2_a(),
            nonzero: &[],
            k_entry: false,
            dim_h_prime: None,
            expect_witnesses: true,
        },
    ]
}

pub fn branch_ids() -> Vec<&'static str> {
    branches().iter().map(|b| b.id).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: BTreeMap<String, String>,
    /// A concrete derivation making the point satisfy every constraint.
    pub derivation: BTreeMap<String, String>,
    /// Dimension of the solution space of derivations at this point.
    pub solution_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub branch: String,
    pub description: String,
    pub method: String,
    pub grid: String,
    pub grid_params: Vec<String>,
    pub eliminated: Vec<String>,
    pub seed: u64,
    pub points_tested: usize,
    /// Points passing the conditions on `h` alone, for which derivations were solved.
    pub points_solved: usize,
    pub witnesses: Vec<Witness>,
    pub expect_witnesses: bool,
    pub pass: bool,
}

fn gram_for(k: &Rat) -> RatMatrix {
    let mut g = RatMatrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
    g.set(0, 1, k.clone());
    g.set(1, 0, k.clone());
    g
}

fn det3(m: [[&Poly; 3]; 3]) -> Poly {
    let minor = |a: &Poly, b: &Poly, c: &Poly, d: &Poly| &(a * d) - &(b * c);
    let t0 = m[0][0] * &minor(m[1][1], m[1][2], m[2][1], m[2][2]);
    let t1 = m[0][1] * &minor(m[1][0], m[1][2], m[2][0], m[2][2]);
    let t2 = m[0][2] * &minor(m[1][0], m[1][1], m[2][0], m[2][1]);
    &(&t0 - &t1) + &t2
}

enum Outcome {
    Filtered,
    Solved(Option<Witness>),
}

fn evaluate(b: &Branch, point: &Values, seed: u64) -> Outcome {
    let mut vals = point.clone();
    for (v, e) in b.eliminated {
        let x = p(e).eval(&vals).expect("eliminated expression uses grid params");
        vals.insert(v.to_string(), x);
    }
    if b.nonzero
        .iter()
        .any(|q| p(q).eval(&vals).map(|x| x.is_zero()).unwrap_or(true))
    {
        return Outcome::Filtered;
    }
    let k = if b.k_entry { vals["k"].clone() } else { Rat::zero() };
    if k.abs() >= 1 {
        return Outcome::Filtered;
    }
    let h = b.h.substitute(&to_bindings(&vals));
    if !h.jacobi().all_zero {
        return Outcome::Filtered;
    }
    if let Some(d) = b.dim_h_prime {
        if h.derived_subalgebra_dim(&Bindings::new()).ok() != Some(d) {
            return Outcome::Filtered;
        }
    }
    let gram = gram_for(&k);
    if !cyclic_defect(&h, &gram.principal_submatrix(&[0, 1, 2])).is_zero() {
        return Outcome::Filtered;
    }
    Outcome::Solved(solve_derivations(&h, &gram, point, seed))
}

/// Jacobi and the cyclic condition are affine in the derivation entries once
/// `h` is rational, so the admissible derivations form an affine space.
/// A witness exists iff some 3x3 minor of the bracket matrix is a nonzero
/// polynomial on that space.
fn solve_derivations(h: &LieAlgebra, gram: &RatMatrix, point: &Values, seed: u64) -> Option<Witness> {
    let l = with_derivation(h);
    let vars: Vec<String> = DERIVATION_PARAMS.iter().map(|s| s.to_string()).collect();
    let mut eqs: Vec<Poly> = l.jacobi().residuals.into_iter().map(|r| r.value).collect();
    eqs.extend(cyclic_defect(&l, gram).entries.into_iter().map(|(_, d)| d));
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    for e in eqs.iter().filter(|e| !e.is_zero()) {
        let (row, c) = e.affine_form(&vars).expect("affine in the derivation");
        a.push(row);
        rhs.push(-c);
    }
    let (x0, kernel) = solve_affine(&a, &rhs, vars.len())?;
    let tvars: Vec<String> = (0..kernel.len()).map(|m| format!("t{m}")).collect();
    let general: Bindings = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut q = Poly::constant(x0[i].clone());
            for (m, kv) in kernel.iter().enumerate() {
                if !kv[i].is_zero() {
                    q = &q + &Poly::var(&tvars[m]).scale(&kv[i]);
                }
            }
            (v.clone(), q)
        })
        .collect();
    let lt = l.substitute(&general);
    let rows: Vec<Vec<Poly>> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .map(|(i, j)| lt.basis_bracket(i, j)[..3].to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut minor = None;
    'outer: for r0 in 0..rows.len() {
        for r1 in r0 + 1..rows.len() {
            for r2 in r1 + 1..rows.len() {
                let d = det3([
                    [&rows[r0][0], &rows[r0][1], &rows[r0][2]],
                    [&rows[r1][0], &rows[r1][1], &rows[r1][2]],
                    [&rows[r2][0], &rows[r2][1], &rows[r2][2]],
                ]);
                if !d.is_zero() {
                    minor = Some(d);
                    break 'outer;
                }
            }
        }
    }
    let minor = minor?;
    let mut s = Sampler::new(seed);
    let t: Values = loop {
        let t: Values = tvars.iter().map(|v| (v.clone(), s.rat())).collect();
        if !minor.eval(&t).expect("minor in t").is_zero() {
            break t;
        }
    };
    let derivation: BTreeMap<String, String> = general
        .iter()
        .map(|(v, q)| (v.clone(), q.eval(&t).expect("bound").to_string()))
        .collect();
    Some(Witness {
        point: point.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        derivation,
        solution_dim: kernel.len(),
    })
}

pub fn cmd_search_nonexistence(branch: &str, grid: &Grid, seed: u64) -> Result<SearchReport> {
    let all = branches();
    let b = all
        .iter()
        .find(|b| b.id == branch)
        .ok_or_else(|| Error::UnknownBranch(branch.to_string()))?;
    let values = grid.values();
    let d = b.grid_params.len();
    let total = values.len().pow(d as u32);
    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut idx = i;
            let mut point = Values::new();
            for name in b.grid_params.iter().rev() {
                point.insert(name.to_string(), values[idx % values.len()].clone());
                idx /= values.len();
            }
            evaluate(b, &point, seed ^ i as u64)
        })
        .collect();
    let mut solved = 0;
    let mut witnesses = Vec::new();
    for o in outcomes {
        if let Outcome::Solved(w) = o {
            solved += 1;
            witnesses.extend(w);
        }
    }
    let pass = witnesses.is_empty() != b.expect_witnesses;
    Ok(SearchReport {
        branch: b.id.to_string(),
        description: b.description.to_string(),
        method: "bounded search: exhaustive rational grid on h, derivation entries solved exactly".into(),
        grid: grid.to_string(),
        grid_params: b.grid_params.iter().map(|s| s.to_string()).collect(),
        eliminated: b.eliminated.iter().map(|(v, e)| format!("{v} := {e}")).collect(),
        seed,
        points_tested: total,
        points_solved: solved,
        witnesses,
        expect_witnesses: b.expect_witnesses,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "-2:2:1/2".parse().unwrap();
        assert_eq!(g, Grid::default());
        assert_eq!(g.values().len(), 9);
        assert!("1:0:1".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
    }

    #[test]
    fn dimh3_b_has_no_witness() {
        let r = cmd_search_nonexistence("4c-dimh3-b", &Grid::default(), 1).unwrap();
        assert_eq!(r.points_tested, 81);
        assert_eq!(r.points_solved, 0);
        assert!(r.witnesses.is_empty() && r.pass);
    }

    #[test]
    fn weak_branch_finds_witnesses_on_a_small_grid() {
        let g: Grid = "-1:1:1".parse().unwrap();
        let r = cmd_search_nonexistence("4c-dimh2-a-weak", &g, 1).unwrap();
        assert!(!r.witnesses.is_empty());
        let w = &r.witnesses[0];
        let mut vals: Values = w.point.iter().map(|(k, v)| (k.clone(), v.parse().unwrap())).collect();
        vals.insert("t1".into(), vals["b2"].clone());
        vals.extend(w.derivation.iter().map(|(k, v)| (k.clone(), v.parse::<Rat>().unwrap())));
        let b = &branches()[4];
        let l = with_derivation(&b.h).substitute(&to_bindings(&vals));
        assert!(l.jacobi().all_zero);
        assert!(cyclic_defect(&l, &gram_for(&Rat::zero())).is_zero());
        assert_eq!(l.derived_subalgebra_dim(&Bindings::new()).unwrap(), 3);
    }

    #[test]
    fn unknown_branch() {
        assert!(matches!(
            cmd_search_nonexistence("nope", &Grid::default(), 0),
            Err(Error::UnknownBranch(_))
        ));
    }
}
