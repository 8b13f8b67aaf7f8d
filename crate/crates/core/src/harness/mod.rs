//! Verification campaigns over the catalog, user-file classification,
//! bounded nonexistence searches and aggregate reports.

mod check;
mod classify;
mod file;
mod report;
mod search;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{FamilySpec, SideConstraint, Substitution};
use crate::exactalg::{Bindings, Poly, Rat};

pub use check::{
    cmd_check, cmd_check_all, ConsistencyCheck, CurvatureSummary, DefectEntry, GroupSummary, RestrictionCheck,
    SampleStats, Verdict, VerificationReport,
};
pub use classify::{cmd_classify, ClassifyReport};
pub use file::AlgebraFile;
pub use report::{cmd_report, Report, ReportFormat, SCHEMA};
pub use search::{branch_ids, cmd_search_nonexistence, Grid, SearchReport, Witness};

pub const DEFAULT_SEED: u64 = 20_240_521;
pub const MIN_SAMPLES: usize = 100;

/// Rational values assigned to parameters.
pub type Values = BTreeMap<String, Rat>;

/// Seeded source of small rationals `a/b` with `|a| <= 7`, `1 <= b <= 7`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rat(&mut self) -> Rat {
        Rat::new(self.rng.gen_range(-7..=7), self.rng.gen_range(1..=7))
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

pub fn to_bindings(v: &Values) -> Bindings {
    v.iter().map(|(k, r)| (k.clone(), Poly::constant(r.clone()))).collect()
}

pub fn display_values(v: &Values) -> BTreeMap<String, String> {
    v.iter().map(|(k, r)| (k.clone(), r.to_string())).collect()
}

fn eval(q: &Poly, v: &Values) -> Option<Rat> {
    q.eval(v).ok()
}

fn substitute_all(q: &Poly, subs: &[&Substitution]) -> Poly {
    subs.iter().fold(q.clone(), |acc, s| {
        let b: Bindings = s.iter().cloned().collect();
        acc.substitute(&b)
    })
}

/// Draws a point of `f`'s template with the discrete values `fixed`.
///
/// With `claimed` the claim is imposed: its substituted variables are
/// computed from the drawn ones. Side constraints are enforced either way;
/// `None` means the draw was rejected.
pub fn sample_point(f: &FamilySpec, fixed: &Values, claimed: bool, s: &mut Sampler) -> Option<Values> {
    let claim_subs: Vec<&Substitution> = if claimed {
        vec![&f.claim.cyclic, &f.claim.solution]
    } else {
        vec![]
    };
    let claim_keys: Vec<&String> = claim_subs.iter().flat_map(|s| s.iter().map(|(v, _)| v)).collect();
    let solved: Vec<&String> = f
        .side
        .iter()
        .filter_map(|c| match c {
            SideConstraint::Equality { solve_for, .. } if !claim_keys.contains(&solve_for) => Some(solve_for),
            _ => None,
        })
        .collect();
    let mut vals = fixed.clone();
    for name in f.template.params() {
        if !fixed.contains_key(&name) && !claim_keys.contains(&&name) && !solved.contains(&&name) {
            vals.insert(name, s.rat());
        }
    }
    for c in &f.side {
        if let SideConstraint::Equality { poly, solve_for } = c {
            if claim_keys.contains(&solve_for) {
                continue;
            }
            let q = substitute_all(poly, &claim_subs);
            let (a, b) = q.split_linear(solve_for)?;
            let (a, b) = (eval(&a, &vals)?, eval(&b, &vals)?);
            let x = if !a.is_zero() {
                -(b / a)
            } else if b.is_zero() {
                s.rat()
            } else {
                return None;
            };
            vals.insert(solve_for.clone(), x);
        }
    }
    if claimed {
        for (v, e) in &f.claim.solution {
            let x = eval(e, &vals)?;
            vals.insert(v.clone(), x);
        }
        for (v, e) in &f.claim.cyclic {
            let x = eval(e, &vals)?;
            vals.insert(v.clone(), x);
        }
    }
    for c in &f.side {
        let ok = match c {
            SideConstraint::NonZero(q) => !eval(q, &vals)?.is_zero(),
            SideConstraint::Equality { poly, .. } => eval(poly, &vals)?.is_zero(),
        };
        if !ok {
            return None;
        }
    }
    Some(vals)
}

/// Stable per-family seed.
pub fn family_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}
