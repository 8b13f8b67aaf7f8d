use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{display_values, family_seed, sample_point, to_bindings, Sampler, Values, MIN_SAMPLES};
use crate::catalog::{
    catalog, group_name, identify_group_3d, identify_unimodular_3d, spec, FamilyKind, FamilySpec, SideConstraint,
};
use crate::classes::{class_flags, cyclic_defect, is_bi_invariant, is_cyclic, ClassFlags, CyclicDefect};
use crate::error::Result;
use crate::exactalg::{Bindings, Poly, Rat};
use crate::geometry::{curvature, homogeneous_structure, is_flat, is_locally_symmetric, nabla_r, Metric};
use crate::liealg::LieAlgebra;

const MAX_ATTEMPTS: usize = 20_000;
const INSTANCES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "identical")]
    Identical,
    #[serde(rename = "implied+generic")]
    ImpliedGeneric,
    #[serde(rename = "mismatch")]
    Mismatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectEntry {
    /// One-based basis triple.
    pub triple: [usize; 3],
    pub defect: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleStats {
    pub seed: u64,
    pub attempts: usize,
    /// Samples violating the claimed condition.
    pub tested: usize,
    pub nonzero_defect: usize,
    pub counterexample: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CurvatureSummary {
    pub flat: Option<bool>,
    pub locally_symmetric: Option<bool>,
    pub scalar: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionCheck {
    /// `cyclic`, `not-cyclic` or `skipped`.
    pub status: &'static str,
    pub signature: (usize, usize, usize),
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyCheck {
    /// `(bi-invariant ∧ cyclic) ⇔ S = 0` on the symbolic claimed algebra.
    pub symbolic: bool,
    pub instances: usize,
    pub instances_with_zero_structure: usize,
    pub instances_ok: bool,
}

impl ConsistencyCheck {
    pub fn ok(&self) -> bool {
        self.symbolic && self.instances_ok
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GroupSummary {
    pub names: Vec<String>,
    /// Raw sign patterns of the table parameters at the sampled points.
    pub sign_patterns: Vec<String>,
    /// Sampled points whose pattern matches no table row.
    pub unmatched: Vec<String>,
    /// Table lookups agree with the bracket-invariant identification.
    pub cross_check: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub kind: FamilyKind,
    pub discrete: BTreeMap<String, i64>,
    pub provenance: String,
    pub jacobi_ok: bool,
    pub jacobi_expected: bool,
    pub jacobi_unresolved: Vec<String>,
    pub cyclic_defects: Vec<DefectEntry>,
    pub claimed_condition: String,
    pub claimed_residuals: Vec<String>,
    /// The claimed condition makes every defect vanish.
    pub claim_sufficient: bool,
    /// The family's own algebra is cyclic identically.
    pub family_cyclic: bool,
    pub verdict: Verdict,
    pub samples: SampleStats,
    pub curvature: CurvatureSummary,
    pub class_flags: Option<ClassFlags>,
    pub group: GroupSummary,
    pub restriction: Option<RestrictionCheck>,
    pub consistency: ConsistencyCheck,
    pub notes: Vec<String>,
    pub pass: bool,
    #[serde(skip)]
    pub timing_ms: u128,
}

impl VerificationReport {
    pub fn label(&self) -> String {
        if self.discrete.is_empty() {
            self.family.clone()
        } else {
            let d: Vec<String> = self.discrete.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]", self.family, d.join(","))
        }
    }
}

fn defect_entries(d: &CyclicDefect) -> Vec<DefectEntry> {
    d.entries
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|((i, j, k), q)| DefectEntry {
            triple: [i + 1, j + 1, k + 1],
            defect: q.to_string(),
        })
        .collect()
}

/// Every nonzero defect is a rational multiple of a distinct residual and vice versa.
fn syntactic_match(defects: &[Poly], residuals: &[Poly]) -> bool {
    if defects.len() != residuals.len() {
        return false;
    }
    let mut used = vec![false; residuals.len()];
    defects.iter().all(|d| {
        let hit = residuals
            .iter()
            .enumerate()
            .find(|(i, r)| !used[*i] && d.rational_multiple_of(r).is_some());
        match hit {
            Some((i, _)) => {
                used[i] = true;
                true
            }
            None => false,
        }
    })
}

fn reduce(mut r: Poly, moduli: &[Poly]) -> Poly {
    for m in moduli {
        if r.is_zero() {
            break;
        }
        r = r.div_rem(m).1;
    }
    r
}

struct Context<'a> {
    f: &'a FamilySpec,
    fixed: Values,
    bind: Bindings,
    metric: Metric,
    template: LieAlgebra,
    claimed: LieAlgebra,
}

impl<'a> Context<'a> {
    fn new(f: &'a FamilySpec, fixed: Values) -> Result<Self> {
        let bind = to_bindings(&fixed);
        let metric = Metric::new(f.gram())?;
        let template = f.template.substitute(&bind);
        let claimed = f.claimed_algebra().substitute(&bind);
        Ok(Context {
            f,
            fixed,
            bind,
            metric,
            template,
            claimed,
        })
    }

    fn moduli(&self) -> Vec<Poly> {
        let claim = &self.f.claim;
        let sub = |q: &Poly| {
            let b1: Bindings = claim.cyclic.iter().cloned().collect();
            let b2: Bindings = claim.solution.iter().cloned().collect();
            q.substitute(&b1).substitute(&b2).substitute(&self.bind)
        };
        let mut out: Vec<Poly> = claim.extra.iter().map(|q| q.substitute(&self.bind)).collect();
        for c in &self.f.side {
            if let SideConstraint::Equality { poly, .. } = c {
                out.push(sub(poly));
            }
        }
        out.retain(|q| !q.is_zero());
        out
    }

    fn jacobi(&self) -> (bool, Vec<String>) {
        let moduli = self.moduli();
        let unresolved: Vec<String> = self
            .claimed
            .jacobi()
            .residuals
            .into_iter()
            .filter_map(|r| {
                let rem = reduce(r.value.clone(), &moduli);
                (!rem.is_zero()).then(|| {
                    let (i, j, k) = r.triple;
                    format!(
                        "(e{},e{},e{}) on e{}: {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        r.component + 1,
                        r.value
                    )
                })
            })
            .collect();
        (unresolved.is_empty(), unresolved)
    }

    fn residuals(&self) -> Vec<Poly> {
        self.f
            .claim
            .residuals()
            .into_iter()
            .map(|r| r.substitute(&self.bind))
            .filter(|r| !r.is_zero())
            .collect()
    }

    fn sample_violations(&self, seed: u64, defects: &CyclicDefect) -> SampleStats {
        let mut s = Sampler::new(seed);
        let residuals = self.residuals();
        let mut stats = SampleStats {
            seed,
            attempts: 0,
            tested: 0,
            nonzero_defect: 0,
            counterexample: None,
        };
        while stats.tested < MIN_SAMPLES && stats.attempts < MAX_ATTEMPTS {
            stats.attempts += 1;
            let Some(v) = sample_point(self.f, &self.fixed, false, &mut s) else {
                continue;
            };
            let violated = residuals
                .iter()
                .any(|r| r.eval(&v).map(|x| !x.is_zero()).unwrap_or(false));
            if !violated {
                continue;
            }
            stats.tested += 1;
            let nonzero = defects
                .entries
                .iter()
                .any(|(_, d)| d.eval(&v).map(|x| !x.is_zero()).unwrap_or(false));
            if nonzero {
                stats.nonzero_defect += 1;
            } else if stats.counterexample.is_none() {
                stats.counterexample = Some(display_values(&v));
            }
        }
        stats
    }

    fn instances(&self, seed: u64, count: usize) -> Vec<Values> {
        let mut s = Sampler::new(seed ^ 0x5eed);
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < count && attempts < 2_000 {
            attempts += 1;
            if let Some(v) = sample_point(self.f, &self.fixed, true, &mut s) {
                out.push(v);
            }
        }
        out
    }

    fn curvature(&self) -> (CurvatureSummary, Option<ClassFlags>) {
        let mut out = CurvatureSummary::default();
        match curvature(&self.claimed, &self.metric) {
            Ok(c) => {
                out.flat = Some(c.is_zero());
                out.scalar = Some(c.scalar.to_string());
                match nabla_r(&self.claimed, &self.metric) {
                    Ok(n) => out.locally_symmetric = Some(n.is_zero()),
                    Err(e) => out.note = Some(e.to_string()),
                }
            }
            Err(e) => out.note = Some(e.to_string()),
        }
        let flags = homogeneous_structure(&self.claimed, &self.metric)
            .ok()
            .map(|s| class_flags(&s, &self.metric));
        (out, flags)
    }

    fn consistency(&self, instances: &[Values]) -> Result<ConsistencyCheck> {
        let law = |l: &LieAlgebra| -> Result<(bool, bool)> {
            let both = is_bi_invariant(l, &self.metric) && is_cyclic(l, self.metric.gram());
            let zero = homogeneous_structure(l, &self.metric)?.is_zero();
            Ok((both == zero, zero))
        };
        let (symbolic, _) = law(&self.claimed)?;
        let mut zero_count = 0;
        let mut ok = true;
        let mut checked = 0;
        let zero_point = self.zero_instance();
        for v in instances.iter().chain(zero_point.iter()) {
            let l = self.claimed.substitute(&to_bindings(v));
            let (holds, zero) = law(&l)?;
            ok &= holds;
            if zero {
                zero_count += 1;
                ok &= is_flat(&l, &self.metric)? && is_locally_symmetric(&l, &self.metric)?;
            }
            checked += 1;
        }
        Ok(ConsistencyCheck {
            symbolic,
            instances: checked,
            instances_with_zero_structure: zero_count,
            instances_ok: ok,
        })
    }

    /// All free parameters zero, when the side constraints allow it.
    fn zero_instance(&self) -> Option<Values> {
        let mut v = self.fixed.clone();
        for name in self.f.template.params() {
            v.entry(name).or_insert_with(Rat::zero);
        }
        for (k, e) in self.f.claim.solution.iter().chain(self.f.claim.cyclic.iter()) {
            let x = e.eval(&v).ok()?;
            v.insert(k.clone(), x);
        }
        let ok = self.f.side.iter().all(|c| match c {
            SideConstraint::NonZero(q) => q.eval(&v).map(|x| !x.is_zero()).unwrap_or(false),
            SideConstraint::Equality { poly, .. } => poly.eval(&v).map(|x| x.is_zero()).unwrap_or(false),
        });
        ok.then_some(v)
    }

    fn group(&self, instances: &[Values]) -> GroupSummary {
        let mut out = GroupSummary::default();
        let mut names = BTreeSet::new();
        let mut patterns = BTreeSet::new();
        if self.f.dim == 3 {
            let table_vars: &[&str] = match self.f.id {
                "g3" => &["alpha", "beta", "gamma"],
                "g4" => &["epsilon", "alpha", "beta"],
                "3DRie" => &["a1", "a2", "a3"],
                "g1" | "g2" => &["alpha", "beta", "gamma"],
                _ => &[],
            };
            let mut agree = true;
            for v in instances {
                let pat: String = table_vars
                    .iter()
                    .filter_map(|n| v.get(*n))
                    .map(|x| match x.signum() {
                        1 => '+',
                        -1 => '-',
                        _ => '0',
                    })
                    .collect();
                if !pat.is_empty() {
                    patterns.insert(pat.clone());
                }
                let l = self.claimed.substitute(&to_bindings(v));
                let invariant = identify_unimodular_3d(&l).ok();
                match identify_group_3d(self.f.id, &to_bindings(v)) {
                    Ok(name) => {
                        names.insert(name.to_string());
                        agree &= invariant == Some(name);
                    }
                    Err(_) => {
                        out.unmatched
                            .push(format!("{pat} (bracket invariant: {})", invariant.unwrap_or("unknown")));
                    }
                }
            }
            out.cross_check = Some(agree);
        } else {
            for v in instances {
                if let Ok(Some(name)) = group_name(self.f, &to_bindings(v)) {
                    names.insert(name);
                }
            }
        }
        out.unmatched.sort();
        out.unmatched.dedup();
        out.names = names.into_iter().collect();
        out.sign_patterns = patterns.into_iter().collect();
        out
    }

    fn restriction(&self) -> Result<Option<RestrictionCheck>> {
        let Some(h) = self.f.h_span else {
            return Ok(None);
        };
        let gh = self.metric.gram().principal_submatrix(&h);
        let signature = gh.signature()?;
        if signature.2 > 0 {
            return Ok(Some(RestrictionCheck {
                status: "skipped",
                signature,
                reason: Some("degenerate restriction".into()),
            }));
        }
        let restricted = self.claimed.restrict(&h)?;
        let cyclic = is_cyclic(&restricted, &gh);
        Ok(Some(RestrictionCheck {
            status: if cyclic { "cyclic" } else { "not-cyclic" },
            signature,
            reason: None,
        }))
    }
}

fn check_one(f: &FamilySpec, fixed: BTreeMap<String, i64>, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let values: Values = fixed.iter().map(|(k, v)| (k.clone(), Rat::from_int(*v))).collect();
    let cx = Context::new(f, values)?;
    let gram = f.gram();

    let defects = cyclic_defect(&cx.template, &gram);
    let nonzero: Vec<Poly> = defects.nonzero().cloned().collect();
    let residuals = cx.residuals();
    let claimed_cyclic = f
        .template
        .substitute(&f.claim.cyclic.iter().cloned().collect())
        .substitute(&cx.bind);
    let claim_sufficient = is_cyclic(&claimed_cyclic, &gram);
    let family_cyclic = is_cyclic(&cx.claimed, &gram);
    let samples = cx.sample_violations(seed, &defects);
    let verdict = if !claim_sufficient || samples.counterexample.is_some() || samples.tested < MIN_SAMPLES {
        Verdict::Mismatch
    } else if syntactic_match(&nonzero, &residuals) {
        Verdict::Identical
    } else {
        Verdict::ImpliedGeneric
    };

    let (jacobi_ok, jacobi_unresolved) = cx.jacobi();
    let jacobi_expected = f.kind != FamilyKind::Template;
    let (curv, flags) = cx.curvature();
    let inst = cx.instances(seed, INSTANCES);
    let consistency = cx.consistency(&inst)?;
    let group_instances = if f.dim == 3 {
        cx.instances(seed ^ 0x9e0, 24)
    } else {
        inst.clone()
    };
    let group = cx.group(&group_instances);
    let restriction = cx.restriction()?;

    let mut notes: Vec<String> = f.notes.iter().map(|s| s.to_string()).collect();
    if f.kind == FamilyKind::Template {
        notes.push("derivation entries are unconstrained here; Jacobi is imposed by the solution families".into());
    }
    if !f.side.is_empty() {
        let s: Vec<String> = f.side.iter().map(|c| c.to_string()).collect();
        notes.push(format!("side constraints: {}", s.join(", ")));
    }
    let restriction_ok = restriction.as_ref().map(|r| r.status != "not-cyclic").unwrap_or(true);
    let pass = verdict != Verdict::Mismatch
        && (jacobi_ok || !jacobi_expected)
        && family_cyclic
        && restriction_ok
        && consistency.ok()
        && group.cross_check != Some(false);
    Ok(VerificationReport {
        family: f.id.to_string(),
        kind: f.kind,
        discrete: fixed,
        provenance: f.provenance.to_string(),
        jacobi_ok,
        jacobi_expected,
        jacobi_unresolved,
        cyclic_defects: defect_entries(&defects),
        claimed_condition: f.claim.describe(),
        claimed_residuals: residuals.iter().map(Poly::to_string).collect(),
        claim_sufficient,
        family_cyclic,
        verdict,
        samples,
        curvature: curv,
        class_flags: flags,
        group,
        restriction,
        consistency,
        notes,
        pass,
        timing_ms: start.elapsed().as_millis(),
    })
}

fn check_family(index: usize, f: &FamilySpec, seed: u64) -> Result<Vec<VerificationReport>> {
    f.discrete_assignments()
        .into_iter()
        .map(|d| check_one(f, d, family_seed(seed, index)))
        .collect()
}

/// One report per assignment of the family's discrete parameters.
pub fn cmd_check(id: &str, seed: u64) -> Result<Vec<VerificationReport>> {
    let f = spec(id)?;
    let index = catalog().iter().position(|g| g.id == f.id).unwrap_or(0);
    check_family(index, f, seed)
}

/// Whole catalog, checked in parallel and returned in catalog order.
pub fn cmd_check_all(seed: u64) -> Result<Vec<VerificationReport>> {
    let parts: Vec<Result<Vec<VerificationReport>>> = catalog()
        .par_iter()
        .enumerate()
        .map(|(i, f)| check_family(i, f, seed))
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::p;
    use crate::harness::DEFAULT_SEED;

    #[test]
    fn g7_defect_is_gamma() {
        let r = &cmd_check("g7", DEFAULT_SEED).unwrap()[0];
        assert_eq!(r.cyclic_defects.len(), 1);
        assert_eq!(r.cyclic_defects[0].triple, [1, 2, 3]);
        assert_eq!(r.cyclic_defects[0].defect, "gamma");
        assert_eq!(r.verdict, Verdict::Identical);
        assert!(r.pass);
    }

    #[test]
    fn g1_defect_is_three_beta() {
        let r = &cmd_check("g1", DEFAULT_SEED).unwrap()[0];
        assert_eq!(r.cyclic_defects[0].defect, p("3*beta").to_string());
        assert_eq!(r.verdict, Verdict::Identical);
        assert!(r.samples.tested >= MIN_SAMPLES);
    }

    #[test]
    fn g4_reports_both_signs() {
        let rs = cmd_check("g4", DEFAULT_SEED).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(rs.iter().all(|r| r.pass && r.verdict == Verdict::Identical), "{rs:#?}");
    }

    #[test]
    fn syntactic_matching() {
        assert!(syntactic_match(&[p("3*beta")], &[p("beta")]));
        assert!(syntactic_match(&[p("p1 - c2"), p("a")], &[p("a"), p("c2 - p1")]));
        assert!(!syntactic_match(&[p("beta^2")], &[p("beta")]));
        assert!(!syntactic_match(&[p("a"), p("2*a")], &[p("a"), p("b")]));
    }

    #[test]
    fn reduction_modulo_side_equations() {
        let r = p("alpha*gamma*beta - beta^2*delta");
        assert!(reduce(r, &[p("alpha*gamma - beta*delta")]).is_zero());
        assert!(!reduce(p("alpha"), &[p("alpha*gamma - beta*delta")]).is_zero());
    }
}
