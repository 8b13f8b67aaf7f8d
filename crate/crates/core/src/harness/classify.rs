use serde::Serialize;

use super::file::AlgebraFile;
use crate::catalog::identify_unimodular_3d;
use crate::classes::{is_bi_invariant, is_cyclic, ClassFlags};
use crate::error::{Error, Result};
use crate::exactalg::{Bindings, Inertia};
use crate::geometry::{curvature, homogeneous_structure, nabla_r, Metric};

/// Properties of a user-supplied algebra. Symbolic answers hold identically
/// in the unbound parameters; `None` marks what could not be decided.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub n: usize,
    pub unbound_params: Vec<String>,
    pub unimodular: bool,
    pub jacobi: bool,
    pub signature: Inertia,
    pub cyclic: bool,
    pub bi_invariant: Option<bool>,
    pub class_flags: Option<ClassFlags>,
    pub flat: Option<bool>,
    pub locally_symmetric: Option<bool>,
    pub scalar_curvature: Option<String>,
    pub derived_algebra_dim: Option<usize>,
    pub group: Option<String>,
    pub notes: Vec<String>,
}

pub fn cmd_classify(file: &AlgebraFile, bindings: &Bindings) -> Result<ClassifyReport> {
    let (l, gram) = file.build()?;
    for name in bindings.keys() {
        if !file.params.contains(name) {
            return Err(Error::input(format!("--bind {name}"), "not a declared parameter"));
        }
    }
    let l = l.substitute(bindings);
    let signature = gram.signature()?;
    let mut notes = Vec::new();
    let unbound: Vec<String> = l.params().into_iter().collect();
    let jacobi = l.jacobi().all_zero;
    if !jacobi {
        notes.push("Jacobi identity fails; geometric quantities describe the bracket as given".into());
    }
    let mut out = ClassifyReport {
        n: l.dim(),
        unbound_params: unbound.clone(),
        unimodular: l.is_unimodular(),
        jacobi,
        signature,
        cyclic: is_cyclic(&l, &gram),
        bi_invariant: None,
        class_flags: None,
        flat: None,
        locally_symmetric: None,
        scalar_curvature: None,
        derived_algebra_dim: None,
        group: None,
        notes,
    };
    if unbound.is_empty() {
        out.derived_algebra_dim = Some(l.derived_subalgebra_dim(&Bindings::new())?);
        if l.dim() == 3 && jacobi {
            out.group = Some(identify_unimodular_3d(&l)?.to_string());
        }
    } else {
        out.notes.push(format!(
            "parameters {unbound:?} unbound; derived dimension and group need a rational binding"
        ));
    }
    let metric = match Metric::new(gram) {
        Ok(m) => m,
        Err(Error::DegenerateMetric) => {
            out.notes
                .push("DegenerateMetric: only the cyclic defect is defined; partial report".into());
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.bi_invariant = Some(is_bi_invariant(&l, &metric));
    let s = homogeneous_structure(&l, &metric)?;
    out.class_flags = Some(crate::classes::class_flags(&s, &metric));
    match curvature(&l, &metric) {
        Ok(c) => {
            out.flat = Some(c.is_zero());
            out.scalar_curvature = Some(c.scalar.to_string());
            out.locally_symmetric = nabla_r(&l, &metric).ok().map(|t| t.is_zero());
        }
        Err(e) => out.notes.push(e.to_string()),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::p;

    fn file(json: &str) -> AlgebraFile {
        AlgebraFile::from_json(json).unwrap()
    }

    #[test]
    fn heisenberg_euclidean() {
        let f = file(r#"{"n":3,"brackets":[[1,2,3,"1"]],"gram":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#);
        let r = cmd_classify(&f, &Bindings::new()).unwrap();
        assert!(!r.cyclic);
        assert_eq!(r.flat, Some(false));
        assert!(r.unimodular);
        assert_eq!(r.derived_algebra_dim, Some(1));
        assert_eq!(r.group.as_deref(), Some("H₃"));
        assert_eq!(r.scalar_curvature.as_deref(), Some("-1/2"));
    }

    #[test]
    fn g4_flat_cyclic_heisenberg() {
        // g4 with epsilon = 1, alpha = 0, beta = 1
        let f = file(
            r#"{"n":3,"params":["alpha","beta"],
                "brackets":[[1,2,2,"-1"],[1,2,3,"2 - beta"],[1,3,2,"-beta"],[1,3,3,"1"],[2,3,1,"alpha"]],
                "gram":[["1","0","0"],["0","1","0"],["0","0","-1"]]}"#,
        );
        let bind: Bindings = [("alpha".to_string(), p("0")), ("beta".to_string(), p("1"))].into();
        let r = cmd_classify(&f, &bind).unwrap();
        assert!(r.cyclic);
        assert_eq!(r.flat, Some(true));
        assert_eq!(r.group.as_deref(), Some("H₃"));
        assert_eq!(r.signature, (2, 1, 0));
    }

    #[test]
    fn degenerate_gram_gives_partial_report() {
        let f = file(r#"{"n":3,"brackets":[[1,2,3,"1"]],"gram":[["1","0","0"],["0","1","0"],["0","0","0"]]}"#);
        let r = cmd_classify(&f, &Bindings::new()).unwrap();
        assert!(r.bi_invariant.is_none() && r.flat.is_none());
        assert!(r.notes.iter().any(|n| n.contains("DegenerateMetric")));
    }

    #[test]
    fn bindings_must_be_declared() {
        let f = file(r#"{"n":2,"brackets":[[1,2,1,"1"]],"gram":[["1","0"],["0","1"]]}"#);
        let bind: Bindings = [("x".to_string(), p("1"))].into();
        assert!(matches!(cmd_classify(&f, &bind), Err(Error::Input { .. })));
    }
}
