use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat, RatMatrix};
use crate::liealg::LieAlgebra;

/// User-supplied algebra: `brackets` lists `[i, j, k, "c"]` meaning
/// `[e_i, e_j]` has coefficient `c` on `e_k` (one-based, `i < j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub n: usize,
    #[serde(default)]
    pub params: Vec<String>,
    pub brackets: Vec<(usize, usize, usize, String)>,
    pub gram: Vec<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Validates the file and builds the algebra and Gram matrix.
    pub fn build(&self) -> Result<(LieAlgebra, RatMatrix)> {
        let n = self.n;
        if !(2..=8).contains(&n) {
            return Err(Error::input("n", format!("dimension {n} outside 2..=8")));
        }
        let declared: BTreeSet<&str> = self.params.iter().map(String::as_str).collect();
        for (idx, name) in self.params.iter().enumerate() {
            let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::input(
                    format!("params[{idx}]"),
                    format!("{name:?} is not an identifier"),
                ));
            }
        }
        let mut table = vec![vec![vec![Poly::zero(); n]; n]; n];
        let mut seen = BTreeSet::new();
        for (idx, (i, j, k, coeff)) in self.brackets.iter().enumerate() {
            let field = format!("brackets[{idx}]");
            for (name, v) in [("i", i), ("j", j), ("k", k)] {
                if !(1..=n).contains(v) {
                    return Err(Error::input(&field, format!("index {name} = {v} outside 1..={n}")));
                }
            }
            if i >= j {
                return Err(Error::input(&field, format!("requires i < j, got ({i}, {j})")));
            }
            if !seen.insert((*i, *j, *k)) {
                return Err(Error::input(&field, format!("duplicate entry for [e{i},e{j}] on e{k}")));
            }
            let c: Poly = coeff
                .parse()
                .map_err(|e: Error| Error::input(format!("{field}[3]"), e.to_string()))?;
            let unknown: Vec<String> = c
                .variables()
                .into_iter()
                .filter(|v| !declared.contains(v.as_str()))
                .collect();
            if !unknown.is_empty() {
                return Err(Error::input(
                    format!("{field}[3]"),
                    format!("undeclared parameters {unknown:?}"),
                ));
            }
            table[i - 1][j - 1][k - 1] = c;
        }
        let mut l = LieAlgebra::abelian(n)?;
        for i in 0..n {
            for j in i + 1..n {
                l.set_bracket(i, j, table[i][j].clone())?;
            }
        }
        if self.gram.len() != n {
            return Err(Error::input(
                "gram",
                format!("expected {n} rows, found {}", self.gram.len()),
            ));
        }
        let mut rows = Vec::with_capacity(n);
        for (r, row) in self.gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(
                    format!("gram[{r}]"),
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
            let mut out = Vec::with_capacity(n);
            for (c, s) in row.iter().enumerate() {
                let v: Rat = s
                    .trim()
                    .parse()
                    .map_err(|e: Error| Error::input(format!("gram[{r}][{c}]"), e.to_string()))?;
                out.push(v);
            }
            rows.push(out);
        }
        let gram = RatMatrix::from_rows(rows)?;
        if !gram.is_symmetric() {
            return Err(Error::input("gram", "matrix is not symmetric"));
        }
        Ok((l, gram))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = r#"{"n": 3, "brackets": [[1, 2, 3, "1"]], "gram": [["1","0","0"],["0","1","0"],["0","0","1"]]}"#;

    #[test]
    fn parses_heisenberg() {
        let (l, g) = AlgebraFile::from_json(HEIS).unwrap().build().unwrap();
        assert_eq!(l.structure_constant(0, 1, 2), Poly::int(1));
        assert_eq!(l.structure_constant(1, 0, 2), Poly::int(-1));
        assert_eq!(g, RatMatrix::identity(3));
    }

    #[test]
    fn rejections_name_the_field() {
        let bad = HEIS.replace("[1, 2, 3, \"1\"]", "[2, 1, 3, \"1\"]");
        let e = AlgebraFile::from_json(&bad).unwrap().build().unwrap_err();
        assert!(
            matches!(&e, Error::Input { field, .. } if field == "brackets[0]"),
            "{e}"
        );

        let bad = HEIS.replace("\"1\"]]", "\"x\"]]");
        let e = AlgebraFile::from_json(&bad).unwrap().build().unwrap_err();
        assert!(
            matches!(&e, Error::Input { field, .. } if field == "brackets[0][3]"),
            "{e}"
        );

        let bad = HEIS.replace("[\"0\",\"1\",\"0\"]", "[\"0\",\"1/0\",\"0\"]");
        let e = AlgebraFile::from_json(&bad).unwrap().build().unwrap_err();
        assert!(matches!(&e, Error::Input { field, .. } if field == "gram[1][1]"), "{e}");

        let bad = HEIS.replace("[\"0\",\"1\",\"0\"]", "[\"2\",\"1\",\"0\"]");
        let e = AlgebraFile::from_json(&bad).unwrap().build().unwrap_err();
        assert!(matches!(&e, Error::Input { field, .. } if field == "gram"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let e = AlgebraFile::from_json("{\n \"n\": 3,\n \"brackets\": [\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 4, .. }), "{e}");
    }
}
