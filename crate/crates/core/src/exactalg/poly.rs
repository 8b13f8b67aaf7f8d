//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic (total degree first, then lexicographic with
//! alphabetically earlier variable names ranking higher). Zero coefficients
//! are never stored, so two polynomials are equal iff their maps are equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use super::rat::Rat;
use crate::error::Error;

/// Variable name.
pub type Var = Arc<str>;

/// Substitution map: variable name to replacement polynomial.
pub type Bindings = BTreeMap<String, Poly>;

/// Product of variable powers. Pairs are sorted by name; exponents are positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(name: &str) -> Self {
        Monomial {
            powers: vec![(Arc::from(name), 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, e)| *e).sum()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.powers
            .iter()
            .find(|(v, _)| v.as_ref() == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() && j < other.powers.len() {
            let (a, ea) = &self.powers[i];
            let (b, eb) = &other.powers[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.powers[i..]);
        out.extend_from_slice(&other.powers[j..]);
        Monomial { powers: out }
    }

    /// `Some(self / other)` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.powers {
            let need = match other.powers.get(j) {
                Some((w, f)) if w == v => {
                    j += 1;
                    *f
                }
                Some((w, _)) if w < v => return None,
                _ => 0,
            };
            if need > *e {
                return None;
            }
            if e - need > 0 {
                out.push((v.clone(), e - need));
            }
        }
        if j < other.powers.len() {
            return None;
        }
        Some(Monomial { powers: out })
    }

    fn without(&self, name: &str) -> Monomial {
        Monomial {
            powers: self
                .powers
                .iter()
                .filter(|(v, _)| v.as_ref() != name)
                .cloned()
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.powers.get(i), other.powers.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.powers.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn int(v: i64) -> Self {
        Poly::constant(Rat::from_int(v))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rat::one());
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a variable-free polynomial.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Variables that occur with nonzero coefficient, sorted by name.
    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.powers.iter().map(|(v, _)| v.to_string()))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(name)).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replace every bound variable by its binding and expand.
    /// Unbound variables stay symbolic.
    pub fn substitute(&self, bindings: &Bindings) -> Poly {
        if bindings.is_empty() || self.is_zero() {
            return self.clone();
        }
        let mut powers_cache: BTreeMap<(String, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Poly::constant(c.clone());
            for (v, e) in &m.powers {
                match bindings.get(v.as_ref()) {
                    Some(b) => {
                        let key = (v.to_string(), *e);
                        let pw = powers_cache.entry(key).or_insert_with(|| b.pow(*e)).clone();
                        factor = &factor * &pw;
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let rest = Monomial { powers: kept };
            for (n, a) in factor.terms {
                out.add_term(n.mul(&rest), a);
            }
        }
        out
    }

    /// Evaluate with rational values; `None` lists the unbound variables.
    pub fn eval(&self, values: &BTreeMap<String, Rat>) -> Result<Rat, Vec<String>> {
        let mut acc = Rat::zero();
        let mut missing = BTreeSet::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.powers {
                match values.get(v.as_ref()) {
                    Some(x) => t = t * x.pow(*e),
                    None => {
                        missing.insert(v.to_string());
                    }
                }
            }
            acc += &t;
        }
        if missing.is_empty() {
            Ok(acc)
        } else {
            Err(missing.into_iter().collect())
        }
    }

    /// Write `self = a * v + b` with `v` absent from `a` and `b`.
    /// Returns `None` when `v` occurs with degree above one.
    pub fn split_linear(&self, v: &str) -> Option<(Poly, Poly)> {
        let mut a = Poly::zero();
        let mut b = Poly::zero();
        for (m, c) in &self.terms {
            match m.degree_in(v) {
                0 => b.add_term(m.clone(), c.clone()),
                1 => a.add_term(m.without(v), c.clone()),
                _ => return None,
            }
        }
        Some((a, b))
    }

    /// Coefficients of an affine form in `vars`: `self = sum coeffs[i]*vars[i] + constant`.
    /// `None` if some term is nonlinear or mentions a variable outside `vars`.
    pub fn affine_form(&self, vars: &[String]) -> Option<(Vec<Rat>, Rat)> {
        let mut coeffs = vec![Rat::zero(); vars.len()];
        let mut constant = Rat::zero();
        for (m, c) in &self.terms {
            match m.powers.as_slice() {
                [] => constant = c.clone(),
                [(v, 1)] => {
                    let idx = vars.iter().position(|w| w.as_str() == v.as_ref())?;
                    coeffs[idx] = c.clone();
                }
                _ => return None,
            }
        }
        Some((coeffs, constant))
    }

    /// Multivariate division by a single polynomial: returns `(quotient, remainder)`
    /// with no remainder term divisible by the leading monomial of `divisor`.
    /// A single polynomial is a Groebner basis of the ideal it generates, so
    /// `remainder == 0` decides membership in that principal ideal.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return (Poly::zero(), self.clone()),
        };
        let inv = lc.recip().expect("nonzero leading coefficient");
        let mut p = self.clone();
        let mut q = Poly::zero();
        let mut r = Poly::zero();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lm) {
                Some(qm) => {
                    let qc = &c * &inv;
                    p = &p - &divisor.mul_term(&qm, &qc);
                    q.add_term(qm, qc);
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, c);
                }
            }
        }
        (q, r)
    }

    /// `Some(k)` when `self == k * other` for a nonzero rational `k`.
    pub fn rational_multiple_of(&self, other: &Poly) -> Option<Rat> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m0, c0) = self.terms.iter().next()?;
        let k = c0 / other.terms.get(m0)?;
        for (m, c) in &other.terms {
            if self.terms.get(m)? != &(c * &k) {
                return None;
            }
        }
        Some(k)
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(v: i64) -> Self {
        Poly::int(v)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            for (m, c) in p.terms {
                acc.add_term(m, c);
            }
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rat),
    Ident(String),
    Star,
    Caret,
    Plus,
    Minus,
}

fn tokenize(s: &str) -> Result<Vec<(Token, usize)>, Error> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            b'^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            b'+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(Error::parse("decimal literals are not accepted", i));
                }
                let lit = &s[start..i];
                let r = lit
                    .parse::<Rat>()
                    .map_err(|_| Error::parse(format!("bad rational literal {lit:?}"), start))?;
                out.push((Token::Num(r), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(s[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::parse(
                    format!("unexpected character {:?}", s[i..].chars().next().unwrap_or('?')),
                    i,
                ))
            }
        }
    }
    Ok(out)
}

impl FromStr for Poly {
    type Err = Error;

    /// Sum of terms such as `3/2*alpha^2*beta - c2 + 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::parse("empty polynomial", 0));
        }
        let mut pos = 0;
        let mut out = Poly::zero();
        let mut first = true;
        while pos < toks.len() {
            let mut sign = Rat::one();
            match toks[pos].0 {
                Token::Plus if !first => pos += 1,
                Token::Minus => {
                    sign = -sign;
                    pos += 1;
                }
                _ if first => {}
                _ => return Err(Error::parse("expected '+' or '-'", toks[pos].1)),
            }
            first = false;
            let mut coeff = sign;
            let mut mono = Monomial::one();
            let mut expect_factor = true;
            while expect_factor {
                let (tok, at) = toks
                    .get(pos)
                    .cloned()
                    .ok_or_else(|| Error::parse("unexpected end of input", s.len()))?;
                match tok {
                    Token::Num(r) => {
                        coeff = coeff * r;
                        pos += 1;
                    }
                    Token::Ident(name) => {
                        pos += 1;
                        let mut e = 1u32;
                        if let Some((Token::Caret, _)) = toks.get(pos) {
                            pos += 1;
                            match toks.get(pos) {
                                Some((Token::Num(r), p)) => {
                                    if !r.is_integer() || r.signum() < 0 {
                                        return Err(Error::parse("exponent must be a natural number", *p));
                                    }
                                    e = r.to_f64() as u32;
                                    pos += 1;
                                }
                                _ => return Err(Error::parse("expected exponent after '^'", at)),
                            }
                        }
                        for _ in 0..e {
                            mono = mono.mul(&Monomial::var(&name));
                        }
                    }
                    _ => return Err(Error::parse("expected number or parameter name", at)),
                }
                expect_factor = matches!(toks.get(pos), Some((Token::Star, _)));
                if expect_factor {
                    pos += 1;
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

/// Parse a polynomial literal, panicking on malformed input. For static catalog data.
pub fn p(s: &str) -> Poly {
    s.parse()
        .unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bind(pairs: &[(&str, &str)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), p(v))).collect()
    }

    #[test]
    fn substitution_cancels_cyclic_condition() {
        let cond = p("alpha + 2*beta");
        assert!(cond.substitute(&bind(&[("alpha", "-2*beta")])).is_zero());
        assert!(p("0").substitute(&Bindings::new()).is_zero());
        let q = &p("beta - gamma") * &p("delta");
        assert!(q.substitute(&bind(&[("beta", "gamma")])).is_zero());
    }

    #[test]
    fn zero_tests() {
        assert!(p("0").is_zero());
        assert!(!p("alpha + beta + gamma").is_zero());
        let c = &(&p("alpha + beta") - &p("alpha")) - &p("beta");
        assert!(c.is_zero());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let q = p("3/2*alpha^2*beta - c2 + 1");
        assert_eq!(q.to_string(), "3/2*alpha^2*beta - c2 + 1");
        assert_eq!(q.to_string().parse::<Poly>().unwrap(), q);
        assert_eq!(p("-x*y*x").to_string(), "-x^2*y");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match "alpha + 1.5".parse::<Poly>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 9),
            other => panic!("unexpected {other:?}"),
        }
        assert!("alpha +".parse::<Poly>().is_err());
        assert!("alpha beta".parse::<Poly>().is_err());
        assert!("(alpha)".parse::<Poly>().is_err());
    }

    #[test]
    fn graded_order() {
        // total degree dominates, then alphabetically earlier variables rank higher
        assert!(Monomial::var("z").mul(&Monomial::var("z")) > Monomial::var("a"));
        assert!(Monomial::var("a") > Monomial::var("b"));
        let ab = Monomial::var("a").mul(&Monomial::var("b"));
        let bb = Monomial::var("b").mul(&Monomial::var("b"));
        assert!(ab > bb);
    }

    #[test]
    fn division_by_single_polynomial() {
        let f = p("alpha*p2 + beta*p3");
        let g = &f * &p("c1 - 2*alpha");
        let (q, r) = g.div_rem(&f);
        assert!(r.is_zero());
        assert_eq!(q, p("c1 - 2*alpha"));
        let (_, r) = p("alpha*p2").div_rem(&f);
        assert!(!r.is_zero());
    }

    #[test]
    fn affine_forms_and_linear_splits() {
        let vars: Vec<String> = ["c1", "c2"].iter().map(|s| s.to_string()).collect();
        let (coeffs, k) = p("2*c1 - c2 + 3").affine_form(&vars).unwrap();
        assert_eq!(coeffs, vec![Rat::from_int(2), Rat::from_int(-1)]);
        assert_eq!(k, Rat::from_int(3));
        assert!(p("c1*c2").affine_form(&vars).is_none());
        assert!(p("c3").affine_form(&vars).is_none());
        let (a, b) = p("alpha*gamma + beta*delta").split_linear("gamma").unwrap();
        assert_eq!(a, p("alpha"));
        assert_eq!(b, p("beta*delta"));
    }

    #[test]
    fn rational_multiples() {
        assert_eq!(p("3*beta").rational_multiple_of(&p("beta")), Some(Rat::from_int(3)));
        assert_eq!(
            p("alpha + 2*beta - 2*epsilon").rational_multiple_of(&p("-1/2*alpha - beta + epsilon")),
            Some(Rat::from_int(-2))
        );
        assert_eq!(p("alpha + beta").rational_multiple_of(&p("alpha")), None);
    }
}
