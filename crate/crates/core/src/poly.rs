//! Monomials and sparse polynomials over `X_0, ..., X_n`.
//!
//! Monomials are ordered graded-lexicographically with `X_0 ≺ ... ≺ X_n`:
//! higher total degree wins, ties are broken by the exponent of `X_n`, then
//! `X_{n-1}`, and so on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formulas::{kl_decompose, KlDecomposition, SizeVector};
use crate::gf::{Elem, Field};
use crate::sets::{CartesianSpec, ProjectivePoint};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    pub fn evaluate(&self, field: &Field, coords: &[Elem]) -> Elem {
        self.exponents
            .iter()
            .zip(coords)
            .fold(Elem::ONE, |acc, (&e, &x)| field.mul(acc, field.pow(x, e as u64)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            self.exponents
                .iter()
                .rev()
                .cmp(other.exponents.iter().rev())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "X{i}^{e}")?;
        }
        Ok(())
    }
}

/// All degree-`d` monomials in `X_0, ..., X_n`, largest first.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Monomial> {
    fn fill(var: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == 0 {
            exps[0] = remaining;
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in (0..=remaining).rev() {
            exps[var] = e;
            fill(var - 1, remaining - e, exps, out);
        }
        exps[var] = 0;
    }
    let mut out = Vec::new();
    fill(n, d, &mut vec![0; n + 1], &mut out);
    out
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Elem) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: Elem) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::variable(nvars, i), Elem::ONE)
    }

    /// `X_j - a X_i`.
    pub fn binomial_form(field: &Field, nvars: usize, j: usize, i: usize, a: Elem) -> Self {
        let mut p = Polynomial::variable(nvars, j);
        p.add_term(field, Monomial::variable(nvars, i), field.neg(a));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms, leading monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Elem)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(Elem::ZERO)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.leading_monomial().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, field: &Field, m: Monomial, c: Elem) {
        assert_eq!(m.nvars(), self.nvars, "variable count mismatch");
        if c.is_zero() {
            return;
        }
        let sum = field.add(self.coefficient(&m), c);
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, field: &Field, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m.clone(), c);
        }
        out
    }

    pub fn scale(&self, field: &Field, c: Elem) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, x) in self.terms() {
            out.add_term(field, m.clone(), field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, field: &Field, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(field, m1.mul(m2), field.mul(c1, c2));
            }
        }
        out
    }

    /// Value at an explicit coordinate vector.
    pub fn evaluate_coords(&self, field: &Field, coords: &[Elem]) -> Result<Elem> {
        if coords.len() != self.nvars {
            return Err(Error::VariableMismatch {
                expected: self.nvars,
                found: coords.len(),
            });
        }
        Ok(self.terms().fold(Elem::ZERO, |acc, (m, c)| {
            field.add(acc, field.mul(c, m.evaluate(field, coords)))
        }))
    }

    /// Value at the canonical representative of `point`.
    pub fn evaluate(&self, field: &Field, point: &ProjectivePoint) -> Result<Elem> {
        self.evaluate_coords(field, &point.coordinates())
    }
}

impl fmt::Display for Polynomial {
    /// `coef*X0^a0*...*Xn^an` terms joined by `+`, leading term first; the
    /// zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}*{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Parses the text form. Coefficients are taken as raw encodings and
    /// repeated monomials are rejected, since summing needs a field.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in polynomial {s:?}"));
        let s = s.trim();
        if s == "0" {
            return Err(bad("the zero polynomial carries no variable count"));
        }
        let mut nvars = None;
        let mut terms = BTreeMap::new();
        for term in s.split('+') {
            let mut factors = term.trim().split('*');
            let coef: u32 = factors
                .next()
                .and_then(|c| c.trim().parse().ok())
                .ok_or_else(|| bad("missing coefficient"))?;
            let mut exps = Vec::new();
            for (i, factor) in factors.enumerate() {
                let (var, exp) = factor
                    .trim()
                    .split_once('^')
                    .ok_or_else(|| bad("expected Xi^e"))?;
                if var != format!("X{i}") {
                    return Err(bad("variables must appear as X0..Xn in order"));
                }
                exps.push(exp.parse::<u32>().map_err(|_| bad("bad exponent"))?);
            }
            match nvars {
                None => nvars = Some(exps.len()),
                Some(n) if n != exps.len() => return Err(bad("inconsistent variable count")),
                _ => {}
            }
            if coef == 0 {
                return Err(bad("zero coefficient"));
            }
            if terms
                .insert(Monomial::new(exps), Elem::from_encoding(coef))
                .is_some()
            {
                return Err(bad("repeated monomial"));
            }
        }
        Ok(Polynomial {
            nvars: nvars.unwrap_or(0),
            terms,
        })
    }
}

/// `X_i Π_{a ∈ A_j} (X_j - a X_i)` for every `0 <= i < j <= n`, in
/// lexicographic `(i, j)` order.
pub fn ideal_generators(spec: &CartesianSpec) -> Vec<Polynomial> {
    let field = spec.field();
    let nvars = spec.n() + 1;
    let mut out = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            let mut g = Polynomial::variable(nvars, i);
            for &a in &spec.sets()[j] {
                g = g.mul(field, &Polynomial::binomial_form(field, nvars, j, i, a));
            }
            out.push(g);
        }
    }
    out
}

/// Choices behind the upper-bound witness: anchors `a_1, ..., a_n` with
/// `a_i ∈ A_i` and the set `B ⊆ A_{k+1}` of size `ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessChoices {
    pub anchors: Vec<Elem>,
    pub excluded: Vec<Elem>,
}

impl WitnessChoices {
    /// Anchors 0 and `B` = the `ell` smallest nonzero elements of `A_{k+1}`.
    pub fn default_for(spec: &CartesianSpec, d: u64) -> Result<Self> {
        let sizes = spec.sizes()?;
        let excluded = match witness_shape(&sizes, d)? {
            Some(KlDecomposition { k, ell }) => spec.sets()[k + 1]
                .iter()
                .copied()
                .filter(|a| !a.is_zero())
                .take(ell as usize)
                .collect(),
            None => Vec::new(),
        };
        Ok(WitnessChoices {
            anchors: vec![Elem::ZERO; spec.n()],
            excluded,
        })
    }
}

/// `Some((k, ell))` inside the span, `None` at the top degree `span + 1`.
fn witness_shape(sizes: &SizeVector, d: u64) -> Result<Option<KlDecomposition>> {
    let top = sizes.span() + 1;
    if d < 1 || d > top {
        return Err(Error::DegreeOutOfRange { d, lo: 1, hi: top });
    }
    if d == top {
        Ok(None)
    } else {
        kl_decompose(d, sizes).map(Some)
    }
}

/// `X_0 (Π_{i<=k} Π_{a ≠ a_i} (X_i - a X_0)) (Π_{b ∈ B} (X_{k+1} - b X_0))`.
///
/// It vanishes at infinity and at every affine point except those with
/// `x_i = a_i` for `i <= k` and `x_{k+1} ∉ B`, so its weight is
/// `(d_{k+1} - ell) d_{k+2} ... d_n`. At the top degree all `n` anchors are
/// used and the weight is 1.
pub fn witness_polynomial(
    spec: &CartesianSpec,
    d: u64,
    choices: Option<&WitnessChoices>,
) -> Result<Polynomial> {
    let sizes = spec.sizes()?;
    let shape = witness_shape(&sizes, d)?;
    let default;
    let choices = match choices {
        Some(c) => c,
        None => {
            default = WitnessChoices::default_for(spec, d)?;
            &default
        }
    };
    let n = spec.n();
    let sets = spec.sets();
    if choices.anchors.len() != n {
        return Err(Error::InvalidChoice(format!(
            "expected {n} anchors, found {}",
            choices.anchors.len()
        )));
    }
    for (i, a) in choices.anchors.iter().enumerate() {
        if sets[i + 1].binary_search(a).is_err() {
            return Err(Error::InvalidChoice(format!("anchor {a} is not in A_{}", i + 1)));
        }
    }
    let (full, ell) = match shape {
        Some(KlDecomposition { k, ell }) => (k, ell),
        None => (n, 0),
    };
    if choices.excluded.len() as u64 != ell {
        return Err(Error::InvalidChoice(format!(
            "B must have {ell} elements, found {}",
            choices.excluded.len()
        )));
    }
    let mut seen = choices.excluded.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != choices.excluded.len() {
        return Err(Error::InvalidChoice("B has repeated elements".into()));
    }
    if let Some(b) = choices
        .excluded
        .iter()
        .find(|b| sets[full + 1].binary_search(b).is_err())
    {
        return Err(Error::InvalidChoice(format!("{b} is not in A_{}", full + 1)));
    }

    let field = spec.field();
    let nvars = n + 1;
    let mut f = Polynomial::variable(nvars, 0);
    for i in 1..=full {
        for &a in sets[i].iter().filter(|&&a| a != choices.anchors[i - 1]) {
            f = f.mul(field, &Polynomial::binomial_form(field, nvars, i, 0, a));
        }
    }
    for &b in &choices.excluded {
        f = f.mul(field, &Polynomial::binomial_form(field, nvars, full + 1, 0, b));
    }
    debug_assert_eq!(f.degree(), Some(d as u32));
    Ok(f)
}

/// Counts degree-`d` monomials not divisible by any `X_i X_j^{d_j}`
/// (`i < j`). Such a monomial has at most one exponent at or above its
/// threshold, namely that of its lowest-index variable, so the count runs
/// over that variable and bounded exponents for the later ones.
pub fn footprint_count_direct(sizes: &SizeVector, d: u64) -> u64 {
    fn bounded(dims: &[u64], budget: u64) -> u64 {
        match dims.split_first() {
            None => 1,
            Some((&dj, rest)) => (0..dj.min(budget + 1))
                .map(|a| bounded(rest, budget - a))
                .sum(),
        }
    }
    if d == 0 {
        return 1;
    }
    let all = sizes.as_slice();
    // the lowest-index variable takes d - (sum of the later exponents) >= 1
    (0..all.len()).map(|lead| bounded(&all[lead + 1..], d - 1)).sum()
}
