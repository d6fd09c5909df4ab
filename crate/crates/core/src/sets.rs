//! Projective nested cartesian sets `X = [A_0 x ... x A_n]` and affine
//! cartesian products.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::SizeVector;
use crate::gf::{Elem, Field};

/// The tuple `(A_0, ..., A_n)` of subsets of one ambient field.
///
/// Each set is kept sorted by encoding and duplicate free. Construction only
/// checks that the elements belong to the field; the nested conditions are
/// reported by [`CartesianSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartesianSpec {
    field: Arc<Field>,
    sets: Vec<Vec<Elem>>,
}

/// A canonical point `(0 : ... : 0 : 1 : a_{i+1} : ... : a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    pub pivot: usize,
    pub tail: Vec<Elem>,
}

impl ProjectivePoint {
    pub fn coordinates(&self) -> Vec<Elem> {
        let mut coords = vec![Elem::ZERO; self.pivot];
        coords.push(Elem::ONE);
        coords.extend_from_slice(&self.tail);
        coords
    }

    /// Scales `coords` so that the first nonzero entry is 1; `None` for the
    /// zero vector.
    pub fn canonicalize(field: &Field, coords: &[Elem]) -> Option<Self> {
        let pivot = coords.iter().position(|c| !c.is_zero())?;
        let inv = field.inv(coords[pivot]).expect("pivot is nonzero");
        Some(ProjectivePoint {
            pivot,
            tail: coords[pivot + 1..]
                .iter()
                .map(|&c| field.mul(c, inv))
                .collect(),
        })
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coordinates().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", coords.join(":"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    ZeroMembership,
    SizeOrder,
    Closure,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::ZeroMembership => "zero-membership",
            ViolationKind::SizeOrder => "size-order",
            ViolationKind::Closure => "closure",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Set indices involved (for closure: `[j, i - 1]`).
    pub indices: Vec<usize>,
    /// Offending elements (for closure: `[a, b, a * b]`).
    pub witnesses: Vec<Elem>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    /// `A_i = K_i` for a tower of subfields with `d_{i+1} = d_i^{r_i}` and
    /// `q = d_n^{r_n}`; `exponents` holds `r_0, ..., r_n`.
    ProductOfFields { exponents: Vec<u32> },
    NestedGeneral,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::ProductOfFields { exponents } => {
                let r: Vec<String> = exponents.iter().map(|r| r.to_string()).collect();
                write!(f, "product_of_fields({})", r.join(","))
            }
            Classification::NestedGeneral => f.write_str("nested_general"),
        }
    }
}

impl CartesianSpec {
    pub fn new(field: Arc<Field>, sets: Vec<Vec<Elem>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidSpec("at least one set is required".into()));
        }
        let mut clean = Vec::with_capacity(sets.len());
        for (i, set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidSpec(format!("A_{i} is empty")));
            }
            for &a in &set {
                field.elem(a.encoding())?;
            }
            let sorted: BTreeSet<Elem> = set.into_iter().collect();
            clean.push(sorted.into_iter().collect());
        }
        Ok(CartesianSpec { field, sets: clean })
    }

    /// Builds a spec from raw encodings.
    pub fn from_encodings(field: Arc<Field>, sets: &[Vec<u32>]) -> Result<Self> {
        let sets = sets
            .iter()
            .map(|s| s.iter().map(|&e| Elem::from_encoding(e)).collect())
            .collect();
        Self::new(field, sets)
    }

    /// `A_i = K` for all `i`, i.e. the whole projective space.
    pub fn projective_space(field: Arc<Field>, n: usize) -> Self {
        let all: Vec<Elem> = field.elements().collect();
        CartesianSpec {
            sets: vec![all; n + 1],
            field,
        }
    }

    /// `A_i` = the subfield of order `orders[i]`.
    pub fn subfield_tower(field: Arc<Field>, orders: &[u32]) -> Result<Self> {
        let sets = orders
            .iter()
            .map(|&d| field.subfield_elements(d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, sets)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn sets(&self) -> &[Vec<Elem>] {
        &self.sets
    }

    /// Projective dimension `n`.
    pub fn n(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn raw_sizes(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.len() as u64).collect()
    }

    /// Size vector of a normalized spec.
    pub fn sizes(&self) -> Result<SizeVector> {
        SizeVector::new(self.raw_sizes())
    }

    /// Checks `0 ∈ A_i`, size monotonicity (leading `{0}` sets aside) and
    /// `A_j A_{i-1} ⊆ A_j` for `1 <= i <= j <= n`, collecting every failure.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, set) in self.sets.iter().enumerate() {
            if set.binary_search(&Elem::ZERO).is_err() {
                violations.push(Violation {
                    kind: ViolationKind::ZeroMembership,
                    indices: vec![i],
                    witnesses: vec![],
                    detail: format!("0 is not in A_{i}"),
                });
            }
        }

        let sizes = self.raw_sizes();
        let lead = sizes.iter().take_while(|&&d| d == 1).count();
        // A singleton after the leading run always shows up as a decrease.
        for i in lead..sizes.len().saturating_sub(1) {
            if sizes[i] > sizes[i + 1] {
                violations.push(Violation {
                    kind: ViolationKind::SizeOrder,
                    indices: vec![i, i + 1],
                    witnesses: vec![],
                    detail: format!(
                        "|A_{i}| = {} exceeds |A_{}| = {}",
                        sizes[i],
                        i + 1,
                        sizes[i + 1]
                    ),
                });
            }
        }

        for j in 1..self.sets.len() {
            let target = &self.sets[j];
            for k in 0..j {
                let witness = target.iter().find_map(|&a| {
                    self.sets[k].iter().find_map(|&b| {
                        let ab = self.field.mul(a, b);
                        target.binary_search(&ab).is_err().then_some((a, b, ab))
                    })
                });
                if let Some((a, b, ab)) = witness {
                    violations.push(Violation {
                        kind: ViolationKind::Closure,
                        indices: vec![j, k],
                        witnesses: vec![a, b, ab],
                        detail: format!("{a} * {b} = {ab} is not in A_{j} ({a} in A_{j}, {b} in A_{k})"),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Drops leading `{0}` sets, which leave the code unchanged.
    pub fn normalize(&self) -> Result<CartesianSpec> {
        let lead = self.sets.iter().take_while(|s| s.len() == 1).count();
        if lead == self.sets.len() {
            return Err(Error::EmptyProjectiveSet);
        }
        if let Some(i) = (lead..self.sets.len()).find(|&i| self.sets[i].len() == 1) {
            return Err(Error::NonLeadingSingleton(i));
        }
        if let Some(i) = (0..lead).find(|&i| self.sets[i][0] != Elem::ZERO) {
            return Err(Error::InvalidSpec(format!(
                "leading singleton A_{i} must be {{0}}"
            )));
        }
        Ok(CartesianSpec {
            field: self.field.clone(),
            sets: self.sets[lead..].to_vec(),
        })
    }

    /// `B_j = a_j^{-1} A_j` for nonzero `a_j ∈ A_j`.
    pub fn scale(&self, scalars: &[Elem]) -> Result<CartesianSpec> {
        if scalars.len() != self.sets.len() {
            return Err(Error::LengthMismatch {
                expected: self.sets.len(),
                found: scalars.len(),
            });
        }
        let mut sets = Vec::with_capacity(self.sets.len());
        for (index, (set, &a)) in self.sets.iter().zip(scalars).enumerate() {
            if a.is_zero() {
                return Err(Error::InvalidScalar {
                    index,
                    reason: "scalar is zero".into(),
                });
            }
            if set.binary_search(&a).is_err() {
                return Err(Error::InvalidScalar {
                    index,
                    reason: format!("{a} is not an element of the set"),
                });
            }
            let inv = self.field.inv(a)?;
            sets.push(set.iter().map(|&x| self.field.mul(x, inv)).collect());
        }
        CartesianSpec::new(self.field.clone(), sets)
    }

    /// The spec with `A_0` replaced.
    pub fn with_first_set(&self, first: Vec<Elem>) -> Result<CartesianSpec> {
        let mut sets = self.sets.clone();
        sets[0] = first;
        CartesianSpec::new(self.field.clone(), sets)
    }

    /// `[A_1 x ... x A_n]`, the points at infinity of `X`.
    pub fn tail(&self) -> Option<CartesianSpec> {
        (self.sets.len() > 1).then(|| CartesianSpec {
            field: self.field.clone(),
            sets: self.sets[1..].to_vec(),
        })
    }

    /// Canonical representatives, pivot-major then lexicographic tails. The
    /// tails with pivot `i` range over `A_{i+1} x ... x A_n`; pivots whose set
    /// has no nonzero element contribute nothing.
    pub fn projective_points(&self) -> Vec<ProjectivePoint> {
        let mut points = Vec::new();
        for pivot in 0..self.sets.len() {
            if self.sets[pivot].iter().all(|a| a.is_zero()) {
                continue;
            }
            for tail in affine_points(&self.sets[pivot + 1..]) {
                points.push(ProjectivePoint { pivot, tail });
            }
        }
        points
    }

    /// Product of subfields, or the general nested case.
    pub fn classify(&self) -> Classification {
        let p = self.field.characteristic();
        let mut logs = Vec::with_capacity(self.sets.len());
        for set in &self.sets {
            let d = set.len() as u32;
            match self.field.subfield_elements(d) {
                Ok(sub) if &sub == set => {
                    let mut e = 0;
                    let mut x = d;
                    while x > 1 {
                        x /= p;
                        e += 1;
                    }
                    logs.push(e);
                }
                _ => return Classification::NestedGeneral,
            }
        }
        logs.push(self.field.degree());
        if logs.windows(2).any(|w| w[1] % w[0] != 0) {
            return Classification::NestedGeneral;
        }
        Classification::ProductOfFields {
            exponents: logs.windows(2).map(|w| w[1] / w[0]).collect(),
        }
    }
}

/// Full product `A_1 x ... x A_n` in lexicographic encoding order.
pub fn affine_points(sets: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::with_capacity(sets.len())];
    for set in sets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |&a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// `{0} ∪ <g>`, the cyclic subgroup generated by `g` together with zero.
pub fn subgroup_with_zero(field: &Field, g: Elem) -> Result<Vec<Elem>> {
    if g.is_zero() {
        return Err(Error::InvalidSpec("subgroup generator must be nonzero".into()));
    }
    field.elem(g.encoding())?;
    let mut out = BTreeSet::from([Elem::ZERO]);
    let mut x = Elem::ONE;
    loop {
        out.insert(x);
        x = field.mul(x, g);
        if x == Elem::ONE {
            break;
        }
    }
    Ok(out.into_iter().collect())
}
