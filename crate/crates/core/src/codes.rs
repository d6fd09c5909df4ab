//! Evaluation codes: generator matrices, elimination, encoding and row-space
//! comparison.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::{monomial_basis, Monomial, Polynomial};
use crate::sets::{affine_points, CartesianSpec, ProjectivePoint};

/// Reduced row echelon basis of a row space. Row `i` has a 1 at `pivots[i]`
/// and zeros at every other pivot column; pivots increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Vec<Elem>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Evaluations of every degree-`d` monomial (largest first) at a fixed point
/// list. Stored unreduced; the echelon form is computed once on demand.
#[derive(Debug)]
pub struct GeneratorMatrix {
    field: Arc<Field>,
    degree: u32,
    monomials: Vec<Monomial>,
    rows: Vec<Vec<Elem>>,
    ncols: usize,
    echelon: OnceLock<Echelon>,
}

impl Clone for GeneratorMatrix {
    fn clone(&self) -> Self {
        let echelon = OnceLock::new();
        if let Some(e) = self.echelon.get() {
            let _ = echelon.set(e.clone());
        }
        GeneratorMatrix {
            field: self.field.clone(),
            degree: self.degree,
            monomials: self.monomials.clone(),
            rows: self.rows.clone(),
            ncols: self.ncols,
            echelon,
        }
    }
}

impl GeneratorMatrix {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.monomials.first().map_or(0, Monomial::nvars)
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn echelon(&self) -> &Echelon {
        self.echelon
            .get_or_init(|| eliminate(&self.field, &self.rows, self.ncols, false).0)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// `Σ message_i · echelon_row_i`.
    pub fn encode(&self, message: &[Elem]) -> Result<Codeword> {
        let basis = self.echelon();
        if message.len() != basis.rank() {
            return Err(Error::LengthMismatch {
                expected: basis.rank(),
                found: message.len(),
            });
        }
        let mut out = vec![Elem::ZERO; self.ncols];
        for (&c, row) in message.iter().zip(&basis.rows) {
            self.field.add_scaled(&mut out, c, row);
        }
        Ok(Codeword(out))
    }

    /// A polynomial whose evaluation is `encode(message)`.
    pub fn polynomial_for(&self, message: &[Elem]) -> Result<Polynomial> {
        let (basis, transform) = eliminate(&self.field, &self.rows, self.ncols, true);
        if message.len() != basis.rank() {
            return Err(Error::LengthMismatch {
                expected: basis.rank(),
                found: message.len(),
            });
        }
        let mut combo = vec![Elem::ZERO; self.rows.len()];
        for (&c, t) in message.iter().zip(&transform) {
            self.field.add_scaled(&mut combo, c, t);
        }
        let mut f = Polynomial::zero(self.nvars());
        for (m, c) in self.monomials.iter().zip(combo) {
            f.add_term(&self.field, m.clone(), c);
        }
        Ok(f)
    }

    /// Text form: header `p m_ext n d nrows ncols`, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            self.field.characteristic(),
            self.field.degree(),
            self.nvars().saturating_sub(1),
            self.degree,
            self.nrows(),
            self.ncols
        );
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|e| e.encoding().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parsed matrix file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub p: u32,
    pub m_ext: u32,
    pub n: usize,
    pub d: u32,
    pub rows: Vec<Vec<Elem>>,
    pub ncols: usize,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<MatrixFile> {
        let bad = |msg: String| Error::Parse(format!("matrix file: {msg}"));
        let mut lines = text.lines();
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| bad("missing header".into()))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad header token {t:?}"))))
            .collect::<Result<_>>()?;
        let [p, m_ext, n, d, nrows, ncols] = header[..] else {
            return Err(bad(format!("header has {} fields, expected 6", header.len())));
        };
        let rows: Vec<Vec<Elem>> = lines
            .map(|line| {
                line.split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map(Elem::from_encoding)
                            .map_err(|_| bad(format!("bad entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if rows.len() as u64 != nrows {
            return Err(bad(format!("expected {nrows} rows, found {}", rows.len())));
        }
        if let Some(row) = rows.iter().find(|r| r.len() as u64 != ncols) {
            return Err(bad(format!("row of length {} in a {ncols}-column matrix", row.len())));
        }
        Ok(MatrixFile {
            p: p as u32,
            m_ext: m_ext as u32,
            n: n as usize,
            d: d as u32,
            rows,
            ncols: ncols as usize,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword(pub Vec<Elem>);

impl Codeword {
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|e| !e.is_zero()).count()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Rows are reduced in insertion order, so each stored row is zero at every
/// earlier pivot; a final back-substitution yields the RREF. With `track`,
/// also returns each RREF row as a combination of the input rows.
fn eliminate(
    field: &Field,
    rows: &[Vec<Elem>],
    ncols: usize,
    track: bool,
) -> (Echelon, Vec<Vec<Elem>>) {
    let nrows = rows.len();
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut combos: Vec<Vec<Elem>> = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        if basis.len() == ncols {
            break;
        }
        let mut v = row.clone();
        let mut combo = Vec::new();
        if track {
            combo = vec![Elem::ZERO; nrows];
            combo[r] = Elem::ONE;
        }
        for (i, (b, &p)) in basis.iter().zip(&pivots).enumerate() {
            let c = v[p];
            if !c.is_zero() {
                let neg = field.neg(c);
                field.add_scaled(&mut v[p..], neg, &b[p..]);
                if track {
                    field.add_scaled(&mut combo, neg, &combos[i]);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let inv = field.inv(v[p]).expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        if track {
            for x in combo.iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        basis.push(v);
        pivots.push(p);
        combos.push(combo);
    }

    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let mut rows: Vec<Vec<Elem>> = order.iter().map(|&i| std::mem::take(&mut basis[i])).collect();
    let mut combos: Vec<Vec<Elem>> = order.iter().map(|&i| std::mem::take(&mut combos[i])).collect();
    let pivots: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();
    for i in (0..rows.len()).rev() {
        let (above, rest) = rows.split_at_mut(i);
        let (cabove, crest) = combos.split_at_mut(i);
        for (r, row) in above.iter_mut().enumerate() {
            let c = row[pivots[i]];
            if !c.is_zero() {
                let neg = field.neg(c);
                let p = pivots[i];
                field.add_scaled(&mut row[p..], neg, &rest[0][p..]);
                if track {
                    field.add_scaled(&mut cabove[r], neg, &crest[0]);
                }
            }
        }
    }
    (Echelon { rows, pivots }, combos)
}

/// Reduced row echelon form of an arbitrary matrix.
pub fn row_reduce(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Echelon {
    eliminate(field, rows, ncols, false).0
}

pub fn rank(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> usize {
    row_reduce(field, rows, ncols).rank()
}

/// Multiplicative order of `x != 0`.
fn order_of(field: &Field, x: Elem) -> u64 {
    let mut y = x;
    let mut k = 1;
    while y != Elem::ONE {
        y = field.mul(y, x);
        k += 1;
    }
    k
}

/// Rank of the degree-`d` evaluation matrix without materializing it.
/// Monomials are visited in increasing order and the scan stops at full
/// column rank. A monomial is skipped when an earlier one has the same
/// signature: per variable, exponent 0, or `1 + (α - 1) mod e` with `e` the
/// exponent of the nonzero values that variable takes. Equal signatures give
/// equal rows.
pub fn evaluation_rank(field: &Field, nvars: usize, d: u32, points: &[Vec<Elem>]) -> Result<usize> {
    if let Some(pt) = points.iter().find(|pt| pt.len() != nvars) {
        return Err(Error::VariableMismatch {
            expected: nvars,
            found: pt.len(),
        });
    }
    let ncols = points.len();
    let periods: Vec<u64> = (0..nvars)
        .map(|v| {
            let values: std::collections::BTreeSet<Elem> =
                points.iter().map(|pt| pt[v]).filter(|x| !x.is_zero()).collect();
            values
                .into_iter()
                .fold(1u64, |acc, x| num_integer::lcm(acc, order_of(field, x)))
        })
        .collect();
    let powers: Vec<Vec<Vec<Elem>>> = points
        .iter()
        .map(|pt| {
            pt.iter()
                .zip(&periods)
                .map(|(&x, &e)| {
                    let top = (d as u64).min(e) as usize;
                    let mut acc = Elem::ONE;
                    (0..=top)
                        .map(|_| {
                            let cur = acc;
                            acc = field.mul(acc, x);
                            cur
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    struct Walk<'a> {
        field: &'a Field,
        periods: &'a [u64],
        powers: &'a [Vec<Vec<Elem>>],
        seen: std::collections::HashSet<Vec<u32>>,
        basis: Vec<Vec<Elem>>,
        pivots: Vec<usize>,
        ncols: usize,
        exps: Vec<u32>,
    }
    impl Walk<'_> {
        fn visit(&mut self) {
            let sig: Vec<u32> = self
                .exps
                .iter()
                .zip(self.periods)
                .map(|(&a, &e)| if a == 0 { 0 } else { 1 + ((a as u64 - 1) % e) as u32 })
                .collect();
            if !self.seen.insert(sig.clone()) {
                return;
            }
            let mut v: Vec<Elem> = self
                .powers
                .iter()
                .map(|pw| {
                    sig.iter()
                        .zip(pw)
                        .fold(Elem::ONE, |acc, (&s, t)| self.field.mul(acc, t[s as usize]))
                })
                .collect();
            for (b, &p) in self.basis.iter().zip(&self.pivots) {
                let c = v[p];
                if !c.is_zero() {
                    self.field.add_scaled(&mut v[p..], self.field.neg(c), &b[p..]);
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                let inv = self.field.inv(v[p]).expect("pivot is nonzero");
                for x in v[p..].iter_mut() {
                    *x = self.field.mul(*x, inv);
                }
                self.basis.push(v);
                self.pivots.push(p);
            }
        }

        /// Increasing grlex order; returns false once full rank is reached.
        fn walk(&mut self, var: usize, remaining: u32) -> bool {
            if self.basis.len() == self.ncols {
                return false;
            }
            if var == 0 {
                self.exps[0] = remaining;
                self.visit();
                return true;
            }
            for e in 0..=remaining {
                self.exps[var] = e;
                if !self.walk(var - 1, remaining - e) {
                    return false;
                }
            }
            self.exps[var] = 0;
            true
        }
    }
    let mut walk = Walk {
        field,
        periods: &periods,
        powers: &powers,
        seen: Default::default(),
        basis: Vec::new(),
        pivots: Vec::new(),
        ncols,
        exps: vec![0; nvars],
    };
    walk.walk(nvars - 1, d);
    Ok(walk.basis.len())
}

/// Degree-`d` monomials in `nvars` variables evaluated at explicit
/// coordinate vectors, in the given order.
pub fn evaluation_matrix(
    field: Arc<Field>,
    nvars: usize,
    d: u32,
    points: &[Vec<Elem>],
) -> Result<GeneratorMatrix> {
    if let Some(pt) = points.iter().find(|pt| pt.len() != nvars) {
        return Err(Error::VariableMismatch {
            expected: nvars,
            found: pt.len(),
        });
    }
    let monomials = monomial_basis(nvars - 1, d);
    // powers[j][v][e] = x_v^e at point j
    let powers: Vec<Vec<Vec<Elem>>> = points
        .iter()
        .map(|pt| {
            pt.iter()
                .map(|&x| {
                    let mut acc = Elem::ONE;
                    (0..=d)
                        .map(|_| {
                            let cur = acc;
                            acc = field.mul(acc, x);
                            cur
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let rows = monomials
        .iter()
        .map(|m| {
            powers
                .iter()
                .map(|pw| {
                    m.exponents()
                        .iter()
                        .zip(pw)
                        .fold(Elem::ONE, |acc, (&e, table)| field.mul(acc, table[e as usize]))
                })
                .collect()
        })
        .collect();
    Ok(GeneratorMatrix {
        field,
        degree: d,
        monomials,
        rows,
        ncols: points.len(),
        echelon: OnceLock::new(),
    })
}

/// The generator matrix of `C_X(d)` over the canonical points of `spec`.
pub fn generator_matrix(spec: &CartesianSpec, d: u32) -> GeneratorMatrix {
    let points: Vec<Vec<Elem>> = spec
        .projective_points()
        .iter()
        .map(ProjectivePoint::coordinates)
        .collect();
    evaluation_matrix(spec.field_arc().clone(), spec.n() + 1, d, &points)
        .expect("canonical points have n + 1 coordinates")
}

/// The affine cartesian code of degree `<= d` on `A_1 x ... x A_n`, as the
/// degree-`d` homogeneous monomials evaluated at `(1, y)`.
pub fn affine_evaluation_matrix(field: Arc<Field>, sets: &[Vec<Elem>], d: u32) -> GeneratorMatrix {
    let points: Vec<Vec<Elem>> = affine_points(sets)
        .into_iter()
        .map(|y| std::iter::once(Elem::ONE).chain(y).collect())
        .collect();
    evaluation_matrix(field, sets.len() + 1, d, &points).expect("affine points are homogenized")
}

/// Row spaces are equal iff the reduced echelon forms coincide.
pub fn same_row_space(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.ncols() != b.ncols() {
        return Err(Error::LengthMismatch {
            expected: a.ncols(),
            found: b.ncols(),
        });
    }
    Ok(a.echelon() == b.echelon())
}

fn check_compatible(a: &CartesianSpec, b: &CartesianSpec) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.n() != b.n() {
        return Err(Error::VariableMismatch {
            expected: a.n() + 1,
            found: b.n() + 1,
        });
    }
    let (la, lb) = (a.projective_points().len(), b.projective_points().len());
    if la != lb {
        return Err(Error::LengthMismatch { expected: la, found: lb });
    }
    Ok(())
}

/// Literal equality of `C_X(d)` and `C_Y(d)`, both on canonical points.
pub fn code_equal(a: &CartesianSpec, b: &CartesianSpec, d: u32) -> Result<bool> {
    check_compatible(a, b)?;
    same_row_space(&generator_matrix(a, d), &generator_matrix(b, d))
}

/// Compares `C_X(d)` with the code of `Y = [a_0^{-1}A_0 x ... x a_n^{-1}A_n]`
/// evaluated at `Q_i = (a_0^{-1}x_0, ..., a_n^{-1}x_n)`, the image of the
/// `i`-th canonical point of `X`. These representatives need not be
/// canonical for `Y`.
pub fn scaled_code_equal(spec: &CartesianSpec, scalars: &[Elem], d: u32) -> Result<bool> {
    let scaled = spec.scale(scalars)?;
    let field = spec.field();
    let inverses: Vec<Elem> = scalars
        .iter()
        .map(|&a| field.inv(a))
        .collect::<Result<_>>()?;
    let points: Vec<Vec<Elem>> = spec
        .projective_points()
        .iter()
        .map(|pt| {
            pt.coordinates()
                .iter()
                .zip(&inverses)
                .map(|(&x, &a)| field.mul(x, a))
                .collect()
        })
        .collect();
    let y = evaluation_matrix(scaled.field_arc().clone(), spec.n() + 1, d, &points)?;
    same_row_space(&generator_matrix(spec, d), &y)
}

/// Compares `C_X(d)` with the canonical-point code of the scaled spec after
/// undoing the induced monomial map: column `i` of `X` corresponds to the
/// canonical form of `Q_i`, rescaled by `λ_i^d` where `Q_i = λ_i · canon(Q_i)`.
pub fn scaled_code_equivalent(spec: &CartesianSpec, scalars: &[Elem], d: u32) -> Result<bool> {
    let scaled = spec.scale(scalars)?;
    let field = spec.field();
    let y_points = scaled.projective_points();
    let y = generator_matrix(&scaled, d);
    let mut columns = Vec::with_capacity(y_points.len());
    for pt in spec.projective_points() {
        let q: Vec<Elem> = pt
            .coordinates()
            .iter()
            .zip(scalars)
            .map(|(&x, &a)| field.div(x, a))
            .collect::<Result<_>>()?;
        let canon = ProjectivePoint::canonicalize(field, &q)
            .ok_or_else(|| Error::InvalidSpec("scaled point is zero".into()))?;
        let Ok(col) = y_points.binary_search_by(|p| (p.pivot, &p.tail).cmp(&(canon.pivot, &canon.tail))) else {
            return Ok(false);
        };
        columns.push((col, field.pow(q[canon.pivot], d as u64)));
    }
    let mapped: Vec<Vec<Elem>> = y
        .rows()
        .iter()
        .map(|row| columns.iter().map(|&(c, s)| field.mul(row[c], s)).collect())
        .collect();
    let mapped = GeneratorMatrix {
        field: y.field.clone(),
        degree: d,
        monomials: y.monomials.clone(),
        rows: mapped,
        ncols: columns.len(),
        echelon: OnceLock::new(),
    };
    same_row_space(&generator_matrix(spec, d), &mapped)
}
