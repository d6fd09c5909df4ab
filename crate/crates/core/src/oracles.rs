//! Brute-force oracles: exhaustive minimum distance, rank-based dimensions,
//! the Hilbert recursion and the conjecture harness.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::codes::{
    affine_evaluation_matrix, evaluation_rank, generator_matrix, Codeword, GeneratorMatrix,
};
use crate::config::SpecConfig;
use crate::error::{Error, Result};
use crate::formulas::{projective_min_distance, DistanceStatus};
use crate::gf::{Elem, Field};
use crate::poly::{witness_polynomial, Monomial, Polynomial};
use crate::sets::{affine_points, CartesianSpec, Classification};
use crate::Count;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    /// Cap on nonzero codewords covered by the search.
    pub max_codewords: u64,
    pub max_seconds: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_codewords: 10_000_000,
            max_seconds: 60.0,
        }
    }
}

/// A minimum-weight codeword and its coefficients over the echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    pub weight: usize,
    pub message: Vec<Elem>,
    pub codeword: Codeword,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Every nonzero codeword was covered.
    Exact(MinWeight),
    /// Only a prefix was covered; `best` is an upper bound.
    BudgetExceeded {
        best: Option<MinWeight>,
        searched: u128,
        total: u128,
    },
}

impl SearchOutcome {
    pub fn exact(&self) -> Option<&MinWeight> {
        match self {
            SearchOutcome::Exact(m) => Some(m),
            SearchOutcome::BudgetExceeded { .. } => None,
        }
    }
}

/// A run of normalized coefficient vectors: leading 1 at position
/// `rank - 1 - s`, lower `s` digits counting from `lo` to `hi`.
#[derive(Clone, Copy, Debug)]
struct Segment {
    s: u32,
    lo: u128,
    hi: u128,
}

struct Local {
    weight: usize,
    s: u32,
    offset: u128,
}

fn segments(q: u128, rank: u32, limit: u128, pieces: u128) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut left = limit;
    let chunk = (limit / pieces).max(1 << 12);
    for s in 0..rank {
        if left == 0 {
            break;
        }
        let size = q.saturating_pow(s).min(left);
        left -= size;
        let mut lo = 0;
        while lo < size {
            let hi = (lo + chunk).min(size);
            out.push(Segment { s, lo, hi });
            lo = hi;
        }
    }
    out
}

/// Minimum weight over the row space of `matrix`. Only vectors whose leading
/// coefficient is 1 are visited, in increasing lexicographic order of
/// encodings; scalar multiples share their weight. Ties go to the
/// lexicographically smallest coefficient vector, so the result does not
/// depend on `workers`.
pub fn min_distance_of(
    matrix: &GeneratorMatrix,
    budget: &SearchBudget,
    workers: usize,
) -> Result<SearchOutcome> {
    let field = matrix.field();
    let basis = &matrix.echelon().rows;
    let rank = basis.len() as u32;
    if rank == 0 {
        return Err(Error::InvalidSpec("the code is zero".into()));
    }
    let q = field.order() as u128;
    let total_normalized = (0..rank).fold(0u128, |acc, s| acc.saturating_add(q.saturating_pow(s)));
    let total = total_normalized.saturating_mul(q - 1);
    let limit = total_normalized.min(budget.max_codewords as u128 / (q - 1));
    let workers = workers.max(1);
    let segs = segments(q, rank, limit, workers as u128 * 8);

    let support: Vec<Vec<usize>> = basis
        .iter()
        .map(|row| (0..row.len()).filter(|&j| !row[j].is_zero()).collect())
        .collect();
    let deadline = Instant::now() + Duration::from_secs_f64(budget.max_seconds.max(0.0));
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let searched = AtomicU64::new(0);
    let best: Mutex<Option<Local>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..workers.min(segs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= segs.len() || stop.load(Ordering::Relaxed) {
                    break;
                }
                let (found, done) = scan(field, basis, &support, rank, segs[i], deadline, &stop);
                searched.fetch_add(done as u64, Ordering::Relaxed);
                if let Some(found) = found {
                    let mut guard = best.lock().expect("no worker panics while holding the lock");
                    let better = guard.as_ref().is_none_or(|b| {
                        (found.weight, found.s, found.offset) < (b.weight, b.s, b.offset)
                    });
                    if better {
                        *guard = Some(found);
                    }
                }
            });
        }
    });

    let best = best.into_inner().expect("workers joined").map(|b| {
        let message = message_of(rank, q, b.s, b.offset);
        let codeword = matrix.encode(&message).expect("message length equals rank");
        debug_assert_eq!(codeword.weight(), b.weight);
        MinWeight {
            weight: b.weight,
            message,
            codeword,
        }
    });
    let searched = searched.load(Ordering::Relaxed) as u128;
    if !stop.load(Ordering::Relaxed) && limit == total_normalized {
        Ok(SearchOutcome::Exact(best.expect("a nonzero code has codewords")))
    } else {
        Ok(SearchOutcome::BudgetExceeded {
            best,
            searched: searched * (q - 1),
            total,
        })
    }
}

fn message_of(rank: u32, q: u128, s: u32, offset: u128) -> Vec<Elem> {
    let mut msg = vec![Elem::ZERO; rank as usize];
    msg[(rank - 1 - s) as usize] = Elem::ONE;
    let mut x = offset;
    for k in 0..s as usize {
        msg[rank as usize - 1 - k] = Elem::from_encoding((x % q) as u32);
        x /= q;
    }
    msg
}

/// Walks one segment with incremental codeword updates. Returns the first
/// minimum in the segment and the number of vectors visited.
fn scan(
    field: &Field,
    basis: &[Vec<Elem>],
    support: &[Vec<usize>],
    rank: u32,
    seg: Segment,
    deadline: Instant,
    stop: &AtomicBool,
) -> (Option<Local>, u128) {
    let q = field.order();
    let mut msg = message_of(rank, q as u128, seg.s, seg.lo);
    let mut word = vec![Elem::ZERO; basis[0].len()];
    for (&c, row) in msg.iter().zip(basis) {
        field.add_scaled(&mut word, c, row);
    }
    let mut weight = word.iter().filter(|x| !x.is_zero()).count();
    let mut best: Option<Local> = None;
    let mut offset = seg.lo;
    loop {
        if best.as_ref().is_none_or(|b| weight < b.weight) {
            best = Some(Local {
                weight,
                s: seg.s,
                offset,
            });
        }
        offset += 1;
        if offset == seg.hi {
            break;
        }
        if offset & 0xfff == 0 && (stop.load(Ordering::Relaxed) || Instant::now() > deadline) {
            stop.store(true, Ordering::Relaxed);
            break;
        }
        // odometer step on the lowest digits
        let mut i = rank as usize - 1;
        loop {
            let old = msg[i];
            let new = if old.encoding() + 1 < q {
                Elem::from_encoding(old.encoding() + 1)
            } else {
                Elem::ZERO
            };
            msg[i] = new;
            let delta = field.sub(new, old);
            for &j in &support[i] {
                let before = word[j];
                let after = field.add(before, field.mul(delta, basis[i][j]));
                word[j] = after;
                weight = weight + usize::from(!after.is_zero()) - usize::from(!before.is_zero());
            }
            if !new.is_zero() {
                break;
            }
            i -= 1;
        }
    }
    (best, offset - seg.lo)
}

/// Exhaustive minimum distance of `C_X(d)`.
pub fn exhaustive_min_distance(
    spec: &CartesianSpec,
    d: u32,
    budget: &SearchBudget,
    workers: usize,
) -> Result<SearchOutcome> {
    if d < 1 {
        return Err(Error::DegreeOutOfRange {
            d: d as u64,
            lo: 1,
            hi: u64::MAX,
        });
    }
    min_distance_of(&generator_matrix(spec, d), budget, workers)
}

/// Exhaustive minimum distance of the affine code of degree `<= d`.
pub fn affine_exhaustive_min_distance(
    field: Arc<Field>,
    sets: &[Vec<Elem>],
    d: u32,
    budget: &SearchBudget,
    workers: usize,
) -> Result<SearchOutcome> {
    min_distance_of(&affine_evaluation_matrix(field, sets, d), budget, workers)
}

/// Rank of the degree-`d` evaluation map on the points of `spec`.
pub fn hilbert_by_rank(spec: &CartesianSpec, d: u32) -> usize {
    let points: Vec<Vec<Elem>> = spec
        .projective_points()
        .iter()
        .map(|pt| pt.coordinates())
        .collect();
    evaluation_rank(spec.field(), spec.n() + 1, d, &points).expect("canonical points")
}

/// Rank of the affine evaluation map of degree `<= d`.
pub fn affine_rank(field: Arc<Field>, sets: &[Vec<Elem>], d: u32) -> usize {
    let points: Vec<Vec<Elem>> = affine_points(sets)
        .into_iter()
        .map(|y| std::iter::once(Elem::ONE).chain(y).collect())
        .collect();
    evaluation_rank(&field, sets.len() + 1, d, &points).expect("homogenized points")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionCheck {
    pub full: usize,
    pub at_infinity: usize,
    pub affine: usize,
}

impl RecursionCheck {
    pub fn holds(&self) -> bool {
        self.full == self.at_infinity + self.affine
    }
}

/// Ranks behind `H_X(d) = H_{[A_1 x ... x A_n]}(d) + H_{A_1 x ... x A_n}(d - 1)`.
pub fn recursion_check(spec: &CartesianSpec, d: u32) -> Result<RecursionCheck> {
    let tail = spec
        .tail()
        .ok_or_else(|| Error::InvalidSpec("recursion needs n >= 1".into()))?;
    if d < 1 {
        return Err(Error::DegreeOutOfRange {
            d: d as u64,
            lo: 1,
            hi: u64::MAX,
        });
    }
    Ok(RecursionCheck {
        full: hilbert_by_rank(spec, d),
        at_infinity: hilbert_by_rank(&tail, d),
        affine: affine_rank(spec.field_arc().clone(), &spec.sets()[1..], d - 1),
    })
}

/// The upper-bound witness for any `d >= 1`: past the top degree it is the
/// top-degree witness times a power of `X_0`, still of weight 1.
pub fn witness_for_degree(spec: &CartesianSpec, d: u64) -> Result<Polynomial> {
    let top = spec.sizes()?.span() + 1;
    if d <= top {
        return witness_polynomial(spec, d, None);
    }
    let base = witness_polynomial(spec, top, None)?;
    let mut exps = vec![0; spec.n() + 1];
    exps[0] = (d - top) as u32;
    Ok(base.mul(spec.field(), &Polynomial::term(Monomial::new(exps), Elem::ONE)))
}

pub fn codeword_weight(spec: &CartesianSpec, f: &Polynomial) -> Result<usize> {
    let mut weight = 0;
    for pt in spec.projective_points() {
        if !f.evaluate(spec.field(), &pt)?.is_zero() {
            weight += 1;
        }
    }
    Ok(weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    Verified,
    Refuted,
    ExactTheorem,
    SkippedBudget,
}

impl fmt::Display for EntryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryStatus::Verified => "verified",
            EntryStatus::Refuted => "refuted",
            EntryStatus::ExactTheorem => "exact-theorem",
            EntryStatus::SkippedBudget => "skipped-budget",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureEntry {
    pub degree: u32,
    pub conjectured: u64,
    pub formula_status: DistanceStatus,
    /// Measured weight of the upper-bound witness.
    pub witness_weight: u64,
    /// Exact oracle minimum, when the search completed.
    pub measured: Option<u64>,
    /// Best weight found by an incomplete search.
    pub best_found: Option<u64>,
    pub status: EntryStatus,
    /// A polynomial attaining `measured`, recorded on refutation.
    pub witness: Option<String>,
}

impl ConjectureEntry {
    /// The oracle never beats the witness, and the witness matches the formula.
    pub fn bound_holds(&self) -> bool {
        self.witness_weight == self.conjectured
            && self.measured.is_none_or(|m| m <= self.witness_weight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub spec: SpecConfig,
    pub sizes: Vec<u64>,
    pub classification: Classification,
    pub entries: Vec<ConjectureEntry>,
}

impl ConjectureReport {
    pub fn refuted(&self) -> bool {
        self.entries.iter().any(|e| e.status == EntryStatus::Refuted)
    }

    pub fn bounds_hold(&self) -> bool {
        self.entries.iter().all(ConjectureEntry::bound_holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One record per degree.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# sizes {:?} classification {}\n",
            self.sizes, self.classification
        );
        for e in &self.entries {
            let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "degree={} conjectured={} witness_weight={} measured={} status={}",
                e.degree,
                e.conjectured,
                e.witness_weight,
                opt(e.measured),
                e.status
            ));
            if let Some(b) = e.best_found {
                out.push_str(&format!(" best_found={b}"));
            }
            if let Some(w) = &e.witness {
                out.push_str(&format!(" witness={w}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Codeword count above which a redundant oracle run on a proven case is
/// skipped.
const REDUNDANT_CHECK_LIMIT: u64 = 1_000_000;

/// Compares the distance formula with the witness weight and, where
/// affordable, with the exhaustive oracle.
pub fn check_conjecture(
    spec: &CartesianSpec,
    degrees: &[u32],
    budget: &SearchBudget,
    workers: usize,
) -> Result<ConjectureReport> {
    let sizes = spec.sizes()?;
    let class = spec.classify();
    let mut entries = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let formula = projective_min_distance::<Count>(&sizes, d as u64, Some(&class))?;
        let conjectured = formula.value.to_u64().expect("distance is at most the length");
        let witness_weight = codeword_weight(spec, &witness_for_degree(spec, d as u64)?)? as u64;
        let proven = matches!(
            formula.status,
            DistanceStatus::ExactTheorem | DistanceStatus::TrivialOne
        );
        let budget = if proven {
            SearchBudget {
                max_codewords: budget.max_codewords.min(REDUNDANT_CHECK_LIMIT),
                ..*budget
            }
        } else {
            *budget
        };
        let matrix = generator_matrix(spec, d);
        let outcome = min_distance_of(&matrix, &budget, workers)?;
        let (measured, best_found, status, witness) = match outcome {
            SearchOutcome::Exact(m) => {
                let w = m.weight as u64;
                if w < conjectured {
                    let f = matrix.polynomial_for(&m.message)?;
                    (Some(w), None, EntryStatus::Refuted, Some(f.to_string()))
                } else if proven {
                    (Some(w), None, EntryStatus::ExactTheorem, None)
                } else {
                    (Some(w), None, EntryStatus::Verified, None)
                }
            }
            SearchOutcome::BudgetExceeded { best, .. } => {
                let b = best.as_ref().map(|m| m.weight as u64);
                match best {
                    Some(m) if (m.weight as u64) < conjectured => {
                        let f = matrix.polynomial_for(&m.message)?;
                        (None, b, EntryStatus::Refuted, Some(f.to_string()))
                    }
                    _ if proven => (None, b, EntryStatus::ExactTheorem, None),
                    _ => (None, b, EntryStatus::SkippedBudget, None),
                }
            }
        };
        entries.push(ConjectureEntry {
            degree: d,
            conjectured,
            formula_status: formula.status,
            witness_weight,
            measured,
            best_found,
            status,
            witness,
        });
    }
    Ok(ConjectureReport {
        spec: SpecConfig::from_spec(spec),
        sizes: sizes.as_slice().to_vec(),
        classification: class,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn gf(p: u32, m: u32) -> Arc<Field> {
        Arc::new(Field::new(p, m).unwrap())
    }

    fn subgroup_spec() -> CartesianSpec {
        CartesianSpec::from_encodings(gf(7, 1), &[vec![0, 1], vec![0, 1, 2, 4], vec![0, 1, 2, 4]])
            .unwrap()
    }

    /// Weight minimum over every nonzero message, no normalization.
    fn naive_min(matrix: &GeneratorMatrix) -> usize {
        let r = matrix.rank() as u32;
        let q = matrix.field().order();
        (1..q.pow(r))
            .map(|mut t| {
                let msg: Vec<Elem> = (0..r)
                    .map(|_| {
                        let c = Elem::from_encoding(t % q);
                        t /= q;
                        c
                    })
                    .collect();
                matrix.encode(&msg).unwrap().weight()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn small_examples() {
        let budget = SearchBudget::default();
        let simplex = CartesianSpec::projective_space(gf(2, 1), 2);
        let out = exhaustive_min_distance(&simplex, 1, &budget, 1).unwrap();
        assert_eq!(out.exact().unwrap().weight, 4);
        let p1 = CartesianSpec::projective_space(gf(2, 1), 1);
        let out = exhaustive_min_distance(&p1, 1, &budget, 2).unwrap();
        assert_eq!(out.exact().unwrap().weight, 2);
    }

    #[test]
    fn f25_degree_two_exceeds_budget() {
        let spec = CartesianSpec::subfield_tower(gf(5, 2), &[5, 5, 25]).unwrap();
        let budget = SearchBudget {
            max_codewords: 100_000,
            max_seconds: 60.0,
        };
        match exhaustive_min_distance(&spec, 2, &budget, 4).unwrap() {
            SearchOutcome::BudgetExceeded { best, total, searched } => {
                assert_eq!(total, 25u128.pow(6) - 1);
                assert!(searched <= 100_000);
                assert!(best.unwrap().weight >= 100);
            }
            other => panic!("expected budget overflow, got {other:?}"),
        }
    }

    #[test]
    fn matches_naive_enumeration() {
        let specs = [
            CartesianSpec::projective_space(gf(3, 1), 1),
            CartesianSpec::projective_space(gf(2, 2), 1),
            CartesianSpec::subfield_tower(gf(2, 2), &[2, 4]).unwrap(),
            subgroup_spec(),
        ];
        for spec in &specs {
            for d in 1..=3 {
                let m = generator_matrix(spec, d);
                if (spec.field().order() as u64).pow(m.rank() as u32) > 200_000 {
                    continue;
                }
                let out = min_distance_of(&m, &SearchBudget::default(), 3).unwrap();
                let found = out.exact().unwrap();
                assert_eq!(found.weight, naive_min(&m));
                assert_eq!(found.codeword.weight(), found.weight);
            }
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let spec = subgroup_spec();
        let m = generator_matrix(&spec, 2);
        let one = min_distance_of(&m, &SearchBudget::default(), 1).unwrap();
        for w in [2, 3, 8] {
            assert_eq!(min_distance_of(&m, &SearchBudget::default(), w).unwrap(), one);
        }
        let found = one.exact().unwrap();
        let lead = found.message.iter().find(|c| !c.is_zero()).unwrap();
        assert_eq!(*lead, Elem::ONE);
    }

    #[test]
    fn rank_oracles() {
        let spec = CartesianSpec::subfield_tower(gf(5, 2), &[5, 5, 25]).unwrap();
        assert_eq!(hilbert_by_rank(&spec, 5), 21);
        assert_eq!(hilbert_by_rank(&spec, 0), 1);
        let p2 = CartesianSpec::projective_space(gf(2, 1), 2);
        assert_eq!(hilbert_by_rank(&p2, 2), 6);
        let rc = recursion_check(&p2, 2).unwrap();
        assert_eq!((rc.full, rc.at_infinity, rc.affine), (6, 3, 3));
        let p1 = CartesianSpec::projective_space(gf(2, 1), 1);
        let rc = recursion_check(&p1, 1).unwrap();
        assert_eq!((rc.full, rc.at_infinity, rc.affine), (2, 1, 1));
        assert!(recursion_check(&p1, 0).is_err());
    }

    #[test]
    fn conjecture_on_subgroup_spec() {
        let report = check_conjecture(&subgroup_spec(), &[1, 2], &SearchBudget::default(), 4).unwrap();
        assert_eq!(report.classification, Classification::NestedGeneral);
        let conj: Vec<u64> = report.entries.iter().map(|e| e.conjectured).collect();
        assert_eq!(conj, vec![16, 12]);
        assert!(report.bounds_hold());
        for e in &report.entries {
            assert!(matches!(e.status, EntryStatus::Verified | EntryStatus::Refuted));
            assert!(e.measured.is_some());
        }
    }

    #[test]
    fn conjecture_on_product_of_fields() {
        let spec = CartesianSpec::projective_space(gf(2, 1), 2);
        let report = check_conjecture(&spec, &[1, 2, 3], &SearchBudget::default(), 2).unwrap();
        let got: Vec<(u64, Option<u64>, EntryStatus)> = report
            .entries
            .iter()
            .map(|e| (e.conjectured, e.measured, e.status))
            .collect();
        assert_eq!(
            got,
            vec![
                (4, Some(4), EntryStatus::ExactTheorem),
                (2, Some(2), EntryStatus::ExactTheorem),
                (1, Some(1), EntryStatus::ExactTheorem),
            ]
        );
        assert!(report.to_text().contains("degree=1 conjectured=4"));
        assert!(report.to_json().contains("\"exact-theorem\""));
    }

    #[test]
    fn tiny_budget_skips() {
        let budget = SearchBudget {
            max_codewords: 1,
            max_seconds: 60.0,
        };
        let report = check_conjecture(&subgroup_spec(), &[1, 2], &budget, 1).unwrap();
        assert!(report.entries.iter().all(|e| e.status == EntryStatus::SkippedBudget));
    }

    #[test]
    fn witness_past_top_degree() {
        let spec = CartesianSpec::projective_space(gf(3, 1), 2);
        let f = witness_for_degree(&spec, 9).unwrap();
        assert_eq!(f.degree(), Some(9));
        assert_eq!(codeword_weight(&spec, &f).unwrap(), 1);
    }
}
