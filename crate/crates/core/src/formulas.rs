//! Closed-form parameters of projective nested cartesian codes and of affine
//! cartesian codes.
//!
//! Every function is generic over an exact signed integer type so the
//! alternating binomial sums never overflow or round; [`crate::Count`]
//! (a big integer) is the default instantiation and `i128` is a cheaper one
//! for small parameters.

use std::fmt;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::sets::Classification;

/// Exact signed integers usable by the formulas.
pub trait ExactInt:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display
{
}

fn int<T: ExactInt>(x: u64) -> T {
    T::from_u64(x).expect("u64 fits the exact integer type")
}

/// Set cardinalities `d_0, ..., d_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SizeVector(Vec<u64>);

impl SizeVector {
    /// Requires `n + 1 >= 1` entries with `2 <= d_i <= d_{i+1}`.
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidSpec("size vector is empty".into()));
        }
        if sizes.iter().any(|&d| d < 2) {
            return Err(Error::InvalidSpec(format!(
                "sizes {sizes:?} must all be at least 2"
            )));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpec(format!(
                "sizes {sizes:?} must be nondecreasing"
            )));
        }
        Ok(SizeVector(sizes))
    }

    /// Projective dimension `n`.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// `d_1, ..., d_n`; `d_0` never enters a code parameter.
    pub fn tail(&self) -> &[u64] {
        &self.0[1..]
    }

    /// `Σ_{i=1}^n (d_i - 1)`: the largest degree with a nontrivial distance.
    pub fn span(&self) -> u64 {
        self.tail().iter().map(|d| d - 1).sum()
    }
}

/// `d - 1 = Σ_{i=1}^k (d_i - 1) + ell` with `0 <= ell < d_{k+1} - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KlDecomposition {
    pub k: usize,
    pub ell: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceStatus {
    /// Proven value: nested product of fields.
    ExactTheorem,
    /// Conjectured value; always a proven upper bound.
    Conjectured,
    /// Proven upper bound, no classification supplied.
    UpperBound,
    /// Degree beyond the span, where the distance is provably 1.
    TrivialOne,
}

impl fmt::Display for DistanceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceStatus::ExactTheorem => "exact-theorem",
            DistanceStatus::Conjectured => "conjectured",
            DistanceStatus::UpperBound => "upper-bound",
            DistanceStatus::TrivialOne => "trivial-one",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult<T> {
    pub value: T,
    pub status: DistanceStatus,
}

impl<T> DistanceResult<T> {
    /// Every reported value is at least a proven upper bound.
    pub fn is_proven_upper_bound(&self) -> bool {
        true
    }

    pub fn is_exact(&self) -> bool {
        matches!(
            self.status,
            DistanceStatus::ExactTheorem | DistanceStatus::TrivialOne
        )
    }
}

/// Binomial coefficient that vanishes whenever `b < 0`, `a < 0` or `b > a`.
pub fn binomial<T: ExactInt>(a: i64, b: i64) -> T {
    if a < 0 || b < 0 || b > a {
        return T::zero();
    }
    let b = b.min(a - b);
    let mut acc = T::one();
    for i in 0..b {
        acc = acc * int::<T>((a - i) as u64) / int::<T>((i + 1) as u64);
    }
    acc
}

/// Writes `s = Σ_{i<k} (dims[i] - 1) + ell` with `ell < dims[k] - 1`, or
/// `None` when `s >= Σ (dims[i] - 1)`.
fn decompose(s: u64, dims: &[u64]) -> Option<(usize, u64)> {
    let mut rem = s;
    for (k, &d) in dims.iter().enumerate() {
        if rem < d - 1 {
            return Some((k, rem));
        }
        rem -= d - 1;
    }
    None
}

/// Decomposition of `d - 1` against `d_1, ..., d_n`; needs `1 <= d <= span`.
pub fn kl_decompose(d: u64, sizes: &SizeVector) -> Result<KlDecomposition> {
    let span = sizes.span();
    if d < 1 || d > span {
        return Err(Error::DegreeOutOfRange { d, lo: 1, hi: span });
    }
    let (k, ell) = decompose(d - 1, sizes.tail()).expect("d - 1 < span");
    let rebuilt: u64 = sizes.tail()[..k].iter().map(|x| x - 1).sum::<u64>() + ell;
    assert_eq!(rebuilt, d - 1, "kl decomposition must reconstruct d - 1");
    Ok(KlDecomposition { k, ell })
}

/// `(d_{k+1} - ell) d_{k+2} ... d_n` for a decomposition over `dims`.
fn tail_product<T: ExactInt>(dims: &[u64], k: usize, ell: u64) -> T {
    dims[k + 1..]
        .iter()
        .fold(int::<T>(dims[k] - ell), |acc, &d| acc * int::<T>(d))
}

/// `1 + Σ_{i=1}^n d_i ... d_n`.
pub fn length_formula<T: ExactInt>(sizes: &SizeVector) -> T {
    let mut total = T::one();
    let mut suffix = T::one();
    for &d in sizes.tail().iter().rev() {
        suffix = suffix * int::<T>(d);
        total = total + suffix.clone();
    }
    total
}

/// Visits every subset of `indices` with its size and size sum.
fn for_each_subset(indices: &[usize], sizes: &[u64], mut visit: impl FnMut(usize, u64, &[usize])) {
    let mut chosen = Vec::with_capacity(indices.len());
    for mask in 0u64..(1 << indices.len()) {
        chosen.clear();
        let mut sum = 0;
        for (bit, &i) in indices.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                chosen.push(i);
                sum += sizes[i];
            }
        }
        visit(chosen.len(), sum, &chosen);
    }
}

fn signed<T: ExactInt>(k: usize, x: T) -> T {
    if k.is_multiple_of(2) {
        x
    } else {
        -x
    }
}

/// Dimension of the projective code: one plus the affine dimensions of the
/// tails `A_{n+1-j} x ... x A_n` at degree `d - 1`, expanded as alternating
/// binomial sums. Degree 0 gives 1 (the constants).
pub fn dimension_formula<T: ExactInt>(sizes: &SizeVector, d: u64) -> T {
    if d == 0 {
        return T::one();
    }
    let n = sizes.n();
    let all = sizes.as_slice();
    let d = d as i64;
    let mut total = T::one();
    for j in 1..=n {
        let indices: Vec<usize> = (n + 1 - j..=n).collect();
        let mut inner = T::zero();
        for_each_subset(&indices, all, |k, sum, _| {
            let s = sum as i64;
            let term = binomial::<T>(j as i64 + d - 1 - s, d - 1 - s);
            inner = inner.clone() + signed(k, term);
        });
        total = total + inner;
    }
    total
}

/// Number of degree-`d` monomials divisible by no `X_i X_j^{d_j}` (`i < j`),
/// by inclusion-exclusion over the sets `M_j`.
pub fn footprint_count_formula<T: ExactInt>(sizes: &SizeVector, d: u64) -> T {
    let n = sizes.n();
    let all = sizes.as_slice();
    let (ni, di) = (n as i64, d as i64);
    let mut total = binomial::<T>(ni + di, ni);
    let indices: Vec<usize> = (1..=n).collect();
    for_each_subset(&indices, all, |k, sum, chosen| {
        if k == 0 {
            return;
        }
        let s = sum as i64;
        let term = if k == n {
            binomial::<T>(ni + di - (s + 1), ni)
        } else {
            let j1 = chosen[0] as i64;
            binomial::<T>(ni + di - s, ni) - binomial::<T>(ni - j1 + di - s, ni - j1)
        };
        total = total.clone() + signed(k, term);
    });
    total
}

/// Dimension of the affine cartesian code of degree `<= d` over sets of the
/// given sizes (any order).
pub fn affine_dimension<T: ExactInt>(dims: &[u64], d: u64) -> T {
    let span: u64 = dims.iter().map(|x| x.saturating_sub(1)).sum();
    if d >= span {
        return dims.iter().fold(T::one(), |acc, &x| acc * int::<T>(x));
    }
    let n = dims.len() as i64;
    let di = d as i64;
    let indices: Vec<usize> = (0..dims.len()).collect();
    let mut total = T::zero();
    for_each_subset(&indices, dims, |k, sum, _| {
        let s = sum as i64;
        total = total.clone() + signed(k, binomial::<T>(n + di - s, di - s));
    });
    total
}

fn sorted_nontrivial(dims: &[u64]) -> Vec<u64> {
    let mut v: Vec<u64> = dims.iter().copied().filter(|&x| x >= 2).collect();
    v.sort_unstable();
    v
}

/// Minimum distance of the affine cartesian code of degree `<= d`. Sets of
/// size one are dropped and the rest sorted, which leaves the code unchanged.
pub fn affine_min_distance<T: ExactInt>(dims: &[u64], d: u64) -> T {
    let dims = sorted_nontrivial(dims);
    match decompose(d, &dims) {
        Some((k, ell)) => tail_product(&dims, k, ell),
        None => T::one(),
    }
}

/// `min { Π (d_i - a_i) : Σ a_i <= s, 0 <= a_i < d_i }` in closed form.
pub fn min_product<T: ExactInt>(dims: &[u64], s: u64) -> Result<T> {
    if dims.contains(&0) {
        return Err(Error::InvalidSpec("sizes must be positive".into()));
    }
    let dims = sorted_nontrivial(dims);
    let span: u64 = dims.iter().map(|x| x - 1).sum();
    if s > span {
        return Err(Error::DegreeOutOfRange { d: s, lo: 0, hi: span });
    }
    Ok(match decompose(s, &dims) {
        Some((k, ell)) => tail_product(&dims, k, ell),
        None => T::one(),
    })
}

/// Projective minimum distance `(d_{k+1} - ell) d_{k+2} ... d_n` (or 1 past
/// the span), tagged with what is known about it.
pub fn projective_min_distance<T: ExactInt>(
    sizes: &SizeVector,
    d: u64,
    classification: Option<&Classification>,
) -> Result<DistanceResult<T>> {
    if d < 1 {
        return Err(Error::DegreeOutOfRange {
            d,
            lo: 1,
            hi: u64::MAX,
        });
    }
    if d > sizes.span() {
        return Ok(DistanceResult {
            value: T::one(),
            status: DistanceStatus::TrivialOne,
        });
    }
    let KlDecomposition { k, ell } = kl_decompose(d, sizes)?;
    let status = match classification {
        Some(Classification::ProductOfFields { .. }) => DistanceStatus::ExactTheorem,
        Some(Classification::NestedGeneral) => DistanceStatus::Conjectured,
        None => DistanceStatus::UpperBound,
    };
    Ok(DistanceResult {
        value: tail_product(sizes.tail(), k, ell),
        status,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParameters<T> {
    pub length: T,
    pub dimension: T,
    pub distance: T,
}

/// Parameters of the projective Reed-Muller code `PC_d(n, q)` from their
/// dedicated closed forms (independent of the general formulas above).
pub fn prm_parameters<T: ExactInt>(n: u64, q: u64, d: u64) -> Result<CodeParameters<T>> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if n < 1 {
        return Err(Error::InvalidSpec("projective dimension must be at least 1".into()));
    }
    if d < 1 {
        return Err(Error::DegreeOutOfRange {
            d,
            lo: 1,
            hi: u64::MAX,
        });
    }
    let qt = int::<T>(q);
    let pow = |e: u64| (0..e).fold(T::one(), |acc, _| acc * qt.clone());
    let length = (pow(n + 1) - T::one()) / (qt.clone() - T::one());

    let (di, qi) = (d as i64, q as i64);
    let mut dimension = T::zero();
    for j in 0..=n as i64 {
        for k in 0..=j {
            let term = binomial::<T>(j, k) * binomial::<T>(j + di - 1 - k * qi, di - 1 - k * qi);
            dimension = dimension + signed(k as usize, term);
        }
    }

    let distance = if d == 1 {
        pow(n)
    } else if d <= n * (q - 1) {
        // d = 1 + k(q - 1) + ell with 1 <= ell <= q - 1
        let k = (d - 2) / (q - 1);
        let ell = d - 1 - k * (q - 1);
        int::<T>(q - ell) * pow(n - k - 1)
    } else {
        T::one()
    };
    Ok(CodeParameters {
        length,
        dimension,
        distance,
    })
}
