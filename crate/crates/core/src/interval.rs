//! Decisions under incomplete comparisons.
//!
//! A [`PartialSdMatrix`] knows `φ(x, y)` only on some pairs. Unknown pairs are
//! bracketed by the extreme values `±φ*`, which turns every potential into
//! an interval `[f_d(x), f_u(x)]` whose half-width is `μ(x)·φ*`, where
//! `μ(x)` is the weight of the alternatives `x` was never compared with.
//! Each answered comparison narrows the intervals; a complete matrix
//! collapses them to the ordinary potentials.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::VectorPreferenceRelation;
use crate::relations::{AlternativeSet, PreferenceRelation};
use crate::superiority::{SdMatrix, WeightVector, EPS};

/// A superiority-degree matrix with a symmetric presence mask.
#[derive(Clone, PartialEq)]
pub struct PartialSdMatrix {
    base: AlternativeSet,
    values: Vec<f64>,
    present: Vec<bool>,
    phi_star: f64,
}

impl PartialSdMatrix {
    /// Row-major entries, `None` for unknown pairs. Diagonal entries are
    /// always known and must be zero. `phi_star` defaults to the largest
    /// known magnitude.
    pub fn new(base: &AlternativeSet, entries: Vec<Option<f64>>, phi_star: Option<f64>) -> Result<Self> {
        let n = base.len();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let cell = |i: usize, j: usize| (base.id(i).to_string(), base.id(j).to_string());
        let mut values = vec![0.0; n * n];
        let mut present = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                match entries[k] {
                    Some(v) if !v.is_finite() => {
                        let (row, col) = cell(i, j);
                        return Err(Error::NonFinite { row, col });
                    }
                    Some(v) => {
                        values[k] = v;
                        present[k] = true;
                    }
                    None if i == j => present[k] = true,
                    None => {}
                }
            }
        }
        for i in 0..n {
            if values[i * n + i].abs() > EPS {
                return Err(Error::NonzeroDiagonal(base.id(i).into()));
            }
            for j in (i + 1)..n {
                let (ij, ji) = (i * n + j, j * n + i);
                if present[ij] != present[ji] {
                    let (row, col) = if present[ij] { cell(j, i) } else { cell(i, j) };
                    return Err(Error::AsymmetricMask { row, col });
                }
                if present[ij] && (values[ij] + values[ji]).abs() > EPS {
                    let (row, col) = cell(i, j);
                    return Err(Error::NotSkewSymmetric {
                        row,
                        col,
                        forward: values[ij],
                        backward: values[ji],
                    });
                }
            }
        }
        let observed = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        let phi_star = phi_star.unwrap_or(observed);
        if !(phi_star.is_finite() && phi_star >= 0.0) {
            return Err(Error::InvalidBound(phi_star));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if v.abs() > phi_star + EPS {
                    let (row, col) = cell(i, j);
                    return Err(Error::OutOfBound {
                        row,
                        col,
                        value: v,
                        bound: phi_star,
                    });
                }
            }
        }
        Ok(Self {
            base: base.clone(),
            values,
            present,
            phi_star,
        })
    }

    /// Known upper-triangle entries by id; everything else unknown.
    pub fn from_entries<'a, I>(base: &AlternativeSet, entries: I, phi_star: Option<f64>) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let n = base.len();
        let mut cells = vec![None; n * n];
        for (x, y, v) in entries {
            let (i, j) = (base.index_of(x)?, base.index_of(y)?);
            cells[i * n + j] = Some(v);
            cells[j * n + i] = Some(-v);
        }
        Self::new(base, cells, phi_star)
    }

    /// Every pair known.
    pub fn from_complete(m: &SdMatrix, phi_star: Option<f64>) -> Result<Self> {
        Self::new(m.base(), m.values().iter().map(|&v| Some(v)).collect(), phi_star)
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phi_star(&self) -> f64 {
        self.phi_star
    }

    #[inline]
    pub fn is_present(&self, i: usize, j: usize) -> bool {
        self.present[i * self.len() + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.is_present(i, j).then(|| self.values[i * self.len() + j])
    }

    pub fn is_complete(&self) -> bool {
        self.present.iter().all(|&p| p)
    }

    /// Unknown pairs `(i, j)` with `i < j`, row-major.
    pub fn absent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.is_present(i, j))
            .collect()
    }

    /// The known entries as a full matrix, if nothing is missing.
    pub fn to_complete(&self) -> Option<SdMatrix> {
        if !self.is_complete() {
            return None;
        }
        SdMatrix::new(&self.base, self.values.clone()).ok()
    }

    /// `(X₁(x), X₂(x))`: alternatives compared with `x` (including `x`) and
    /// those that are not.
    pub fn partition(&self, x: &str) -> Result<(Vec<String>, Vec<String>)> {
        let i = self.base.index_of(x)?;
        let (known, unknown): (Vec<usize>, Vec<usize>) = (0..self.len()).partition(|&j| self.is_present(i, j));
        let ids = |v: Vec<usize>| v.into_iter().map(|j| self.base.id(j).to_string()).collect();
        Ok((ids(known), ids(unknown)))
    }

    /// Upper degree `u(x, y)`: `φ(x, y)` when known, `+φ*` otherwise.
    #[inline]
    pub fn upper(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).unwrap_or(self.phi_star)
    }

    /// Lower degree `d(x, y)`: `φ(x, y)` when known, `−φ*` otherwise.
    #[inline]
    pub fn lower(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).unwrap_or(-self.phi_star)
    }

    /// `(u(x, y), d(x, y))`.
    pub fn bounds(&self, x: &str, y: &str) -> Result<(f64, f64)> {
        let (i, j) = (self.base.index_of(x)?, self.base.index_of(y)?);
        Ok((self.upper(i, j), self.lower(i, j)))
    }

    /// `f_d(x) = Σ_y λ(y) d(x, y)` and `f_u(x) = Σ_y λ(y) u(x, y)`.
    pub fn interval_utilities(&self, w: &WeightVector) -> Result<IntervalEstimate> {
        self.base.ensure_same(w.base())?;
        let n = self.len();
        let weighted = |f: &dyn Fn(usize, usize) -> f64, x: usize| (0..n).map(|y| w.get(y) * f(x, y)).sum();
        let lower = (0..n).map(|x| weighted(&|x, y| self.lower(x, y), x)).collect();
        let upper = (0..n).map(|x| weighted(&|x, y| self.upper(x, y), x)).collect();
        let (_, missing_mass) = self.known_and_missing(w)?;
        Ok(IntervalEstimate {
            base: self.base.clone(),
            lower,
            upper,
            missing_mass,
            phi_star: self.phi_star,
        })
    }

    /// `φ̄(x) = Σ_{y ∈ X₁(x)} λ(y) φ(x, y)` and `μ(x) = Σ_{y ∈ X₂(x)} λ(y)`.
    pub fn known_and_missing(&self, w: &WeightVector) -> Result<(Vec<f64>, Vec<f64>)> {
        self.base.ensure_same(w.base())?;
        let n = self.len();
        let known = (0..n)
            .map(|x| (0..n).filter_map(|y| self.get(x, y).map(|v| w.get(y) * v)).sum())
            .collect();
        let missing = (0..n)
            .map(|x| (0..n).filter(|&y| !self.is_present(x, y)).map(|y| w.get(y)).sum())
            .collect();
        Ok((known, missing))
    }

    /// Integral upper and lower degrees
    /// `U(x, y) = Σ_r λ(r) [u(x, r) − d(y, r)]`,
    /// `D(x, y) = Σ_r λ(r) [d(x, r) − u(y, r)]`.
    pub fn integral_bounds(&self, w: &WeightVector) -> Result<IntegralBounds> {
        self.base.ensure_same(w.base())?;
        let n = self.len();
        let mut upper = vec![0.0; n * n];
        let mut lower = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (mut u, mut d) = (0.0, 0.0);
                for r in 0..n {
                    u += w.get(r) * (self.upper(x, r) - self.lower(y, r));
                    d += w.get(r) * (self.lower(x, r) - self.upper(y, r));
                }
                upper[x * n + y] = u;
                lower[x * n + y] = d;
            }
        }
        Ok(IntegralBounds {
            base: self.base.clone(),
            upper,
            lower,
        })
    }

    /// Records a newly obtained comparison `φ(x, y) = value`. Known pairs
    /// cannot be overwritten.
    pub fn refine(&self, x: &str, y: &str, value: f64) -> Result<Self> {
        let (i, j) = (self.base.index_of(x)?, self.base.index_of(y)?);
        if i == j {
            return Err(Error::DiagonalPair(x.into()));
        }
        if self.is_present(i, j) {
            return Err(Error::PairAlreadyPresent(x.into(), y.into()));
        }
        if !value.is_finite() {
            return Err(Error::NonFinite {
                row: x.into(),
                col: y.into(),
            });
        }
        if value.abs() > self.phi_star {
            return Err(Error::OutOfBound {
                row: x.into(),
                col: y.into(),
                value,
                bound: self.phi_star,
            });
        }
        let n = self.len();
        let mut next = self.clone();
        next.values[i * n + j] = value;
        next.values[j * n + i] = -value;
        next.present[i * n + j] = true;
        next.present[j * n + i] = true;
        Ok(next)
    }
}

impl fmt::Debug for PartialSdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let rows: Vec<Vec<Option<f64>>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        f.debug_struct("PartialSdMatrix")
            .field("base", &self.base)
            .field("rows", &rows)
            .field("phi_star", &self.phi_star)
            .finish()
    }
}

/// `U` and `D` matrices of a partial matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralBounds {
    base: AlternativeSet,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl IntegralBounds {
    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    #[inline]
    pub fn upper(&self, i: usize, j: usize) -> f64 {
        self.upper[i * self.base.len() + j]
    }

    #[inline]
    pub fn lower(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.base.len() + j]
    }

    pub fn upper_rows(&self) -> Vec<Vec<f64>> {
        self.upper.chunks(self.base.len()).map(<[f64]>::to_vec).collect()
    }

    pub fn lower_rows(&self) -> Vec<Vec<f64>> {
        self.lower.chunks(self.base.len()).map(<[f64]>::to_vec).collect()
    }
}

/// Per-alternative utility intervals.
#[derive(Clone, PartialEq)]
pub struct IntervalEstimate {
    base: AlternativeSet,
    lower: Vec<f64>,
    upper: Vec<f64>,
    missing_mass: Vec<f64>,
    phi_star: f64,
}

impl IntervalEstimate {
    /// Builds the intervals `φ̄(x) ∓ μ(x)·φ*`.
    pub fn from_known_and_missing(
        base: &AlternativeSet,
        known: &[f64],
        missing_mass: &[f64],
        phi_star: f64,
    ) -> Result<Self> {
        for len in [known.len(), missing_mass.len()] {
            if len != base.len() {
                return Err(Error::DimensionMismatch {
                    expected: base.len(),
                    found: len,
                });
            }
        }
        Ok(Self {
            base: base.clone(),
            lower: known.iter().zip(missing_mass).map(|(k, m)| k - m * phi_star).collect(),
            upper: known.iter().zip(missing_mass).map(|(k, m)| k + m * phi_star).collect(),
            missing_mass: missing_mass.to_vec(),
            phi_star,
        })
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    /// `f_d`.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `f_u`.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `μ(x)`.
    pub fn missing_mass(&self) -> &[f64] {
        &self.missing_mass
    }

    pub fn phi_star(&self) -> f64 {
        self.phi_star
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    /// Every interval of `self` lies inside the matching interval of `outer`,
    /// up to `eps`.
    pub fn is_within(&self, outer: &IntervalEstimate, eps: f64) -> Result<bool> {
        self.base.ensure_same(&outer.base)?;
        Ok((0..self.base.len())
            .all(|i| self.lower[i] >= outer.lower[i] - eps && self.upper[i] <= outer.upper[i] + eps))
    }

    pub fn max_abs_diff(&self, other: &IntervalEstimate) -> Result<f64> {
        self.base.ensure_same(&other.base)?;
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
        Ok(d(&self.lower, &other.lower)
            .max(d(&self.upper, &other.upper))
            .max(d(&self.missing_mass, &other.missing_mass)))
    }
}

impl fmt::Debug for IntervalEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for i in 0..self.base.len() {
            m.entry(&self.base.id(i), &[self.lower[i], self.upper[i]]);
        }
        m.finish()
    }
}

/// Size of the missing information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissingInfo {
    /// `Σ_x λ(x) μ(x)`.
    pub mean: f64,
    /// `max_x μ(x)`.
    pub max: f64,
    /// `Σ λ(x)` over the alternatives with `μ(x) > 0`.
    pub sum: f64,
}

pub fn missing_info(est: &IntervalEstimate, w: &WeightVector) -> Result<MissingInfo> {
    est.base.ensure_same(w.base())?;
    let mu = &est.missing_mass;
    Ok(MissingInfo {
        mean: mu.iter().enumerate().map(|(x, m)| w.get(x) * m).sum(),
        max: mu.iter().copied().fold(0.0, f64::max),
        sum: mu
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(x, _)| w.get(x))
            .sum(),
    })
}

/// Strict interval dominance: `(x, y)` when `f_d(x) > f_u(y)`. Touching
/// intervals stay incomparable.
pub fn interval_order(est: &IntervalEstimate) -> PreferenceRelation {
    PreferenceRelation::from_fn(&est.base, |i, j| est.lower[i] > est.upper[j])
}

/// Per-pair counts of a panel that may contain abstentions.
///
/// `a(x, y)` counts votes for `x`, `b(x, y)` votes for `y`, `p(x, y)`
/// experts who could not compare. A tie adds ½ to both `a` and `b`, so
/// `a + b + p = N` on every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstentionTally {
    base: AlternativeSet,
    votes_for: Vec<f64>,
    votes_against: Vec<f64>,
    abstained: Vec<f64>,
    experts: usize,
}

impl AbstentionTally {
    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn experts(&self) -> usize {
        self.experts
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.base.len() + j
    }

    /// `a(x, y)`.
    pub fn votes_for(&self, i: usize, j: usize) -> f64 {
        self.votes_for[self.idx(i, j)]
    }

    /// `b(x, y)`.
    pub fn votes_against(&self, i: usize, j: usize) -> f64 {
        self.votes_against[self.idx(i, j)]
    }

    /// `p(x, y)`.
    pub fn abstained(&self, i: usize, j: usize) -> f64 {
        self.abstained[self.idx(i, j)]
    }

    /// `φ(x, y) = a − b`.
    pub fn degree(&self, i: usize, j: usize) -> f64 {
        self.votes_for(i, j) - self.votes_against(i, j)
    }

    /// `d(x, y) = (a − b) − p`.
    pub fn lower(&self, i: usize, j: usize) -> f64 {
        self.degree(i, j) - self.abstained(i, j)
    }

    /// `u(x, y) = (a − b) + p`.
    pub fn upper(&self, i: usize, j: usize) -> f64 {
        self.degree(i, j) + self.abstained(i, j)
    }

    pub fn degree_matrix(&self) -> SdMatrix {
        SdMatrix::from_upper(&self.base, |i, j| self.degree(i, j))
    }
}

pub fn abstention_tally(vpr: &VectorPreferenceRelation) -> AbstentionTally {
    let base = vpr.base();
    let n = base.len();
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n * n];
    let mut p = vec![0.0; n * n];
    for (_, r) in vpr.experts() {
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                if i == j {
                    a[k] += 0.5;
                    b[k] += 0.5;
                    continue;
                }
                match (r.contains(i, j), r.contains(j, i)) {
                    (true, true) => {
                        a[k] += 0.5;
                        b[k] += 0.5;
                    }
                    (true, false) => a[k] += 1.0,
                    (false, true) => b[k] += 1.0,
                    (false, false) => p[k] += 1.0,
                }
            }
        }
    }
    AbstentionTally {
        base: base.clone(),
        votes_for: a,
        votes_against: b,
        abstained: p,
        experts: vpr.len(),
    }
}

/// Group intervals `f_d(x) = Σ λ φ − Σ λ p`, `f_u(x) = Σ λ φ + Σ λ p`.
/// With `φ* = N`, the missing mass is `μ(x) = Σ_y λ(y) p(x, y) / N`.
pub fn group_intervals(t: &AbstentionTally, w: &WeightVector) -> Result<IntervalEstimate> {
    t.base.ensure_same(w.base())?;
    let n = t.base.len();
    let sum = |f: &dyn Fn(usize) -> f64| -> f64 { (0..n).map(|y| w.get(y) * f(y)).sum() };
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut missing_mass = Vec::with_capacity(n);
    let big_n = t.experts as f64;
    for x in 0..n {
        let phi = sum(&|y| t.degree(x, y));
        let abst = sum(&|y| t.abstained(x, y));
        lower.push(phi - abst);
        upper.push(phi + abst);
        missing_mass.push(abst / big_n);
    }
    Ok(IntervalEstimate {
        base: t.base.clone(),
        lower,
        upper,
        missing_mass,
        phi_star: big_n,
    })
}
