//! Superiority-degree matrices and the utilities they induce.
//!
//! An [`SdMatrix`] holds a skew-symmetric score `φ(x, y)` telling how much
//! `x` outranks `y`. When `φ` is additively transitive it is a difference of
//! potentials, and [`SdMatrix::potential`] recovers them. When it is not,
//! the integral degree [`SdMatrix::isd`] compares every pair through all
//! reference points and is always transitive, so [`SdMatrix::utility`]
//! yields an order for any input.
//!
//! All utilities live on a differences scale: only their differences and
//! the order they induce carry meaning.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{AlternativeSet, PreferenceRelation};

/// Default tolerance for class checks on exact inputs.
pub const EPS: f64 = 1e-9;

/// Significance weights `λ(x) ≥ 0` with `Σ λ(x) = 1`.
#[derive(Clone, PartialEq)]
pub struct WeightVector {
    base: AlternativeSet,
    values: Vec<f64>,
}

impl WeightVector {
    /// Tolerance on the unit-sum check.
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(base: &AlternativeSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: values.len(),
            });
        }
        check_convex(&values)?;
        Ok(Self {
            base: base.clone(),
            values,
        })
    }

    /// `λ(x) = 1/n`.
    pub fn uniform(base: &AlternativeSet) -> Self {
        let n = base.len();
        Self {
            base: base.clone(),
            values: vec![1.0 / n as f64; n],
        }
    }

    /// Builds weights from `(id, λ)` pairs; every alternative must appear once.
    pub fn from_ids<'a, I>(base: &AlternativeSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut values = vec![None; base.len()];
        for (id, v) in entries {
            let i = base.index_of(id)?;
            if values[i].replace(v).is_some() {
                return Err(Error::InvalidWeights(format!("weight for `{id}` given twice")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::InvalidWeights(format!("missing weight for `{}`", base.id(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, values)
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.base.ids().iter().zip(&self.values))
            .finish()
    }
}

pub(crate) fn check_convex(values: &[f64]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidWeights(format!("weight {v} is negative or not finite")));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > WeightVector::SUM_TOLERANCE {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// Membership in the classes H (skew-symmetric), T (additively transitive)
/// and S (max-dominating).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    pub in_h: bool,
    pub in_t: bool,
    pub in_s: bool,
}

/// A square skew-symmetric matrix of superiority degrees.
#[derive(Clone, PartialEq)]
pub struct SdMatrix {
    base: AlternativeSet,
    values: Vec<f64>,
}

impl SdMatrix {
    /// Validates skew-symmetry and the zero diagonal at [`EPS`].
    pub fn new(base: &AlternativeSet, values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(base, values, EPS)
    }

    pub fn with_tolerance(base: &AlternativeSet, values: Vec<f64>, eps: f64) -> Result<Self> {
        let n = base.len();
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: base.id(i).into(),
                        col: base.id(j).into(),
                    });
                }
            }
        }
        for i in 0..n {
            if values[i * n + i].abs() > eps {
                return Err(Error::NonzeroDiagonal(base.id(i).into()));
            }
            for j in (i + 1)..n {
                let (fwd, bwd) = (values[i * n + j], values[j * n + i]);
                if (fwd + bwd).abs() > eps {
                    return Err(Error::NotSkewSymmetric {
                        row: base.id(i).into(),
                        col: base.id(j).into(),
                        forward: fwd,
                        backward: bwd,
                    });
                }
            }
        }
        Ok(Self {
            base: base.clone(),
            values,
        })
    }

    pub fn from_rows(base: &AlternativeSet, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = base.len();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut values = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            values.extend(row);
        }
        Self::new(base, values)
    }

    /// Fills the strict upper triangle from `f(i, j)` and mirrors it.
    pub fn from_upper(base: &AlternativeSet, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = base.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = -v;
            }
        }
        Self {
            base: base.clone(),
            values,
        }
    }

    /// `φ(x, y) = f(x) − f(y)`; always in H ∩ T.
    pub fn from_potential(base: &AlternativeSet, f: &[f64]) -> Result<Self> {
        if f.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: f.len(),
            });
        }
        Ok(Self::from_upper(base, |i, j| f[i] - f[j]))
    }

    /// Named upper-triangle entries; unnamed pairs are zero.
    pub fn from_entries<'a, I>(base: &AlternativeSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let n = base.len();
        let mut values = vec![0.0; n * n];
        for (x, y, v) in entries {
            let (i, j) = (base.index_of(x)?, base.index_of(y)?);
            values[i * n + j] = v;
            values[j * n + i] = -v;
        }
        Self::new(base, values)
    }

    pub fn zero(base: &AlternativeSet) -> Self {
        Self::from_upper(base, |_, _| 0.0)
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn get_ids(&self, x: &str, y: &str) -> Result<f64> {
        Ok(self.get(self.base.index_of(x)?, self.base.index_of(y)?))
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.len()).map(<[f64]>::to_vec).collect()
    }

    /// `φ* = max |φ(x, y)|`.
    pub fn phi_star(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    pub fn negated(&self) -> Self {
        self.map(|v| -v)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            base: self.base.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &SdMatrix) -> Result<f64> {
        self.base.ensure_same(&other.base)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn classify(&self, eps: f64) -> ClassFlags {
        ClassFlags {
            in_h: self.is_skew_symmetric(eps),
            in_t: self.is_additive(eps),
            in_s: self.is_max_dominating(eps),
        }
    }

    fn is_skew_symmetric(&self, eps: f64) -> bool {
        let n = self.len();
        (0..n).all(|i| (i..n).all(|j| (self.get(i, j) + self.get(j, i)).abs() <= eps))
    }

    /// `φ(x, z) + φ(z, y) = φ(x, y)` for every triple.
    fn is_additive(&self, eps: f64) -> bool {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if (self.get(x, z) + self.get(z, y) - self.get(x, y)).abs() > eps {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `φ(x, y) ≥ max{φ(x, z), φ(z, y)}` for every `x ≠ y` and every `z`
    /// distinct from both.
    fn is_max_dominating(&self, eps: f64) -> bool {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                for z in 0..n {
                    if z == x || z == y {
                        continue;
                    }
                    if self.get(x, y) < self.get(x, z).max(self.get(z, y)) - eps {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `Σ_x Σ_y λ(x) λ(y) φ(x, y)`, zero for every skew-symmetric matrix.
    pub fn weighted_total(&self, w: &WeightVector) -> Result<f64> {
        self.base.ensure_same(w.base())?;
        let n = self.len();
        let mut total = 0.0;
        for x in 0..n {
            for y in 0..n {
                total += w.get(x) * w.get(y) * self.get(x, y);
            }
        }
        Ok(total)
    }

    /// Integral superiority degree `F(x, y) = Σ_z λ(z) [φ(x, z) − φ(y, z)]`.
    pub fn isd(&self, w: &WeightVector) -> Result<SdMatrix> {
        self.base.ensure_same(w.base())?;
        let n = self.len();
        let mut values = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                values[x * n + y] = (0..n)
                    .map(|z| w.get(z) * (self.get(x, z) - self.get(y, z)))
                    .sum();
            }
        }
        Ok(SdMatrix {
            base: self.base.clone(),
            values,
        })
    }

    /// `f(x) = Σ_y λ(y) φ(x, y)`. Exact potential when the matrix is in T;
    /// computed regardless otherwise.
    pub fn potential(&self, w: &WeightVector) -> Result<UtilityVector> {
        self.base.ensure_same(w.base())?;
        let n = self.len();
        let values = (0..n)
            .map(|x| (0..n).map(|y| w.get(y) * self.get(x, y)).sum())
            .collect();
        Ok(UtilityVector {
            base: self.base.clone(),
            values,
        })
    }

    /// `q = potential(isd(φ))`; orders the alternatives for any input.
    pub fn utility(&self, w: &WeightVector) -> Result<UtilityVector> {
        self.isd(w)?.potential(w)
    }

    /// Strict pairs of `r` must score above `eps` and its identity pairs
    /// within `eps` of zero. Nothing is required of pairs outside `r`.
    pub fn is_coordinated_with(&self, r: &PreferenceRelation, eps: f64) -> Result<bool> {
        self.base.ensure_same(r.base())?;
        let (identity, strict) = r.decompose();
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if strict.contains(i, j) && self.get(i, j) <= eps {
                    return Ok(false);
                }
                if identity.contains(i, j) && self.get(i, j).abs() > eps {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for SdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SdMatrix")
            .field("base", &self.base)
            .field("rows", &self.rows())
            .finish()
    }
}

/// Scale on which utilities are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Only differences between values are meaningful.
    Differences,
}

/// A utility (or potential) value per alternative.
#[derive(Clone, PartialEq)]
pub struct UtilityVector {
    base: AlternativeSet,
    values: Vec<f64>,
}

impl UtilityVector {
    pub fn new(base: &AlternativeSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            base: base.clone(),
            values,
        })
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn scale(&self) -> Scale {
        Scale::Differences
    }

    pub fn max_abs_diff(&self, other: &UtilityVector) -> Result<f64> {
        self.base.ensure_same(&other.base)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Indices sorted best-first, grouped into ties (values within `eps`).
    /// Inside a tie group, ids are in lexicographic order.
    pub fn tiers(&self, eps: f64) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| {
            self.values[b]
                .partial_cmp(&self.values[a])
                .unwrap_or(Ordering::Equal)
                .then_with(|| self.base.id(a).cmp(self.base.id(b)))
        });
        let mut tiers: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match tiers.last_mut() {
                Some(tier) if (self.values[tier[0]] - self.values[i]).abs() <= eps => tier.push(i),
                _ => tiers.push(vec![i]),
            }
        }
        for tier in &mut tiers {
            tier.sort_by(|&a, &b| self.base.id(a).cmp(self.base.id(b)));
        }
        tiers
    }

    pub fn ranking(&self, eps: f64) -> Vec<Vec<String>> {
        self.tiers(eps)
            .into_iter()
            .map(|t| t.into_iter().map(|i| self.base.id(i).to_string()).collect())
            .collect()
    }

    /// `{(x, y) : value(x) ≥ value(y) − eps}`, a connected transitive weak order.
    pub fn weak_order(&self, eps: f64) -> PreferenceRelation {
        PreferenceRelation::from_fn(&self.base, |i, j| self.values[i] >= self.values[j] - eps)
    }
}

impl fmt::Debug for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.base.ids().iter().zip(&self.values))
            .finish()
    }
}

/// Several criteria over one alternative set, with criterion weights `λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionFamily {
    base: AlternativeSet,
    criteria: Vec<SdMatrix>,
    weights: Vec<f64>,
}

/// Outcome of the linear convolution of criteria potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct Convolution {
    /// `L(x) = Σ_j λ_j K_j(x)`.
    pub total: UtilityVector,
    /// `K_j(x) = Σ_y λ(y) φ_j(x, y)`.
    pub per_criterion: Vec<UtilityVector>,
    /// Whether the weighted aggregate is in T, i.e. whether `total` is a
    /// faithful potential of it.
    pub aggregate_transitive: bool,
}

impl CriterionFamily {
    pub fn new(criteria: Vec<SdMatrix>, weights: Vec<f64>) -> Result<Self> {
        let first = criteria.first().ok_or(Error::EmptyFamily)?;
        let base = first.base().clone();
        for c in &criteria[1..] {
            base.ensure_same(c.base())?;
        }
        if weights.len() != criteria.len() {
            return Err(Error::DimensionMismatch {
                expected: criteria.len(),
                found: weights.len(),
            });
        }
        check_convex(&weights)?;
        Ok(Self {
            base,
            criteria,
            weights,
        })
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn criteria(&self) -> &[SdMatrix] {
        &self.criteria
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `φ(x, y) = Σ_j λ_j φ_j(x, y)`.
    pub fn aggregate(&self) -> SdMatrix {
        let n = self.base.len();
        let mut values = vec![0.0; n * n];
        for (c, &lambda) in self.criteria.iter().zip(&self.weights) {
            for (acc, v) in values.iter_mut().zip(c.values()) {
                *acc += lambda * v;
            }
        }
        SdMatrix {
            base: self.base.clone(),
            values,
        }
    }

    pub fn convolution(&self, w: &WeightVector) -> Result<Convolution> {
        self.base.ensure_same(w.base())?;
        let per_criterion = self
            .criteria
            .iter()
            .map(|c| c.potential(w))
            .collect::<Result<Vec<_>>>()?;
        let n = self.base.len();
        let total = (0..n)
            .map(|x| {
                per_criterion
                    .iter()
                    .zip(&self.weights)
                    .map(|(k, &lambda)| lambda * k.get(x))
                    .sum()
            })
            .collect();
        Ok(Convolution {
            total: UtilityVector {
                base: self.base.clone(),
                values: total,
            },
            per_criterion,
            aggregate_transitive: self.aggregate().classify(EPS).in_t,
        })
    }
}
