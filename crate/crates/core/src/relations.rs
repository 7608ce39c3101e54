//! Binary preference relations over a finite set of alternatives.
//!
//! A relation is a dense boolean matrix indexed by the order of its
//! [`AlternativeSet`]. Every relation splits into an identity part
//! (`R ∩ R⁻¹`) and a strict part (`R \ R⁻¹`); the core collects the
//! alternatives that nothing strictly dominates.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug)]
struct AltInner {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

/// Ordered, duplicate-free set of alternative ids. Cheap to clone.
#[derive(Clone)]
pub struct AlternativeSet(Arc<AltInner>);

impl AlternativeSet {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::EmptyAlternatives);
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateAlternative(id.clone()));
            }
        }
        Ok(Self(Arc::new(AltInner { ids, index })))
    }

    pub fn len(&self) -> usize {
        self.0.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> &[String] {
        &self.0.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.0.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.0
            .index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownAlternative(id.to_string()))
    }

    pub(crate) fn ensure_same(&self, other: &AlternativeSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }
}

impl PartialEq for AlternativeSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.ids == other.0.ids
    }
}

impl Eq for AlternativeSet {}

impl fmt::Debug for AlternativeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.ids()).finish()
    }
}

/// A relation `R ⊆ X × X`.
#[derive(Clone, PartialEq, Eq)]
pub struct PreferenceRelation {
    base: AlternativeSet,
    member: Vec<bool>,
}

impl PreferenceRelation {
    pub fn empty(base: &AlternativeSet) -> Self {
        let n = base.len();
        Self {
            base: base.clone(),
            member: vec![false; n * n],
        }
    }

    /// The full relation `E = X × X`.
    pub fn full(base: &AlternativeSet) -> Self {
        let n = base.len();
        Self {
            base: base.clone(),
            member: vec![true; n * n],
        }
    }

    /// The diagonal `{(x, x)}`.
    pub fn diagonal(base: &AlternativeSet) -> Self {
        Self::from_fn(base, |i, j| i == j)
    }

    pub fn from_fn(base: &AlternativeSet, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let n = base.len();
        let mut member = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                member.push(f(i, j));
            }
        }
        Self {
            base: base.clone(),
            member,
        }
    }

    pub fn from_pairs<'a, I>(base: &AlternativeSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut r = Self::empty(base);
        for (x, y) in pairs {
            let (i, j) = (base.index_of(x)?, base.index_of(y)?);
            r.insert(i, j);
        }
        Ok(r)
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&m| m)
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.member[i * self.len() + j]
    }

    pub fn contains_ids(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.contains(self.base.index_of(x)?, self.base.index_of(y)?))
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        let n = self.len();
        self.member[i * n + j] = true;
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        let n = self.len();
        self.member[i * n + j] = false;
    }

    /// Member pairs as index tuples, row-major.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.contains(i, j))
            .collect()
    }

    /// Member pairs as id tuples, row-major.
    pub fn id_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .into_iter()
            .map(|(i, j)| (self.base.id(i).to_string(), self.base.id(j).to_string()))
            .collect()
    }

    pub fn inverse(&self) -> Self {
        Self::from_fn(&self.base, |i, j| self.contains(j, i))
    }

    /// `R ∩ R⁻¹`.
    pub fn identity_part(&self) -> Self {
        Self::from_fn(&self.base, |i, j| self.contains(i, j) && self.contains(j, i))
    }

    /// `R \ R⁻¹`.
    pub fn strict_part(&self) -> Self {
        Self::from_fn(&self.base, |i, j| self.contains(i, j) && !self.contains(j, i))
    }

    pub fn decompose(&self) -> (Self, Self) {
        (self.identity_part(), self.strict_part())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.contains(i, j) || self.contains(j, i)))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if !self.contains(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.contains(j, k) && !self.contains(i, k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.len()).all(|i| !self.contains(i, i))
    }

    /// Pareto set: alternatives not strictly dominated by any other.
    pub fn core(&self) -> Core {
        let n = self.len();
        // Column scan of the strict part without materializing it.
        let members = (0..n)
            .filter(|&x| !(0..n).any(|y| self.contains(y, x) && !self.contains(x, y)))
            .collect();
        Core {
            base: self.base.clone(),
            members,
        }
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.base.ensure_same(&other.base)?;
        Ok(self
            .member
            .iter()
            .zip(&other.member)
            .all(|(&a, &b)| !a || b))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && !b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        self.base.ensure_same(&other.base)?;
        Ok(Self {
            base: self.base.clone(),
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `self` is coordinated with `other` when both its strict and identity
    /// parts are contained in the matching parts of `other`.
    pub fn is_coordinated_with(&self, other: &Self) -> Result<bool> {
        self.base.ensure_same(&other.base)?;
        let (e1, s1) = self.decompose();
        let (e2, s2) = other.decompose();
        Ok(s1.is_subset(&s2)? && e1.is_subset(&e2)?)
    }

    pub fn to_literal(&self) -> RelationLiteral {
        RelationLiteral {
            alternatives: self.base.ids().to_vec(),
            pairs: self
                .id_pairs()
                .into_iter()
                .map(|(x, y)| [x, y])
                .collect(),
        }
    }
}

impl fmt::Debug for PreferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.id_pairs()).finish()
    }
}

/// The core `X_Π(R)` of a relation.
#[derive(Clone, PartialEq, Eq)]
pub struct Core {
    base: AlternativeSet,
    members: Vec<usize>,
}

impl Core {
    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    /// Member indices in ascending order.
    pub fn indices(&self) -> &[usize] {
        &self.members
    }

    pub fn ids(&self) -> Vec<String> {
        self.members
            .iter()
            .map(|&i| self.base.id(i).to_string())
            .collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Core) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn is_everything(&self) -> bool {
        self.members.len() == self.base.len()
    }
}

impl fmt::Debug for Core {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids()).finish()
    }
}

/// `{"alternatives": [...], "pairs": [["a","b"], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationLiteral {
    pub alternatives: Vec<String>,
    #[serde(default)]
    pub pairs: Vec<[String; 2]>,
}

impl RelationLiteral {
    pub fn into_relation(self) -> Result<PreferenceRelation> {
        let base = AlternativeSet::new(self.alternatives)?;
        PreferenceRelation::from_pairs(&base, self.pairs.iter().map(|[x, y]| (x.as_str(), y.as_str())))
    }
}
