//! Threshold (ℓ-level) relations cut from a superiority-degree matrix.
//!
//! `R(ℓ) = {(x, y) : φ(x, y) ≥ ℓ}`. The non-strict comparison keeps `R(0)`
//! connected; for `ℓ > 0` the relation is strict. Raising `ℓ` only removes
//! pairs, so the cores form a chain that grows toward the whole set.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::relations::{Core, PreferenceRelation};
use crate::superiority::{SdMatrix, WeightVector};

fn check_level(level: f64) -> Result<()> {
    if level >= 0.0 && level.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeLevel(level))
    }
}

/// `R(ℓ) = {(x, y) : φ(x, y) ≥ ℓ}`; `ℓ` above `φ*` gives the empty relation.
pub fn level_relation(m: &SdMatrix, level: f64) -> Result<PreferenceRelation> {
    check_level(level)?;
    Ok(PreferenceRelation::from_fn(m.base(), |i, j| m.get(i, j) >= level))
}

/// `{(x, y) : |φ(x, y)| ≤ eps}`.
pub fn identity_relation(m: &SdMatrix, eps: f64) -> PreferenceRelation {
    PreferenceRelation::from_fn(m.base(), |i, j| m.get(i, j).abs() <= eps)
}

/// `Q(ℓ) = identity ∪ R(ℓ)`, defined for `ℓ > 0` only.
pub fn nonstrict_level_relation(m: &SdMatrix, level: f64, eps: f64) -> Result<PreferenceRelation> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::NonPositiveLevel(level));
    }
    identity_relation(m, eps).union(&level_relation(m, level)?)
}

fn fingerprint(m: &SdMatrix) -> u64 {
    let mut h = DefaultHasher::new();
    m.base().ids().hash(&mut h);
    for v in m.values() {
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

/// A level relation that remembers which matrix it was cut from, so that
/// meets and joins can refuse to mix sources.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRelation {
    source: u64,
    level: f64,
    relation: PreferenceRelation,
}

impl LevelRelation {
    pub fn new(m: &SdMatrix, level: f64) -> Result<Self> {
        Ok(Self {
            source: fingerprint(m),
            level,
            relation: level_relation(m, level)?,
        })
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn relation(&self) -> &PreferenceRelation {
        &self.relation
    }

    pub fn into_relation(self) -> PreferenceRelation {
        self.relation
    }

    fn same_source(&self, other: &Self) -> Result<()> {
        if self.source == other.source {
            Ok(())
        } else {
            Err(Error::ProvenanceMismatch)
        }
    }

    /// Intersection; equals the relation at the higher level.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_source(other)?;
        Ok(Self {
            source: self.source,
            level: self.level.max(other.level),
            relation: self.relation.intersection(&other.relation)?,
        })
    }

    /// Union; equals the relation at the lower level.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_source(other)?;
        Ok(Self {
            source: self.source,
            level: self.level.min(other.level),
            relation: self.relation.union(&other.relation)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rung {
    pub level: f64,
    pub relation: PreferenceRelation,
    pub core: Core,
}

impl Rung {
    pub fn strict_pairs(&self) -> Vec<(String, String)> {
        self.relation.strict_part().id_pairs()
    }
}

/// The nested-core ladder of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelChain {
    source: SdMatrix,
    weights: WeightVector,
    level_star: f64,
    rungs: Vec<Rung>,
}

impl LevelChain {
    pub fn source(&self) -> &SdMatrix {
        &self.source
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// `ℓ* = φ*`: every level above it yields the empty relation and core `X`.
    pub fn level_star(&self) -> f64 {
        self.level_star
    }

    pub fn rungs(&self) -> &[Rung] {
        &self.rungs
    }

    pub fn levels(&self) -> Vec<f64> {
        self.rungs.iter().map(|r| r.level).collect()
    }

    /// The rung governing `level`: the lowest breakpoint at or above it.
    /// `None` above `ℓ*`.
    pub fn rung_at(&self, level: f64) -> Option<&Rung> {
        self.rungs.iter().find(|r| r.level >= level)
    }
}

/// Rungs at `ℓ = 0` and at every distinct positive entry of `m`: the points
/// where `R(ℓ)` changes. Between two breakpoints `b₁ < ℓ ≤ b₂` the relation
/// equals the one at `b₂`.
pub fn ladder(m: &SdMatrix, w: &WeightVector) -> Result<LevelChain> {
    m.base().ensure_same(w.base())?;
    let mut levels: Vec<f64> = m.values().iter().copied().filter(|&v| v > 0.0).collect();
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let rungs = levels
        .into_iter()
        .map(|level| {
            let relation = level_relation(m, level)?;
            let core = relation.core();
            Ok(Rung {
                level,
                relation,
                core,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelChain {
        source: m.clone(),
        weights: w.clone(),
        level_star: m.phi_star(),
        rungs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::relations::AlternativeSet;
    use crate::superiority::EPS;

    fn pairs(r: &PreferenceRelation) -> Vec<(String, String)> {
        r.id_pairs()
    }

    fn p(x: &str, y: &str) -> (String, String) {
        (x.to_string(), y.to_string())
    }

    #[test]
    fn level_relation_examples() {
        let t = fixtures::fix_t();
        assert_eq!(
            pairs(&level_relation(&t, 1.5).unwrap()),
            vec![p("a", "b"), p("a", "c")]
        );
        let r0 = level_relation(&t, 0.0).unwrap();
        assert_eq!(
            pairs(&r0),
            vec![p("a", "a"), p("a", "b"), p("a", "c"), p("b", "b"), p("b", "c"), p("c", "c")]
        );
        assert!(r0.is_connected());
        assert!(level_relation(&t, 3.5).unwrap().is_empty());
        assert_eq!(
            level_relation(&t, -0.1).unwrap_err(),
            Error::NegativeLevel(-0.1)
        );
        assert!(level_relation(&t, f64::NAN).is_err());
    }

    #[test]
    fn inverse_level_relation_is_the_mirror_cut() {
        let t = fixtures::fix_nt();
        let inv = level_relation(&t, 1.0).unwrap().inverse();
        let mirrored = PreferenceRelation::from_fn(t.base(), |i, j| t.get(i, j) <= -1.0);
        assert_eq!(inv, mirrored);
    }

    #[test]
    fn identity_relation_examples() {
        let base = fixtures::abc();
        assert_eq!(
            identity_relation(&fixtures::fix_t(), EPS),
            PreferenceRelation::diagonal(&base)
        );
        assert_eq!(
            identity_relation(&SdMatrix::zero(&base), EPS),
            PreferenceRelation::full(&base)
        );
        assert_eq!(
            identity_relation(&fixtures::fix_cycle(), EPS),
            PreferenceRelation::diagonal(&base)
        );
    }

    #[test]
    fn nonstrict_examples() {
        let base = fixtures::abc();
        let t = fixtures::fix_t();
        let q = nonstrict_level_relation(&t, 1.5, EPS).unwrap();
        let expected = PreferenceRelation::diagonal(&base)
            .union(&PreferenceRelation::from_pairs(&base, [("a", "b"), ("a", "c")]).unwrap())
            .unwrap();
        assert_eq!(q, expected);
        assert_eq!(
            nonstrict_level_relation(&SdMatrix::zero(&base), 0.7, EPS).unwrap(),
            PreferenceRelation::full(&base)
        );
        assert_eq!(
            nonstrict_level_relation(&t, 4.0, EPS).unwrap(),
            PreferenceRelation::diagonal(&base)
        );
        assert_eq!(
            nonstrict_level_relation(&t, 0.0, EPS).unwrap_err(),
            Error::NonPositiveLevel(0.0)
        );
    }

    #[test]
    fn ladder_of_transitive_fixture() {
        let t = fixtures::fix_t();
        let chain = ladder(&t, &WeightVector::uniform(t.base())).unwrap();
        assert_eq!(chain.levels(), vec![0.0, 1.0, 2.0, 3.0]);
        let cores: Vec<Vec<String>> = chain.rungs().iter().map(|r| r.core.ids()).collect();
        assert_eq!(cores, vec![vec!["a"], vec!["a"], vec!["a"], vec!["a", "b"]]);
        assert_eq!(chain.level_star(), 3.0);
        assert_eq!(chain.rung_at(2.5).unwrap().level, 3.0);
        assert!(chain.rung_at(3.5).is_none());
    }

    #[test]
    fn ladder_of_zero_matrix() {
        let base = fixtures::abc();
        let chain = ladder(&SdMatrix::zero(&base), &WeightVector::uniform(&base)).unwrap();
        assert_eq!(chain.levels(), vec![0.0]);
        assert!(chain.rungs()[0].core.is_everything());
    }

    #[test]
    fn ladder_of_cycle() {
        let c = fixtures::fix_cycle();
        let chain = ladder(&c, &WeightVector::uniform(c.base())).unwrap();
        assert_eq!(chain.levels(), vec![0.0, 1.0]);
        assert!(chain.rungs().iter().all(|r| r.core.is_empty()));
        assert!(level_relation(&c, 1.0 + 1e-6).unwrap().core().is_everything());
    }

    #[test]
    fn ladder_of_single_alternative() {
        let base = AlternativeSet::new(["a"]).unwrap();
        let chain = ladder(&SdMatrix::zero(&base), &WeightVector::uniform(&base)).unwrap();
        assert_eq!(chain.rungs().len(), 1);
        assert_eq!(chain.rungs()[0].core.ids(), vec!["a"]);
    }

    #[test]
    fn meet_and_join() {
        let t = fixtures::fix_t();
        let r1 = LevelRelation::new(&t, 1.5).unwrap();
        let r2 = LevelRelation::new(&t, 2.5).unwrap();
        let meet = r1.meet(&r2).unwrap();
        assert_eq!(meet.level(), 2.5);
        assert_eq!(pairs(meet.relation()), vec![p("a", "c")]);
        let join = r1.join(&r2).unwrap();
        assert_eq!(join.level(), 1.5);
        assert_eq!(pairs(join.relation()), vec![p("a", "b"), p("a", "c")]);

        assert_eq!(r1.meet(&r1).unwrap(), r1);
        let zero = LevelRelation::new(&t, 0.0).unwrap();
        assert_eq!(zero.join(&r2).unwrap().relation(), zero.relation());

        let other = LevelRelation::new(&fixtures::fix_nt(), 1.5).unwrap();
        assert_eq!(r1.meet(&other).unwrap_err(), Error::ProvenanceMismatch);
        assert_eq!(r1.join(&other).unwrap_err(), Error::ProvenanceMismatch);
    }
}
