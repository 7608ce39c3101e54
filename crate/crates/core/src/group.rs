//! Group decisions over a panel of expert relations.
//!
//! Each expert contributes `δ_ij ∈ {0, ½, 1}` per ordered pair; the tallies
//! `n_ij` feed majority voting, the Copeland K-procedure and the group
//! superiority degree `Z_ij = n_ij − n_ji`. Cutting the integral degree of
//! `Z` at a level `ℓ` gives the ℓ-level group decision.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{AlternativeSet, Core, PreferenceRelation};
use crate::superiority::{SdMatrix, UtilityVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `x` preferred.
    X,
    /// `y` preferred.
    Y,
    Tie,
    Abstain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub x: String,
    pub y: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BallotContent {
    /// Best first; expands to the full strict order plus reflexive ties.
    Order { order: Vec<String> },
    /// Explicit verdicts; unmentioned pairs stay incomparable.
    Pairs { pairs: Vec<PairVerdict> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ballot {
    pub id: String,
    #[serde(flatten)]
    pub content: BallotContent,
}

impl Ballot {
    pub fn order<I, S>(id: impl Into<String>, order: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            id: id.into(),
            content: BallotContent::Order {
                order: order.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn pairs(id: impl Into<String>, pairs: Vec<PairVerdict>) -> Self {
        Self {
            id: id.into(),
            content: BallotContent::Pairs { pairs },
        }
    }

    pub fn has_abstentions(&self, base: &AlternativeSet) -> bool {
        match &self.content {
            BallotContent::Order { .. } => false,
            BallotContent::Pairs { pairs } => {
                let n = base.len();
                let decided: BTreeSet<(String, String)> = pairs
                    .iter()
                    .filter(|p| p.verdict != Verdict::Abstain && p.x != p.y)
                    .map(|p| {
                        let (a, b) = (p.x.clone(), p.y.clone());
                        if a < b { (a, b) } else { (b, a) }
                    })
                    .collect();
                decided.len() < n * (n - 1) / 2
            }
        }
    }

    fn to_relation(&self, base: &AlternativeSet) -> Result<PreferenceRelation> {
        let mut r = PreferenceRelation::diagonal(base);
        match &self.content {
            BallotContent::Order { order } => {
                let idx = order
                    .iter()
                    .map(|id| base.index_of(id))
                    .collect::<Result<Vec<_>>>()?;
                let mut seen = vec![false; base.len()];
                for &i in &idx {
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(Error::DuplicateAlternative(base.id(i).into()));
                    }
                }
                if idx.len() != base.len() {
                    return Err(Error::DimensionMismatch {
                        expected: base.len(),
                        found: idx.len(),
                    });
                }
                for (k, &i) in idx.iter().enumerate() {
                    for &j in &idx[k + 1..] {
                        r.insert(i, j);
                    }
                }
            }
            BallotContent::Pairs { pairs } => {
                let mut verdicts = vec![None; base.len() * base.len()];
                for p in pairs {
                    let (i, j) = (base.index_of(&p.x)?, base.index_of(&p.y)?);
                    if i == j {
                        continue;
                    }
                    let (lo, hi, v) = if i < j {
                        (i, j, p.verdict)
                    } else {
                        let flipped = match p.verdict {
                            Verdict::X => Verdict::Y,
                            Verdict::Y => Verdict::X,
                            other => other,
                        };
                        (j, i, flipped)
                    };
                    let slot = &mut verdicts[lo * base.len() + hi];
                    match slot {
                        Some(prev) if *prev != v => {
                            return Err(Error::ConflictingVerdict {
                                expert: self.id.clone(),
                                x: p.x.clone(),
                                y: p.y.clone(),
                            })
                        }
                        _ => *slot = Some(v),
                    }
                    match v {
                        Verdict::X => r.insert(lo, hi),
                        Verdict::Y => r.insert(hi, lo),
                        Verdict::Tie => {
                            r.insert(lo, hi);
                            r.insert(hi, lo);
                        }
                        Verdict::Abstain => {}
                    }
                }
            }
        }
        Ok(r)
    }

    /// Canonical ballot for a relation: an order when the relation is a
    /// strict linear order plus reflexive pairs, explicit verdicts otherwise.
    pub fn from_relation(id: impl Into<String>, r: &PreferenceRelation) -> Self {
        let base = r.base();
        let n = base.len();
        let is_linear = r.is_connected()
            && r.is_transitive()
            && (0..n).all(|i| (0..n).all(|j| i == j || !(r.contains(i, j) && r.contains(j, i))));
        if is_linear {
            let mut idx: Vec<usize> = (0..n).collect();
            let wins = |i: usize| (0..n).filter(|&j| j != i && r.contains(i, j)).count();
            idx.sort_by_key(|&i| std::cmp::Reverse(wins(i)));
            return Self::order(id, idx.into_iter().map(|i| base.id(i).to_string()));
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let verdict = match (r.contains(i, j), r.contains(j, i)) {
                    (true, true) => Verdict::Tie,
                    (true, false) => Verdict::X,
                    (false, true) => Verdict::Y,
                    (false, false) => Verdict::Abstain,
                };
                pairs.push(PairVerdict {
                    x: base.id(i).into(),
                    y: base.id(j).into(),
                    verdict,
                });
            }
        }
        Self::pairs(id, pairs)
    }
}

/// `{"alternatives": [...], "experts": [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallotFile {
    pub alternatives: Vec<String>,
    pub experts: Vec<Ballot>,
}

impl BallotFile {
    pub fn into_panel(self) -> Result<VectorPreferenceRelation> {
        let base = AlternativeSet::new(self.alternatives)?;
        VectorPreferenceRelation::from_ballots(&base, &self.experts)
    }

    pub fn has_abstentions(&self) -> Result<bool> {
        let base = AlternativeSet::new(self.alternatives.clone())?;
        Ok(self.experts.iter().any(|b| b.has_abstentions(&base)))
    }
}

/// One relation per expert over a shared alternative set. Relations need
/// not be transitive or connected.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPreferenceRelation {
    base: AlternativeSet,
    experts: Vec<(String, PreferenceRelation)>,
}

impl VectorPreferenceRelation {
    pub fn new(base: &AlternativeSet, experts: Vec<(String, PreferenceRelation)>) -> Result<Self> {
        if experts.is_empty() {
            return Err(Error::EmptyPanel);
        }
        for (_, r) in &experts {
            base.ensure_same(r.base())?;
        }
        Ok(Self {
            base: base.clone(),
            experts,
        })
    }

    pub fn from_ballots(base: &AlternativeSet, ballots: &[Ballot]) -> Result<Self> {
        let experts = ballots
            .iter()
            .map(|b| Ok((b.id.clone(), b.to_relation(base)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, experts)
    }

    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn experts(&self) -> &[(String, PreferenceRelation)] {
        &self.experts
    }

    pub fn len(&self) -> usize {
        self.experts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.experts.is_empty()
    }

    /// True when every expert compares every pair.
    pub fn is_complete(&self) -> bool {
        self.experts.iter().all(|(_, r)| r.is_connected())
    }

    pub fn to_ballot_file(&self) -> BallotFile {
        BallotFile {
            alternatives: self.base.ids().to_vec(),
            experts: self
                .experts
                .iter()
                .map(|(id, r)| Ballot::from_relation(id.clone(), r))
                .collect(),
        }
    }
}

/// Vote counts `n_ij = Σ_ν δ_ij`. Diagonal entries are `N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TallyMatrix {
    base: AlternativeSet,
    counts: Vec<f64>,
    experts: usize,
}

impl TallyMatrix {
    pub fn base(&self) -> &AlternativeSet {
        &self.base
    }

    pub fn experts(&self) -> usize {
        self.experts
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.counts[i * self.base.len() + j]
    }

    pub fn get_ids(&self, x: &str, y: &str) -> Result<f64> {
        Ok(self.get(self.base.index_of(x)?, self.base.index_of(y)?))
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.counts
            .chunks(self.base.len())
            .map(<[f64]>::to_vec)
            .collect()
    }
}

/// Counts the panel. Every expert must compare every pair; panels with
/// gaps belong to [`crate::interval::abstention_tally`].
pub fn tally(vpr: &VectorPreferenceRelation) -> Result<TallyMatrix> {
    let base = vpr.base();
    let n = base.len();
    let mut counts = vec![0.0; n * n];
    for (expert, r) in vpr.experts() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                counts[i * n + j] += match (r.contains(i, j), r.contains(j, i)) {
                    (true, true) => 0.5,
                    (true, false) => 1.0,
                    (false, true) => 0.0,
                    (false, false) => {
                        return Err(Error::IncomparablePair {
                            expert: expert.clone(),
                            x: base.id(i).into(),
                            y: base.id(j).into(),
                        })
                    }
                };
            }
        }
    }
    let half = vpr.len() as f64 / 2.0;
    for i in 0..n {
        counts[i * n + i] = half;
    }
    Ok(TallyMatrix {
        base: base.clone(),
        counts,
        experts: vpr.len(),
    })
}

/// Majority voting: strict pairs where `n_ij > n_ji`, identity pairs where
/// `n_ij = n_ji`.
pub fn majority(t: &TallyMatrix) -> PreferenceRelation {
    PreferenceRelation::from_fn(&t.base, |i, j| t.get(i, j) >= t.get(j, i))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Copeland {
    /// K-index `φ_i = Σ_j (n_ij − n_ji)`.
    pub scores: UtilityVector,
    /// `{(x_i, x_j) : φ_i ≥ φ_j}`.
    pub relation: PreferenceRelation,
}

pub fn copeland(t: &TallyMatrix) -> Copeland {
    let n = t.base.len();
    let scores: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| t.get(i, j) - t.get(j, i)).sum())
        .collect();
    let relation = PreferenceRelation::from_fn(&t.base, |i, j| scores[i] >= scores[j]);
    Copeland {
        scores: UtilityVector::new(&t.base, scores).expect("one score per alternative"),
        relation,
    }
}

/// `Z_ij = n_ij − n_ji`.
pub fn group_sd(t: &TallyMatrix) -> SdMatrix {
    SdMatrix::from_upper(&t.base, |i, j| t.get(i, j) - t.get(j, i))
}

/// `F_ij = Σ_s (Z_is − Z_js)`, unweighted.
pub fn group_isd(t: &TallyMatrix) -> SdMatrix {
    let z = group_sd(t);
    let n = t.base.len();
    SdMatrix::from_upper(&t.base, |i, j| (0..n).map(|s| z.get(i, s) - z.get(j, s)).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupLevel {
    pub level: f64,
    pub relation: PreferenceRelation,
    pub core: Core,
}

/// `G(ℓ) = {(x_i, x_j) : F_ij ≥ ℓ}` and its core.
pub fn group_level(t: &TallyMatrix, level: f64) -> Result<GroupLevel> {
    let relation = crate::levels::level_relation(&group_isd(t), level)?;
    let core = relation.core();
    Ok(GroupLevel {
        level,
        relation,
        core,
    })
}

/// `Z_ij = Z_is + Z_sj` for all triples, a sufficient condition for a
/// transitive majority relation.
pub fn additivity_check(z: &SdMatrix, eps: f64) -> bool {
    z.classify(eps).in_t
}
