#![allow(dead_code)]

use proptest::prelude::*;
use sd_core::group::{Ballot, PairVerdict, Verdict, VectorPreferenceRelation};
use sd_core::interval::PartialSdMatrix;
use sd_core::{AlternativeSet, PreferenceRelation, SdMatrix, WeightVector};

pub fn base(n: usize) -> AlternativeSet {
    AlternativeSet::new((0..n).map(|i| format!("x{i}"))).unwrap()
}

pub fn relation(max_n: usize) -> impl Strategy<Value = PreferenceRelation> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            PreferenceRelation::from_fn(&base(n), |i, j| bits[i * n + j])
        })
    })
}

/// Two relations over the same base.
pub fn relation_pair(max_n: usize) -> impl Strategy<Value = (PreferenceRelation, PreferenceRelation)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n * n),
            prop::collection::vec(any::<bool>(), n * n),
        )
            .prop_map(move |(a, b)| {
                let base = base(n);
                (
                    PreferenceRelation::from_fn(&base, |i, j| a[i * n + j]),
                    PreferenceRelation::from_fn(&base, |i, j| b[i * n + j]),
                )
            })
    })
}

fn upper_len(n: usize) -> usize {
    n * (n - 1) / 2
}

fn from_upper_vec(n: usize, v: &[f64]) -> SdMatrix {
    let mut k = 0;
    let mut idx = vec![vec![0usize; n]; n];
    for (i, row) in idx.iter_mut().enumerate() {
        for slot in row.iter_mut().skip(i + 1) {
            *slot = k;
            k += 1;
        }
    }
    SdMatrix::from_upper(&base(n), |i, j| v[idx[i][j]])
}

/// Skew-symmetric matrices, `n ∈ lo..=hi`, entries in `[-10, 10]`.
pub fn sd_matrix(lo: usize, hi: usize) -> impl Strategy<Value = SdMatrix> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..=10.0, upper_len(n)).prop_map(move |v| from_upper_vec(n, &v))
    })
}

/// Small integer entries, so that ties and repeated magnitudes are common.
pub fn int_sd_matrix(lo: usize, hi: usize) -> impl Strategy<Value = SdMatrix> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(-3i32..=3, upper_len(n))
            .prop_map(move |v| from_upper_vec(n, &v.iter().map(|&x| x as f64).collect::<Vec<_>>()))
    })
}

/// Differences of a random potential: always additively transitive.
pub fn potential_matrix(lo: usize, hi: usize) -> impl Strategy<Value = SdMatrix> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(-5.0f64..=5.0, n).prop_map(move |f| SdMatrix::from_potential(&base(n), &f).unwrap())
    })
}

/// Integer potentials, for exact level comparisons.
pub fn int_potential_matrix(lo: usize, hi: usize) -> impl Strategy<Value = SdMatrix> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(-4i32..=4, n).prop_map(move |f| {
            SdMatrix::from_potential(&base(n), &f.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap()
        })
    })
}

pub fn weights(n: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(0.05f64..1.0, n).prop_map(move |raw| {
        let total: f64 = raw.iter().sum();
        let mut v: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let drift: f64 = 1.0 - v.iter().sum::<f64>();
        v[0] += drift;
        WeightVector::new(&base(n), v).unwrap()
    })
}

pub fn matrix_with_weights<S>(m: S) -> impl Strategy<Value = (SdMatrix, WeightVector)>
where
    S: Strategy<Value = SdMatrix>,
{
    m.prop_flat_map(|m| {
        let n = m.len();
        (Just(m), weights(n))
    })
}

fn verdict() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::X), Just(Verdict::Y), Just(Verdict::Tie)]
}

fn verdict_or_abstain() -> impl Strategy<Value = Verdict> {
    prop_oneof![
        Just(Verdict::X),
        Just(Verdict::Y),
        Just(Verdict::Tie),
        Just(Verdict::Abstain)
    ]
}

fn panel_from(n: usize, votes: Vec<Vec<Verdict>>) -> VectorPreferenceRelation {
    let base = base(n);
    let ballots: Vec<Ballot> = votes
        .into_iter()
        .enumerate()
        .map(|(e, vs)| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    pairs.push(PairVerdict {
                        x: base.id(i).into(),
                        y: base.id(j).into(),
                        verdict: vs[k],
                    });
                    k += 1;
                }
            }
            Ballot::pairs(format!("E{e}"), pairs)
        })
        .collect();
    VectorPreferenceRelation::from_ballots(&base, &ballots).unwrap()
}

/// Panels of connected, possibly non-transitive relations.
pub fn panel(max_n: usize, max_experts: usize) -> impl Strategy<Value = VectorPreferenceRelation> {
    (2..=max_n, 1..=max_experts).prop_flat_map(|(n, experts)| {
        prop::collection::vec(prop::collection::vec(verdict(), upper_len(n)), experts)
            .prop_map(move |votes| panel_from(n, votes))
    })
}

/// Panels where experts may also abstain.
pub fn abstention_panel(max_n: usize, max_experts: usize) -> impl Strategy<Value = VectorPreferenceRelation> {
    (2..=max_n, 1..=max_experts).prop_flat_map(|(n, experts)| {
        prop::collection::vec(prop::collection::vec(verdict_or_abstain(), upper_len(n)), experts)
            .prop_map(move |votes| panel_from(n, votes))
    })
}

/// Partial matrices, `n ∈ 2..=max_n`, random masks, `φ*` at or above every
/// known magnitude.
pub fn partial_matrix(max_n: usize) -> impl Strategy<Value = PartialSdMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..=1.0, upper_len(n)),
            prop::collection::vec(any::<bool>(), upper_len(n)),
            1.0f64..=5.0,
        )
            .prop_map(move |(vals, mask, phi_star)| {
                let mut cells = vec![None; n * n];
                let mut k = 0;
                for i in 0..n {
                    cells[i * n + i] = Some(0.0);
                    for j in (i + 1)..n {
                        if mask[k] {
                            let v = vals[k] * phi_star;
                            cells[i * n + j] = Some(v);
                            cells[j * n + i] = Some(-v);
                        }
                        k += 1;
                    }
                }
                PartialSdMatrix::new(&base(n), cells, Some(phi_star)).unwrap()
            })
    })
}

/// Definitional core: alternatives outside the image of the strict part.
pub fn core_oracle(r: &PreferenceRelation) -> Vec<usize> {
    let strict = r.strict_part();
    let dominated: std::collections::BTreeSet<usize> = strict.pairs().into_iter().map(|(_, y)| y).collect();
    (0..r.len()).filter(|x| !dominated.contains(x)).collect()
}

/// Warshall closure.
pub fn transitive_closure(r: &PreferenceRelation) -> PreferenceRelation {
    let n = r.len();
    let mut m: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| r.contains(i, j)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    PreferenceRelation::from_fn(r.base(), |i, j| m[i][j])
}
