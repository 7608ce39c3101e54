//! Small canonical data sets over `{a, b, c}`, used in docs, tests and demos.

use crate::group::{Ballot, VectorPreferenceRelation};
use crate::interval::PartialSdMatrix;
use crate::relations::AlternativeSet;
use crate::superiority::SdMatrix;

pub fn abc() -> AlternativeSet {
    AlternativeSet::new(["a", "b", "c"]).expect("static ids")
}

/// `φ(a,b) = φ(b,c) = φ(c,a) = 1`: a perfect cycle.
pub fn fix_cycle() -> SdMatrix {
    SdMatrix::from_entries(&abc(), [("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)])
        .expect("valid fixture")
}

/// `φ(a,b) = 2, φ(a,c) = 1, φ(b,c) = 1`: skew-symmetric, not additive.
pub fn fix_nt() -> SdMatrix {
    SdMatrix::from_entries(&abc(), [("a", "b", 2.0), ("a", "c", 1.0), ("b", "c", 1.0)])
        .expect("valid fixture")
}

/// Differences of the potential `(3, 1, 0)`.
pub fn fix_t() -> SdMatrix {
    SdMatrix::from_potential(&abc(), &[3.0, 1.0, 0.0]).expect("valid fixture")
}

fn panel(orders: [[&str; 3]; 3]) -> VectorPreferenceRelation {
    let ballots = orders
        .iter()
        .enumerate()
        .map(|(k, order)| Ballot::order(format!("E{}", k + 1), order.iter().copied()))
        .collect::<Vec<_>>();
    VectorPreferenceRelation::from_ballots(&abc(), &ballots).expect("valid fixture")
}

/// `a≻b≻c`, `a≻c≻b`, `b≻a≻c`.
pub fn fix_grp() -> VectorPreferenceRelation {
    panel([["a", "b", "c"], ["a", "c", "b"], ["b", "a", "c"]])
}

/// `a≻b≻c`, `b≻c≻a`, `c≻a≻b`: the majority cycle.
pub fn fix_condorcet() -> VectorPreferenceRelation {
    panel([["a", "b", "c"], ["b", "c", "a"], ["c", "a", "b"]])
}

/// Only `φ(a,b) = 1` known, `φ* = 1`.
pub fn fix_part() -> PartialSdMatrix {
    PartialSdMatrix::from_entries(&abc(), [("a", "b", 1.0)], Some(1.0)).expect("valid fixture")
}
