//! Pairwise-comparison decision analysis built on superiority degrees.
//!
//! A superiority degree `φ(x, y)` is a skew-symmetric score of how much
//! alternative `x` outranks `y`. From it this crate derives
//!
//! * utilities on a differences scale ([`superiority`]),
//! * threshold relations and their nested Pareto cores ([`levels`]),
//! * group decisions from expert panels ([`group`]),
//! * interval utilities when comparisons are missing ([`interval`]),
//!
//! on top of a small algebra of binary relations ([`relations`]).
//!
//! ```
//! use sd_core::{fixtures, superiority::{WeightVector, EPS}};
//!
//! let m = fixtures::fix_nt();
//! let w = WeightVector::uniform(m.base());
//! assert!(!m.classify(EPS).in_t);
//! let q = m.utility(&w).unwrap();
//! assert_eq!(q.ranking(EPS), vec![vec!["a"], vec!["b"], vec!["c"]]);
//! ```

pub mod error;
pub mod fixtures;
pub mod formats;
pub mod group;
pub mod interval;
pub mod levels;
pub mod relations;
pub mod superiority;

pub use error::{Error, Result};
pub use relations::{AlternativeSet, Core, PreferenceRelation};
pub use superiority::{SdMatrix, UtilityVector, WeightVector};
