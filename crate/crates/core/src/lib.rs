//! Circulant almost cross intersecting families.
//!
//! Builds, verifies and searches for pairs of `t`-uniform families over
//! `[k]` whose intersection matrix is the circulant `C_{p,q}`.

pub mod analysis;
pub mod boolmat;
pub mod cli;
pub mod combin;
pub mod constructions;
pub mod error;
pub mod families;
pub mod io;
pub mod search;

pub use boolmat::{circulant, is_cyclic_variant, BoolMatrix, CirculantSpec};
pub use error::{Error, Result};
pub use families::{
    family_from_matrix_rows, intersection_matrix, is_q_almost_cross_intersecting, Certificate,
    FamilyPair, SetFamily, Subset, Verdict,
};
pub use search::{decide_embedding, SearchOutcome, SearchProblem, Status};
