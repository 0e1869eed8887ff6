//! Construction, search and verification of D-optimal supplementary
//! difference sets `(v; r, s; λ)` and the circulant D-optimal matrices of
//! order `2v` they produce.
//!
//! * [`numtheory`]: unit groups of `Z_v`, subgroups and their orbits.
//! * [`seqcore`]: ±1 sequences, periodic autocorrelation and PSD.
//! * [`constraints`]: feasible parameters and necessary conditions on pairs.
//! * [`search`]: random orbit-union generation, external sort and matching.
//! * [`verify`]: exact certification, block matrices and determinants.
//! * [`catalog`]: published solutions and the existence table.

pub mod catalog;
pub mod constraints;
pub mod error;
pub mod numtheory;
pub mod search;
pub mod seqcore;
pub mod verify;

pub use constraints::{feasible_params, ParamSet};
pub use error::{Error, Result};
pub use numtheory::{OrbitSystem, Subgroup};
pub use seqcore::PmSequence;
