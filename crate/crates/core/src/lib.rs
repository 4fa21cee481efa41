//! Row-permutation bandpass maximization.
//!
//! Given a binary matrix, permute its rows so that the number of vertical
//! pairs of adjacent 1s (bandpasses) extractable from the columns is
//! maximized. This crate provides:
//!
//! - the instance model and strip-based objective ([`instance`]);
//! - the complete weighted row graph and residual construction ([`graph`]);
//! - exact maximum-weight matching and b-matching solvers ([`matching`]);
//! - partition schemes that split 2-matchings into matchings whose union
//!   with a base matching stays acyclic ([`partition`]);
//! - exact and approximate maximum-weight Hamiltonian path ([`hampath`]);
//! - the approximation pipeline that combines all of the above
//!   ([`solver`]);
//! - a brute-force optimum and structural-inequality verifier ([`oracle`]).

#![forbid(unsafe_code)]

pub mod error;
pub mod graph;
pub mod hampath;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod solver;
mod unionfind;

pub use error::{Error, Result};
pub use graph::{build_graph, matching_bandpasses, residual_instance, static_weight};
pub use graph::{BandpassSet, WeightedGraph};
pub use instance::{
    bandpass_count, gen_from_graph, gen_random, pad_even, pair_count, strip_profile, Instance,
    Permutation, StripProfile,
};
pub use matching::{
    decompose_4matching, max_weight_bmatching, max_weight_matching, BMatching, Matching,
};
