//! Exact computation of consecutive weighted Davenport constants.
//!
//! For a finite group `G` and a weight set `A ⊆ [1, exp(G) − 1]`, `C_A(G)` is the
//! least `ℓ` such that every ordered sequence of length `ℓ` over `G` has a
//! consecutive window `g_i ⋯ g_j` and weights `a_i, …, a_j ∈ A` with
//! `g_i^{a_i} ⋯ g_j^{a_j} = 1`. This crate builds finite groups as Cayley tables,
//! decides freeness of sequences, computes `C_A(G)` and the classical weighted
//! Davenport constant `D_A(G)` exactly, and builds explicit extremal sequences.

pub mod arith;
pub mod bitset;
pub mod catalog;
pub mod checks;
pub mod constructions;
pub mod descriptor;
pub mod error;
pub mod group;
pub mod sequence;
pub mod solver;
pub mod weights;

pub use bitset::ElementSet;
pub use descriptor::{format_element, format_sequence, parse_element, parse_group, parse_sequence, parse_weights, GroupDescriptor};
pub use error::{Error, Result};
pub use group::{Element, Group, MetacyclicParams, DEFAULT_ORDER_CAP};
pub use sequence::{is_free, is_free_unweighted_fast, pi_a, pi_a_bullet, step, Certificate, Freeness, OrderedSequence, PowTable, WindowState};
pub use solver::{
    compute_consecutive, compute_consecutive_naive, compute_davenport, ConstantKind, ConstantResult, Outcome, ResultSummary, SearchConfig, Value,
};
pub use weights::{WeightKind, WeightSet};
