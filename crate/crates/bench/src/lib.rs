//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use davenport_core::constructions::{metacyclic_free_over, rank_power_free};
use davenport_core::{parse_group, Group, OrderedSequence, WeightSet};

pub fn group(text: &str) -> Arc<Group> {
    Arc::new(parse_group(text).expect("benchmark group"))
}

/// A long free sequence over the dihedral group of order 16.
pub fn dihedral_witness() -> (OrderedSequence, WeightSet) {
    let g = group("M(8,2,8,7)");
    let s = metacyclic_free_over(&g).expect("metacyclic construction");
    (s, WeightSet::unweighted(g.exponent()).expect("exp >= 2"))
}

/// The rank-power free sequence of length 7 over C_3^3 with full weights.
pub fn rank_power_witness() -> (OrderedSequence, WeightSet) {
    let w = WeightSet::full(3).expect("full weights");
    (rank_power_free(3, 3, &w).expect("rank-power construction"), w)
}
