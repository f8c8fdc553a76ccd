//! Exact computation of `C_A(G)` and `D_A(G)`.
//!
//! Both constants are `1 + L`, where `L` is the length of the longest free
//! sequence. Two sequences that reach the same automaton state have the same
//! free extensions, so `L` is the longest path from the empty state in a finite
//! graph of states that avoid the identity, which a memoized DFS computes.

mod naive;
mod search;
mod sweep;
mod verify;

use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::descriptor::format_sequence;
use crate::group::Group;
use crate::sequence::OrderedSequence;
use crate::weights::WeightSet;

pub use naive::{compute_consecutive_naive, compute_davenport_naive, NAIVE_BUDGET};
pub use search::{compute_consecutive, compute_davenport};
pub use sweep::{compute_consecutive_unweighted_fast, conjecture_sweep, SweepRow, SweepVerdict};
pub use verify::{certify_by_pigeonhole, verify_value, Verdict, VerifyReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKind {
    /// `C_A(G)`: weighted consecutive windows.
    Consecutive,
    /// `D_A(G)`: weighted subsequences in any position (abelian groups only).
    Davenport,
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantKind::Consecutive => "consecutive",
            ConstantKind::Davenport => "davenport",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(u64),
    /// Arbitrarily long free sequences exist (a reachable cycle of free states).
    Infinite,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("INFINITE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Exact(Value),
    /// A cap fired; the constant is at least `lower_bound`.
    Inconclusive { lower_bound: u64, reason: String },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Longest path explored; `None` means `|G|` when `1 ∈ A` and `4·|G|` otherwise.
    pub max_length: Option<usize>,
    /// Number of distinct states the search may expand.
    pub max_states: u64,
    /// Single-threaded, ascending exploration with a lexicographically least witness.
    pub deterministic: bool,
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_length: None,
            max_states: 50_000_000,
            deterministic: false,
            threads: 1,
        }
    }
}

impl SearchConfig {
    pub fn deterministic() -> Self {
        SearchConfig {
            deterministic: true,
            ..Default::default()
        }
    }

    fn length_cap(&self, group: &Group, weights: &WeightSet) -> usize {
        self.max_length.unwrap_or(if weights.contains_one() {
            group.order()
        } else {
            4 * group.order()
        })
    }

    fn parallel(&self) -> bool {
        self.threads > 1 && !self.deterministic
    }
}

#[derive(Clone, Debug)]
pub struct ConstantResult {
    pub kind: ConstantKind,
    pub outcome: Outcome,
    /// A free sequence of length `value − 1`, or of length `lower_bound − 1` when inconclusive.
    pub witness: Option<OrderedSequence>,
    pub states_explored: u64,
    pub elapsed: Duration,
    pub group: String,
    pub weights: String,
}

impl ConstantResult {
    pub(crate) fn new(
        kind: ConstantKind,
        group: &Arc<Group>,
        weights: &str,
        outcome: Outcome,
        witness: Option<OrderedSequence>,
    ) -> Self {
        ConstantResult {
            kind,
            outcome,
            witness,
            states_explored: 0,
            elapsed: Duration::ZERO,
            group: group.descriptor().to_string(),
            weights: weights.to_string(),
        }
    }

    pub fn is_conclusive(&self) -> bool {
        matches!(self.outcome, Outcome::Exact(_))
    }

    pub fn value(&self) -> Option<Value> {
        match self.outcome {
            Outcome::Exact(v) => Some(v),
            Outcome::Inconclusive { .. } => None,
        }
    }

    /// The exact finite value, if there is one.
    pub fn exact(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Exact(Value::Finite(v)) => Some(v),
            _ => None,
        }
    }

    pub fn summary(&self) -> ResultSummary {
        let (value, note) = match &self.outcome {
            Outcome::Exact(Value::Finite(v)) => (ValueField::Number(*v), None),
            Outcome::Exact(Value::Infinite) => (ValueField::Text("INFINITE".into()), None),
            Outcome::Inconclusive { lower_bound, reason } => {
                (ValueField::Number(*lower_bound), Some(format!("lower bound only: {reason}")))
            }
        };
        ResultSummary {
            kind: self.kind,
            group: self.group.clone(),
            weights: self.weights.clone(),
            value,
            witness: self.witness.as_ref().map(format_sequence),
            states_explored: self.states_explored,
            elapsed_ms: self.elapsed.as_millis() as u64,
            conclusive: self.is_conclusive(),
            note,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueField {
    Number(u64),
    Text(String),
}

/// The JSON form of a [`ConstantResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultSummary {
    pub kind: ConstantKind,
    pub group: String,
    pub weights: String,
    pub value: ValueField,
    pub witness: Option<String>,
    pub states_explored: u64,
    pub elapsed_ms: u64,
    pub conclusive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_json_field_names() {
        let g = Arc::new(Group::cyclic(5).unwrap());
        let w = WeightSet::unweighted(5).unwrap();
        let r = ConstantResult::new(
            ConstantKind::Consecutive,
            &g,
            &w.canonical(),
            Outcome::Exact(Value::Finite(5)),
            None,
        );
        let json = serde_json::to_value(r.summary()).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["kind", "group", "weights", "value", "witness", "states_explored", "elapsed_ms", "conclusive"] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(json["kind"], "consecutive");
        assert_eq!(json["value"], 5);

        let inf = ConstantResult::new(ConstantKind::Davenport, &g, &w.canonical(), Outcome::Exact(Value::Infinite), None);
        assert_eq!(serde_json::to_value(inf.summary()).unwrap()["value"], "INFINITE");
    }
}
