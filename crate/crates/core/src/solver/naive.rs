//! Exhaustive oracles. They enumerate sequences and weight vectors directly and
//! share nothing with the automaton beyond the group table.

use std::sync::Arc;
use std::time::Instant;

use super::{ConstantKind, ConstantResult, Outcome, Value};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::sequence::OrderedSequence;
use crate::weights::WeightSet;

/// Largest `|G|^maxLen` the oracles accept.
pub const NAIVE_BUDGET: u128 = 100_000_000;

/// Least `ℓ ≤ max_len` such that no sequence of length `ℓ` is free, by enumeration.
pub fn compute_consecutive_naive(group: &Arc<Group>, weights: &WeightSet, max_len: usize) -> Result<ConstantResult> {
    naive(group, weights, max_len, ConstantKind::Consecutive)
}

/// Same as [`compute_consecutive_naive`] with arbitrary (not necessarily
/// consecutive) subsequences; abelian groups only.
pub fn compute_davenport_naive(group: &Arc<Group>, weights: &WeightSet, max_len: usize) -> Result<ConstantResult> {
    if !group.is_abelian() {
        return Err(Error::NonAbelian(group.descriptor().to_string()));
    }
    naive(group, weights, max_len, ConstantKind::Davenport)
}

fn naive(group: &Arc<Group>, weights: &WeightSet, max_len: usize, kind: ConstantKind) -> Result<ConstantResult> {
    let start = Instant::now();
    let within_budget = (group.order() as u128)
        .checked_pow(max_len as u32)
        .is_some_and(|n| n <= NAIVE_BUDGET);
    if !within_budget {
        let mut r = ConstantResult::new(
            kind,
            group,
            &weights.canonical(),
            Outcome::Inconclusive {
                lower_bound: 1,
                reason: format!("|G|^{max_len} exceeds the naive budget of {NAIVE_BUDGET}"),
            },
            None,
        );
        r.elapsed = start.elapsed();
        return Ok(r);
    }

    let mut oracle = Oracle {
        group,
        weights: weights.weights(),
        kind,
        max_len,
        seq: Vec::new(),
        longest: None,
        visited: 0,
    };
    oracle.extend();
    let longest = oracle.longest.take().unwrap_or_default();
    let outcome = if longest.len() >= max_len {
        Outcome::Inconclusive {
            lower_bound: max_len as u64 + 1,
            reason: format!("free sequences of length max_len = {max_len} exist"),
        }
    } else {
        Outcome::Exact(Value::Finite(longest.len() as u64 + 1))
    };
    let witness = OrderedSequence::new(Arc::clone(group), longest)?;
    let mut r = ConstantResult::new(kind, group, &weights.canonical(), outcome, Some(witness));
    r.states_explored = oracle.visited;
    r.elapsed = start.elapsed();
    Ok(r)
}

struct Oracle<'a> {
    group: &'a Group,
    weights: &'a [u64],
    kind: ConstantKind,
    max_len: usize,
    seq: Vec<Element>,
    /// First (lexicographically least) free sequence of the greatest length seen.
    longest: Option<Vec<Element>>,
    visited: u64,
}

impl Oracle<'_> {
    /// Enumerates every free sequence in lexicographic order. A sequence with a
    /// non-free prefix is itself not free, so those branches are skipped.
    fn extend(&mut self) {
        self.visited += 1;
        if self.longest.as_ref().is_none_or(|l| self.seq.len() > l.len()) {
            self.longest = Some(self.seq.clone());
        }
        if self.seq.len() == self.max_len {
            return;
        }
        for g in self.group.elements() {
            self.seq.push(g);
            if !self.new_product_one() {
                self.extend();
            }
            self.seq.pop();
        }
    }

    /// Whether some weighted product involving the last element is the identity.
    fn new_product_one(&self) -> bool {
        let last = self.seq.len() - 1;
        match self.kind {
            ConstantKind::Consecutive => (0..=last).any(|i| self.window_hits(i, last, Element::IDENTITY)),
            ConstantKind::Davenport => self.weights.iter().any(|&a| {
                let with_last = self.group.pow(self.seq[last], a as i64);
                self.subset_hits_below(last, with_last)
            }),
        }
    }

    /// Tries every weight vector on positions `i..=end` of the window.
    fn window_hits(&self, i: usize, end: usize, acc: Element) -> bool {
        if i > end {
            return acc.is_identity();
        }
        self.weights.iter().any(|&a| {
            let next = self.group.mul(acc, self.group.pow(self.seq[i], a as i64));
            self.window_hits(i + 1, end, next)
        })
    }

    /// Tries every subset of positions `0..pos`, each with every weight.
    fn subset_hits_below(&self, pos: usize, acc: Element) -> bool {
        if pos == 0 {
            return acc.is_identity();
        }
        let i = pos - 1;
        if self.subset_hits_below(i, acc) {
            return true;
        }
        self.weights.iter().any(|&a| {
            let next = self.group.mul(acc, self.group.pow(self.seq[i], a as i64));
            self.subset_hits_below(i, next)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::parse_group;

    fn group(text: &str) -> Arc<Group> {
        Arc::new(parse_group(text).unwrap())
    }

    #[test]
    fn naive_examples() {
        let c4 = group("C4");
        let r = compute_consecutive_naive(&c4, &WeightSet::unweighted(4).unwrap(), 5).unwrap();
        assert_eq!(r.exact(), Some(4));
        let c3 = group("C3");
        let r = compute_consecutive_naive(&c3, &WeightSet::full(3).unwrap(), 3).unwrap();
        assert_eq!(r.exact(), Some(2));
        let k4 = group("A[2,2]");
        let r = compute_consecutive_naive(&k4, &WeightSet::unweighted(2).unwrap(), 5).unwrap();
        assert_eq!(r.exact(), Some(4));
    }

    #[test]
    fn naive_davenport() {
        let k4 = group("A[2,2]");
        let r = compute_davenport_naive(&k4, &WeightSet::unweighted(2).unwrap(), 4).unwrap();
        assert_eq!(r.exact(), Some(3));
        let c6 = group("C6");
        let r = compute_davenport_naive(&c6, &WeightSet::unweighted(6).unwrap(), 7).unwrap();
        assert_eq!(r.exact(), Some(6));
    }

    #[test]
    fn naive_budget_and_short_cap() {
        let c8 = group("C8");
        let r = compute_consecutive_naive(&c8, &WeightSet::unweighted(8).unwrap(), 9).unwrap();
        assert!(!r.is_conclusive());
        let r = compute_consecutive_naive(&c8, &WeightSet::unweighted(8).unwrap(), 3).unwrap();
        assert_eq!(
            r.outcome,
            Outcome::Inconclusive {
                lower_bound: 4,
                reason: "free sequences of length max_len = 3 exist".into()
            }
        );
    }
}
