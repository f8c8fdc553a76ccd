//! Unweighted constants through prefix products, and catalog sweeps.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use super::{ConstantKind, ConstantResult, Outcome, SearchConfig, Value};
use crate::bitset::ElementSet;
use crate::descriptor::GroupDescriptor;
use crate::group::{Element, Group};
use crate::sequence::{is_free, prefix_products_distinct, OrderedSequence};
use crate::weights::WeightSet;

/// `C(G)` with `A = {1}`, searching for sequences whose prefix products
/// `1, q_1, …, q_k` are pairwise distinct. At most `|G|` prefix products can be
/// distinct, so a free sequence of length `|G| − 1` settles the value.
pub fn compute_consecutive_unweighted_fast(group: &Arc<Group>, cfg: &SearchConfig) -> ConstantResult {
    let start = Instant::now();
    let order = group.order() as u32;
    let bound = group.order() - 1;
    let max_len = cfg.max_length.unwrap_or(group.order());

    let mut visited = ElementSet::new(group.order());
    visited.insert(0);
    let mut prefixes = vec![Element::IDENTITY];
    let mut path: Vec<Element> = Vec::new();
    let mut next_g = vec![0u32];
    let mut best: Vec<Element> = Vec::new();
    let mut states = 1u64;

    let outcome = loop {
        if path.len() == bound {
            best = path.clone();
            break Outcome::Exact(Value::Finite(group.order() as u64));
        }
        let top = next_g.last_mut().expect("stack");
        if *top == order {
            next_g.pop();
            if path.is_empty() {
                break Outcome::Exact(Value::Finite(best.len() as u64 + 1));
            }
            let q = prefixes.pop().expect("prefix");
            visited.remove(q.0);
            path.pop();
            continue;
        }
        let g = Element(*top);
        *top += 1;
        let q = group.mul(*prefixes.last().unwrap(), g);
        if visited.contains(q.0) {
            continue;
        }
        if path.len() + 1 > max_len || states >= cfg.max_states {
            break Outcome::Inconclusive {
                lower_bound: best.len() as u64 + 1,
                reason: "search cap reached".into(),
            };
        }
        states += 1;
        visited.insert(q.0);
        prefixes.push(q);
        path.push(g);
        next_g.push(0);
        if path.len() > best.len() {
            best = path.clone();
        }
    };

    let witness = OrderedSequence::new(Arc::clone(group), best).expect("indices in range");
    assert!(prefix_products_distinct(&witness));
    if let Ok(a) = WeightSet::unweighted(group.exponent()) {
        assert!(is_free(&witness, &a).is_free(), "prefix witness failed the window check");
    }
    let mut r = ConstantResult::new(ConstantKind::Consecutive, group, "{1}", outcome, Some(witness));
    r.states_explored = states;
    r.elapsed = start.elapsed();
    r
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SweepVerdict {
    /// `C(G) = |G|`.
    Equal,
    Differs,
    Inconclusive,
    Error,
}

impl fmt::Display for SweepVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVerdict::Equal => "EQUAL",
            SweepVerdict::Differs => "DIFFERS",
            SweepVerdict::Inconclusive => "INCONCLUSIVE",
            SweepVerdict::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub group: String,
    pub order: usize,
    pub result: Option<ConstantResult>,
    pub verdict: SweepVerdict,
    pub error: Option<String>,
}

/// Computes `C(G)` for each catalog entry and compares it with `|G|`.
pub fn conjecture_sweep(catalog: &[GroupDescriptor], cfg: &SearchConfig) -> Vec<SweepRow> {
    catalog
        .iter()
        .map(|desc| match Group::build(desc) {
            Err(e) => SweepRow {
                group: desc.to_string(),
                order: 0,
                result: None,
                verdict: SweepVerdict::Error,
                error: Some(e.to_string()),
            },
            Ok(g) => {
                let g = Arc::new(g);
                let r = compute_consecutive_unweighted_fast(&g, cfg);
                let verdict = match r.exact() {
                    Some(v) if v == g.order() as u64 => SweepVerdict::Equal,
                    Some(_) => SweepVerdict::Differs,
                    None => SweepVerdict::Inconclusive,
                };
                SweepRow {
                    group: desc.to_string(),
                    order: g.order(),
                    result: Some(r),
                    verdict,
                    error: None,
                }
            }
        })
        .collect()
}
