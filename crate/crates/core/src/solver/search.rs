//! Memoized longest-path DFS over the window (or subset) automaton.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;

use super::{ConstantKind, ConstantResult, Outcome, SearchConfig, Value};
use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::sequence::{avoids_identity, is_free, window_successor, OrderedSequence, PowTable};
use crate::weights::WeightSet;

const NO_ELEMENT: u32 = u32::MAX;

#[derive(Copy, Clone, Debug)]
struct MemoEntry {
    /// Longest free extension from this state.
    longest: u32,
    /// Smallest element starting such an extension.
    next: u32,
}

trait Memo {
    fn lookup(&self, state: &ElementSet) -> Option<MemoEntry>;
    fn store(&self, state: ElementSet, entry: MemoEntry);
}

impl Memo for RefCell<HashMap<ElementSet, MemoEntry>> {
    fn lookup(&self, state: &ElementSet) -> Option<MemoEntry> {
        self.borrow().get(state).copied()
    }

    fn store(&self, state: ElementSet, entry: MemoEntry) {
        self.borrow_mut().insert(state, entry);
    }
}

// Entries are exact, so concurrent duplicate inserts write the same value.
impl Memo for DashMap<ElementSet, MemoEntry> {
    fn lookup(&self, state: &ElementSet) -> Option<MemoEntry> {
        self.get(state).map(|e| *e)
    }

    fn store(&self, state: ElementSet, entry: MemoEntry) {
        self.insert(state, entry);
    }
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Transition {
    /// Window products ending at the new position.
    Window,
    /// All weighted subsequence products seen so far.
    Subset,
}

struct Ctx<'a> {
    group: &'a Group,
    pow: &'a PowTable,
    transition: Transition,
    /// Proven upper bound on the length of a free sequence, if any.
    length_bound: Option<usize>,
    max_length: usize,
    max_states: u64,
    states: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Ctx<'_> {
    fn successor(&self, state: &ElementSet, g: u32) -> Option<ElementSet> {
        let powers = self.pow.powers(Element(g));
        if !avoids_identity(self.group, state, powers) {
            return None;
        }
        let mut next = window_successor(self.group, state, powers);
        if self.transition == Transition::Subset {
            next.union_with(state);
        }
        Some(next)
    }

    /// Follows memoized `next` pointers from `state`.
    fn suffix<M: Memo>(&self, memo: &M, mut state: ElementSet, out: &mut Vec<Element>) {
        while let Some(entry) = memo.lookup(&state) {
            if entry.next == NO_ELEMENT {
                break;
            }
            out.push(Element(entry.next));
            state = self
                .successor(&state, entry.next)
                .expect("memoized move stays free");
        }
    }
}

enum DfsEnd {
    Done { longest: u32 },
    /// A path as long as the proven bound was found.
    BoundReached { witness: Vec<Element> },
    Cycle,
    Budget { best_length: usize, best_path: Vec<Element>, reason: String },
    Stopped,
}

struct Frame {
    state: ElementSet,
    via: u32,
    next_g: u32,
    best: u32,
    best_next: u32,
}

impl Frame {
    fn new(state: ElementSet, via: u32) -> Self {
        Frame {
            state,
            via,
            next_g: 0,
            best: 0,
            best_next: NO_ELEMENT,
        }
    }
}

fn path_to(prefix: &[Element], frames: &[Frame], upto: usize) -> Vec<Element> {
    let mut path = prefix.to_vec();
    path.extend(frames[1..=upto].iter().map(|f| Element(f.via)));
    path
}

/// Longest free extension of `root`, which is reached by `prefix`.
fn longest_from<M: Memo>(ctx: &Ctx<'_>, root: ElementSet, prefix: &[Element], memo: &M) -> DfsEnd {
    let order = ctx.group.order() as u32;
    let base = prefix.len();
    let mut on_stack: HashSet<ElementSet> = HashSet::new();
    on_stack.insert(root.clone());
    let mut frames = vec![Frame::new(root, NO_ELEMENT)];
    let mut best_length = base;
    let mut best_path = prefix.to_vec();
    let mut ticks = 0u32;

    // Records an improvement at frame `idx`; returns the witness when the bound is met.
    let improved = |frames: &[Frame], idx: usize, best_length: &mut usize, best_path: &mut Vec<Element>| {
        let f = &frames[idx];
        let total = base + idx + f.best as usize;
        if total > *best_length {
            *best_length = total;
            let mut path = path_to(prefix, frames, idx);
            path.push(Element(f.best_next));
            let child = ctx.successor(&f.state, f.best_next).expect("recorded move is free");
            ctx.suffix(memo, child, &mut path);
            *best_path = path;
        }
        if ctx.length_bound == Some(total) {
            Some(best_path.clone())
        } else {
            None
        }
    };

    loop {
        ticks = ticks.wrapping_add(1);
        if ticks.is_multiple_of(1024) && ctx.stop.load(Ordering::Relaxed) {
            return DfsEnd::Stopped;
        }
        let idx = frames.len() - 1;
        let top = &mut frames[idx];
        if top.next_g == order {
            let f = frames.pop().expect("nonempty stack");
            on_stack.remove(&f.state);
            memo.store(
                f.state,
                MemoEntry {
                    longest: f.best,
                    next: f.best_next,
                },
            );
            let Some(parent) = frames.last_mut() else {
                return DfsEnd::Done { longest: f.best };
            };
            if f.best + 1 > parent.best {
                parent.best = f.best + 1;
                parent.best_next = f.via;
                if let Some(witness) = improved(&frames, idx - 1, &mut best_length, &mut best_path) {
                    return DfsEnd::BoundReached { witness };
                }
            }
            continue;
        }
        let g = top.next_g;
        top.next_g += 1;
        let Some(succ) = ctx.successor(&top.state, g) else {
            continue;
        };
        if on_stack.contains(&succ) {
            return DfsEnd::Cycle;
        }
        if let Some(entry) = memo.lookup(&succ) {
            if entry.longest + 1 > top.best {
                top.best = entry.longest + 1;
                top.best_next = g;
                if let Some(witness) = improved(&frames, idx, &mut best_length, &mut best_path) {
                    return DfsEnd::BoundReached { witness };
                }
            }
            continue;
        }
        let depth = base + idx + 1;
        if depth > ctx.max_length {
            return DfsEnd::Budget {
                best_length,
                best_path,
                reason: format!("max_length = {} reached", ctx.max_length),
            };
        }
        if ctx.states.fetch_add(1, Ordering::Relaxed) >= ctx.max_states {
            return DfsEnd::Budget {
                best_length,
                best_path,
                reason: format!("max_states = {} reached", ctx.max_states),
            };
        }
        if depth > best_length {
            best_length = depth;
            best_path = path_to(prefix, &frames, idx);
            best_path.push(Element(g));
        }
        on_stack.insert(succ.clone());
        frames.push(Frame::new(succ, g));
        if ctx.length_bound == Some(depth) {
            return DfsEnd::BoundReached {
                witness: best_path,
            };
        }
    }
}

/// `C_A(G)`: one more than the longest sequence with no product-one weighted window.
pub fn compute_consecutive(group: &Arc<Group>, weights: &WeightSet, cfg: &SearchConfig) -> Result<ConstantResult> {
    run(group, weights, cfg, ConstantKind::Consecutive)
}

/// `D_A(G)` for abelian `G`: one more than the longest sequence with no
/// product-one weighted subsequence.
pub fn compute_davenport(group: &Arc<Group>, weights: &WeightSet, cfg: &SearchConfig) -> Result<ConstantResult> {
    if !group.is_abelian() {
        return Err(Error::NonAbelian(format!(
            "D_A is only computed for abelian groups, {} is not",
            group.descriptor()
        )));
    }
    run(group, weights, cfg, ConstantKind::Davenport)
}

fn run(group: &Arc<Group>, weights: &WeightSet, cfg: &SearchConfig, kind: ConstantKind) -> Result<ConstantResult> {
    if weights.modulus() != group.exponent() {
        return Err(Error::Contract(format!(
            "weights were validated for modulus {} but exp({}) = {}; revalidate them first",
            weights.modulus(),
            group.descriptor(),
            group.exponent()
        )));
    }
    if cfg.max_states == 0 {
        return Err(Error::Contract("max_states must be positive".into()));
    }
    let start = Instant::now();
    let pow = PowTable::new(group, weights);
    let states = AtomicU64::new(1);
    let stop = AtomicBool::new(false);
    let ctx = Ctx {
        group,
        pow: &pow,
        transition: match kind {
            ConstantKind::Consecutive => Transition::Window,
            ConstantKind::Davenport => Transition::Subset,
        },
        // a single weight a ∈ A turns S into an unweighted sequence, and |G|
        // prefix products must repeat; only used when 1 ∈ A
        length_bound: weights.contains_one().then(|| group.order() - 1),
        max_length: cfg.length_cap(group, weights),
        max_states: cfg.max_states,
        states: &states,
        stop: &stop,
    };
    let root = ElementSet::new(group.order());

    let (outcome, witness) = if cfg.parallel() {
        run_parallel(&ctx, root, cfg.threads)
    } else {
        let memo = RefCell::new(HashMap::new());
        let end = longest_from(&ctx, root.clone(), &[], &memo);
        settle(&ctx, &memo, root, end)
    };

    let witness = witness.map(|w| OrderedSequence::new(Arc::clone(group), w).expect("indices in range"));
    if let (Some(w), ConstantKind::Consecutive) = (&witness, kind) {
        assert!(is_free(w, weights).is_free(), "search produced a non-free witness {w:?}");
    }
    let mut result = ConstantResult::new(kind, group, &weights.canonical(), outcome, witness);
    result.states_explored = states.load(Ordering::Relaxed);
    result.elapsed = start.elapsed();
    Ok(result)
}

fn settle<M: Memo>(ctx: &Ctx<'_>, memo: &M, root: ElementSet, end: DfsEnd) -> (Outcome, Option<Vec<Element>>) {
    match end {
        DfsEnd::Done { longest } => {
            let mut w = Vec::new();
            ctx.suffix(memo, root, &mut w);
            debug_assert_eq!(w.len(), longest as usize);
            (Outcome::Exact(Value::Finite(u64::from(longest) + 1)), Some(w))
        }
        DfsEnd::BoundReached { witness } => (Outcome::Exact(Value::Finite(witness.len() as u64 + 1)), Some(witness)),
        DfsEnd::Cycle => (Outcome::Exact(Value::Infinite), None),
        DfsEnd::Budget {
            best_length,
            best_path,
            reason,
        } => (
            Outcome::Inconclusive {
                lower_bound: best_length as u64 + 1,
                reason,
            },
            Some(best_path),
        ),
        DfsEnd::Stopped => unreachable!("single-threaded search is never stopped"),
    }
}

/// Splits the search over the first element; workers share one memo table.
fn run_parallel(ctx: &Ctx<'_>, root: ElementSet, threads: usize) -> (Outcome, Option<Vec<Element>>) {
    let memo: DashMap<ElementSet, MemoEntry> = DashMap::new();
    let found: Mutex<Option<Vec<Element>>> = Mutex::new(None);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let order = ctx.group.order() as u32;
    let ends: Vec<(u32, DfsEnd)> = pool.install(|| {
        (0..order)
            .into_par_iter()
            .filter_map(|g| {
                let succ = ctx.successor(&root, g)?;
                if ctx.stop.load(Ordering::Relaxed) {
                    return Some((g, DfsEnd::Stopped));
                }
                ctx.states.fetch_add(1, Ordering::Relaxed);
                let end = if ctx.length_bound == Some(1) {
                    DfsEnd::BoundReached { witness: vec![Element(g)] }
                } else {
                    longest_from(ctx, succ, &[Element(g)], &memo)
                };
                if matches!(end, DfsEnd::BoundReached { .. } | DfsEnd::Cycle | DfsEnd::Budget { .. }) {
                    ctx.stop.store(true, Ordering::Relaxed);
                }
                if let DfsEnd::BoundReached { witness } = &end {
                    found.lock().unwrap().get_or_insert_with(|| witness.clone());
                }
                Some((g, end))
            })
            .collect()
    });

    if let Some(w) = found.into_inner().unwrap() {
        return (Outcome::Exact(Value::Finite(w.len() as u64 + 1)), Some(w));
    }
    if ends.iter().any(|(_, e)| matches!(e, DfsEnd::Cycle)) {
        return (Outcome::Exact(Value::Infinite), None);
    }
    let budget = ends.iter().filter_map(|(_, e)| match e {
        DfsEnd::Budget { best_length, best_path, reason } => Some((best_length, best_path, reason)),
        _ => None,
    });
    if let Some((len, path, reason)) = budget.max_by_key(|(len, _, _)| **len) {
        return (
            Outcome::Inconclusive {
                lower_bound: *len as u64 + 1,
                reason: reason.clone(),
            },
            Some(path.clone()),
        );
    }
    let mut best: Option<(u32, u32)> = None;
    for (g, end) in &ends {
        if let DfsEnd::Done { longest } = end {
            if best.is_none_or(|(_, b)| longest + 1 > b) {
                best = Some((*g, longest + 1));
            }
        }
    }
    match best {
        None => (Outcome::Exact(Value::Finite(1)), Some(Vec::new())),
        Some((g, len)) => {
            let mut w = vec![Element(g)];
            let succ = ctx.successor(&root, g).expect("legal first move");
            ctx.suffix(&memo, succ, &mut w);
            debug_assert_eq!(w.len(), len as usize);
            (Outcome::Exact(Value::Finite(u64::from(len) + 1)), Some(w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{parse_group, parse_weights};

    fn value(group: &str, weights: &str, kind: ConstantKind) -> u64 {
        let g = Arc::new(parse_group(group).unwrap());
        let w = parse_weights(weights, g.exponent()).unwrap();
        let cfg = SearchConfig::deterministic();
        let r = match kind {
            ConstantKind::Consecutive => compute_consecutive(&g, &w, &cfg),
            ConstantKind::Davenport => compute_davenport(&g, &w, &cfg),
        }
        .unwrap();
        let v = r.exact().expect("conclusive");
        assert_eq!(r.witness.as_ref().unwrap().len() as u64, v - 1);
        v
    }

    fn c(group: &str, weights: &str) -> u64 {
        value(group, weights, ConstantKind::Consecutive)
    }

    fn d(group: &str, weights: &str) -> u64 {
        value(group, weights, ConstantKind::Davenport)
    }

    #[test]
    fn consecutive_examples() {
        assert_eq!(c("C5", "{1}"), 5);
        assert_eq!(c("C6", "full"), 2);
        assert_eq!(c("A[3,3]", "{1,2}"), 4);
        assert_eq!(c("C5", "U^2(5)"), 3);
        assert_eq!(c("M(4,2,2,3)", "{1}"), 8);
        assert_eq!(c("C13", "U^3(13)"), 3);
        assert_eq!(c("C13", "U-U2(13)"), 3);
    }

    #[test]
    fn davenport_examples() {
        assert_eq!(d("A[4,4]", "full"), 3);
        assert_eq!(d("A[2,6]", "punct(2,1,3)"), 2);
        assert_eq!(d("C2", "{1}"), 2);
        assert_eq!(d("A[2,4,4]", "full"), 3);
        // classical Davenport constants
        assert_eq!(d("A[2,2]", "{1}"), 3);
        assert_eq!(d("A[3,3]", "{1}"), 5);
        assert_eq!(d("C7", "{1}"), 7);
    }

    #[test]
    fn davenport_rejects_non_abelian() {
        let g = Arc::new(parse_group("S3").unwrap());
        let w = WeightSet::unweighted(6).unwrap();
        assert!(matches!(
            compute_davenport(&g, &w, &SearchConfig::default()),
            Err(Error::NonAbelian(_))
        ));
    }

    #[test]
    fn weights_must_match_exponent() {
        let g = Arc::new(parse_group("C6").unwrap());
        let w = WeightSet::full(3).unwrap();
        assert!(compute_consecutive(&g, &w, &SearchConfig::default()).is_err());
        assert!(compute_consecutive(&g, &w.revalidate(6).unwrap(), &SearchConfig::default()).is_ok());
    }

    #[test]
    fn state_budget_gives_lower_bound() {
        let g = Arc::new(parse_group("A[3,3]").unwrap());
        let w = WeightSet::full(3).unwrap();
        let cfg = SearchConfig {
            max_states: 3,
            ..SearchConfig::deterministic()
        };
        let r = compute_consecutive(&g, &w, &cfg).unwrap();
        match r.outcome {
            Outcome::Inconclusive { lower_bound, ref reason } => {
                assert!(lower_bound <= 4);
                assert!(reason.contains("max_states"));
                assert_eq!(r.witness.unwrap().len() as u64, lower_bound - 1);
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_witness_is_lexicographically_least() {
        let g = Arc::new(parse_group("C5").unwrap());
        let w = WeightSet::unit_powers(5, 2).unwrap();
        let r = compute_consecutive(&g, &w, &SearchConfig::deterministic()).unwrap();
        assert_eq!(r.witness.unwrap().to_string(), "1,2");
    }

    #[test]
    fn parallel_agrees_with_sequential() {
        for (group, weights) in [("A[3,3]", "full"), ("C7", "{1}"), ("C5", "U-U2(5)"), ("P(C2,S3)", "{1,5}")] {
            let g = Arc::new(parse_group(group).unwrap());
            let w = parse_weights(weights, g.exponent()).unwrap();
            let seq = compute_consecutive(&g, &w, &SearchConfig::deterministic()).unwrap();
            let cfg = SearchConfig {
                threads: 4,
                ..Default::default()
            };
            let par = compute_consecutive(&g, &w, &cfg).unwrap();
            assert_eq!(seq.outcome, par.outcome, "{group} {weights}");
            assert!(is_free(par.witness.as_ref().unwrap(), &w).is_free());
        }
    }
}
