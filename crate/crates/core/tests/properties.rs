use std::sync::Arc;

use proptest::prelude::*;

use davenport_core::catalog::{builtin_catalog, small_groups};
use davenport_core::sequence::prefix_products_distinct;
use davenport_core::{
    compute_consecutive, compute_consecutive_naive, format_sequence, is_free, parse_group, parse_sequence, pi_a, step,
    Element, ElementSet, Freeness, Group, GroupDescriptor, OrderedSequence, PowTable, SearchConfig, WeightSet,
    WindowState,
};

fn small(idx: usize) -> Arc<Group> {
    let all = small_groups();
    Arc::new(Group::build(&all[idx % all.len()]).unwrap())
}

fn weights_from_mask(mask: u32, m: u64) -> WeightSet {
    let picked: Vec<i64> = (1..m as i64).filter(|&a| mask & (1 << (a - 1)) != 0).collect();
    let picked = if picked.is_empty() { vec![1] } else { picked };
    WeightSet::explicit(&picked, m).unwrap()
}

fn sequence(g: &Arc<Group>, raw: &[u32]) -> OrderedSequence {
    let n = g.order() as u32;
    OrderedSequence::new(Arc::clone(g), raw.iter().map(|&i| Element(i % n)).collect()).unwrap()
}

/// Tries every weight vector on every window.
fn brute_force_free(seq: &OrderedSequence, weights: &WeightSet) -> bool {
    let g = seq.group();
    let els = seq.elements();
    for i in 0..els.len() {
        let mut reach = vec![Element::IDENTITY];
        for &e in &els[i..] {
            let mut next = Vec::new();
            for &p in &reach {
                for &a in weights.weights() {
                    next.push(g.mul(p, g.pow(e, a as i64)));
                }
            }
            next.sort();
            next.dedup();
            if next.iter().any(|x| x.is_identity()) {
                return false;
            }
            reach = next;
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn descriptors_round_trip(idx in 0usize..10_000) {
        let all = builtin_catalog();
        let d = &all[idx % all.len()];
        let text = d.to_string();
        let back: GroupDescriptor = text.parse().unwrap();
        prop_assert_eq!(&back, d);
        let built = parse_group(&text).unwrap();
        prop_assert_eq!(built.descriptor(), d);
    }

    #[test]
    fn sequences_round_trip(gi in 0usize..13, raw in prop::collection::vec(0u32..64, 0..8)) {
        let g = small(gi);
        let s = sequence(&g, &raw);
        let text = format_sequence(&s);
        prop_assert_eq!(parse_sequence(&text, &g).unwrap(), s);
    }

    #[test]
    fn freeness_agrees_three_ways(gi in 0usize..13, mask in 1u32..128, raw in prop::collection::vec(0u32..64, 0..7)) {
        let g = small(gi);
        let w = weights_from_mask(mask, g.exponent());
        let s = sequence(&g, &raw);
        let verdict = is_free(&s, &w);
        prop_assert_eq!(verdict.is_free(), !pi_a(&s, &w).contains(0));
        prop_assert_eq!(verdict.is_free(), brute_force_free(&s, &w));
        if let Freeness::NotFree(cert) = verdict {
            prop_assert!(cert.evaluate(&s).is_identity());
            prop_assert!(cert.weights.iter().all(|&a| w.contains(a)));
            prop_assert_eq!(cert.weights.len(), cert.end + 1 - cert.start);
        }
    }

    #[test]
    fn unweighted_freeness_is_distinct_prefix_products(gi in 0usize..13, raw in prop::collection::vec(0u32..64, 0..9)) {
        let g = small(gi);
        let s = sequence(&g, &raw);
        let w = WeightSet::unweighted(g.exponent()).unwrap();
        prop_assert_eq!(prefix_products_distinct(&s), is_free(&s, &w).is_free());
    }

    #[test]
    fn fewer_weights_keep_sequences_free(gi in 0usize..13, small_mask in 1u32..128, extra in 0u32..128, raw in prop::collection::vec(0u32..64, 0..7)) {
        let g = small(gi);
        let a = weights_from_mask(small_mask, g.exponent());
        let b = weights_from_mask(small_mask | extra, g.exponent());
        prop_assume!(a.is_subset(&b));
        let s = sequence(&g, &raw);
        if is_free(&s, &b).is_free() {
            prop_assert!(is_free(&s, &a).is_free());
        }
    }

    #[test]
    fn step_is_monotone(gi in 0usize..13, mask in 1u32..128, x in 0u32..64, small_bits in 0u64..256, extra_bits in 0u64..256) {
        let g = small(gi);
        let n = g.order();
        let w = weights_from_mask(mask, g.exponent());
        let pow = PowTable::new(&g, &w);
        let build = |bits: u64| {
            let mut s = ElementSet::new(n);
            for i in 0..n.min(8) {
                if bits & (1 << i) != 0 {
                    s.insert(i as u32);
                }
            }
            WindowState(s)
        };
        let s = build(small_bits);
        let t = build(small_bits | extra_bits);
        let e = Element(x % n as u32);
        prop_assert!(step(&g, &s, e, &pow).members().is_subset(step(&g, &t, e, &pow).members()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_matches_naive_enumeration(gi in 0usize..13, mask in 1u32..128) {
        let g = small(gi);
        let w = weights_from_mask(mask, g.exponent());
        let cfg = SearchConfig::deterministic();
        let fast = compute_consecutive(&g, &w, &cfg).unwrap();
        let naive = compute_consecutive_naive(&g, &w, g.order()).unwrap();
        prop_assert_eq!(fast.exact(), naive.exact());
        prop_assert_eq!(&fast.witness, &naive.witness);
        let value = fast.exact().unwrap();
        let witness = fast.witness.unwrap();
        prop_assert!(is_free(&witness, &w).is_free());
        prop_assert_eq!(witness.len() as u64 + 1, value);
    }

    #[test]
    fn values_never_exceed_the_order(gi in 0usize..13, mask in 1u32..128) {
        let g = small(gi);
        let w = weights_from_mask(mask | 1, g.exponent());
        let r = compute_consecutive(&g, &w, &SearchConfig::deterministic()).unwrap();
        prop_assert!(r.exact().unwrap() <= g.order() as u64);
    }

    #[test]
    fn more_weights_never_raise_the_constant(gi in 0usize..13, small_mask in 1u32..128, extra in 0u32..128) {
        let g = small(gi);
        let a = weights_from_mask(small_mask, g.exponent());
        let b = weights_from_mask(small_mask | extra, g.exponent());
        prop_assume!(a.is_subset(&b));
        let cfg = SearchConfig::deterministic();
        let ca = compute_consecutive(&g, &a, &cfg).unwrap().exact().unwrap();
        let cb = compute_consecutive(&g, &b, &cfg).unwrap().exact().unwrap();
        prop_assert!(cb <= ca);
    }
}
