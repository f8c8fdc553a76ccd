//! Built-in group catalogs.

use crate::descriptor::GroupDescriptor;
use crate::group::MetacyclicParams;

pub fn cyclic_catalog(max_order: u32) -> Vec<GroupDescriptor> {
    (2..=max_order).map(GroupDescriptor::Cyclic).collect()
}

/// Every invariant-factor chain `n_1 | ⋯ | n_r` of rank at least `min_rank`
/// with product at most `max_order`.
pub fn abelian_catalog(max_order: u32, min_rank: usize) -> Vec<GroupDescriptor> {
    fn extend(chain: &mut Vec<u32>, product: u32, max_order: u32, min_rank: usize, out: &mut Vec<GroupDescriptor>) {
        if chain.len() >= min_rank {
            out.push(GroupDescriptor::Abelian(chain.clone()));
        }
        let last = chain.last().copied().unwrap_or(1);
        let mut next = if last == 1 { 2 } else { last };
        while product * next <= max_order {
            if next % last == 0 {
                chain.push(next);
                extend(chain, product * next, max_order, min_rank, out);
                chain.pop();
            }
            next += if last == 1 { 1 } else { last };
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, min_rank.max(1), &mut out);
    out.sort_by_key(|d| (order_of(d), d.to_string()));
    out
}

/// Valid presentations `M(n, k, ℓ, s)` with `n, k ≥ 2`, `nk ≤ max_order`,
/// `ℓ | n` and `1 ≤ s < n`.
pub fn metacyclic_catalog(max_order: u32) -> Vec<GroupDescriptor> {
    let mut out = Vec::new();
    for n in 2..=max_order / 2 {
        for k in 2..=max_order / n {
            for l in (1..=n).filter(|l| n % l == 0) {
                for s in 1..n {
                    if let Ok(p) = MetacyclicParams::new(n, k, l, s) {
                        out.push(GroupDescriptor::Metacyclic(p));
                    }
                }
            }
        }
    }
    out
}

/// Products of a small abelian group with a small non-abelian metacyclic group.
pub fn product_catalog(max_order: u32) -> Vec<GroupDescriptor> {
    let left = ["C2", "C3", "C4", "A[2,2]"];
    let right = ["S3", "D4", "Q8", "D5", "D6", "M(3,4,3,2)"];
    let mut out = Vec::new();
    for h in left {
        for k in right {
            let d = GroupDescriptor::Product(
                Box::new(h.parse().expect("catalog entry")),
                Box::new(k.parse().expect("catalog entry")),
            );
            if order_of(&d) <= max_order as u64 {
                out.push(d);
            }
        }
    }
    out
}

/// One representative of every isomorphism type of order 2 to 8.
pub fn small_groups() -> Vec<GroupDescriptor> {
    ["C2", "C3", "C4", "A[2,2]", "C5", "C6", "S3", "C7", "C8", "A[2,4]", "A[2,2,2]", "D4", "Q8"]
        .iter()
        .map(|t| t.parse().expect("catalog entry"))
        .collect()
}

/// Cyclic groups up to order 16, abelian groups up to 24, metacyclic
/// presentations up to 16 and abelian-by-metacyclic products up to 24.
pub fn builtin_catalog() -> Vec<GroupDescriptor> {
    let mut out = cyclic_catalog(16);
    out.extend(abelian_catalog(24, 2));
    out.extend(metacyclic_catalog(16));
    out.extend(product_catalog(24));
    let mut seen = std::collections::HashSet::new();
    out.retain(|d| seen.insert(d.to_string()));
    out
}

/// Group order computed from the descriptor alone.
pub fn order_of(d: &GroupDescriptor) -> u64 {
    match d {
        GroupDescriptor::Cyclic(n) => u64::from(*n),
        GroupDescriptor::Abelian(f) => f.iter().map(|&x| u64::from(x)).product(),
        GroupDescriptor::Metacyclic(p) => p.order() as u64,
        GroupDescriptor::Product(h, k) => order_of(h) * order_of(k),
        GroupDescriptor::Dihedral(m) => 2 * u64::from(*m),
        GroupDescriptor::Quaternion => 8,
        GroupDescriptor::Symmetric3 => 6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn abelian_chains() {
        let names: Vec<String> = abelian_catalog(8, 1).iter().map(|d| d.to_string()).collect();
        assert_eq!(
            names,
            vec!["A[2]", "A[3]", "A[2,2]", "A[4]", "A[5]", "A[6]", "A[7]", "A[2,2,2]", "A[2,4]", "A[8]"]
        );
        let rank2: Vec<String> = abelian_catalog(24, 2).iter().map(|d| d.to_string()).collect();
        assert!(rank2.contains(&"A[2,12]".to_string()));
        assert!(rank2.contains(&"A[2,2,6]".to_string()));
        assert!(!rank2.contains(&"A[2,3]".to_string()));
    }

    #[test]
    fn every_catalog_entry_builds() {
        for d in builtin_catalog() {
            let g = Group::build(&d).unwrap_or_else(|e| panic!("{d}: {e}"));
            assert_eq!(g.order() as u64, order_of(&d));
        }
    }

    #[test]
    fn metacyclic_catalog_contains_the_classics() {
        let names: Vec<String> = metacyclic_catalog(16).iter().map(|d| d.to_string()).collect();
        for name in ["M(4,2,4,3)", "M(4,2,2,3)", "M(3,2,3,2)", "M(5,2,5,4)", "M(8,2,8,7)"] {
            assert!(names.contains(&name.to_string()), "{name}");
        }
    }

    #[test]
    fn small_groups_have_distinct_profiles_or_abelianness() {
        let groups: Vec<Group> = small_groups().iter().map(|d| Group::build(d).unwrap()).collect();
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i + 1..] {
                assert!(
                    a.order_profile() != b.order_profile() || a.is_abelian() != b.is_abelian(),
                    "{:?} and {:?} look isomorphic",
                    a,
                    b
                );
            }
        }
    }
}
