//! Explicit free sequences certifying lower bounds without search.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Element, Group, MetacyclicParams, Structure};
use crate::sequence::{is_free, OrderedSequence};
use crate::solver::{compute_consecutive, SearchConfig};
use crate::weights::{WeightKind, WeightSet};

/// `g^[n−1]` over `C_n` with `g` the element of index 1.
pub fn cyclic_free(n: u32) -> Result<OrderedSequence> {
    if n < 2 {
        return Err(Error::Contract(format!("cyclic_free needs n >= 2, got {n}")));
    }
    let g = Arc::new(Group::cyclic(n)?);
    OrderedSequence::new(g, vec![Element(1); n as usize - 1])
}

/// `(y^[n−1] · x)^[k−1] · y^[n−1]` over `M(n, k, ℓ, s)`, of length `nk − 1`.
pub fn metacyclic_free(params: MetacyclicParams) -> Result<OrderedSequence> {
    metacyclic_free_over(&Arc::new(Group::metacyclic(params)?))
}

/// [`metacyclic_free`] over any group built from a metacyclic presentation,
/// including the `D<m>`, `Q8` and `S3` aliases.
pub fn metacyclic_free_over(group: &Arc<Group>) -> Result<OrderedSequence> {
    let Structure::Metacyclic(p) = group.structure() else {
        return Err(Error::Contract(format!(
            "{} is not given by a metacyclic presentation",
            group.descriptor()
        )));
    };
    let x = if p.k > 1 { p.index_of(1, 0) } else { Element::IDENTITY };
    let y = p.index_of(0, 1 % p.n);
    let block = vec![y; p.n as usize - 1];
    let mut elems = Vec::with_capacity(p.order() - 1);
    for _ in 1..p.k {
        elems.extend_from_slice(&block);
        elems.push(x);
    }
    elems.extend_from_slice(&block);
    OrderedSequence::new(Arc::clone(group), elems)
}

/// Interleaves lifted copies of `s1` (over `H`) with the lifted elements of `s2`
/// (over `K`): `S1 · (1,g_1) · S1 · (1,g_2) ⋯ (1,g_t) · S1` over `H × K`. The
/// result has length `(|S1| + 1)(|S2| + 1) − 1` and is free whenever both inputs are.
pub fn product_interleave(s1: &OrderedSequence, s2: &OrderedSequence, weights: &WeightSet) -> Result<OrderedSequence> {
    let (h, k) = (s1.group(), s2.group());
    if !weights.is_unweighted() && h.exponent() != k.exponent() {
        return Err(Error::Contract(format!(
            "weighted interleaving needs exp(H) = exp(K), got {} and {}",
            h.exponent(),
            k.exponent()
        )));
    }
    for (name, s) in [("first", s1), ("second", s2)] {
        if !is_free(s, weights).is_free() {
            return Err(Error::Contract(format!("the {name} sequence is not free for {weights}")));
        }
    }
    let product = Arc::new(Group::direct_product(h, k)?);
    Ok(interleave_into(s1, s2, product))
}

fn interleave_into(s1: &OrderedSequence, s2: &OrderedSequence, product: Arc<Group>) -> OrderedSequence {
    let kn = s2.group().order() as u32;
    let lifted: Vec<Element> = s1.elements().iter().map(|e| Element(e.0 * kn)).collect();
    let mut elems = Vec::with_capacity((s1.len() + 1) * (s2.len() + 1) - 1);
    elems.extend_from_slice(&lifted);
    for &g in s2.elements() {
        elems.push(g);
        elems.extend_from_slice(&lifted);
    }
    OrderedSequence::new(product, elems).expect("lifted indices are in range")
}

/// Rank-one free sequences of length 2 for the unit-power weight families,
/// found by exhaustive search (lexicographically least) and frozen.
const FROZEN_RANK_ONE: &[(&str, u64, [u32; 2])] = &[
    ("U^2", 3, [1, 1]),
    ("U^2", 5, [1, 2]),
    ("U^2", 7, [1, 1]),
    ("U^2", 11, [1, 1]),
    ("U^2", 13, [1, 2]),
    ("U-U2", 3, [1, 1]),
    ("U-U2", 5, [1, 2]),
    ("U-U2", 7, [1, 1]),
    ("U-U2", 11, [1, 1]),
    ("U-U2", 13, [1, 2]),
    ("U^3", 13, [1, 2]),
];

/// Weight families with a known rank-one value `C_A(C_n) = b`, returning `(n, b, tag)`.
fn rank_one_family(weights: &WeightSet) -> Result<(u32, u64, &'static str)> {
    let unsupported = || {
        Error::Contract(format!(
            "rank-power construction supports full, U^2(p), U-U2(p) and U^3(p) weights, got {weights}"
        ))
    };
    match *weights.kind() {
        WeightKind::Full => Ok((weights.modulus() as u32, 2, "full")),
        WeightKind::UnitPowers { p, nu: 2 } if p > 2 => Ok((p as u32, 3, "U^2")),
        WeightKind::UnitNonSquares { p } => Ok((p as u32, 3, "U-U2")),
        WeightKind::UnitPowers { p, nu: 3 } if p % 3 == 1 && p != 7 => Ok((p as u32, 3, "U^3")),
        _ => Err(unsupported()),
    }
}

/// The rank-one free sequence of length `b − 1` over `C_n`.
pub fn rank_one_witness(weights: &WeightSet) -> Result<OrderedSequence> {
    let (n, b, tag) = rank_one_family(weights)?;
    let group = Arc::new(Group::cyclic(n)?);
    if tag == "full" {
        return OrderedSequence::new(group, vec![Element(1)]);
    }
    if let Some((_, _, elems)) = FROZEN_RANK_ONE
        .iter()
        .find(|(t, p, _)| *t == tag && *p == u64::from(n))
    {
        return OrderedSequence::new(group, elems.iter().map(|&i| Element(i)).collect());
    }
    let r = compute_consecutive(&group, weights, &SearchConfig::deterministic())?;
    match (r.exact(), r.witness) {
        (Some(v), Some(w)) if v == b => Ok(w),
        (v, _) => Err(Error::Contract(format!(
            "expected C_A(C_{n}) = {b} for {weights}, search gave {v:?}"
        ))),
    }
}

/// A free sequence of length `b^r − 1` over `C_n^r`, by repeatedly interleaving
/// the rank-one witness into the rank `r − 1` one.
pub fn rank_power_free(n: u32, r: u32, weights: &WeightSet) -> Result<OrderedSequence> {
    if r == 0 {
        return Err(Error::Contract("rank must be at least 1".into()));
    }
    let (modulus, _, _) = rank_one_family(weights)?;
    if modulus != n {
        return Err(Error::Contract(format!(
            "weights {weights} belong to modulus {modulus}, not {n}"
        )));
    }
    let base = rank_one_witness(weights)?;
    let mut current = base.rebind(Arc::new(Group::abelian(&[n])?))?;
    for rank in 2..=r {
        // C_n^{rank-1} × C_n and A[n; rank] share the same mixed-radix indices
        let target = Arc::new(Group::abelian(&vec![n; rank as usize])?);
        current = interleave_into(&current, &base, target);
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::parse_group;
    use crate::sequence::prefix_products_distinct;

    fn unweighted(m: u64) -> WeightSet {
        WeightSet::unweighted(m).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        for n in 2..=12 {
            let s = cyclic_free(n).unwrap();
            assert_eq!(s.len(), n as usize - 1);
            assert!(is_free(&s, &unweighted(u64::from(n))).is_free());
        }
        assert_eq!(cyclic_free(5).unwrap().to_string(), "1,1,1,1");
        assert!(cyclic_free(1).is_err());
    }

    #[test]
    fn metacyclic_examples() {
        let d4 = metacyclic_free(MetacyclicParams::new(4, 2, 4, 3).unwrap()).unwrap();
        assert_eq!(d4.to_string(), "y,y,y,x,y,y,y");
        assert!(is_free(&d4, &unweighted(4)).is_free());
        let q8 = metacyclic_free(MetacyclicParams::new(4, 2, 2, 3).unwrap()).unwrap();
        assert_eq!(q8.to_string(), "y,y,y,x,y,y,y");
        assert!(is_free(&q8, &unweighted(4)).is_free());
        for n in 2..=9 {
            let m = metacyclic_free(MetacyclicParams::new(n, 1, n, 1).unwrap()).unwrap();
            assert_eq!(m.elements(), cyclic_free(n).unwrap().elements());
        }
    }

    #[test]
    fn metacyclic_free_lengths() {
        for (n, k, l, s) in [(3, 2, 3, 2), (5, 2, 5, 4), (8, 2, 8, 7), (7, 3, 7, 2), (8, 2, 4, 3), (4, 4, 2, 3)] {
            let p = MetacyclicParams::new(n, k, l, s).unwrap();
            let seq = metacyclic_free(p).unwrap();
            assert_eq!(seq.len(), p.order() - 1);
            assert!(prefix_products_distinct(&seq));
            assert!(is_free(&seq, &WeightSet::unweighted(seq.group().exponent()).unwrap()).is_free());
        }
        let d5 = Arc::new(parse_group("D5").unwrap());
        assert_eq!(metacyclic_free_over(&d5).unwrap().len(), 9);
        let c5 = Arc::new(parse_group("C5").unwrap());
        assert!(metacyclic_free_over(&c5).is_err());
    }

    #[test]
    fn interleave_examples() {
        let full3 = WeightSet::full(3).unwrap();
        let h = Arc::new(Group::cyclic(3).unwrap());
        let s1 = OrderedSequence::new(Arc::clone(&h), vec![Element(1)]).unwrap();
        let s = product_interleave(&s1, &s1, &full3).unwrap();
        assert_eq!(s.to_string(), "(1|0),(0|1),(1|0)");
        assert!(is_free(&s, &full3).is_free());

        let c2 = Arc::new(Group::cyclic(2).unwrap());
        let c3 = Arc::new(Group::cyclic(3).unwrap());
        let s1 = OrderedSequence::new(c2, vec![Element(1)]).unwrap();
        let s2 = OrderedSequence::new(Arc::clone(&c3), vec![Element(1), Element(1)]).unwrap();
        let s = product_interleave(&s1, &s2, &unweighted(6)).unwrap();
        assert_eq!(s.len(), 5);
        assert!(is_free(&s, &unweighted(6)).is_free());

        let empty = OrderedSequence::empty(c3);
        let s = product_interleave(&s1, &empty, &unweighted(6)).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn interleave_rejects_bad_inputs() {
        let c2 = Arc::new(Group::cyclic(2).unwrap());
        let c4 = Arc::new(Group::cyclic(4).unwrap());
        let s1 = OrderedSequence::new(c2, vec![Element(1)]).unwrap();
        let s2 = OrderedSequence::new(Arc::clone(&c4), vec![Element(1)]).unwrap();
        let w = WeightSet::full(4).unwrap();
        assert!(product_interleave(&s1, &s2, &w).is_err());
        let not_free = OrderedSequence::new(c4, vec![Element(2), Element(2)]).unwrap();
        assert!(product_interleave(&s2, &not_free, &unweighted(4)).is_err());
    }

    #[test]
    fn rank_power_examples() {
        let full4 = WeightSet::full(4).unwrap();
        let s = rank_power_free(4, 3, &full4).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(s.group().descriptor().to_string(), "A[4,4,4]");
        assert!(is_free(&s, &full4).is_free());

        let sq5 = WeightSet::unit_powers(5, 2).unwrap();
        let s = rank_power_free(5, 2, &sq5).unwrap();
        assert_eq!(s.len(), 8);
        assert!(is_free(&s, &sq5).is_free());

        let full7 = WeightSet::full(7).unwrap();
        assert_eq!(rank_power_free(7, 1, &full7).unwrap().len(), 1);

        assert!(rank_power_free(5, 2, &WeightSet::explicit(&[1, 2], 5).unwrap()).is_err());
        assert!(rank_power_free(7, 2, &WeightSet::unit_powers(7, 3).unwrap()).is_err());
        assert!(rank_power_free(5, 2, &full4).is_err());
    }

    #[test]
    fn frozen_rank_one_witnesses_match_search() {
        for &(tag, p, elems) in FROZEN_RANK_ONE {
            let w = match tag {
                "U^2" => WeightSet::unit_powers(p, 2),
                "U-U2" => WeightSet::unit_non_squares(p),
                _ => WeightSet::unit_powers(p, 3),
            }
            .unwrap();
            let g = Arc::new(Group::cyclic(p as u32).unwrap());
            let r = compute_consecutive(&g, &w, &SearchConfig::deterministic()).unwrap();
            assert_eq!(r.exact(), Some(3), "{tag}({p})");
            let found: Vec<u32> = r.witness.unwrap().elements().iter().map(|e| e.0).collect();
            assert_eq!(found, elems.to_vec(), "{tag}({p})");
        }
    }

    #[test]
    fn unfrozen_family_falls_back_to_search() {
        let w = WeightSet::unit_powers(17, 2).unwrap();
        let base = rank_one_witness(&w).unwrap();
        assert_eq!(base.len(), 2);
        assert!(is_free(&base, &w).is_free());
    }
}
