//! Ordered sequences and the window-product automaton.
//!
//! After reading `g_1 ⋯ g_j`, the window state is the set of all weighted
//! products `g_i^{a_i} ⋯ g_j^{a_j}` with `i ≤ j` and each `a_t ∈ A` chosen
//! independently. The next state only depends on the current one and the next
//! element, so freeness is decided in one pass.

use std::fmt;
use std::sync::Arc;

use crate::bitset::ElementSet;
use crate::descriptor::format_sequence;
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::weights::WeightSet;

/// A finite word over a group. Order matters and repetition is allowed.
#[derive(Clone)]
pub struct OrderedSequence {
    group: Arc<Group>,
    elements: Vec<Element>,
}

impl OrderedSequence {
    pub fn new(group: Arc<Group>, elements: Vec<Element>) -> Result<Self> {
        if let Some(e) = elements.iter().find(|e| e.index() >= group.order()) {
            return Err(Error::Contract(format!(
                "element index {} out of range for {}",
                e.0,
                group.descriptor()
            )));
        }
        Ok(OrderedSequence { group, elements })
    }

    pub fn empty(group: Arc<Group>) -> Self {
        OrderedSequence {
            group,
            elements: Vec::new(),
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, g: Element) {
        assert!(g.index() < self.group.order(), "element out of range");
        self.elements.push(g);
    }

    /// The ordered product `π*(S)`; the empty sequence multiplies to the identity.
    pub fn product(&self) -> Element {
        self.group.product(self.elements.iter().copied())
    }

    /// `S^[copies]`: the sequence repeated `copies` times in order.
    pub fn repeat(&self, copies: usize) -> Self {
        OrderedSequence {
            group: Arc::clone(&self.group),
            elements: self.elements.repeat(copies),
        }
    }

    /// Reinterprets the same element indices over another group of equal order.
    pub fn rebind(&self, group: Arc<Group>) -> Result<Self> {
        if group.order() != self.group.order() {
            return Err(Error::Contract(format!(
                "cannot move a sequence from {} to {}",
                self.group.descriptor(),
                group.descriptor()
            )));
        }
        Ok(OrderedSequence {
            group,
            elements: self.elements.clone(),
        })
    }
}

impl PartialEq for OrderedSequence {
    fn eq(&self, other: &Self) -> bool {
        self.group.descriptor() == other.group.descriptor() && self.elements == other.elements
    }
}

impl Eq for OrderedSequence {}

impl fmt::Debug for OrderedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] over {}", format_sequence(self), self.group.descriptor())
    }
}

impl fmt::Display for OrderedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sequence(self))
    }
}

/// Distinct values `{g^a : a ∈ A}` for every element `g`.
#[derive(Clone, Debug)]
pub struct PowTable {
    entries: Vec<Vec<Element>>,
}

impl PowTable {
    pub fn new(group: &Group, weights: &WeightSet) -> Self {
        let entries = group
            .elements()
            .map(|g| {
                let mut row: Vec<Element> = weights
                    .weights()
                    .iter()
                    .map(|&a| group.pow(g, a as i64))
                    .collect();
                row.sort_unstable();
                row.dedup();
                row
            })
            .collect();
        PowTable { entries }
    }

    #[inline]
    pub fn powers(&self, g: Element) -> &[Element] {
        &self.entries[g.index()]
    }
}

/// Weighted products of all windows ending at the current position.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WindowState(pub ElementSet);

impl WindowState {
    /// The state before any element has been read.
    pub fn initial(order: usize) -> Self {
        WindowState(ElementSet::new(order))
    }

    pub fn members(&self) -> &ElementSet {
        &self.0
    }

    pub fn contains_identity(&self) -> bool {
        self.0.contains(0)
    }
}

/// `{ p·w : p ∈ state ∪ {1}, w ∈ powers(g) }`. The result may contain the identity.
pub fn step(group: &Group, state: &WindowState, g: Element, pow: &PowTable) -> WindowState {
    WindowState(window_successor(group, &state.0, pow.powers(g)))
}

pub(crate) fn window_successor(group: &Group, state: &ElementSet, powers: &[Element]) -> ElementSet {
    let mut next = ElementSet::new(group.order());
    for &w in powers {
        next.insert(w.0);
    }
    for p in state.iter() {
        for &w in powers {
            next.insert(group.mul(Element(p), w).0);
        }
    }
    next
}

/// Whether stepping by `g` keeps the identity out of the state: the identity
/// appears exactly when some `w⁻¹` lies in `state ∪ {1}`.
#[inline]
pub(crate) fn avoids_identity(group: &Group, state: &ElementSet, powers: &[Element]) -> bool {
    powers.iter().all(|&w| {
        let inv = group.inv(w);
        !inv.is_identity() && !state.contains(inv.0)
    })
}

/// A window `[start, end]` (1-based, inclusive) and weights multiplying it to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub start: usize,
    pub end: usize,
    pub weights: Vec<u64>,
}

impl Certificate {
    /// Recomputes `g_start^{a_start} ⋯ g_end^{a_end}`.
    pub fn evaluate(&self, seq: &OrderedSequence) -> Element {
        let g = seq.group();
        seq.elements()[self.start - 1..self.end]
            .iter()
            .zip(&self.weights)
            .fold(Element::IDENTITY, |acc, (&e, &a)| g.mul(acc, g.pow(e, a as i64)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    Free,
    NotFree(Certificate),
}

impl Freeness {
    pub fn is_free(&self) -> bool {
        matches!(self, Freeness::Free)
    }
}

/// Decides whether `1 ∉ Π_A(S)`, returning a certificate when it is not.
pub fn is_free(seq: &OrderedSequence, weights: &WeightSet) -> Freeness {
    let group = seq.group();
    let pow = PowTable::new(group, weights);
    let mut state = ElementSet::new(group.order());
    for (j, &g) in seq.elements().iter().enumerate() {
        state = window_successor(group, &state, pow.powers(g));
        if state.contains(0) {
            let cert = certificate_ending_at(seq, weights, j)
                .expect("identity in window state implies a product-one window");
            return Freeness::NotFree(cert);
        }
    }
    Freeness::Free
}

/// Finds the shortest window ending at 0-based position `end` with a product-one
/// weight choice, by forward reachability with back pointers.
fn certificate_ending_at(seq: &OrderedSequence, weights: &WeightSet, end: usize) -> Option<Certificate> {
    let group = seq.group();
    let n = group.order();
    let elems = seq.elements();
    for start in (0..=end).rev() {
        // layers[t][x] = (previous product, weight) reaching x after position start + t
        let mut layers: Vec<Vec<Option<(u32, u64)>>> = Vec::with_capacity(end - start + 1);
        let mut first = vec![None; n];
        for &a in weights.weights() {
            let e = group.pow(elems[start], a as i64);
            first[e.index()].get_or_insert((u32::MAX, a));
        }
        layers.push(first);
        for &g in &elems[start + 1..=end] {
            let prev = layers.last().unwrap();
            let mut next = vec![None; n];
            for (p, slot) in prev.iter().enumerate() {
                if slot.is_none() {
                    continue;
                }
                for &a in weights.weights() {
                    let e = group.mul(Element(p as u32), group.pow(g, a as i64));
                    next[e.index()].get_or_insert((p as u32, a));
                }
            }
            layers.push(next);
        }
        if layers.last().unwrap()[0].is_none() {
            continue;
        }
        let mut ws = Vec::with_capacity(layers.len());
        let mut cur = 0u32;
        for layer in layers.iter().rev() {
            let (prev, a) = layer[cur as usize].expect("back pointer");
            ws.push(a);
            cur = prev;
        }
        ws.reverse();
        return Some(Certificate {
            start: start + 1,
            end: end + 1,
            weights: ws,
        });
    }
    None
}

/// `Π_A(S)`: every nonempty weighted consecutive subproduct.
pub fn pi_a(seq: &OrderedSequence, weights: &WeightSet) -> ElementSet {
    let group = seq.group();
    let pow = PowTable::new(group, weights);
    let mut state = ElementSet::new(group.order());
    let mut all = ElementSet::new(group.order());
    for &g in seq.elements() {
        state = window_successor(group, &state, pow.powers(g));
        all.union_with(&state);
    }
    all
}

/// `Π_A(S) ∪ {1}`.
pub fn pi_a_bullet(seq: &OrderedSequence, weights: &WeightSet) -> ElementSet {
    let mut all = pi_a(seq, weights);
    all.insert(0);
    all
}

/// Unweighted freeness through prefix products: `g_i ⋯ g_j = q_{i−1}⁻¹ q_j`, so a
/// sequence is free exactly when `q_0 = 1, q_1, …, q_k` are pairwise distinct.
pub fn prefix_products_distinct(seq: &OrderedSequence) -> bool {
    let group = seq.group();
    let mut seen = ElementSet::new(group.order());
    seen.insert(0);
    let mut q = Element::IDENTITY;
    for &g in seq.elements() {
        q = group.mul(q, g);
        if !seen.insert(q.0) {
            return false;
        }
    }
    true
}

/// [`prefix_products_distinct`] guarded to the unweighted case `A = {1}`.
pub fn is_free_unweighted_fast(seq: &OrderedSequence, weights: &WeightSet) -> Result<bool> {
    if !weights.is_unweighted() {
        return Err(Error::Contract(format!(
            "the prefix-product test only applies to A = {{1}}, got {}",
            weights.canonical()
        )));
    }
    Ok(prefix_products_distinct(seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{parse_group, parse_sequence};
    use crate::group::MetacyclicParams;

    fn group(text: &str) -> Arc<Group> {
        Arc::new(parse_group(text).unwrap())
    }

    fn seq(g: &Arc<Group>, text: &str) -> OrderedSequence {
        parse_sequence(text, g).unwrap()
    }

    fn set(order: usize, items: &[u32]) -> ElementSet {
        let mut s = ElementSet::new(order);
        for &i in items {
            s.insert(i);
        }
        s
    }

    #[test]
    fn weighted_powers_examples() {
        let c6 = group("C6");
        let pow = PowTable::new(&c6, &WeightSet::full(6).unwrap());
        assert_eq!(pow.powers(Element(1)), &[Element(1), Element(2), Element(3), Element(4), Element(5)]);
        assert_eq!(pow.powers(Element(3)), &[Element(0), Element(3)]);
        let c5 = group("C5");
        let pow = PowTable::new(&c5, &WeightSet::unit_powers(5, 2).unwrap());
        assert_eq!(pow.powers(Element(1)), &[Element(1), Element(4)]);
        assert_eq!(pow.powers(Element(0)), &[Element(0)]);
    }

    #[test]
    fn step_examples() {
        let c7 = group("C7");
        let unweighted = WeightSet::unweighted(7).unwrap();
        let pow = PowTable::new(&c7, &unweighted);
        let s = step(&c7, &WindowState::initial(7), Element(3), &pow);
        assert_eq!(s.members(), &set(7, &[3]));

        let c4 = group("C4");
        let pow = PowTable::new(&c4, &WeightSet::explicit(&[2], 4).unwrap());
        let s = step(&c4, &WindowState(set(4, &[2])), Element(1), &pow);
        assert_eq!(s.members(), &set(4, &[0, 2]));
        assert!(s.contains_identity());

        let d4 = group("M(4,2,4,3)");
        let p = MetacyclicParams::new(4, 2, 4, 3).unwrap();
        let (x, y) = (p.index_of(1, 0), p.index_of(0, 1));
        let pow = PowTable::new(&d4, &WeightSet::unweighted(4).unwrap());
        let mut s = WindowState::initial(8);
        for _ in 0..3 {
            s = step(&d4, &s, y, &pow);
        }
        s = step(&d4, &s, x, &pow);
        let expected: Vec<u32> = [(1, 0), (1, 1), (1, 2), (1, 3)]
            .iter()
            .map(|&(a, b)| p.index_of(a, b).0)
            .collect();
        assert_eq!(s.members(), &set(8, &expected));
        assert!(!s.contains_identity());
        // y³x = x·y^{3s}
        assert!(s.members().contains(d4.mul(d4.pow(y, 3), x).0));
    }

    #[test]
    fn freeness_examples() {
        let c5 = group("C5");
        let a1 = WeightSet::unweighted(5).unwrap();
        assert!(is_free(&seq(&c5, "1,1,1,1"), &a1).is_free());
        assert!(!is_free(&seq(&c5, "1,1,1,1,1"), &a1).is_free());

        let d4 = group("M(4,2,4,3)");
        let s = seq(&d4, "y,y,y,x,y,y,y");
        assert!(is_free(&s, &WeightSet::unweighted(4).unwrap()).is_free());

        let c4 = group("C4");
        let s = seq(&c4, "1,1");
        let verdict = is_free(&s, &WeightSet::explicit(&[2], 4).unwrap());
        assert_eq!(
            verdict,
            Freeness::NotFree(Certificate { start: 1, end: 2, weights: vec![2, 2] })
        );
    }

    #[test]
    fn certificates_evaluate_to_identity() {
        let g = group("P(C2,S3)");
        let full = WeightSet::full(g.exponent()).unwrap();
        let s = seq(&g, "(1|x),(0|y),(1|xy),(0|y^2)");
        match is_free(&s, &full) {
            Freeness::NotFree(c) => {
                assert_eq!(c.evaluate(&s), Element::IDENTITY);
                assert_eq!(c.weights.len(), c.end - c.start + 1);
                assert!(c.weights.iter().all(|&a| full.contains(a)));
            }
            Freeness::Free => panic!("expected a product-one window"),
        }
    }

    #[test]
    fn empty_sequence_conventions() {
        let c5 = group("C5");
        let s = OrderedSequence::empty(Arc::clone(&c5));
        let a = WeightSet::unweighted(5).unwrap();
        assert!(is_free(&s, &a).is_free());
        assert!(pi_a(&s, &a).is_empty());
        assert_eq!(pi_a_bullet(&s, &a), set(5, &[0]));
        assert_eq!(s.product(), Element::IDENTITY);
    }

    #[test]
    fn pi_a_examples() {
        let c4 = group("C4");
        assert_eq!(pi_a(&seq(&c4, "1,1"), &WeightSet::unweighted(4).unwrap()), set(4, &[1, 2]));
        let c5 = group("C5");
        let sq = WeightSet::unit_powers(5, 2).unwrap();
        assert_eq!(pi_a(&seq(&c5, "1"), &sq), set(5, &[1, 4]));
    }

    #[test]
    fn prefix_fast_path() {
        let c6 = group("C6");
        let a = WeightSet::unweighted(6).unwrap();
        assert!(is_free_unweighted_fast(&seq(&c6, "1,1,1,1,1"), &a).unwrap());
        assert!(!is_free_unweighted_fast(&seq(&c6, "1,1,1,1,1,1"), &a).unwrap());
        assert!(is_free_unweighted_fast(&seq(&c6, "1"), &WeightSet::full(6).unwrap()).is_err());
        let s = seq(&c6, "5,4,3,2,1,2");
        assert!(!is_free_unweighted_fast(&s, &a).unwrap());
    }

    #[test]
    fn repeat_and_product() {
        let d4 = group("D4");
        let block = seq(&d4, "y,y,y,x");
        let s = block.repeat(2);
        assert_eq!(s.len(), 8);
        assert_eq!(s.to_string(), "y,y,y,x,y,y,y,x");
        assert!(OrderedSequence::new(Arc::clone(&d4), vec![Element(8)]).is_err());
    }
}
