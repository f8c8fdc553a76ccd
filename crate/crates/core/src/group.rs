//! Finite groups as dense Cayley tables.
//!
//! Every group is stored as an `order × order` multiplication table over element
//! indices `0..order`, with index 0 reserved for the identity. Builders exist for
//! cyclic groups, abelian groups in invariant-factor form, metacyclic groups given
//! by a presentation `⟨x, y | yⁿ = 1, xᵏ = yˡ, yx = xyˢ⟩`, and direct products.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{lcm, mod_pow};
use crate::descriptor::GroupDescriptor;
use crate::error::{Error, Result};

/// Largest group order the builders accept unless told otherwise.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// Associativity is checked on every triple up to this order, and sampled above it.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;

/// Index of an element inside its owning [`Group`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// Parameters `(n, k, ℓ, s)` of the presentation `⟨x, y | yⁿ = 1, xᵏ = yˡ, yx = xyˢ⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetacyclicParams {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub s: u32,
}

impl MetacyclicParams {
    pub fn new(n: u32, k: u32, l: u32, s: u32) -> Result<Self> {
        let p = MetacyclicParams { n, k, l, s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let MetacyclicParams { n, k, l, s } = *self;
        if n == 0 || k == 0 || l == 0 || s == 0 {
            return Err(Error::InvalidMetacyclic(format!(
                "all of n, k, l, s must be positive (got n={n}, k={k}, l={l}, s={s})"
            )));
        }
        let n64 = u64::from(n);
        if mod_pow(u64::from(s), u64::from(k), n64) != 1 % n64 {
            return Err(Error::InvalidMetacyclic(format!(
                "n = {n} does not divide s^k - 1 = {s}^{k} - 1"
            )));
        }
        if (u64::from(l) % n64) * ((u64::from(s) - 1) % n64) % n64 != 0 {
            return Err(Error::InvalidMetacyclic(format!(
                "n = {n} does not divide l(s - 1) = {l}·({s} - 1)"
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n as usize * self.k as usize
    }

    /// Normal-form index of `x^a y^b`.
    pub fn index_of(&self, a: u32, b: u32) -> Element {
        debug_assert!(a < self.k && b < self.n);
        Element(a * self.n + b)
    }

    /// Exponents `(a, b)` of the normal form `x^a y^b` of an element.
    pub fn normal_form(&self, e: Element) -> (u32, u32) {
        (e.0 / self.n, e.0 % self.n)
    }

    fn multiply(&self, lhs: (u32, u32), rhs: (u32, u32)) -> (u32, u32) {
        let (a, b) = lhs;
        let (c, d) = rhs;
        let n = u64::from(self.n);
        let k = u64::from(self.k);
        let sum = u64::from(a) + u64::from(c);
        let carry = sum / k;
        let twist = mod_pow(u64::from(self.s), u64::from(c), n);
        let y = (u64::from(self.l) * carry + u64::from(b) * twist + u64::from(d)) % n;
        ((sum % k) as u32, y as u32)
    }
}

impl fmt::Display for MetacyclicParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{},{},{})", self.n, self.k, self.l, self.s)
    }
}

/// How the element indices of a group decompose, used to name elements.
#[derive(Clone, Debug)]
pub enum Structure {
    Cyclic(u32),
    /// Invariant factors; index is mixed radix with the last factor least significant.
    Abelian(Vec<u32>),
    Metacyclic(MetacyclicParams),
    /// `(h, k) ↦ h·|K| + k`.
    Product(Arc<Group>, Arc<Group>),
}

/// An immutable finite group.
#[derive(Clone)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
    exponent: u64,
    abelian: bool,
    descriptor: GroupDescriptor,
    structure: Structure,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("descriptor", &self.descriptor.to_string())
            .field("order", &self.order)
            .field("exponent", &self.exponent)
            .finish()
    }
}

impl PartialEq for Group {
    /// Groups compare by descriptor; no isomorphism testing is attempted.
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

impl Eq for Group {}

impl Group {
    pub fn cyclic(n: u32) -> Result<Group> {
        Self::cyclic_with_cap(n, DEFAULT_ORDER_CAP)
    }

    fn cyclic_with_cap(n: u32, cap: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group order must be at least 1".into()));
        }
        check_cap(n as usize, cap)?;
        Group::from_fn(
            n as usize,
            |i, j| (i + j) % n,
            GroupDescriptor::Cyclic(n),
            Structure::Cyclic(n),
        )
    }

    /// `C_{n_1} × ⋯ × C_{n_r}` with `1 < n_1 | n_2 | ⋯ | n_r`.
    pub fn abelian(factors: &[u32]) -> Result<Group> {
        Self::abelian_with_cap(factors, DEFAULT_ORDER_CAP)
    }

    fn abelian_with_cap(factors: &[u32], cap: usize) -> Result<Group> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("abelian group needs at least one invariant factor".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&f| f <= 1) {
            return Err(Error::InvalidGroup(format!(
                "invariant factor {bad} must be greater than 1"
            )));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidGroup(format!(
                    "invariant factors must form a divisibility chain, but {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f as usize))
            .ok_or(Error::OrderCap { order: usize::MAX, cap })?;
        check_cap(order, cap)?;
        let digits = |mut i: u32| {
            let mut out = vec![0u32; factors.len()];
            for (slot, &f) in out.iter_mut().zip(factors.iter()).rev() {
                *slot = i % f;
                i /= f;
            }
            out
        };
        let compose = |d: &[u32]| d.iter().zip(factors).fold(0u32, |acc, (&x, &f)| acc * f + x);
        Group::from_fn(
            order,
            |i, j| {
                let (a, b) = (digits(i), digits(j));
                let sum: Vec<u32> = a
                    .iter()
                    .zip(&b)
                    .zip(factors)
                    .map(|((&x, &y), &f)| (x + y) % f)
                    .collect();
                compose(&sum)
            },
            GroupDescriptor::Abelian(factors.to_vec()),
            Structure::Abelian(factors.to_vec()),
        )
    }

    pub fn metacyclic(params: MetacyclicParams) -> Result<Group> {
        Self::metacyclic_with(params, GroupDescriptor::Metacyclic(params), DEFAULT_ORDER_CAP)
    }

    fn metacyclic_with(params: MetacyclicParams, descriptor: GroupDescriptor, cap: usize) -> Result<Group> {
        params.validate()?;
        check_cap(params.order(), cap)?;
        Group::from_fn(
            params.order(),
            |i, j| {
                let (a, b) = params.multiply(
                    params.normal_form(Element(i)),
                    params.normal_form(Element(j)),
                );
                params.index_of(a, b).0
            },
            descriptor,
            Structure::Metacyclic(params),
        )
    }

    /// Dihedral group of order `2m`, presented as `M(m, 2, m, m − 1)`.
    pub fn dihedral(m: u32) -> Result<Group> {
        Group::build(&GroupDescriptor::Dihedral(m))
    }

    pub fn quaternion() -> Group {
        Group::build(&GroupDescriptor::Quaternion).expect("Q8 parameters are valid")
    }

    pub fn symmetric3() -> Group {
        Group::build(&GroupDescriptor::Symmetric3).expect("S3 parameters are valid")
    }

    pub fn direct_product(h: &Group, k: &Group) -> Result<Group> {
        Self::direct_product_with_cap(h, k, DEFAULT_ORDER_CAP)
    }

    pub fn direct_product_with_cap(h: &Group, k: &Group, cap: usize) -> Result<Group> {
        let order = h
            .order
            .checked_mul(k.order)
            .ok_or(Error::OrderCap { order: usize::MAX, cap })?;
        check_cap(order, cap)?;
        let kn = k.order as u32;
        Group::from_fn(
            order,
            |i, j| {
                let left = h.mul(Element(i / kn), Element(j / kn));
                let right = k.mul(Element(i % kn), Element(j % kn));
                left.0 * kn + right.0
            },
            GroupDescriptor::Product(Box::new(h.descriptor.clone()), Box::new(k.descriptor.clone())),
            Structure::Product(Arc::new(h.clone()), Arc::new(k.clone())),
        )
    }

    pub fn build(descriptor: &GroupDescriptor) -> Result<Group> {
        Self::build_with_cap(descriptor, DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(descriptor: &GroupDescriptor, cap: usize) -> Result<Group> {
        match descriptor {
            GroupDescriptor::Cyclic(n) => Group::cyclic_with_cap(*n, cap),
            GroupDescriptor::Abelian(f) => Group::abelian_with_cap(f, cap),
            GroupDescriptor::Metacyclic(p) => Group::metacyclic_with(*p, descriptor.clone(), cap),
            GroupDescriptor::Dihedral(m) => {
                if *m < 2 {
                    return Err(Error::InvalidGroup(format!(
                        "dihedral group D{m} needs m >= 2"
                    )));
                }
                let p = MetacyclicParams::new(*m, 2, *m, m - 1)?;
                Group::metacyclic_with(p, descriptor.clone(), cap)
            }
            GroupDescriptor::Quaternion => {
                Group::metacyclic_with(MetacyclicParams::new(4, 2, 2, 3)?, descriptor.clone(), cap)
            }
            GroupDescriptor::Symmetric3 => {
                Group::metacyclic_with(MetacyclicParams::new(3, 2, 3, 2)?, descriptor.clone(), cap)
            }
            GroupDescriptor::Product(h, k) => {
                let h = Group::build_with_cap(h, cap)?;
                let k = Group::build_with_cap(k, cap)?;
                Group::direct_product_with_cap(&h, &k, cap)
            }
        }
    }

    fn from_fn(
        order: usize,
        mul: impl Fn(u32, u32) -> u32,
        descriptor: GroupDescriptor,
        structure: Structure,
    ) -> Result<Group> {
        let mut table = Vec::with_capacity(order * order);
        for i in 0..order as u32 {
            for j in 0..order as u32 {
                table.push(mul(i, j));
            }
        }
        Group::from_table(order, table, descriptor, structure)
    }

    fn from_table(
        order: usize,
        table: Vec<u32>,
        descriptor: GroupDescriptor,
        structure: Structure,
    ) -> Result<Group> {
        let bad = |msg: String| Error::InvalidGroup(format!("{descriptor}: {msg}"));
        if table.len() != order * order {
            return Err(bad("table has the wrong size".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(bad("table entry out of range".into()));
        }
        for g in 0..order {
            if table[g] as usize != g || table[g * order] as usize != g {
                return Err(bad(format!("index 0 does not act as identity on {g}")));
            }
        }
        check_latin_square(order, &table).map_err(bad)?;
        check_associative(order, &table).map_err(bad)?;

        let mut inverses = vec![0u32; order];
        for g in 0..order {
            let row = &table[g * order..(g + 1) * order];
            inverses[g] = row.iter().position(|&x| x == 0).expect("latin square row") as u32;
        }
        let mut element_orders = vec![0u32; order];
        for g in 0..order {
            let mut acc = g as u32;
            let mut k = 1u32;
            while acc != 0 {
                acc = table[acc as usize * order + g];
                k += 1;
            }
            element_orders[g] = k;
        }
        let exponent = element_orders.iter().fold(1u64, |acc, &o| lcm(acc, u64::from(o)));
        let abelian = (0..order).all(|i| (0..i).all(|j| table[i * order + j] == table[j * order + i]));
        Ok(Group {
            order,
            table,
            inverses,
            element_orders,
            exponent,
            abelian,
            descriptor,
            structure,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order as u32).map(Element)
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.element_orders
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<u32> {
        let mut p = self.element_orders.clone();
        p.sort_unstable();
        p
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        assert!(a.index() < self.order && b.index() < self.order, "element out of range");
        Element(self.table[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        Element(self.inverses[a.index()])
    }

    pub fn pow(&self, a: Element, e: i64) -> Element {
        let mut base = if e < 0 { self.inv(a) } else { a };
        // exponents only matter modulo the element order
        let mut e = e.unsigned_abs() % u64::from(self.element_orders[a.index()]);
        let mut acc = Element::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn order_of(&self, a: Element) -> u32 {
        self.element_orders[a.index()]
    }

    /// Ordered product `g_1 ⋯ g_k`; the empty product is the identity.
    pub fn product<I: IntoIterator<Item = Element>>(&self, elems: I) -> Element {
        elems.into_iter().fold(Element::IDENTITY, |acc, g| self.mul(acc, g))
    }
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(Error::OrderCap { order, cap })
    } else {
        Ok(())
    }
}

fn check_latin_square(order: usize, table: &[u32]) -> std::result::Result<(), String> {
    let mut seen = vec![0usize; order];
    let mut stamp = 0usize;
    for r in 0..order {
        stamp += 1;
        for c in 0..order {
            let x = table[r * order + c] as usize;
            if seen[x] == stamp {
                return Err(format!("row {r} repeats element {x}"));
            }
            seen[x] = stamp;
        }
    }
    for c in 0..order {
        stamp += 1;
        for r in 0..order {
            let x = table[r * order + c] as usize;
            if seen[x] == stamp {
                return Err(format!("column {c} repeats element {x}"));
            }
            seen[x] = stamp;
        }
    }
    Ok(())
}

fn check_associative(order: usize, table: &[u32]) -> std::result::Result<(), String> {
    let m = |a: usize, b: usize| table[a * order + b] as usize;
    let check = |a: usize, b: usize, c: usize| {
        if m(m(a, b), c) != m(a, m(b, c)) {
            Err(format!("associativity fails on ({a}, {b}, {c})"))
        } else {
            Ok(())
        }
    };
    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
        for _ in 0..10 * order * order {
            check(rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order))?;
        }
    }
    Ok(())
}
