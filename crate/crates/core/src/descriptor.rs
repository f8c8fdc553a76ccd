//! Text forms for groups, weight sets, elements and sequences.
//!
//! Group grammar: `C<n>`, `A[n1,n2,...]`, `M(n,k,l,s)`, `P(desc,desc)`, and the
//! aliases `D<m>`, `Q8`, `S3`. Weight grammar: `full`, `{a,b,c}`, `U^<v>(p)`,
//! `U-U2(p)`, `punct(d,k,n)`. Elements are residues (`3`) in cyclic groups,
//! tuples (`(1|0)`) in abelian and product groups, and words in `x`, `y`
//! (`xy^3`) in metacyclic groups. Sequences are comma separated elements.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Element, Group, MetacyclicParams, Structure};
use crate::sequence::OrderedSequence;
use crate::weights::{WeightKind, WeightSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Cyclic(u32),
    Abelian(Vec<u32>),
    Metacyclic(MetacyclicParams),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    Dihedral(u32),
    Quaternion,
    Symmetric3,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(n) => write!(f, "C{n}"),
            GroupDescriptor::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(u32::to_string).collect();
                write!(f, "A[{}]", parts.join(","))
            }
            GroupDescriptor::Metacyclic(p) => write!(f, "{p}"),
            GroupDescriptor::Product(h, k) => write!(f, "P({h},{k})"),
            GroupDescriptor::Dihedral(m) => write!(f, "D{m}"),
            GroupDescriptor::Quaternion => f.write_str("Q8"),
            GroupDescriptor::Symmetric3 => f.write_str("S3"),
        }
    }
}

impl std::str::FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let d = c.group_descriptor()?;
        c.finish()?;
        Ok(d)
    }
}

/// Parses and builds a group.
pub fn parse_group(text: &str) -> Result<Group> {
    Group::build(&text.parse()?)
}

/// Parses a weight descriptor against the exponent `modulus` of the target group.
/// The canonical form `tag={a,b,..}` is accepted when the list matches the tag.
pub fn parse_weights(text: &str, modulus: u64) -> Result<WeightSet> {
    let mut c = Cursor::new(text);
    let w = c.weights(modulus)?;
    c.skip_ws();
    if !matches!(w.kind(), WeightKind::Explicit) && c.eat('=') {
        let at = c.pos;
        let listed = c.weights(modulus)?;
        if listed.weights() != w.weights() {
            return Err(Error::parse(at, format!("the members of {}", w.descriptor()), listed.descriptor()));
        }
    }
    c.finish()?;
    Ok(w)
}

pub fn parse_element(text: &str, group: &Group) -> Result<Element> {
    let mut c = Cursor::new(text);
    let e = c.element(group)?;
    c.finish()?;
    Ok(e)
}

/// Parses a comma separated sequence; the empty string is the empty sequence.
pub fn parse_sequence(text: &str, group: &Arc<Group>) -> Result<OrderedSequence> {
    let mut c = Cursor::new(text);
    let mut elems = Vec::new();
    c.skip_ws();
    if !c.at_end() {
        loop {
            elems.push(c.element(group)?);
            c.skip_ws();
            if c.eat(',') {
                continue;
            }
            break;
        }
    }
    c.finish()?;
    OrderedSequence::new(Arc::clone(group), elems)
}

pub fn format_element(group: &Group, e: Element) -> String {
    match group.structure() {
        Structure::Cyclic(_) => e.0.to_string(),
        Structure::Abelian(factors) => {
            let mut digits = vec![0u32; factors.len()];
            let mut i = e.0;
            for (slot, &f) in digits.iter_mut().zip(factors).rev() {
                *slot = i % f;
                i /= f;
            }
            let parts: Vec<String> = digits.iter().map(u32::to_string).collect();
            format!("({})", parts.join("|"))
        }
        Structure::Metacyclic(p) => {
            let (a, b) = p.normal_form(e);
            let mut out = String::new();
            let mut factor = |sym: char, exp: u32| match exp {
                0 => {}
                1 => out.push(sym),
                _ => out.push_str(&format!("{sym}^{exp}")),
            };
            factor('x', a);
            factor('y', b);
            if out.is_empty() {
                out.push('1');
            }
            out
        }
        Structure::Product(h, k) => {
            let kn = k.order() as u32;
            format!(
                "({}|{})",
                format_element(h, Element(e.0 / kn)),
                format_element(k, Element(e.0 % kn))
            )
        }
    }
}

pub fn format_sequence(seq: &OrderedSequence) -> String {
    let parts: Vec<String> = seq
        .elements()
        .iter()
        .map(|&e| format_element(seq.group(), e))
        .collect();
    parts.join(",")
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn err<T>(&mut self, expected: &str) -> Result<T> {
        let found = self.found();
        Err(Error::parse(self.pos, expected, found))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("'{c}'"))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let want: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&want) {
            self.pos += want.len();
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("end of input")
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.chars.get(self.pos) == Some(&'-');
        if neg {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return self.err("an integer");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<i64>().map_err(|_| Error::parse(start, "an integer that fits in 64 bits", text))
    }

    fn positive(&mut self) -> Result<u32> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let v = self.integer()?;
        if v <= 0 || v > i64::from(u32::MAX) {
            return Err(Error::parse(start, "a positive integer", v.to_string()));
        }
        Ok(v as u32)
    }

    fn int_list(&mut self, close: char) -> Result<Vec<i64>> {
        let mut out = vec![self.integer()?];
        while self.eat(',') {
            out.push(self.integer()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn positive_args<const N: usize>(&mut self) -> Result<[u32; N]> {
        self.expect('(')?;
        let mut out = [0u32; N];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            *slot = self.positive()?;
        }
        self.expect(')')?;
        Ok(out)
    }

    fn group_descriptor(&mut self) -> Result<GroupDescriptor> {
        match self.peek() {
            Some('C') => {
                self.pos += 1;
                Ok(GroupDescriptor::Cyclic(self.positive()?))
            }
            Some('D') => {
                self.pos += 1;
                Ok(GroupDescriptor::Dihedral(self.positive()?))
            }
            Some('Q') => {
                if self.eat_str("Q8") {
                    Ok(GroupDescriptor::Quaternion)
                } else {
                    self.err("Q8")
                }
            }
            Some('S') => {
                if self.eat_str("S3") {
                    Ok(GroupDescriptor::Symmetric3)
                } else {
                    self.err("S3")
                }
            }
            Some('A') => {
                self.pos += 1;
                self.expect('[')?;
                let mut fs = vec![self.positive()?];
                while self.eat(',') {
                    fs.push(self.positive()?);
                }
                self.expect(']')?;
                Ok(GroupDescriptor::Abelian(fs))
            }
            Some('M') => {
                self.pos += 1;
                let [n, k, l, s] = self.positive_args::<4>()?;
                Ok(GroupDescriptor::Metacyclic(MetacyclicParams { n, k, l, s }))
            }
            Some('P') => {
                self.pos += 1;
                self.expect('(')?;
                let h = self.group_descriptor()?;
                self.expect(',')?;
                let k = self.group_descriptor()?;
                self.expect(')')?;
                Ok(GroupDescriptor::Product(Box::new(h), Box::new(k)))
            }
            _ => self.err("a group descriptor (C, A, M, P, D, Q8 or S3)"),
        }
    }

    fn weights(&mut self, modulus: u64) -> Result<WeightSet> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let at = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::parse(start, "a valid weight set", other.to_string()),
        };
        if self.eat_str("full") {
            return WeightSet::full(modulus).map_err(at);
        }
        if self.eat_str("punct") {
            let [d, k, n] = self.positive_args::<3>()?;
            return WeightSet::punctured(u64::from(d), k, u64::from(n))
                .and_then(|w| w.revalidate(modulus))
                .map_err(at);
        }
        if self.eat_str("U-U2") {
            let [p] = self.positive_args::<1>()?;
            return WeightSet::unit_non_squares(u64::from(p))
                .and_then(|w| w.revalidate(modulus))
                .map_err(at);
        }
        if self.eat_str("U^") {
            let nu = self.positive()?;
            let [p] = self.positive_args::<1>()?;
            return WeightSet::unit_powers(u64::from(p), nu)
                .and_then(|w| w.revalidate(modulus))
                .map_err(at);
        }
        if self.eat('{') {
            let values = self.int_list('}')?;
            return WeightSet::explicit(&values, modulus).map_err(at);
        }
        self.err("a weight set (full, {..}, U^v(p), U-U2(p) or punct(d,k,n))")
    }

    fn element(&mut self, group: &Group) -> Result<Element> {
        match group.structure() {
            Structure::Cyclic(n) => {
                let v = self.integer()?;
                Ok(Element(v.rem_euclid(i64::from(*n)) as u32))
            }
            Structure::Abelian(factors) => {
                let start = self.pos;
                self.expect('(')?;
                let mut idx = 0u32;
                for (i, &f) in factors.iter().enumerate() {
                    if i > 0 {
                        self.expect('|')?;
                    }
                    let v = self.integer()?;
                    idx = idx * f + v.rem_euclid(i64::from(f)) as u32;
                }
                if self.peek() == Some('|') {
                    return Err(Error::parse(
                        start,
                        format!("a tuple with {} components", factors.len()),
                        "extra component",
                    ));
                }
                self.expect(')')?;
                Ok(Element(idx))
            }
            Structure::Metacyclic(p) => self.metacyclic_word(group, p),
            Structure::Product(h, k) => {
                self.expect('(')?;
                let a = self.element(h)?;
                self.expect('|')?;
                let b = self.element(k)?;
                self.expect(')')?;
                Ok(Element(a.0 * k.order() as u32 + b.0))
            }
        }
    }

    fn metacyclic_word(&mut self, group: &Group, p: &MetacyclicParams) -> Result<Element> {
        if self.eat('1') || self.eat('e') {
            return Ok(Element::IDENTITY);
        }
        let x = if p.k > 1 { p.index_of(1, 0) } else { p.index_of(0, p.l % p.n) };
        let y = p.index_of(0, 1 % p.n);
        let mut acc = Element::IDENTITY;
        let mut any = false;
        loop {
            let gen = match self.peek() {
                Some('x') => x,
                Some('y') => y,
                Some('*') if any => {
                    self.pos += 1;
                    continue;
                }
                _ if any => break,
                _ => return self.err("a word in x and y, or 1"),
            };
            self.pos += 1;
            let exp = if self.eat('^') { self.integer()? } else { 1 };
            acc = group.mul(acc, group.pow(gen, exp));
            any = true;
        }
        Ok(acc)
    }
}
