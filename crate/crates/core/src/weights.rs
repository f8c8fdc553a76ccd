//! Weight sets `A ⊆ [1, m − 1]`.

use std::fmt;

use crate::arith::{gcd, is_prime, mod_pow};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Full,
    /// ν-th power residues of `U(p)`.
    UnitPowers { p: u64, nu: u32 },
    /// `U(p) \ U(p)²`.
    UnitNonSquares { p: u64 },
    /// `[1, dᵏn − 1] \ {d^{k−i}·n : i ∈ [1, k]}`.
    Punctured { d: u64, k: u32, n: u64 },
    Explicit,
}

/// A validated, sorted, duplicate-free set of weights together with the modulus
/// (group exponent) it was validated against.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSet {
    weights: Vec<u64>,
    modulus: u64,
    kind: WeightKind,
}

impl WeightSet {
    fn checked(mut weights: Vec<u64>, modulus: u64, kind: WeightKind) -> Result<Self> {
        weights.sort_unstable();
        weights.dedup();
        if weights.is_empty() {
            return Err(Error::InvalidWeights("weight set must be nonempty".into()));
        }
        if let Some(&w) = weights.iter().find(|&&w| w == 0 || w >= modulus) {
            return Err(Error::InvalidWeights(format!(
                "weight {w} is outside [1, {}]",
                modulus.saturating_sub(1)
            )));
        }
        Ok(WeightSet { weights, modulus, kind })
    }

    /// The full weight `[1, m − 1]`.
    pub fn full(m: u64) -> Result<Self> {
        if m <= 1 {
            return Err(Error::InvalidWeights(format!(
                "full weight needs modulus at least 2, got {m}"
            )));
        }
        Self::checked((1..m).collect(), m, WeightKind::Full)
    }

    /// The unweighted case `A = {1}` over modulus `m`.
    pub fn unweighted(m: u64) -> Result<Self> {
        Self::explicit(&[1], m)
    }

    pub fn unit_powers(p: u64, nu: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidWeights(format!("{p} is not prime")));
        }
        if nu == 0 {
            return Err(Error::InvalidWeights("power must be positive".into()));
        }
        let ws = (1..p).map(|x| mod_pow(x, u64::from(nu), p)).collect();
        Self::checked(ws, p, WeightKind::UnitPowers { p, nu })
    }

    pub fn unit_non_squares(p: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidWeights(format!("{p} is not an odd prime")));
        }
        let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
        let ws = (1..p).filter(|w| !squares.contains(w)).collect();
        Self::checked(ws, p, WeightKind::UnitNonSquares { p })
    }

    pub fn punctured(d: u64, k: u32, n: u64) -> Result<Self> {
        if d == 0 || k == 0 || n == 0 {
            return Err(Error::InvalidWeights("d, k and n must be positive".into()));
        }
        let dk = d
            .checked_pow(k)
            .and_then(|x| x.checked_mul(n))
            .ok_or_else(|| Error::InvalidWeights("d^k·n overflows".into()))?;
        if dk < 6 {
            return Err(Error::InvalidWeights(format!(
                "hypothesis d^k·n >= 6 fails (d^k·n = {dk})"
            )));
        }
        if gcd(d, n) + 1 > d {
            return Err(Error::InvalidWeights(format!(
                "hypothesis gcd(d, n) <= d - 1 fails (gcd({d}, {n}) = {})",
                gcd(d, n)
            )));
        }
        let removed: Vec<u64> = (1..=k).map(|i| d.pow(k - i) * n).collect();
        let ws = (1..dk).filter(|w| !removed.contains(w)).collect();
        Self::checked(ws, dk, WeightKind::Punctured { d, k, n })
    }

    /// Explicit weights, reduced modulo `m` before validation.
    pub fn explicit(values: &[i64], m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidWeights("modulus must be positive".into()));
        }
        let ws = values
            .iter()
            .map(|&v| i128::from(v).rem_euclid(i128::from(m)) as u64)
            .collect();
        Self::checked(ws, m, WeightKind::Explicit)
    }

    /// Re-checks the weights against a different modulus. The full weight stops
    /// being "full" when the modulus changes, so it becomes explicit.
    pub fn revalidate(&self, m: u64) -> Result<Self> {
        if m == self.modulus {
            return Ok(self.clone());
        }
        let kind = match self.kind {
            WeightKind::Full => WeightKind::Explicit,
            ref other => other.clone(),
        };
        Self::checked(self.weights.clone(), m, kind)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, w: u64) -> bool {
        self.weights.binary_search(&w).is_ok()
    }

    pub fn contains_one(&self) -> bool {
        self.contains(1)
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights == [1]
    }

    pub fn is_subset(&self, other: &WeightSet) -> bool {
        self.weights.iter().all(|&w| other.contains(w))
    }

    /// Round-trippable descriptor, e.g. `full`, `U^2(5)` or `{1,3}`.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            WeightKind::Full => "full".into(),
            WeightKind::UnitPowers { p, nu } => format!("U^{nu}({p})"),
            WeightKind::UnitNonSquares { p } => format!("U-U2({p})"),
            WeightKind::Punctured { d, k, n } => format!("punct({d},{k},{n})"),
            WeightKind::Explicit => self.list(),
        }
    }

    /// Stable key combining the constructor tag and the explicit list.
    pub fn canonical(&self) -> String {
        match self.kind {
            WeightKind::Explicit => self.list(),
            _ => format!("{}={}", self.descriptor(), self.list()),
        }
    }

    fn list(&self) -> String {
        let parts: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}
