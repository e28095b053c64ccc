//! Finite sets of primes, possibly containing the symbol `0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_prime::nt_funcs::{factorize64, is_prime64};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("{0} exceeds the 64-bit range supported by the primality test")]
    TooLarge(String),
    #[error("prime {0} listed twice")]
    DuplicatePrime(u64),
    #[error(
        "a prime set containing 0 describes the trivial category and cannot be used to localize"
    )]
    ZeroInLocalization,
}

/// Deterministic primality for 64-bit inputs.
pub fn is_prime(q: u64) -> bool {
    is_prime64(q)
}

/// Returns `q` if it is prime, otherwise an error.
pub fn require_prime(q: u64) -> Result<u64, PrimeError> {
    if is_prime(q) {
        Ok(q)
    } else {
        Err(PrimeError::NotPrime(q.to_string()))
    }
}

/// Distinct prime divisors of `m` in increasing order; empty for `0` and `±1`.
pub fn prime_divisors<T: Scalar>(m: &T) -> Result<Vec<u64>, PrimeError> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let v = m
        .abs()
        .to_u64()
        .ok_or_else(|| PrimeError::TooLarge(m.to_string()))?;
    Ok(factorize64(v).into_keys().collect())
}

/// A finite set of primes, possibly empty, possibly containing `0`.
///
/// A set containing `0` trivializes every category it localizes; the
/// remaining primes are retained for display and set operations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeSet {
    contains_zero: bool,
    primes: BTreeSet<u64>,
}

impl PrimeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The set `{0}`.
    pub fn zero() -> Self {
        PrimeSet {
            contains_zero: true,
            primes: BTreeSet::new(),
        }
    }

    /// Accepts primes and `0`; repeated elements collapse.
    pub fn new(elements: impl IntoIterator<Item = u64>) -> Result<Self, PrimeError> {
        let mut set = PrimeSet::empty();
        for q in elements {
            if q == 0 {
                set.contains_zero = true;
            } else {
                set.primes.insert(require_prime(q)?);
            }
        }
        Ok(set)
    }

    /// Primes only, no `0`.
    pub fn from_primes(primes: impl IntoIterator<Item = u64>) -> Result<Self, PrimeError> {
        let set = Self::new(primes)?;
        if set.contains_zero {
            return Err(PrimeError::NotPrime("0".into()));
        }
        Ok(set)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.primes
    }

    pub fn contains(&self, q: u64) -> bool {
        if q == 0 {
            self.contains_zero
        } else {
            self.primes.contains(&q)
        }
    }

    /// No primes and no `0`.
    pub fn is_empty(&self) -> bool {
        !self.contains_zero && self.primes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.primes.len() + usize::from(self.contains_zero)
    }

    /// Union; `0` is absorbing in the sense that it survives any union.
    pub fn union(&self, other: &Self) -> Self {
        PrimeSet {
            contains_zero: self.contains_zero || other.contains_zero,
            primes: self.primes.union(&other.primes).copied().collect(),
        }
    }

    /// Plain set inclusion, treating `0` as an ordinary element.
    pub fn is_subset(&self, other: &Self) -> bool {
        (!self.contains_zero || other.contains_zero) && self.primes.is_subset(&other.primes)
    }

    /// Elements of `self` not in `other`, `0` included.
    pub fn difference(&self, other: &Self) -> Self {
        PrimeSet {
            contains_zero: self.contains_zero && !other.contains_zero,
            primes: self.primes.difference(&other.primes).copied().collect(),
        }
    }

    /// Elements in increasing order, with `0` first when present.
    pub fn elements(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len());
        if self.contains_zero {
            out.push(0);
        }
        out.extend(self.primes.iter().copied());
        out
    }

    /// Removes every prime of `self` from `m`.
    pub fn strip<T: Scalar>(&self, m: &T) -> T {
        let mut m = m.clone();
        for &p in &self.primes {
            let p = T::from_u64(p).expect("scalar cannot represent prime");
            while !m.is_zero() && m.is_multiple_of(&p) {
                m = m / p.clone();
            }
        }
        m
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements().iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Parses comma-separated elements such as `2,3,0`; the empty string is `∅`.
impl FromStr for PrimeSet {
    type Err = PrimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut elements = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let q: u64 = part
                .parse()
                .map_err(|_| PrimeError::NotPrime(part.to_string()))?;
            elements.push(q);
        }
        Self::new(elements)
    }
}
