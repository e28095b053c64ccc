//! Localization away from primes, field coefficients, and the split-closure
//! classification of a collection of disk complexes.
//!
//! Localized homology is computed by transforming integral invariant
//! factors; no matrices over `Z[1/P]` are ever formed. Over a hereditary
//! ring, bounded free complexes are formal, so two complexes are
//! quasi-isomorphic exactly when their homology agrees.

use std::collections::BTreeMap;

use crate::decompose::elementary_decomposition;
use crate::error::Error;
use crate::intlin::rank_mod;
use crate::primes::{require_prime, PrimeError, PrimeSet};
use crate::scalar::Scalar;
use crate::zcomplex::{AbelianGroup, CochainComplex, Homology};

/// The category left after carving disks out of a domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CategoryClass {
    /// Nothing was inverted.
    Full,
    /// Localized away from a nonempty set of primes without `0`.
    Localized(PrimeSet),
    /// Every object is zero.
    Trivial,
}

impl CategoryClass {
    /// `Full` for `∅`, `Trivial` when `0 ∈ P`, otherwise `Localized(P)`.
    pub fn from_primes(p: PrimeSet) -> Self {
        if p.contains_zero() {
            CategoryClass::Trivial
        } else if p.is_empty() {
            CategoryClass::Full
        } else {
            CategoryClass::Localized(p)
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CategoryClass::Full => "full",
            CategoryClass::Localized(_) => "localized",
            CategoryClass::Trivial => "trivial",
        }
    }

    /// The inverted primes; empty for `Full` and `Trivial`.
    pub fn primes(&self) -> Vec<u64> {
        match self {
            CategoryClass::Localized(p) => p.primes().iter().copied().collect(),
            _ => Vec::new(),
        }
    }
}

/// Integral homology with every prime of `p` inverted.
pub fn localized_homology<T: Scalar>(
    c: &CochainComplex<T>,
    p: &PrimeSet,
) -> Result<Homology<T>, Error> {
    if p.contains_zero() {
        return Err(PrimeError::ZeroInLocalization.into());
    }
    let h = c.homology()?;
    Ok(localize_profile(&h, p))
}

/// Strips the primes of `p` from each invariant factor of `h`.
pub fn localize_profile<T: Scalar>(h: &Homology<T>, p: &PrimeSet) -> Homology<T> {
    let mut out = Homology::default();
    for (&k, g) in h.groups() {
        let torsion: Vec<T> = g
            .torsion
            .iter()
            .map(|t| p.strip(t))
            .filter(|t| !t.is_one())
            .collect();
        out.insert(
            k,
            AbelianGroup {
                free_rank: g.free_rank,
                torsion,
            },
        );
    }
    out
}

/// Ranks of `H^k(C ⊗ F_q)`, nonzero degrees only.
pub fn field_homology<T: Scalar>(
    c: &CochainComplex<T>,
    q: u64,
) -> Result<BTreeMap<i64, usize>, Error> {
    require_prime(q)?;
    c.check()?;
    let ranks: BTreeMap<i64, usize> = c
        .stored_differentials()
        .iter()
        .map(|(&k, d)| (k, rank_mod(d, q)))
        .collect();
    let mut out = BTreeMap::new();
    for (&k, &n) in c.ranks() {
        let r = n - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k - 1)).copied().unwrap_or(0);
        if r > 0 {
            out.insert(k, r);
        }
    }
    Ok(out)
}

/// Quasi-isomorphism over `Z[1/P]`, decided by comparing localized homology.
pub fn quasi_iso<T: Scalar>(
    c: &CochainComplex<T>,
    d: &CochainComplex<T>,
    p: &PrimeSet,
) -> Result<bool, Error> {
    Ok(localized_homology(c, p)? == localized_homology(d, p)?)
}

/// Classifies the localization of the full category by the split-closure
/// of `disks`.
///
/// Each disk is decomposed into elementary summands: a free summand
/// split-generates everything, so the result is `Trivial`; otherwise the
/// primes dividing the torsion orders are inverted. The answer depends only
/// on the quasi-isomorphism classes of the disks and is unchanged by shifts
/// and direct sums.
pub fn classify_disks<T: Scalar>(disks: &[CochainComplex<T>]) -> Result<CategoryClass, Error> {
    let mut merged = PrimeSet::empty();
    for disk in disks {
        let content = elementary_decomposition(disk)?.prime_content()?;
        debug_assert!(disk.euler_characteristic() == 0 || content.contains_zero());
        merged = merged.union(&content);
    }
    Ok(CategoryClass::from_primes(merged))
}

/// Whether the category is nonzero with coefficients in `F_q`.
pub fn category_nontrivial_over(class: &CategoryClass, q: u64) -> Result<bool, Error> {
    require_prime(q)?;
    Ok(match class {
        CategoryClass::Full => true,
        CategoryClass::Localized(p) => !p.contains(q),
        CategoryClass::Trivial => false,
    })
}
