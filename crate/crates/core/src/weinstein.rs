//! Handle-level bookkeeping for Weinstein subdomains.
//!
//! A subdomain is recorded only through the complexes of its carved
//! co-core disks; no Legendrian or contact data is kept. Critical handles
//! carry prime-set decorations, and a handle decorated by `P` carves one
//! `cone(p · Id)` disk per prime of `P` (and the cotangent fiber itself when
//! `0 ∈ P`).

use num_bigint::BigInt;

use crate::error::Error;
use crate::localize::{category_nontrivial_over, classify_disks, CategoryClass};
use crate::primes::{is_prime, PrimeError, PrimeSet};
use crate::zcomplex::{CochainMap, ComplexError};
use crate::FreeComplex;

/// Carved disk complexes inside an ambient domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdomainSpec {
    pub ambient: String,
    pub carved: Vec<FreeComplex>,
}

impl SubdomainSpec {
    pub fn new(ambient: impl Into<String>, carved: Vec<FreeComplex>) -> Result<Self, ComplexError> {
        for c in &carved {
            c.check()?;
        }
        Ok(SubdomainSpec {
            ambient: ambient.into(),
            carved,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalHandle {
    pub label: String,
    /// `∅` for a standard handle.
    pub decoration: PrimeSet,
}

/// A subcritical piece with decorated critical handles attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandlePresentation {
    pub subcritical: String,
    pub critical_handles: Vec<CriticalHandle>,
}

impl HandlePresentation {
    /// `count` standard handles labelled `h1, h2, ...`.
    pub fn standard(subcritical: impl Into<String>, count: usize) -> Self {
        HandlePresentation {
            subcritical: subcritical.into(),
            critical_handles: (1..=count)
                .map(|i| CriticalHandle {
                    label: format!("h{i}"),
                    decoration: PrimeSet::empty(),
                })
                .collect(),
        }
    }

    /// The carved disks: `p_handle_disks` of every decoration.
    pub fn induced_spec(&self) -> SubdomainSpec {
        let carved = self
            .critical_handles
            .iter()
            .flat_map(|h| p_handle_disks(&h.decoration))
            .collect();
        SubdomainSpec {
            ambient: self.subcritical.clone(),
            carved,
        }
    }
}

/// The shifted Moore-space disk `D_{U_m}[d+3]` as a complex.
///
/// The reduced cochains of the Moore space are `Z[-1] --m--> Z[-2]`; the
/// disk carries them one degree higher, and the shift by `d + 3` lands on
/// `Z[d+1] --m--> Z[d]`. The sign picked up by the shift is absorbed by a
/// change of generator, so the result equals `elementary_complex(m, d)`.
/// For `m = 0` this is the two-term complex with zero differential.
pub fn disk_complex_from_moore(m: i64, d: i64) -> Result<FreeComplex, ComplexError> {
    if m < 0 {
        return Err(ComplexError::NegativeMultiplicity(m.to_string()));
    }
    let moore_cochains = FreeComplex::elementary(BigInt::from(m), -2)?;
    let disk = moore_cochains.shift(-1).shift(d + 3);
    // normalize the sign of the single differential entry
    let k = -d - 1;
    let entry = disk.differential(k)[(0, 0)].clone();
    if entry < BigInt::from(0) {
        return FreeComplex::elementary(-entry, d);
    }
    Ok(disk)
}

/// One disk per element of `p`: `cone(p · Id)` on the fiber for each prime,
/// and the fiber itself when `0 ∈ p`.
pub fn p_handle_disks(p: &PrimeSet) -> Vec<FreeComplex> {
    let fiber = FreeComplex::point(0);
    let mut out = Vec::with_capacity(p.len());
    if p.contains_zero() {
        out.push(fiber.clone());
    }
    for &q in p.primes() {
        let cone = CochainMap::scalar(&fiber, BigInt::from(q))
            .expect("scalar map on a valid complex")
            .cone();
        out.push(cone);
    }
    out
}

/// Decorates every critical handle with `p`, merged by connected sum with
/// any decoration it already had.
pub fn replace_handles(h: &HandlePresentation, p: &PrimeSet) -> HandlePresentation {
    HandlePresentation {
        subcritical: h.subcritical.clone(),
        critical_handles: h
            .critical_handles
            .iter()
            .map(|c| CriticalHandle {
                label: c.label.clone(),
                decoration: connected_sum(&c.decoration, p),
            })
            .collect(),
    }
}

pub fn subdomain_classify(s: &SubdomainSpec) -> Result<CategoryClass, Error> {
    classify_disks(&s.carved)
}

/// `X_P` embeds as a subdomain of `X_Q` iff `Q ⊆ P` or `0 ∈ P`.
pub fn embeddable(p: &PrimeSet, q: &PrimeSet) -> bool {
    q.is_subset(p) || p.contains_zero()
}

/// A prime over which `X_P` is nonzero while `X_Q` vanishes, when no
/// embedding `X_P ⊂ X_Q` exists.
///
/// The smallest prime of `Q \ P` is returned. If `Q \ P` is just `{0}`,
/// `X_Q` vanishes over every field and the smallest prime outside `P` is
/// used instead.
pub fn embedding_witness(p: &PrimeSet, q: &PrimeSet) -> Option<u64> {
    if embeddable(p, q) {
        return None;
    }
    let diff = q.difference(p);
    let witness = match diff.primes().iter().next() {
        Some(&w) => w,
        None => (2..).find(|&w| is_prime(w) && !p.contains(w))?,
    };
    debug_assert!(is_valid_obstruction(p, q, witness));
    Some(witness)
}

/// `w` is prime, `X_P` is nonzero over `F_w` and `X_Q` vanishes over `F_w`.
pub fn is_valid_obstruction(p: &PrimeSet, q: &PrimeSet, w: u64) -> bool {
    let xp = CategoryClass::from_primes(p.clone());
    let xq = CategoryClass::from_primes(q.clone());
    matches!(category_nontrivial_over(&xp, w), Ok(true))
        && matches!(category_nontrivial_over(&xq, w), Ok(false))
}

/// Isotropic connected sum of decorations: union, with `0` absorbing.
pub fn connected_sum(p: &PrimeSet, q: &PrimeSet) -> PrimeSet {
    p.union(q)
}

/// Prefix chain `∅ ⊂ {p_1} ⊂ {p_1, p_2} ⊂ ...`.
pub fn lattice_chain(primes: &[u64]) -> Result<Vec<PrimeSet>, PrimeError> {
    let mut chain = vec![PrimeSet::empty()];
    for &q in primes {
        let last = chain.last().expect("chain is nonempty");
        if last.contains(q) {
            return Err(PrimeError::DuplicatePrime(q));
        }
        let next = last.union(&PrimeSet::from_primes([q])?);
        chain.push(next);
    }
    Ok(chain)
}
