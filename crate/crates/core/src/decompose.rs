//! Splitting a free cochain complex into elementary summands.
//!
//! Every bounded complex of free abelian groups is isomorphic, not merely
//! quasi-isomorphic, to a direct sum of complexes `Z[d]` and
//! `Z[d+1] --m--> Z[d]`. Degrees are processed in increasing order: the
//! part of `C^k` not already spanned by the saturated image of `d^{k-1}`
//! is mapped by `d^k`, and the Smith form of that map splits it into
//! generators that inject into `C^{k+1}` and a free kernel part.
//!
//! Within each degree the new basis is ordered as
//! `[targets of d^{k-1} | sources of d^k | free]`, and
//! [`Splitting::reassemble`] uses the same layout, so the certificate
//! conjugates the input exactly onto the reassembled complex.

use std::collections::BTreeMap;

use crate::intlin::{snf, Matrix};
use crate::primes::{prime_divisors, PrimeError, PrimeSet};
use crate::scalar::Scalar;
use crate::zcomplex::{CochainComplex, ComplexError};

/// An elementary complex, in the `Z[d]` shift notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand<T> {
    /// `Z[d]`: one generator in degree `-d`.
    Free { d: i64 },
    /// `Z[d+1] --m--> Z[d]` with `m >= 2`; contributes `Z/m` in degree `-d`.
    Torsion { d: i64, m: T },
    /// `Z[d+1] --1--> Z[d]`, which is contractible.
    Acyclic { d: i64 },
}

impl<T: Scalar> Summand<T> {
    /// The complex this summand stands for.
    pub fn complex(&self) -> CochainComplex<T> {
        match self {
            Summand::Free { d } => CochainComplex::point(*d),
            Summand::Torsion { d, m } => {
                CochainComplex::elementary(m.clone(), *d).expect("torsion order is positive")
            }
            Summand::Acyclic { d } => {
                CochainComplex::elementary(T::one(), *d).expect("unit multiplicity")
            }
        }
    }

    /// Lowest cohomological degree occupied by the summand.
    fn base_degree(&self) -> i64 {
        match self {
            Summand::Free { d } => -d,
            Summand::Torsion { d, .. } | Summand::Acyclic { d } => -d - 1,
        }
    }

    fn multiplicity(&self) -> Option<T> {
        match self {
            Summand::Free { .. } => None,
            Summand::Torsion { m, .. } => Some(m.clone()),
            Summand::Acyclic { .. } => Some(T::one()),
        }
    }
}

/// Basis change for one degree: `basis` has the new basis vectors as
/// columns, written in the original coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange<T> {
    pub basis: Matrix<T>,
    pub inverse: Matrix<T>,
}

/// Elementary summands together with the per-degree certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting<T> {
    summands: Vec<Summand<T>>,
    certificate: BTreeMap<i64, BasisChange<T>>,
}

impl<T: Scalar> Splitting<T> {
    pub fn new(summands: Vec<Summand<T>>, certificate: BTreeMap<i64, BasisChange<T>>) -> Self {
        Splitting {
            summands,
            certificate,
        }
    }

    /// A splitting with no certificate, for callers that only want
    /// [`Splitting::reassemble`] or [`Splitting::prime_content`].
    pub fn from_summands(summands: Vec<Summand<T>>) -> Self {
        Self::new(summands, BTreeMap::new())
    }

    pub fn summands(&self) -> &[Summand<T>] {
        &self.summands
    }

    pub fn certificate(&self) -> &BTreeMap<i64, BasisChange<T>> {
        &self.certificate
    }

    /// Summands sorted, for multiset comparison.
    pub fn sorted_summands(&self) -> Vec<Summand<T>> {
        let mut s = self.summands.clone();
        s.sort();
        s
    }

    /// Block-diagonal complex built from the summands, using the basis
    /// layout `[targets | sources | free]` in each degree.
    pub fn reassemble(&self) -> CochainComplex<T> {
        struct Slot<T> {
            incoming: usize,
            sources: Vec<T>,
            free: usize,
        }
        impl<T> Default for Slot<T> {
            fn default() -> Self {
                Slot {
                    incoming: 0,
                    sources: Vec::new(),
                    free: 0,
                }
            }
        }
        let mut slots: BTreeMap<i64, Slot<T>> = BTreeMap::new();
        for s in &self.summands {
            let k = s.base_degree();
            match s.multiplicity() {
                None => slots.entry(k).or_default().free += 1,
                Some(m) => {
                    slots.entry(k).or_default().sources.push(m);
                    slots.entry(k + 1).or_default().incoming += 1;
                }
            }
        }
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (&k, slot) in &slots {
            let n = slot.incoming + slot.sources.len() + slot.free;
            ranks.insert(k, n);
            if slot.sources.is_empty() {
                continue;
            }
            let next = &slots[&(k + 1)];
            let rows = next.incoming + next.sources.len() + next.free;
            let mut d = Matrix::zeros(rows, n);
            for (j, m) in slot.sources.iter().enumerate() {
                d[(j, slot.incoming + j)] = m.clone();
            }
            diffs.insert(k, d);
        }
        CochainComplex::new(ranks, diffs)
    }

    /// Checks the certificate against `c`: each basis change is
    /// invertible over Z and conjugates `c` onto [`Splitting::reassemble`].
    pub fn verify(&self, c: &CochainComplex<T>) -> bool {
        let degrees: Vec<i64> = c.ranks().keys().copied().collect();
        if self.certificate.keys().copied().collect::<Vec<_>>() != degrees {
            return false;
        }
        let mut bases = BTreeMap::new();
        for (&k, b) in &self.certificate {
            let n = c.rank(k);
            if b.basis.shape() != (n, n) || b.inverse.shape() != (n, n) {
                return false;
            }
            if &b.basis * &b.inverse != Matrix::identity(n) {
                return false;
            }
            bases.insert(k, (b.inverse.clone(), b.basis.clone()));
        }
        c.change_basis(&bases) == self.reassemble()
    }

    /// Primes that the summands force to be inverted.
    ///
    /// A free summand contributes `0`; torsion summands contribute the
    /// primes dividing their order; acyclic summands contribute nothing.
    pub fn prime_content(&self) -> Result<PrimeSet, PrimeError> {
        let mut set = PrimeSet::empty();
        for s in &self.summands {
            match s {
                Summand::Free { .. } => set = set.union(&PrimeSet::zero()),
                Summand::Torsion { m, .. } => {
                    set = set.union(&PrimeSet::from_primes(prime_divisors(m)?)?);
                }
                Summand::Acyclic { .. } => {}
            }
        }
        Ok(set)
    }
}

/// Decomposes `c` into elementary summands with an exact certificate.
pub fn elementary_decomposition<T: Scalar>(
    c: &CochainComplex<T>,
) -> Result<Splitting<T>, ComplexError> {
    c.check()?;
    let mut summands = Vec::new();
    let mut certificate = BTreeMap::new();
    let Some((lo, hi)) = c.support() else {
        return Ok(Splitting::new(summands, certificate));
    };
    // (generators already claimed as targets, provisional basis, its inverse)
    let mut carried: Option<(usize, Matrix<T>, Matrix<T>)> = None;
    for k in lo..=hi {
        let n = c.rank(k);
        let (claimed, q, q_inv) = carried
            .take()
            .unwrap_or_else(|| (0, Matrix::identity(n), Matrix::identity(n)));
        if n == 0 {
            continue;
        }
        let rest = q.columns(claimed..n);
        let image = &*c.differential(k) * &rest;
        let f = snf(&image);
        let r = f.rank();

        let mut basis = q.clone();
        basis.set_block(0, claimed, &(&rest * &f.v));
        let mut inverse = q_inv.clone();
        inverse.set_block(claimed, 0, &(&f.v_inv * &q_inv.row_block(claimed..n)));

        for j in 0..r {
            let m = f.s[(j, j)].clone();
            summands.push(if m.is_one() {
                Summand::Acyclic { d: -k - 1 }
            } else {
                Summand::Torsion { d: -k - 1, m }
            });
        }
        for _ in r..n - claimed {
            summands.push(Summand::Free { d: -k });
        }
        certificate.insert(k, BasisChange { basis, inverse });
        if c.rank(k + 1) > 0 {
            carried = Some((r, f.u_inv, f.u));
        }
    }
    Ok(Splitting::new(summands, certificate))
}

/// Primes of the decomposition of `c`; see [`Splitting::prime_content`].
pub fn prime_content<T: Scalar>(c: &CochainComplex<T>) -> Result<PrimeSet, crate::Error> {
    Ok(elementary_decomposition(c)?.prime_content()?)
}

impl<T: Scalar> Summand<T> {
    pub fn is_free(&self) -> bool {
        matches!(self, Summand::Free { .. })
    }

    pub fn torsion_order(&self) -> Option<&T> {
        match self {
            Summand::Torsion { m, .. } => Some(m),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zcomplex::elementary_complex;
    use num_bigint::BigInt;

    type C = CochainComplex<BigInt>;

    #[test]
    fn already_elementary() {
        let c = elementary_complex::<BigInt>(6, 0).unwrap();
        let s = elementary_decomposition(&c).unwrap();
        assert_eq!(
            s.summands(),
            &[Summand::Torsion {
                d: 0,
                m: BigInt::from(6)
            }]
        );
        assert!(s.verify(&c));
    }

    #[test]
    fn diagonal_two_three() {
        // SNF of diag(2, 3) is diag(1, 6): one contractible pair and Z/6
        let c = C::from_differentials(0, vec![Matrix::from_i64_rows(&[&[2, 0], &[0, 3]])]).unwrap();
        let s = elementary_decomposition(&c).unwrap();
        assert_eq!(
            s.summands(),
            &[
                Summand::Acyclic { d: -1 },
                Summand::Torsion {
                    d: -1,
                    m: BigInt::from(6)
                }
            ]
        );
        assert!(s.verify(&c));
    }

    #[test]
    fn single_point() {
        let c = C::point(5);
        let s = elementary_decomposition(&c).unwrap();
        assert_eq!(s.summands(), &[Summand::Free { d: 5 }]);
        assert!(s.verify(&c));
    }

    #[test]
    fn reassemble_examples() {
        assert!(Splitting::<BigInt>::from_summands(vec![])
            .reassemble()
            .is_zero());
        let s = Splitting::from_summands(vec![
            Summand::Torsion {
                d: 0,
                m: BigInt::from(2),
            },
            Summand::Torsion {
                d: 0,
                m: BigInt::from(3),
            },
        ]);
        let h = s.reassemble().homology().unwrap();
        assert_eq!(h.torsion(0), &[BigInt::from(6)]);
    }

    #[test]
    fn prime_content_examples() {
        let t = Splitting::from_summands(vec![Summand::Torsion {
            d: 0,
            m: BigInt::from(6),
        }]);
        assert_eq!(t.prime_content().unwrap(), PrimeSet::new([2, 3]).unwrap());
        let f = Splitting::<BigInt>::from_summands(vec![Summand::Free { d: 0 }]);
        assert_eq!(f.prime_content().unwrap(), PrimeSet::zero());
        let a = Splitting::<BigInt>::from_summands(vec![Summand::Acyclic { d: 0 }]);
        assert_eq!(a.prime_content().unwrap(), PrimeSet::empty());
    }

    #[test]
    fn three_term_complex() {
        // Z --(2,0)^T--> Z^2 --(0,3)--> Z, with a gap-free chain
        let d0 = Matrix::from_i64_rows(&[&[2], &[0]]);
        let d1 = Matrix::from_i64_rows(&[&[0, 3]]);
        let c = C::from_differentials(-1, vec![d0, d1]).unwrap();
        assert!(c.validate());
        let s = elementary_decomposition(&c).unwrap();
        assert!(s.verify(&c));
        assert_eq!(s.reassemble().homology().unwrap(), c.homology().unwrap());
        assert_eq!(s.prime_content().unwrap(), PrimeSet::new([2, 3]).unwrap());
    }

    #[test]
    fn rejects_invalid() {
        let one = Matrix::from_i64_rows(&[&[1]]);
        let c = C::from_differentials(0, vec![one.clone(), one]).unwrap();
        assert!(elementary_decomposition(&c).is_err());
    }
}
