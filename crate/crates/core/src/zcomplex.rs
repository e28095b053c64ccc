//! Bounded cochain complexes of finitely generated free abelian groups.
//!
//! Grading convention: `Z[d]` is `Z` placed in cohomological degree `-d`,
//! and differentials raise degree by one, so `d^k` has shape
//! `rank(C^{k+1}) x rank(C^k)`. Shifting follows `C[k]^j = C^{j+k}` with
//! differential `(-1)^k d`.

use std::borrow::Cow;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::intlin::{snf, LinalgError, Matrix};
use crate::scalar::{from_i64, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("differential d^{degree} has shape {actual:?}, expected {expected:?}")]
    Shape {
        degree: i64,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("d^{} * d^{} is nonzero", .0 + 1, .0)]
    NotACochainComplex(i64),
    #[error("chain map component f^{degree} has shape {actual:?}, expected {expected:?}")]
    MapShape {
        degree: i64,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("chain map does not commute with the differentials in degree {0}")]
    NotAChainMap(i64),
    #[error("multiplicity must be nonnegative, got {0}")]
    NegativeMultiplicity(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A bounded cochain complex of free abelian groups of finite rank.
///
/// Degrees of rank zero are never stored, nor are zero differentials of
/// the correct shape. Differentials with inconsistent shapes are kept as
/// given so that [`CochainComplex::validate`] can report them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CochainComplex<T> {
    ranks: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, Matrix<T>>,
}

impl<T: Scalar> Default for CochainComplex<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> CochainComplex<T> {
    pub fn new(ranks: BTreeMap<i64, usize>, differentials: BTreeMap<i64, Matrix<T>>) -> Self {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let rank = |k: i64| ranks.get(&k).copied().unwrap_or(0);
        let differentials = differentials
            .into_iter()
            .filter(|(k, d)| !(d.shape() == (rank(k + 1), rank(*k)) && d.is_zero()))
            .collect();
        CochainComplex {
            ranks,
            differentials,
        }
    }

    pub fn zero() -> Self {
        CochainComplex {
            ranks: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    /// `Z[d]`: a single copy of `Z` in degree `-d`.
    pub fn point(d: i64) -> Self {
        Self::new(BTreeMap::from([(-d, 1)]), BTreeMap::new())
    }

    /// `Z[d+1] --m--> Z[d]`: `Z` in degrees `-(d+1)` and `-d` joined by `m`.
    pub fn elementary(m: T, d: i64) -> Result<Self, ComplexError> {
        if m.is_negative() {
            return Err(ComplexError::NegativeMultiplicity(m.to_string()));
        }
        let ranks = BTreeMap::from([(-d - 1, 1), (-d, 1)]);
        let diff = BTreeMap::from([(-d - 1, Matrix::from_vec(1, 1, vec![m])?)]);
        Ok(Self::new(ranks, diff))
    }

    /// Builds a complex from a list of consecutive differentials starting at
    /// degree `start`; ranks are read off the matrix shapes.
    pub fn from_differentials(start: i64, diffs: Vec<Matrix<T>>) -> Result<Self, ComplexError> {
        let mut ranks = BTreeMap::new();
        let mut map = BTreeMap::new();
        for (i, d) in diffs.into_iter().enumerate() {
            let k = start + i as i64;
            for (deg, r) in [(k, d.cols()), (k + 1, d.rows())] {
                let prev = *ranks.entry(deg).or_insert(r);
                if prev != r {
                    return Err(ComplexError::Shape {
                        degree: k,
                        expected: (ranks[&(k + 1)], ranks[&k]),
                        actual: d.shape(),
                    });
                }
            }
            map.insert(k, d);
        }
        Ok(Self::new(ranks, map))
    }

    pub fn rank(&self, k: i64) -> usize {
        self.ranks.get(&k).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    /// The stored differentials (zero differentials are omitted).
    pub fn stored_differentials(&self) -> &BTreeMap<i64, Matrix<T>> {
        &self.differentials
    }

    /// `d^k`, materializing zero matrices for absent differentials.
    pub fn differential(&self, k: i64) -> Cow<'_, Matrix<T>> {
        match self.differentials.get(&k) {
            Some(d) => Cow::Borrowed(d),
            None => Cow::Owned(Matrix::zeros(self.rank(k + 1), self.rank(k))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Smallest and largest degree of nonzero rank.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.ranks.keys().next()?;
        let hi = *self.ranks.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn check(&self) -> Result<(), ComplexError> {
        for (&k, d) in &self.differentials {
            let expected = (self.rank(k + 1), self.rank(k));
            if d.shape() != expected {
                return Err(ComplexError::Shape {
                    degree: k,
                    expected,
                    actual: d.shape(),
                });
            }
        }
        for (&k, d) in &self.differentials {
            if let Some(next) = self.differentials.get(&(k + 1)) {
                if !(next * d).is_zero() {
                    return Err(ComplexError::NotACochainComplex(k));
                }
            }
        }
        Ok(())
    }

    /// True iff every differential has the right shape and `d∘d = 0`.
    pub fn validate(&self) -> bool {
        self.check().is_ok()
    }

    /// Integral cohomology `H^k = ker d^k / im d^(k-1)` in every degree.
    pub fn homology(&self) -> Result<Homology<T>, ComplexError> {
        self.check()?;
        let mut factors: BTreeMap<i64, (usize, Vec<T>)> = BTreeMap::new();
        for (&k, d) in &self.differentials {
            let f = snf(d);
            factors.insert(k, (f.rank(), f.invariant_factors()));
        }
        let mut out = Homology::default();
        for (&k, &n) in &self.ranks {
            let out_rank = factors.get(&k).map_or(0, |f| f.0);
            let (in_rank, torsion) = match factors.get(&(k - 1)) {
                Some((r, inv)) => (*r, inv.iter().filter(|x| !x.is_one()).cloned().collect()),
                None => (0, Vec::new()),
            };
            let group = AbelianGroup {
                free_rank: n - out_rank - in_rank,
                torsion,
            };
            out.insert(k, group);
        }
        Ok(out)
    }

    /// `C[k]`, with `C[k]^j = C^{j+k}` and differential `(-1)^k d`.
    pub fn shift(&self, k: i64) -> Self {
        let ranks = self.ranks.iter().map(|(&j, &r)| (j - k, r)).collect();
        let odd = k.rem_euclid(2) == 1;
        let differentials = self
            .differentials
            .iter()
            .map(|(&j, d)| (j - k, if odd { d.neg() } else { d.clone() }))
            .collect();
        CochainComplex {
            ranks,
            differentials,
        }
    }

    /// Degreewise block-diagonal sum, with `self` first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut ranks = self.ranks.clone();
        for (&k, &r) in &other.ranks {
            *ranks.entry(k).or_insert(0) += r;
        }
        let keys: std::collections::BTreeSet<i64> = self
            .differentials
            .keys()
            .chain(other.differentials.keys())
            .copied()
            .collect();
        let differentials = keys
            .into_iter()
            .map(|k| {
                let d = Matrix::block_diagonal(&self.differential(k), &other.differential(k));
                (k, d)
            })
            .collect();
        Self::new(ranks, differentials)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(&k, &r)| {
                if k.rem_euclid(2) == 0 {
                    r as i64
                } else {
                    -(r as i64)
                }
            })
            .sum()
    }

    /// Applies the basis change `x ↦ P_k x` in each degree; `bases` maps
    /// `k` to `(P_k, P_k^{-1})`, and missing degrees use the identity.
    pub fn change_basis(&self, bases: &BTreeMap<i64, (Matrix<T>, Matrix<T>)>) -> Self {
        let differentials = self
            .differentials
            .iter()
            .map(|(&k, d)| {
                let mut d = d.clone();
                if let Some((_, inv)) = bases.get(&k) {
                    d = &d * inv;
                }
                if let Some((p, _)) = bases.get(&(k + 1)) {
                    d = p * &d;
                }
                (k, d)
            })
            .collect();
        Self::new(self.ranks.clone(), differentials)
    }
}

/// Hom complex `hom^k(C, D) = ⊕_i Hom(C^i, D^{i+k})` with differential
/// `d_D ∘ φ - (-1)^k φ ∘ d_C`.
///
/// A degree-`k` element is stored as the concatenation, over source degrees
/// `i` in increasing order, of the row-major entries of `φ_i`.
pub fn hom_complex<T: Scalar>(
    c: &CochainComplex<T>,
    d: &CochainComplex<T>,
) -> Result<CochainComplex<T>, ComplexError> {
    c.check()?;
    d.check()?;
    let (Some((clo, chi)), Some((dlo, dhi))) = (c.support(), d.support()) else {
        return Ok(CochainComplex::zero());
    };
    let (klo, khi) = (dlo - chi, dhi - clo);
    // offset of the block Hom(C^i, D^{i+k}) inside hom^k
    let layout = |k: i64| {
        let mut offsets = BTreeMap::new();
        let mut total = 0;
        for (&i, &ci) in c.ranks() {
            let di = d.rank(i + k);
            if di > 0 {
                offsets.insert(i, total);
                total += di * ci;
            }
        }
        (offsets, total)
    };
    let mut ranks = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in klo - 1..=khi {
        let (src_off, src_dim) = layout(k);
        let (dst_off, dst_dim) = layout(k + 1);
        if src_dim > 0 {
            ranks.insert(k, src_dim);
        }
        if src_dim == 0 || dst_dim == 0 {
            continue;
        }
        let sign: T = if k.rem_euclid(2) == 0 {
            T::one()
        } else {
            -T::one()
        };
        let mut m = Matrix::<T>::zeros(dst_dim, src_dim);
        for (&i, &off) in &src_off {
            let (ci, di) = (c.rank(i), d.rank(i + k));
            for r in 0..di {
                for s in 0..ci {
                    let col = off + r * ci + s;
                    // d_D^{i+k} ∘ E_{r,s}: block (i -> i+k+1), entries (t, s) = d_D[t][r]
                    if let Some(&o) = dst_off.get(&i) {
                        let dd = d.differential(i + k);
                        for t in 0..dd.rows() {
                            let v = dd[(t, r)].clone();
                            if !v.is_zero() {
                                m[(o + t * ci + s, col)] = m[(o + t * ci + s, col)].clone() + v;
                            }
                        }
                    }
                    // -(-1)^k E_{r,s} ∘ d_C^{i-1}: block (i-1 -> i+k), entries (r, t) = d_C[s][t]
                    if let Some(&o) = dst_off.get(&(i - 1)) {
                        let dc = c.differential(i - 1);
                        let cprev = c.rank(i - 1);
                        for t in 0..dc.cols() {
                            let v = dc[(s, t)].clone();
                            if !v.is_zero() {
                                let row = o + r * cprev + t;
                                m[(row, col)] = m[(row, col)].clone() - sign.clone() * v;
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(k, m);
    }
    Ok(CochainComplex::new(ranks, diffs))
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/t_i` in canonical
/// form: torsion entries are at least 2 and each divides the next.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

impl<T: Scalar> AbelianGroup<T> {
    /// Canonical form of `Z^free_rank ⊕ ⊕ Z/orders_i`; an order of 0
    /// contributes a free summand and units are dropped.
    pub fn from_cyclic(free_rank: usize, orders: impl IntoIterator<Item = T>) -> Self {
        let orders: Vec<T> = orders.into_iter().map(|x| x.abs()).collect();
        let extra_free = orders.iter().filter(|x| x.is_zero()).count();
        let nonzero: Vec<T> = orders
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect();
        let n = nonzero.len();
        let torsion = snf(&Matrix::diagonal(n, n, &nonzero))
            .invariant_factors()
            .into_iter()
            .filter(|x| !x.is_one())
            .collect();
        AbelianGroup {
            free_rank: free_rank + extra_free,
            torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// Number of torsion invariant factors divisible by `q`.
    pub fn torsion_divisible_by(&self, q: &T) -> usize {
        self.torsion.iter().filter(|t| t.is_multiple_of(q)).count()
    }
}

/// Cohomology of a complex, one [`AbelianGroup`] per nontrivial degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homology<T> {
    groups: BTreeMap<i64, AbelianGroup<T>>,
}

impl<T> Default for Homology<T> {
    fn default() -> Self {
        Homology {
            groups: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> Homology<T> {
    /// Inserts the group in degree `k`, dropping it if trivial.
    pub fn insert(&mut self, k: i64, group: AbelianGroup<T>) {
        if group.is_trivial() {
            self.groups.remove(&k);
        } else {
            self.groups.insert(k, group);
        }
    }

    pub fn from_groups(groups: impl IntoIterator<Item = (i64, AbelianGroup<T>)>) -> Self {
        let mut h = Homology::default();
        for (k, g) in groups {
            let merged = match h.groups.get(&k) {
                Some(prev) => prev.direct_sum(&g),
                None => AbelianGroup::from_cyclic(g.free_rank, g.torsion),
            };
            h.insert(k, merged);
        }
        h
    }

    pub fn get(&self, k: i64) -> Option<&AbelianGroup<T>> {
        self.groups.get(&k)
    }

    pub fn free_rank(&self, k: i64) -> usize {
        self.get(k).map_or(0, |g| g.free_rank)
    }

    pub fn torsion(&self, k: i64) -> &[T] {
        self.get(k).map_or(&[], |g| &g.torsion)
    }

    pub fn groups(&self) -> &BTreeMap<i64, AbelianGroup<T>> {
        &self.groups
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_free_part(&self) -> bool {
        self.groups.values().any(|g| g.free_rank > 0)
    }

    /// Re-indexes so that degree `j` moves to `j + by`.
    pub fn reindexed(&self, by: i64) -> Self {
        Homology {
            groups: self
                .groups
                .iter()
                .map(|(&k, g)| (k + by, g.clone()))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_groups(
            self.groups
                .iter()
                .chain(&other.groups)
                .map(|(&k, g)| (k, g.clone())),
        )
    }

    /// Restriction to degrees in `lo..=hi`.
    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        Homology {
            groups: self
                .groups
                .range(lo..=hi)
                .map(|(&k, g)| (k, g.clone()))
                .collect(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(&k, g)| {
                let r = g.free_rank as i64;
                if k.rem_euclid(2) == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    /// Every torsion invariant factor, in degree order.
    pub fn torsion_factors(&self) -> impl Iterator<Item = &T> {
        self.groups.values().flat_map(|g| g.torsion.iter())
    }
}

/// A degree-0 cochain map `f: source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMap<T> {
    source: CochainComplex<T>,
    target: CochainComplex<T>,
    components: BTreeMap<i64, Matrix<T>>,
}

impl<T: Scalar> CochainMap<T> {
    /// Checks shapes and `f^{k+1} d_source^k = d_target^k f^k`.
    pub fn new(
        source: CochainComplex<T>,
        target: CochainComplex<T>,
        components: BTreeMap<i64, Matrix<T>>,
    ) -> Result<Self, ComplexError> {
        source.check()?;
        target.check()?;
        for (&k, f) in &components {
            let expected = (target.rank(k), source.rank(k));
            if f.shape() != expected {
                return Err(ComplexError::MapShape {
                    degree: k,
                    expected,
                    actual: f.shape(),
                });
            }
        }
        let map = CochainMap {
            source,
            target,
            components,
        };
        let lo = map
            .source
            .ranks()
            .keys()
            .chain(map.target.ranks().keys())
            .min()
            .copied();
        let hi = map
            .source
            .ranks()
            .keys()
            .chain(map.target.ranks().keys())
            .max()
            .copied();
        if let (Some(lo), Some(hi)) = (lo, hi) {
            for k in lo - 1..=hi {
                let lhs = &*map.component(k + 1) * &*map.source.differential(k);
                let rhs = &*map.target.differential(k) * &*map.component(k);
                if lhs != rhs {
                    return Err(ComplexError::NotAChainMap(k));
                }
            }
        }
        Ok(map)
    }

    /// `c · Id` on `complex`.
    pub fn scalar(complex: &CochainComplex<T>, c: T) -> Result<Self, ComplexError> {
        let components = complex
            .ranks()
            .iter()
            .map(|(&k, &r)| (k, Matrix::identity(r).scale(&c)))
            .collect();
        Self::new(complex.clone(), complex.clone(), components)
    }

    pub fn identity(complex: &CochainComplex<T>) -> Result<Self, ComplexError> {
        Self::scalar(complex, T::one())
    }

    pub fn zero(
        source: &CochainComplex<T>,
        target: &CochainComplex<T>,
    ) -> Result<Self, ComplexError> {
        Self::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn source(&self) -> &CochainComplex<T> {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex<T> {
        &self.target
    }

    pub fn component(&self, k: i64) -> Cow<'_, Matrix<T>> {
        match self.components.get(&k) {
            Some(f) => Cow::Borrowed(f),
            None => Cow::Owned(Matrix::zeros(self.target.rank(k), self.source.rank(k))),
        }
    }

    /// Mapping cone: degree `k` is `source^{k+1} ⊕ target^k` with
    /// differential `[[-d_source, 0], [f, d_target]]`.
    pub fn cone(&self) -> CochainComplex<T> {
        let (s, t) = (&self.source, &self.target);
        let degrees: std::collections::BTreeSet<i64> = s
            .ranks()
            .keys()
            .map(|k| k - 1)
            .chain(t.ranks().keys().copied())
            .collect();
        let mut ranks = BTreeMap::new();
        for &k in &degrees {
            ranks.insert(k, s.rank(k + 1) + t.rank(k));
        }
        let mut diffs = BTreeMap::new();
        for &k in &degrees {
            let (srow, scol) = (s.rank(k + 2), s.rank(k + 1));
            let (trow, tcol) = (t.rank(k + 1), t.rank(k));
            let mut d = Matrix::zeros(srow + trow, scol + tcol);
            d.set_block(0, 0, &s.differential(k + 1).neg());
            d.set_block(srow, 0, &self.component(k + 1));
            d.set_block(srow, scol, &t.differential(k));
            diffs.insert(k, d);
        }
        CochainComplex::new(ranks, diffs)
    }
}

/// `Z[d+1] --m--> Z[d]` for a small multiplicity.
pub fn elementary_complex<T: Scalar>(m: i64, d: i64) -> Result<CochainComplex<T>, ComplexError> {
    CochainComplex::elementary(from_i64(m), d)
}
