//! Twisted complexes over `Z[u]`, a model for the wrapped category of
//! `T*S^n` generated by one cotangent fiber.
//!
//! The endomorphism ring of the fiber is modeled by the graded ring `Z[u]`
//! with `deg u = 1 - n`, with no higher products. An object is a sum
//! `⊕ A[s_i]` of shifted copies of the fiber with a strictly
//! lower-triangular differential `delta`, where entry `(row, col)` maps
//! summand `col` to summand `row`. A morphism `A[s] -> A[t]` of degree `p`
//! is a ring element of degree `p + t - s`, so a differential entry from
//! summand `col` to summand `row` has ring degree `1 + s_row - s_col`.
//!
//! Since `u` has negative degree, every degree of a hom complex is a free
//! abelian group of finite rank, and cohomology in a degree window is
//! computed exactly from the three adjacent degrees.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::intlin::{kernel_basis, snf, solve, solve_with, Matrix};
use crate::zcomplex::ComplexError;
use crate::{AbelianGroup, FreeComplex, HomologyProfile, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("sphere dimension must be at least 2, got {0}")]
    InvalidRing(u32),
    #[error("delta entry ({row}, {col}) is out of range for {len} summands")]
    IndexOutOfRange { row: usize, col: usize, len: usize },
    #[error("delta entry ({row}, {col}) is not strictly below the diagonal")]
    NotTriangular { row: usize, col: usize },
    #[error("delta entry ({row}, {col}) contains u^{power}, which has the wrong degree")]
    DegreeMismatch { row: usize, col: usize, power: u32 },
    #[error("delta does not square to zero")]
    MaurerCartan,
    #[error("objects live over different rings (n = {0} and n = {1})")]
    RingMismatch(u32, u32),
    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("window [{}, {}] does not contain the support [{}, {}] needed to certify the test", .window.0, .window.1, .required.0, .required.1)]
    UncertifiableWindow {
        required: (i64, i64),
        window: (i64, i64),
    },
    #[error("degree-{0} cohomology of End(zero section) is not Z")]
    UnexpectedZeroSectionClass(i64),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `Z[u]` with `deg u = 1 - n`, standing in for chains on the based loop
/// space of `S^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SphereRing {
    n: u32,
}

impl SphereRing {
    pub fn new(n: u32) -> Result<Self, TwistedError> {
        if n < 2 {
            return Err(TwistedError::InvalidRing(n));
        }
        Ok(SphereRing { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn deg_u(&self) -> i64 {
        1 - self.n as i64
    }

    /// The power `j` with `deg u^j = degree`, if any.
    pub fn power_for_degree(&self, degree: i64) -> Option<u32> {
        let step = self.n as i64 - 1;
        if degree > 0 || degree % step != 0 {
            return None;
        }
        u32::try_from(-degree / step).ok()
    }
}

/// An element `Σ c_j u^j` of `Z[u]`; only nonzero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<u32, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: BigInt, power: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(power, coeff);
        p
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }

    pub fn u() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (j, c) in terms {
            p.add_term(j, c);
        }
        p
    }

    fn add_term(&mut self, power: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(power).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<u32, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, power: u32) -> BigInt {
        self.terms.get(&power).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&j, c) in &other.terms {
            out.add_term(j, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(&j, x)| (j, x * c)))
    }
}

/// Sparse matrix of ring elements keyed by `(row, col)`.
pub type PolyMatrix = BTreeMap<(usize, usize), Polynomial>;

fn add_entry(m: &mut PolyMatrix, key: (usize, usize), p: Polynomial) {
    if p.is_zero() {
        return;
    }
    let sum = match m.remove(&key) {
        Some(prev) => prev.add(&p),
        None => p,
    };
    if !sum.is_zero() {
        m.insert(key, sum);
    }
}

/// Matrix product `a · b` (apply `b` first).
pub fn compose(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let mut by_row: BTreeMap<usize, Vec<(usize, &Polynomial)>> = BTreeMap::new();
    for (&(y, z), q) in b {
        by_row.entry(y).or_default().push((z, q));
    }
    let mut out = PolyMatrix::new();
    for (&(x, y), p) in a {
        if let Some(row) = by_row.get(&y) {
            for &(z, q) in row {
                add_entry(&mut out, (x, z), p.mul(q));
            }
        }
    }
    out
}

/// A twisted complex `(⊕ A[s_i], delta)` over [`SphereRing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    ring: SphereRing,
    shifts: Vec<i64>,
    delta: PolyMatrix,
}

impl TwistedComplex {
    /// Raw constructor; zero entries are dropped, nothing else is checked.
    pub fn new(ring: SphereRing, shifts: Vec<i64>, delta: PolyMatrix) -> Self {
        let delta = delta.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        TwistedComplex {
            ring,
            shifts,
            delta,
        }
    }

    pub fn empty(ring: SphereRing) -> Self {
        Self::new(ring, Vec::new(), PolyMatrix::new())
    }

    /// The cotangent fiber `A[0]`.
    pub fn fiber(ring: SphereRing) -> Self {
        Self::new(ring, vec![0], PolyMatrix::new())
    }

    /// The zero section, `A[n] --u--> A[0]`.
    pub fn zero_section(ring: SphereRing) -> Self {
        let delta = PolyMatrix::from([((1, 0), Polynomial::u())]);
        Self::new(ring, vec![ring.n() as i64, 0], delta)
    }

    /// `C ⊗ A`: one summand `A[-k]` per generator of `C^k`, in increasing
    /// degree, with the integer differential as constant entries.
    pub fn from_zcomplex(c: &FreeComplex, ring: SphereRing) -> Result<Self, TwistedError> {
        c.check()?;
        let mut offsets = BTreeMap::new();
        let mut shifts = Vec::with_capacity(c.total_rank());
        for (&k, &r) in c.ranks() {
            offsets.insert(k, shifts.len());
            shifts.extend(std::iter::repeat_n(-k, r));
        }
        let mut delta = PolyMatrix::new();
        for (&k, d) in c.stored_differentials() {
            let (src, dst) = (offsets[&k], offsets[&(k + 1)]);
            for r in 0..d.rows() {
                for col in 0..d.cols() {
                    let v = &d[(r, col)];
                    if !v.is_zero() {
                        delta.insert((dst + r, src + col), Polynomial::constant(v.clone()));
                    }
                }
            }
        }
        Ok(Self::new(ring, shifts, delta))
    }

    pub fn ring(&self) -> SphereRing {
        self.ring
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn delta(&self) -> &PolyMatrix {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn check(&self) -> Result<(), TwistedError> {
        let len = self.len();
        for (&(row, col), p) in &self.delta {
            if row >= len || col >= len {
                return Err(TwistedError::IndexOutOfRange { row, col, len });
            }
            if row <= col {
                return Err(TwistedError::NotTriangular { row, col });
            }
            let wanted = 1 + self.shifts[row] - self.shifts[col];
            for &power in p.terms().keys() {
                if power as i64 * self.ring.deg_u() != wanted {
                    return Err(TwistedError::DegreeMismatch { row, col, power });
                }
            }
        }
        if !compose(&self.delta, &self.delta).is_empty() {
            return Err(TwistedError::MaurerCartan);
        }
        Ok(())
    }

    /// Triangularity, degree purity and `delta² = 0`.
    pub fn validate(&self) -> bool {
        self.check().is_ok()
    }
}

/// The hom complex between two twisted complexes, one degree at a time.
///
/// A basis element of degree `p` is `u^e` placed at `(j, i)`, mapping source
/// summand `i` to target summand `j`; it exists when
/// `e · deg u = p + t_j - s_i`. Basis elements are ordered by `(j, i)`.
/// The differential is `Dφ = δ_target · φ - (-1)^p φ · δ_source`.
#[derive(Clone, Copy, Debug)]
pub struct HomComplex<'a> {
    source: &'a TwistedComplex,
    target: &'a TwistedComplex,
}

impl<'a> HomComplex<'a> {
    pub fn new(
        source: &'a TwistedComplex,
        target: &'a TwistedComplex,
    ) -> Result<Self, TwistedError> {
        if source.ring != target.ring {
            return Err(TwistedError::RingMismatch(source.ring.n, target.ring.n));
        }
        source.check()?;
        target.check()?;
        Ok(HomComplex { source, target })
    }

    fn ring(&self) -> SphereRing {
        self.source.ring
    }

    /// Basis of degree `p` as `(target j, source i, power)`.
    pub fn basis(&self, p: i64) -> Vec<(usize, usize, u32)> {
        let ring = self.ring();
        let mut out = Vec::new();
        for (j, &t) in self.target.shifts.iter().enumerate() {
            for (i, &s) in self.source.shifts.iter().enumerate() {
                if let Some(e) = ring.power_for_degree(p + t - s) {
                    out.push((j, i, e));
                }
            }
        }
        out
    }

    pub fn rank(&self, p: i64) -> usize {
        self.basis(p).len()
    }

    /// Coordinates in the degree-`p` basis as a morphism.
    pub fn to_morphism(&self, p: i64, coords: &[BigInt]) -> PolyMatrix {
        let mut m = PolyMatrix::new();
        for (&(j, i, e), c) in self.basis(p).iter().zip(coords) {
            add_entry(&mut m, (j, i), Polynomial::monomial(c.clone(), e));
        }
        m
    }

    /// Coordinates of a degree-`p` morphism in the basis.
    pub fn coordinates(&self, p: i64, m: &PolyMatrix) -> Vec<BigInt> {
        let basis = self.basis(p);
        let index: BTreeMap<(usize, usize), (usize, u32)> = basis
            .iter()
            .enumerate()
            .map(|(idx, &(j, i, e))| ((j, i), (idx, e)))
            .collect();
        let mut out = vec![BigInt::zero(); basis.len()];
        for (key, poly) in m {
            let &(idx, e) = index
                .get(key)
                .expect("morphism entry outside the degree-p basis");
            debug_assert!(
                poly.terms().keys().all(|&j| j == e),
                "impure morphism entry"
            );
            out[idx] = poly.coefficient(e);
        }
        out
    }

    pub fn apply_differential(&self, p: i64, phi: &PolyMatrix) -> PolyMatrix {
        let mut out = compose(&self.target.delta, phi);
        let tail = compose(phi, &self.source.delta);
        let sign = if p.rem_euclid(2) == 0 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        for (key, poly) in tail {
            add_entry(&mut out, key, poly.scale(&sign));
        }
        out
    }

    /// Matrix of `D: hom^p -> hom^{p+1}`.
    pub fn differential(&self, p: i64) -> IntMatrix {
        let src = self.basis(p);
        let dst_rank = self.rank(p + 1);
        let mut m = Matrix::zeros(dst_rank, src.len());
        for (col, &(j, i, e)) in src.iter().enumerate() {
            let phi = PolyMatrix::from([((j, i), Polynomial::monomial(BigInt::one(), e))]);
            let image = self.apply_differential(p, &phi);
            for (row, v) in self.coordinates(p + 1, &image).into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        m
    }

    /// The integer complex formed by degrees `lo..=hi`.
    pub fn truncation(&self, lo: i64, hi: i64) -> FreeComplex {
        let ranks = (lo..=hi).map(|p| (p, self.rank(p))).collect();
        let diffs = (lo..hi).map(|p| (p, self.differential(p))).collect();
        FreeComplex::new(ranks, diffs)
    }

    /// Exact cohomology in degrees `lo..=hi`.
    pub fn cohomology(&self, lo: i64, hi: i64) -> Result<WindowProfile, TwistedError> {
        if lo > hi {
            return Err(TwistedError::EmptyWindow { lo, hi });
        }
        let h = self.truncation(lo - 1, hi + 1).homology()?;
        Ok(WindowProfile {
            window: (lo, hi),
            homology: h.restricted(lo, hi),
        })
    }
}

/// Cohomology of a hom complex restricted to a degree window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowProfile {
    pub window: (i64, i64),
    pub homology: HomologyProfile,
}

impl WindowProfile {
    pub fn group(&self, k: i64) -> Option<&AbelianGroup> {
        self.homology.get(k)
    }
}

/// Cohomology of `hom(t1, t2)` in `window`, exact in every degree of it.
pub fn hom_cohomology(
    t1: &TwistedComplex,
    t2: &TwistedComplex,
    window: (i64, i64),
) -> Result<WindowProfile, TwistedError> {
    HomComplex::new(t1, t2)?.cohomology(window.0, window.1)
}

/// Verdict of [`x_action_test`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XAction {
    /// The degree-`n` class of the zero section acts by zero.
    Pass,
    /// A class in degree `degree` has nonzero image in `degree + n`.
    Fail { degree: i64 },
}

/// A cocycle generating `H^n(End(zero section)) ≅ Z`, normalized so that
/// its `u^0` coefficient from `A[n]` to `A[0]` is positive.
pub fn zero_section_class(ring: SphereRing) -> Result<PolyMatrix, TwistedError> {
    let s = TwistedComplex::zero_section(ring);
    let end = HomComplex::new(&s, &s)?;
    let n = ring.n() as i64;
    let cocycles = kernel_basis(&end.differential(n));
    let boundaries = end.differential(n - 1);
    let mut img = Matrix::zeros(cocycles.cols(), boundaries.cols());
    for col in 0..boundaries.cols() {
        let y = solve(&cocycles, &boundaries.column(col))
            .map_err(ComplexError::Linalg)?
            .expect("coboundaries are cocycles");
        for (row, v) in y.into_iter().enumerate() {
            img[(row, col)] = v;
        }
    }
    let f = snf(&img);
    let r = f.rank();
    let torsion = f.invariant_factors().iter().any(|x| !x.is_one());
    if cocycles.cols() != r + 1 || torsion {
        return Err(TwistedError::UnexpectedZeroSectionClass(n));
    }
    let coeffs = f.u_inv.column(r);
    let mut x = cocycles.mul_vec(&coeffs).map_err(ComplexError::Linalg)?;
    let probe = end.to_morphism(n, &x);
    let lead = probe
        .get(&(1, 0))
        .map(|p| p.coefficient(0))
        .unwrap_or_default();
    if lead.is_negative() {
        x.iter_mut().for_each(|v| *v = -v.clone());
    }
    Ok(end.to_morphism(n, &x))
}

/// Degrees outside which `H^*(hom(zero section, t))` vanishes.
///
/// `hom(zero section, A[t])` has cohomology `Z` in degree `n - t` alone, and
/// `t` is an iterated extension of its summands, so the cohomology lives in
/// `[min(n - t_j), max(n - t_j)]`. `None` for the empty object.
pub fn certified_window(t: &TwistedComplex) -> Option<(i64, i64)> {
    let n = t.ring.n() as i64;
    let lo = t.shifts.iter().map(|s| n - s).min()?;
    let hi = t.shifts.iter().map(|s| n - s).max()?;
    Some((lo, hi))
}

/// Tests whether the degree-`n` class `x` of the zero section acts by zero
/// on `H^*(hom(zero section, t))`.
///
/// Objects of the form `C ⊗ A` always pass, so `Fail` shows that `t` is not
/// quasi-isomorphic to such an object. The window must contain
/// [`certified_window`] so that every nonzero class is inspected.
pub fn x_action_test(t: &TwistedComplex, window: (i64, i64)) -> Result<XAction, TwistedError> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(TwistedError::EmptyWindow { lo, hi });
    }
    t.check()?;
    let Some(required) = certified_window(t) else {
        return Ok(XAction::Pass);
    };
    if required.0 < lo || required.1 > hi {
        return Err(TwistedError::UncertifiableWindow { required, window });
    }
    let ring = t.ring;
    let n = ring.n() as i64;
    let s = TwistedComplex::zero_section(ring);
    let x = zero_section_class(ring)?;
    let m = HomComplex::new(&s, t)?;
    for k in lo..=hi - n {
        let cocycles = kernel_basis(&m.differential(k));
        if cocycles.cols() == 0 {
            continue;
        }
        let boundaries = m.differential(k + n - 1);
        let f = snf(&boundaries);
        for col in 0..cocycles.cols() {
            let phi = m.to_morphism(k, &cocycles.column(col));
            let image = m.coordinates(k + n, &compose(&phi, &x));
            if solve_with(&f, boundaries.cols(), &image).is_none() {
                return Ok(XAction::Fail { degree: k });
            }
        }
    }
    Ok(XAction::Pass)
}
