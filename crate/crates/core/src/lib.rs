//! Exact homological algebra for prime-localized Weinstein subdomains.
//!
//! The crate models the algebra that classifies Weinstein subdomains whose
//! wrapped Fukaya categories are localizations away from a set of primes:
//!
//! * [`intlin`]: exact integer matrices, Smith normal form with unimodular
//!   certificates, kernels and integer solving.
//! * [`zcomplex`]: bounded cochain complexes of free abelian groups with
//!   shift, direct sum, cone and integral homology.
//! * [`decompose`]: splitting a complex into elementary two-term and
//!   one-term summands, with an exact basis-change certificate.
//! * [`primes`] and [`localize`]: prime sets, localized and
//!   field-coefficient homology, and split-closure classification.
//! * [`weinstein`]: handle-level bookkeeping of carved disks and the
//!   embeddability lattice.
//! * [`loopsphere`]: twisted complexes over `Z[u]` modeling the cotangent
//!   fiber of `T*S^n`, hom cohomology in a degree window and the
//!   zero-section action test.
//! * [`json`]: the JSON interchange formats used by the command line tool.
//!
//! The linear algebra, complexes, decompositions and localization are
//! generic over the integer scalar (see [`Scalar`]). The aliases below fix
//! the scalar to [`BigInt`], which is what the rest of the crate uses.

pub mod decompose;
pub mod error;
pub mod intlin;
pub mod json;
pub mod localize;
pub mod loopsphere;
pub mod primes;
pub mod scalar;
pub mod weinstein;
pub mod zcomplex;

pub use num_bigint::BigInt;

pub use error::Error;
pub use localize::CategoryClass;
pub use primes::PrimeSet;
pub use scalar::Scalar;

/// Arbitrary-precision integer matrix.
pub type IntMatrix = intlin::Matrix<BigInt>;
/// Smith normal form of an [`IntMatrix`] with its certificates.
pub type SnfResult = intlin::SmithForm<BigInt>;
/// Bounded cochain complex of finitely generated free abelian groups.
pub type FreeComplex = zcomplex::CochainComplex<BigInt>;
/// Degree-0 cochain map between two [`FreeComplex`] values.
pub type ChainMap = zcomplex::CochainMap<BigInt>;
/// Per-degree integral homology in canonical invariant-factor form.
pub type HomologyProfile = zcomplex::Homology<BigInt>;
/// A finitely generated abelian group in canonical form.
pub type AbelianGroup = zcomplex::AbelianGroup<BigInt>;
/// One elementary summand of a [`Decomposition`].
pub type ElementarySummand = decompose::Summand<BigInt>;
/// Elementary decomposition of a [`FreeComplex`] with its certificate.
pub type Decomposition = decompose::Splitting<BigInt>;

pub type Result<T, E = Error> = std::result::Result<T, E>;
