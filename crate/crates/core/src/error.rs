use thiserror::Error;

use crate::intlin::LinalgError;
use crate::json::FormatError;
use crate::loopsphere::TwistedError;
use crate::primes::PrimeError;
use crate::zcomplex::ComplexError;

/// Any failure raised by the library, grouped by subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl Error {
    /// Stable machine-readable name of the failure class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Linalg(_) => "dimension_mismatch",
            Error::Complex(_) => "invalid_complex",
            Error::Prime(PrimeError::ZeroInLocalization) => "zero_in_localization",
            Error::Prime(PrimeError::DuplicatePrime(_)) => "duplicate_prime",
            Error::Prime(_) => "not_a_prime",
            Error::Twisted(TwistedError::UncertifiableWindow { .. })
            | Error::Twisted(TwistedError::EmptyWindow { .. }) => "uncertifiable_window",
            Error::Twisted(_) => "invalid_twisted_complex",
            Error::Format(_) => "invalid_input",
        }
    }
}
