//! Elliptic units generating ray class fields of imaginary quadratic fields.
//!
//! The crate evaluates quotients of Siegel functions at CM points, enumerates
//! their Galois conjugates through explicit Shimura reciprocity and recovers
//! exact minimal polynomials over the base field and over `Q`.
//!
//! Everything here is `no_std` with `alloc`; IO and the command line live in
//! the companion `rayclass` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod bigfloat;
pub mod conjugates;
pub mod exec;
pub mod pipeline;
pub mod polyrecon;
pub mod quadfield;
pub mod rayclass;
pub mod reciprocity;
pub mod siegel;

pub use bigfloat::{BigComplex, BigFloat};
pub use conjugates::{ConjugateGrid, StartArgs};
pub use polyrecon::{AlgebraicPoly, HeightReport};
pub use quadfield::{Field, FieldElement, Ideal, QuadForm};
pub use rayclass::{GaloisElement, Modulus, RayData};
pub use reciprocity::{ResidueMatrix, SL2Word, WClassMatrix};

/// Failures surfaced by the pipeline. Every variant maps to a distinct
/// user-facing condition.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("the fields Q(sqrt(-1)) and Q(sqrt(-3)) are excluded")]
    ExcludedField,
    #[error("{0} does not define an imaginary quadratic field")]
    NotFundamental(i64),
    #[error("the zero ideal is not a valid modulus")]
    ZeroIdeal,
    #[error("the modulus must be a proper ideal")]
    UnitIdeal,
    #[error("ideal is not principal")]
    NotPrincipal,
    #[error("no lift with the required determinant exists")]
    NoAdmissibleLift,
    #[error("determinant {det} is not invertible modulo {level}")]
    NonInvertibleDeterminant { det: i64, level: i64 },
    #[error("phi vanishes at integral arguments")]
    LatticeArgument,
    #[error("requested precision cannot be reached for this argument")]
    PrecisionTooLow,
    #[error("no admissible class found")]
    NoClassFound,
    #[error("search for auxiliary ideals exhausted")]
    SearchExhausted,
    #[error("zeta_{0} does not lie in the ray class field")]
    RootNotInField(i64),
    #[error("coefficient not recognised in O_K (residual 2^{residual_log2:.1})")]
    RecognitionFailure { residual_log2: f64 },
    #[error("the ray class field is generated by roots of unity over the Hilbert class field")]
    Degenerate,
    #[error("invalid input: {0}")]
    Invalid(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
