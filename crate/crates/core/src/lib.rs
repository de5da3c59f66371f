//! LDPC convolutional codes obtained from LDPC block codes through graph covers.
//!
//! The crate covers the whole path from a proto-matrix to a simulated bit error
//! rate: sparse GF(2) algebra ([`gf2`]), cover constructions ([`cover`]),
//! Tanner and JFZ unwrapping ([`unwrap`]), the convolutional code object
//! ([`convcode`]), sum-product decoders ([`decode`]), Monte-Carlo simulation
//! ([`sim`]) and structural analysis ([`analysis`]).

pub mod analysis;
pub mod codes;
pub mod convcode;
pub mod cover;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod scalar;
pub mod sim;
pub mod unwrap;

pub use error::{Error, Result};
pub use gf2::{DegreeProfile, PolyMatrix, SparseBinMatrix};

/// Log-likelihood ratio type used by the simulation harness.
pub type Llr = f64;
pub type Rational = num_rational::Ratio<i64>;
pub type RationalPseudoCodeword = analysis::PseudoCodeword<Rational>;
pub type FloatPseudoCodeword = analysis::PseudoCodeword<f64>;
