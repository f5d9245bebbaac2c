//! Exact Kazhdan-Lusztig combinatorics.
//!
//! The crate is organised bottom-up:
//!
//! * [`coxeter`]: Coxeter group arithmetic (integral Cartan matrices, dihedral
//!   and universal groups), Bruhat order and reduced words.
//! * [`laurent`]: the coefficient ring `Z[v, v^-1]`.
//! * [`hecke`]: the Hecke algebra, its bar involution, the Kazhdan-Lusztig
//!   basis and the standard pairing.
//! * [`deodhar`]: subexpressions, Deodhar's defect, graded dimensions of the
//!   light-leaves spaces and the subset-selection census.
//! * [`bottsamelson`]: Bott-Samelson bimodules realised over an exact
//!   polynomial ring.
//!
//! The algebraic layers are generic over their scalar type. The aliases at
//! the crate root fix the exact choices used everywhere else: arbitrary
//! precision integers for Laurent coefficients and arbitrary precision
//! rationals for the polynomial ring.

pub mod bottsamelson;
pub mod coxeter;
pub mod deodhar;
mod error;
pub mod hecke;
pub mod laurent;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod scalar;

pub use error::{Error, Result};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

pub use coxeter::{CoxeterSystem, Generator, GroupElement, Side};
pub use deodhar::{Bits, Decoration, DecoratedSubexpr, Expression};

/// Laurent polynomial in `v` with arbitrary precision integer coefficients.
pub type LaurentPoly = laurent::Laurent<BigInt>;

/// Hecke algebra element with arbitrary precision coefficients.
pub type HeckeElt = hecke::HeckeElement<BigInt>;

/// Hecke algebra (with memoised bar involution and KL basis) over `Z[v, v^-1]`.
pub type Hecke = hecke::HeckeAlgebra<BigInt>;

/// Polynomial in the simple roots with exact rational coefficients.
pub type Poly = bottsamelson::MPoly<BigRational>;

/// Polynomial realisation with rational coefficients.
pub type Realisation = bottsamelson::Realisation<BigRational>;

/// Element of a Bott-Samelson bimodule with rational coordinates.
pub type BSElement = bottsamelson::BsElement<BigRational>;
