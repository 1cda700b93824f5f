//! Exact smoothness conditions between tensor-product Bernstein–Bézier patches.
//!
//! A tensor-product Bernstein polynomial lives on a *simplotope*, a product of
//! simplices (segment × segment is a parallelogram, triangle × segment a prism,
//! a bare simplex is a simplotope with one factor). This crate generates the
//! homogeneous linear conditions on the B-coefficients of two patches that make
//! them join with C^r continuity across a shared facet, including pairs of
//! *different* type such as a square next to a triangle.
//!
//! The construction embeds each simplotope in a higher-dimensional
//! circumscribed simplex, writes the classical simplex continuity conditions
//! there, keeps the ones that touch the tensor-product B-net and moves the
//! remaining coefficients back onto the patch's own B-net with local degree
//! raising and lowering. Every quantity is an exact rational, so the produced
//! conditions are exact identities and can be checked with zero tolerance; the
//! [`verify`] module does that check independently, by expanding both patches
//! into monomials and comparing derivatives on the shared facet.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the command
//! line front end live in the companion `smoothjoin` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bernstein;
pub mod circumscribe;
pub mod coefficient;
pub mod continuity;
pub mod degree_ops;
mod error;
pub mod geometry;
pub mod linalg;
pub mod multiindex;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a rational from an integer numerator and denominator.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

pub use bernstein::{BNet, SimplexPolynomial, TensorPolynomial};
pub use circumscribe::{CircumscribedPair, CircumscribedSimplex};
pub use coefficient::{Coefficient, LinearForm};
pub use continuity::{
    assemble_smoothness_matrix, auto_adjacencies, mixed_conditions, mixed_conditions_with_direction,
    simplex_conditions, CoefficientRef, ConditionSet, LinearCondition, Patch, SimplexPatch, Side,
    SmoothnessSystem,
};
pub use geometry::{
    BarycentricPoint, DirectionCoords, RationalPoint, SharedFacetInfo, Simplex, Simplotope,
    SimplotopeCoords,
};
pub use multiindex::{BlockedMultiIndex, MultiIndex};
pub use verify::{check_conditions, nullspace_equivalence, VerificationReport};
