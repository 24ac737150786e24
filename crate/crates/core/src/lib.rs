//! Exact toolkit for commensurability of quadratic differentials.
//!
//! A quadratic differential is modelled by its flat structure: a
//! [`HalfTranslationSurface`] built from convex polygons with exact rational
//! edge vectors. On top of that model the crate provides coverings and lifts
//! ([`covering`]), the closure/quotient construction of the minimal element
//! of a commensurability class ([`commensurate`]), conjugacy decisions via
//! canonical Delaunay complexes ([`isomorphy`]) and descent of affine
//! automorphisms through coverings ([`fibered`]).
//!
//! All algorithms are generic over an [`ExactField`]; the aliases below fix
//! the default arbitrary-precision rational field.

pub mod commensurate;
pub mod covering;
pub mod error;
pub mod fibered;
pub mod fixtures;
pub mod geometry;
pub mod isomorphy;
pub mod refine;
pub mod scalar;
pub mod surface;

pub use error::{Error, Result};
pub use geometry::{Matrix2, Vector};
pub use scalar::ExactField;
pub use surface::{FlagId, HalfTranslationSurface, ValidationReport, VertexStatus};

/// Default scalar field.
pub type Rational = num_rational::BigRational;
pub type RationalVector = Vector<Rational>;
pub type RationalMatrix = Matrix2<Rational>;
pub type Surface = HalfTranslationSurface<Rational>;

pub type CoveringMap = covering::CoveringMap<Rational>;
pub type CanonicalForm = isomorphy::CanonicalForm<Rational>;
pub type AffineAutomorphism = fibered::AffineAutomorphism<Rational>;
pub type FlagPartition = commensurate::FlagPartition;
