//! Multiplicity structure of arc spaces of fat points.
//!
//! The crate computes truncated differential ideals `I^(<=H) ∩ Q[x^(<=h)]`,
//! their Gröbner bases and quotient dimensions, the combinatorics of fair
//! monomials, and an exterior-algebra embedding that serves as an
//! independent membership oracle.

pub mod arcspace;
pub mod diffpoly;
pub mod error;
pub mod extalg;
pub mod fairmono;
pub mod groebner;
pub mod par;

pub use arcspace::{arc_dimension, arc_dimension_with, ArcOptions, ArcResult, BasisCache, DiffIdeal, StageKey};
pub use diffpoly::{compare, DMono, DPoly, DVar, OrderKind, Rational, VarNames};
pub use error::{Error, Result};
pub use fairmono::FairClass;
pub use groebner::{Elimination, GBasis, QuotientDim, Truncation};
pub use par::Execution;
