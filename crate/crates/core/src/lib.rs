//! Iterative square roots (and n-th roots) of self-maps.
//!
//! The crate is split along the two settings it works in:
//!
//! * finite and symbolic self-maps, handled through their functional graphs
//!   ([`functional_graphs`]) and permutation cycle types ([`permutation_roots`]);
//! * continuous self-maps of the unit cube `I^m`, handled through exact-rational
//!   simplicial complexes ([`geometry`]) and piecewise affine linear maps ([`pl`]).
//!
//! [`constructions`] builds on both to produce maps without square roots
//! (with machine-checkable certificates), approximations by iterative squares,
//! and extensions of partial maps to squares.
//!
//! All geometry runs in exact rational arithmetic; floating point only appears
//! in the numeric `L^p` quadrature and in rendering.

pub mod constructions;
pub mod error;
pub mod functional_graphs;
pub mod geometry;
pub mod permutation_roots;
pub mod pl;
pub mod rational;

pub use error::{Error, Result};
pub use functional_graphs::FunctionalGraph;
pub use geometry::{Point, Simplex, SimplicialComplex};
pub use permutation_roots::{CycleType, Permutation};
pub use pl::{Evaluable, PlMap};
pub use rational::Rational;
