//! Piecewise affine linear maps on simplicial complexes, evaluable maps with
//! Lipschitz data, and certified bounds for squares of maps.

mod composition;
mod evaluable;
mod expr;
mod map;

pub use composition::{certified_composition_distance, CompositionBound, CompositionOptions};
pub use evaluable::{Evaluable, FnMap, Modulus};
pub use expr::{Expr, ExprMap};
pub use map::{AffinePiece, PlMap};
