//! Exact-rational simplices and simplicial complexes in `R^m`.
//!
//! Distances and diameters use the ∞-norm throughout.

mod complex;
pub mod feasibility;
mod kuhn;
pub mod linalg;
mod locate;
mod perturb;
mod point;
mod simplex;
mod subdivision;

pub use complex::SimplicialComplex;
pub use feasibility::{simplices_intersect, simplices_intersect_lp};
pub use kuhn::kuhn_triangulation;
pub use perturb::{perturb_generic, IndependenceScope, PerturbConfig};
pub use point::{BoundingBox, Point};
pub use simplex::{is_geometrically_independent, BarycentricCoords, Simplex};
pub use subdivision::{barycentric_subdivision, insert_vertex, iterated_subdivision, mesh_decay, mesh_decay_csv};

