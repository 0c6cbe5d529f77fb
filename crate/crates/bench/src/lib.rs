//! Fixtures shared by the benchmarks.

use std::sync::Arc;

pub use iterroot::*;

use iterroot::geometry::kuhn_triangulation;

/// The map `i ↦ (a·i + b) mod n`: a mix of cycles and in-trees for most `(a, b)`.
pub fn affine_graph(n: usize, a: usize, b: usize) -> FunctionalGraph {
    FunctionalGraph::new((0..n).map(|i| (a * i + b) % n).collect()).expect("images stay in range")
}

/// Cycles of lengths `lens` placed side by side.
pub fn permutation_of_type(lens: &[usize]) -> Permutation {
    let mut cycles = Vec::new();
    let mut next = 0;
    for &l in lens {
        cycles.push((next..next + l).collect::<Vec<_>>());
        next += l;
    }
    Permutation::from_cycles(next, &cycles).expect("disjoint cycles")
}

/// Quarter turn `(x, y) ↦ (1 − y, x)` on the Kuhn triangulation of step `1/r`.
pub fn quarter_turn(r: usize) -> PlMap {
    let k = Arc::new(kuhn_triangulation(2, r));
    let images = k.vertices().iter().map(|x| Point::new(vec![iterroot::rational::one() - &x[1], x[0].clone()])).collect();
    PlMap::interpolate(k, images).expect("one image per vertex")
}
