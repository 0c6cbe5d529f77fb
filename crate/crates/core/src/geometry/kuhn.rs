//! Kuhn (Freudenthal) triangulation of the cube: every grid cell is cut into
//! `m!` simplices, one per ordering of the coordinate directions.

use itertools::Itertools;

use super::complex::SimplicialComplex;
use super::point::Point;
use crate::rational;

/// Triangulation of `[0,1]^m` on the grid of step `1/r`: `r^m · m!` simplices,
/// mesh `1/r`. Vertices are ordered lexicographically by integer coordinates.
pub fn kuhn_triangulation(m: usize, r: usize) -> SimplicialComplex {
    assert!(m >= 1 && r >= 1, "dimension and resolution must be positive");
    let side = r + 1;
    let vertices: Vec<Point> = (0..side.pow(m as u32))
        .map(|idx| Point::new(digits(idx, side, m).iter().map(|&i| rational::q(i as i64, r as i64)).collect()))
        .collect();
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let mut facets = Vec::with_capacity(r.pow(m as u32) * perms.len());
    for cell in 0..r.pow(m as u32) {
        let base = digits(cell, r, m);
        for perm in &perms {
            facets.push(cell_simplex(&base, perm, side));
        }
    }
    SimplicialComplex::from_facets_unchecked(m, vertices, facets)
}

/// Vertex indices of the simplex `c, c + e_π0, c + e_π0 + e_π1, …`.
fn cell_simplex(base: &[usize], perm: &[usize], side: usize) -> Vec<usize> {
    let mut cur = base.to_vec();
    let mut out = Vec::with_capacity(perm.len() + 1);
    out.push(encode(&cur, side));
    for &d in perm {
        cur[d] += 1;
        out.push(encode(&cur, side));
    }
    out.sort_unstable();
    out
}

fn digits(mut idx: usize, base: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for d in (0..m).rev() {
        out[d] = idx % base;
        idx /= base;
    }
    out
}

fn encode(coords: &[usize], base: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * base + c)
}
