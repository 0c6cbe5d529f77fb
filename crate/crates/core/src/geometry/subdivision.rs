use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;

use super::complex::SimplicialComplex;
use super::point::Point;
use super::simplex::Simplex;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// First barycentric subdivision: vertices are the barycentres of all
/// simplices, and simplices are the chains `σ_0 ⊂ σ_1 ⊂ … ⊂ σ_k`. Maximal
/// chains of a facet correspond to orderings of its vertices.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> SimplicialComplex {
    let mut vertices: Vec<Point> = Vec::new();
    let mut by_face: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut facets = Vec::new();
    for f in k.facets() {
        for order in f.iter().copied().permutations(f.len()) {
            let mut chain = Vec::with_capacity(f.len());
            for i in 1..=order.len() {
                let mut face = order[..i].to_vec();
                face.sort_unstable();
                let id = *by_face.entry(face).or_insert_with_key(|face| {
                    vertices.push(k.simplex(face).barycenter());
                    vertices.len() - 1
                });
                chain.push(id);
            }
            chain.sort_unstable();
            facets.push(chain);
        }
    }
    SimplicialComplex::from_facets_unchecked(k.dim(), vertices, facets)
}

/// `K^(l)` for `l ≥ 0`.
pub fn iterated_subdivision(k: &SimplicialComplex, l: usize) -> SimplicialComplex {
    (0..l).fold(k.clone(), |acc, _| barycentric_subdivision(&acc))
}

/// `(l, mesh(K^(l)))` for `l = 0..=levels`.
pub fn mesh_decay(k: &SimplicialComplex, levels: usize) -> Result<Vec<(usize, Rational)>> {
    let mut out = Vec::with_capacity(levels + 1);
    let mut cur = k.clone();
    for l in 0..=levels {
        out.push((l, cur.mesh()?));
        if l < levels {
            cur = barycentric_subdivision(&cur);
        }
    }
    Ok(out)
}

/// CSV with columns `l,mesh`; meshes as `p/q` strings.
pub fn mesh_decay_csv(rows: &[(usize, Rational)]) -> String {
    let mut s = String::from("l,mesh\n");
    for (l, m) in rows {
        let _ = writeln!(s, "{l},{}", rational::format(m));
    }
    s
}

/// Splits `σ` at `z`: if `z` is interior to the face `⟨x_0..x_k⟩`, the result
/// has the `k + 1` simplices obtained by replacing one `x_i` with `z`.
pub fn insert_vertex(sigma: &Simplex, z: &Point) -> Result<SimplicialComplex> {
    let k = SimplicialComplex::from_simplices(sigma.ambient_dim(), std::slice::from_ref(sigma))?;
    match k.stellar_subdivision(z) {
        Err(Error::OutsideCarrier) => Err(Error::InvalidInsertion("point lies outside the simplex".into())),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::kuhn::kuhn_triangulation;
    use crate::rational::q;

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c, 1)
    }

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::new(2, vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])], vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn subdivision_examples() {
        let seg = SimplicialComplex::new(1, vec![p(&[0]), p(&[1])], vec![vec![0, 1]]).unwrap();
        let s = barycentric_subdivision(&seg);
        assert_eq!(s.facets().len(), 2);
        assert!(s.vertex_index(&Point::from_ints(&[1], 2)).is_some());

        let t = barycentric_subdivision(&triangle());
        assert_eq!(t.top_facets().len(), 6);
        assert_eq!(t.volume(), q(1, 2));
        t.validate().unwrap();
        assert!(t.mesh().unwrap() <= q(2, 3));

        assert!(barycentric_subdivision(&SimplicialComplex::empty(2)).is_empty());
    }

    #[test]
    fn mesh_contracts_by_m_over_m_plus_one() {
        for m in 1..=3 {
            let k = kuhn_triangulation(m, 1);
            let levels = if m == 3 { 2 } else { 3 };
            let decay = mesh_decay(&k, levels).unwrap();
            let factor = q(m as i64, m as i64 + 1);
            let mut bound = decay[0].1.clone();
            for w in decay.windows(2) {
                assert!(w[1].1 < w[0].1, "mesh must strictly decrease");
                bound *= &factor;
                assert!(w[1].1 <= bound);
            }
        }
    }

    #[test]
    fn csv_format() {
        let rows = vec![(0, q(1, 1)), (1, q(2, 3))];
        assert_eq!(mesh_decay_csv(&rows), "l,mesh\n0,1\n1,2/3\n");
    }

    #[test]
    fn insert_vertex_examples() {
        let sigma = Simplex::new(vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]).unwrap();
        let k = insert_vertex(&sigma, &sigma.barycenter()).unwrap();
        assert_eq!(k.top_facets().len(), 3);
        assert_eq!(k.volume(), sigma.volume());
        let k = insert_vertex(&sigma, &Point::from_ints(&[1, 0], 2)).unwrap();
        assert_eq!(k.top_facets().len(), 2);
        assert_eq!(k.volume(), sigma.volume());
        assert!(matches!(insert_vertex(&sigma, &p(&[0, 0])), Err(Error::InvalidInsertion(_))));
        assert!(matches!(insert_vertex(&sigma, &p(&[1, 1])), Err(Error::InvalidInsertion(_))));
    }
}
