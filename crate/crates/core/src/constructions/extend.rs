//! Extending a PL map on a subcomplex `K ⊊ I^m` to the square of a PL self-map.
//!
//! A homothety `g̃(x) = l + λx` carries `I^m` into a box `B` away from `|K|`.
//! On a Kuhn grid fine enough to contain both `K` and `g̃(K)` as unions of
//! simplices, set `g = g̃` on `|K|` and `g = f∘g̃⁻¹` on `g̃(|K|)`; then
//! `g(g(x)) = f(x)` on `|K|` exactly. Other vertices copy the nearest assigned one.

use std::collections::VecDeque;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{kuhn_triangulation, simplices_intersect, BoundingBox, Point, Simplex, SimplicialComplex};
use crate::pl::PlMap;
use crate::rational::{self, Rational};

/// Largest refinement `extend_to_square` will build.
pub const SIMPLEX_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, Serialize)]
pub struct ExtendedSquare {
    pub g: PlMap,
    /// `g̃(x) = offset + scale·x`.
    pub offset: Point,
    #[serde(with = "rational::serde_str")]
    pub scale: Rational,
    /// Step `1/resolution` of the common refinement.
    pub resolution: usize,
    /// Vertices valued by the nearest assigned vertex.
    pub free_vertices: usize,
}

impl ExtendedSquare {
    pub fn contraction(&self, x: &Point) -> Point {
        self.offset.add(&x.scale(&self.scale))
    }
}

fn denom_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> num_bigint::BigInt {
    values.into_iter().fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Whether `idx` spans a simplex `c, c + e_π0/r, c + e_π0/r + e_π1/r, …`.
fn is_kuhn_simplex(k: &SimplicialComplex, idx: &[usize], r: &Rational) -> bool {
    let mut pts: Vec<&Point> = idx.iter().map(|&v| k.vertex(v)).collect();
    pts.sort_by_key(|p| p.coords().iter().sum::<Rational>());
    let m = k.dim();
    let mut used = vec![false; m];
    pts.windows(2).all(|w| {
        let d = w[1].sub(w[0]);
        let nz: Vec<usize> = (0..m).filter(|&i| !d[i].is_zero()).collect();
        match nz.as_slice() {
            [i] if d[*i] == r.recip() && !used[*i] => {
                used[*i] = true;
                true
            }
            _ => false,
        }
    })
}

/// `B` as one or two simplices.
fn box_simplices(b: &BoundingBox) -> Vec<Simplex> {
    let (lo, hi) = (&b.lo, &b.hi);
    match lo.dim() {
        1 => vec![Simplex::new(vec![lo.clone(), hi.clone()]).expect("non-degenerate box")],
        _ => {
            let a = Point::new(vec![hi[0].clone(), lo[1].clone()]);
            let c = Point::new(vec![lo[0].clone(), hi[1].clone()]);
            vec![
                Simplex::new(vec![lo.clone(), a, hi.clone()]).expect("non-degenerate box"),
                Simplex::new(vec![lo.clone(), c, hi.clone()]).expect("non-degenerate box"),
            ]
        }
    }
}

/// `f` lives on a subcomplex `K` of a Kuhn grid over `I^m`; `b` is a box in
/// `I^m` disjoint from `|K|`. Returns `g` with `g²|_K = f`.
pub fn extend_to_square(f: &PlMap, b: &BoundingBox) -> Result<ExtendedSquare> {
    let k = f.complex();
    let m = k.dim();
    if !(1..=2).contains(&m) {
        return Err(Error::Precondition(format!("dimension must be 1 or 2, got {m}")));
    }
    if b.lo.dim() != m || !b.lo.in_unit_cube() || !b.hi.in_unit_cube() || (0..m).any(|i| b.lo[i] >= b.hi[i]) {
        return Err(Error::Precondition("B must be a non-degenerate box inside the cube".into()));
    }
    if k.is_empty() {
        return Err(Error::EmptyComplex);
    }
    if let Some(j) = f.images().iter().position(|y| !y.in_unit_cube()) {
        return Err(Error::NotSelfMap(j));
    }
    let r_big = denom_lcm(k.vertices().iter().flat_map(|p| p.coords()));
    let r = Rational::from_integer(r_big.clone());
    if let Some(bad) = k.facets().iter().find(|idx| idx.len() != m + 1 || !is_kuhn_simplex(k, idx, &r)) {
        return Err(Error::Precondition(format!(
            "K must be a pure subcomplex of the Kuhn grid of step 1/{r}; facet {bad:?} is not"
        )));
    }
    if !k.vertices().iter().all(Point::in_unit_cube) {
        return Err(Error::Precondition("K must lie in the cube".into()));
    }
    let boxes = box_simplices(b);
    for s in 0..k.facets().len() {
        let sigma = k.facet_simplex(s);
        if boxes.iter().any(|q| simplices_intersect(&sigma, q).is_some()) {
            return Err(Error::BoxOverlapsComplex);
        }
    }

    let scale = (0..m).map(|i| &b.hi[i] - &b.lo[i]).min().expect("m ≥ 1");
    let offset = b.lo.clone();
    let step = &scale / &r;
    let res = denom_lcm(offset.coords().iter().chain([&step])).lcm(&r_big);
    let budget_err = || Error::SimplexBudget {
        needed: usize::MAX,
        budget: SIMPLEX_BUDGET,
    };
    let res: usize = res.try_into().map_err(|_| budget_err())?;
    let needed = res
        .checked_pow(m as u32)
        .and_then(|n| n.checked_mul(if m == 2 { 2 } else { 1 }))
        .ok_or_else(budget_err)?;
    if needed > SIMPLEX_BUDGET {
        return Err(Error::SimplexBudget {
            needed,
            budget: SIMPLEX_BUDGET,
        });
    }

    let t = Arc::new(kuhn_triangulation(m, res));
    let inv_scale = scale.recip();
    let mut values: Vec<Option<Point>> = Vec::with_capacity(t.vertices().len());
    for x in t.vertices() {
        let v = if k.containing_facet(x).is_some() {
            Some(offset.add(&x.scale(&scale)))
        } else {
            let pre = x.sub(&offset).scale(&inv_scale);
            if pre.in_unit_cube() && k.containing_facet(&pre).is_some() {
                Some(f.evaluate(&pre)?)
            } else {
                None
            }
        };
        values.push(v);
    }

    // Multi-source BFS over axis neighbours; sources in vertex order, which is
    // lexicographic, so ties go to the lexicographically smallest source.
    let side = res + 1;
    let mut queue: VecDeque<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    let free = values.len() - queue.len();
    while let Some(i) = queue.pop_front() {
        let mut stride = 1;
        for _ in 0..m {
            let digit = (i / stride) % side;
            let mut nbrs = Vec::with_capacity(2);
            if digit > 0 {
                nbrs.push(i - stride);
            }
            if digit + 1 < side {
                nbrs.push(i + stride);
            }
            for j in nbrs {
                if values[j].is_none() {
                    values[j] = values[i].clone();
                    queue.push_back(j);
                }
            }
            stride *= side;
        }
    }
    let images = values.into_iter().map(|v| v.expect("grid is connected")).collect();
    Ok(ExtendedSquare {
        g: PlMap::self_map_of_cube(t, images)?,
        offset,
        scale,
        resolution: res,
        free_vertices: free,
    })
}

/// The facets of the Kuhn grid of step `1/r` lying in the union of the given
/// cells (integer corner coordinates).
pub fn kuhn_cells(m: usize, r: usize, cells: &[Vec<usize>]) -> SimplicialComplex {
    let grid = kuhn_triangulation(m, r);
    let rr = rational::int(r as i64);
    let keep: Vec<usize> = (0..grid.facets().len())
        .filter(|&f| {
            let c = grid.facet_simplex(f).barycenter();
            cells.iter().any(|cell| {
                (0..m).all(|i| {
                    let u = &c[i] * &rr;
                    u > rational::int(cell[i] as i64) && u < rational::int(cell[i] as i64 + 1)
                })
            })
        })
        .collect();
    grid.subcomplex(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point_in(k: &SimplicialComplex, rng: &mut ChaCha8Rng) -> Point {
        let s = k.facet_simplex(rng.gen_range(0..k.facets().len()));
        let w: Vec<i64> = (0..s.vertices().len()).map(|_| rng.gen_range(1..1000)).collect();
        let total: i64 = w.iter().sum();
        s.point_at(&w.iter().map(|&a| q(a, total)).collect::<Vec<_>>())
    }

    #[test]
    fn interval_reflection() {
        let k = Arc::new(kuhn_cells(1, 2, &[vec![0]]));
        let f = PlMap::interpolate(Arc::clone(&k), k.vertices().iter().map(|x| Point::new(vec![q(1, 1) - &x[0]])).collect()).unwrap();
        let b = BoundingBox {
            lo: Point::from_ints(&[3], 5),
            hi: Point::from_ints(&[9], 10),
        };
        let ext = extend_to_square(&f, &b).unwrap();
        assert_eq!(ext.resolution, 20);
        for x in [q(0, 1), q(1, 8), q(1, 3), q(1, 2)] {
            let p = Point::new(vec![x.clone()]);
            let gg = ext.g.evaluate(&ext.g.evaluate(&p).unwrap()).unwrap();
            assert_eq!(gg, Point::new(vec![q(1, 1) - x]));
        }
    }

    #[test]
    fn identity_on_two_cells() {
        let k = Arc::new(kuhn_cells(2, 4, &[vec![0, 0], vec![2, 0]]));
        let f = PlMap::identity(Arc::clone(&k));
        let b = BoundingBox {
            lo: Point::from_ints(&[1, 1], 2),
            hi: Point::from_ints(&[1, 1], 1),
        };
        let ext = extend_to_square(&f, &b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for x in k.vertices().iter().cloned().chain((0..50).map(|_| random_point_in(&k, &mut rng))) {
            assert_eq!(ext.g.evaluate(&ext.g.evaluate(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn rejects_overlap_and_non_grid_complexes() {
        let k = Arc::new(kuhn_cells(1, 2, &[vec![0]]));
        let f = PlMap::identity(Arc::clone(&k));
        let b = BoundingBox {
            lo: Point::from_ints(&[1], 2),
            hi: Point::from_ints(&[1], 1),
        };
        assert_eq!(extend_to_square(&f, &b).unwrap_err(), Error::BoxOverlapsComplex);
        let odd = SimplicialComplex::new(
            2,
            vec![Point::from_ints(&[0, 0], 1), Point::from_ints(&[1, 0], 2), Point::from_ints(&[0, 1], 2)],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let f = PlMap::identity(Arc::new(odd));
        let b = BoundingBox {
            lo: Point::from_ints(&[3, 3], 4),
            hi: Point::from_ints(&[1, 1], 1),
        };
        assert!(matches!(extend_to_square(&f, &b), Err(Error::Precondition(_))));
    }
}
