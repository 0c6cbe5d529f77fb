//! Approximating a map with a fixed point on `∂I^m` by the square of a
//! continuous map.
//!
//! `σ0` is a small grid simplex at the fixed point `x0` with a facet on the
//! cube's boundary, `C` is the closure of its complement, and `φ` is a PL
//! involution exchanging them and fixing `H = σ0 ∩ C` pointwise: `φ = ψ` on
//! `σ0` and `ψ⁻¹` on `C`, where `ψ` carries a fan of `σ0` onto a fan of `C`.
//! With `f1` the grid interpolation of `h` pushed out of `σ0°`, the root is
//! `g = f1∘φ` on `σ0` and `φ` elsewhere, so `g² = f1` off `σ0` and `g²` maps
//! `σ0` near `x0`.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{kuhn_triangulation, linalg, BoundingBox, Point, Simplex};
use crate::pl::{certified_composition_distance, CompositionBound, CompositionOptions, Evaluable, Modulus, PlMap};
use crate::rational::{self, Rational};

/// `x ↦ matrix·x + offset` restricted to `domain`, carrying it onto `target`
/// vertex by vertex.
#[derive(Debug, Clone, Serialize)]
pub struct AffineCell {
    pub domain: Simplex,
    pub target: Simplex,
    #[serde(skip)]
    matrix: Vec<Vec<Rational>>,
    #[serde(skip)]
    offset: Point,
    #[serde(skip)]
    bbox: BoundingBox,
}

impl AffineCell {
    pub fn between(domain: Simplex, target: Simplex) -> Self {
        let x0 = &domain.vertices()[0];
        let y0 = &target.vertices()[0];
        let m = x0.dim();
        let cols = |s: &Simplex, o: &Point| -> Vec<Vec<Rational>> {
            let d: Vec<Point> = s.vertices()[1..].iter().map(|v| v.sub(o)).collect();
            (0..m).map(|r| d.iter().map(|c| c[r].clone()).collect()).collect()
        };
        let inv = linalg::inverse(&cols(&domain, x0)).expect("domain is non-degenerate");
        let matrix = linalg::mat_mul(&cols(&target, y0), &inv);
        let offset = y0.sub(&Point::new(linalg::mat_vec(&matrix, x0.coords())));
        AffineCell {
            bbox: domain.bbox(),
            domain,
            target,
            matrix,
            offset,
        }
    }

    pub fn apply(&self, x: &Point) -> Point {
        Point::new(linalg::mat_vec(&self.matrix, x.coords())).add(&self.offset)
    }

    pub fn norm_inf(&self) -> Rational {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|c| c.abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(rational::zero)
    }

    fn inverse(&self) -> AffineCell {
        AffineCell::between(self.target.clone(), self.domain.clone())
    }
}

/// The square root candidate `g`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryRoot {
    pub sigma0: Simplex,
    pub f1: PlMap,
    /// `ψ` on `σ0`; the domains tile `σ0`.
    pub forward: Vec<AffineCell>,
    /// `ψ⁻¹` on `C`; the domains tile `C`.
    pub backward: Vec<AffineCell>,
    #[serde(skip)]
    f1_lipschitz: Rational,
    #[serde(skip)]
    sigma0_bbox: BoundingBox,
}

impl BoundaryRoot {
    fn in_sigma0(&self, x: &Point) -> bool {
        self.sigma0_bbox.contains(x) && self.sigma0.contains(x)
    }

    fn apply_cells(cells: &[AffineCell], x: &Point) -> Result<Point> {
        cells
            .iter()
            .find(|c| c.bbox.contains(x) && c.domain.contains(x))
            .map(|c| c.apply(x))
            .ok_or(Error::OutsideCarrier)
    }

    /// The involution `φ`.
    pub fn phi(&self, x: &Point) -> Result<Point> {
        if self.in_sigma0(x) {
            Self::apply_cells(&self.forward, x)
        } else {
            Self::apply_cells(&self.backward, x)
        }
    }
}

impl Evaluable for BoundaryRoot {
    fn dim(&self) -> usize {
        self.sigma0.ambient_dim()
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        if self.in_sigma0(x) {
            self.f1.evaluate(&Self::apply_cells(&self.forward, x)?)
        } else {
            Self::apply_cells(&self.backward, x)
        }
    }

    fn lipschitz_on(&self, b: &BoundingBox) -> Rational {
        let fwd = self
            .forward
            .iter()
            .filter(|c| c.bbox.intersects(b) && meets_box(&c.domain, b))
            .map(|c| c.norm_inf() * &self.f1_lipschitz);
        let bwd = self
            .backward
            .iter()
            .filter(|c| c.bbox.intersects(b) && meets_box(&c.domain, b))
            .map(|c| c.norm_inf());
        fwd.chain(bwd).max().unwrap_or_else(rational::zero)
    }
}

/// Exact simplex–box overlap: bounding boxes, plus the edge normals in the plane.
fn meets_box(s: &Simplex, b: &BoundingBox) -> bool {
    if !s.bbox().intersects(b) {
        return false;
    }
    if s.ambient_dim() != 2 {
        return true;
    }
    let v = s.vertices();
    let corners = [
        (&b.lo[0], &b.lo[1]),
        (&b.hi[0], &b.lo[1]),
        (&b.lo[0], &b.hi[1]),
        (&b.hi[0], &b.hi[1]),
    ];
    (0..3).all(|i| {
        let (a, c, o) = (&v[i], &v[(i + 1) % 3], &v[(i + 2) % 3]);
        let side = |x: &Rational, y: &Rational| (&c[0] - &a[0]) * (y - &a[1]) - (&c[1] - &a[1]) * (x - &a[0]);
        let inside = side(&o[0], &o[1]);
        !corners.iter().all(|(x, y)| {
            let t = side(x, y);
            (t.is_positive() && inside.is_negative()) || (t.is_negative() && inside.is_positive())
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum F1Rule {
    /// `x_j ∈ σ0`: kept fixed.
    InSigma0,
    /// `h(x_j) ∈ σ0°`: pushed to the vertex `x_1` of `σ0`.
    PushedOut,
    /// Otherwise `h(x_j)`.
    Image,
}

#[derive(Debug, Clone, Serialize)]
pub struct F1Entry {
    pub vertex: Point,
    pub image: Point,
    pub rule: F1Rule,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryLog {
    pub x0: Point,
    pub sigma0: Vec<Point>,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    pub resolution: usize,
    pub phi: String,
    /// Boundary cycles of the two fans (matching index by index) and their centres.
    pub sigma0_fan: Vec<Point>,
    pub complement_fan: Vec<Point>,
    pub fan_centres: [Point; 2],
    pub f1_table: Vec<F1Entry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareApproxResult {
    pub g: BoundaryRoot,
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    pub bound: CompositionBound,
    pub log: BoundaryLog,
}

#[derive(Debug, Clone)]
pub struct BoundaryOptions {
    pub grid_step: Rational,
    pub max_depth: u32,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self {
            grid_step: rational::q(1, 64),
            max_depth: 20,
        }
    }
}

fn on_boundary(p: &Point) -> bool {
    p.coords().iter().any(|c| c.is_zero() || *c == rational::one())
}

fn edge_on_boundary(a: &Point, b: &Point) -> bool {
    (0..a.dim()).any(|i| a[i] == b[i] && (a[i].is_zero() || a[i] == rational::one()))
}

/// Position along `∂I²` counter-clockwise from the origin, in `[0, 4)`.
fn perimeter(p: &Point) -> Rational {
    let (x, y) = (&p[0], &p[1]);
    let one = rational::one();
    if y.is_zero() {
        x.clone()
    } else if *x == one {
        &one + y
    } else if *y == one {
        rational::int(3) - x
    } else {
        rational::int(4) - y
    }
}

fn ccw_gap(from: &Rational, to: &Rational) -> Rational {
    let d = to - from;
    if d.is_negative() {
        d + rational::int(4)
    } else {
        d
    }
}

/// Inserts midpoints into the longest segments of `path` until it has `n` segments.
fn subdivide(path: &mut Vec<Point>, n: usize) {
    while path.len() - 1 < n {
        let i = (0..path.len() - 1)
            .max_by(|&a, &b| {
                let la = path[a].dist_inf(&path[a + 1]);
                let lb = path[b].dist_inf(&path[b + 1]);
                la.cmp(&lb).then(b.cmp(&a))
            })
            .expect("non-empty path");
        let mid = path[i].lerp(&path[i + 1], &rational::q(1, 2));
        path.insert(i + 1, mid);
    }
}

fn orientation(c: &Point, a: &Point, b: &Point) -> Rational {
    let (u, v) = (a.sub(c), b.sub(c));
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Whether the triangles `(c, P_i, P_{i+1})` are non-degenerate and equally oriented.
fn valid_fan(c: &Point, cycle: &[Point]) -> bool {
    let n = cycle.len();
    let signs: Vec<Rational> = (0..n).map(|i| orientation(c, &cycle[i], &cycle[(i + 1) % n])).collect();
    signs.iter().all(|s| s.is_positive()) || signs.iter().all(|s| s.is_negative())
}

fn fan_cells(c: &Point, cycle: &[Point]) -> Vec<Simplex> {
    let n = cycle.len();
    (0..n)
        .map(|i| Simplex::new(vec![c.clone(), cycle[i].clone(), cycle[(i + 1) % n].clone()]).expect("valid fan"))
        .collect()
}

struct Involution {
    forward: Vec<AffineCell>,
    sigma0_fan: Vec<Point>,
    complement_fan: Vec<Point>,
    centres: [Point; 2],
    description: String,
}

fn involution_1d(x0: &Point, sigma0: &Simplex) -> Involution {
    let e = sigma0.vertices().iter().find(|v| *v != x0).expect("an edge").clone();
    let far = Point::new(vec![rational::one() - &x0[0]]);
    Involution {
        forward: vec![AffineCell::between(
            Simplex::new(vec![x0.clone(), e.clone()]).expect("proper segment"),
            Simplex::new(vec![far.clone(), e.clone()]).expect("proper segment"),
        )],
        sigma0_fan: vec![x0.clone(), e.clone()],
        complement_fan: vec![far, e],
        centres: [x0.clone(), x0.clone()],
        description: "affine exchange of sigma0 and its complement fixing their common endpoint".into(),
    }
}

fn involution_2d(sigma0: &Simplex) -> Result<Involution> {
    let vs = sigma0.vertices();
    let edges = [(0, 1), (1, 2), (2, 0)];
    let boundary: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| edge_on_boundary(&vs[a], &vs[b]))
        .collect();
    // The arc σ0 ∩ ∂I² runs from e_a to e_b; the remaining edges form H.
    let (arc, inner): (Vec<Point>, Vec<Point>) = match boundary.as_slice() {
        [(a, b)] => {
            let w = 3 - a - b;
            (vec![vs[*a].clone(), vs[*b].clone()], vec![vs[w].clone()])
        }
        [(a, b), (c, d)] => {
            let shared = [*a, *b].into_iter().find(|v| *v == *c || *v == *d).expect("edges of a triangle meet");
            let ends: Vec<usize> = [*a, *b, *c, *d].into_iter().filter(|v| *v != shared).collect();
            (vec![vs[ends[0]].clone(), vs[shared].clone(), vs[ends[1]].clone()], Vec::new())
        }
        _ => return Err(Error::Precondition("sigma0 must have exactly one or two edges on the boundary".into())),
    };
    let (ea, eb) = (arc[0].clone(), arc[arc.len() - 1].clone());
    let (ta, tb) = (perimeter(&ea), perimeter(&eb));
    let probe = perimeter(&arc[0].lerp(&arc[1], &rational::q(1, 2)));
    let sigma_ccw = ccw_gap(&ta, &probe) < ccw_gap(&ta, &tb);
    let corners: Vec<Point> = [(0, 0), (1, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(x, y)| Point::from_ints(&[x, y], 1))
        .collect();
    // The complementary arc from e_a to e_b passes through the remaining cube corners.
    let (from, to) = if sigma_ccw { (&tb, &ta) } else { (&ta, &tb) };
    let span = ccw_gap(from, to);
    let mut between: Vec<(Rational, Point)> = corners
        .into_iter()
        .map(|c| (ccw_gap(from, &perimeter(&c)), c))
        .filter(|(g, _)| g.is_positive() && *g < span)
        .collect();
    between.sort_by(|a, b| a.0.cmp(&b.0));
    let mut c_arc: Vec<Point> = vec![ea.clone()];
    if sigma_ccw {
        c_arc.extend(between.into_iter().rev().map(|(_, p)| p));
    } else {
        c_arc.extend(between.into_iter().map(|(_, p)| p));
    }
    c_arc.push(eb.clone());

    let mut s_arc = arc;
    let n = (s_arc.len() - 1).max(c_arc.len() - 1);
    subdivide(&mut s_arc, n);
    subdivide(&mut c_arc, n);
    // Cycles: the arc from e_a to e_b, then H back from e_b to e_a.
    let close = |mut arc: Vec<Point>| {
        arc.extend(inner.iter().cloned());
        arc
    };
    let s_cycle = close(s_arc);
    let c_cycle = close(c_arc);

    let pair = |cs: &Point, cc: &Point| -> Vec<AffineCell> {
        fan_cells(cs, &s_cycle)
            .into_iter()
            .zip(fan_cells(cc, &c_cycle))
            .map(|(a, b)| AffineCell::between(a, b))
            .collect()
    };
    let best = |cands: Vec<Point>, score: &dyn Fn(&Point) -> Rational| {
        cands.into_iter().map(|c| (score(&c), c)).min_by(|a, b| a.0.cmp(&b.0)).map(|(_, c)| c)
    };
    // σ0 is fanned from its centroid; the complement's centre is the point of
    // a 1/32 grid minimising the worst ‖A‖·‖A⁻¹‖, since slivers wreck the
    // certified bound.
    let centroid = sigma0.barycenter();
    if !valid_fan(&centroid, &s_cycle) {
        return Err(Error::pipeline("involution", "sigma0 fan is degenerate"));
    }
    let d = 32;
    let c_cands: Vec<Point> = (1..d)
        .flat_map(|i| (1..d).map(move |j| Point::from_ints(&[i, j], d)))
        .filter(|c| !sigma0.contains(c) && valid_fan(c, &c_cycle))
        .collect();
    let cc = best(c_cands, &|c| {
        pair(&centroid, c)
            .iter()
            .map(|a| a.norm_inf() * a.inverse().norm_inf())
            .max()
            .expect("non-empty fan")
    })
    .ok_or_else(|| Error::pipeline("involution", "no fan centre found for the complement"))?;
    let cs = centroid;
    let forward = pair(&cs, &cc);
    Ok(Involution {
        forward,
        sigma0_fan: s_cycle,
        complement_fan: c_cycle,
        centres: [cs, cc],
        description: "PL involution: the fan of sigma0 from its centroid is mapped triangle by triangle onto a fan of \
                      the complement from a kernel point; both fans share the edges of H, which stay fixed"
            .into(),
    })
}

/// Builds `g` with `ρ(g², h) < ε`, certified by interval-free Lipschitz bounds on a grid.
pub fn boundary_square_approx(
    h: &dyn Evaluable,
    omega: &Modulus,
    x0: &Point,
    eps: &Rational,
    options: &BoundaryOptions,
) -> Result<SquareApproxResult> {
    let m = h.dim();
    if !(1..=2).contains(&m) || x0.dim() != m {
        return Err(Error::Precondition(format!("dimension must be 1 or 2, got {m}")));
    }
    if *eps <= rational::zero() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    if !x0.in_unit_cube() || !on_boundary(x0) {
        return Err(Error::Precondition(format!("{x0} is not on the boundary of the cube")));
    }
    if h.eval(x0)? != *x0 {
        return Err(Error::Precondition(format!("{x0} is not a fixed point of h")));
    }

    // δ < ε/4 with ω(δ) < ε/4; the grid has mesh below δ/4 and contains x0.
    let quarter = eps / rational::int(4);
    let mut delta = omega.dyadic_inverse(&quarter);
    while delta >= quarter {
        delta /= rational::int(2);
    }
    let lcm = x0
        .coords()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let lcm: usize = lcm.try_into().map_err(|_| Error::Precondition("x0 has too large a denominator".into()))?;
    let min_r: num_bigint::BigInt = (rational::int(4) / &delta).floor().to_integer() + 1;
    let min_r: usize = min_r.try_into().map_err(|_| Error::Precondition("grid too fine".into()))?;
    let r = min_r.div_ceil(lcm) * lcm;
    let k = Arc::new(kuhn_triangulation(m, r));
    let x0_idx = k.vertex_index(x0).expect("x0 is a grid vertex");

    let sigma0_facet = k
        .top_facets()
        .into_iter()
        .find(|&f| {
            let idx = &k.facets()[f];
            // σ0 needs an (m−1)-face on ∂I^m.
            idx.contains(&x0_idx)
                && (0..idx.len()).any(|skip| {
                    let face: Vec<&Point> = (0..idx.len()).filter(|&i| i != skip).map(|i| k.vertex(idx[i])).collect();
                    (0..m).any(|c| {
                        let v = &face[0][c];
                        (v.is_zero() || *v == rational::one()) && face.iter().all(|p| p[c] == *v)
                    })
                })
        })
        .ok_or_else(|| Error::pipeline("choose sigma0", "no grid simplex at x0 has a boundary facet"))?;
    let sigma0_idx = k.facets()[sigma0_facet].clone();
    let sigma0 = k.facet_simplex(sigma0_facet);
    let x1_idx = *sigma0_idx.iter().find(|&&v| v != x0_idx).expect("m ≥ 1");

    let mut f1_table = Vec::with_capacity(k.vertices().len());
    for (j, x) in k.vertices().iter().enumerate() {
        let (image, rule) = if sigma0_idx.contains(&j) {
            (x.clone(), F1Rule::InSigma0)
        } else {
            let y = h.eval(x)?;
            if !y.in_unit_cube() {
                return Err(Error::NotSelfMap(j));
            }
            if sigma0.contains_in_interior(&y) {
                (k.vertex(x1_idx).clone(), F1Rule::PushedOut)
            } else {
                (y, F1Rule::Image)
            }
        };
        f1_table.push(F1Entry {
            vertex: x.clone(),
            image,
            rule,
        });
    }
    let f1 = PlMap::interpolate(Arc::clone(&k), f1_table.iter().map(|e| e.image.clone()).collect())?;

    let inv = if m == 1 {
        involution_1d(x0, &sigma0)
    } else {
        involution_2d(&sigma0)?
    };
    let g = BoundaryRoot {
        sigma0_bbox: sigma0.bbox(),
        sigma0: sigma0.clone(),
        backward: inv.forward.iter().map(AffineCell::inverse).collect(),
        forward: inv.forward,
        f1_lipschitz: f1.lipschitz_constant(),
        f1,
    };
    let bound = certified_composition_distance(
        &g,
        h,
        &options.grid_step,
        &CompositionOptions {
            target: Some(eps.clone()),
            max_depth: options.max_depth,
        },
    )?;
    if bound.bound >= *eps {
        return Err(Error::CertificationFailed {
            achieved: rational::format(&bound.bound),
            target: rational::format(eps),
        });
    }
    Ok(SquareApproxResult {
        g,
        eps: eps.clone(),
        bound,
        log: BoundaryLog {
            x0: x0.clone(),
            sigma0: sigma0.vertices().to_vec(),
            delta,
            resolution: r,
            phi: inv.description,
            sigma0_fan: inv.sigma0_fan,
            complement_fan: inv.complement_fan,
            fan_centres: inv.centres,
            f1_table,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::ExprMap;
    use crate::rational::q;

    fn run(h: &ExprMap, x0: Point, eps: Rational, step: Rational) -> SquareApproxResult {
        let opts = BoundaryOptions {
            grid_step: step,
            max_depth: 20,
        };
        boundary_square_approx(h, &h.modulus(), &x0, &eps, &opts).unwrap()
    }

    fn phi_is_involution(g: &BoundaryRoot, pts: impl Iterator<Item = Point>) {
        for x in pts {
            let y = g.phi(&x).unwrap();
            assert!(y.in_unit_cube());
            assert_eq!(g.phi(&y).unwrap(), x, "at {x}");
            // Only the common boundary H stays put.
            if g.sigma0.contains(&x) && g.sigma0.contains(&y) {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn interval_identity() {
        let h = ExprMap::identity(1);
        let res = run(&h, Point::from_ints(&[0], 1), q(1, 4), q(1, 1024));
        assert!(res.bound.bound < q(1, 4));
        phi_is_involution(&res.g, (0..=64).map(|i| Point::from_ints(&[i], 64)));
    }

    #[test]
    fn interval_square_map_and_right_end() {
        let h = ExprMap::parse("x1 * x1", 1).unwrap();
        let res = run(&h, Point::from_ints(&[0], 1), q(1, 4), q(1, 1024));
        assert!(res.bound.bound < q(1, 4));
        let h = ExprMap::parse("1 - (1 - x1)/2", 1).unwrap();
        let res = run(&h, Point::from_ints(&[1], 1), q(1, 4), q(1, 1024));
        assert!(res.bound.bound < q(1, 4));
    }

    #[test]
    fn plane_corner() {
        let h = ExprMap::identity(2);
        let res = run(&h, Point::from_ints(&[0, 0], 1), q(1, 2), q(1, 64));
        assert!(res.bound.bound < q(1, 2));
        let g = &res.g;
        phi_is_involution(g, (0..=12).flat_map(|i| (0..=12).map(move |j| Point::from_ints(&[i, j], 12))));
        // g maps σ0 out and back in.
        let s = &g.sigma0;
        for i in 0..10 {
            for j in 0..10 {
                let x = s.point_at(&[q(1, 1) - q(i + j, 20), q(i, 20), q(j, 20)]);
                assert!(s.contains(&g.eval(&g.eval(&x).unwrap()).unwrap()));
            }
        }
    }

    #[test]
    fn plane_edge_point() {
        let h = ExprMap::parse("x1, 1/2 + (x2 - 1/2)/2", 2).unwrap();
        let res = run(&h, Point::from_ints(&[0, 1], 2), q(1, 2), q(1, 64));
        assert!(res.bound.bound < q(1, 2));
        phi_is_involution(&res.g, (0..=8).flat_map(|i| (0..=8).map(move |j| Point::from_ints(&[i, j], 8))));
    }

    #[test]
    fn preconditions() {
        let h = ExprMap::identity(2);
        let w = h.modulus();
        let o = BoundaryOptions::default();
        assert!(boundary_square_approx(&h, &w, &Point::from_ints(&[1, 1], 2), &q(1, 2), &o).is_err());
        let h = ExprMap::parse("1 - x1", 1).unwrap();
        assert!(boundary_square_approx(&h, &h.modulus(), &Point::from_ints(&[0], 1), &q(1, 2), &o).is_err());
    }
}
