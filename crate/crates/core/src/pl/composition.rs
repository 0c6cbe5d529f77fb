//! Certified upper bounds on `sup_{I^m} ‖g(g(x)) − h(x)‖∞` without forming `g∘g`.

use serde::Serialize;

use super::evaluable::Evaluable;
use crate::error::Result;
use crate::geometry::{BoundingBox, Point};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct CompositionOptions {
    /// Split any cell whose bound is not below this target.
    pub target: Option<Rational>,
    /// Maximum number of halvings below the initial grid.
    pub max_depth: u32,
}

impl Default for CompositionOptions {
    fn default() -> Self {
        Self {
            target: None,
            max_depth: 12,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositionBound {
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    /// Largest pointwise error seen at a cell centre (a lower bound on the sup).
    #[serde(with = "rational::serde_str")]
    pub sampled_max: Rational,
    pub cells: usize,
}

/// Covers `I^m` by cubes of side `grid_step` (refined adaptively towards
/// `options.target`). On a cube `B1` with centre `c` and half-side `s/2`:
///
/// `‖g(g(x)) − h(x)‖ ≤ ‖g(g(c)) − h(c)‖ + (L_g(B2)·L_g(B1) + L_h(B1))·s/2`
///
/// where `B2` is the cube of radius `L_g(B1)·s/2` about `g(c)`, clipped to
/// `I^m`, which contains `g(B1)` because `g` is a self-map. Sound whenever the
/// Lipschitz bounds reported by `g` and `h` are.
pub fn certified_composition_distance(
    g: &dyn Evaluable,
    h: &dyn Evaluable,
    grid_step: &Rational,
    options: &CompositionOptions,
) -> Result<CompositionBound> {
    let m = g.dim();
    let n = (rational::one() / grid_step).ceil().to_integer();
    let n: usize = n.try_into().unwrap_or(usize::MAX);
    let side = rational::q(1, n as i64);
    let mut out = CompositionBound {
        bound: rational::zero(),
        sampled_max: rational::zero(),
        cells: 0,
    };
    let mut stack: Vec<(BoundingBox, u32)> = Vec::new();
    for cell in 0..n.pow(m as u32) {
        let mut lo = Vec::with_capacity(m);
        let mut c = cell;
        for _ in 0..m {
            lo.push(rational::int((c % n) as i64) * &side);
            c /= n;
        }
        lo.reverse();
        let lo = Point::new(lo);
        let hi = Point::new(lo.coords().iter().map(|v| v + &side).collect());
        stack.push((BoundingBox { lo, hi }, 0));
        while let Some((cell, depth)) = stack.pop() {
            let bound = cell_bound(g, h, &cell, &mut out.sampled_max)?;
            let refine = options.target.as_ref().is_some_and(|t| bound >= *t) && depth < options.max_depth;
            if refine {
                stack.extend(split(&cell).into_iter().map(|b| (b, depth + 1)));
            } else {
                out.cells += 1;
                if bound > out.bound {
                    out.bound = bound;
                }
            }
        }
    }
    Ok(out)
}

fn cell_bound(g: &dyn Evaluable, h: &dyn Evaluable, cell: &BoundingBox, sampled: &mut Rational) -> Result<Rational> {
    let c = cell.center();
    let r = (&cell.hi[0] - &cell.lo[0]) / rational::int(2);
    let gc = g.eval(&c)?;
    let err = g.eval(&gc)?.dist_inf(&h.eval(&c)?);
    if err > *sampled {
        *sampled = err.clone();
    }
    let lg1 = g.lipschitz_on(cell);
    let reach = &lg1 * &r;
    let b2 = BoundingBox { lo: gc.clone(), hi: gc }
        .inflate(&reach)
        .clip_unit()
        .expect("g maps into the unit cube");
    let lg2 = g.lipschitz_on(&b2);
    Ok(err + (lg2 * lg1 + h.lipschitz_on(cell)) * r)
}

fn split(b: &BoundingBox) -> Vec<BoundingBox> {
    let mid = b.center();
    let m = mid.dim();
    (0..1usize << m)
        .map(|mask| {
            let mut lo = b.lo.clone();
            let mut hi = mid.clone();
            for i in 0..m {
                if mask & (1 << i) != 0 {
                    lo.0[i] = mid[i].clone();
                    hi.0[i] = b.hi[i].clone();
                }
            }
            BoundingBox { lo, hi }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::{evaluable::FnMap, expr::ExprMap};
    use crate::rational::q;

    #[test]
    fn identity_squares_to_identity() {
        let id = ExprMap::identity(2);
        let b = certified_composition_distance(&id, &id, &q(1, 8), &CompositionOptions::default()).unwrap();
        assert_eq!(b.sampled_max, q(0, 1));
        assert!(b.bound <= q(2, 8));
    }

    #[test]
    fn constants() {
        let c = Point::from_ints(&[1, 1], 3);
        let g = FnMap::new(2, q(0, 1), move |_| c.clone());
        let h = ExprMap::parse("1/3, 1/3", 2).unwrap();
        let b = certified_composition_distance(&g, &h, &q(1, 4), &CompositionOptions::default()).unwrap();
        assert_eq!(b.bound, q(0, 1));
    }

    #[test]
    fn adaptive_refinement_reaches_target() {
        // g(x) = x/2 + 1/4 has g∘g(x) = x/4 + 3/8; compare with h = x/4 + 3/8 + 1/100.
        let g = ExprMap::parse("x1/2 + 1/4", 1).unwrap();
        let h = ExprMap::parse("x1/4 + 3/8 + 1/100", 1).unwrap();
        let opts = CompositionOptions {
            target: Some(q(1, 50)),
            max_depth: 10,
        };
        let b = certified_composition_distance(&g, &h, &q(1, 2), &opts).unwrap();
        assert!(b.bound < q(1, 50));
        assert!(b.bound >= q(1, 100));
    }
}
