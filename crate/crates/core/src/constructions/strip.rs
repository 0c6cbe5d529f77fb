//! The strip-rotation approximation of `f(x, y) = (1 − x, 1/2)` on `I²`.
//!
//! `f` has no continuous square root, yet `g = g1∘g2` (squash `I²` onto the
//! strip `I × [1/2 − ε/2, 1/2 + ε/2]`, then rotate the strip a quarter turn
//! with rescaling) has `ρ(f, g²) = ε/2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};
use crate::pl::{AffinePiece, Evaluable};
use crate::rational::{self, q, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct StripPiece {
    #[serde(with = "rational::serde_str")]
    pub y_lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub y_hi: Rational,
    /// `g²` on `I × [y_lo, y_hi]`.
    pub g_squared: AffinePiece,
}

#[derive(Debug, Clone, Serialize)]
pub struct StripExample {
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    pub pieces: Vec<StripPiece>,
    /// Exact `sup ‖f − g²‖∞` over `I²`.
    #[serde(with = "rational::serde_str")]
    pub sup: Rational,
}

/// The map `g`; evaluable and Lipschitz with constant `1/ε`.
#[derive(Debug, Clone)]
pub struct StripMap {
    eps: Rational,
}

impl StripMap {
    pub fn new(eps: Rational) -> Result<Self> {
        if eps <= rational::zero() || eps >= q(1, 2) {
            return Err(Error::Precondition(format!("eps must lie in (0, 1/2), got {}", rational::format(&eps))));
        }
        Ok(StripMap { eps })
    }

    fn band(&self) -> (Rational, Rational) {
        let half = q(1, 2);
        let e2 = &self.eps / rational::int(2);
        (&half - &e2, half + e2)
    }

    /// Clamp `y` into the strip.
    pub fn g2(&self, x: &Point) -> Point {
        let (lo, hi) = self.band();
        let y = x[1].clone().max(lo).min(hi);
        Point::new(vec![x[0].clone(), y])
    }

    /// `g1(x, y) = (1/2 + (2y − 1)/(2ε), 1/2 − ε(2x − 1)/2)`.
    pub fn g1(&self, x: &Point) -> Point {
        let half = q(1, 2);
        let two = rational::int(2);
        let u = &half + (&two * &x[1] - rational::one()) / (&two * &self.eps);
        let v = &half - &self.eps * (&two * &x[0] - rational::one()) / &two;
        Point::new(vec![u, v])
    }

    pub fn g(&self, x: &Point) -> Point {
        self.g1(&self.g2(x))
    }
}

impl Evaluable for StripMap {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        if x.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: x.dim() });
        }
        Ok(self.g(x))
    }

    fn lipschitz_on(&self, _b: &BoundingBox) -> Rational {
        rational::one() / &self.eps
    }
}

/// The target `f(x, y) = (1 − x, 1/2)`.
pub fn strip_target(x: &Point) -> Point {
    Point::new(vec![rational::one() - &x[0], q(1, 2)])
}

pub fn strip_rotation_example(eps: &Rational) -> Result<(StripMap, StripExample)> {
    let g = StripMap::new(eps.clone())?;
    let (lo, hi) = g.band();
    let (z, o) = (rational::zero(), rational::one());
    let neg = -rational::one();
    let piece = |facet, matrix, offset: Vec<Rational>| AffinePiece {
        facet,
        matrix,
        offset: Point::new(offset),
    };
    let pieces = vec![
        StripPiece {
            y_lo: z.clone(),
            y_hi: lo.clone(),
            g_squared: piece(0, vec![vec![neg.clone(), z.clone()], vec![z.clone(), z.clone()]], vec![o.clone(), hi.clone()]),
        },
        StripPiece {
            y_lo: lo.clone(),
            y_hi: hi.clone(),
            g_squared: piece(1, vec![vec![neg.clone(), z.clone()], vec![z.clone(), neg.clone()]], vec![o.clone(), o.clone()]),
        },
        StripPiece {
            y_lo: hi.clone(),
            y_hi: o.clone(),
            g_squared: piece(2, vec![vec![neg, z.clone()], vec![z.clone(), z.clone()]], vec![o.clone(), lo]),
        },
    ];
    // Each difference f − g² is affine on its rectangle, so its ∞-norm peaks at a corner.
    let sup = pieces
        .iter()
        .flat_map(|p| {
            [&z, &o].into_iter().flat_map(move |x| {
                [&p.y_lo, &p.y_hi].into_iter().map(move |y| {
                    let pt = Point::new(vec![x.clone(), y.clone()]);
                    p.g_squared.apply(&pt).dist_inf(&strip_target(&pt))
                })
            })
        })
        .max()
        .expect("three pieces");
    Ok((
        g,
        StripExample {
            eps: eps.clone(),
            pieces,
            sup,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_is_half_eps() {
        for (n, d) in [(1, 4), (1, 10), (49, 100)] {
            let eps = q(n, d);
            let (_, ex) = strip_rotation_example(&eps).unwrap();
            assert_eq!(ex.sup, &eps / rational::int(2));
        }
    }

    #[test]
    fn formula_matches_composition() {
        let (g, ex) = strip_rotation_example(&q(1, 4)).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let x = Point::from_ints(&[i, j], 20);
                let gg = g.g(&g.g(&x));
                let p = ex
                    .pieces
                    .iter()
                    .find(|p| p.y_lo <= x[1] && x[1] <= p.y_hi)
                    .unwrap();
                assert_eq!(gg, p.g_squared.apply(&x), "at {x}");
            }
        }
    }

    #[test]
    fn centre_line_and_fixed_point() {
        let (g, _) = strip_rotation_example(&q(1, 4)).unwrap();
        let c = Point::from_ints(&[1, 1], 2);
        assert_eq!(g.g1(&c), c);
        for i in 0..=7 {
            let x = Point::new(vec![q(i, 7), q(1, 2)]);
            assert_eq!(g.g(&g.g(&x)), strip_target(&x));
        }
    }

    #[test]
    fn maps_into_the_strip() {
        let (g, _) = strip_rotation_example(&q(1, 3)).unwrap();
        for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let y = g.g(&Point::from_ints(&[i, j], 1));
            assert!(y.in_unit_cube());
            assert!(y[1] >= q(1, 3) && y[1] <= q(2, 3));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(strip_rotation_example(&q(1, 2)).is_err());
        assert!(strip_rotation_example(&q(0, 1)).is_err());
    }
}
