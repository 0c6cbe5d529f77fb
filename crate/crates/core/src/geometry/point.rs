use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

/// A point of `R^m` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(#[serde(with = "rational::serde_vec")] pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn origin(m: usize) -> Self {
        Point(vec![rational::zero(); m])
    }

    /// Convenience for tests and examples: `(n_i / d)`.
    pub fn from_ints(nums: &[i64], d: i64) -> Self {
        Point(nums.iter().map(|&n| rational::q(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `(1 - t)·self + t·other`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        self.add(&other.sub(self).scale(t))
    }

    pub fn norm_inf(&self) -> Rational {
        self.0
            .iter()
            .map(rational::abs)
            .max()
            .unwrap_or_else(rational::zero)
    }

    pub fn dist_inf(&self, other: &Point) -> Rational {
        self.sub(other).norm_inf()
    }

    /// Centroid of a non-empty point list.
    pub fn centroid(points: &[Point]) -> Point {
        let m = points[0].dim();
        let mut sum = Point::origin(m);
        for p in points {
            sum = sum.add(p);
        }
        sum.scale(&rational::q(1, points.len() as i64))
    }

    /// Convex combination `Σ w_i p_i`.
    pub fn combination(points: &[Point], weights: &[Rational]) -> Point {
        let m = points[0].dim();
        let mut out = vec![rational::zero(); m];
        for (p, w) in points.iter().zip(weights) {
            for (o, c) in out.iter_mut().zip(&p.0) {
                *o += c * w;
            }
        }
        Point(out)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }

    pub fn in_unit_cube(&self) -> bool {
        self.0.iter().all(|c| *c >= rational::zero() && *c <= rational::one())
    }
}

impl Index<usize> for Point {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A closed axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Point,
    pub hi: Point,
}

impl BoundingBox {
    pub fn unit(m: usize) -> Self {
        BoundingBox {
            lo: Point::origin(m),
            hi: Point(vec![rational::one(); m]),
        }
    }

    pub fn of(points: &[Point]) -> Self {
        let m = points[0].dim();
        let mut lo = points[0].clone();
        let mut hi = points[0].clone();
        for p in &points[1..] {
            for i in 0..m {
                if p[i] < lo[i] {
                    lo.0[i] = p[i].clone();
                }
                if p[i] > hi[i] {
                    hi.0[i] = p[i].clone();
                }
            }
        }
        BoundingBox { lo, hi }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..p.dim()).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }

    pub fn intersects(&self, other: &BoundingBox) -> bool {
        (0..self.lo.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    pub fn center(&self) -> Point {
        self.lo.lerp(&self.hi, &rational::q(1, 2))
    }

    /// The box grown by `r` on every side.
    pub fn inflate(&self, r: &Rational) -> BoundingBox {
        BoundingBox {
            lo: Point(self.lo.0.iter().map(|c| c - r).collect()),
            hi: Point(self.hi.0.iter().map(|c| c + r).collect()),
        }
    }

    /// Intersection with `[0,1]^m`; `None` if empty.
    pub fn clip_unit(&self) -> Option<BoundingBox> {
        let zero = rational::zero();
        let one = rational::one();
        let lo = Point(self.lo.0.iter().map(|c| c.clone().max(zero.clone())).collect());
        let hi = Point(self.hi.0.iter().map(|c| c.clone().min(one.clone())).collect());
        (0..lo.dim()).all(|i| lo[i] <= hi[i]).then_some(BoundingBox { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn norm_and_distance_use_max_coordinate() {
        let a = Point::from_ints(&[1, -3], 4);
        assert_eq!(a.norm_inf(), q(3, 4));
        assert_eq!(a.dist_inf(&Point::origin(2)), q(3, 4));
    }

    #[test]
    fn serializes_as_rational_strings() {
        let p = Point::from_ints(&[1, 2], 4);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["1/4","1/2"]"#);
        assert_eq!(serde_json::from_str::<Point>(&s).unwrap(), p);
    }

    #[test]
    fn centroid_of_triangle() {
        let pts = [
            Point::from_ints(&[0, 0], 1),
            Point::from_ints(&[1, 0], 1),
            Point::from_ints(&[0, 1], 1),
        ];
        assert_eq!(Point::centroid(&pts), Point::from_ints(&[1, 1], 3));
    }
}
