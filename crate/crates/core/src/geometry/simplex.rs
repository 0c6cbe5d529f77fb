use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use super::point::{BoundingBox, Point};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Whether the difference vectors `x_i - x_0` are linearly independent.
/// Any single point is independent; the empty list is too.
pub fn is_geometrically_independent(points: &[Point]) -> Result<bool> {
    let Some(first) = points.first() else {
        return Ok(true);
    };
    let m = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: p.dim(),
        });
    }
    if points.len() > m + 1 {
        return Ok(false);
    }
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(first).0).collect();
    if diffs.len() == m {
        return Ok(!linalg::determinant(diffs).is_zero());
    }
    Ok(linalg::rank(&diffs) == points.len() - 1)
}

/// The convex hull of `k + 1` geometrically independent points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<Point>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Point> {
    fn from(s: Simplex) -> Self {
        s.vertices
    }
}

/// Barycentric coefficients `α_0..α_k` with `Σ α_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BarycentricCoords(#[serde(with = "rational::serde_vec")] pub Vec<Rational>);

impl BarycentricCoords {
    pub fn is_inside(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|a| a.is_positive())
    }

    /// Indices with a strictly positive coefficient: the open face holding the point.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_positive()).collect()
    }
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() || !is_geometrically_independent(&vertices)? {
            return Err(Error::DegenerateSimplex);
        }
        Ok(Simplex { vertices })
    }

    /// Skips the independence check; callers guarantee it by construction.
    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(is_geometrically_independent(&vertices).unwrap_or(false));
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// `k` for a `k`-simplex.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn barycenter(&self) -> Point {
        Point::centroid(&self.vertices)
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::of(&self.vertices)
    }

    /// Coordinates of `x` if it lies in the affine hull.
    pub fn barycentric_coordinates(&self, x: &Point) -> Option<BarycentricCoords> {
        if x.dim() != self.ambient_dim() {
            return None;
        }
        let x0 = &self.vertices[0];
        let k = self.dim();
        let m = self.ambient_dim();
        // Solve Σ_{i≥1} α_i (x_i - x_0) = x - x_0.
        let diffs: Vec<Point> = self.vertices[1..].iter().map(|v| v.sub(x0)).collect();
        let a: Vec<Vec<Rational>> = (0..m)
            .map(|row| diffs.iter().map(|d| d[row].clone()).collect())
            .collect();
        let rhs = x.sub(x0).0;
        let tail = if k == 0 {
            (x == x0).then(Vec::new)?
        } else {
            linalg::solve(&a, &rhs)?
        };
        let head = rational::one() - tail.iter().sum::<Rational>();
        let mut coords = Vec::with_capacity(k + 1);
        coords.push(head);
        coords.extend(tail);
        Some(BarycentricCoords(coords))
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.barycentric_coordinates(x).is_some_and(|c| c.is_inside())
    }

    pub fn contains_in_interior(&self, x: &Point) -> bool {
        self.barycentric_coordinates(x).is_some_and(|c| c.is_interior())
    }

    pub fn point_at(&self, coords: &[Rational]) -> Point {
        Point::combination(&self.vertices, coords)
    }

    /// ∞-norm diameter, attained at a pair of vertices.
    pub fn diameter(&self) -> Rational {
        let mut best = rational::zero();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let d = self.vertices[i].dist_inf(&self.vertices[j]);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// `k`-volume for a full-dimensional simplex (`k = m`), else zero.
    pub fn volume(&self) -> Rational {
        let m = self.ambient_dim();
        if self.dim() != m {
            return rational::zero();
        }
        self.signed_determinant().abs() / factorial(m)
    }

    /// `det[x_1 - x_0, …, x_m - x_0]`, for full-dimensional simplices.
    pub fn signed_determinant(&self) -> Rational {
        let x0 = &self.vertices[0];
        let rows: Vec<Vec<Rational>> = self.vertices[1..].iter().map(|v| v.sub(x0).0).collect();
        linalg::determinant(rows)
    }

    /// The face spanned by the given vertex positions.
    pub fn face(&self, indices: &[usize]) -> Simplex {
        Simplex {
            vertices: indices.iter().map(|&i| self.vertices[i].clone()).collect(),
        }
    }

    /// Every non-empty face, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.vertices.len();
        (1u32..(1 << n))
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                self.face(&idx)
            })
            .collect()
    }
}

pub(crate) fn factorial(m: usize) -> Rational {
    rational::int((1..=m as i64).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c, 1)
    }

    fn unit_triangle() -> Simplex {
        Simplex::new(vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]).unwrap()
    }

    #[test]
    fn independence_examples() {
        assert!(is_geometrically_independent(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]).unwrap());
        assert!(!is_geometrically_independent(&[p(&[0, 0]), p(&[1, 1]), p(&[2, 2])]).unwrap());
        assert!(is_geometrically_independent(&[p(&[3, 4])]).unwrap());
        assert!(matches!(
            is_geometrically_independent(&[p(&[0, 0]), p(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn barycentric_examples() {
        let edge = Simplex::new(vec![p(&[0, 0]), p(&[2, 0])]).unwrap();
        let c = edge.barycentric_coordinates(&p(&[1, 0])).unwrap();
        assert_eq!(c.0, vec![q(1, 2), q(1, 2)]);
        assert!(edge.barycentric_coordinates(&p(&[1, 1])).is_none());

        let t = unit_triangle();
        assert_eq!(
            t.barycentric_coordinates(&p(&[1, 0])).unwrap().0,
            vec![q(0, 1), q(1, 1), q(0, 1)]
        );
        let c = t.barycentric_coordinates(&t.barycenter()).unwrap();
        assert!(c.0.iter().all(|a| *a == q(1, 3)));
    }

    #[test]
    fn volume_diameter_faces() {
        let t = unit_triangle();
        assert_eq!(t.volume(), q(1, 2));
        assert_eq!(t.diameter(), q(1, 1));
        assert_eq!(t.faces().len(), 7);
        assert!(Simplex::new(vec![p(&[0, 0]), p(&[0, 0])]).is_err());
    }
}
