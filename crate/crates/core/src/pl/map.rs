use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::evaluable::{Evaluable, Modulus};
use crate::error::{Error, Result};
use crate::geometry::{linalg, BoundingBox, Point, Simplex, SimplicialComplex};
use crate::rational::{self, Rational};

/// `x ↦ matrix·x + offset` on one top-dimensional simplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffinePiece {
    pub facet: usize,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Vec<Vec<Rational>>,
    pub offset: Point,
}

fn ser_matrix<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(rational::format).collect()).collect();
    rows.serialize(s)
}

impl AffinePiece {
    pub fn apply(&self, x: &Point) -> Point {
        Point::new(linalg::mat_vec(&self.matrix, x.coords()))
            .add(&self.offset)
    }

    /// ∞-operator norm: largest absolute row sum.
    pub fn norm_inf(&self) -> Rational {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|c| c.abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(rational::zero)
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant(self.matrix.clone())
    }
}

/// A continuous map affine on each simplex of `complex`, given by the images
/// of the vertices.
#[derive(Debug, Clone)]
pub struct PlMap {
    complex: Arc<SimplicialComplex>,
    images: Vec<Point>,
    pieces: OnceLock<Vec<Option<AffinePiece>>>,
}

impl PartialEq for PlMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.complex == other.complex
    }
}

impl Serialize for PlMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PlMap", 2)?;
        st.serialize_field("complex", self.complex.as_ref())?;
        st.serialize_field("images", &self.images)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PlMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            complex: SimplicialComplex,
            images: Vec<Point>,
        }
        let raw = Raw::deserialize(d)?;
        PlMap::interpolate(Arc::new(raw.complex), raw.images).map_err(serde::de::Error::custom)
    }
}

impl PlMap {
    /// The map `Σ α_i x_i ↦ Σ α_i y_i`.
    pub fn interpolate(complex: Arc<SimplicialComplex>, images: Vec<Point>) -> Result<Self> {
        if images.len() != complex.vertices().len() {
            return Err(Error::TableLength {
                expected: complex.vertices().len(),
                got: images.len(),
            });
        }
        if let Some(y) = images.iter().find(|y| y.dim() != complex.dim()) {
            return Err(Error::DimensionMismatch {
                expected: complex.dim(),
                got: y.dim(),
            });
        }
        Ok(PlMap {
            complex,
            images,
            pieces: OnceLock::new(),
        })
    }

    /// Like [`PlMap::interpolate`], but every image must lie in `[0,1]^m`.
    pub fn self_map_of_cube(complex: Arc<SimplicialComplex>, images: Vec<Point>) -> Result<Self> {
        if let Some(j) = images.iter().position(|y| !y.in_unit_cube()) {
            return Err(Error::NotSelfMap(j));
        }
        Self::interpolate(complex, images)
    }

    pub fn identity(complex: Arc<SimplicialComplex>) -> Self {
        let images = complex.vertices().to_vec();
        PlMap {
            complex,
            images,
            pieces: OnceLock::new(),
        }
    }

    /// Same complex, new vertex images.
    pub fn with_images(&self, images: Vec<Point>) -> Result<Self> {
        Self::interpolate(Arc::clone(&self.complex), images)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        let (f, coords) = self.complex.containing_facet(x).ok_or(Error::OutsideCarrier)?;
        let ys: Vec<Point> = self.complex.facets()[f].iter().map(|&v| self.images[v].clone()).collect();
        Ok(Point::combination(&ys, &coords.0))
    }

    fn pieces(&self) -> &[Option<AffinePiece>] {
        self.pieces.get_or_init(|| {
            let k = &self.complex;
            (0..k.facets().len())
                .map(|f| (k.facets()[f].len() == k.dim() + 1).then(|| self.solve_piece(f)))
                .collect()
        })
    }

    fn solve_piece(&self, f: usize) -> AffinePiece {
        let idx = &self.complex.facets()[f];
        let m = self.dim();
        let x0 = self.complex.vertex(idx[0]);
        let y0 = &self.images[idx[0]];
        // Columns x_i - x_0 and y_i - y_0; A = Y X^{-1}.
        let dx: Vec<Point> = idx[1..].iter().map(|&v| self.complex.vertex(v).sub(x0)).collect();
        let dy: Vec<Point> = idx[1..].iter().map(|&v| self.images[v].sub(y0)).collect();
        let xm: Vec<Vec<Rational>> = (0..m).map(|r| dx.iter().map(|c| c[r].clone()).collect()).collect();
        let ym: Vec<Vec<Rational>> = (0..m).map(|r| dy.iter().map(|c| c[r].clone()).collect()).collect();
        let inv = linalg::inverse(&xm).expect("facets are non-degenerate");
        let matrix = linalg::mat_mul(&ym, &inv);
        let offset = y0.sub(&Point::new(linalg::mat_vec(&matrix, x0.coords())));
        AffinePiece { facet: f, matrix, offset }
    }

    /// The affine piece on top-dimensional facet `f`.
    pub fn affine_piece(&self, f: usize) -> Result<&AffinePiece> {
        self.pieces()
            .get(f)
            .and_then(Option::as_ref)
            .ok_or(Error::SimplexNotInComplex)
    }

    pub fn affine_piece_of(&self, sigma: &Simplex) -> Result<&AffinePiece> {
        let idx = self.complex.find_simplex(sigma).ok_or(Error::SimplexNotInComplex)?;
        let f = self.facet_index(&idx).ok_or(Error::SimplexNotInComplex)?;
        self.affine_piece(f)
    }

    pub fn facet_index(&self, idx: &[usize]) -> Option<usize> {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.complex.facets().iter().position(|f| *f == s)
    }

    /// Largest ∞-operator norm over the pieces.
    pub fn lipschitz_constant(&self) -> Rational {
        self.pieces()
            .iter()
            .flatten()
            .map(AffinePiece::norm_inf)
            .max()
            .unwrap_or_else(rational::zero)
    }

    /// Largest piece norm among pieces that may meet `b`; a Lipschitz
    /// constant for the map restricted to the convex set `b ∩ |K|`.
    pub fn lipschitz_on(&self, b: &BoundingBox) -> Rational {
        let pieces = self.pieces();
        self.complex
            .index()
            .overlapping(b)
            .into_iter()
            .filter_map(|f| pieces[f].as_ref())
            .map(AffinePiece::norm_inf)
            .max()
            .unwrap_or_else(rational::zero)
    }

    /// Whether the piece on facet `f` is injective (image vertices independent).
    pub fn restriction_injective(&self, f: usize) -> Result<bool> {
        let idx = self.complex.facets().get(f).ok_or(Error::SimplexNotInComplex)?;
        if idx.len() != self.dim() + 1 {
            return Err(Error::SimplexNotInComplex);
        }
        // The piece is injective iff the image vertices are independent.
        let y0 = &self.images[idx[0]];
        let dy: Vec<Vec<Rational>> = idx[1..].iter().map(|&v| self.images[v].sub(y0).0).collect();
        Ok(!linalg::determinant(dy).is_zero())
    }

    pub fn image_simplex(&self, f: usize) -> Result<Simplex> {
        if !self.restriction_injective(f)? {
            return Err(Error::NonInjectivePiece);
        }
        Ok(Simplex::new(self.complex.facets()[f].iter().map(|&v| self.images[v].clone()).collect())
            .expect("injective pieces map onto simplices"))
    }

    /// Exact `sup ‖f − g‖∞`: the difference is affine per simplex, so the
    /// maximum sits at a vertex.
    pub fn sup_distance_vertices(&self, other: &PlMap) -> Result<Rational> {
        if !Arc::ptr_eq(&self.complex, &other.complex) && self.complex != other.complex {
            return Err(Error::ComplexMismatch);
        }
        Ok(self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.dist_inf(b))
            .max()
            .unwrap_or_else(rational::zero))
    }

    /// Certified `sup ‖f − h‖∞ ≤ max_j ‖f(x_j) − h(x_j)‖∞ + 2·ω(mesh)`.
    pub fn sup_distance_to_function(&self, h: &dyn Evaluable, omega: &Modulus) -> Result<Rational> {
        let mut worst = rational::zero();
        for (x, y) in self.complex.vertices().iter().zip(&self.images) {
            let d = y.dist_inf(&h.eval(x)?);
            if d > worst {
                worst = d;
            }
        }
        let mesh = self.complex.mesh()?;
        Ok(worst + rational::int(2) * omega.apply(&mesh))
    }
}

impl Evaluable for PlMap {
    fn dim(&self) -> usize {
        self.complex.dim()
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        self.evaluate(x)
    }

    fn lipschitz_on(&self, b: &BoundingBox) -> Rational {
        PlMap::lipschitz_on(self, b)
    }
}
