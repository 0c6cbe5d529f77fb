use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::feasibility;
use super::locate::BucketIndex;
use super::point::{BoundingBox, Point};
use super::simplex::{is_geometrically_independent, BarycentricCoords, Simplex};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A finite simplicial complex in `R^dim`.
///
/// Stored as a deduplicated vertex table plus its maximal simplices (facets),
/// each a sorted list of vertex indices; the complex is the face closure of
/// the facets, so it is face-closed by construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawComplex", into = "RawComplex")]
pub struct SimplicialComplex {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Vec<usize>>,
    index: OnceLock<BucketIndex>,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    dim: usize,
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
}

impl TryFrom<RawComplex> for SimplicialComplex {
    type Error = Error;

    fn try_from(raw: RawComplex) -> Result<Self> {
        SimplicialComplex::new(raw.dim, raw.vertices, raw.simplices)
    }
}

impl From<SimplicialComplex> for RawComplex {
    fn from(k: SimplicialComplex) -> Self {
        RawComplex {
            dim: k.dim,
            vertices: k.vertices,
            simplices: k.facets,
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Validates dimensions, indices and independence; merges duplicate
    /// vertices and keeps only the maximal simplices.
    pub fn new(dim: usize, vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(p) = vertices.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        let mut table = Vec::new();
        let mut seen: HashMap<Point, usize> = HashMap::new();
        let remap: Vec<usize> = vertices
            .into_iter()
            .map(|p| {
                let next = table.len();
                *seen.entry(p.clone()).or_insert_with(|| {
                    table.push(p);
                    next
                })
            })
            .collect();
        let mut cleaned = Vec::with_capacity(simplices.len());
        for s in simplices {
            let mut idx = Vec::with_capacity(s.len());
            for i in s {
                let &j = remap.get(i).ok_or_else(|| {
                    Error::Precondition(format!("simplex refers to missing vertex {i}"))
                })?;
                idx.push(j);
            }
            idx.sort_unstable();
            idx.dedup();
            let pts: Vec<Point> = idx.iter().map(|&i| table[i].clone()).collect();
            if idx.is_empty() || !is_geometrically_independent(&pts)? {
                return Err(Error::DegenerateSimplex);
            }
            cleaned.push(idx);
        }
        Ok(Self::from_facets_unchecked(dim, table, maximal(cleaned)))
    }

    /// Trusts the caller: distinct vertices, sorted independent facets, none a
    /// face of another.
    pub(crate) fn from_facets_unchecked(dim: usize, vertices: Vec<Point>, facets: Vec<Vec<usize>>) -> Self {
        SimplicialComplex {
            dim,
            vertices,
            facets,
            index: OnceLock::new(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self::from_facets_unchecked(dim, Vec::new(), Vec::new())
    }

    /// The complex generated by the given simplices.
    pub fn from_simplices(dim: usize, simplices: &[Simplex]) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut idx = Vec::new();
        for s in simplices {
            let start = vertices.len();
            vertices.extend(s.vertices().iter().cloned());
            idx.push((start..vertices.len()).collect());
        }
        Self::new(dim, vertices, idx)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Maximal simplices as sorted vertex-index lists.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn simplex(&self, idx: &[usize]) -> Simplex {
        Simplex::new_unchecked(idx.iter().map(|&i| self.vertices[i].clone()).collect())
    }

    pub fn facet_simplex(&self, f: usize) -> Simplex {
        self.simplex(&self.facets[f])
    }

    /// Indices of the facets of full dimension `dim`.
    pub fn top_facets(&self) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| self.facets[f].len() == self.dim + 1)
            .collect()
    }

    /// Every simplex of the complex (the face closure), as sorted index lists.
    pub fn all_simplices(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for face in subsets(f) {
                out.insert(face);
            }
        }
        out
    }

    pub fn contains_simplex(&self, idx: &[usize]) -> bool {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.facets.iter().any(|f| is_subset(&s, f))
    }

    /// Sorted vertex indices of `σ` if it is a simplex of the complex.
    pub fn find_simplex(&self, sigma: &Simplex) -> Option<Vec<usize>> {
        let mut idx = sigma
            .vertices()
            .iter()
            .map(|p| self.vertex_index(p))
            .collect::<Option<Vec<_>>>()?;
        idx.sort_unstable();
        self.contains_simplex(&idx).then_some(idx)
    }

    /// Total `dim`-volume of the top-dimensional facets.
    pub fn volume(&self) -> Rational {
        self.top_facets()
            .into_iter()
            .map(|f| self.facet_simplex(f).volume())
            .sum()
    }

    /// Largest ∞-norm diameter of a simplex (facets dominate their faces).
    pub fn mesh(&self) -> Result<Rational> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(self
            .facets
            .iter()
            .map(|f| self.simplex(f).diameter())
            .max()
            .unwrap_or_else(rational::zero))
    }

    pub fn bbox(&self) -> Option<BoundingBox> {
        (!self.vertices.is_empty()).then(|| BoundingBox::of(&self.vertices))
    }

    pub(crate) fn index(&self) -> &BucketIndex {
        self.index.get_or_init(|| BucketIndex::build(self))
    }

    /// A facet containing `x` with the coordinates of `x` in it.
    pub fn containing_facet(&self, x: &Point) -> Option<(usize, BarycentricCoords)> {
        if x.dim() != self.dim || self.is_empty() {
            return None;
        }
        self.index().candidates(x).iter().find_map(|&f| {
            let c = self.facet_simplex(f).barycentric_coordinates(x)?;
            c.is_inside().then_some((f, c))
        })
    }

    /// The unique simplex whose open face contains `x`, as sorted vertex indices.
    pub fn locate(&self, x: &Point) -> Result<Vec<usize>> {
        let (f, coords) = self.containing_facet(x).ok_or(Error::OutsideCarrier)?;
        Ok(coords.support().into_iter().map(|i| self.facets[f][i]).collect())
    }

    pub fn locate_simplex(&self, x: &Point) -> Result<Simplex> {
        self.locate(x).map(|idx| self.simplex(&idx))
    }

    /// Facet indices of the top-dimensional simplices meeting `σ0` (including
    /// `σ0` itself when it is one). In a proper complex two simplices meet iff
    /// they share a vertex.
    pub fn star(&self, sigma0: &[usize]) -> Result<Vec<usize>> {
        if !self.contains_simplex(sigma0) {
            return Err(Error::SimplexNotInComplex);
        }
        let marks: HashSet<usize> = sigma0.iter().copied().collect();
        Ok(self
            .top_facets()
            .into_iter()
            .filter(|&f| self.facets[f].iter().any(|v| marks.contains(v)))
            .collect())
    }

    /// Inserts `z` as a new vertex: every facet containing the open face of `z`
    /// is split by replacing, in turn, each vertex of that face with `z`.
    pub fn stellar_subdivision(&self, z: &Point) -> Result<SimplicialComplex> {
        let face = self.locate(z)?;
        if face.len() == 1 {
            return Err(Error::InvalidInsertion("point is already a vertex".into()));
        }
        let mut vertices = self.vertices.clone();
        let zi = vertices.len();
        vertices.push(z.clone());
        let mut facets = Vec::with_capacity(self.facets.len() + face.len());
        for f in &self.facets {
            if is_subset(&face, f) {
                for v in &face {
                    let mut g: Vec<usize> = f.iter().map(|&w| if w == *v { zi } else { w }).collect();
                    g.sort_unstable();
                    facets.push(g);
                }
            } else {
                facets.push(f.clone());
            }
        }
        Ok(SimplicialComplex::from_facets_unchecked(self.dim, vertices, facets))
    }

    /// The subcomplex generated by the chosen facets, with vertices renumbered.
    pub fn subcomplex(&self, facet_ids: &[usize]) -> SimplicialComplex {
        let mut remap = HashMap::new();
        let mut vertices = Vec::new();
        let mut facets = Vec::with_capacity(facet_ids.len());
        for &f in facet_ids {
            let g: Vec<usize> = self.facets[f]
                .iter()
                .map(|&v| {
                    *remap.entry(v).or_insert_with(|| {
                        vertices.push(self.vertices[v].clone());
                        vertices.len() - 1
                    })
                })
                .collect();
            let mut g = g;
            g.sort_unstable();
            facets.push(g);
        }
        SimplicialComplex::from_facets_unchecked(self.dim, vertices, facets)
    }

    /// Checks that any two facets meet in a common face or not at all.
    /// Candidate pairs come from the bucket index, so cost is near-linear for
    /// well-shaped complexes.
    pub fn validate(&self) -> Result<()> {
        let index = self.index();
        for (a, fa) in self.facets.iter().enumerate() {
            let sa = self.simplex(fa);
            for b in index.overlapping(&sa.bbox()) {
                if b <= a {
                    continue;
                }
                let fb = &self.facets[b];
                let common: Vec<usize> = fa.iter().filter(|v| fb.contains(v)).copied().collect();
                if !feasibility::meet_properly(self, fa, fb, &common) {
                    return Err(Error::Precondition(format!(
                        "simplices {fa:?} and {fb:?} do not meet in a common face"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All non-empty subsets of a sorted index list.
pub(crate) fn subsets(f: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1u32..(1 << f.len())).map(move |mask| {
        (0..f.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| f[i])
            .collect()
    })
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Drops duplicates and proper faces, keeping first occurrences in order so
/// facet indices survive a serialization round trip.
fn maximal(mut simplices: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    simplices.retain(|s| seen.insert(s.clone()));
    let mut proper_faces = HashSet::new();
    for s in &simplices {
        for f in subsets(s) {
            if f.len() < s.len() {
                proper_faces.insert(f);
            }
        }
    }
    simplices.retain(|s| !proper_faces.contains(s));
    simplices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c, 1)
    }

    fn square() -> SimplicialComplex {
        SimplicialComplex::new(
            2,
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1]), p(&[1, 1])],
            vec![vec![0, 1, 3], vec![0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn construction_merges_vertices_and_drops_faces() {
        let k = SimplicialComplex::new(
            2,
            vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1]), p(&[0, 0])],
            vec![vec![0, 1, 2], vec![3, 1], vec![2]],
        )
        .unwrap();
        assert_eq!(k.vertices().len(), 3);
        assert_eq!(k.facets(), &[vec![0, 1, 2]]);
        assert_eq!(k.all_simplices().len(), 7);
        assert!(SimplicialComplex::new(1, vec![p(&[0]), p(&[1])], vec![vec![0, 5]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k = square();
        let s = serde_json::to_string(&k).unwrap();
        assert!(s.starts_with(r#"{"dim":2,"vertices":[["0","0"],["1","0"]"#));
        assert_eq!(serde_json::from_str::<SimplicialComplex>(&s).unwrap(), k);
    }

    #[test]
    fn mesh_examples() {
        let t = SimplicialComplex::new(2, vec![p(&[0, 0]), p(&[1, 0]), p(&[0, 1])], vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(t.mesh().unwrap(), q(1, 1));
        let v = SimplicialComplex::new(2, vec![p(&[0, 0])], vec![vec![0]]).unwrap();
        assert_eq!(v.mesh().unwrap(), q(0, 1));
        assert_eq!(SimplicialComplex::empty(2).mesh(), Err(Error::EmptyComplex));
    }

    #[test]
    fn locate_examples() {
        let k = square();
        assert_eq!(k.locate(&Point::from_ints(&[3, 1], 4)).unwrap(), vec![0, 1, 3]);
        assert_eq!(k.locate(&p(&[1, 0])).unwrap(), vec![1]);
        assert_eq!(k.locate(&Point::from_ints(&[1, 1], 2)).unwrap(), vec![0, 3]);
        assert_eq!(k.locate(&p(&[2, 0])), Err(Error::OutsideCarrier));
    }

    #[test]
    fn star_examples() {
        let k = square();
        assert_eq!(k.star(&[0, 1, 3]).unwrap(), vec![0, 1]);
        let one = SimplicialComplex::new(1, vec![p(&[0]), p(&[1])], vec![vec![0, 1]]).unwrap();
        assert_eq!(one.star(&[0, 1]).unwrap(), vec![0]);
        assert_eq!(one.star(&[0, 2]), Err(Error::SimplexNotInComplex));
    }

    #[test]
    fn stellar_subdivision_splits_all_cofaces() {
        let k = square();
        let mid = Point::from_ints(&[1, 1], 2);
        let s = k.stellar_subdivision(&mid).unwrap();
        assert_eq!(s.top_facets().len(), 4);
        assert_eq!(s.volume(), k.volume());
        s.validate().unwrap();
        assert!(k.stellar_subdivision(&p(&[0, 0])).is_err());
    }

    #[test]
    fn validate_rejects_overlaps() {
        let bad = SimplicialComplex::new(
            2,
            vec![p(&[0, 0]), p(&[2, 0]), p(&[0, 2]), p(&[1, 1]), p(&[2, 2])],
            vec![vec![0, 1, 2], vec![0, 1, 4]],
        )
        .unwrap();
        assert!(bad.validate().is_err());
        square().validate().unwrap();
    }
}
