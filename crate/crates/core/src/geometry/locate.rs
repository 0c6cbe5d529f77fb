//! Uniform bucket grid over a complex's bounding box, used for point location.

use num_traits::{ToPrimitive, Zero};

use super::complex::SimplicialComplex;
use super::point::{BoundingBox, Point};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub(crate) struct BucketIndex {
    bbox: Option<BoundingBox>,
    /// Bucket side length per axis (zero for a flat axis).
    width: Vec<Rational>,
    res: usize,
    buckets: Vec<Vec<usize>>,
}

impl BucketIndex {
    pub(crate) fn build(k: &SimplicialComplex) -> Self {
        let m = k.dim();
        let Some(bbox) = k.bbox() else {
            return BucketIndex {
                bbox: None,
                width: Vec::new(),
                res: 1,
                buckets: vec![Vec::new()],
            };
        };
        let n = k.facets().len().max(1) as f64;
        let res = (n.powf(1.0 / m.max(1) as f64).ceil() as usize).clamp(1, 1024);
        let res = if res.pow(m as u32) > 4_000_000 { 1 } else { res };
        let width = (0..m)
            .map(|i| (&bbox.hi[i] - &bbox.lo[i]) / rational::int(res as i64))
            .collect();
        let mut index = BucketIndex {
            bbox: Some(bbox),
            width,
            res,
            buckets: vec![Vec::new(); res.pow(m as u32)],
        };
        for (f, facet) in k.facets().iter().enumerate() {
            let pts: Vec<Point> = facet.iter().map(|&v| k.vertex(v).clone()).collect();
            let b = BoundingBox::of(&pts);
            for cell in index.cells_in(&b) {
                index.buckets[cell].push(f);
            }
        }
        index
    }

    fn axis_cell(&self, axis: usize, c: &Rational) -> usize {
        let bbox = self.bbox.as_ref().expect("non-empty index");
        if self.width[axis].is_zero() {
            return 0;
        }
        let t = ((c - &bbox.lo[axis]) / &self.width[axis]).floor().to_integer();
        t.to_i64().unwrap_or(i64::MAX).clamp(0, self.res as i64 - 1) as usize
    }

    fn cells_in(&self, b: &BoundingBox) -> Vec<usize> {
        let m = b.lo.dim();
        let ranges: Vec<(usize, usize)> = (0..m)
            .map(|i| (self.axis_cell(i, &b.lo[i]), self.axis_cell(i, &b.hi[i])))
            .collect();
        let mut out = vec![0usize];
        for (lo, hi) in ranges {
            out = out
                .iter()
                .flat_map(|&base| (lo..=hi).map(move |c| base * self.res + c))
                .collect();
        }
        out
    }

    /// Facets whose bounding box may contain `x`.
    pub(crate) fn candidates(&self, x: &Point) -> &[usize] {
        match &self.bbox {
            Some(b) if b.contains(x) => {
                let mut cell = 0;
                for i in 0..x.dim() {
                    cell = cell * self.res + self.axis_cell(i, &x[i]);
                }
                &self.buckets[cell]
            }
            _ => &[],
        }
    }

    /// Facets whose bounding box may meet `b`, sorted and deduplicated.
    pub(crate) fn overlapping(&self, b: &BoundingBox) -> Vec<usize> {
        let Some(own) = &self.bbox else {
            return Vec::new();
        };
        if !own.intersects(b) {
            return Vec::new();
        }
        let mut out: Vec<usize> = self
            .cells_in(b)
            .into_iter()
            .flat_map(|c| self.buckets[c].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
