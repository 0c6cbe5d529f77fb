//! Even-order root obstruction for PL self-maps of an interval.
//!
//! With `R(f)` the range, `F(f)` the fixed points and `E(f) = R(f) ∖ F(f)`:
//! if `f(E) ⊆ E`, any continuous root `g` with `g^n = f` permutes the path
//! components of `E` and its induced map is an n-th root of `f`'s. An induced
//! permutation without a square root therefore rules out every even order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation_roots::Permutation;
use crate::pl::PlMap;
use crate::rational::{self, Rational};

/// An interval with each end open or closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    fn closed(lo: Rational, hi: Rational) -> Self {
        Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_open { *x > self.lo } else { *x >= self.lo };
        let below = if self.hi_open { *x < self.hi } else { *x <= self.hi };
        above && below
    }

    /// A point of the interval (assumed non-empty).
    pub fn sample(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalAnalysis {
    pub range: Interval,
    /// Path components of `F(f)`, closed and sorted.
    pub fixed: Vec<Interval>,
    /// Path components of `E(f)`, sorted.
    pub components: Vec<Interval>,
    pub invariant: bool,
    /// Induced map on `components` when `E(f)` is invariant.
    pub induced: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict")]
pub enum IntervalVerdict {
    /// The induced permutation has no square root, hence no root of any even order.
    NoEvenOrderRoots { analysis: IntervalAnalysis, induced: Permutation },
    Inconclusive { analysis: IntervalAnalysis, reason: String },
}

impl IntervalVerdict {
    pub fn is_obstruction(&self) -> bool {
        matches!(self, IntervalVerdict::NoEvenOrderRoots { .. })
    }

    pub fn analysis(&self) -> &IntervalAnalysis {
        match self {
            IntervalVerdict::NoEvenOrderRoots { analysis, .. } | IntervalVerdict::Inconclusive { analysis, .. } => analysis,
        }
    }
}

/// One affine piece `[x0, x1] → [y0, y1]`.
struct Seg {
    x0: Rational,
    x1: Rational,
    y0: Rational,
    y1: Rational,
}

impl Seg {
    fn at(&self, x: &Rational) -> Rational {
        &self.y0 + (&self.y1 - &self.y0) * (x - &self.x0) / (&self.x1 - &self.x0)
    }

    /// Fixed points on the segment, as a closed interval.
    fn fixed(&self) -> Option<Interval> {
        let (d0, d1) = (&self.y0 - &self.x0, &self.y1 - &self.x1);
        if d0 == rational::zero() && d1 == rational::zero() {
            return Some(Interval::closed(self.x0.clone(), self.x1.clone()));
        }
        if (d0 > rational::zero()) == (d1 > rational::zero()) && d0 != rational::zero() && d1 != rational::zero() {
            return None;
        }
        // y − x changes sign (or vanishes at one end) exactly once.
        let t = &d0 / (&d0 - &d1);
        let p = &self.x0 + t * (&self.x1 - &self.x0);
        Some(Interval::closed(p.clone(), p))
    }

    /// `{x ∈ [x0, x1] ∩ [lo, hi] : y(x) ∈ [a, b]}` as a closed interval.
    fn preimage(&self, lo: &Rational, hi: &Rational, a: &Rational, b: &Rational) -> Option<Interval> {
        let lo = lo.clone().max(self.x0.clone());
        let hi = hi.clone().min(self.x1.clone());
        if lo > hi {
            return None;
        }
        if self.y0 == self.y1 {
            return (self.y0 >= *a && self.y0 <= *b).then(|| Interval::closed(lo, hi));
        }
        let inv = |y: &Rational| &self.x0 + (y - &self.y0) * (&self.x1 - &self.x0) / (&self.y1 - &self.y0);
        let (p, q) = (inv(a), inv(b));
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let (p, q) = (p.max(lo), q.min(hi));
        (p <= q).then(|| Interval::closed(p, q))
    }
}

fn segments(f: &PlMap) -> Result<Vec<Seg>> {
    if f.dim() != 1 {
        return Err(Error::Precondition(format!("interval maps only, got dimension {}", f.dim())));
    }
    let k = f.complex();
    let mut segs: Vec<Seg> = k
        .facets()
        .iter()
        .filter(|s| s.len() == 2)
        .map(|s| {
            let (a, b) = (&k.vertex(s[0])[0], &k.vertex(s[1])[0]);
            let (i, j) = if a < b { (s[0], s[1]) } else { (s[1], s[0]) };
            Seg {
                x0: k.vertex(i)[0].clone(),
                x1: k.vertex(j)[0].clone(),
                y0: f.images()[i][0].clone(),
                y1: f.images()[j][0].clone(),
            }
        })
        .collect();
    segs.sort_by(|a, b| a.x0.cmp(&b.x0));
    if segs.is_empty() || segs.windows(2).any(|w| w[0].x1 != w[1].x0) {
        return Err(Error::Precondition("the carrier must be a single interval".into()));
    }
    Ok(segs)
}

pub fn interval_even_root_obstruction(f: &PlMap) -> Result<IntervalVerdict> {
    let segs = segments(f)?;
    let (a, b) = (&segs[0].x0, &segs[segs.len() - 1].x1);
    let ys = segs.iter().flat_map(|s| [&s.y0, &s.y1]);
    let c = ys.clone().min().expect("non-empty").clone();
    let d = ys.max().expect("non-empty").clone();
    if c < *a || d > *b {
        return Err(Error::Precondition("f must map its interval into itself".into()));
    }
    let range = Interval::closed(c.clone(), d.clone());

    let mut fixed: Vec<Interval> = Vec::new();
    for s in &segs {
        if let Some(iv) = s.fixed() {
            match fixed.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.clone().max(iv.hi),
                _ => fixed.push(iv),
            }
        }
    }

    let mut components = Vec::new();
    let mut cursor = (c.clone(), false);
    for fx in &fixed {
        if cursor.0 < fx.lo {
            components.push(Interval {
                lo: cursor.0.clone(),
                hi: fx.lo.clone(),
                lo_open: cursor.1,
                hi_open: true,
            });
        }
        cursor = (fx.hi.clone(), true);
    }
    if cursor.0 < d || (cursor.0 == d && !cursor.1) {
        components.push(Interval {
            lo: cursor.0,
            hi: d.clone(),
            lo_open: cursor.1,
            hi_open: false,
        });
    }

    // E is invariant iff no point of R(f) outside F maps into F.
    let invariant = fixed.iter().all(|fx| {
        segs.iter().all(|s| match s.preimage(&c, &d, &fx.lo, &fx.hi) {
            None => true,
            Some(pre) => fixed.iter().any(|g| g.lo <= pre.lo && pre.hi <= g.hi),
        })
    });

    let mut analysis = IntervalAnalysis {
        range,
        fixed,
        components,
        invariant,
        induced: None,
    };
    if analysis.components.is_empty() {
        return Ok(IntervalVerdict::Inconclusive {
            analysis,
            reason: "E(f) is empty".into(),
        });
    }
    if !invariant {
        return Ok(IntervalVerdict::Inconclusive {
            analysis,
            reason: "E(f) is not invariant under f".into(),
        });
    }
    let eval = |x: &Rational| -> Rational {
        let s = segs.iter().find(|s| s.x0 <= *x && *x <= s.x1).expect("x lies in the carrier");
        s.at(x)
    };
    let induced: Vec<usize> = analysis
        .components
        .iter()
        .map(|comp| {
            let y = eval(&comp.sample());
            analysis
                .components
                .iter()
                .position(|t| t.contains(&y))
                .expect("invariance keeps images in E")
        })
        .collect();
    analysis.induced = Some(induced.clone());
    let Ok(perm) = Permutation::new(induced) else {
        return Ok(IntervalVerdict::Inconclusive {
            analysis,
            reason: "the induced map is not a permutation".into(),
        });
    };
    if perm.cycle_type().has_nth_root(2) {
        return Ok(IntervalVerdict::Inconclusive {
            analysis,
            reason: "the induced permutation has a square root".into(),
        });
    }
    Ok(IntervalVerdict::NoEvenOrderRoots { analysis, induced: perm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, SimplicialComplex};
    use crate::rational::q;
    use std::sync::Arc;

    fn pl(xs: &[Rational], ys: &[Rational]) -> PlMap {
        let verts = xs.iter().map(|x| Point::new(vec![x.clone()])).collect();
        let edges = (0..xs.len() - 1).map(|i| vec![i, i + 1]).collect();
        let k = SimplicialComplex::new(1, verts, edges).unwrap();
        PlMap::interpolate(Arc::new(k), ys.iter().map(|y| Point::new(vec![y.clone()])).collect()).unwrap()
    }

    #[test]
    fn reflection_has_no_even_roots() {
        let f = pl(&[q(0, 1), q(1, 2), q(1, 1)], &[q(1, 1), q(1, 2), q(0, 1)]);
        let v = interval_even_root_obstruction(&f).unwrap();
        assert!(v.is_obstruction());
        let a = v.analysis();
        assert_eq!(a.fixed, vec![Interval::closed(q(1, 2), q(1, 2))]);
        assert_eq!(a.components.len(), 2);
        assert_eq!(a.induced, Some(vec![1, 0]));
    }

    #[test]
    fn identity_is_inconclusive() {
        let f = pl(&[q(0, 1), q(1, 1)], &[q(0, 1), q(1, 1)]);
        let v = interval_even_root_obstruction(&f).unwrap();
        assert!(!v.is_obstruction());
        assert!(v.analysis().components.is_empty());
    }

    #[test]
    fn flat_then_rising_map_is_inconclusive() {
        let f = pl(&[q(0, 1), q(1, 2), q(1, 1)], &[q(3, 4), q(3, 4), q(7, 8)]);
        let v = interval_even_root_obstruction(&f).unwrap();
        assert!(!v.is_obstruction());
        let a = v.analysis();
        assert_eq!(a.range, Interval::closed(q(3, 4), q(7, 8)));
        assert_eq!(a.fixed, vec![Interval::closed(q(5, 6), q(5, 6))]);
        // The fixed point attracts, so each side maps into itself.
        assert_eq!(a.induced, Some(vec![0, 1]));
    }

    #[test]
    fn decreasing_on_range_with_flat_outer_parts() {
        // Decreasing on R(f) = [1/4, 3/4], constant outside it.
        let f = pl(
            &[q(0, 1), q(1, 4), q(3, 4), q(1, 1)],
            &[q(3, 4), q(3, 4), q(1, 4), q(1, 4)],
        );
        assert!(interval_even_root_obstruction(&f).unwrap().is_obstruction());
    }

    #[test]
    fn non_invariant_e() {
        // f(0) = 1/2 is fixed but 0 ∈ R(f) is not.
        let f = pl(&[q(0, 1), q(1, 2), q(1, 1)], &[q(1, 2), q(1, 2), q(0, 1)]);
        let v = interval_even_root_obstruction(&f).unwrap();
        assert!(!v.analysis().invariant);
        assert!(!v.is_obstruction());
    }

    #[test]
    fn rejects_higher_dimensions() {
        let k = crate::geometry::kuhn_triangulation(2, 1);
        assert!(interval_even_root_obstruction(&PlMap::identity(Arc::new(k))).is_err());
    }
}
