//! Randomized search for points in general position, verified exactly.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::point::{BoundingBox, Point};
use super::simplex::is_geometrically_independent;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone)]
pub struct PerturbConfig {
    pub seed: u64,
    /// Samples have denominator `2^denominator_bits` (raised locally if a
    /// ball is too small to contain such a point).
    pub denominator_bits: u32,
    /// Attempts per point before giving up.
    pub retry_budget: usize,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            denominator_bits: 20,
            retry_budget: 1000,
        }
    }
}

/// Which subsets of the output must be geometrically independent.
#[derive(Debug, Clone)]
pub enum IndependenceScope {
    /// Every subset of size at most `m + 1` (exhaustive; meant for small inputs).
    All,
    /// Only the listed index tuples, e.g. the vertex sets of a complex's simplices.
    Tuples(Vec<Vec<usize>>),
}

/// Picks `y_j` in the open ∞-ball of radius `radii[j]` around `targets[j]`,
/// inside `bbox` when given, different from `forbidden[j]` (when that list is
/// non-empty), such that the required subsets are independent. Points are
/// fixed in order, so only subsets whose largest index is `j` are checked
/// when `y_j` is drawn.
pub fn perturb_generic(
    targets: &[Point],
    radii: &[Rational],
    forbidden: &[Point],
    bbox: Option<&BoundingBox>,
    scope: &IndependenceScope,
    config: &PerturbConfig,
) -> Result<Vec<Point>> {
    if radii.len() != targets.len() || !(forbidden.is_empty() || forbidden.len() == targets.len()) {
        return Err(Error::Precondition("targets, radii and forbidden points must have equal length".into()));
    }
    if radii.iter().any(|r| *r <= rational::zero()) {
        return Err(Error::Precondition("radii must be positive".into()));
    }
    let Some(m) = targets.first().map(Point::dim) else {
        return Ok(Vec::new());
    };
    let by_last: Vec<Vec<Vec<usize>>> = match scope {
        IndependenceScope::All => Vec::new(),
        IndependenceScope::Tuples(tuples) => {
            let mut v = vec![Vec::new(); targets.len()];
            for t in tuples {
                if let Some(&last) = t.iter().max() {
                    v[last].push(t.clone());
                }
            }
            v
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out: Vec<Point> = Vec::with_capacity(targets.len());
    for (j, (z, radius)) in targets.iter().zip(radii).enumerate() {
        let ranges = sample_ranges(z, radius, bbox, config.denominator_bits)
            .ok_or(Error::RetryBudgetExhausted { index: j })?;
        let mut accepted = None;
        for _ in 0..config.retry_budget {
            let y = Point::new(
                ranges
                    .iter()
                    .map(|(lo, hi, den)| rational::q(rng.gen_range(*lo..=*hi), *den))
                    .collect(),
            );
            if forbidden.get(j) == Some(&y) {
                continue;
            }
            out.push(y);
            let ok = match scope {
                IndependenceScope::All => all_subsets_ok(&out, m),
                IndependenceScope::Tuples(_) => by_last[j].iter().all(|t| {
                    let pts: Vec<Point> = t.iter().map(|&i| out[i].clone()).collect();
                    is_geometrically_independent(&pts).unwrap_or(false)
                }),
            };
            let y = out.pop().expect("just pushed");
            if ok {
                accepted = Some(y);
                break;
            }
        }
        out.push(accepted.ok_or(Error::RetryBudgetExhausted { index: j })?);
    }
    Ok(out)
}

/// Independence of every subset of size `min(m + 1, n)` containing the last point.
fn all_subsets_ok(points: &[Point], m: usize) -> bool {
    let j = points.len() - 1;
    let size = m.min(j);
    (0..j).combinations(size).all(|mut s| {
        s.push(j);
        let pts: Vec<Point> = s.iter().map(|&i| points[i].clone()).collect();
        is_geometrically_independent(&pts).unwrap_or(false)
    })
}

/// Per coordinate, the numerator range `lo..=hi` over denominator `den` of
/// points strictly inside the ball (and within the box).
fn sample_ranges(z: &Point, radius: &Rational, bbox: Option<&BoundingBox>, bits: u32) -> Option<Vec<(i64, i64, i64)>> {
    (0..z.dim())
        .map(|i| {
            // Ball ends are open; box faces are closed.
            let (mut a, mut a_closed) = (&z[i] - radius, false);
            let (mut b, mut b_closed) = (&z[i] + radius, false);
            if let Some(bx) = bbox {
                if a < bx.lo[i] {
                    (a, a_closed) = (bx.lo[i].clone(), true);
                }
                if b > bx.hi[i] {
                    (b, b_closed) = (bx.hi[i].clone(), true);
                }
            }
            let mut bits = bits;
            while bits <= 60 {
                let den = Rational::from_integer(BigInt::from(1i64 << bits));
                let (sa, sb) = (&a * &den, &b * &den);
                let lo = if a_closed { sa.ceil() } else { sa.floor() + rational::one() }.to_integer();
                let hi = if b_closed { sb.floor() } else { sb.ceil() - rational::one() }.to_integer();
                if lo <= hi {
                    return Some((lo.to_i64()?, hi.to_i64()?, 1i64 << bits));
                }
                bits += 4;
            }
            None
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg;
    use crate::rational::q;

    #[test]
    fn collinear_targets_become_general() {
        let targets: Vec<Point> = (0..4).map(|i| Point::from_ints(&[i, i], 4)).collect();
        let radii = vec![q(1, 10); 4];
        let out = perturb_generic(&targets, &radii, &[], None, &IndependenceScope::All, &PerturbConfig::default()).unwrap();
        for (y, z) in out.iter().zip(&targets) {
            assert!(y.dist_inf(z) < q(1, 10));
        }
        for t in (0..4).combinations(3) {
            let a = out[t[1]].sub(&out[t[0]]);
            let b = out[t[2]].sub(&out[t[0]]);
            let det = linalg::determinant(vec![a.0, b.0]);
            assert_ne!(det, q(0, 1));
        }
    }

    #[test]
    fn single_target_avoids_forbidden_and_is_deterministic() {
        let z = Point::from_ints(&[1, 1], 2);
        let cfg = PerturbConfig::default();
        let a = perturb_generic(std::slice::from_ref(&z), &[q(1, 100)], std::slice::from_ref(&z), None, &IndependenceScope::All, &cfg).unwrap();
        let b = perturb_generic(std::slice::from_ref(&z), &[q(1, 100)], std::slice::from_ref(&z), None, &IndependenceScope::All, &cfg).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], z);
    }

    #[test]
    fn box_is_respected() {
        let z = Point::from_ints(&[0, 1], 1);
        let bx = BoundingBox::unit(2);
        let cfg = PerturbConfig::default();
        for seed in 0..20 {
            let cfg = PerturbConfig { seed, ..cfg.clone() };
            let y = perturb_generic(std::slice::from_ref(&z), &[q(1, 50)], std::slice::from_ref(&z), Some(&bx), &IndependenceScope::All, &cfg).unwrap();
            assert!(bx.contains(&y[0]));
        }
    }

    #[test]
    fn m_plus_two_points_in_every_dimension() {
        for m in 1..=3usize {
            let targets: Vec<Point> = (0..m + 2).map(|_| Point::origin(m)).collect();
            let radii = vec![q(1, 8); m + 2];
            let out =
                perturb_generic(&targets, &radii, &[], None, &IndependenceScope::All, &PerturbConfig::default()).unwrap();
            for s in (0..m + 2).combinations(m + 1) {
                let pts: Vec<Point> = s.iter().map(|&i| out[i].clone()).collect();
                assert!(is_geometrically_independent(&pts).unwrap());
            }
        }
    }
}
