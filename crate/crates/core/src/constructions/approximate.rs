//! A PL approximation `f0` of a continuous self-map `h` of `I^m` whose pieces
//! are all injective and which moves every vertex.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{kuhn_triangulation, perturb_generic, BoundingBox, IndependenceScope, PerturbConfig};
use crate::pl::{Evaluable, Modulus, PlMap};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct Approximation {
    pub f0: PlMap,
    /// Grid resolution: `K` is the Kuhn triangulation of step `1/r`.
    pub resolution: usize,
    /// Certified upper bound on `ρ(f0, h)`.
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
}

/// Smallest `r ≥ 1` with `ω(4/r) < ε/10`.
pub fn grid_resolution(omega: &Modulus, eps: &Rational) -> usize {
    let target = eps / rational::int(10);
    let ok = |r: usize| omega.apply(&rational::q(4, r as i64)) < target;
    let mut hi = 1;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // ok(lo) is false (or lo = 0); ok(hi) is true.
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Interpolates `h` on a fine Kuhn grid after moving each vertex image by less
/// than `ε/20` so that `y_j ≠ x_j`, `y_j ∈ I^m` and every simplex's image
/// tuple is independent. The bound is `max_j ‖y_j − h(x_j)‖ + 2ω(mesh)`, which
/// must come out below `ε/6`.
pub fn approximate_pl(
    h: &dyn Evaluable,
    omega: &Modulus,
    eps: &Rational,
    m: usize,
    config: &PerturbConfig,
) -> Result<Approximation> {
    if !(1..=3).contains(&m) || h.dim() != m {
        return Err(Error::Precondition(format!("dimension must be 1, 2 or 3 and match h, got {m}")));
    }
    if *eps <= rational::zero() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let r = grid_resolution(omega, eps);
    let k = Arc::new(kuhn_triangulation(m, r));
    let targets = k
        .vertices()
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let y = h.eval(x)?;
            if y.in_unit_cube() {
                Ok(y)
            } else {
                Err(Error::NotSelfMap(j))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let radii = vec![eps / rational::int(20); targets.len()];
    let scope = IndependenceScope::Tuples(k.facets().to_vec());
    let images = perturb_generic(&targets, &radii, k.vertices(), Some(&BoundingBox::unit(m)), &scope, config)?;
    let f0 = PlMap::self_map_of_cube(k, images)?;
    let bound = f0.sup_distance_to_function(h, omega)?;
    let target = eps / rational::int(6);
    if bound >= target {
        return Err(Error::CertificationFailed {
            achieved: rational::format(&bound),
            target: rational::format(&target),
        });
    }
    Ok(Approximation { f0, resolution: r, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::ExprMap;
    use crate::rational::q;

    #[test]
    fn resolution_is_minimal() {
        let w = Modulus::Lipschitz(rational::int(1));
        assert_eq!(grid_resolution(&w, &q(1, 10)), 401);
        assert_eq!(grid_resolution(&w, &q(1, 2)), 81);
        assert_eq!(grid_resolution(&Modulus::Lipschitz(rational::zero()), &q(1, 2)), 1);
    }

    #[test]
    fn interval_identity() {
        let h = ExprMap::identity(1);
        let a = approximate_pl(&h, &h.modulus(), &q(1, 10), 1, &PerturbConfig::default()).unwrap();
        assert!(a.bound < q(1, 60));
        let k = a.f0.complex();
        for (x, y) in k.vertices().iter().zip(a.f0.images()) {
            assert_ne!(x, y);
            assert!(x.dist_inf(y) < q(1, 200));
        }
        for f in 0..k.facets().len() {
            assert!(a.f0.restriction_injective(f).unwrap());
        }
    }

    #[test]
    fn constant_map_gets_spread() {
        let h = ExprMap::parse("1/2, 1/2", 2).unwrap();
        let a = approximate_pl(&h, &h.modulus(), &q(1, 2), 2, &PerturbConfig::default()).unwrap();
        assert!(a.bound < q(1, 12));
        let first = &a.f0.images()[0];
        assert!(a.f0.images().iter().any(|y| y != first));
        assert!((0..a.f0.complex().facets().len()).all(|f| a.f0.restriction_injective(f).unwrap()));
    }

    #[test]
    fn rejects_non_self_maps() {
        let h = ExprMap::parse("x1 + 1", 1).unwrap();
        let err = approximate_pl(&h, &h.modulus(), &q(1, 2), 1, &PerturbConfig::default()).unwrap_err();
        // h(0) = 1 is still inside; the next vertex is not.
        assert_eq!(err, Error::NotSelfMap(1));
    }
}
