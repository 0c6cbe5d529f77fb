//! Squares are `L^p`-dense: `g_ε² = f` off the thin shell `I^m ∖ [ε,1]^m`,
//! so `‖g_ε² − f‖_p^p ≤ 1 − (1−ε)^m`.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::extend::{extend_to_square, kuhn_cells, ExtendedSquare};
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};
use crate::pl::PlMap;
use crate::rational::{self, Rational};

/// Slack allowed between the quadrature value and the bound.
pub const QUADRATURE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct LpCheck {
    pub square: ExtendedSquare,
    pub p: u32,
    /// Midpoint-rule value of `∫ ‖g² − f‖∞^p`.
    pub numeric: f64,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    /// Quadrature cells per axis.
    pub cells_per_axis: usize,
}

/// `1 − (1−ε)^m`.
pub fn lp_bound(eps: &Rational, m: usize) -> Rational {
    let keep = rational::one() - eps;
    rational::one() - (0..m).fold(rational::one(), |acc, _| acc * &keep)
}

/// `f` is a self-map of `I^m` on a Kuhn grid. Extends `f` restricted to the
/// grid cells of `[ε,1]^m` to a square with `B = [0, ε/2]^m` and integrates.
pub fn lp_denseness_check(f: &PlMap, eps: &Rational, p: u32) -> Result<LpCheck> {
    let m = f.dim();
    if !(1..=2).contains(&m) || !(1..=2).contains(&p) {
        return Err(Error::Precondition(format!("need m and p in 1..=2, got m = {m}, p = {p}")));
    }
    if *eps <= rational::zero() || *eps >= rational::one() {
        return Err(Error::Precondition("eps must lie in (0, 1)".into()));
    }
    let r = f
        .complex()
        .vertices()
        .iter()
        .flat_map(|v| v.coords())
        .fold(eps.denom().clone(), |acc, c| acc.lcm(c.denom()));
    let r: usize = r.try_into().map_err(|_| Error::Precondition("grid too fine".into()))?;
    let first = (eps * rational::int(r as i64)).to_integer();
    let first: usize = first.try_into().expect("0 < eps < 1");
    let axis: Vec<usize> = (first..r).collect();
    let cells: Vec<Vec<usize>> = match m {
        1 => axis.iter().map(|&i| vec![i]).collect(),
        _ => axis.iter().flat_map(|&i| axis.iter().map(move |&j| vec![i, j])).collect(),
    };
    let k = Arc::new(kuhn_cells(m, r, &cells));
    let values = k.vertices().iter().map(|x| f.evaluate(x)).collect::<Result<Vec<_>>>()?;
    let f_k = PlMap::interpolate(Arc::clone(&k), values)?;
    let half = eps / rational::int(2);
    let b = BoundingBox {
        lo: Point::origin(m),
        hi: Point::new(vec![half; m]),
    };
    let square = extend_to_square(&f_k, &b)?;

    // Midpoint rule on a grid refining the ε grid, so every cell lies in
    // [ε,1]^m or in its complement.
    let n = r * (256 / m / r).max(1);
    let nq = rational::int(n as i64);
    let mut total = 0.0;
    let count = n.pow(m as u32);
    for cell in 0..count {
        let mut c = Vec::with_capacity(m);
        let mut rest = cell;
        for _ in 0..m {
            c.push((rational::int((rest % n) as i64) + rational::q(1, 2)) / &nq);
            rest /= n;
        }
        let x = Point::new(c);
        let g = &square.g;
        let d = g.evaluate(&g.evaluate(&x)?)?.dist_inf(&f.evaluate(&x)?);
        let d = d.to_f64().unwrap_or(f64::INFINITY);
        total += d.powi(p as i32);
    }
    let numeric = total / count as f64;
    let bound = lp_bound(eps, m);
    if numeric > rational::to_f64(&bound) + QUADRATURE_TOLERANCE {
        return Err(Error::CertificationFailed {
            achieved: format!("{numeric}"),
            target: rational::format(&bound),
        });
    }
    Ok(LpCheck {
        square,
        p,
        numeric,
        bound,
        cells_per_axis: n,
    })
}
