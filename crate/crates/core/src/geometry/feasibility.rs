//! Exact linear feasibility: Fourier–Motzkin elimination for the small
//! systems that arise from pairs of simplices, and a dense simplex method
//! (Bland's rule) as a general fallback.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::complex::SimplicialComplex;
use super::point::Point;
use super::simplex::Simplex;
use crate::rational::{self, Rational};

/// Largest number of barycentric variables handed to Fourier–Motzkin; larger
/// systems go to the simplex method.
const FM_MAX_VARS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Optimum {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

/// `a·x ≥ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
}

impl Ineq {
    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Ineq {
        if let Some(lead) = self.a.iter().find(|c| !c.is_zero()).map(Rational::abs) {
            for c in self.a.iter_mut() {
                *c /= &lead;
            }
            self.b /= &lead;
        }
        self
    }
}

/// Maximizes `c·y` subject to `E y = e` and `G y ≥ g` by Fourier–Motzkin.
/// The returned point takes, for every eliminated variable, the midpoint of
/// its feasible interval, so it is central rather than extreme.
pub fn fm_maximize(
    eq: &[Vec<Rational>],
    e: &[Rational],
    ge: &[Vec<Rational>],
    g: &[Rational],
    c: &[Rational],
) -> Optimum {
    let n = c.len();
    // Append the objective variable s with c·y - s = 0, placed last so it
    // stays free unless the objective is constant on the equality set.
    let mut rows: Vec<Vec<Rational>> = eq
        .iter()
        .zip(e)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(Rational::zero());
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut obj = c.to_vec();
    obj.push(-Rational::one());
    obj.push(Rational::zero());
    rows.push(obj);
    let pivots = reduced(&mut rows, n + 1);
    if pivots.last() == Some(&(n + 1)) {
        return Optimum::Infeasible;
    }
    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..=n).filter(|v| !pivot_set.contains(v)).collect();
    let nf = free.len();
    // y = y0 + N z over the free variables z.
    let mut y0 = vec![Rational::zero(); n + 1];
    let mut basis = vec![vec![Rational::zero(); nf]; n + 1];
    for (k, &v) in free.iter().enumerate() {
        basis[v][k] = Rational::one();
    }
    for (r, &p) in pivots.iter().enumerate() {
        y0[p] = rows[r][n + 1].clone();
        for (k, &v) in free.iter().enumerate() {
            basis[p][k] = -rows[r][v].clone();
        }
    }
    let mut cons: Vec<Ineq> = ge
        .iter()
        .zip(g)
        .map(|(row, rhs)| {
            let shift: Rational = row.iter().zip(&y0).map(|(a, y)| a * y).sum();
            let a = (0..nf)
                .map(|k| row.iter().zip(&basis).map(|(ai, bi)| ai * &bi[k]).sum())
                .collect();
            Ineq { a, b: rhs - shift }
        })
        .collect();

    let s_free = free.last() == Some(&n);
    let elim: Vec<usize> = if s_free { (0..nf - 1).collect() } else { (0..nf).collect() };
    let mut snapshots = Vec::with_capacity(elim.len());
    for &k in &elim {
        snapshots.push(cons.clone());
        match eliminate(cons, k) {
            Some(next) => cons = next,
            None => return Optimum::Infeasible,
        }
    }
    if cons.iter().any(|q| q.a.iter().all(Zero::is_zero) && q.b.is_positive()) {
        return Optimum::Infeasible;
    }
    let mut z = vec![Rational::zero(); nf];
    if s_free {
        let (lo, hi) = interval(&cons, nf - 1, &z);
        match (lo, hi) {
            (Some(l), Some(h)) if l > h => return Optimum::Infeasible,
            (_, Some(h)) => z[nf - 1] = h,
            (_, None) => return Optimum::Unbounded,
        }
    }
    for (&k, snap) in elim.iter().zip(&snapshots).rev() {
        let (lo, hi) = interval(snap, k, &z);
        z[k] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / rational::int(2),
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => Rational::zero(),
        };
    }
    let y: Vec<Rational> = (0..=n)
        .map(|v| &y0[v] + basis[v].iter().zip(&z).map(|(a, b)| a * b).sum::<Rational>())
        .collect();
    let value = y[n].clone();
    Optimum::Optimal {
        value,
        x: y[..n].to_vec(),
    }
}

fn reduced(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    // rref over the first `cols + 1` columns (the last is the right-hand side)
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..=cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..=cols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Projects out variable `k`; `None` if a constant constraint is violated.
fn eliminate(cons: Vec<Ineq>, k: usize) -> Option<Vec<Ineq>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out: HashSet<Ineq> = HashSet::new();
    for q in cons {
        if q.a[k].is_positive() {
            pos.push(q);
        } else if q.a[k].is_negative() {
            neg.push(q);
        } else {
            out.insert(q.normalized());
        }
    }
    for p in &pos {
        for q in &neg {
            let wp = -q.a[k].clone();
            let wq = p.a[k].clone();
            let a: Vec<Rational> = p.a.iter().zip(&q.a).map(|(x, y)| x * &wp + y * &wq).collect();
            let b = &p.b * &wp + &q.b * &wq;
            out.insert(Ineq { a, b }.normalized());
        }
    }
    let mut kept = Vec::with_capacity(out.len());
    for q in out {
        if q.a.iter().all(Zero::is_zero) {
            if q.b.is_positive() {
                return None;
            }
        } else {
            kept.push(q);
        }
    }
    kept.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    Some(kept)
}

/// Bounds on variable `k` given values for every other variable.
fn interval(cons: &[Ineq], k: usize, z: &[Rational]) -> (Option<Rational>, Option<Rational>) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for q in cons {
        let ak = &q.a[k];
        if ak.is_zero() {
            continue;
        }
        let rest: Rational = q
            .a
            .iter()
            .zip(z)
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, (a, v))| a * v)
            .sum();
        let bound = (&q.b - rest) / ak;
        if ak.is_positive() {
            if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| bound < *h) {
            hi = Some(bound);
        }
    }
    (lo, hi)
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0` with an exact two-phase
/// simplex method using Bland's rule (no cycling).
pub fn lp_maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Optimum {
    let rows = a.len();
    let n = c.len();
    // Tableau columns: x (n), artificials (rows), rhs.
    let width = n + rows + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -rhs } else { rhs.clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();

    // Phase I: minimize the sum of artificials.
    let phase1: Vec<Rational> = (0..width - 1)
        .map(|j| if j >= n { -Rational::one() } else { Rational::zero() })
        .collect();
    if run_simplex(&mut t, &mut basis, &phase1, n + rows) == Err(()) {
        unreachable!("phase one is bounded");
    }
    let infeasibility: Rational = basis
        .iter()
        .zip(&t)
        .filter(|(&v, _)| v >= n)
        .map(|(_, r)| r[width - 1].clone())
        .sum();
    if infeasibility.is_positive() {
        return Optimum::Infeasible;
    }
    // Drive remaining (zero-valued) artificials out of the basis where possible.
    for r in 0..rows {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t[r][j].is_zero()) {
                pivot(&mut t, &mut basis, r, j);
            }
        }
    }
    let mut obj = c.to_vec();
    obj.extend((0..rows).map(|_| Rational::zero()));
    // Artificials may not re-enter: restrict entering columns to the first n.
    if run_simplex(&mut t, &mut basis, &obj, n) == Err(()) {
        return Optimum::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[r][width - 1].clone();
        }
    }
    let value = c.iter().zip(&x).map(|(p, q)| p * q).sum();
    Optimum::Optimal { value, x }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, j: usize) {
    let inv = t[r][j].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    for i in 0..t.len() {
        if i != r && !t[i][j].is_zero() {
            let f = t[i][j].clone();
            for k in 0..t[i].len() {
                let d = &f * &t[r][k];
                t[i][k] -= d;
            }
        }
    }
    basis[r] = j;
}

/// Maximizes `obj·x` from the current feasible basis; `Err` when unbounded.
fn run_simplex(t: &mut [Vec<Rational>], basis: &mut [usize], obj: &[Rational], entering_limit: usize) -> Result<(), ()> {
    let width = obj.len() + 1;
    loop {
        // Reduced cost of column j: obj_j - Σ obj_basis * t[r][j].
        let entering = (0..entering_limit).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: Rational = basis.iter().zip(t.iter()).map(|(&v, row)| &obj[v] * &row[j]).sum();
            (&obj[j] - z).is_positive()
        });
        let Some(j) = entering else {
            return Ok(());
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..t.len() {
            if t[r][j].is_positive() {
                let ratio = &t[r][width - 1] / &t[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(());
        };
        pivot(t, basis, r, j);
    }
}

/// Barycentric system for `P ∩ Q`: variables `(α, β)`, rows `Σα = 1`,
/// `Σβ = 1`, `Σ α_i p_i − Σ β_j q_j = 0`.
fn intersection_system(p: &[Point], q: &[Point]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let (kp, kq) = (p.len(), q.len());
    let m = p[0].dim();
    let mut rows = Vec::with_capacity(m + 2);
    let mut rhs = Vec::with_capacity(m + 2);
    let mut sum_a = vec![Rational::zero(); kp + kq];
    let mut sum_b = sum_a.clone();
    for i in 0..kp {
        sum_a[i] = Rational::one();
    }
    for j in 0..kq {
        sum_b[kp + j] = Rational::one();
    }
    rows.push(sum_a);
    rhs.push(Rational::one());
    rows.push(sum_b);
    rhs.push(Rational::one());
    for d in 0..m {
        let mut row: Vec<Rational> = p.iter().map(|v| v[d].clone()).collect();
        row.extend(q.iter().map(|v| -v[d].clone()));
        rows.push(row);
        rhs.push(Rational::zero());
    }
    (rows, rhs)
}

/// A common point of `P` and `Q`, if any. When the relative interiors meet
/// the witness lies in both; in general it maximizes the smallest
/// barycentric coordinate, so it is as central as the intersection allows.
pub fn simplices_intersect(p: &Simplex, q: &Simplex) -> Option<Point> {
    if p.ambient_dim() != q.ambient_dim() {
        return None;
    }
    if p.vertices().len() + q.vertices().len() > FM_MAX_VARS {
        return simplices_intersect_lp(p, q);
    }
    let (eq, e) = intersection_system(p.vertices(), q.vertices());
    let nv = p.vertices().len() + q.vertices().len();
    // Variables (α, β, t) with α_i ≥ t, β_j ≥ t; maximize t.
    let eq: Vec<Vec<Rational>> = eq
        .into_iter()
        .map(|mut r| {
            r.push(Rational::zero());
            r
        })
        .collect();
    let ge: Vec<Vec<Rational>> = (0..nv)
        .map(|i| {
            let mut r = vec![Rational::zero(); nv + 1];
            r[i] = Rational::one();
            r[nv] = -Rational::one();
            r
        })
        .collect();
    let g = vec![Rational::zero(); nv];
    let mut c = vec![Rational::zero(); nv + 1];
    c[nv] = Rational::one();
    match fm_maximize(&eq, &e, &ge, &g, &c) {
        Optimum::Optimal { value, x } if !value.is_negative() => Some(p.point_at(&x[..p.vertices().len()])),
        _ => None,
    }
}

/// Same question answered by the simplex method.
pub fn simplices_intersect_lp(p: &Simplex, q: &Simplex) -> Option<Point> {
    if p.ambient_dim() != q.ambient_dim() {
        return None;
    }
    let (eq, e) = intersection_system(p.vertices(), q.vertices());
    let nv = p.vertices().len() + q.vertices().len();
    // Variables (α, β, s, u) with α_i − s − u_i = 0; maximize s.
    let width = 2 * nv + 1;
    let mut a: Vec<Vec<Rational>> = eq
        .into_iter()
        .map(|mut r| {
            r.resize(width, Rational::zero());
            r
        })
        .collect();
    let mut b = e;
    for i in 0..nv {
        let mut r = vec![Rational::zero(); width];
        r[i] = Rational::one();
        r[nv] = -Rational::one();
        r[nv + 1 + i] = -Rational::one();
        a.push(r);
        b.push(Rational::zero());
    }
    let mut c = vec![Rational::zero(); width];
    c[nv] = Rational::one();
    match lp_maximize(&a, &b, &c) {
        Optimum::Optimal { x, .. } => Some(p.point_at(&x[..p.vertices().len()])),
        _ => None,
    }
}

/// Whether facets `fa`, `fb` of `k` meet exactly in the face spanned by
/// their common vertices: no point of the intersection may carry weight on a
/// non-shared vertex.
pub(crate) fn meet_properly(k: &SimplicialComplex, fa: &[usize], fb: &[usize], common: &[usize]) -> bool {
    let p: Vec<Point> = fa.iter().map(|&v| k.vertex(v).clone()).collect();
    let q: Vec<Point> = fb.iter().map(|&v| k.vertex(v).clone()).collect();
    let (a, b) = intersection_system(&p, &q);
    let c: Vec<Rational> = fa
        .iter()
        .chain(fb)
        .map(|v| if common.contains(v) { Rational::zero() } else { Rational::one() })
        .collect();
    match lp_maximize(&a, &b, &c) {
        Optimum::Infeasible => true,
        Optimum::Optimal { value, .. } => value.is_zero(),
        Optimum::Unbounded => false,
    }
}

/// Exact check that `x` lies in both simplices.
pub fn is_common_point(p: &Simplex, q: &Simplex, x: &Point) -> bool {
    p.contains(x) && q.contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c, 1)
    }

    fn tri(a: &[i64], b: &[i64], c: &[i64]) -> Simplex {
        Simplex::new(vec![p(a), p(b), p(c)]).unwrap()
    }

    #[test]
    fn shared_edge_gives_edge_witness() {
        let s = tri(&[0, 0], &[1, 0], &[0, 1]);
        let t = tri(&[1, 0], &[0, 1], &[1, 1]);
        let w = simplices_intersect(&s, &t).unwrap();
        assert!(is_common_point(&s, &t, &w));
        assert_eq!(&w[0] + &w[1], int(1));
        assert!(simplices_intersect_lp(&s, &t).is_some());
    }

    #[test]
    fn far_translate_is_disjoint() {
        let s = tri(&[0, 0], &[1, 0], &[0, 1]);
        let t = tri(&[5, 5], &[6, 5], &[5, 6]);
        assert_eq!(simplices_intersect(&s, &t), None);
        assert_eq!(simplices_intersect_lp(&s, &t), None);
    }

    #[test]
    fn overlapping_interiors_give_interior_witness() {
        let s = tri(&[0, 0], &[4, 0], &[0, 4]);
        let t = tri(&[1, 1], &[5, 1], &[1, 5]);
        let w = simplices_intersect(&s, &t).unwrap();
        assert!(s.contains_in_interior(&w) && t.contains_in_interior(&w));
        let w2 = simplices_intersect_lp(&s, &t).unwrap();
        assert!(s.contains_in_interior(&w2) && t.contains_in_interior(&w2));
    }

    #[test]
    fn lower_dimensional_cases() {
        let seg = Simplex::new(vec![p(&[0, 2]), p(&[2, 0])]).unwrap();
        let pt = Simplex::new(vec![p(&[1, 1])]).unwrap();
        assert_eq!(simplices_intersect(&seg, &pt), Some(p(&[1, 1])));
        let off = Simplex::new(vec![p(&[1, 2])]).unwrap();
        assert_eq!(simplices_intersect(&seg, &off), None);
        let crossing = Simplex::new(vec![p(&[0, 0]), p(&[2, 2])]).unwrap();
        assert_eq!(simplices_intersect(&seg, &crossing), Some(p(&[1, 1])));
        let parallel = Simplex::new(vec![p(&[0, 3]), p(&[3, 0])]).unwrap();
        assert_eq!(simplices_intersect(&seg, &parallel), None);
    }

    #[test]
    fn lp_small_problems() {
        // max x + y, x + y + s = 1
        let a = vec![vec![int(1), int(1), int(1)]];
        match lp_maximize(&a, &[int(1)], &[int(1), int(1), int(0)]) {
            Optimum::Optimal { value, .. } => assert_eq!(value, int(1)),
            other => panic!("{other:?}"),
        }
        // x - y = 1 unbounded in x
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(lp_maximize(&a, &[int(1)], &[int(1), int(0)]), Optimum::Unbounded);
        // x = -1 infeasible with x ≥ 0
        assert_eq!(lp_maximize(&[vec![int(1)]], &[int(-1)], &[int(0)]), Optimum::Infeasible);
    }

    #[test]
    fn fm_small_problems() {
        // max x subject to x ≤ 3/2 and x ≥ 0
        let ge = vec![vec![int(-1)], vec![int(1)]];
        let g = vec![q(-3, 2), int(0)];
        match fm_maximize(&[], &[], &ge, &g, &[int(1)]) {
            Optimum::Optimal { value, .. } => assert_eq!(value, q(3, 2)),
            other => panic!("{other:?}"),
        }
        let ge = vec![vec![int(1)], vec![int(-1)]];
        let g = vec![int(2), int(-1)];
        assert_eq!(fm_maximize(&[], &[], &ge, &g, &[int(1)]), Optimum::Infeasible);
    }
}
