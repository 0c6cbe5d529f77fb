//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Row-reduces `a` in place to reduced row echelon form; returns pivot columns.
fn rref(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a = rows.to_vec();
    rref(&mut a).len()
}

pub fn determinant(mut a: Matrix) -> Rational {
    let n = a.len();
    if n <= 3 {
        return small_det(&a);
    }
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            for j in c..n {
                let delta = &factor * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// Some solution of `a·x = b` (`a` is rows × cols), or `None` if the system is
/// inconsistent. Free variables are set to zero, so the solution is unique
/// exactly when the columns are independent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Cofactor expansion; cheaper than elimination for tiny matrices.
fn small_det(a: &[Vec<Rational>]) -> Rational {
    match a.len() {
        0 => Rational::one(),
        1 => a[0][0].clone(),
        2 => &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
        _ => {
            let m = |i: usize, j: usize, k: usize, l: usize| &a[i][j] * &a[k][l] - &a[i][l] * &a[k][j];
            &a[0][0] * m(1, 1, 2, 2) - &a[0][1] * m(1, 0, 2, 2) + &a[0][2] * m(1, 0, 2, 1)
        }
    }
}

/// Inverse of a square matrix, if nonsingular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Matrix> {
    let n = a.len();
    if n == 2 {
        let det = small_det(a);
        if det.is_zero() {
            return None;
        }
        let r = det.recip();
        return Some(vec![
            vec![&a[1][1] * &r, -(&a[0][1] * &r)],
            vec![-(&a[1][0] * &r), &a[0][0] * &r],
        ]);
    }
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rank_and_determinant() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])), int(18));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(4)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[int(0), int(1)]).is_none());
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![q(3, 5), q(-1, 5)], vec![q(-1, 5), q(2, 5)]]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
