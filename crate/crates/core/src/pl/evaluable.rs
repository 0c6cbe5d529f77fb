use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{BoundingBox, Point};
use crate::rational::{self, Rational};

/// A map `R^m ⊇ I^m → R^m` that can be evaluated exactly and comes with a
/// Lipschitz bound (∞-norm) on any box.
pub trait Evaluable {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Point) -> Result<Point>;

    /// A Lipschitz constant valid for points of `b ∩ I^m`.
    fn lipschitz_on(&self, b: &BoundingBox) -> Rational;

    fn lipschitz(&self) -> Rational {
        self.lipschitz_on(&BoundingBox::unit(self.dim()))
    }

    /// The declared modulus of continuity on `I^m`.
    fn modulus(&self) -> Modulus {
        Modulus::Lipschitz(self.lipschitz())
    }
}

/// A modulus of continuity `ω` with `‖h(x) − h(y)‖∞ ≤ ω(‖x − y‖∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modulus {
    /// `ω(d) = L·d`.
    Lipschitz(#[serde(with = "rational::serde_str")] Rational),
}

impl Modulus {
    pub fn apply(&self, d: &Rational) -> Rational {
        match self {
            Modulus::Lipschitz(l) => l * d,
        }
    }

    /// The largest `δ = 2^-k` (k ≥ 0) with `ω(δ) < target`; `target > 0`.
    pub fn dyadic_inverse(&self, target: &Rational) -> Rational {
        let mut delta = rational::one();
        while self.apply(&delta) >= *target {
            delta /= rational::int(2);
        }
        delta
    }
}

/// An evaluable map from a closure plus a global Lipschitz constant.
pub struct FnMap<F> {
    dim: usize,
    lipschitz: Rational,
    f: F,
}

impl<F: Fn(&Point) -> Point> FnMap<F> {
    pub fn new(dim: usize, lipschitz: Rational, f: F) -> Self {
        FnMap { dim, lipschitz, f }
    }
}

impl<F: Fn(&Point) -> Point> Evaluable for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        Ok((self.f)(x))
    }

    fn lipschitz_on(&self, _b: &BoundingBox) -> Rational {
        self.lipschitz.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn dyadic_inverse_is_strict() {
        let w = Modulus::Lipschitz(rational::int(1));
        assert_eq!(w.dyadic_inverse(&q(1, 10)), q(1, 16));
        assert_eq!(w.dyadic_inverse(&q(1, 8)), q(1, 16));
        let w = Modulus::Lipschitz(rational::int(0));
        assert_eq!(w.dyadic_inverse(&q(1, 8)), q(1, 1));
    }
}
