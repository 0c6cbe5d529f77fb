//! A small expression language for maps `I^m → R^m`, e.g. `"1 - x1, 1/2"`.
//!
//! Grammar (components separated by top-level commas):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*        divisor must be constant
//! unary := '-' unary | atom
//! atom  := number | 'x' index | ('min' | 'max') '(' expr (',' expr)+ ')' | '(' expr ')'
//! ```
//!
//! Variables are 1-based (`x1 … xm`). Lipschitz bounds come from interval
//! arithmetic on values and partial-derivative bounds.

use num_traits::{Signed, Zero};

use super::evaluable::Evaluable;
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

impl Expr {
    pub fn eval(&self, x: &Point) -> Rational {
        match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(i) => x[*i].clone(),
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Min(v) => v.iter().map(|e| e.eval(x)).min().expect("min has arguments"),
            Expr::Max(v) => v.iter().map(|e| e.eval(x)).max().expect("max has arguments"),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Min(v) | Expr::Max(v) => v.iter().filter_map(Expr::max_var).max(),
        }
    }

    /// Value range and per-variable bounds on `|∂e/∂x_j|` over the box.
    fn bounds(&self, b: &BoundingBox) -> Bounds {
        let m = b.lo.dim();
        match self {
            Expr::Const(c) => Bounds {
                lo: c.clone(),
                hi: c.clone(),
                grad: vec![rational::zero(); m],
            },
            Expr::Var(i) => {
                let mut grad = vec![rational::zero(); m];
                grad[*i] = rational::one();
                Bounds {
                    lo: b.lo[*i].clone(),
                    hi: b.hi[*i].clone(),
                    grad,
                }
            }
            Expr::Neg(a) => {
                let a = a.bounds(b);
                Bounds {
                    lo: -a.hi,
                    hi: -a.lo,
                    grad: a.grad,
                }
            }
            Expr::Add(x, y) | Expr::Sub(x, y) => {
                let (x, y) = (x.bounds(b), y.bounds(b));
                let (lo, hi) = if matches!(self, Expr::Add(..)) {
                    (&x.lo + &y.lo, &x.hi + &y.hi)
                } else {
                    (&x.lo - &y.hi, &x.hi - &y.lo)
                };
                Bounds {
                    lo,
                    hi,
                    grad: x.grad.iter().zip(&y.grad).map(|(p, q)| p + q).collect(),
                }
            }
            Expr::Mul(x, y) => {
                let (x, y) = (x.bounds(b), y.bounds(b));
                let products = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
                let lo = products.iter().min().cloned().expect("four products");
                let hi = products.iter().max().cloned().expect("four products");
                let (ax, ay) = (x.abs_max(), y.abs_max());
                Bounds {
                    lo,
                    hi,
                    grad: x.grad.iter().zip(&y.grad).map(|(gx, gy)| &ay * gx + &ax * gy).collect(),
                }
            }
            Expr::Min(v) | Expr::Max(v) => {
                let parts: Vec<Bounds> = v.iter().map(|e| e.bounds(b)).collect();
                let los = parts.iter().map(|p| p.lo.clone());
                let his = parts.iter().map(|p| p.hi.clone());
                let (lo, hi) = if matches!(self, Expr::Min(_)) {
                    (los.min(), his.min())
                } else {
                    (los.max(), his.max())
                };
                let (lo, hi) = (lo.expect("non-empty"), hi.expect("non-empty"));
                let grad = (0..m)
                    .map(|j| parts.iter().map(|p| p.grad[j].clone()).max().expect("non-empty"))
                    .collect();
                Bounds { lo, hi, grad }
            }
        }
    }
}

struct Bounds {
    lo: Rational,
    hi: Rational,
    grad: Vec<Rational>,
}

impl Bounds {
    fn abs_max(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }
}

/// A map given by one expression per output coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprMap {
    dim: usize,
    components: Vec<Expr>,
    source: String,
}

impl ExprMap {
    /// Parses a map of `I^m`; it must have exactly `m` components and use no
    /// variable beyond `x_m`.
    pub fn parse(source: &str, m: usize) -> Result<Self> {
        let mut p = Parser::new(source);
        let mut components = vec![p.expr()?];
        while p.eat(',') {
            components.push(p.expr()?);
        }
        p.end()?;
        if components.len() != m {
            return Err(Error::Parse(format!(
                "map has {} components but the dimension is {m}",
                components.len()
            )));
        }
        if let Some(v) = components.iter().filter_map(Expr::max_var).max() {
            if v >= m {
                return Err(Error::Parse(format!("variable x{} exceeds dimension {m}", v + 1)));
            }
        }
        Ok(ExprMap {
            dim: m,
            components,
            source: source.trim().to_string(),
        })
    }

    pub fn identity(m: usize) -> Self {
        let src: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        Self::parse(&src.join(", "), m).expect("identity parses")
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl Evaluable for ExprMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(Point::new(self.components.iter().map(|e| e.eval(x)).collect()))
    }

    fn lipschitz_on(&self, b: &BoundingBox) -> Rational {
        let b = b.clip_unit().unwrap_or_else(|| b.clone());
        self.components
            .iter()
            .map(|e| e.bounds(&b).grad.into_iter().sum::<Rational>())
            .max()
            .unwrap_or_else(rational::zero)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("unexpected trailing input")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                let rhs = self.unary()?;
                if rhs.max_var().is_some() {
                    return Err(self.err("divisor must be constant"));
                }
                let d = rhs.eval(&Point::origin(0));
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                lhs = Expr::Mul(Box::new(lhs), Box::new(Expr::Const(d.recip())));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                rational::parse(&self.src[start..self.pos]).map(Expr::Const)
            }
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let i: usize = self.src[start..self.pos].parse().map_err(|_| self.err("expected variable index"))?;
                if i == 0 {
                    return Err(self.err("variables are numbered from x1"));
                }
                Ok(Expr::Var(i - 1))
            }
            Some(_) if self.src[self.pos..].starts_with("min") || self.src[self.pos..].starts_with("max") => {
                let is_min = self.src[self.pos..].starts_with("min");
                self.pos += 3;
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                if args.len() < 2 {
                    return Err(self.err("min/max need at least two arguments"));
                }
                Ok(if is_min { Expr::Min(args) } else { Expr::Max(args) })
            }
            _ => Err(self.err("expected a number, variable, min, max or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn parses_and_evaluates() {
        let h = ExprMap::parse("1 - x1, 1/2", 2).unwrap();
        let y = h.eval(&Point::from_ints(&[1, 3], 4)).unwrap();
        assert_eq!(y, Point::from_ints(&[3, 2], 4));
        let g = ExprMap::parse("min(2*x1, 1) - 0.25*max(x1, x2, 0), 0", 2).unwrap();
        assert_eq!(g.eval(&Point::from_ints(&[1, 1], 4)).unwrap()[0], q(1, 2) - q(1, 16));
        assert_eq!(ExprMap::parse("-(x1 - 1)", 1).unwrap().eval(&Point::from_ints(&[1], 3)).unwrap()[0], q(2, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExprMap::parse("x1", 2).is_err());
        assert!(ExprMap::parse("x3, x1", 2).is_err());
        assert!(ExprMap::parse("x1 / x1", 1).is_err());
        assert!(ExprMap::parse("x1 +", 1).is_err());
        assert!(ExprMap::parse("x0", 1).is_err());
        assert!(ExprMap::parse("min(x1)", 1).is_err());
        assert!(ExprMap::parse("1/0", 1).is_err());
    }

    #[test]
    fn lipschitz_bounds() {
        assert_eq!(ExprMap::identity(2).lipschitz(), int(1));
        assert_eq!(ExprMap::parse("1 - x1, 1/2", 2).unwrap().lipschitz(), int(1));
        assert_eq!(ExprMap::parse("x1 + x2, x1 - 3*x2", 2).unwrap().lipschitz(), int(4));
        // d/dx (x^2) ≤ 2 on [0,1]
        assert_eq!(ExprMap::parse("x1*x1", 1).unwrap().lipschitz(), int(2));
        // per-coordinate maxima (2, 1): sound, though the sharp constant is 2
        assert_eq!(ExprMap::parse("min(2*x1, x2), 0", 2).unwrap().lipschitz(), int(3));
    }
}
