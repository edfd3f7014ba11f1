//! Scalars `p + q·a` with `a² = a − 1`.

use crate::rational::{format_rational, q, Q};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub p: Q,
    pub q: Q,
}

impl QuadExt {
    pub fn new(p: Q, q: Q) -> Self {
        QuadExt { p, q }
    }

    pub fn rational(p: Q) -> Self {
        QuadExt { p, q: Q::zero() }
    }

    pub fn int(n: i64) -> Self {
        QuadExt::rational(q(n))
    }

    /// The generator `a`.
    pub fn a() -> Self {
        QuadExt { p: Q::zero(), q: Q::one() }
    }

    pub fn zero() -> Self {
        QuadExt::int(0)
    }

    pub fn one() -> Self {
        QuadExt::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Norm to the rationals: `(p + q a)(p + q ā)` with `a + ā = 1`, `a ā = 1`.
    pub fn norm(&self) -> Q {
        &self.p * &self.p + &self.p * &self.q + &self.q * &self.q
    }

    pub fn conjugate(&self) -> Self {
        // ā = 1 − a
        QuadExt { p: &self.p + &self.q, q: -self.q.clone() }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QuadExt { p: c.p / &n, q: c.q / n })
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt { p: &self.p + &o.p, q: &self.q + &o.q }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt { p: &self.p - &o.p, q: &self.q - &o.q }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        // (p1 + q1 a)(p2 + q2 a) = p1p2 + (p1q2 + q1p2) a + q1q2 (a − 1)
        let qq = &self.q * &o.q;
        QuadExt {
            p: &self.p * &o.p - &qq,
            q: &self.p * &o.q + &self.q * &o.p + qq,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { p: -self.p.clone(), q: -self.q.clone() }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.p)),
            (true, false) => write!(f, "{}*a", format_rational(&self.q)),
            (false, false) => write!(f, "{} + {}*a", format_rational(&self.p), format_rational(&self.q)),
        }
    }
}

/// Determinant of a square matrix by cofactor expansion.
pub fn det(m: &[Vec<QuadExt>]) -> QuadExt {
    let n = m.len();
    match n {
        0 => QuadExt::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut total = QuadExt::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<QuadExt>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][c] * &det(&minor);
                total = if c % 2 == 0 { &total + &term } else { &total - &term };
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_satisfies_its_relation() {
        let a = QuadExt::a();
        let lhs = &(&(&a * &a) - &a) + &QuadExt::one();
        assert!(lhs.is_zero());
    }

    #[test]
    fn inverse_round_trips() {
        let x = QuadExt::new(q(3), q(-2));
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, QuadExt::one());
        assert!(QuadExt::zero().inverse().is_none());
    }

    #[test]
    fn norm_is_multiplicative() {
        let x = QuadExt::new(q(1), q(2));
        let y = QuadExt::new(q(-3), q(5));
        assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }
}
