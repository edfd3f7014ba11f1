//! Valuations of maximal minors of matrices over `K[t]`, `K = Q` or `Q(a)`.

use super::VerifyError;
use crate::matroid::subsets::{elements, label, table};
use crate::matroid::Matroid;
use crate::rational::{q, Q};
use crate::schubert::QuadExt;
use crate::subdivision::Weight;

/// Dense univariate polynomial; `coeffs[i]` multiplies `t^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    coeffs: Vec<QuadExt>,
}

impl TPoly {
    pub fn new(mut coeffs: Vec<QuadExt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: QuadExt) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(c: QuadExt, k: usize) -> Self {
        let mut v = vec![QuadExt::zero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn from_rationals(coeffs: &[Q]) -> Self {
        Self::new(coeffs.iter().cloned().map(QuadExt::rational).collect())
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| QuadExt::rational(q(c))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[QuadExt] {
        &self.coeffs
    }

    /// Lowest power of `t` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = QuadExt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![QuadExt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }
}

pub fn tdet(m: &[Vec<TPoly>]) -> TPoly {
    match m.len() {
        0 => TPoly::constant(QuadExt::one()),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        n => {
            let mut total = TPoly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<TPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&tdet(&minor));
                total = if j % 2 == 0 { total.add(&term) } else { total.sub(&term) };
            }
            total
        }
    }
}

/// `w_λ` is the lowest `t`-degree of the `λ`-minor.
pub fn plucker_valuations(m: &[Vec<TPoly>]) -> Result<Weight, VerifyError> {
    let r = m.len();
    let n = m.first().map_or(0, |row| row.len());
    if r == 0 || n < r || m.iter().any(|row| row.len() != n) {
        return Err(VerifyError::Shape(format!("{r} rows of unequal or short length")));
    }
    let mut values = Vec::new();
    for &lambda in table(n, r).subsets() {
        let cols: Vec<usize> = elements(lambda).collect();
        let sub: Vec<Vec<TPoly>> = m.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        let v = tdet(&sub)
            .valuation()
            .ok_or_else(|| VerifyError::Degenerate(label(lambda)))?;
        values.push(q(v as i64));
    }
    Weight::new(Matroid::uniform(r, n), values).map_err(|e| VerifyError::Shape(e.to_string()))
}

/// The degeneration `A_t` of the realization of the special matroid; at
/// `t = 0` it is the matrix over `Q(a)`.
pub fn a_t() -> Vec<Vec<TPoly>> {
    let z = QuadExt::int;
    let a = QuadExt::a;
    // entries as coefficient lists in t
    let p = |c: Vec<QuadExt>| TPoly::new(c);
    let ip = |c: &[i64]| TPoly::from_integers(c);
    vec![
        vec![ip(&[1]), ip(&[0]), ip(&[0]), ip(&[1]), ip(&[0, 1]), ip(&[1, 4]), ip(&[1, -1]), ip(&[1, 0, -1])],
        vec![ip(&[0]), ip(&[1]), ip(&[0]), ip(&[1, 1]), ip(&[1, 1]), p(vec![a(), z(1)]), ip(&[1, -2]), p(vec![a(), z(-1)])],
        vec![ip(&[0]), ip(&[0]), ip(&[1]), ip(&[1, 2]), ip(&[1, 3]), ip(&[0, 2]), p(vec![&z(1) - &a(), z(1)]), ip(&[1, 0, 1])],
    ]
}
