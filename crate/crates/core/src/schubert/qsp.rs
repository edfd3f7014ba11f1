//! Exact checks of the special sparse paving matroid over `Q(a)`, `a² = a − 1`.

use super::poly::Poly;
use super::presentation::{build_presentation, MatrixTemplate};
use super::quadext::{det, QuadExt};
use crate::known::qsp;
use crate::matroid::subsets::{elements, label, parse_label, table};
use serde::Serialize;

/// The representing matrix with entries in `Q(a)`.
pub fn qsp_matrix() -> Vec<Vec<QuadExt>> {
    let i = QuadExt::int;
    let a = QuadExt::a;
    let one_minus_a = &i(1) - &a();
    vec![
        vec![i(1), i(0), i(0), i(1), i(0), i(1), i(1), i(1)],
        vec![i(0), i(1), i(0), i(1), i(1), a(), i(1), a()],
        vec![i(0), i(0), i(1), i(1), i(1), i(0), one_minus_a, i(1)],
    ]
}

/// Maximal minor on the columns of `lambda`, in increasing order.
pub fn quad_minor(m: &[Vec<QuadExt>], lambda: u16) -> QuadExt {
    let cols: Vec<usize> = elements(lambda).collect();
    let sub: Vec<Vec<QuadExt>> = m.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
    det(&sub)
}

pub fn eval_quad(f: &Poly, point: &[QuadExt]) -> QuadExt {
    let mut total = QuadExt::zero();
    for (m, c) in f.terms() {
        let mut t = QuadExt::rational(c.clone());
        for (k, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t = &t * &point[k];
            }
        }
        total = &total + &t;
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct QspReport {
    /// Each nonbasis with its minor.
    pub nonbasis_minors: Vec<(String, String)>,
    pub nonbases_vanish: bool,
    pub bases_nonzero: usize,
    pub bases_total: usize,
    /// Discriminant of `x² − x + 1`.
    pub discriminant: i64,
    /// The matrix lies on the affine chart at 123 of the presentation.
    pub chart_point_valid: bool,
    pub passed: bool,
}

pub fn verify_qsp_algebra() -> QspReport {
    let m = qsp_matrix();
    let matroid = qsp();
    let mut nonbasis_minors = Vec::new();
    let mut nonbases_vanish = true;
    let mut bases_nonzero = 0;
    for &lambda in table(8, 3).subsets() {
        let d = quad_minor(&m, lambda);
        if matroid.is_basis(lambda) {
            if !d.is_zero() {
                bases_nonzero += 1;
            }
        } else {
            nonbases_vanish &= d.is_zero();
            nonbasis_minors.push((label(lambda), d.to_string()));
        }
    }
    // b² − 4ac for x² − x + 1
    let discriminant = 1 - 4;

    let mu = parse_label("123").unwrap();
    let chart_point_valid = match build_presentation(&matroid, mu) {
        Ok(p) => {
            let mt = MatrixTemplate::new(3, 8, mu);
            let point: Vec<QuadExt> = (0..mt.nvars())
                .map(|k| {
                    let (i, j) = mt.var_position(k);
                    m[i][mt.other_cols[j]].clone()
                })
                .collect();
            p.ideal_gens.iter().all(|f| eval_quad(f, &point).is_zero())
                && p.semigroup_gens.iter().all(|s| !eval_quad(s, &point).is_zero())
        }
        Err(_) => false,
    };
    let bases_total = matroid.num_bases();
    QspReport {
        passed: nonbases_vanish
            && nonbasis_minors.len() == 8
            && bases_nonzero == bases_total
            && discriminant < 0
            && chart_point_valid,
        nonbasis_minors,
        nonbases_vanish,
        bases_nonzero,
        bases_total,
        discriminant,
        chart_point_valid,
    }
}
