//! Presentations of thin Schubert cells and of inverse limits, with the
//! triangular criterion and the elimination procedure that certify them.

pub mod dims;
pub mod poly;
pub mod presentation;
pub mod qsp;
pub mod quadext;
pub mod soundness;

pub use dims::{b_maximal_bases, certify_presentation, certify_presentation_with, dim_thin_schubert, is_b_maximal, Certified, DimEvidence, DimRule};
pub use poly::{Monomial, Poly};
pub use presentation::{
    build_presentation, build_sigma_presentation, combine, d_value, in_semigroup, reduce_poly, semigroup_factors,
    MatrixTemplate, PresentationJson, RingPresentation, Substitution, TriangularWitness,
};
pub use qsp::{verify_qsp_algebra, QspReport};
pub use quadext::QuadExt;
pub use soundness::{check_reduction, SoundnessReport, DEFAULT_POINTS, DEFAULT_SEED};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchubertError {
    #[error("{0} is not a basis")]
    NotABasis(String),
    #[error("{0} is not a basis of every vertex matroid")]
    NoCommonBasis(String),
    #[error("subcomplex is not vertex-connecting")]
    NotVertexConnecting,
    #[error("empty subcomplex")]
    EmptyComplex,
    #[error("unsound reduction: {0}")]
    Unsound(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known::{self, qsp, u_template, v_template, w_template};
    use crate::matroid::subsets::{parse_label, set_from};
    use crate::matroid::Matroid;
    use crate::rational::q;

    fn s(l: &str) -> u16 {
        parse_label(l).unwrap()
    }

    #[test]
    fn uniform_presentation() {
        let p = build_presentation(&Matroid::uniform(3, 8), s("123")).unwrap();
        assert_eq!(p.num_variables(), 15);
        assert!(p.ideal_gens.is_empty());
        assert_eq!(p.semigroup_gens.len(), 56);
        assert_eq!(d_value(&Matroid::uniform(3, 8), s("123")).unwrap(), 15);
    }

    #[test]
    fn qsp_presentation_at_123() {
        let p = build_presentation(&qsp(), s("123")).unwrap();
        assert_eq!(p.num_variables(), 13);
        assert_eq!(p.ideal_gens.len(), 6);
        let names = p.variable_names();
        assert!(!names.contains(&"x_3_3".to_string()));
        assert!(!names.contains(&"x_1_2".to_string()));
        assert_eq!(d_value(&qsp(), s("123")).unwrap(), 13);
    }

    #[test]
    fn not_a_basis_is_rejected() {
        assert!(matches!(build_presentation(&qsp(), s("126")), Err(SchubertError::NotABasis(_))));
        assert!(d_value(&qsp(), s("126")).is_err());
    }

    #[test]
    fn variable_count_equals_d_value() {
        let q = known::u_template(&[s("1"), s("2"), s("6"), s("34578")]);
        for mu in q.bases() {
            let p = build_presentation(&q, mu).unwrap();
            assert_eq!(p.num_variables(), d_value(&q, mu).unwrap());
        }
    }

    #[test]
    fn template_dimensions() {
        let u = u_template(&[s("34578"), s("1"), s("2"), s("6")]);
        assert_eq!(dim_thin_schubert(&u).unwrap().dimension, Some(7));
        let v = v_template(&[s("12"), s("34"), s("56")], &[s("7"), s("8")]);
        assert_eq!(dim_thin_schubert(&v).unwrap().dimension, Some(8));
        let d = dim_thin_schubert(&qsp()).unwrap();
        assert_eq!((d.dimension, d.components), (Some(7), 2));
    }

    #[test]
    fn template_dimensions_agree_with_elimination() {
        let cases = [
            u_template(&[s("34578"), s("1"), s("2"), s("6")]),
            v_template(&[s("12"), s("34"), s("56")], &[s("7"), s("8")]),
            w_template(s("12"), &[s("34"), s("56")], &[s("7"), s("8")]),
            w_template(s("1"), &[s("2"), s("4")], &[s("3"), s("5")]),
        ];
        for qm in cases {
            let expected = dim_thin_schubert(&qm).unwrap().dimension.unwrap();
            let mut certified = 0;
            for mu in qm.bases() {
                let p = build_presentation(&qm, mu).unwrap();
                if let Some(c) = certify_presentation(&p).unwrap() {
                    assert_eq!(c.reduced.num_variables(), expected);
                    certified += 1;
                }
            }
            assert!(certified > 0);
        }
    }

    #[test]
    fn w_on_five_elements_reduces_to_four_units() {
        let qm = w_template(s("1"), &[s("2"), s("4")], &[s("3"), s("5")]);
        let mu = qm.bases().next().unwrap();
        let c = certify_presentation(&build_presentation(&qm, mu).unwrap()).unwrap().unwrap();
        assert_eq!(c.reduced.num_variables(), 4);
    }

    #[test]
    fn reduce_poly_examples() {
        let x = |k| Poly::var(4, k);
        let f = x(0).pow(2).mul(&x(1)).sub(&x(0).mul(&x(2)));
        assert_eq!(reduce_poly(&f, &[]), x(0).mul(&x(1)).sub(&x(2)));
        let g = x(2).add(&x(3));
        let h = g.mul(&x(0).sub(&x(1)));
        assert_eq!(reduce_poly(&h, &[g.clone()]), x(0).sub(&x(1)));
        let irreducible = x(0).mul(&x(1)).sub(&Poly::one(4));
        assert_eq!(reduce_poly(&irreducible, &[g]), irreducible);
    }

    fn toy(nvars: usize, gens: Vec<Poly>) -> RingPresentation {
        let mut p = build_presentation(&Matroid::uniform(2, nvars + 2), set_from(&[0, 1])).unwrap();
        // Reuse the chart's variables x_1_j, x_2_j as plain unknowns.
        p.ideal_gens = gens;
        p.semigroup_gens = Vec::new();
        p
    }

    #[test]
    fn triangular_criterion_examples() {
        let x = |k| Poly::var(4, k);
        let p = toy(2, vec![x(0).sub(&x(1).mul(&x(2)))]);
        let w = p.upper_triangular_check().unwrap();
        assert_eq!(w.rows, vec![0]);
        assert_eq!(w.columns, vec!["x_1_1".to_string()]);
        let p = toy(2, vec![x(0).pow(2).mul(&x(1).pow(2)).sub(&Poly::one(4))]);
        assert!(p.upper_triangular_check().is_none());
    }

    #[test]
    fn single_binomial_eliminates_one_variable() {
        let x = |k| Poly::var(4, k);
        let p = toy(2, vec![x(0).mul(&x(1)).sub(&x(2).mul(&x(3)))]);
        let r = p.reduce_ideal();
        assert!(r.ideal_is_zero());
        assert_eq!(r.num_variables(), 3);
        assert_eq!(r.substitution_log.len(), 1);
        let rep = check_reduction(&p, &r, 20, 7).unwrap();
        assert_eq!(rep.jacobian_rank, 1);
    }

    #[test]
    fn empty_ideal_is_unchanged() {
        let p = toy(2, vec![]);
        assert_eq!(p.reduce_ideal(), p);
    }

    #[test]
    fn semigroup_membership() {
        let x = |k| Poly::var(4, k);
        let g = x(0).add(&x(1));
        let h = x(2).sub(&x(3));
        let f = g.mul(&h).mul(&x(0)).scale(&q(5));
        assert!(in_semigroup(&f, &[g.clone(), h.clone()]));
        assert!(!in_semigroup(&f, &[g.clone()]));
        assert!(in_semigroup(&x(3).pow(3), &[]));
        assert_eq!(semigroup_factors(&[g.mul(&h), g.clone()]).len(), 2);
    }

    #[test]
    fn presentation_json_round_trips() {
        let p = build_presentation(&qsp(), s("123")).unwrap().reduce_ideal();
        let j = serde_json::to_string(&p).unwrap();
        let back: RingPresentation = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
    }
}
