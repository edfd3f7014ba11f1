//! Classification of weights into groups, the matching verification
//! strategies and the certificates they emit.

pub mod certificate;
pub mod classify;
pub mod plucker;
pub mod sdc;
pub mod strategy;

pub use certificate::{dimension_audit, replay_presentations, Certificate, EvidenceRule, EvidenceStep, Term, CSP_GROUP};
pub use classify::{classify, detect_csp, structure, GroupLabel, Structure};
pub use plucker::{a_t, plucker_valuations, tdet, TPoly};
pub use sdc::{b_maximal_in, is_face, is_internal, is_internal_lp, sdc_check, SdcJustification};
pub use strategy::{verify, verify_with, VerifyOptions};

use crate::matroid::MatroidError;
use crate::schubert::SchubertError;
use crate::subdivision::SubdivisionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Schubert(#[from] SchubertError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("subdivision is not matroidal")]
    NotMatroidal,
    #[error("none of the six conditions holds")]
    Unclassified,
    #[error("not a face of the matroid polytope")]
    NotAFace,
    #[error("minor {0} vanishes identically")]
    Degenerate(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("audit: {0}")]
    Audit(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known::{self, qsp, u_prime_template, u_template};
    use crate::matroid::subsets::parse_label;
    use crate::matroid::{Matroid, Permutation};

    fn s(l: &str) -> u16 {
        parse_label(l).unwrap()
    }

    #[test]
    fn group_labels() {
        assert_eq!(classify(&known::w_sp()).unwrap(), GroupLabel { group: 2, h_index: None });
        assert_eq!(classify(&known::tree_example()).unwrap().group, 2);
        assert_eq!(classify(&known::mantis_example()).unwrap().group, 5);
        assert_eq!(
            classify(&known::six_fin_example()).unwrap(),
            GroupLabel { group: 6, h_index: Some(0) }
        );
        assert_eq!(GroupLabel { group: 6, h_index: Some(0) }.to_string(), "G6/H0");
    }

    #[test]
    fn csp_detection() {
        assert!(detect_csp(&known::w_sp()));
        let sigma = Permutation::new(vec![3, 0, 7, 1, 6, 2, 5, 4]).unwrap();
        assert!(detect_csp(&known::w_sp().permuted(&sigma)));
        assert!(!detect_csp(&known::tree_example()));
    }

    #[test]
    fn sdc_examples() {
        let u = u_template(&[s("1"), s("2"), s("6"), s("34578")]);
        let up = u_prime_template(&[s("1"), s("2"), s("6")], s("34578"));
        assert!(matches!(sdc_check(&u, &up).unwrap(), Some(SdcJustification::Template { .. })));
        let full = Matroid::uniform(3, 8);
        let facet = full.face_of_subset(s("1"));
        assert!(matches!(
            sdc_check(&full, &facet).unwrap(),
            Some(SdcJustification::BMaximal { .. })
        ));
        let sp = qsp();
        let facet = sp.face_of_subset(s("126"));
        assert!(is_internal(&facet));
        assert_eq!(sdc_check(&sp, &facet).unwrap(), None);
        assert_eq!(sdc_check(&up, &u), Err(VerifyError::NotAFace));
    }

    #[test]
    fn internal_agrees_with_lp() {
        let m = u_template(&[s("1"), s("2"), s("6"), s("34578")]);
        for lambda in [s("1"), s("12"), s("126"), s("345"), s("3457")] {
            let f = m.face_of_subset(lambda);
            assert_eq!(is_internal(&f), is_internal_lp(&f), "{lambda:b}");
        }
    }

    #[test]
    fn faces_are_recognized() {
        let m = qsp();
        assert!(is_face(&m, &m.face_of_subset(s("12"))));
        let not_face = Matroid::from_bases(8, 3, &[s("123"), s("456")]);
        assert!(not_face.is_err() || !is_face(&m, &not_face.unwrap()));
    }

    #[test]
    fn a_t_gives_the_special_weight() {
        let w = plucker_valuations(&a_t()).unwrap();
        assert_eq!(w.project_lineality(), known::w_sp().project_lineality());
    }

    #[test]
    fn constant_matrix_gives_zero_weight() {
        let c = |k: i64| TPoly::from_integers(&[k]);
        let m = vec![
            vec![c(1), c(0), c(0), c(1), c(1)],
            vec![c(0), c(1), c(0), c(1), c(2)],
            vec![c(0), c(0), c(1), c(1), c(3)],
        ];
        let w = plucker_valuations(&m).unwrap();
        assert!(w.values().iter().all(|v| *v == crate::rational::q(0)));
        let mut bad = m.clone();
        bad[2][4] = c(1);
        bad[1][4] = c(1);
        assert!(matches!(plucker_valuations(&bad), Err(VerifyError::Degenerate(l)) if l == "145"));
    }

    #[test]
    fn tree_example_certificate() {
        let c = verify(&known::tree_example());
        assert!(c.verified, "{:?}", c.failure);
        assert_eq!((c.components, c.dimension), (1, Some(15)));
        let mut vd: Vec<i64> = c
            .evidence
            .iter()
            .filter(|s| s.rule == EvidenceRule::TreeVertex)
            .map(|s| s.contribution)
            .collect();
        let mut ed: Vec<i64> = c
            .evidence
            .iter()
            .filter(|s| s.rule == EvidenceRule::TreeEdge)
            .map(|s| -s.contribution)
            .collect();
        vd.sort_unstable();
        ed.sort_unstable();
        assert_eq!(vd, vec![7, 7, 7, 7, 9, 10]);
        assert_eq!(ed, vec![6, 6, 6, 6, 8]);
        assert_eq!(dimension_audit(&c).unwrap(), 15);
    }

    #[test]
    fn special_certificate() {
        let c = verify(&known::w_sp());
        assert!(c.verified, "{:?}", c.failure);
        assert_eq!(c.group, CSP_GROUP);
        assert_eq!((c.components, c.dimension), (2, Some(15)));
        assert_eq!(dimension_audit(&c).unwrap(), 15);
    }

    #[test]
    fn trivial_weight_is_g1() {
        let c = verify(&crate::subdivision::Weight::zero(Matroid::uniform(3, 8)));
        assert!(c.verified, "{:?}", c.failure);
        assert_eq!(c.group, "G1");
        assert_eq!(dimension_audit(&c).unwrap(), 15);
        assert_eq!(replay_presentations(&c, 5, 1).unwrap().len(), 1);
    }

    #[test]
    fn audit_catches_tampering() {
        let mut c = verify(&known::tree_example());
        let step = c.evidence.iter_mut().find(|s| s.rule == EvidenceRule::TreeEdge).unwrap();
        step.terms[0].dimension += 1;
        assert!(matches!(dimension_audit(&c), Err(VerifyError::Audit(_))));
    }
}
