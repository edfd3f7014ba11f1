//! Certificates, their evidence trail and the independent audits.

use super::classify::GroupLabel;
use super::VerifyError;
use crate::schubert::{check_reduction, PresentationJson, RingPresentation, SoundnessReport};
use crate::subdivision::Weight;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceRule {
    /// Which conditions hold; carries no dimension.
    Classification,
    /// Center of the star for the special cone.
    SpecialMatroid,
    /// Removal of a leaf vertex and its edge.
    LeafPair,
    /// Removal of a branch vertex and the edge it hangs from.
    BranchLeaf,
    TreeVertex,
    TreeEdge,
    /// Coordinate ring of an inverse limit over a vertex-intersecting
    /// subcomplex, certified regular.
    SigmaPresentation,
    Fin,
}

/// One signed dimension in a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub cell: String,
    pub dimension: i64,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceStep {
    pub rule: EvidenceRule,
    pub refs: Vec<String>,
    pub data: serde_json::Value,
    #[serde(default)]
    pub terms: Vec<Term>,
    pub contribution: i64,
}

impl EvidenceStep {
    pub fn new(rule: EvidenceRule, refs: Vec<String>, data: serde_json::Value, terms: Vec<Term>) -> Self {
        let contribution = terms.iter().map(|t| t.sign as i64 * t.dimension).sum();
        Self {
            rule,
            refs,
            data,
            terms,
            contribution,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// The weight projected off the lineality space.
    pub weight: Weight,
    /// `G1`..`G6`, `G6/Hk`, or `CSP_SPECIAL`.
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<GroupLabel>,
    pub verified: bool,
    pub smooth: bool,
    pub components: usize,
    pub dimension: Option<i64>,
    pub evidence: Vec<EvidenceStep>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

pub const CSP_GROUP: &str = "CSP_SPECIAL";

impl Certificate {
    pub fn is_csp(&self) -> bool {
        self.group == CSP_GROUP
    }

    pub fn expected_dimension(&self) -> i64 {
        let amb = self.weight.ambient();
        (amb.rank() * (amb.n() - amb.rank())) as i64
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Re-sum every step from its terms and compare with the stated and the
/// expected dimension.
pub fn dimension_audit(c: &Certificate) -> Result<i64, VerifyError> {
    let mut total = 0i64;
    for (i, step) in c.evidence.iter().enumerate() {
        let mut sum = 0i64;
        for t in &step.terms {
            if t.sign != 1 && t.sign != -1 {
                return Err(VerifyError::Audit(format!("step {i}: term {} has sign {}", t.cell, t.sign)));
            }
            sum += t.sign as i64 * t.dimension;
        }
        if sum != step.contribution {
            return Err(VerifyError::Audit(format!(
                "step {i} ({:?}): terms sum to {sum}, contribution says {}",
                step.rule, step.contribution
            )));
        }
        total += sum;
    }
    let Some(stated) = c.dimension else {
        return Err(VerifyError::Audit("certificate states no dimension".into()));
    };
    if total != stated {
        return Err(VerifyError::Audit(format!("evidence sums to {total}, certificate says {stated}")));
    }
    let expected = c.expected_dimension();
    if stated != expected {
        return Err(VerifyError::Audit(format!("dimension {stated}, expected {expected}")));
    }
    Ok(total)
}

/// Replay every recorded elimination on fresh random points.
pub fn replay_presentations(c: &Certificate, points: usize, seed: u64) -> Result<Vec<SoundnessReport>, VerifyError> {
    let mut out = Vec::new();
    for step in c.evidence.iter().filter(|s| s.rule == EvidenceRule::SigmaPresentation) {
        let load = |key: &str| -> Result<RingPresentation, VerifyError> {
            let j: PresentationJson = serde_json::from_value(step.data[key].clone())
                .map_err(|e| VerifyError::Audit(format!("{key}: {e}")))?;
            Ok(RingPresentation::from_json(&j)?)
        };
        let original = load("presentation")?;
        let reduced = load("reduced")?;
        if reduced.num_variables() as i64 != step.contribution {
            return Err(VerifyError::Audit(format!(
                "reduced ring has {} variables, step contributes {}",
                reduced.num_variables(),
                step.contribution
            )));
        }
        out.push(check_reduction(&original, &reduced, points, seed)?);
    }
    Ok(out)
}
