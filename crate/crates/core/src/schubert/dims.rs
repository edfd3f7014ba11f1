//! Dimensions of thin Schubert cells and `B`-maximality.

use super::presentation::{build_presentation, d_value, RingPresentation, TriangularWitness};
use super::soundness::{check_reduction, SoundnessReport, DEFAULT_POINTS, DEFAULT_SEED};
use super::SchubertError;
use crate::matroid::subsets::label;
use crate::matroid::{classify_template, ElementSet, Matroid, TemplateKind};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimRule {
    /// Dimension formula of a U, U', V or W template.
    Template,
    /// The presentation at some basis reduces to the zero ideal.
    Reduction,
    /// The special sparse paving matroid: two components of dimension 7.
    SpecialMatroid,
    Unknown,
}

/// Evidence for a thin Schubert cell dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEvidence {
    pub dimension: Option<usize>,
    pub components: usize,
    pub rule: DimRule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangular: Option<TriangularWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub substitutions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soundness: Option<SoundnessReport>,
}

impl DimEvidence {
    fn unknown() -> Self {
        DimEvidence {
            dimension: None,
            components: 0,
            rule: DimRule::Unknown,
            template: None,
            basis: None,
            triangular: None,
            substitutions: None,
            soundness: None,
        }
    }

    /// Smooth and irreducible with a known dimension.
    pub fn is_irreducible(&self) -> bool {
        self.dimension.is_some() && self.components == 1
    }
}

/// Result of certifying a presentation as a regular domain.
#[derive(Debug, Clone)]
pub struct Certified {
    pub reduced: RingPresentation,
    pub triangular: Option<TriangularWitness>,
    pub soundness: SoundnessReport,
}

/// Try the triangular criterion, then elimination; replay the result on
/// random points. Returns `None` when the presentation is stuck or empty.
pub fn certify_presentation(p: &RingPresentation) -> Result<Option<Certified>, SchubertError> {
    certify_presentation_with(p, DEFAULT_POINTS, DEFAULT_SEED)
}

pub fn certify_presentation_with(
    p: &RingPresentation,
    points: usize,
    seed: u64,
) -> Result<Option<Certified>, SchubertError> {
    if p.unit_ideal {
        return Ok(None);
    }
    let triangular = if p.ideal_gens.is_empty() { None } else { p.upper_triangular_check() };
    let reduced = p.reduce_ideal();
    if !reduced.ideal_is_zero() {
        if triangular.is_some() {
            return Err(SchubertError::Unsound(
                "triangular criterion holds but elimination is stuck".into(),
            ));
        }
        return Ok(None);
    }
    if let Some(t) = &triangular {
        let expected = p.num_variables() - t.rows.len();
        if reduced.num_variables() != expected {
            return Err(SchubertError::Unsound(format!(
                "triangular criterion gives {expected}, elimination gives {}",
                reduced.num_variables()
            )));
        }
    }
    let soundness = match check_reduction(p, &reduced, points, seed) {
        Ok(s) => s,
        Err(SchubertError::Unsound(msg)) if msg.contains("no admissible") => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(Certified { reduced, triangular, soundness }))
}

fn cache() -> &'static Mutex<HashMap<(usize, usize, u128), DimEvidence>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, u128), DimEvidence>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Dimension of `Gr(Q)` with the rule that certifies it.
pub fn dim_thin_schubert(q: &Matroid) -> Result<DimEvidence, SchubertError> {
    let key = (q.n(), q.rank(), q.mask());
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let ev = compute_dim(q)?;
    cache().lock().unwrap().insert(key, ev.clone());
    Ok(ev)
}

fn compute_dim(q: &Matroid) -> Result<DimEvidence, SchubertError> {
    let t = classify_template(q);
    match t.kind {
        TemplateKind::Qsp => {
            return Ok(DimEvidence {
                dimension: Some(7),
                components: 2,
                rule: DimRule::SpecialMatroid,
                template: Some(t.describe()),
                ..DimEvidence::unknown()
            })
        }
        TemplateKind::None => {}
        _ => {
            return Ok(DimEvidence {
                dimension: t.dimension(),
                components: 1,
                rule: DimRule::Template,
                template: Some(t.describe()),
                ..DimEvidence::unknown()
            })
        }
    }
    let mut bases: Vec<(usize, ElementSet)> = q
        .bases()
        .map(|b| Ok((d_value(q, b)?, b)))
        .collect::<Result<_, SchubertError>>()?;
    bases.sort();
    for (_, mu) in bases {
        let p = build_presentation(q, mu)?;
        if let Some(c) = certify_presentation(&p)? {
            return Ok(DimEvidence {
                dimension: Some(c.reduced.num_variables()),
                components: 1,
                rule: DimRule::Reduction,
                template: None,
                basis: Some(label(mu)),
                triangular: c.triangular,
                substitutions: Some(c.reduced.substitution_log.len()),
                soundness: Some(c.soundness),
            });
        }
    }
    Ok(DimEvidence::unknown())
}

/// `dim Gr(Q) = d(Q, μ)`.
pub fn is_b_maximal(q: &Matroid, mu: ElementSet, dim: usize) -> Result<bool, SchubertError> {
    Ok(d_value(q, mu)? == dim)
}

/// All bases at which `Q` is `B`-maximal.
pub fn b_maximal_bases(q: &Matroid, dim: usize) -> Vec<ElementSet> {
    q.bases()
        .filter(|&b| d_value(q, b).map(|d| d == dim).unwrap_or(false))
        .collect()
}
