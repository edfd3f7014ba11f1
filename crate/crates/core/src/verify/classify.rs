//! Conditions (1)–(6) on the tight span and the groups they define.

use super::VerifyError;
use crate::matroid::{classify_template, TemplateKind};
use crate::subdivision::{regular_subdivision, tight_span, Fin, LeafPair, Subcomplex, TightSpan, Weight};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupLabel {
    pub group: u8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h_index: Option<u8>,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.h_index {
            Some(h) => write!(f, "G{}/H{}", self.group, h),
            None => write!(f, "G{}", self.group),
        }
    }
}

/// The pruned subcomplexes the conditions are evaluated on.
#[derive(Debug, Clone)]
pub struct Structure {
    pub ts: TightSpan,
    /// `TS(w)` minus its leaf pairs.
    pub sl: Subcomplex,
    pub leaf_pairs: Vec<LeafPair>,
    /// Iterated leaf removal, in removal order.
    pub sbr: Subcomplex,
    pub branch_pairs: Vec<LeafPair>,
    pub fins: Vec<Fin>,
    /// `Σ_L` minus the fins with connecting path of length 1.
    pub sl_fins1: Subcomplex,
    /// `Σ_L` minus all fins.
    pub sl_fins: Subcomplex,
    pub conditions: [bool; 6],
}

impl Structure {
    pub fn new(ts: TightSpan) -> Self {
        let full = ts.full();
        let (sl, leaf_pairs) = ts.prune_leaves(&full);
        let (sbr, branch_pairs) = iterated_leaves(&ts, &full);
        let fins = ts.find_fins(&sl);
        let fins1: Vec<Fin> = fins.iter().filter(|f| f.path_length == 1).cloned().collect();
        let sl_fins1 = ts.remove_fins(&sl, &fins1);
        let sl_fins = ts.remove_fins(&sl, &fins);
        let conditions = [
            ts.vertex_intersecting(&full).is_some(),
            ts.is_tree(&full),
            ts.vertex_intersecting(&sl).is_some(),
            ts.vertex_intersecting(&sbr).is_some(),
            ts.vertex_intersecting(&sl_fins1).is_some(),
            sl_fins.faces.is_empty() && ts.is_tree(&sl_fins),
        ];
        Structure {
            ts,
            sl,
            leaf_pairs,
            sbr,
            branch_pairs,
            fins,
            sl_fins1,
            sl_fins,
            conditions,
        }
    }

    pub fn fins_of_length_one(&self) -> Vec<Fin> {
        self.fins.iter().filter(|f| f.path_length == 1).cloned().collect()
    }

    /// First satisfied condition, with the `H` index for group 6.
    pub fn label(&self) -> Option<GroupLabel> {
        let j = self.conditions.iter().position(|&c| c)? + 1;
        let h_index = (j == 6).then(|| self.h_index());
        Some(GroupLabel { group: j as u8, h_index })
    }

    /// Leaves of the tree left after removing fins whose matroid is a V
    /// template.
    fn h_index(&self) -> u8 {
        self.sl_fins
            .vertices
            .iter()
            .filter(|&&v| self.ts.degree(&self.sl_fins, v) == 1)
            .filter(|&&v| classify_template(&self.ts.vertices[v]).kind == TemplateKind::V)
            .count() as u8
    }

    /// `TS(w)` is a star whose center is the special matroid and whose
    /// leaves are U templates.
    pub fn is_csp(&self) -> bool {
        let ts = &self.ts;
        if !ts.faces.is_empty() || !ts.is_tree(&ts.full()) || ts.vertices.len() < 2 {
            return false;
        }
        let full = ts.full();
        let centers: Vec<usize> = (0..ts.vertices.len())
            .filter(|&v| classify_template(&ts.vertices[v]).kind == TemplateKind::Qsp)
            .collect();
        let [c] = centers[..] else {
            return false;
        };
        ts.degree(&full, c) + 1 == ts.vertices.len()
            && (0..ts.vertices.len())
                .filter(|&v| v != c)
                .all(|v| classify_template(&ts.vertices[v]).kind == TemplateKind::U)
    }
}

/// Repeated leaf removal down to the branch core; a tree is consumed
/// entirely except for one vertex.
pub fn iterated_leaves(ts: &TightSpan, sub: &Subcomplex) -> (Subcomplex, Vec<LeafPair>) {
    let mut cur = sub.clone();
    let mut pairs = Vec::new();
    if ts.is_tree(sub) {
        return (Subcomplex::default(), pairs);
    }
    loop {
        let (next, p) = ts.prune_leaves(&cur);
        if p.is_empty() {
            return (cur, pairs);
        }
        pairs.extend(p);
        cur = next;
    }
}

pub fn structure(w: &Weight) -> Result<Structure, VerifyError> {
    let s = regular_subdivision(w)?;
    if !s.is_matroidal() {
        return Err(VerifyError::NotMatroidal);
    }
    Ok(Structure::new(tight_span(&s)?))
}

pub fn classify(w: &Weight) -> Result<GroupLabel, VerifyError> {
    structure(w)?.label().ok_or(VerifyError::Unclassified)
}

pub fn detect_csp(w: &Weight) -> bool {
    structure(w).map(|s| s.is_csp()).unwrap_or(false)
}
