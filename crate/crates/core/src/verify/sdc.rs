//! Rules certifying that `Gr(Q) → Gr(P)` is smooth and dominant with
//! connected fibres for a face `P ≤ Q`.

use super::VerifyError;
use crate::lp::{LinearProgram, Relation};
use crate::matroid::subsets::label;
use crate::matroid::{classify_template, ElementSet, Matroid, TemplateKind};
use crate::rational::{q, Q};
use crate::schubert::{d_value, dim_thin_schubert};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SdcJustification {
    /// Connected `Q` with at most two lines and internal `P`.
    LinesInternal { lines: usize },
    /// `Q` is a U, V or W template.
    Template { template: String },
    /// `Q` is `(B, μ)`-maximal and `μ ∈ P`.
    BMaximal { basis: String },
    /// The simplification of `Q` is small enough for the low-rank results:
    /// at most six classes, or seven with a connected simplification and
    /// internal restricted face.
    ParallelElements { classes: usize },
}

/// `Δ(P)` is a face of `Δ(Q)`: some `v` is constant on `P` and strictly
/// larger on the rest of `Q`.
pub fn is_face(q_m: &Matroid, p: &Matroid) -> bool {
    if q_m.n() != p.n() || q_m.rank() != p.rank() || p.mask() & !q_m.mask() != 0 {
        return false;
    }
    if p.mask() == q_m.mask() {
        return true;
    }
    let n = q_m.n();
    // variables v_0..v_{n-1}, c; all free
    let mut lp = LinearProgram::new(n + 1);
    for i in 0..=n {
        lp.set_free(i);
    }
    let row = |b: ElementSet| -> Vec<Q> {
        let mut r: Vec<Q> = (0..n).map(|i| if b >> i & 1 == 1 { Q::one() } else { Q::zero() }).collect();
        r.push(q(-1));
        r
    };
    for b in q_m.bases() {
        if p.is_basis(b) {
            lp.add(row(b), Relation::Eq, Q::zero());
        } else {
            lp.add(row(b), Relation::Ge, Q::one());
        }
    }
    lp.solve().is_feasible()
}

/// `Δ(P)` meets the interior of the hypersimplex.
pub fn is_internal(p: &Matroid) -> bool {
    p.is_loopless() && p.coloops() == 0
}

/// The LP form of [`is_internal`]: some convex combination of bases has
/// every coordinate strictly between 0 and 1.
pub fn is_internal_lp(p: &Matroid) -> bool {
    let bases: Vec<ElementSet> = p.bases().collect();
    let m = bases.len();
    // weights λ_b, then ε; maximize ε
    let mut lp = LinearProgram::new(m + 1);
    let mut obj = vec![Q::zero(); m + 1];
    obj[m] = Q::one();
    lp.set_objective(obj);
    let mut sum = vec![Q::one(); m + 1];
    sum[m] = Q::zero();
    lp.add(sum, Relation::Eq, Q::one());
    let mut cap = vec![Q::zero(); m + 1];
    cap[m] = Q::one();
    lp.add(cap, Relation::Le, Q::one());
    for i in 0..p.n() {
        let coord: Vec<Q> = bases.iter().map(|&b| q((b >> i & 1) as i64)).collect();
        let mut lo = coord.clone();
        lo.push(q(-1));
        lp.add(lo, Relation::Ge, Q::zero());
        let mut hi = coord;
        hi.push(Q::one());
        lp.add(hi, Relation::Le, Q::one());
    }
    match lp.solve() {
        crate::lp::LpOutcome::Optimal { value, .. } => value > Q::zero(),
        crate::lp::LpOutcome::Unbounded => true,
        crate::lp::LpOutcome::Infeasible => false,
    }
}

/// First rule that applies, in the order template, `B`-maximal, lines,
/// parallel elements.
pub fn sdc_check(q_m: &Matroid, p: &Matroid) -> Result<Option<SdcJustification>, VerifyError> {
    if !is_face(q_m, p) {
        return Err(VerifyError::NotAFace);
    }
    let t = classify_template(q_m);
    if matches!(t.kind, TemplateKind::U | TemplateKind::V | TemplateKind::W) {
        return Ok(Some(SdcJustification::Template { template: t.describe() }));
    }
    if let Some(mu) = b_maximal_in(q_m, p)? {
        return Ok(Some(SdcJustification::BMaximal { basis: label(mu) }));
    }
    if !q_m.is_loopless() {
        return Ok(None);
    }
    if q_m.is_connected() && is_internal(p) {
        let lines = q_m.lines()?.len();
        if lines <= 2 {
            return Ok(Some(SdcJustification::LinesInternal { lines }));
        }
    }
    Ok(parallel_rule(q_m, p)?.map(|classes| SdcJustification::ParallelElements { classes }))
}

/// A basis `μ ∈ P` at which `Q` is `B`-maximal.
pub fn b_maximal_in(q_m: &Matroid, p: &Matroid) -> Result<Option<ElementSet>, VerifyError> {
    let ev = dim_thin_schubert(q_m)?;
    let Some(dim) = ev.dimension.filter(|_| ev.components == 1) else {
        return Ok(None);
    };
    for mu in p.bases() {
        if d_value(q_m, mu)? == dim {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

fn parallel_rule(q_m: &Matroid, p: &Matroid) -> Result<Option<usize>, VerifyError> {
    if q_m.rank() != 3 {
        return Ok(None);
    }
    let classes = q_m.parallel_classes()?;
    if classes.len() == q_m.n() {
        return Ok(None);
    }
    let s = classes.iter().fold(0, |acc, &c| acc | 1 << c.trailing_zeros());
    let k = classes.len();
    let qs = q_m.restriction(s)?.matroid;
    let ps = p.restriction(s)?.matroid;
    if ps.rank() != 3 {
        return Ok(None);
    }
    let ok = k <= 6 || (k == 7 && qs.is_connected() && is_internal(&ps));
    Ok(ok.then_some(k))
}
