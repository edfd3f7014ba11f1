//! Random-point replay of an elimination and the tangent-space check.

use super::presentation::{back_substitute, nonzero_on, RingPresentation};
use super::SchubertError;
use crate::linalg;
use crate::rational::{q, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_POINTS: usize = 20;
pub const DEFAULT_SEED: u64 = 0x5eed_38;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub points: usize,
    pub jacobian_rank: usize,
    pub codimension: usize,
}

/// Sample points on the remaining variables of `reduced`, recover the
/// eliminated ones from the log and check every generator of `original`:
/// ideal generators vanish, semigroup generators do not. At the first point
/// the Jacobian of the original ideal must have rank equal to the number of
/// eliminated variables.
pub fn check_reduction(
    original: &RingPresentation,
    reduced: &RingPresentation,
    points: usize,
    seed: u64,
) -> Result<SoundnessReport, SchubertError> {
    if !reduced.ideal_is_zero() {
        return Err(SchubertError::Unsound("reduced ideal is not zero".into()));
    }
    let nv = original.nvars();
    let factors = reduced.factors();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    let mut attempts = 0;
    let mut jacobian_rank = None;
    while found < points {
        attempts += 1;
        if attempts > 200 * points.max(1) {
            return Err(SchubertError::Unsound("no admissible sample point".into()));
        }
        let mut pt = vec![Q::zero(); nv];
        for &k in &reduced.variables {
            let mut v = 0i64;
            while v == 0 {
                v = rng.gen_range(-12..=12);
            }
            pt[k] = q(v);
        }
        if back_substitute(&reduced.substitution_log, &mut pt).is_none() || !nonzero_on(&factors, &pt) {
            continue;
        }
        if let Some(f) = original.ideal_gens.iter().find(|f| !f.eval(&pt).is_zero()) {
            return Err(SchubertError::Unsound(format!(
                "generator {} does not vanish",
                original.display_poly(f)
            )));
        }
        if let Some(s) = original.semigroup_gens.iter().find(|s| s.eval(&pt).is_zero()) {
            return Err(SchubertError::Unsound(format!(
                "semigroup element {} vanishes",
                original.display_poly(s)
            )));
        }
        if jacobian_rank.is_none() {
            jacobian_rank = Some(jacobian_rank_at(original, &pt));
        }
        found += 1;
    }
    let codimension = original.num_variables() - reduced.num_variables();
    let rank = jacobian_rank.unwrap_or(0);
    if points > 0 && rank != codimension {
        return Err(SchubertError::Unsound(format!(
            "Jacobian rank {rank} but {codimension} variables were eliminated"
        )));
    }
    Ok(SoundnessReport { points, jacobian_rank: rank, codimension })
}

/// Rank of the Jacobian of the ideal generators with respect to the
/// presentation variables.
pub fn jacobian_rank_at(p: &RingPresentation, pt: &[Q]) -> usize {
    let rows: Vec<Vec<Q>> = p
        .ideal_gens
        .iter()
        .map(|f| p.variables.iter().map(|&k| f.derivative(k).eval(pt)).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    linalg::rank(&rows)
}
