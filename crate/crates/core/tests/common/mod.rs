//! Helpers shared by the integration tests: random weights and matrices,
//! and brute-force oracles that do not reuse library code paths.
#![allow(dead_code)]

use gr38_core::lp::{LinearProgram, LpOutcome, Relation};
use gr38_core::matroid::subsets::{elements, table};
use gr38_core::matroid::{BasisMask, Matroid};
use gr38_core::rational::{q, Q};
use gr38_core::subdivision::Weight;
use gr38_core::verify::{plucker_valuations, TPoly, VerifyError};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer lift with values in `0..=max` on every vertex of `Δ(r, n)`.
pub fn random_lift(rng: &mut impl Rng, r: usize, n: usize, max: i64) -> Weight {
    let amb = Matroid::uniform(r, n);
    let values: Vec<i64> = (0..amb.num_bases()).map(|_| rng.gen_range(0..=max)).collect();
    Weight::from_integers(amb, &values).unwrap()
}

/// Lift that is zero except on `k` random vertices.
pub fn sparse_lift(rng: &mut impl Rng, r: usize, n: usize, k: usize, max: i64) -> Weight {
    let amb = Matroid::uniform(r, n);
    let mut values = vec![0i64; amb.num_bases()];
    for _ in 0..k {
        let i = rng.gen_range(0..values.len());
        values[i] = rng.gen_range(1..=max);
    }
    Weight::from_integers(amb, &values).unwrap()
}

/// Random `r × n` matrix with entries `c t^k + c' t^(k+1)`; resampled until
/// no maximal minor vanishes.
pub fn random_valuated(rng: &mut impl Rng, r: usize, n: usize) -> Weight {
    loop {
        let m: Vec<Vec<TPoly>> = (0..r)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let k = rng.gen_range(0..=3usize);
                        let mut c = vec![0i64; k + 2];
                        c[k] = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
                        c[k + 1] = rng.gen_range(-3..=3);
                        TPoly::from_integers(&c)
                    })
                    .collect()
            })
            .collect();
        match plucker_valuations(&m) {
            Ok(w) => return w,
            Err(VerifyError::Degenerate(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> gr38_core::matroid::Permutation {
    let mut images: Vec<u8> = (0..n as u8).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    gr38_core::matroid::Permutation::new(images).unwrap()
}

/// Textbook exchange axiom over a list of `r`-sets.
pub fn exchange_holds(sets: &[u16]) -> bool {
    let all: BTreeSet<u16> = sets.iter().copied().collect();
    for &b1 in sets {
        for &b2 in sets {
            for x in elements(b1 & !b2) {
                let ok = elements(b2 & !b1).any(|y| all.contains(&((b1 & !(1 << x)) | 1 << y)));
                if !ok {
                    return false;
                }
            }
        }
    }
    !sets.is_empty()
}

pub fn sets_of(n: usize, r: usize, mask: BasisMask) -> Vec<u16> {
    table(n, r).iter_mask(mask).collect()
}

fn affine_rank(points: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<Q>> = points
        .iter()
        .map(|p| p.iter().map(|&x| q(x)).chain(std::iter::once(Q::one())).collect())
        .collect();
    gr38_core::linalg::rank(&rows)
}

/// Maximal cells of the regular subdivision of `Δ(r, n)` by enumerating all
/// vertex subsets of full dimension and asking an LP whether the subset is
/// exactly the set of vertices on some lower face of the lift.
pub fn brute_force_cells(w: &Weight) -> BTreeSet<BasisMask> {
    let amb = w.ambient();
    let (n, r) = (amb.n(), amb.rank());
    let t = table(n, r);
    let pts: Vec<Vec<i64>> = t
        .subsets()
        .iter()
        .map(|&s| (0..n).map(|i| (s >> i & 1) as i64).collect())
        .collect();
    let m = pts.len();
    assert!(m <= 16, "brute force only for tiny hypersimplices");
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let chosen: Vec<Vec<i64>> = idx.iter().map(|&i| pts[i].clone()).collect();
        if affine_rank(&chosen) != n {
            continue;
        }
        // variables a_1..a_n, b, delta
        let mut lp = LinearProgram::new(n + 2);
        for v in 0..=n {
            lp.set_free(v);
        }
        for i in 0..m {
            let mut row: Vec<Q> = pts[i].iter().map(|&x| q(x)).collect();
            row.push(Q::one());
            let wi = w.values()[i].clone();
            if mask >> i & 1 == 1 {
                row.push(Q::zero());
                lp.add(row, Relation::Eq, wi);
            } else {
                row.push(Q::one());
                lp.add(row, Relation::Le, wi);
            }
        }
        let mut cap = vec![Q::zero(); n + 2];
        cap[n + 1] = Q::one();
        lp.add(cap.clone(), Relation::Le, Q::one());
        lp.set_objective(cap);
        if let LpOutcome::Optimal { value, .. } = lp.solve() {
            if value > Q::zero() {
                out.insert(mask as BasisMask);
            }
        }
    }
    out
}
