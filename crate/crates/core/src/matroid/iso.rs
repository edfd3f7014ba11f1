use super::subsets::{elements, ElementSet, MaskIter};
use super::{Matroid, MatroidError};
use serde::{Deserialize, Serialize};

/// A bijection of `{0, .., n-1}`; `images[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    images: Vec<u8>,
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = MatroidError;

    fn try_from(images: Vec<u8>) -> Result<Self, MatroidError> {
        let n = images.len();
        let mut seen = 0u32;
        for &i in &images {
            if i as usize >= n || seen >> i & 1 == 1 {
                return Err(MatroidError::Malformed("not a bijection".into()));
            }
            seen |= 1 << i;
        }
        Ok(Self { images })
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u8).collect(),
        }
    }

    pub fn new(images: Vec<u8>) -> Result<Self, MatroidError> {
        images.try_into()
    }

    /// Swap of two elements.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, e: usize) -> usize {
        self.images[e] as usize
    }

    pub fn apply_set(&self, set: ElementSet) -> ElementSet {
        elements(set).fold(0, |acc, e| acc | 1 << self.images[e])
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    /// All permutations of `n` elements in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<u8> = (0..n as u8).collect();
        let mut out = vec![Self {
            images: cur.clone(),
        }];
        while next_permutation(&mut cur) {
            out.push(Self {
                images: cur.clone(),
            });
        }
        out
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Find `σ` with `σ(Q1) = Q2`, by backtracking over element images with
/// degree and parallel-class pruning.
pub fn is_isomorphic(q1: &Matroid, q2: &Matroid) -> Result<Option<Permutation>, MatroidError> {
    if q1.n() != q2.n() || q1.rank() != q2.rank() {
        return Err(MatroidError::ShapeMismatch(q1.rank(), q1.n(), q2.rank(), q2.n()));
    }
    if q1.num_bases() != q2.num_bases() {
        return Ok(None);
    }
    let n = q1.n();
    let sig1 = signatures(q1);
    let sig2 = signatures(q2);
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(None);
    }
    let bases1: Vec<ElementSet> = q1.bases().collect();
    let mut images = vec![u8::MAX; n];
    let mut used = 0u32;
    if search(0, q1, q2, &bases1, &sig1, &sig2, &mut images, &mut used) {
        Ok(Some(Permutation { images }))
    } else {
        Ok(None)
    }
}

/// Per-element invariant: (number of bases containing it, closure size).
fn signatures(q: &Matroid) -> Vec<(usize, usize)> {
    (0..q.n())
        .map(|e| {
            let deg = q.bases().filter(|b| b >> e & 1 == 1).count();
            let par = if q.loops() >> e & 1 == 1 {
                0
            } else {
                q.closure(1 << e).count_ones() as usize
            };
            (deg, par)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    q1: &Matroid,
    q2: &Matroid,
    bases1: &[ElementSet],
    sig1: &[(usize, usize)],
    sig2: &[(usize, usize)],
    images: &mut [u8],
    used: &mut u32,
) -> bool {
    let n = q1.n();
    if depth == n {
        let sigma = Permutation {
            images: images.to_vec(),
        };
        return q1.permuted(&sigma) == *q2;
    }
    for target in 0..n {
        if *used >> target & 1 == 1 || sig1[depth] != sig2[target] {
            continue;
        }
        images[depth] = target as u8;
        *used |= 1 << target;
        if partial_ok(depth + 1, q2, bases1, images) && search(depth + 1, q1, q2, bases1, sig1, sig2, images, used) {
            return true;
        }
        *used &= !(1 << target);
        images[depth] = u8::MAX;
    }
    false
}

/// Bases of `Q1` inside the assigned prefix must map to bases of `Q2`.
fn partial_ok(assigned: usize, q2: &Matroid, bases1: &[ElementSet], images: &[u8]) -> bool {
    let prefix: ElementSet = ((1u32 << assigned) - 1) as ElementSet;
    let mut image_prefix: ElementSet = 0;
    for &im in &images[..assigned] {
        image_prefix |= 1 << im;
    }
    let mut count1 = 0;
    for &b in bases1 {
        if b & !prefix == 0 {
            count1 += 1;
            let img = elements(b).fold(0, |acc: ElementSet, e| acc | 1 << images[e]);
            if !q2.is_basis(img) {
                return false;
            }
        }
    }
    let t = q2.table();
    let count2 = MaskIter(q2.mask())
        .filter(|&i| t.subset(i) & !image_prefix == 0)
        .count();
    count1 == count2
}
