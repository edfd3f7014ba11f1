//! Matroids of small rank on small ground sets, stored as basis bitmasks.

mod iso;
pub mod subsets;
mod template;

pub use iso::{is_isomorphic, Permutation};
pub use subsets::{BasisMask, ElementSet};
pub use template::{classify_template, GroupedTemplate, TemplateKind};

use serde::{Deserialize, Serialize};
use subsets::{elements, popcount, table, MaskIter, SubsetTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("subsets have mixed sizes ({expected} and {found})")]
    MixedSizes { expected: usize, found: usize },
    #[error("element {element} is outside the ground set [{n}]")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("rank {r} on {n} elements exceeds the supported size")]
    TooLarge { r: usize, n: usize },
    #[error("basis set is empty")]
    Empty,
    #[error("basis exchange fails between {0} and {1}")]
    ExchangeFails(String, String),
    #[error("subset must be nonempty and proper")]
    Degenerate,
    #[error("matroid has a loop at element {0}")]
    Loop(usize),
    #[error("shape mismatch: ({0},{1}) vs ({2},{3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("{0} is not a basis")]
    NotABasis(String),
    #[error("malformed matroid description: {0}")]
    Malformed(String),
}

/// A rank-`r` matroid on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    n: u8,
    r: u8,
    bases: BasisMask,
}

impl std::fmt::Debug for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = self.bases().map(subsets::label).collect();
        write!(f, "Matroid({},{})[{}]", self.r, self.n, labels.join(" "))
    }
}

fn check_shape(n: usize, r: usize) -> Result<&'static SubsetTable, MatroidError> {
    if r > n || n > subsets::MAX_GROUND || subsets::binomial(n, r) > subsets::MAX_SUBSETS {
        return Err(MatroidError::TooLarge { r, n });
    }
    Ok(table(n, r))
}

/// Basis-exchange test over every ordered pair of sets in `mask`.
fn exchange_failure(t: &SubsetTable, mask: BasisMask) -> Option<(ElementSet, ElementSet)> {
    for i in MaskIter(mask) {
        let b1 = t.subset(i);
        for j in MaskIter(mask) {
            let b2 = t.subset(j);
            for x in elements(b1 & !b2) {
                let ok = elements(b2 & !b1).any(|y| {
                    let c = (b1 & !(1 << x)) | (1 << y);
                    t.index_of(c).is_some_and(|k| mask >> k & 1 == 1)
                });
                if !ok {
                    return Some((b1, b2));
                }
            }
        }
    }
    None
}

/// Decide whether a family of equal-size subsets of `[n]` is the basis set
/// of a matroid. An empty family is not.
pub fn is_matroid(n: usize, family: &[ElementSet]) -> Result<bool, MatroidError> {
    let Some(&first) = family.first() else {
        return Ok(false);
    };
    let r = popcount(first);
    let t = check_shape(n, r)?;
    let mut mask = 0u128;
    for &s in family {
        if popcount(s) != r {
            return Err(MatroidError::MixedSizes {
                expected: r,
                found: popcount(s),
            });
        }
        let idx = t.index_of(s).ok_or(MatroidError::ElementOutOfRange {
            element: 16 - s.leading_zeros() as usize,
            n,
        })?;
        mask |= 1 << idx;
    }
    Ok(exchange_failure(t, mask).is_none())
}

impl Matroid {
    /// Build from a mask over the lex list of `r`-subsets, checking the axioms.
    pub fn from_mask(n: usize, r: usize, bases: BasisMask) -> Result<Self, MatroidError> {
        let t = check_shape(n, r)?;
        if bases == 0 {
            return Err(MatroidError::Empty);
        }
        if bases & !t.full_mask() != 0 {
            return Err(MatroidError::Malformed("mask has bits past C(n,r)".into()));
        }
        if let Some((b1, b2)) = exchange_failure(t, bases) {
            return Err(MatroidError::ExchangeFails(
                subsets::label(b1),
                subsets::label(b2),
            ));
        }
        Ok(Self::from_mask_unchecked(n, r, bases))
    }

    pub(crate) fn from_mask_unchecked(n: usize, r: usize, bases: BasisMask) -> Self {
        debug_assert!(exchange_failure(table(n, r), bases).is_none());
        Self {
            n: n as u8,
            r: r as u8,
            bases,
        }
    }

    fn mask_of(n: usize, r: usize, sets: &[ElementSet]) -> Result<BasisMask, MatroidError> {
        let t = check_shape(n, r)?;
        let mut mask = 0u128;
        for &s in sets {
            if popcount(s) != r {
                return Err(MatroidError::MixedSizes {
                    expected: r,
                    found: popcount(s),
                });
            }
            let idx = t.index_of(s).ok_or(MatroidError::ElementOutOfRange {
                element: 16 - s.leading_zeros() as usize,
                n,
            })?;
            mask |= 1 << idx;
        }
        Ok(mask)
    }

    pub fn from_bases(n: usize, r: usize, bases: &[ElementSet]) -> Result<Self, MatroidError> {
        Self::from_mask(n, r, Self::mask_of(n, r, bases)?)
    }

    pub fn from_nonbases(n: usize, r: usize, nonbases: &[ElementSet]) -> Result<Self, MatroidError> {
        let full = check_shape(n, r)?.full_mask();
        Self::from_mask(n, r, full & !Self::mask_of(n, r, nonbases)?)
    }

    pub fn uniform(r: usize, n: usize) -> Self {
        let t = check_shape(n, r).expect("uniform matroid too large");
        Self::from_mask_unchecked(n, r, t.full_mask())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn rank(&self) -> usize {
        self.r as usize
    }

    pub fn mask(&self) -> BasisMask {
        self.bases
    }

    pub fn table(&self) -> &'static SubsetTable {
        table(self.n(), self.rank())
    }

    pub fn ground(&self) -> ElementSet {
        ((1u32 << self.n) - 1) as ElementSet
    }

    pub fn num_bases(&self) -> usize {
        self.bases.count_ones() as usize
    }

    pub fn bases(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.table().iter_mask(self.bases)
    }

    pub fn nonbases(&self) -> impl Iterator<Item = ElementSet> + '_ {
        let t = self.table();
        t.iter_mask(t.full_mask() & !self.bases)
    }

    pub fn is_basis(&self, set: ElementSet) -> bool {
        self.table()
            .index_of(set)
            .is_some_and(|i| self.bases >> i & 1 == 1)
    }

    pub fn is_uniform(&self) -> bool {
        self.bases == self.table().full_mask()
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, set: ElementSet) -> usize {
        let mut best = 0;
        for b in self.bases() {
            best = best.max(popcount(b & set));
            if best == self.rank() || best == popcount(set) {
                break;
            }
        }
        best
    }

    pub fn closure(&self, set: ElementSet) -> ElementSet {
        let rk = self.rank_of(set);
        let mut cl = set;
        for e in elements(self.ground() & !set) {
            if self.rank_of(set | 1 << e) == rk {
                cl |= 1 << e;
            }
        }
        cl
    }

    pub fn is_flat(&self, set: ElementSet) -> bool {
        self.closure(set) == set
    }

    pub fn loops(&self) -> ElementSet {
        let covered = self.bases().fold(0, |acc, b| acc | b);
        self.ground() & !covered
    }

    pub fn coloops(&self) -> ElementSet {
        self.bases().fold(self.ground(), |acc, b| acc & b)
    }

    pub fn is_loopless(&self) -> bool {
        self.loops() == 0
    }

    fn loop_check(&self) -> Result<(), MatroidError> {
        match self.loops() {
            0 => Ok(()),
            l => Err(MatroidError::Loop(l.trailing_zeros() as usize + 1)),
        }
    }

    /// Connected components, each as an element mask, ordered by least element.
    pub fn components(&self) -> Vec<ElementSet> {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for b in self.bases() {
            for i in elements(b) {
                for j in elements(self.ground() & !b) {
                    if self.is_basis((b & !(1 << i)) | 1 << j) {
                        let (a, c) = (find(&mut parent, i), find(&mut parent, j));
                        if a != c {
                            parent[a.max(c)] = a.min(c);
                        }
                    }
                }
            }
        }
        let mut comps: Vec<ElementSet> = Vec::new();
        let mut root_of = vec![usize::MAX; n];
        for e in 0..n {
            let root = find(&mut parent, e);
            if root_of[root] == usize::MAX {
                root_of[root] = comps.len();
                comps.push(0);
            }
            comps[root_of[root]] |= 1 << e;
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Parallel classes (rank-1 flats) of a loopless matroid, ordered by least element.
    pub fn parallel_classes(&self) -> Result<Vec<ElementSet>, MatroidError> {
        self.loop_check()?;
        let mut seen: ElementSet = 0;
        let mut classes = Vec::new();
        for e in 0..self.n() {
            if seen >> e & 1 == 1 {
                continue;
            }
            let cl = self.closure(1 << e);
            seen |= cl;
            classes.push(cl);
        }
        Ok(classes)
    }

    pub fn is_simple(&self) -> bool {
        self.parallel_classes()
            .map(|c| c.len() == self.n())
            .unwrap_or(false)
    }

    /// Rank-1 flats, rank-2 cyclic flats and lines, using the least element
    /// of every parallel class as the simplifying set.
    pub fn flats_and_lines(&self) -> Result<FlatsAndLines, MatroidError> {
        let classes = self.parallel_classes()?;
        let simplifying = classes
            .iter()
            .fold(0, |acc, &c| acc | 1 << c.trailing_zeros());
        let rank2 = self.rank2_flats();
        let cyclic = rank2
            .iter()
            .copied()
            .filter(|&f| self.is_cyclic(f))
            .collect();
        let lines = self.lines_against(simplifying)?;
        Ok(FlatsAndLines {
            rank1: classes,
            rank2_cyclic: cyclic,
            lines,
        })
    }

    pub fn lines(&self) -> Result<Vec<ElementSet>, MatroidError> {
        Ok(self.flats_and_lines()?.lines)
    }

    /// Lines measured against an explicit simplifying set `s`, which must
    /// meet every parallel class in exactly one element.
    pub fn lines_against(&self, s: ElementSet) -> Result<Vec<ElementSet>, MatroidError> {
        let classes = self.parallel_classes()?;
        if classes.iter().any(|&c| popcount(c & s) != 1) || s & !self.ground() != 0 {
            return Err(MatroidError::Malformed("not a simplifying set".into()));
        }
        Ok(self
            .rank2_flats()
            .into_iter()
            .filter(|&f| popcount(f & s) >= 3)
            .collect())
    }

    fn rank2_flats(&self) -> Vec<ElementSet> {
        let mut out: Vec<ElementSet> = Vec::new();
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                let pair = (1 << a) | (1 << b);
                if self.rank_of(pair) == 2 {
                    let cl = self.closure(pair);
                    if !out.contains(&cl) {
                        out.push(cl);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A set is cyclic if it is a union of circuits: no element is a coloop
    /// of the restriction.
    fn is_cyclic(&self, set: ElementSet) -> bool {
        let rk = self.rank_of(set);
        elements(set).all(|e| self.rank_of(set & !(1 << e)) == rk)
    }

    /// The face of the matroid polytope minimizing the linear functional `v`.
    pub fn face(&self, v: &[i64]) -> Matroid {
        assert_eq!(v.len(), self.n(), "covector length");
        let t = self.table();
        let value = |b: ElementSet| -> i64 { elements(b).map(|e| v[e]).sum() };
        let best = self.bases().map(value).min().expect("nonempty");
        let mut mask = 0u128;
        for i in MaskIter(self.bases) {
            if value(t.subset(i)) == best {
                mask |= 1 << i;
            }
        }
        Self::from_mask(self.n(), self.rank(), mask).expect("faces of matroid polytopes are matroidal")
    }

    /// The face for `v = -ε_λ`.
    pub fn face_of_subset(&self, set: ElementSet) -> Matroid {
        let v: Vec<i64> = (0..self.n()).map(|e| -((set >> e & 1) as i64)).collect();
        self.face(&v)
    }

    /// Restriction to `set`, relabelled onto `0..|set|`.
    pub fn restriction(&self, set: ElementSet) -> Result<Minor, MatroidError> {
        let k = self.rank_of(set);
        let sub: Vec<ElementSet> = self
            .bases()
            .filter(|&b| popcount(b & set) == k)
            .map(|b| b & set)
            .collect();
        Minor::build(set, k, &sub)
    }

    /// Contraction by `set`, on the complement, relabelled.
    pub fn contraction(&self, set: ElementSet) -> Result<Minor, MatroidError> {
        let k = self.rank_of(set);
        let rest = self.ground() & !set;
        let sub: Vec<ElementSet> = self
            .bases()
            .filter(|&b| popcount(b & set) == k)
            .map(|b| b & rest)
            .collect();
        Minor::build(rest, self.rank() - k, &sub)
    }

    pub fn restriction_contraction(&self, set: ElementSet) -> Result<(Minor, Minor), MatroidError> {
        if set == 0 || set & self.ground() == self.ground() || set & !self.ground() != 0 {
            return Err(MatroidError::Degenerate);
        }
        Ok((self.restriction(set)?, self.contraction(set)?))
    }

    /// Image under `σ`: basis `B` becomes `σ(B)`.
    pub fn permuted(&self, sigma: &Permutation) -> Matroid {
        assert_eq!(sigma.len(), self.n());
        let t = self.table();
        let mut mask = 0u128;
        for b in self.bases() {
            mask |= 1 << t.index_of(sigma.apply_set(b)).expect("permuted basis");
        }
        Self::from_mask_unchecked(self.n(), self.rank(), mask)
    }

    pub fn to_json(&self) -> MatroidJson {
        let to_lists = |it: &mut dyn Iterator<Item = ElementSet>| -> Vec<Vec<usize>> {
            it.map(|s| elements(s).map(|e| e + 1).collect()).collect()
        };
        let nb = self.table().len() - self.num_bases();
        if nb <= self.num_bases() {
            MatroidJson {
                n: self.n(),
                r: self.rank(),
                nonbases: Some(to_lists(&mut self.nonbases())),
                bases: None,
            }
        } else {
            MatroidJson {
                n: self.n(),
                r: self.rank(),
                nonbases: None,
                bases: Some(to_lists(&mut self.bases())),
            }
        }
    }

    pub fn from_json(j: &MatroidJson) -> Result<Self, MatroidError> {
        let conv = |lists: &[Vec<usize>]| -> Result<Vec<ElementSet>, MatroidError> {
            lists
                .iter()
                .map(|l| {
                    let mut s: ElementSet = 0;
                    for &e in l {
                        if e == 0 || e > j.n {
                            return Err(MatroidError::ElementOutOfRange { element: e, n: j.n });
                        }
                        if s >> (e - 1) & 1 == 1 {
                            return Err(MatroidError::Malformed(format!("repeated element {e}")));
                        }
                        s |= 1 << (e - 1);
                    }
                    Ok(s)
                })
                .collect()
        };
        match (&j.bases, &j.nonbases) {
            (Some(b), None) => Self::from_bases(j.n, j.r, &conv(b)?),
            (None, Some(nb)) => Self::from_nonbases(j.n, j.r, &conv(nb)?),
            _ => Err(MatroidError::Malformed(
                "exactly one of bases/nonbases must be given".into(),
            )),
        }
    }
}

impl Serialize for Matroid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matroid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatroidJson::deserialize(d)?;
        Matroid::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nonbases: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bases: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatsAndLines {
    pub rank1: Vec<ElementSet>,
    pub rank2_cyclic: Vec<ElementSet>,
    pub lines: Vec<ElementSet>,
}

/// A minor with its ground set remembered as a subset of the parent's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub ground: ElementSet,
    pub matroid: Matroid,
}

impl Minor {
    fn build(ground: ElementSet, rank: usize, sets: &[ElementSet]) -> Result<Self, MatroidError> {
        let labels: Vec<usize> = elements(ground).collect();
        let relabel = |s: ElementSet| -> ElementSet {
            labels
                .iter()
                .enumerate()
                .filter(|(_, &e)| s >> e & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i)
        };
        let relabelled: Vec<ElementSet> = sets.iter().map(|&s| relabel(s)).collect();
        let matroid = Matroid::from_bases(labels.len(), rank, &relabelled)?;
        Ok(Self { ground, matroid })
    }
}
