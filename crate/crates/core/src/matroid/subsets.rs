//! Lexicographic indexing of `r`-subsets of `[n]`.
//!
//! Subsets of the ground set are `u16` bitmasks (bit `i` is element `i`,
//! zero-based). Families of `r`-subsets are `u128` bitmasks over the
//! lexicographic list of all `r`-subsets, so `C(n, r)` must not exceed 128.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

/// Bitmask of ground-set elements.
pub type ElementSet = u16;

/// Bitmask over the lexicographic list of `r`-subsets.
pub type BasisMask = u128;

pub const MAX_GROUND: usize = 16;
pub const MAX_SUBSETS: usize = 128;

const NO_INDEX: u8 = u8::MAX;

#[derive(Debug)]
pub struct SubsetTable {
    n: usize,
    r: usize,
    subsets: Vec<ElementSet>,
    index: Vec<u8>,
}

impl SubsetTable {
    fn build(n: usize, r: usize) -> Self {
        let mut subsets = Vec::new();
        let mut current = Vec::with_capacity(r);
        push_lex(n, r, 0, &mut current, &mut subsets);
        let mut index = vec![NO_INDEX; 1 << n];
        for (i, &s) in subsets.iter().enumerate() {
            index[s as usize] = i as u8;
        }
        Self {
            n,
            r,
            subsets,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[ElementSet] {
        &self.subsets
    }

    pub fn subset(&self, idx: usize) -> ElementSet {
        self.subsets[idx]
    }

    /// Position of `set` in the lexicographic list, if it is an `r`-subset of `[n]`.
    pub fn index_of(&self, set: ElementSet) -> Option<usize> {
        match self.index.get(set as usize) {
            Some(&i) if i != NO_INDEX => Some(i as usize),
            _ => None,
        }
    }

    pub fn full_mask(&self) -> BasisMask {
        if self.len() == MAX_SUBSETS {
            BasisMask::MAX
        } else {
            (1u128 << self.len()) - 1
        }
    }

    /// Iterate over the subsets selected by `mask`, in lex order.
    pub fn iter_mask(&self, mask: BasisMask) -> impl Iterator<Item = ElementSet> + '_ {
        MaskIter(mask).map(move |i| self.subsets[i])
    }
}

fn push_lex(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<ElementSet>) {
    if cur.len() == r {
        out.push(cur.iter().fold(0, |m, &e| m | (1 << e)));
        return;
    }
    for e in start..n {
        if n - e < r - cur.len() {
            break;
        }
        cur.push(e);
        push_lex(n, r, e + 1, cur, out);
        cur.pop();
    }
}

/// Shared lookup table for `r`-subsets of `[n]`. Tables are built once and
/// live for the rest of the process.
pub fn table(n: usize, r: usize) -> &'static SubsetTable {
    static TABLES: OnceLock<RwLock<HashMap<(usize, usize), &'static SubsetTable>>> =
        OnceLock::new();
    assert!(n <= MAX_GROUND && r <= n, "subset table ({r},{n}) out of range");
    let tables = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = tables.read().expect("subset table lock").get(&(n, r)) {
        return t;
    }
    let mut guard = tables.write().expect("subset table lock");
    guard
        .entry((n, r))
        .or_insert_with(|| Box::leak(Box::new(SubsetTable::build(n, r))))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Iterator over set bit positions of a `u128`.
#[derive(Clone, Copy)]
pub struct MaskIter(pub u128);

impl Iterator for MaskIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Elements of a ground-set mask, ascending.
pub fn elements(set: ElementSet) -> impl Iterator<Item = usize> {
    MaskIter(set as u128)
}

pub fn set_from(elems: &[usize]) -> ElementSet {
    elems.iter().fold(0, |m, &e| m | (1 << e))
}

pub fn popcount(set: ElementSet) -> usize {
    set.count_ones() as usize
}

/// `"126"`-style label for a subset (1-based, digits concatenated; elements
/// above 9 are separated by commas).
pub fn label(set: ElementSet) -> String {
    let elems: Vec<usize> = elements(set).map(|e| e + 1).collect();
    if elems.iter().all(|&e| e < 10) {
        elems.iter().map(|e| e.to_string()).collect()
    } else {
        elems
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Parse a 1-based label such as `"126"` or `"1,2,10"`.
pub fn parse_label(s: &str) -> Option<ElementSet> {
    let parts: Vec<usize> = if s.contains(',') {
        s.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?
    };
    let mut set = 0;
    for e in parts {
        if e == 0 || e > MAX_GROUND {
            return None;
        }
        set |= 1 << (e - 1);
    }
    Some(set)
}
