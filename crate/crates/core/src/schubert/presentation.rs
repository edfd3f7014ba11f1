//! Affine presentations `(B, I, S)` of thin Schubert cells and of inverse
//! limits over vertex-intersecting subcomplexes.

use super::poly::{Monomial, Poly};
use super::SchubertError;
use crate::matroid::subsets::{elements, label, parse_label, table};
use crate::matroid::{ElementSet, Matroid};
use crate::rational::{format_rational, parse_rational, Q};
use crate::subdivision::{Subcomplex, TightSpan};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One step `x_k ← numerator / denominator` of the elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub variable: usize,
    pub numerator: Poly,
    pub denominator: Poly,
}

/// `S^{-1} B / I` for `B` the polynomial ring on `variables`.
///
/// Polynomials live in the ring on all `r(n-r)` coordinates `x_ij` of the
/// chart at `basis`; `variables` lists the ones still present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub n: usize,
    pub r: usize,
    pub basis: ElementSet,
    pub variables: BTreeSet<usize>,
    pub ideal_gens: Vec<Poly>,
    pub semigroup_gens: Vec<Poly>,
    pub substitution_log: Vec<Substitution>,
    /// Set when a generator became a unit: the ring is zero.
    pub unit_ideal: bool,
}

/// The `r × (n-r)` coordinate matrix at a basis, with the basis columns set to
/// the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTemplate {
    pub r: usize,
    pub n: usize,
    pub basis: ElementSet,
    pub basis_cols: Vec<usize>,
    pub other_cols: Vec<usize>,
}

impl MatrixTemplate {
    pub fn new(r: usize, n: usize, basis: ElementSet) -> Self {
        let basis_cols: Vec<usize> = elements(basis).collect();
        let other_cols: Vec<usize> = (0..n).filter(|c| basis >> c & 1 == 0).collect();
        MatrixTemplate { r, n, basis, basis_cols, other_cols }
    }

    pub fn nvars(&self) -> usize {
        self.r * (self.n - self.r)
    }

    /// Index of `x_ij` (0-based `i`, `j`).
    pub fn var(&self, i: usize, j: usize) -> usize {
        i * (self.n - self.r) + j
    }

    pub fn var_position(&self, k: usize) -> (usize, usize) {
        (k / (self.n - self.r), k % (self.n - self.r))
    }

    /// The basis `μ Δ {μ_i, a_μ(j)}` read off the variable `x_ij`.
    pub fn var_basis(&self, k: usize) -> ElementSet {
        let (i, j) = self.var_position(k);
        (self.basis & !(1 << self.basis_cols[i])) | (1 << self.other_cols[j])
    }

    pub fn var_name(&self, k: usize) -> String {
        let (i, j) = self.var_position(k);
        format!("x_{}_{}", i + 1, j + 1)
    }

    pub fn parse_var(&self, name: &str) -> Option<usize> {
        let mut it = name.strip_prefix("x_")?.split('_');
        let i: usize = it.next()?.parse().ok()?;
        let j: usize = it.next()?.parse().ok()?;
        if it.next().is_some() || i == 0 || j == 0 || i > self.r || j > self.n - self.r {
            return None;
        }
        Some(self.var(i - 1, j - 1))
    }

    /// Entry of column `c`, row `i`, with the variables outside `keep` set to 0.
    fn entry(&self, i: usize, c: usize, keep: &BTreeSet<usize>) -> Poly {
        let nv = self.nvars();
        if let Some(pos) = self.basis_cols.iter().position(|&b| b == c) {
            return if pos == i { Poly::one(nv) } else { Poly::zero(nv) };
        }
        let j = self.other_cols.iter().position(|&o| o == c).unwrap();
        let k = self.var(i, j);
        if keep.contains(&k) {
            Poly::var(nv, k)
        } else {
            Poly::zero(nv)
        }
    }

    /// `det A_λ` after killing the variables outside `keep`.
    pub fn minor(&self, lambda: ElementSet, keep: &BTreeSet<usize>) -> Poly {
        let cols: Vec<usize> = elements(lambda).collect();
        let m: Vec<Vec<Poly>> = (0..self.r)
            .map(|i| cols.iter().map(|&c| self.entry(i, c, keep)).collect())
            .collect();
        det(&m, self.nvars())
    }
}

fn det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    match m.len() {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        3 => {
            let t = |a: usize, b: usize, c: usize| m[0][a].mul(&m[1][b]).mul(&m[2][c]);
            t(0, 1, 2)
                .add(&t(1, 2, 0))
                .add(&t(2, 0, 1))
                .sub(&t(2, 1, 0))
                .sub(&t(0, 2, 1))
                .sub(&t(1, 0, 2))
        }
        n => {
            let mut total = Poly::zero(nvars);
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][c].mul(&det(&minor, nvars));
                total = if c % 2 == 0 { total.add(&term) } else { total.sub(&term) };
            }
            total
        }
    }
}

/// `|{λ ∈ Q : |λ Δ μ| = 2}|`.
pub fn d_value(q: &Matroid, mu: ElementSet) -> Result<usize, SchubertError> {
    if !q.is_basis(mu) {
        return Err(SchubertError::NotABasis(label(mu)));
    }
    Ok(q.bases().filter(|&b| (b & !mu).count_ones() == 1).count())
}

/// `(B_Q^μ, I_Q^μ, S_Q^μ)` with exactly expanded minors.
pub fn build_presentation(q: &Matroid, mu: ElementSet) -> Result<RingPresentation, SchubertError> {
    if !q.is_basis(mu) {
        return Err(SchubertError::NotABasis(label(mu)));
    }
    let (n, r) = (q.n(), q.rank());
    let mt = MatrixTemplate::new(r, n, mu);
    let keep: BTreeSet<usize> = (0..mt.nvars()).filter(|&k| q.is_basis(mt.var_basis(k))).collect();
    let mut ideal = Vec::new();
    let mut semigroup = Vec::new();
    for &lambda in table(n, r).subsets() {
        let m = mt.minor(lambda, &keep);
        if q.is_basis(lambda) {
            semigroup.push(m);
        } else if !m.is_zero() {
            ideal.push(m);
        }
    }
    let mut p = RingPresentation {
        n,
        r,
        basis: mu,
        variables: keep,
        ideal_gens: ideal,
        semigroup_gens: semigroup,
        substitution_log: Vec::new(),
        unit_ideal: false,
    };
    p.reduce_generators();
    Ok(p)
}

/// `(B_Σ, I_Σ, S_Σ)` for a vertex-intersecting, vertex-connecting subcomplex.
pub fn build_sigma_presentation(
    ts: &TightSpan,
    sub: &Subcomplex,
    mu: ElementSet,
) -> Result<RingPresentation, SchubertError> {
    if sub.is_empty() {
        return Err(SchubertError::EmptyComplex);
    }
    for &v in &sub.vertices {
        if !ts.vertices[v].is_basis(mu) {
            return Err(SchubertError::NoCommonBasis(label(mu)));
        }
    }
    if !ts.vertex_connecting(sub) {
        return Err(SchubertError::NotVertexConnecting);
    }
    let parts = sub
        .vertices
        .iter()
        .map(|&v| build_presentation(&ts.vertices[v], mu))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(combine(&parts))
}

/// Sum of ideals and join of semigroups over a common chart.
pub fn combine(parts: &[RingPresentation]) -> RingPresentation {
    let first = &parts[0];
    let mut p = RingPresentation {
        n: first.n,
        r: first.r,
        basis: first.basis,
        variables: BTreeSet::new(),
        ideal_gens: Vec::new(),
        semigroup_gens: Vec::new(),
        substitution_log: Vec::new(),
        unit_ideal: false,
    };
    for part in parts {
        p.variables.extend(part.variables.iter().copied());
        p.ideal_gens.extend(part.ideal_gens.iter().cloned());
        p.semigroup_gens.extend(part.semigroup_gens.iter().cloned());
        p.unit_ideal |= part.unit_ideal;
    }
    p.reduce_generators();
    p
}

/// Normalized non-monomial factors of a generating set of a semigroup that
/// contains every variable. Generators are split by any other generator that
/// divides them, since a factor of a unit is a unit.
pub fn semigroup_factors(gens: &[Poly]) -> Vec<Poly> {
    let mut factors: Vec<Poly> = Vec::new();
    let mut queue: Vec<Poly> = gens.iter().map(Poly::normalized).collect();
    while let Some(g) = queue.pop() {
        if g.is_zero() || g.is_constant() || factors.contains(&g) {
            continue;
        }
        if let Some(q) = factors.iter().find_map(|f| g.div_exact(f)) {
            queue.push(q.normalized());
            continue;
        }
        let mut kept = Vec::new();
        for f in factors.drain(..) {
            match f.div_exact(&g) {
                Some(q) => queue.push(q.normalized()),
                None => kept.push(f),
            }
        }
        kept.push(g);
        factors = kept;
    }
    factors.sort_by(|a, b| a.leading().map(|t| t.0).cmp(&b.leading().map(|t| t.0)).then_with(|| a.num_terms().cmp(&b.num_terms())));
    factors
}

/// Strip the monomial content, the scalar, and any semigroup factor.
pub fn reduce_poly(f: &Poly, factors: &[Poly]) -> Poly {
    let mut f = f.normalized();
    'outer: loop {
        if f.is_constant() {
            return f;
        }
        for g in factors {
            if let Some(q) = f.div_exact(g) {
                f = q.normalized();
                continue 'outer;
            }
        }
        return f;
    }
}

/// Membership in the semigroup: `c` is a scalar times a monomial times a
/// product of factors, found by repeated trial division.
pub fn in_semigroup(c: &Poly, factors: &[Poly]) -> bool {
    !c.is_zero() && reduce_poly(c, factors).is_constant()
}

/// Row order and columns of a unit upper-triangular submatrix of the matrix
/// whose rows are the exponent sums of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularWitness {
    pub rows: Vec<usize>,
    pub columns: Vec<String>,
}

impl RingPresentation {
    pub fn template(&self) -> MatrixTemplate {
        MatrixTemplate::new(self.r, self.n, self.basis)
    }

    pub fn nvars(&self) -> usize {
        self.r * (self.n - self.r)
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_names(&self) -> Vec<String> {
        let mt = self.template();
        self.variables.iter().map(|&k| mt.var_name(k)).collect()
    }

    pub fn display_poly(&self, f: &Poly) -> String {
        let mt = self.template();
        f.display_with(&|k| mt.var_name(k))
    }

    pub fn factors(&self) -> Vec<Poly> {
        semigroup_factors(&self.semigroup_gens)
    }

    /// Certified regular domain: the ideal is zero and the ring is nonzero.
    pub fn ideal_is_zero(&self) -> bool {
        self.ideal_gens.is_empty() && !self.unit_ideal
    }

    /// Reduce every ideal generator, drop zeros and duplicates, detect units.
    fn reduce_generators(&mut self) {
        let factors = self.factors();
        let mut out: Vec<Poly> = Vec::new();
        for f in &self.ideal_gens {
            if f.is_zero() {
                continue;
            }
            let g = reduce_poly(f, &factors);
            if g.is_constant() {
                self.unit_ideal = true;
                continue;
            }
            if !out.contains(&g) {
                out.push(g);
            }
        }
        self.ideal_gens = out;
    }

    /// Lemma-style triangularity test on the exponent-sum matrix.
    pub fn upper_triangular_check(&self) -> Option<TriangularWitness> {
        if self.unit_ideal {
            return None;
        }
        let a = self.ideal_gens.len();
        if a > self.variables.len() {
            return None;
        }
        let rows: Vec<Vec<u32>> = self.ideal_gens.iter().map(Poly::exponent_sum).collect();
        let mut remaining: Vec<usize> = (0..a).collect();
        let mut cols: BTreeSet<usize> = self.variables.clone();
        let mut order = Vec::new();
        let mut chosen = Vec::new();
        while !remaining.is_empty() {
            let pick = cols.iter().find_map(|&c| {
                let ones: Vec<usize> = remaining.iter().copied().filter(|&i| rows[i][c] != 0).collect();
                (ones.len() == 1 && rows[ones[0]][c] == 1).then(|| (ones[0], c))
            })?;
            remaining.retain(|&i| i != pick.0);
            cols.remove(&pick.1);
            order.push(pick.0);
            chosen.push(pick.1);
        }
        let mt = self.template();
        Some(TriangularWitness {
            rows: order,
            columns: chosen.iter().map(|&k| mt.var_name(k)).collect(),
        })
    }

    /// Eliminate variables by `x_k ← h/g` while some generator is linear in
    /// `x_k` with a coefficient in the semigroup. The lowest variable index is
    /// tried first, then the lowest generator index.
    pub fn reduce_ideal(&self) -> RingPresentation {
        let mut p = self.clone();
        let mut factors = p.factors();
        loop {
            if p.unit_ideal || p.ideal_gens.is_empty() {
                break;
            }
            let mut step = None;
            'search: for &k in &p.variables {
                for f in &p.ideal_gens {
                    if f.degree_in(k) != 1 {
                        continue;
                    }
                    let g = f.coefficient(k, 1);
                    if in_semigroup(&g, &factors) {
                        step = Some(Substitution {
                            variable: k,
                            numerator: f.coefficient(k, 0).neg(),
                            denominator: g,
                        });
                        break 'search;
                    }
                }
            }
            let Some(sub) = step else { break };
            let k = sub.variable;
            p.variables.remove(&k);
            let mut new_factors = Vec::new();
            for s in &factors {
                let t = s.substitute_fraction(k, &sub.numerator, &sub.denominator);
                if t.is_zero() {
                    p.unit_ideal = true;
                }
                new_factors.push(t);
            }
            p.semigroup_gens = new_factors;
            factors = p.factors();
            p.ideal_gens = p
                .ideal_gens
                .iter()
                .map(|f| f.substitute_fraction(k, &sub.numerator, &sub.denominator))
                .collect();
            p.substitution_log.push(sub);
            p.reduce_generators();
        }
        p
    }

    pub fn to_json(&self) -> PresentationJson {
        let mt = self.template();
        let pj = |f: &Poly| poly_to_json(f, &mt);
        PresentationJson {
            n: self.n,
            r: self.r,
            basis: label(self.basis),
            variables: self.variable_names(),
            ideal_gens: self.ideal_gens.iter().map(pj).collect(),
            semigroup_gens: self.semigroup_gens.iter().map(pj).collect(),
            substitution_log: self
                .substitution_log
                .iter()
                .map(|s| SubstitutionJson {
                    variable: mt.var_name(s.variable),
                    numerator: pj(&s.numerator),
                    denominator: pj(&s.denominator),
                })
                .collect(),
            unit_ideal: self.unit_ideal,
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self, SchubertError> {
        let basis = parse_label(&j.basis).ok_or_else(|| SchubertError::Malformed(format!("basis {}", j.basis)))?;
        if j.r == 0 || j.r >= j.n || basis.count_ones() as usize != j.r || basis >> j.n != 0 {
            return Err(SchubertError::Malformed("shape".into()));
        }
        let mt = MatrixTemplate::new(j.r, j.n, basis);
        let var = |s: &str| mt.parse_var(s).ok_or_else(|| SchubertError::Malformed(format!("variable {s}")));
        let pp = |t: &PolyJson| poly_from_json(t, &mt);
        Ok(RingPresentation {
            n: j.n,
            r: j.r,
            basis,
            variables: j.variables.iter().map(|s| var(s)).collect::<Result<_, _>>()?,
            ideal_gens: j.ideal_gens.iter().map(pp).collect::<Result<_, _>>()?,
            semigroup_gens: j.semigroup_gens.iter().map(pp).collect::<Result<_, _>>()?,
            substitution_log: j
                .substitution_log
                .iter()
                .map(|s| {
                    Ok(Substitution {
                        variable: var(&s.variable)?,
                        numerator: pp(&s.numerator)?,
                        denominator: pp(&s.denominator)?,
                    })
                })
                .collect::<Result<_, SchubertError>>()?,
            unit_ideal: j.unit_ideal,
        })
    }
}

/// A polynomial as a list of `[coefficient, {variable: exponent}]` terms.
pub type PolyJson = Vec<(String, BTreeMap<String, u16>)>;

fn poly_to_json(f: &Poly, mt: &MatrixTemplate) -> PolyJson {
    f.terms()
        .rev()
        .map(|(m, c)| {
            let mono = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| (mt.var_name(k), e))
                .collect();
            (format_rational(c), mono)
        })
        .collect()
}

fn poly_from_json(t: &PolyJson, mt: &MatrixTemplate) -> Result<Poly, SchubertError> {
    let nv = mt.nvars();
    let mut terms = Vec::new();
    for (c, mono) in t {
        let c = parse_rational(c).ok_or_else(|| SchubertError::Malformed(format!("coefficient {c}")))?;
        let mut m = Monomial::one(nv);
        for (name, &e) in mono {
            let k = mt.parse_var(name).ok_or_else(|| SchubertError::Malformed(format!("variable {name}")))?;
            m.0[k] += e;
        }
        terms.push((m, c));
    }
    Ok(Poly::from_terms(nv, terms))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionJson {
    pub variable: String,
    pub numerator: PolyJson,
    pub denominator: PolyJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub n: usize,
    pub r: usize,
    pub basis: String,
    pub variables: Vec<String>,
    pub ideal_gens: Vec<PolyJson>,
    pub semigroup_gens: Vec<PolyJson>,
    #[serde(default)]
    pub substitution_log: Vec<SubstitutionJson>,
    #[serde(default)]
    pub unit_ideal: bool,
}

impl Serialize for RingPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PresentationJson::deserialize(d)?;
        RingPresentation::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Values of all coordinates after back-substitution through the log, or
/// `None` if some denominator vanishes.
pub fn back_substitute(log: &[Substitution], point: &mut [Q]) -> Option<()> {
    for s in log.iter().rev() {
        let d = s.denominator.eval(point);
        if d.is_zero() {
            return None;
        }
        point[s.variable] = s.numerator.eval(point) / d;
    }
    Some(())
}

pub(crate) fn nonzero_on(polys: &[Poly], point: &[Q]) -> bool {
    polys.iter().all(|p| !p.eval(point).is_zero())
}
