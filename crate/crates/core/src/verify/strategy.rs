//! One strategy per group. Each step checks the hypotheses of the rule it
//! cites and records the dimensions it adds or removes.

use super::certificate::{Certificate, EvidenceRule, EvidenceStep, Term, CSP_GROUP};
use super::classify::{structure, GroupLabel, Structure};
use super::sdc::{sdc_check, SdcJustification};
use crate::matroid::subsets::{label, MaskIter};
use crate::matroid::{classify_template, ElementSet, Matroid};
use crate::schubert::{
    build_sigma_presentation, certify_presentation_with, d_value, dim_thin_schubert, verify_qsp_algebra, DimEvidence,
    DEFAULT_POINTS, DEFAULT_SEED,
};
use crate::subdivision::{Fin, LeafPair, Subcomplex, TightSpan, Weight};
use serde_json::json;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random points per replayed elimination.
    pub points: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
        }
    }
}

type Step<T> = Result<T, String>;

pub fn verify(w: &Weight) -> Certificate {
    verify_with(w, &VerifyOptions::default())
}

/// Never fails: anything unhandled yields an unverified certificate naming
/// the step that broke.
pub fn verify_with(w: &Weight, opts: &VerifyOptions) -> Certificate {
    let weight = w.project_lineality();
    let mut cert = Certificate {
        weight: weight.clone(),
        group: "unclassified".into(),
        label: None,
        verified: false,
        smooth: false,
        components: 0,
        dimension: None,
        evidence: Vec::new(),
        failure: None,
    };
    let st = match structure(&weight) {
        Ok(s) => s,
        Err(e) => {
            cert.failure = Some(e.to_string());
            return cert;
        }
    };
    let label = st.label();
    cert.label = label;
    let mut run = Run {
        ts: &st.ts,
        opts,
        steps: vec![EvidenceStep::new(
            EvidenceRule::Classification,
            Vec::new(),
            json!({
                "conditions": st.conditions,
                "vertices": st.ts.vertices.len(),
                "edges": st.ts.edges.len(),
                "faces": st.ts.faces.len(),
            }),
            Vec::new(),
        )],
    };
    let outcome = if st.is_csp() {
        cert.group = CSP_GROUP.into();
        run.csp().map(|()| 2)
    } else if let Some(l) = label {
        cert.group = l.to_string();
        run.dispatch(&st, l).map(|()| 1)
    } else {
        Err("none of the six conditions holds".to_string())
    };
    cert.evidence = run.steps;
    match outcome {
        Ok(components) => {
            let total: i64 = cert.evidence.iter().map(|s| s.contribution).sum();
            cert.dimension = Some(total);
            cert.components = components;
            if total == cert.expected_dimension() {
                cert.verified = true;
                cert.smooth = true;
            } else {
                cert.failure = Some(format!("dimension {total}, expected {}", cert.expected_dimension()));
            }
        }
        Err(msg) => cert.failure = Some(msg),
    }
    cert
}

fn vref(v: usize) -> String {
    format!("v{}", v + 1)
}

fn eref(e: usize) -> String {
    format!("e{}", e + 1)
}

fn fref(f: usize) -> String {
    format!("f{}", f + 1)
}

fn describe(m: &Matroid) -> String {
    let t = classify_template(m);
    if t.kind != crate::matroid::TemplateKind::None {
        return t.describe();
    }
    let nb: Vec<String> = m.nonbases().map(label).collect();
    format!("nonbases[{}]", nb.join(" "))
}

/// Pick witnesses greedily: the basis serving most items first, ties to
/// the lexicographically smaller basis.
fn choose_witnesses(candidates: &[Vec<ElementSet>]) -> Vec<Option<ElementSet>> {
    let mut chosen: Vec<Option<ElementSet>> = vec![None; candidates.len()];
    loop {
        let mut count: BTreeMap<(u16, ElementSet), usize> = BTreeMap::new();
        for (i, c) in candidates.iter().enumerate() {
            if chosen[i].is_some() {
                continue;
            }
            for &mu in c {
                *count.entry((lex_key(mu), mu)).or_default() += 1;
            }
        }
        let Some((&(_, best), _)) = count.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) else {
            return chosen;
        };
        for (i, c) in candidates.iter().enumerate() {
            if chosen[i].is_none() && c.contains(&best) {
                chosen[i] = Some(best);
            }
        }
    }
}

/// Sort key placing sets in lexicographic order of their sorted elements.
fn lex_key(s: ElementSet) -> u16 {
    u16::MAX - s.reverse_bits()
}

struct Run<'a> {
    ts: &'a TightSpan,
    opts: &'a VerifyOptions,
    steps: Vec<EvidenceStep>,
}

impl Run<'_> {
    fn dispatch(&mut self, st: &Structure, l: GroupLabel) -> Step<()> {
        let full = self.ts.full();
        match l.group {
            1 => self.presentation(&full),
            2 => self.tree(&full),
            3 => {
                self.leaf_pairs(&st.leaf_pairs, EvidenceRule::LeafPair)?;
                self.presentation(&st.sl)
            }
            4 => {
                self.leaf_pairs(&st.branch_pairs, EvidenceRule::BranchLeaf)?;
                self.presentation(&st.sbr)
            }
            5 => {
                self.leaf_pairs(&st.leaf_pairs, EvidenceRule::LeafPair)?;
                self.fins(&st.fins_of_length_one())?;
                self.presentation(&st.sl_fins1)
            }
            6 => {
                self.leaf_pairs(&st.leaf_pairs, EvidenceRule::LeafPair)?;
                self.fins(&st.fins)?;
                self.tree(&st.sl_fins)
            }
            g => Err(format!("no strategy for group {g}")),
        }
    }

    fn dim_of(&self, m: &Matroid, cell: &str) -> Step<DimEvidence> {
        let ev = dim_thin_schubert(m).map_err(|e| format!("{cell}: {e}"))?;
        if ev.dimension.is_none() {
            return Err(format!("{cell}: dimension of {} not certified", describe(m)));
        }
        Ok(ev)
    }

    /// Dimension of a smooth irreducible thin Schubert cell.
    fn irreducible_dim(&self, m: &Matroid, cell: &str) -> Step<i64> {
        let ev = self.dim_of(m, cell)?;
        if ev.components != 1 {
            return Err(format!("{cell}: {} has {} components", describe(m), ev.components));
        }
        Ok(ev.dimension.expect("checked") as i64)
    }

    fn vertex_term(&self, v: usize, sign: i8) -> Step<Term> {
        Ok(Term {
            cell: vref(v),
            dimension: self.irreducible_dim(&self.ts.vertices[v], &vref(v))?,
            sign,
        })
    }

    fn edge_term(&self, e: usize, sign: i8) -> Step<Term> {
        Ok(Term {
            cell: eref(e),
            dimension: self.irreducible_dim(&self.ts.edges[e].matroid, &eref(e))?,
            sign,
        })
    }

    fn sdc(&self, v: usize, e: usize) -> Step<SdcJustification> {
        sdc_check(&self.ts.vertices[v], &self.ts.edges[e].matroid)
            .map_err(|err| format!("{} -> {}: {err}", vref(v), eref(e)))?
            .ok_or_else(|| format!("no SDC rule applies to {} -> {}", vref(v), eref(e)))
    }

    fn csp(&mut self) -> Step<()> {
        let ts = self.ts;
        let report = verify_qsp_algebra();
        if !report.passed {
            return Err("realization check of the special matroid failed".into());
        }
        let full = ts.full();
        let c = (0..ts.vertices.len())
            .find(|&v| ts.degree(&full, v) + 1 == ts.vertices.len())
            .ok_or("no center")?;
        let ev = self.dim_of(&ts.vertices[c], &vref(c))?;
        if ev.components != 2 {
            return Err(format!("center {} has {} components", vref(c), ev.components));
        }
        self.steps.push(EvidenceStep::new(
            EvidenceRule::SpecialMatroid,
            vec![vref(c)],
            json!({
                "matroid": describe(&ts.vertices[c]),
                "components": ev.components,
                "minors_vanish": report.nonbases_vanish,
                "bases_nonzero": report.bases_nonzero,
                "discriminant": report.discriminant,
            }),
            vec![Term {
                cell: vref(c),
                dimension: ev.dimension.expect("special matroid") as i64,
                sign: 1,
            }],
        ));
        let pairs: Vec<LeafPair> = full
            .edges
            .iter()
            .map(|&e| {
                let [a, b] = ts.edges[e].ends;
                LeafPair {
                    vertex: if a == c { b } else { a },
                    edge: e,
                }
            })
            .collect();
        self.leaf_pairs(&pairs, EvidenceRule::LeafPair)
    }

    fn leaf_pairs(&mut self, pairs: &[LeafPair], rule: EvidenceRule) -> Step<()> {
        for p in pairs {
            let sdc = self.sdc(p.vertex, p.edge)?;
            let terms = vec![self.vertex_term(p.vertex, 1)?, self.edge_term(p.edge, -1)?];
            self.steps.push(EvidenceStep::new(
                rule,
                vec![vref(p.vertex), eref(p.edge)],
                json!({
                    "vertex": describe(&self.ts.vertices[p.vertex]),
                    "edge": describe(&self.ts.edges[p.edge].matroid),
                    "sdc": sdc,
                }),
                terms,
            ));
        }
        Ok(())
    }

    /// All but at most one vertex is `B`-maximal, or else has SDC maps to
    /// all its edges in the tree; the remaining vertex must be smooth and
    /// irreducible.
    fn tree(&mut self, sub: &Subcomplex) -> Step<()> {
        let ts = self.ts;
        if !ts.is_tree(sub) {
            return Err("subcomplex is not a tree".into());
        }
        let verts: Vec<usize> = sub.vertices.iter().copied().collect();
        let mut bmax: Vec<Vec<ElementSet>> = Vec::new();
        for &v in &verts {
            let ev = self.dim_of(&ts.vertices[v], &vref(v))?;
            let list = match ev.dimension {
                Some(d) if ev.components == 1 => ts.vertices[v]
                    .bases()
                    .filter(|&mu| d_value(&ts.vertices[v], mu).map(|x| x == d).unwrap_or(false))
                    .collect(),
                _ => Vec::new(),
            };
            bmax.push(list);
        }
        let witnesses = choose_witnesses(&bmax);
        let adjacent = |v: usize| -> Vec<usize> {
            sub.edges.iter().copied().filter(|&e| ts.edges[e].ends.contains(&v)).collect()
        };
        // roots: non-B-maximal vertices first
        let mut order: Vec<usize> = (0..verts.len()).filter(|&i| witnesses[i].is_none()).collect();
        order.extend((0..verts.len()).filter(|&i| witnesses[i].is_some()));
        let mut last_err = String::new();
        'root: for &r in &order {
            let mut just: Vec<serde_json::Value> = Vec::new();
            for (i, &v) in verts.iter().enumerate() {
                if i == r {
                    just.push(json!({"root": true}));
                } else if let Some(mu) = witnesses[i] {
                    just.push(json!({"b_maximal": label(mu)}));
                } else {
                    let mut maps = Vec::new();
                    for e in adjacent(v) {
                        match self.sdc(v, e) {
                            Ok(j) => maps.push(json!({"edge": eref(e), "sdc": j})),
                            Err(msg) => {
                                last_err = msg;
                                continue 'root;
                            }
                        }
                    }
                    just.push(json!({"maps": maps}));
                }
            }
            if let Err(msg) = self.irreducible_dim(&ts.vertices[verts[r]], &vref(verts[r])) {
                last_err = msg;
                continue;
            }
            for (i, &v) in verts.iter().enumerate() {
                let term = self.vertex_term(v, 1)?;
                self.steps.push(EvidenceStep::new(
                    EvidenceRule::TreeVertex,
                    vec![vref(v)],
                    json!({"matroid": describe(&ts.vertices[v]), "justification": just[i]}),
                    vec![term],
                ));
            }
            for &e in &sub.edges {
                let term = self.edge_term(e, -1)?;
                self.steps.push(EvidenceStep::new(
                    EvidenceRule::TreeEdge,
                    vec![eref(e)],
                    json!({"matroid": describe(&ts.edges[e].matroid)}),
                    vec![term],
                ));
            }
            return Ok(());
        }
        Err(format!("tree rule fails: {last_err}"))
    }

    /// Each fin needs a basis of its face matroid at which every exposed
    /// vertex is `B`-maximal.
    fn fins(&mut self, fins: &[Fin]) -> Step<()> {
        let ts = self.ts;
        let mut candidates = Vec::new();
        for fin in fins {
            let qf = &ts.faces[fin.face].matroid;
            let mut dims = Vec::new();
            for &v in &fin.exposed_vertices {
                dims.push(self.irreducible_dim(&ts.vertices[v], &vref(v))? as usize);
            }
            let list: Vec<ElementSet> = qf
                .bases()
                .filter(|&mu| {
                    fin.exposed_vertices.iter().zip(&dims).all(|(&v, &d)| {
                        ts.vertices[v].is_basis(mu) && d_value(&ts.vertices[v], mu).map(|x| x == d).unwrap_or(false)
                    })
                })
                .collect();
            if list.is_empty() {
                return Err(format!("fin {} is not B-maximal", fref(fin.face)));
            }
            candidates.push(list);
        }
        let witnesses = choose_witnesses(&candidates);
        for (fin, mu) in fins.iter().zip(witnesses) {
            let qf = &ts.faces[fin.face].matroid;
            let mut terms = vec![Term {
                cell: fref(fin.face),
                dimension: self.irreducible_dim(qf, &fref(fin.face))?,
                sign: 1,
            }];
            for &e in &fin.exposed_edges {
                terms.push(self.edge_term(e, -1)?);
            }
            for &v in &fin.exposed_vertices {
                terms.push(self.vertex_term(v, 1)?);
            }
            let mut refs = vec![fref(fin.face)];
            refs.extend(fin.order.iter().map(|&v| vref(v)));
            self.steps.push(EvidenceStep::new(
                EvidenceRule::Fin,
                refs,
                json!({
                    "matroid": describe(qf),
                    "path_length": fin.path_length,
                    "exposed_vertices": fin.exposed_vertices.iter().map(|&v| vref(v)).collect::<Vec<_>>(),
                    "exposed_edges": fin.exposed_edges.iter().map(|&e| eref(e)).collect::<Vec<_>>(),
                    "witness": label(mu.expect("nonempty candidates")),
                }),
                terms,
            ));
        }
        Ok(())
    }

    /// Try the common bases by presentation size until one certifies.
    fn presentation(&mut self, sub: &Subcomplex) -> Step<()> {
        let ts = self.ts;
        if sub.is_empty() {
            return Err("empty subcomplex".into());
        }
        if !ts.vertex_connecting(sub) {
            return Err("subcomplex is not vertex-connecting".into());
        }
        let table = crate::matroid::subsets::table(ts.n, ts.r);
        let mut built = Vec::new();
        for i in MaskIter(ts.common_bases(sub)) {
            let mu = table.subset(i);
            let p = build_sigma_presentation(ts, sub, mu).map_err(|e| e.to_string())?;
            built.push((p.num_variables(), p.ideal_gens.len(), lex_key(mu), mu, p));
        }
        if built.is_empty() {
            return Err("subcomplex is not vertex-intersecting".into());
        }
        built.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        for (_, _, _, mu, p) in built {
            let Some(c) = certify_presentation_with(&p, self.opts.points, self.opts.seed).map_err(|e| e.to_string())?
            else {
                continue;
            };
            let refs: Vec<String> = sub
                .vertices
                .iter()
                .map(|&v| vref(v))
                .chain(sub.edges.iter().map(|&e| eref(e)))
                .chain(sub.faces.iter().map(|&f| fref(f)))
                .collect();
            let gens: Vec<String> = p.ideal_gens.iter().map(|f| p.display_poly(f)).collect();
            let dim = c.reduced.num_variables() as i64;
            self.steps.push(EvidenceStep::new(
                EvidenceRule::SigmaPresentation,
                refs,
                json!({
                    "basis": label(mu),
                    "variables": p.num_variables(),
                    "ideal": gens,
                    "method": if c.triangular.is_some() { "triangular" } else { "elimination" },
                    "triangular": c.triangular,
                    "soundness": c.soundness,
                    "presentation": p.to_json(),
                    "reduced": c.reduced.to_json(),
                }),
                vec![Term {
                    cell: "limit".into(),
                    dimension: dim,
                    sign: 1,
                }],
            ));
            return Ok(());
        }
        Err("no common basis gives a regular presentation".into())
    }
}
