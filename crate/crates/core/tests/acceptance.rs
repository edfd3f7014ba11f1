//! Acceptance criteria 1-7, one PASS/FAIL line each. Criterion 7 needs
//! external cone data (GR38_CONE_DATA, JSON lines); without it the line
//! reports FAIL with the reason and the run still succeeds, since that
//! criterion is optional.

mod common;

use common::*;
use rand::Rng;
use gr38_core::driver::{self, BatchOptions, InputMode};
use gr38_core::known::{self, qsp, u_template, QSP_NONBASES};
use gr38_core::matroid::subsets::parse_label;
use gr38_core::matroid::{classify_template, Matroid, TemplateKind};
use gr38_core::schubert::{build_presentation, certify_presentation, dim_thin_schubert, is_b_maximal, verify_qsp_algebra};
use gr38_core::subdivision::{regular_subdivision, tight_span, Weight};
use gr38_core::verify::{self, a_t, classify, dimension_audit, plucker_valuations, EvidenceRule, GroupLabel};
use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn s(l: &str) -> u16 {
    parse_label(l).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion1() -> Outcome {
    let rep = verify_qsp_algebra();
    ensure(rep.nonbases_vanish && rep.nonbasis_minors.len() == 8, "nonbasis minors do not all vanish")?;
    ensure(rep.bases_total == 48 && rep.bases_nonzero == 48, format!("{} of {} basis minors nonzero", rep.bases_nonzero, rep.bases_total))?;
    ensure(rep.passed, "report not passed")?;
    let d = dim_thin_schubert(&qsp()).map_err(|e| e.to_string())?;
    ensure(d.dimension == Some(7) && d.components == 2, format!("special matroid: {:?}, {} components", d.dimension, d.components))?;
    Ok("8 nonbasis minors vanish, 48 basis minors nonzero, dim 7 with 2 components".into())
}

fn criterion2() -> Outcome {
    let w = known::w_sp();
    let sub = regular_subdivision(&w).map_err(|e| e.to_string())?;
    ensure(sub.maximal_cells.len() == 9, format!("{} maximal cells", sub.maximal_cells.len()))?;
    let ts = tight_span(&sub).map_err(|e| e.to_string())?;
    ensure(ts.faces.is_empty() && ts.edges.len() == 8, "tight span is not a tree with 8 edges")?;
    let centers: Vec<usize> = (0..ts.vertices.len())
        .filter(|&v| classify_template(&ts.vertices[v]).kind == TemplateKind::Qsp)
        .collect();
    ensure(centers.len() == 1, "no unique special center")?;
    let c = centers[0];
    ensure(ts.edges.iter().all(|e| e.ends.contains(&c)), "not a star")?;
    let full = 0xffu16;
    let mut triples = BTreeSet::new();
    for v in (0..ts.vertices.len()).filter(|&v| v != c) {
        let found = QSP_NONBASES.iter().find(|l| {
            let t = s(l);
            let parts: Vec<u16> = gr38_core::matroid::subsets::elements(t).map(|e| 1u16 << e).chain([full & !t]).collect();
            u_template(&parts) == ts.vertices[v]
        });
        let Some(l) = found else {
            return Err(format!("leaf v{} is not U(i,j,k,rest) for a nonbasis ijk", v + 1));
        };
        triples.insert(*l);
    }
    ensure(triples.len() == 8, "leaves do not run over all 8 nonbases")?;
    let cert = verify::verify(&w);
    ensure(cert.verified && cert.smooth, format!("not verified: {:?}", cert.failure))?;
    ensure(cert.components == 2 && cert.dimension == Some(15), "wrong components or dimension")?;
    ensure(dimension_audit(&cert).is_ok(), "audit fails")?;
    Ok("9 cells, star tree with leaves U(i,j,k,[8]-ijk), smooth, 2 components, dim 15".into())
}

fn criterion3() -> Outcome {
    let w = plucker_valuations(&a_t()).map_err(|e| e.to_string())?;
    ensure(w.project_lineality() == known::w_sp().project_lineality(), "valuations differ from the special weight modulo lineality")?;
    ensure(driver::canonical_rep(&w) == driver::canonical_rep(&known::w_sp()), "canonical forms differ")?;
    Ok("minor valuations of A_t equal the special weight modulo lineality".into())
}

fn contributions(c: &verify::Certificate, rule: EvidenceRule) -> Vec<i64> {
    let mut v: Vec<i64> = c.evidence.iter().filter(|s| s.rule == rule).map(|s| s.contribution).collect();
    v.sort_unstable();
    v
}

fn check_certificate(name: &str, w: &Weight, label: GroupLabel) -> Result<verify::Certificate, String> {
    let got = classify(w).map_err(|e| e.to_string())?;
    ensure(got == label, format!("{name}: classified {got}, expected {label}"))?;
    let c = verify::verify(w);
    ensure(c.verified && c.smooth && c.components == 1, format!("{name}: {:?}", c.failure))?;
    ensure(c.dimension == Some(15), format!("{name}: dimension {:?}", c.dimension))?;
    dimension_audit(&c).map_err(|e| format!("{name}: {e}"))?;
    Ok(c)
}

fn criterion4() -> Outcome {
    // tree example
    let c = check_certificate("tree", &known::tree_example(), GroupLabel { group: 2, h_index: None })?;
    ensure(contributions(&c, EvidenceRule::TreeVertex) == vec![7, 7, 7, 7, 9, 10], "tree vertex dimensions")?;
    let edges: Vec<i64> = contributions(&c, EvidenceRule::TreeEdge).iter().rev().map(|d| -d).collect();
    ensure(edges == vec![6, 6, 6, 6, 8], format!("tree edge dimensions {edges:?}"))?;
    let witnesses: BTreeSet<String> = c
        .evidence
        .iter()
        .filter_map(|s| s.data["justification"]["b_maximal"].as_str().map(String::from))
        .collect();
    ensure(witnesses == BTreeSet::from(["147".to_string(), "268".to_string()]), format!("tree witnesses {witnesses:?}"))?;

    // mantis example
    let c = check_certificate("mantis", &known::mantis_example(), GroupLabel { group: 5, h_index: None })?;
    let sigma: Vec<_> = c.evidence.iter().filter(|s| s.rule == EvidenceRule::SigmaPresentation).collect();
    ensure(sigma.len() == 1 && sigma[0].contribution == 12, "sub-limit is not of dimension 12")?;
    ensure(sigma[0].data["variables"] == 14 && sigma[0].data["basis"] == "267", "presentation is not at 267 with 14 variables")?;
    let ideal: Vec<&str> = sigma[0].data["ideal"].as_array().unwrap().iter().filter_map(|g| g.as_str()).collect();
    let binomial = ["x_1_1*x_2_2 - x_1_2*x_2_1", "x_1_2*x_2_1 - x_1_1*x_2_2"];
    ensure(ideal.iter().any(|g| binomial.contains(g)), format!("ideal {ideal:?} lacks the 2x2 binomial"))?;
    ensure(verify::replay_presentations(&c, 20, 7).map(|r| r.len()) == Ok(1), "replay of the mantis elimination fails")?;
    let fins: Vec<_> = c.evidence.iter().filter(|s| s.rule == EvidenceRule::Fin).collect();
    ensure(fins.len() == 1 && fins[0].data["witness"] == "127", "mantis fin witness is not 127")?;

    // six-fin example
    let w = known::six_fin_example();
    let c = check_certificate("six-fin", &w, GroupLabel { group: 6, h_index: Some(0) })?;
    let t: i64 = c
        .evidence
        .iter()
        .filter(|s| matches!(s.rule, EvidenceRule::TreeVertex | EvidenceRule::TreeEdge))
        .map(|s| s.contribution)
        .sum();
    ensure(t == 11, format!("tree part has dimension {t}, expected 11"))?;
    let st = verify::structure(&w).map_err(|e| e.to_string())?;
    ensure(st.fins.len() == 6 && st.fins.iter().all(|f| f.path_length == 2), "expected six fins with contact length 2")?;
    // Fins are named by the templates of their exposed vertices.
    let printed: [(&str, &[&str], &str); 6] = [
        ("F1", &["W(7;1,3;2456,8)"], "157"),
        ("F2", &["W(2478;1,3;5,6)"], "125"),
        ("F3", &["W(1378;2,4;5,6)"], "125"),
        ("F4", &["W(1356;2,4;7,8)"], "157"),
        ("F5", &["U(13,2,4,5678)", "W(5678;1,3;2,4)"], "125"),
        ("F6", &["U(1234,5,6,78)", "U(1234,56,7,8)", "W(1234;5,6;7,8)"], "157"),
    ];
    let mut confirmed = 0;
    for (name, exposed, mu) in printed {
        let fin = st
            .fins
            .iter()
            .find(|f| {
                let mut names: Vec<String> =
                    f.exposed_vertices.iter().map(|&v| classify_template(&st.ts.vertices[v]).describe()).collect();
                names.sort();
                names == exposed
            })
            .ok_or(format!("{name}: no fin with exposed vertices {exposed:?}"))?;
        let qf = &st.ts.faces[fin.face].matroid;
        let b_max = |mu: u16| -> bool {
            qf.is_basis(mu)
                && fin.exposed_vertices.iter().all(|&v| {
                    let q = &st.ts.vertices[v];
                    let d = dim_thin_schubert(q).unwrap().dimension.unwrap();
                    q.is_basis(mu) && is_b_maximal(q, mu, d).unwrap()
                })
        };
        if name == "F4" {
            // 1 and 5 are parallel in the exposed vertex, so neither witness is a basis.
            let q = &st.ts.vertices[fin.exposed_vertices[0]];
            ensure(!q.is_basis(s("157")) && !q.is_basis(s("125")), "F4: expected 157 and 125 to be non-bases")?;
            ensure(!b_max(s("157")) && !b_max(s("125")), "F4 B-maximal at a printed witness")?;
            ensure(b_max(s("127")), "F4 not B-maximal at 127")?;
        } else {
            ensure(b_max(s(mu)), format!("{name} is not B-maximal at {mu}"))?;
            confirmed += 1;
        }
    }
    ensure(confirmed == 5, "printed fin witnesses")?;
    Ok("G2/G5/G6-H0 at dim 15; tree dims 7,10,9,7,7,7 / 6,6,6,6,8; sub-limit dim 12 with x11x22-x12x21; \
        5 of 6 printed fin witnesses hold, F4 holds at 127 instead"
        .into())
}

fn criterion5() -> Outcome {
    let mut rng = rng(0xacce_5);
    let mut matroids: BTreeMap<(usize, u128), Matroid> = BTreeMap::new();
    let mut cells = 0;
    // subdivision invariants and exchange axiom on 200 random lifts
    for i in 0..200 {
        let n = [6, 7, 8][i % 3];
        let w = if n == 8 { sparse_lift(&mut rng, 3, 8, 12, 2) } else { random_lift(&mut rng, 3, n, 2) };
        let sub = regular_subdivision(&w).map_err(|e| e.to_string())?;
        sub.check_invariants().map_err(|e| format!("lift {i}: {e}"))?;
        let all = sub
            .maximal_cells
            .iter()
            .chain(sub.adjacency.iter().map(|a| &a.face))
            .chain(sub.codim2.iter().map(|f| &f.face));
        for c in all {
            cells += 1;
            let sets = sets_of(n, 3, c.bases);
            ensure(exchange_holds(&sets) == c.matroid.is_some(), format!("lift {i}: exchange disagreement"))?;
        }
    }
    // brute-force oracle on tiny hypersimplices
    let mut oracle = 0;
    for (r, n) in [(2, 4), (2, 5), (3, 5)] {
        for _ in 0..15 {
            let w = random_lift(&mut rng, r, n, 3);
            let ours: BTreeSet<u128> = regular_subdivision(&w).unwrap().maximal_cells.iter().map(|c| c.bases).collect();
            ensure(ours == brute_force_cells(&w), format!("oracle disagrees on Δ({r},{n})"))?;
            oracle += 1;
        }
    }
    // equivariance and lineality invariance on 50 random weights
    for i in 0..50 {
        let w = sparse_lift(&mut rng, 3, 8, 10, 3);
        let sigma = random_permutation(&mut rng, 8);
        let c: Vec<gr38_core::rational::Q> = (0..8).map(|_| gr38_core::rational::q(rng.gen_range(-4..=4))).collect();
        let cells_of = |w: &Weight| -> BTreeSet<u128> {
            regular_subdivision(w).unwrap().maximal_cells.iter().map(|c| c.bases).collect()
        };
        let base = regular_subdivision(&w).unwrap();
        let moved: BTreeSet<u128> = base
            .maximal_cells
            .iter()
            .map(|c| Matroid::from_mask(8, 3, c.bases).map(|m| m.permuted(&sigma).mask()).unwrap_or_else(|_| {
                let t = gr38_core::matroid::subsets::table(8, 3);
                t.iter_mask(c.bases).fold(0u128, |acc, s| acc | 1 << t.index_of(sigma.apply_set(s)).unwrap())
            }))
            .collect();
        ensure(cells_of(&w.permuted(&sigma)) == moved, format!("weight {i}: not S8-equivariant"))?;
        let shifted = w.add(&Weight::lineality(w.ambient(), &c));
        ensure(cells_of(&shifted) == cells_of(&w), format!("weight {i}: not L-invariant"))?;
        ensure(classify(&shifted).ok() == classify(&w).ok() && classify(&w.permuted(&sigma)).ok() == classify(&w).ok(), format!("weight {i}: label changes"))?;
    }
    // every reduction replays; triangular criterion agrees with elimination
    for i in 0..30 {
        let w = random_valuated(&mut rng, 3, [6, 7][i % 2]);
        let ts = tight_span(&regular_subdivision(&w).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let all = ts.vertices.iter().chain(ts.edges.iter().map(|e| &e.matroid)).chain(ts.faces.iter().map(|f| &f.matroid));
        for m in all {
            matroids.insert((m.n(), m.mask()), m.clone());
        }
    }
    let (mut reductions, mut triangular) = (0, 0);
    for m in matroids.values().take(60) {
        for mu in m.bases().take(4) {
            let p = build_presentation(m, mu).map_err(|e| e.to_string())?;
            let tri = p.upper_triangular_check();
            let reduced = p.reduce_ideal();
            if let Some(t) = &tri {
                triangular += 1;
                ensure(reduced.ideal_is_zero() && reduced.num_variables() == p.num_variables() - t.rows.len(), "triangular and elimination disagree")?;
            }
            if let Some(cert) = certify_presentation(&p).map_err(|e| e.to_string())? {
                ensure(cert.soundness.points == 20, "replay did not use 20 points")?;
                reductions += 1;
            }
        }
    }
    ensure(reductions > 0 && triangular > 0, format!("no reductions exercised: {} matroids, {reductions} reductions, {triangular} triangular", matroids.len()))?;
    Ok(format!(
        "{cells} cells pass exchange/witness/adjacency; {oracle} oracle weights; 50 equivariance checks; \
         {reductions} reductions replayed, {triangular} triangular cases agree"
    ))
}

fn criterion6() -> Outcome {
    let mut rng = rng(0x5c40);
    let mut groups: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..100 {
        let (n, dim) = if i < 50 { (6, 9) } else { (7, 12) };
        let w = random_valuated(&mut rng, 3, n);
        let c = verify::verify(&w);
        ensure(c.verified && c.smooth, format!("matrix {i} ({n}): {:?}", c.failure))?;
        ensure(c.components == 1 && c.dimension == Some(dim), format!("matrix {i}: {} components, dim {:?}", c.components, c.dimension))?;
        *groups.entry(c.group).or_default() += 1;
    }
    Ok(format!("100 realizable weights smooth and irreducible, dims 9/12; groups {groups:?}"))
}

fn criterion7() -> Outcome {
    let Ok(path) = std::env::var("GR38_CONE_DATA") else {
        return Err("not run: GR38_CONE_DATA is unset (needs externally supplied cone data)".into());
    };
    let mode = match std::env::var("GR38_CONE_MODE").as_deref() {
        Ok("all-cones") => InputMode::AllCones,
        _ => InputMode::Orbits,
    };
    let opts = BatchOptions {
        mode,
        jobs: std::env::var("GR38_JOBS").ok().and_then(|j| j.parse().ok()),
        out: std::env::var("GR38_CONE_OUT").ok().map(Into::into),
        ..BatchOptions::default()
    };
    let s = driver::run_batch(std::path::Path::new(&path), &opts).map_err(|e| e.to_string())?;
    let want = [13_641, 215, 28_227, 483, 14_389, 389];
    let got: Vec<usize> = (1..=6).map(|g| s.counts.get(&format!("G{g}")).copied().unwrap_or(0)).collect();
    ensure(got == want, format!("group counts {got:?}"))?;
    let hs: Vec<usize> = (0..=4).map(|h| s.h_counts.get(&format!("H{h}")).copied().unwrap_or(0)).collect();
    ensure(hs == vec![233, 127, 25, 3, 1], format!("H counts {hs:?}"))?;
    ensure(s.processed == 57_344 && s.failures.is_empty(), format!("{} processed, {} failures", s.processed, s.failures.len()))?;
    ensure(s.unverified.is_empty(), format!("{} unverified", s.unverified.len()))?;
    ensure(s.two_components.len() == 1, format!("{} two-component certificates", s.two_components.len()))?;
    Ok(format!("counts reproduced in {:.0} s", s.timing.wall_ms / 1e3))
}

fn main() {
    let criteria: [(u8, &str, Option<Duration>, fn() -> Outcome); 7] = [
        (1, "special matroid algebra", Some(Duration::from_secs(1)), criterion1),
        (2, "special weight end to end", Some(Duration::from_secs(5)), criterion2),
        (3, "degeneration A_t", Some(Duration::from_secs(1)), criterion3),
        (4, "worked examples", Some(Duration::from_secs(30)), criterion4),
        (5, "property suites", Some(Duration::from_secs(300)), criterion5),
        (6, "realizable (3,6)/(3,7) weights", Some(Duration::from_secs(600)), criterion6),
        (7, "large-scale batch (optional)", None, criterion7),
    ];
    let only: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = false;
    for (k, title, limit, f) in criteria {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let el = start.elapsed();
        let res = match (res, limit) {
            (Ok(_), Some(l)) if el > l => Err(format!("took {el:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        match &res {
            Ok(detail) => println!("PASS criterion {k} ({title}, {el:.2?}): {detail}"),
            Err(why) => println!("FAIL criterion {k} ({title}, {el:.2?}): {why}"),
        }
        if res.is_err() && k != 7 {
            failed = true;
        }
    }
    if failed {
        std::process::exit(1);
    }
}
