//! Batch runs over cone data: ingestion, canonical representatives under
//! `S_n` and the lineality space, parallel verification and summaries.

use crate::matroid::subsets::{elements, label, table};
use crate::matroid::{classify_template, Matroid, TemplateKind};
use crate::subdivision::{regular_subdivision, Cell, Subcomplex, Weight, WeightJson};
use crate::verify::{structure, verify_with, Certificate, VerifyError, VerifyOptions};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cone {0} has no rays")]
    EmptyCone(String),
    #[error("cone {id}: {message}")]
    BadCone { id: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// One line of cone data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeRecord {
    #[serde(deserialize_with = "id_string")]
    pub id: String,
    pub rays: Vec<Weight>,
}

fn id_string<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::Str(s) => s,
        Raw::Int(i) => i.to_string(),
    })
}

/// Parse JSON lines; blank lines are skipped and line numbers are 1-based.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<(usize, ConeRecord)>, DriverError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ConeRecord = serde_json::from_str(&line).map_err(|e| DriverError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push((i + 1, rec));
    }
    Ok(out)
}

/// Sum of the projected rays.
pub fn interior_point(c: &ConeRecord) -> Result<Weight, DriverError> {
    let Some(first) = c.rays.first() else {
        return Err(DriverError::EmptyCone(c.id.clone()));
    };
    let mut sum = Weight::zero(first.ambient().clone());
    for (i, ray) in c.rays.iter().enumerate() {
        if ray.ambient() != first.ambient() {
            return Err(DriverError::BadCone {
                id: c.id.clone(),
                message: format!("ray {} lives on a different matroid", i + 1),
            });
        }
        let p = ray.project_lineality();
        if p.values().iter().all(num_traits::Zero::is_zero) {
            return Err(DriverError::BadCone {
                id: c.id.clone(),
                message: format!("ray {} lies in the lineality space", i + 1),
            });
        }
        sum = sum.add(&p);
    }
    Ok(sum)
}

const MAX_CANONICAL_N: usize = 8;

fn permutations(n: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; MAX_CANONICAL_N + 1] = [const { OnceLock::new() }; MAX_CANONICAL_N + 1];
    CACHE[n].get_or_init(|| {
        crate::matroid::Permutation::all(n)
            .into_iter()
            .map(Vec::from)
            .collect()
    })
}

/// Projection off the lineality space followed by the lexicographically
/// smallest image under `S_n`, comparing values basis by basis in lex order
/// of the `r`-subsets (non-bases sort last). Above eight elements only the
/// projection is applied.
pub fn canonical_rep(w: &Weight) -> Weight {
    let p = w.project_lineality();
    let n = p.ambient().n();
    if n > MAX_CANONICAL_N {
        return p;
    }
    let t = table(n, p.ambient().rank());
    let mut distinct: Vec<&crate::rational::Q> = p.values().iter().collect();
    distinct.sort();
    distinct.dedup();
    let mut rank_of = vec![u32::MAX; 1 << n];
    for (b, v) in p.bases().into_iter().zip(p.values()) {
        rank_of[b as usize] = distinct.binary_search(&v).expect("value listed") as u32;
    }
    let subsets = t.subsets();
    let image = |pi: &[u8], s: u16| -> usize { elements(s).fold(0usize, |acc, e| acc | 1 << pi[e]) };
    let mut best: Vec<u32> = subsets.iter().map(|&s| rank_of[s as usize]).collect();
    let mut best_pi: Option<&Vec<u8>> = None;
    for pi in permutations(n) {
        let mut better = false;
        for (k, &s) in subsets.iter().enumerate() {
            let v = rank_of[image(pi, s)];
            if better {
                best[k] = v;
            } else if v < best[k] {
                better = true;
                best[k] = v;
            } else if v > best[k] {
                break;
            }
        }
        if better {
            best_pi = Some(pi);
        }
    }
    match best_pi {
        None => p,
        Some(pi) => {
            let sigma = crate::matroid::Permutation::new(pi.clone()).expect("bijection").inverse();
            p.permuted(&sigma)
        }
    }
}

/// SHA-256 of the compact weight JSON, in hex.
pub fn content_hash(w: &Weight) -> String {
    let j: WeightJson = w.to_json();
    let bytes = serde_json::to_vec(&j).expect("weight serializes");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputMode {
    /// Every record is already a distinct orbit representative.
    #[default]
    Orbits,
    /// Records may repeat orbits; duplicates are dropped.
    AllCones,
}

#[derive(Debug, Clone, Default)]
pub struct BatchOptions {
    pub mode: InputMode,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    /// Certificate directory; existing certificates there are reused.
    pub out: Option<PathBuf>,
    pub verify: VerifyOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordOutcome {
    pub id: String,
    pub line: usize,
    pub hash: String,
    pub group: String,
    pub verified: bool,
    pub components: usize,
    pub dimension: Option<i64>,
    /// Ids of later records in the same orbit (all-cones mode).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub duplicates: Vec<String>,
    pub reused: bool,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFailure {
    pub id: String,
    pub line: usize,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_ms: f64,
    pub mean_ms: f64,
    pub max_ms: f64,
    pub slowest: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub records: usize,
    /// Representatives that received a certificate.
    pub processed: usize,
    /// Per group label (`G1`..`G6`, `unclassified`); the special cone
    /// counts under its label `G2`.
    pub counts: BTreeMap<String, usize>,
    /// Group 6 split by `H` index.
    pub h_counts: BTreeMap<String, usize>,
    pub two_components: Vec<String>,
    pub unverified: Vec<String>,
    pub failures: Vec<RecordFailure>,
    pub outcomes: Vec<RecordOutcome>,
    pub timing: Timing,
}

impl RunSummary {
    /// No record failed, and under `strict` every certificate verified.
    pub fn is_success(&self, strict: bool) -> bool {
        self.failures.is_empty() && (!strict || self.unverified.is_empty())
    }
}

struct Job {
    line: usize,
    id: String,
    weight: Weight,
    hash: String,
    duplicates: Vec<String>,
}

pub fn run_batch(path: &Path, opts: &BatchOptions) -> Result<RunSummary, DriverError> {
    let file = std::fs::File::open(path)?;
    let records = read_records(std::io::BufReader::new(file))?;
    run_records(records, opts)
}

/// Verify parsed records. Per-record problems are collected and the run
/// continues.
pub fn run_records(records: Vec<(usize, ConeRecord)>, opts: &BatchOptions) -> Result<RunSummary, DriverError> {
    let start = Instant::now();
    if let Some(dir) = &opts.out {
        std::fs::create_dir_all(dir)?;
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = opts.jobs {
            b = b.num_threads(j);
        }
        b.build().map_err(|e| DriverError::Pool(e.to_string()))?
    };
    let mut summary = RunSummary {
        records: records.len(),
        ..RunSummary::default()
    };
    let prepared: Vec<Result<(Weight, String), DriverError>> = pool.install(|| {
        records
            .par_iter()
            .map(|(_, rec)| {
                let c = canonical_rep(&interior_point(rec)?);
                let h = content_hash(&c);
                Ok((c, h))
            })
            .collect()
    });
    let mut jobs: Vec<Job> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for ((line, rec), prep) in records.into_iter().zip(prepared) {
        match prep {
            Err(e) => summary.failures.push(RecordFailure {
                id: rec.id,
                line,
                error: e.to_string(),
            }),
            Ok((weight, hash)) => {
                if opts.mode == InputMode::AllCones {
                    if let Some(&j) = seen.get(&hash) {
                        jobs[j].duplicates.push(rec.id);
                        continue;
                    }
                    seen.insert(hash.clone(), jobs.len());
                }
                jobs.push(Job {
                    line,
                    id: rec.id,
                    weight,
                    hash,
                    duplicates: Vec::new(),
                });
            }
        }
    }
    let results: Vec<Result<(Certificate, bool, f64), DriverError>> =
        pool.install(|| jobs.par_iter().map(|job| certify(job, opts)).collect());
    for (job, res) in jobs.into_iter().zip(results) {
        let (cert, reused, millis) = match res {
            Ok(x) => x,
            Err(e) => {
                summary.failures.push(RecordFailure {
                    id: job.id,
                    line: job.line,
                    error: e.to_string(),
                });
                continue;
            }
        };
        summary.processed += 1;
        let key = cert.label.map_or_else(|| "unclassified".to_string(), |l| format!("G{}", l.group));
        *summary.counts.entry(key).or_default() += 1;
        if let Some(h) = cert.label.and_then(|l| l.h_index) {
            *summary.h_counts.entry(format!("H{h}")).or_default() += 1;
        }
        if cert.components == 2 {
            summary.two_components.push(job.id.clone());
        }
        if !cert.verified {
            summary.unverified.push(job.id.clone());
        }
        summary.outcomes.push(RecordOutcome {
            id: job.id,
            line: job.line,
            hash: job.hash,
            group: cert.group,
            verified: cert.verified,
            components: cert.components,
            dimension: cert.dimension,
            duplicates: job.duplicates,
            reused,
            millis,
        });
    }
    summary.failures.sort_by_key(|f| f.line);
    let times: Vec<f64> = summary.outcomes.iter().map(|o| o.millis).collect();
    if let Some((i, &max)) = times.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
        summary.timing.max_ms = max;
        summary.timing.mean_ms = times.iter().sum::<f64>() / times.len() as f64;
        summary.timing.slowest = Some(summary.outcomes[i].id.clone());
    }
    summary.timing.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(summary)
}

fn certify(job: &Job, opts: &BatchOptions) -> Result<(Certificate, bool, f64), DriverError> {
    let start = Instant::now();
    let path = opts.out.as_ref().map(|d| d.join(format!("{}.json", job.hash)));
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(c) = serde_json::from_str::<Certificate>(&text) {
                if c.weight == job.weight {
                    return Ok((c, true, start.elapsed().as_secs_f64() * 1e3));
                }
            }
        }
    }
    let cert = verify_with(&job.weight, &opts.verify);
    if let Some(p) = &path {
        write_atomic(p, cert.to_json_string().as_bytes())?;
    }
    Ok((cert, false, start.elapsed().as_secs_f64() * 1e3))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn describe(m: &Matroid) -> serde_json::Value {
    let t = classify_template(m);
    json!({
        "matroid": m.to_json(),
        "template": (t.kind != TemplateKind::None).then(|| t.describe()),
    })
}

fn cell_json(c: &Cell) -> serde_json::Value {
    let bases: Vec<String> = c.matroid.as_ref().map_or_else(Vec::new, |m| m.bases().map(label).collect());
    json!({
        "dim": c.dim,
        "bases": bases,
        "matroidal": c.matroid.is_some(),
        "witness": c.witness,
        "description": c.matroid.as_ref().map(describe),
    })
}

/// Maximal cells with their lower-face witnesses, interior walls and
/// codimension-2 cells.
pub fn subdivision_report(w: &Weight) -> Result<serde_json::Value, VerifyError> {
    let s = regular_subdivision(w)?;
    Ok(json!({
        "weight": w,
        "matroidal": s.is_matroidal(),
        "maximal_cells": s.maximal_cells.iter().map(cell_json).collect::<Vec<_>>(),
        "walls": s.adjacency.iter().map(|a| json!({
            "cells": [a.cells[0] + 1, a.cells[1] + 1],
            "face": cell_json(&a.face),
        })).collect::<Vec<_>>(),
        "codim2": s.codim2.iter().map(|f| json!({
            "cycle": f.cycle.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "face": cell_json(&f.face),
        })).collect::<Vec<_>>(),
    }))
}

/// Tight span cells, the pruned subcomplexes and the conditions they meet.
pub fn tight_span_report(w: &Weight) -> Result<serde_json::Value, VerifyError> {
    let st = structure(w)?;
    let ts = &st.ts;
    let sub = |s: &Subcomplex| {
        json!({
            "vertices": s.vertices.iter().map(|v| format!("v{}", v + 1)).collect::<Vec<_>>(),
            "edges": s.edges.iter().map(|e| format!("e{}", e + 1)).collect::<Vec<_>>(),
            "faces": s.faces.iter().map(|f| format!("f{}", f + 1)).collect::<Vec<_>>(),
        })
    };
    Ok(json!({
        "vertices": ts.vertices.iter().enumerate().map(|(i, m)| {
            let mut d = describe(m);
            d["id"] = json!(format!("v{}", i + 1));
            d
        }).collect::<Vec<_>>(),
        "edges": ts.edges.iter().enumerate().map(|(i, e)| {
            let mut d = describe(&e.matroid);
            d["id"] = json!(format!("e{}", i + 1));
            d["ends"] = json!([format!("v{}", e.ends[0] + 1), format!("v{}", e.ends[1] + 1)]);
            d
        }).collect::<Vec<_>>(),
        "faces": ts.faces.iter().enumerate().map(|(i, f)| {
            let mut d = describe(&f.matroid);
            d["id"] = json!(format!("f{}", i + 1));
            d["cycle"] = json!(f.cycle.iter().map(|v| format!("v{}", v + 1)).collect::<Vec<_>>());
            d
        }).collect::<Vec<_>>(),
        "leaf_pairs": st.leaf_pairs.iter().map(|p| [format!("v{}", p.vertex + 1), format!("e{}", p.edge + 1)]).collect::<Vec<_>>(),
        "without_leaves": sub(&st.sl),
        "branch_core": sub(&st.sbr),
        "fins": st.fins.iter().map(|f| json!({
            "face": format!("f{}", f.face + 1),
            "path_length": f.path_length,
            "exposed_vertices": f.exposed_vertices.iter().map(|v| format!("v{}", v + 1)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "conditions": st.conditions,
        "group": st.label().map(|l| l.to_string()),
        "special": st.is_csp(),
    }))
}
