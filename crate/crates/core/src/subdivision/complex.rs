//! Regular subdivisions of matroid polytopes, computed from the envelope
//! polyhedron `{a : Σ_{i∈λ} a_i <= w_λ}`. Its vertices are the maximal cells,
//! its bounded edges the interior codimension-1 cells and its bounded 2-faces
//! the interior codimension-2 cells.

use super::dd::{adjacent_pairs, extreme_rays};
use super::weight::Weight;
use crate::linalg;
use crate::matroid::subsets::{elements, MaskIter};
use crate::matroid::{BasisMask, Matroid};
use crate::rational::{q, Q};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubdivisionError {
    #[error("ambient matroid must be connected")]
    DisconnectedAmbient,
    #[error("interior codimension-2 cell {0} has a non-cyclic star")]
    NonCyclicStar(String),
    #[error("cell {0} is not a matroid polytope")]
    NotMatroidal(String),
}

/// Lower-face certificate: `a · e_λ + b = w_λ` on the cell, `<` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_qs")]
    pub a: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub b: Q,
}

fn ser_qs<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&crate::rational::format_rational(x))?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Cell vertices as a mask over the lexicographic list of `r`-subsets.
    pub bases: BasisMask,
    /// `None` when the vertex set fails the exchange axiom.
    pub matroid: Option<Matroid>,
    pub dim: usize,
    pub witness: Witness,
}

impl Cell {
    pub fn matroid(&self) -> Result<&Matroid, SubdivisionError> {
        self.matroid
            .as_ref()
            .ok_or_else(|| SubdivisionError::NotMatroidal(format!("{:#x}", self.bases)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub cells: [usize; 2],
    pub face: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codim2Face {
    /// Maximal cells around the face, in cyclic order.
    pub cycle: Vec<usize>,
    /// `edges[i]` indexes the adjacency between `cycle[i]` and `cycle[i+1]`.
    pub edges: Vec<usize>,
    pub face: Cell,
}

#[derive(Debug, Clone)]
pub struct SubdivisionComplex {
    weight: Weight,
    pub maximal_cells: Vec<Cell>,
    pub adjacency: Vec<Adjacency>,
    pub codim2: Vec<Codim2Face>,
}

struct Vertex {
    a: Vec<Q>,
    tight: u128,
}

struct Envelope<'w> {
    n: usize,
    rows: Vec<Vec<i64>>,
    w: &'w [Q],
}

impl Envelope<'_> {
    fn lhs(&self, row: usize, a: &[Q]) -> Q {
        self.rows[row]
            .iter()
            .zip(a)
            .filter(|(&e, _)| e != 0)
            .fold(Q::zero(), |acc, (_, x)| acc + x)
    }

    fn tight_set(&self, a: &[Q]) -> u128 {
        (0..self.rows.len())
            .filter(|&i| self.lhs(i, a) == self.w[i])
            .fold(0, |m, i| m | 1 << i)
    }

    fn rows_q(&self, mask: u128) -> Vec<Vec<Q>> {
        MaskIter(mask)
            .map(|i| self.rows[i].iter().map(|&x| q(x)).collect())
            .collect()
    }

    fn start_vertex(&self, r: usize) -> Vec<Q> {
        let min = self.w.iter().min().expect("nonempty").clone();
        let mut a = vec![min / q(r as i64); self.n];
        loop {
            let tight = self.tight_set(&a);
            let rows = self.rows_q(tight);
            if linalg::rank(&rows) == self.n {
                return a;
            }
            let d = linalg::nullspace(&rows, self.n).swap_remove(0);
            let slopes: Vec<Q> = (0..self.rows.len())
                .map(|i| {
                    self.rows[i]
                        .iter()
                        .zip(&d)
                        .filter(|(&e, _)| e != 0)
                        .fold(Q::zero(), |acc, (_, x)| acc + x)
                })
                .collect();
            let sign = if slopes.iter().any(|s| s.is_positive()) { q(1) } else { q(-1) };
            let mut best: Option<Q> = None;
            for (i, s) in slopes.iter().enumerate() {
                let s = s * &sign;
                if s.is_positive() {
                    let t = (&self.w[i] - self.lhs(i, &a)) / s;
                    if best.as_ref().is_none_or(|b| t < *b) {
                        best = Some(t);
                    }
                }
            }
            let t = best.expect("a direction off the lineality space meets a constraint") * &sign;
            for (x, dx) in a.iter_mut().zip(&d) {
                *x += &t * dx;
            }
        }
    }

    /// Step from `a` along the integer direction `d`; `None` if unbounded.
    fn step(&self, a: &[Q], tight: u128, d: &[i64]) -> Option<Vec<Q>> {
        let mut best: Option<Q> = None;
        for i in 0..self.rows.len() {
            if tight >> i & 1 == 1 {
                continue;
            }
            let s: i64 = self.rows[i].iter().zip(d).map(|(&e, &x)| e * x).sum();
            if s > 0 {
                let t = (&self.w[i] - self.lhs(i, a)) / q(s);
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        let t = best?;
        Some(a.iter().zip(d).map(|(x, &dx)| x + &t * q(dx)).collect())
    }
}

struct FaceAcc {
    vertices: BTreeSet<usize>,
    bounded: bool,
}

impl SubdivisionComplex {
    pub fn new(w: &Weight) -> Result<Self, SubdivisionError> {
        let amb = w.ambient();
        if !amb.is_connected() {
            return Err(SubdivisionError::DisconnectedAmbient);
        }
        let n = amb.n();
        let bases: Vec<u16> = amb.bases().collect();
        let rows: Vec<Vec<i64>> = bases
            .iter()
            .map(|&b| (0..n).map(|e| (b >> e & 1) as i64).collect())
            .collect();
        let env = Envelope {
            n,
            rows,
            w: w.values(),
        };

        let mut vertices: Vec<Vertex> = Vec::new();
        let mut index: HashMap<u128, usize> = HashMap::new();
        let mut edges: HashMap<(usize, usize), u128> = HashMap::new();
        let mut faces: HashMap<u128, FaceAcc> = HashMap::new();
        let start = env.start_vertex(amb.rank());
        let tight = env.tight_set(&start);
        index.insert(tight, 0);
        vertices.push(Vertex { a: start, tight });
        let mut queue = VecDeque::from([0usize]);

        while let Some(v) = queue.pop_front() {
            let tight = vertices[v].tight;
            let positions: Vec<usize> = MaskIter(tight).collect();
            let local_rows: Vec<Vec<i64>> = positions.iter().map(|&i| env.rows[i].clone()).collect();
            let rays = extreme_rays(&local_rows, n);
            let to_global = |m: u128| MaskIter(m).fold(0u128, |acc, i| acc | 1 << positions[i]);
            let mut bounded = Vec::with_capacity(rays.len());
            for ray in &rays {
                match env.step(&vertices[v].a, tight, &ray.dir) {
                    None => bounded.push(false),
                    Some(next) => {
                        bounded.push(true);
                        let nt = env.tight_set(&next);
                        let u = *index.entry(nt).or_insert_with(|| {
                            vertices.push(Vertex { a: next, tight: nt });
                            queue.push_back(vertices.len() - 1);
                            vertices.len() - 1
                        });
                        edges.insert((v.min(u), v.max(u)), tight & nt);
                    }
                }
            }
            for (i, j) in adjacent_pairs(&rays, n) {
                let t2 = to_global(rays[i].zeros & rays[j].zeros);
                let acc = faces.entry(t2).or_insert_with(|| FaceAcc {
                    vertices: BTreeSet::new(),
                    bounded: true,
                });
                acc.vertices.insert(v);
                acc.bounded &= bounded[i] && bounded[j];
            }
        }

        // Deterministic order: by the sorted list of cell vertices.
        let key = |m: u128| MaskIter(m).collect::<Vec<usize>>();
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by_key(|&i| key(vertices[i].tight));
        let mut rank_of = vec![0; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            rank_of[old] = new;
        }

        let to_lex = |m: u128| -> BasisMask {
            let t = amb.table();
            MaskIter(m).fold(0, |acc, p| acc | 1 << t.index_of(bases[p]).expect("basis"))
        };
        let make_cell = |m: u128, a: Vec<Q>| -> Cell {
            let lex = to_lex(m);
            let matroid = Matroid::from_mask(n, amb.rank(), lex).ok();
            let dim = match &matroid {
                Some(mt) => n - mt.components().len(),
                None => linalg::rank(&env.rows_q(m)) - 1,
            };
            Cell {
                bases: lex,
                matroid,
                dim,
                witness: Witness { a, b: Q::zero() },
            }
        };

        let maximal_cells: Vec<Cell> = order
            .iter()
            .map(|&i| make_cell(vertices[i].tight, vertices[i].a.clone()))
            .collect();

        let mut edge_list: Vec<([usize; 2], u128)> = edges
            .iter()
            .map(|(&(u, v), &m)| {
                let (a, b) = (rank_of[u], rank_of[v]);
                ([a.min(b), a.max(b)], m)
            })
            .collect();
        edge_list.sort();
        let adjacency: Vec<Adjacency> = edge_list
            .iter()
            .map(|&([a, b], m)| {
                let mid: Vec<Q> = maximal_cells[a]
                    .witness
                    .a
                    .iter()
                    .zip(&maximal_cells[b].witness.a)
                    .map(|(x, y)| (x + y) / q(2))
                    .collect();
                Adjacency {
                    cells: [a, b],
                    face: make_cell(m, mid),
                }
            })
            .collect();
        let edge_index: HashMap<[usize; 2], usize> =
            edge_list.iter().enumerate().map(|(i, &(e, _))| (e, i)).collect();

        let mut codim2 = Vec::new();
        let mut face_list: Vec<(u128, Vec<usize>)> = faces
            .into_iter()
            .filter(|(_, acc)| acc.bounded)
            .map(|(m, acc)| {
                let mut vs: Vec<usize> = acc.vertices.iter().map(|&v| rank_of[v]).collect();
                vs.sort_unstable();
                (m, vs)
            })
            .collect();
        face_list.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        for (m, vs) in face_list {
            let (cycle, cycle_edges) = order_cycle(&vs, m, &edge_list, &edge_index)
                .ok_or_else(|| SubdivisionError::NonCyclicStar(describe(amb, &bases, m)))?;
            let k = q(cycle.len() as i64);
            let mut centre = vec![Q::zero(); n];
            for &c in &cycle {
                for (x, y) in centre.iter_mut().zip(&maximal_cells[c].witness.a) {
                    *x += y;
                }
            }
            let centre = centre.into_iter().map(|x| x / &k).collect();
            codim2.push(Codim2Face {
                cycle,
                edges: cycle_edges,
                face: make_cell(m, centre),
            });
        }

        Ok(Self {
            weight: w.clone(),
            maximal_cells,
            adjacency,
            codim2,
        })
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// True iff every maximal cell is a matroid polytope.
    pub fn is_matroidal(&self) -> bool {
        self.maximal_cells.iter().all(|c| c.matroid.is_some())
    }

    /// Interior cells of the given codimension (0, 1 or 2).
    pub fn interior_faces(&self, codim: usize) -> Vec<&Cell> {
        match codim {
            0 => self.maximal_cells.iter().collect(),
            1 => self.adjacency.iter().map(|a| &a.face).collect(),
            2 => self.codim2.iter().map(|f| &f.face).collect(),
            _ => Vec::new(),
        }
    }

    /// Check coverage, witnesses and adjacency. Returns a description of the
    /// first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let amb = self.weight.ambient();
        let dim = amb.n() - amb.components().len();
        let covered = self.maximal_cells.iter().fold(0, |m, c| m | c.bases);
        if covered != amb.mask() {
            return Err("maximal cells do not cover the ambient vertices".into());
        }
        for (i, c) in self.maximal_cells.iter().enumerate() {
            if c.dim != dim {
                return Err(format!("maximal cell {i} has dimension {}", c.dim));
            }
        }
        let all = self
            .interior_faces(0)
            .into_iter()
            .chain(self.interior_faces(1))
            .chain(self.interior_faces(2));
        for c in all {
            if !self.witness_holds(c) {
                return Err(format!("witness fails for cell {:#x}", c.bases));
            }
        }
        for (i, adj) in self.adjacency.iter().enumerate() {
            let [a, b] = adj.cells;
            let meet = self.maximal_cells[a].bases & self.maximal_cells[b].bases;
            if meet != adj.face.bases {
                return Err(format!("adjacency {i} is not the intersection of its cells"));
            }
            if adj.face.dim + 1 != dim {
                return Err(format!("adjacency {i} has dimension {}", adj.face.dim));
            }
            let containing = self
                .maximal_cells
                .iter()
                .filter(|c| c.bases & adj.face.bases == adj.face.bases)
                .count();
            if containing != 2 {
                return Err(format!("interior facet {i} lies in {containing} maximal cells"));
            }
        }
        for (i, f) in self.codim2.iter().enumerate() {
            if f.face.dim + 2 != dim {
                return Err(format!("codim-2 face {i} has dimension {}", f.face.dim));
            }
        }
        Ok(())
    }

    /// Exact check of the lower-face certificate of `cell` against every
    /// ambient vertex.
    pub fn witness_holds(&self, cell: &Cell) -> bool {
        let amb = self.weight.ambient();
        let t = amb.table();
        amb.bases().zip(self.weight.values()).all(|(b, w)| {
            let lhs = elements(b).fold(cell.witness.b.clone(), |acc, e| acc + &cell.witness.a[e]);
            let inside = cell.bases >> t.index_of(b).expect("basis") & 1 == 1;
            if inside {
                lhs == *w
            } else {
                lhs < *w
            }
        })
    }
}

fn describe(amb: &Matroid, bases: &[u16], m: u128) -> String {
    let _ = amb;
    MaskIter(m)
        .map(|p| crate::matroid::subsets::label(bases[p]))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Arrange the vertices of a polygon cyclically using the bounded edges
/// whose face contains the 2-face.
fn order_cycle(
    vs: &[usize],
    face: u128,
    edges: &[([usize; 2], u128)],
    edge_index: &HashMap<[usize; 2], usize>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if vs.len() < 3 {
        return None;
    }
    let mut nbrs: HashMap<usize, Vec<usize>> = HashMap::new();
    for &([a, b], m) in edges {
        if m & face == face && vs.contains(&a) && vs.contains(&b) {
            nbrs.entry(a).or_default().push(b);
            nbrs.entry(b).or_default().push(a);
        }
    }
    if vs.iter().any(|v| nbrs.get(v).map_or(0, |n| n.len()) != 2) {
        return None;
    }
    let mut cycle = vec![vs[0]];
    let mut prev = usize::MAX;
    let mut cur = vs[0];
    loop {
        let nb = &nbrs[&cur];
        let mut options: Vec<usize> = nb.iter().copied().filter(|&x| x != prev).collect();
        options.sort_unstable();
        let next = options[0];
        if next == vs[0] {
            break;
        }
        if cycle.contains(&next) {
            return None;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
    if cycle.len() != vs.len() {
        return None;
    }
    let k = cycle.len();
    let cycle_edges = (0..k)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            edge_index[&[a.min(b), a.max(b)]]
        })
        .collect();
    Some((cycle, cycle_edges))
}
