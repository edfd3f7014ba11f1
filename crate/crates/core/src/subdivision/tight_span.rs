//! The tight span up to dimension 2 and the subcomplex operations used to
//! prune it: leaves, branches and fins.

use super::complex::{SubdivisionComplex, SubdivisionError};
use crate::matroid::subsets::{table, MaskIter};
use crate::matroid::{BasisMask, ElementSet, Matroid};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsEdge {
    pub ends: [usize; 2],
    pub matroid: Matroid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsFace {
    pub cycle: Vec<usize>,
    pub edges: Vec<usize>,
    pub matroid: Matroid,
}

/// Dual complex of the interior cells: a vertex per maximal cell, an edge per
/// interior codimension-1 cell and a 2-cell per interior codimension-2 cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSpan {
    pub n: usize,
    pub r: usize,
    pub vertices: Vec<Matroid>,
    pub edges: Vec<TsEdge>,
    pub faces: Vec<TsFace>,
}

/// A subcomplex, given by the indices of its cells in a [`TightSpan`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Subcomplex {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub faces: BTreeSet<usize>,
}

impl Subcomplex {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn single_vertex(v: usize) -> Self {
        Self {
            vertices: BTreeSet::from([v]),
            ..Self::default()
        }
    }
}

/// A removed leaf: the vertex and its unique edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeafPair {
    pub vertex: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub vertices: Vec<usize>,
    /// Edges inside the branch or joining it to the rest.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fin {
    pub face: usize,
    /// Vertices `v_1, .., v_k` in cyclic order, exposed vertices first.
    pub order: Vec<usize>,
    /// Length of the connecting path.
    pub path_length: usize,
    pub exposed_vertices: Vec<usize>,
    pub exposed_edges: Vec<usize>,
    pub path_vertices: Vec<usize>,
    pub path_edges: Vec<usize>,
}

pub fn tight_span(s: &SubdivisionComplex) -> Result<TightSpan, SubdivisionError> {
    let amb = s.weight().ambient();
    let vertices = s
        .maximal_cells
        .iter()
        .map(|c| c.matroid().cloned())
        .collect::<Result<Vec<_>, _>>()?;
    let edges = s
        .adjacency
        .iter()
        .map(|a| {
            Ok(TsEdge {
                ends: a.cells,
                matroid: a.face.matroid()?.clone(),
            })
        })
        .collect::<Result<Vec<_>, SubdivisionError>>()?;
    let faces = s
        .codim2
        .iter()
        .map(|f| {
            Ok(TsFace {
                cycle: f.cycle.clone(),
                edges: f.edges.clone(),
                matroid: f.face.matroid()?.clone(),
            })
        })
        .collect::<Result<Vec<_>, SubdivisionError>>()?;
    Ok(TightSpan {
        n: amb.n(),
        r: amb.rank(),
        vertices,
        edges,
        faces,
    })
}

impl TightSpan {
    pub fn full(&self) -> Subcomplex {
        Subcomplex {
            vertices: (0..self.vertices.len()).collect(),
            edges: (0..self.edges.len()).collect(),
            faces: (0..self.faces.len()).collect(),
        }
    }

    /// Dual graph as (vertex count, edge list).
    pub fn graph(&self) -> (usize, Vec<[usize; 2]>) {
        (self.vertices.len(), self.edges.iter().map(|e| e.ends).collect())
    }

    pub fn degree(&self, sub: &Subcomplex, v: usize) -> usize {
        sub.edges.iter().filter(|&&e| self.edges[e].ends.contains(&v)).count()
    }

    pub fn is_connected(&self, sub: &Subcomplex) -> bool {
        let Some(&start) = sub.vertices.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &e in &sub.edges {
                let [a, b] = self.edges[e].ends;
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen.len() == sub.vertices.len()
    }

    /// The 1-skeleton of `sub` is a tree.
    pub fn is_tree(&self, sub: &Subcomplex) -> bool {
        !sub.is_empty() && sub.edges.len() + 1 == sub.vertices.len() && self.is_connected(sub)
    }

    /// Remove every leaf vertex together with its edge. When the complex is a
    /// single edge only the later vertex is removed.
    pub fn prune_leaves(&self, sub: &Subcomplex) -> (Subcomplex, Vec<LeafPair>) {
        let mut out = sub.clone();
        let mut pairs = Vec::new();
        let mut used_edges = BTreeSet::new();
        for &v in sub.vertices.iter().rev() {
            if self.degree(sub, v) != 1 {
                continue;
            }
            let e = *sub
                .edges
                .iter()
                .find(|&&e| self.edges[e].ends.contains(&v))
                .expect("degree one");
            if !used_edges.insert(e) {
                continue;
            }
            pairs.push(LeafPair { vertex: v, edge: e });
            out.vertices.remove(&v);
            out.edges.remove(&e);
        }
        pairs.sort_by_key(|p| p.vertex);
        (out, pairs)
    }

    /// Iterated leaf removal. A tree prunes to the empty complex and is a
    /// single branch.
    pub fn prune_branches(&self, sub: &Subcomplex) -> (Subcomplex, Vec<Branch>) {
        let core = if self.is_tree(sub) {
            Subcomplex::default()
        } else {
            let mut cur = sub.clone();
            loop {
                let (next, pairs) = self.prune_leaves(&cur);
                if pairs.is_empty() {
                    break cur;
                }
                cur = next;
            }
        };
        let removed: BTreeSet<usize> = sub.vertices.difference(&core.vertices).copied().collect();
        let mut branches = Vec::new();
        let mut seen = BTreeSet::new();
        for &start in &removed {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &e in &sub.edges {
                    let [a, b] = self.edges[e].ends;
                    let other = if a == v { b } else if b == v { a } else { continue };
                    if removed.contains(&other) && seen.insert(other) {
                        comp.push(other);
                        stack.push(other);
                    }
                }
            }
            comp.sort_unstable();
            let edges: Vec<usize> = sub
                .edges
                .iter()
                .copied()
                .filter(|&e| self.edges[e].ends.iter().any(|x| comp.contains(x)))
                .collect();
            branches.push(Branch {
                vertices: comp,
                edges,
            });
        }
        (core, branches)
    }

    /// Fins of `sub`: 2-cells meeting the rest of `sub` in a path of length
    /// `1 <= l <= k-2`. A vertex of the cell is attached to the rest when it
    /// has an edge outside the cell or lies in another 2-cell of `sub`.
    pub fn find_fins(&self, sub: &Subcomplex) -> Vec<Fin> {
        let mut fins = Vec::new();
        for &f in &sub.faces {
            let face = &self.faces[f];
            let k = face.cycle.len();
            let attached: Vec<bool> = face
                .cycle
                .iter()
                .map(|&v| {
                    let other_edge = sub.edges.iter().any(|&e| {
                        !face.edges.contains(&e) && self.edges[e].ends.contains(&v)
                    });
                    let other_face = sub
                        .faces
                        .iter()
                        .any(|&g| g != f && self.faces[g].cycle.contains(&v));
                    other_edge || other_face
                })
                .collect();
            let count = attached.iter().filter(|&&x| x).count();
            if count < 2 || count > k - 1 {
                continue;
            }
            // The attached vertices must form one cyclic arc.
            let starts: Vec<usize> = (0..k)
                .filter(|&i| attached[i] && !attached[(i + k - 1) % k])
                .collect();
            if starts.len() != 1 {
                continue;
            }
            let s = starts[0];
            let path_vertices: Vec<usize> = (0..count).map(|j| face.cycle[(s + j) % k]).collect();
            let path_edges: Vec<usize> = (0..count - 1).map(|j| face.edges[(s + j) % k]).collect();
            // Exposed vertices follow the arc; list them first, then the arc.
            let exposed_vertices: Vec<usize> =
                (count..k).map(|j| face.cycle[(s + j) % k]).collect();
            let mut order = exposed_vertices.clone();
            order.extend(path_vertices.iter());
            let exposed_edges: Vec<usize> = (count - 1..k).map(|j| face.edges[(s + j) % k]).collect();
            let mut ev = exposed_vertices.clone();
            ev.sort_unstable();
            let mut ee = exposed_edges.clone();
            ee.sort_unstable();
            fins.push(Fin {
                face: f,
                order,
                path_length: count - 1,
                exposed_vertices: ev,
                exposed_edges: ee,
                path_vertices,
                path_edges,
            });
        }
        fins
    }

    /// Remove the open 2-cells of the given fins with their exposed vertices
    /// and edges.
    pub fn remove_fins(&self, sub: &Subcomplex, fins: &[Fin]) -> Subcomplex {
        let mut out = sub.clone();
        for fin in fins {
            out.faces.remove(&fin.face);
            for v in &fin.exposed_vertices {
                out.vertices.remove(v);
            }
            for e in &fin.exposed_edges {
                out.edges.remove(e);
            }
        }
        out
    }

    /// Bases common to every vertex matroid of `sub`.
    pub fn common_bases(&self, sub: &Subcomplex) -> BasisMask {
        sub.vertices
            .iter()
            .fold(table(self.n, self.r).full_mask(), |m, &v| m & self.vertices[v].mask())
    }

    /// A basis common to all vertex matroids (lexicographically first), if any.
    pub fn vertex_intersecting(&self, sub: &Subcomplex) -> Option<ElementSet> {
        let m = self.common_bases(sub);
        if sub.is_empty() || m == 0 {
            return None;
        }
        Some(table(self.n, self.r).subset(m.trailing_zeros() as usize))
    }

    /// For every basis `x` in the union of the vertex cells, the cells of
    /// `sub` containing `x` form a connected subcomplex.
    pub fn vertex_connecting(&self, sub: &Subcomplex) -> bool {
        let union = sub.vertices.iter().fold(0u128, |m, &v| m | self.vertices[v].mask());
        MaskIter(union).all(|x| {
            let vs: BTreeSet<usize> = sub
                .vertices
                .iter()
                .copied()
                .filter(|&v| self.vertices[v].mask() >> x & 1 == 1)
                .collect();
            let es: BTreeSet<usize> = sub
                .edges
                .iter()
                .copied()
                .filter(|&e| self.edges[e].matroid.mask() >> x & 1 == 1)
                .collect();
            self.is_connected(&Subcomplex {
                vertices: vs,
                edges: es,
                faces: BTreeSet::new(),
            })
        })
    }

    /// Neighbours of each vertex in `sub`.
    pub fn neighbours(&self, sub: &Subcomplex) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = sub.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &e in &sub.edges {
            let [a, b] = self.edges[e].ends;
            out.entry(a).or_default().push(b);
            out.entry(b).or_default().push(a);
        }
        out
    }
}
