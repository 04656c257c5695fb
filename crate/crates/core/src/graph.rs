//! Interference graphs over lattice cells.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{lattice_metric, CellIndex, Lattice};

/// Undirected simple graph whose vertices are cells.
///
/// Vertices keep the order they were given in; all index-based accessors
/// refer to that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterferenceGraph {
    vertices: Vec<CellIndex>,
    adjacency: Vec<Vec<usize>>,
}

impl InterferenceGraph {
    /// Builds a graph from explicit vertex-index pairs. Self-loops and
    /// duplicate pairs are dropped.
    pub fn from_edges(
        vertices: Vec<CellIndex>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let n = vertices.len();
        let mut sets = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a},{b}) references a missing vertex");
            if a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        }
        InterferenceGraph {
            vertices,
            adjacency: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn vertices(&self) -> &[CellIndex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Sorted neighbour indices of vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as index pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    pub fn index_of(&self, c: CellIndex) -> Option<usize> {
        self.vertices.iter().position(|&v| v == c)
    }

    /// Induced subgraph on the vertices in `keep`, preserving this graph's
    /// vertex order. Cells not in the graph are ignored.
    pub fn subgraph_on(&self, keep: &[CellIndex]) -> InterferenceGraph {
        let keep: BTreeSet<CellIndex> = keep.iter().copied().collect();
        let picked: Vec<usize> = (0..self.len())
            .filter(|&v| keep.contains(&self.vertices[v]))
            .collect();
        self.induced(&picked)
    }

    /// Induced subgraph on vertex indices (must be increasing).
    pub fn induced(&self, picked: &[usize]) -> InterferenceGraph {
        let remap: HashMap<usize, usize> = picked
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let vertices = picked.iter().map(|&v| self.vertices[v]).collect();
        let adjacency = picked
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|u| remap.get(u).copied())
                    .collect()
            })
            .collect();
        InterferenceGraph {
            vertices,
            adjacency,
        }
    }

    /// Connected components as increasing vertex-index lists, ordered by
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// One `i1 j1 i2 j2` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.edges() {
            let (p, q) = (self.vertices[a], self.vertices[b]);
            let _ = writeln!(out, "{} {} {} {}", p.i, p.j, q.i, q.j);
        }
        out
    }

    /// Parses the edge-list format. Isolated vertices cannot be expressed in
    /// it, so only cells mentioned by some edge become vertices (row-major).
    pub fn parse_edge_list(text: &str) -> std::result::Result<InterferenceGraph, String> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<i32> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            let [i1, j1, i2, j2] = nums[..] else {
                return Err(format!(
                    "line {}: expected 4 integers, got {}",
                    lineno + 1,
                    nums.len()
                ));
            };
            pairs.push((CellIndex::new(i1, j1), CellIndex::new(i2, j2)));
        }
        let cells: BTreeSet<CellIndex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let vertices: Vec<CellIndex> = cells.into_iter().collect();
        let pos: HashMap<CellIndex, usize> =
            vertices.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let edges: Vec<_> = pairs.iter().map(|(a, b)| (pos[a], pos[b])).collect();
        Ok(InterferenceGraph::from_edges(vertices, edges))
    }
}

/// Graph on `active` cells with an edge wherever the lattice metric is
/// strictly below `threshold`. Vertices follow lattice order.
pub fn build_interference_graph(
    lattice: &Lattice,
    active: &[CellIndex],
    threshold: u64,
) -> Result<InterferenceGraph> {
    let mut picked = BTreeSet::new();
    for &c in active {
        if !lattice.contains(c) {
            return Err(Error::NotInLattice(c));
        }
        picked.insert(c);
    }
    let vertices: Vec<CellIndex> = picked.into_iter().collect();
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            if lattice_metric(vertices[a], vertices[b]) < threshold {
                edges.push((a, b));
            }
        }
    }
    Ok(InterferenceGraph::from_edges(vertices, edges))
}

/// Interference graph over every lattice cell.
pub fn lattice_graph(lattice: &Lattice, threshold: u64) -> InterferenceGraph {
    build_interference_graph(lattice, lattice.cells(), threshold)
        .expect("lattice cells are in the lattice")
}
