//! Vertex coloring of interference graphs.
//!
//! [`ZykovSolver`] is the exact solver. It branches on a non-adjacent pair
//! `(u, v)`: either both get the same color (contract `v` into `u`) or they
//! differ (add the edge `uv`). Every leaf is a complete graph, whose
//! chromatic number is its vertex count. A DSATUR coloring of each search
//! state supplies upper bounds and a greedy clique supplies lower bounds.
//!
//! [`pattern_coloring`] gives closed-form colorings valid on lattices of any
//! size, and [`brute_force_chromatic`] is a small independent oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::InterferenceGraph;
use crate::lattice::{CellIndex, ChannelKind, Lattice};

/// Default vertex cap of the exact solver.
pub const DEFAULT_EXACT_VERTEX_CAP: usize = 64;

/// Largest graph [`brute_force_chromatic`] accepts.
pub const BRUTE_FORCE_VERTEX_CAP: usize = 10;

/// Color assignment with colors numbered `0..num_colors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    assignment: BTreeMap<CellIndex, usize>,
    num_colors: usize,
}

impl Coloring {
    /// Builds a coloring from per-vertex labels, renumbering labels by first
    /// appearance along `vertices`.
    pub fn canonical(vertices: &[CellIndex], labels: &[usize]) -> Self {
        assert_eq!(vertices.len(), labels.len());
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        let mut assignment = BTreeMap::new();
        for (&v, &label) in vertices.iter().zip(labels) {
            let next = renumber.len();
            let color = *renumber.entry(label).or_insert(next);
            assignment.insert(v, color);
        }
        Coloring {
            assignment,
            num_colors: renumber.len(),
        }
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color_of(&self, c: CellIndex) -> Option<usize> {
        self.assignment.get(&c).copied()
    }

    /// `(cell, color)` pairs in row-major cell order.
    pub fn iter(&self) -> impl Iterator<Item = (CellIndex, usize)> + '_ {
        self.assignment.iter().map(|(&c, &k)| (c, k))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Cells of each color class.
    pub fn classes(&self) -> Vec<Vec<CellIndex>> {
        let mut out = vec![Vec::new(); self.num_colors];
        for (c, k) in self.iter() {
            out[k].push(c);
        }
        out
    }
}

/// True iff no edge joins two vertices of the same color.
pub fn verify_coloring(graph: &InterferenceGraph, coloring: &Coloring) -> Result<bool> {
    let colors = graph
        .vertices()
        .iter()
        .map(|&v| coloring.color_of(v).ok_or(Error::IncompleteColoring(v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(graph.edges().all(|(a, b)| colors[a] != colors[b]))
}

/// Closed-form periodic coloring of every lattice cell.
///
/// With axial coordinates `a = i`, `b = (j - i) / 2`, data cells get
/// `(a - b) mod 3` and control cells `2 (a mod 2) + (b mod 2)`. The closest
/// same-colored cells sit at metric 12 (data) and 16 (control), exactly on
/// the reuse threshold.
pub fn pattern_coloring(lattice: &Lattice, kind: ChannelKind) -> Coloring {
    let labels: Vec<usize> = lattice
        .cells()
        .iter()
        .map(|c| {
            let a = c.i as i64;
            let b = (c.j as i64 - c.i as i64).div_euclid(2);
            match kind {
                ChannelKind::Data => (a - b).rem_euclid(3) as usize,
                ChannelKind::Control => (2 * a.rem_euclid(2) + b.rem_euclid(2)) as usize,
            }
        })
        .collect();
    Coloring::canonical(lattice.cells(), &labels)
}

/// DSATUR coloring of the whole graph. Fast, not necessarily optimal.
pub fn greedy_coloring(graph: &InterferenceGraph) -> Coloring {
    let state = State::from_graph(graph);
    let labels = state.dsatur();
    Coloring::canonical(graph.vertices(), &state.expand(&labels, graph.len()))
}

/// Vertex indices of a clique found greedily. Its size is a lower bound on
/// the chromatic number.
pub fn greedy_clique(graph: &InterferenceGraph) -> Vec<usize> {
    State::from_graph(graph).greedy_clique()
}

/// Exact chromatic coloring with the default vertex cap.
pub fn chromatic_coloring(graph: &InterferenceGraph) -> Result<Coloring> {
    ZykovSolver::default().solve(graph).map(|s| s.coloring)
}

/// Exact chromatic number by backtracking over `k = 1, 2, ...`, trying every
/// color for every vertex. Only for graphs of at most 10 vertices.
pub fn brute_force_chromatic(graph: &InterferenceGraph) -> Result<usize> {
    let n = graph.len();
    if n > BRUTE_FORCE_VERTEX_CAP {
        return Err(Error::SizeLimit {
            vertices: n,
            cap: BRUTE_FORCE_VERTEX_CAP,
        });
    }
    if n == 0 {
        return Ok(0);
    }

    fn extend(graph: &InterferenceGraph, k: usize, colors: &mut Vec<usize>) -> bool {
        let v = colors.len();
        if v == graph.len() {
            return true;
        }
        for color in 0..k {
            let clash = graph
                .neighbors(v)
                .iter()
                .any(|&u| u < v && colors[u] == color);
            if !clash {
                colors.push(color);
                if extend(graph, k, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }

    let k = (1..=n)
        .find(|&k| extend(graph, k, &mut Vec::with_capacity(n)))
        .expect("n colors always suffice");
    Ok(k)
}

/// Counters from one exact solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search states visited.
    pub nodes: u64,
    /// States reached with no non-adjacent pair left (complete graphs).
    pub complete_leaves: u64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub coloring: Coloring,
    pub stats: SearchStats,
}

/// Exact minimum vertex coloring by Zykov merge/connect branching.
#[derive(Debug, Clone, Copy)]
pub struct ZykovSolver {
    pub vertex_cap: usize,
}

impl Default for ZykovSolver {
    fn default() -> Self {
        ZykovSolver {
            vertex_cap: DEFAULT_EXACT_VERTEX_CAP,
        }
    }
}

impl ZykovSolver {
    pub fn with_cap(vertex_cap: usize) -> Self {
        ZykovSolver { vertex_cap }
    }

    pub fn solve(&self, graph: &InterferenceGraph) -> Result<Solution> {
        let n = graph.len();
        if n > self.vertex_cap {
            return Err(Error::SizeLimit {
                vertices: n,
                cap: self.vertex_cap,
            });
        }
        if n == 0 {
            return Ok(Solution {
                coloring: Coloring::canonical(&[], &[]),
                stats: SearchStats::default(),
            });
        }
        let root = State::from_graph(graph);
        let initial = root.dsatur();
        let mut search = Search {
            n,
            best_k: count_colors(&initial),
            best: root.expand(&initial, n),
            stats: SearchStats::default(),
        };
        search.run(root);
        Ok(Solution {
            coloring: Coloring::canonical(graph.vertices(), &search.best),
            stats: search.stats,
        })
    }
}

fn count_colors(labels: &[usize]) -> usize {
    labels
        .iter()
        .copied()
        .filter(|&l| l != usize::MAX)
        .max()
        .map_or(0, |m| m + 1)
}

struct Search {
    n: usize,
    best_k: usize,
    best: Vec<usize>,
    stats: SearchStats,
}

impl Search {
    fn run(&mut self, state: State) {
        self.stats.nodes += 1;
        if state.greedy_clique().len() >= self.best_k {
            return;
        }
        let labels = state.dsatur();
        let k = count_colors(&labels);
        if k < self.best_k {
            self.best_k = k;
            self.best = state.expand(&labels, self.n);
        }
        match state.branch_pair() {
            None => self.stats.complete_leaves += 1,
            Some((u, v)) => {
                self.run(state.merged(u, v));
                self.run(state.connected(u, v));
            }
        }
    }
}

/// Fixed-width bit set over original vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] & (1 << (v % 64)) != 0
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    fn intersection_count(&self, other: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + bit)
            })
        })
    }
}

/// A Zykov search state. Each live vertex stands for a set of original
/// vertices that must share a color; `adj` only ever points at live vertices.
#[derive(Debug, Clone)]
struct State {
    live: Vec<usize>,
    members: Vec<Bits>,
    adj: Vec<Bits>,
}

impl State {
    fn from_graph(graph: &InterferenceGraph) -> Self {
        let n = graph.len();
        let mut members = Vec::with_capacity(n);
        let mut adj = Vec::with_capacity(n);
        for v in 0..n {
            let mut m = Bits::empty(n);
            m.insert(v);
            members.push(m);
            let mut a = Bits::empty(n);
            for &u in graph.neighbors(v) {
                a.insert(u);
            }
            adj.push(a);
        }
        State {
            live: (0..n).collect(),
            members,
            adj,
        }
    }

    /// Contracts `v` into `u` (same color).
    fn merged(&self, u: usize, v: usize) -> State {
        let mut s = self.clone();
        let v_adj = s.adj[v].clone();
        for w in v_adj.iter() {
            s.adj[w].remove(v);
            s.adj[w].insert(u);
        }
        s.adj[u].union_with(&v_adj);
        s.adj[u].remove(u);
        let v_members = s.members[v].clone();
        s.members[u].union_with(&v_members);
        s.live.retain(|&x| x != v);
        s
    }

    /// Adds the edge `uv` (different colors).
    fn connected(&self, u: usize, v: usize) -> State {
        let mut s = self.clone();
        s.adj[u].insert(v);
        s.adj[v].insert(u);
        s
    }

    /// Non-adjacent live pair with the most common neighbours; ties go to the
    /// lexicographically first pair in vertex order.
    fn branch_pair(&self) -> Option<(usize, usize)> {
        let mut best: Option<(u32, usize, usize)> = None;
        for (k, &u) in self.live.iter().enumerate() {
            for &v in &self.live[k + 1..] {
                if self.adj[u].contains(v) {
                    continue;
                }
                let common = self.adj[u].intersection_count(&self.adj[v]);
                if best.is_none_or(|(c, _, _)| common > c) {
                    best = Some((common, u, v));
                }
            }
        }
        best.map(|(_, u, v)| (u, v))
    }

    /// Greedy clique: from each start vertex, repeatedly add the candidate
    /// with the most neighbours among the remaining candidates.
    fn greedy_clique(&self) -> Vec<usize> {
        let mut best: Vec<usize> = Vec::new();
        for &start in &self.live {
            let mut clique = vec![start];
            let mut cand = self.adj[start].clone();
            while !cand.is_empty() {
                let pick = cand
                    .iter()
                    .max_by_key(|&w| (self.adj[w].intersection_count(&cand), std::cmp::Reverse(w)))
                    .expect("candidate set is non-empty");
                clique.push(pick);
                cand.intersect_with(&self.adj[pick]);
            }
            if clique.len() > best.len() {
                best = clique;
            }
        }
        best.sort_unstable();
        best
    }

    /// DSATUR over live vertices; returns a label per original index of the
    /// live vertex (`usize::MAX` for dead slots).
    fn dsatur(&self) -> Vec<usize> {
        let slots = self.adj.len();
        let mut label = vec![usize::MAX; slots];
        let mut uncolored: Vec<usize> = self.live.clone();
        while !uncolored.is_empty() {
            let (pos, &v) = uncolored
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| {
                    let mut seen = Bits::empty(slots);
                    for w in self.adj[v].iter() {
                        if label[w] != usize::MAX {
                            seen.insert(label[w]);
                        }
                    }
                    (seen.count(), self.adj[v].count(), std::cmp::Reverse(v))
                })
                .expect("non-empty");
            let mut color = 0;
            while self.adj[v].iter().any(|w| label[w] == color) {
                color += 1;
            }
            label[v] = color;
            uncolored.swap_remove(pos);
            // keep vertex order stable for tie-breaking
            uncolored.sort_unstable();
        }
        label
    }

    /// Maps labels of live vertices back onto original vertices.
    fn expand(&self, labels: &[usize], n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for &r in &self.live {
            for v in self.members[r].iter() {
                out[v] = labels[r];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_interference_graph, lattice_graph};
    use crate::lattice::{
        data_cluster, lattice_metric, Point, CONTROL_REUSE_METRIC, DATA_REUSE_METRIC,
    };

    fn synthetic(n: usize, edges: &[(usize, usize)]) -> InterferenceGraph {
        let vertices = (0..n as i32).map(|k| CellIndex::new(2 * k, 0)).collect();
        InterferenceGraph::from_edges(vertices, edges.iter().copied())
    }

    fn complete(n: usize) -> InterferenceGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        synthetic(n, &edges)
    }

    fn cycle(n: usize) -> InterferenceGraph {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n)).collect();
        synthetic(n, &edges)
    }

    #[test]
    fn complete_graph_needs_n_colors() {
        for n in 1..=6 {
            let g = complete(n);
            let c = chromatic_coloring(&g).unwrap();
            assert_eq!(c.num_colors(), n);
            assert!(verify_coloring(&g, &c).unwrap());
            assert_eq!(brute_force_chromatic(&g).unwrap(), n);
        }
    }

    #[test]
    fn small_named_graphs() {
        assert_eq!(chromatic_coloring(&cycle(6)).unwrap().num_colors(), 2);
        assert_eq!(brute_force_chromatic(&cycle(6)).unwrap(), 2);
        assert_eq!(chromatic_coloring(&cycle(5)).unwrap().num_colors(), 3);
        assert_eq!(brute_force_chromatic(&cycle(7)).unwrap(), 3);
        assert_eq!(
            chromatic_coloring(&synthetic(5, &[])).unwrap().num_colors(),
            1
        );
        assert_eq!(
            chromatic_coloring(&synthetic(0, &[])).unwrap().num_colors(),
            0
        );
        assert_eq!(brute_force_chromatic(&synthetic(0, &[])).unwrap(), 0);
    }

    #[test]
    fn fixture_chromatic_numbers() {
        let l = Lattice::twelve_cell_fixture(1.0);
        let control = lattice_graph(&l, CONTROL_REUSE_METRIC);
        let data = lattice_graph(&l, DATA_REUSE_METRIC);
        let cc = chromatic_coloring(&control).unwrap();
        let dc = chromatic_coloring(&data).unwrap();
        assert_eq!(cc.num_colors(), 4);
        assert_eq!(dc.num_colors(), 3);
        assert!(verify_coloring(&control, &cc).unwrap());
        assert!(verify_coloring(&data, &dc).unwrap());
    }

    #[test]
    fn data_cluster_needs_three() {
        let l = Lattice::new(6, 1.0, Point::default()).unwrap();
        let g =
            build_interference_graph(&l, &data_cluster(CellIndex::new(2, 4)), DATA_REUSE_METRIC)
                .unwrap();
        assert_eq!(chromatic_coloring(&g).unwrap().num_colors(), 3);
        assert_eq!(brute_force_chromatic(&g).unwrap(), 3);
    }

    // Clique number 2, chromatic number 4: bounds alone cannot settle it.
    #[test]
    fn grotzsch_graph_needs_branching() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|a| (a, (a + 1) % 5)).collect();
        for a in 0..5 {
            edges.push((5 + a, (a + 1) % 5));
            edges.push((5 + a, (a + 4) % 5));
            edges.push((5 + a, 10));
        }
        let g = synthetic(11, &edges);
        let s = ZykovSolver::default().solve(&g).unwrap();
        assert_eq!(s.coloring.num_colors(), 4);
        assert!(verify_coloring(&g, &s.coloring).unwrap());
        assert!(s.stats.nodes > 1);
    }

    #[test]
    fn cap_is_enforced() {
        let g = synthetic(5, &[]);
        assert_eq!(
            ZykovSolver::with_cap(4).solve(&g).unwrap_err(),
            Error::SizeLimit {
                vertices: 5,
                cap: 4
            }
        );
        assert!(brute_force_chromatic(&synthetic(11, &[])).is_err());
    }

    #[test]
    fn verify_detects_conflicts_and_gaps() {
        let g = complete(2);
        let bad = Coloring::canonical(g.vertices(), &[0, 0]);
        assert!(!verify_coloring(&g, &bad).unwrap());
        let partial = Coloring::canonical(&g.vertices()[..1], &[0]);
        assert_eq!(
            verify_coloring(&g, &partial).unwrap_err(),
            Error::IncompleteColoring(g.vertices()[1])
        );
    }

    #[test]
    fn canonical_numbering_follows_vertex_order() {
        let vs = [
            CellIndex::new(0, 0),
            CellIndex::new(0, 2),
            CellIndex::new(0, 4),
        ];
        let c = Coloring::canonical(&vs, &[7, 3, 7]);
        assert_eq!(c.num_colors(), 2);
        assert_eq!(c.color_of(vs[0]), Some(0));
        assert_eq!(c.color_of(vs[1]), Some(1));
        assert_eq!(c.classes(), vec![vec![vs[0], vs[2]], vec![vs[1]]]);
    }

    #[test]
    fn pattern_examples() {
        let l = Lattice::new(6, 1.0, Point::default()).unwrap();
        let control = pattern_coloring(&l, ChannelKind::Control);
        let data = pattern_coloring(&l, ChannelKind::Data);
        assert_eq!(control.num_colors(), 4);
        assert_eq!(data.num_colors(), 3);
        let o = CellIndex::ORIGIN;
        assert_eq!(control.color_of(o), control.color_of(CellIndex::new(0, 4)));
        assert_eq!(data.color_of(o), data.color_of(CellIndex::new(2, 0)));
        assert_eq!(data.color_of(o), data.color_of(CellIndex::new(0, 6)));

        let single = Lattice::new(0, 1.0, Point::default()).unwrap();
        assert_eq!(
            pattern_coloring(&single, ChannelKind::Control).num_colors(),
            1
        );
    }

    // Oracle: the closest same-colored pair under each pattern sits exactly
    // at the reuse threshold, found by enumerating every pair.
    #[test]
    fn pattern_min_same_color_metric() {
        let l = Lattice::new(4, 1.0, Point::default()).unwrap();
        for (kind, threshold) in [(ChannelKind::Control, 16), (ChannelKind::Data, 12)] {
            let col = pattern_coloring(&l, kind);
            let cells = l.cells();
            let min = cells
                .iter()
                .enumerate()
                .flat_map(|(k, &a)| cells[k + 1..].iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| col.color_of(a) == col.color_of(b))
                .map(|(a, b)| lattice_metric(a, b))
                .min()
                .unwrap();
            assert_eq!(min, threshold, "{kind}");
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let l = Lattice::new(3, 1.0, Point::default()).unwrap();
        let g = lattice_graph(&l, CONTROL_REUSE_METRIC);
        let a = ZykovSolver::default().solve(&g).unwrap();
        let b = ZykovSolver::default().solve(&g).unwrap();
        assert_eq!(a.coloring, b.coloring);
        assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn clique_bound_holds() {
        let l = Lattice::twelve_cell_fixture(1.0);
        let g = lattice_graph(&l, CONTROL_REUSE_METRIC);
        let clique = greedy_clique(&g);
        for (k, &a) in clique.iter().enumerate() {
            for &b in &clique[k + 1..] {
                assert!(g.has_edge(a, b));
            }
        }
        assert!(clique.len() <= chromatic_coloring(&g).unwrap().num_colors());
    }

    #[test]
    fn greedy_is_proper() {
        let l = Lattice::new(5, 1.0, Point::default()).unwrap();
        let g = lattice_graph(&l, CONTROL_REUSE_METRIC);
        assert!(verify_coloring(&g, &greedy_coloring(&g)).unwrap());
    }
}
