//! Half-edge graphs carrying vertex weights, labeled markings and optional
//! edge directions.
//!
//! Edge `k` is made of the half-edges `2k` and `2k + 1`, so the pairing
//! involution is `h ^ 1` and is fixed-point free by construction. When the
//! graph is directed the even half-edge is the source end of its edge.
//! Markings are labeled hairs: they count toward valence and, in a directed
//! graph, toward the out-degree of the vertex carrying them.

mod canon;
mod json;
mod orientation;
mod stability;

pub use canon::{Automorphism, CanonKey, CanonicalForm};
pub use json::{GraphJson, JsonEdge, JsonVertex};
pub use orientation::{orientation_sign, permutation_sign, Orientation, OrientationKind};
pub use stability::{StabilityFlavor, StabilityProfile};

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

/// Marking label, an element of the finite set `S`.
pub type Label = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("operation requires a directed graph")]
    Undirected,
    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("edge {0} is not a loop")]
    NotLoop(usize),
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("directed loop at vertex {0}")]
    DirectedLoop(usize),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdgeGraph {
    weights: Vec<u32>,
    /// Vertex of every half-edge.
    ends: Vec<usize>,
    directed: bool,
    markings: BTreeMap<Label, usize>,
}

/// Result of contracting a non-loop edge, with the induced maps on vertices
/// and edges. The merged vertex is always the last vertex of the result and
/// the remaining vertices and edges keep their relative order.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: HalfEdgeGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Option<usize>>,
}

impl HalfEdgeGraph {
    /// Builds a graph from an edge list. For directed graphs every pair is
    /// `(source, target)`.
    pub fn new(
        weights: Vec<u32>,
        edges: &[(usize, usize)],
        directed: bool,
        markings: BTreeMap<Label, usize>,
    ) -> Result<Self, GraphError> {
        let n = weights.len();
        let mut ends = Vec::with_capacity(2 * edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::NoSuchVertex(v));
                }
            }
            if directed && a == b {
                return Err(GraphError::DirectedLoop(a));
            }
            ends.push(a);
            ends.push(b);
        }
        for (&label, &v) in &markings {
            if v >= n {
                return Err(GraphError::Invalid(format!(
                    "marking {label} points at missing vertex {v}"
                )));
            }
        }
        Ok(HalfEdgeGraph {
            weights,
            ends,
            directed,
            markings,
        })
    }

    /// Weight-zero undirected graph with markings given as `(label, vertex)`.
    pub fn undirected(
        num_vertices: usize,
        edges: &[(usize, usize)],
        markings: &[(Label, usize)],
    ) -> Result<Self, GraphError> {
        Self::new(
            vec![0; num_vertices],
            edges,
            false,
            markings.iter().copied().collect(),
        )
    }

    /// Weight-zero directed graph with markings given as `(label, vertex)`.
    pub fn directed(
        num_vertices: usize,
        edges: &[(usize, usize)],
        markings: &[(Label, usize)],
    ) -> Result<Self, GraphError> {
        Self::new(
            vec![0; num_vertices],
            edges,
            true,
            markings.iter().copied().collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len() / 2
    }

    pub fn num_half_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn markings(&self) -> &BTreeMap<Label, usize> {
        &self.markings
    }

    pub fn half_vertex(&self, h: usize) -> usize {
        self.ends[h]
    }

    /// The pairing involution on half-edges.
    pub fn pair(h: usize) -> usize {
        h ^ 1
    }

    /// Endpoints of edge `e`; `(source, target)` for directed graphs.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        (self.ends[2 * e], self.ends[2 * e + 1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ends.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.edge(e);
        a == b
    }

    /// Other edges joining the same pair of endpoints as `e`, in any direction.
    pub fn parallel_partners(&self, e: usize) -> Vec<usize> {
        let key = unordered(self.edge(e));
        (0..self.num_edges())
            .filter(|&f| f != e && unordered(self.edge(f)) == key)
            .collect()
    }

    pub fn labels_at(&self, v: usize) -> Vec<Label> {
        self.markings
            .iter()
            .filter(|&(_, &w)| w == v)
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn marking_count(&self, v: usize) -> usize {
        self.markings.values().filter(|&&w| w == v).count()
    }

    /// Number of edge half-edges at `v` (a loop contributes two).
    pub fn edge_valence(&self, v: usize) -> usize {
        self.ends.iter().filter(|&&w| w == v).count()
    }

    /// Valence counting marking hairs.
    pub fn valence(&self, v: usize) -> usize {
        self.edge_valence(v) + self.marking_count(v)
    }

    /// Incoming half-edges at `v`; zero for undirected graphs.
    pub fn in_degree(&self, v: usize) -> usize {
        if !self.directed {
            return 0;
        }
        self.ends
            .iter()
            .skip(1)
            .step_by(2)
            .filter(|&&w| w == v)
            .count()
    }

    /// Outgoing half-edges at `v` plus the markings it carries. Undirected
    /// edges count toward neither direction.
    pub fn out_degree(&self, v: usize) -> usize {
        let hairs = self.marking_count(v);
        if !self.directed {
            return hairs;
        }
        hairs + self.ends.iter().step_by(2).filter(|&&w| w == v).count()
    }

    /// Vertex adjacency lists (each edge listed at both endpoints, loops twice).
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (e, (a, b)) in self.edges().enumerate() {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// First Betti number `|E| - |V| + 1` of a connected graph.
    pub fn first_betti(&self) -> Result<usize, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.num_edges() + 1 - self.num_vertices())
    }

    /// `b1(G) + sum of vertex weights`.
    pub fn genus(&self) -> Result<u32, GraphError> {
        let b1 = self.first_betti()? as u32;
        Ok(b1 + self.weights.iter().sum::<u32>())
    }

    /// True iff the directed graph has no directed cycle (Kahn's algorithm).
    pub fn is_acyclic(&self) -> Result<bool, GraphError> {
        if !self.directed {
            return Err(GraphError::Undirected);
        }
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in self.edges() {
            if a == b {
                return Ok(false);
            }
            indeg[b] += 1;
            out[a].push(b);
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        Ok(removed == n)
    }

    pub fn is_stable(&self, profile: &StabilityProfile) -> bool {
        profile.accepts(self)
    }

    /// True iff every vertex has weight zero.
    pub fn is_weight_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    /// Contracts a non-loop edge. An edge with `l` parallel partners is
    /// removed together with them and the merged vertex gets weight
    /// `w + w' + l`; otherwise the weight is `w + w'`.
    pub fn contract_edge(&self, e: usize) -> Result<HalfEdgeGraph, GraphError> {
        self.contract_edge_mapped(e).map(|c| c.graph)
    }

    /// [`contract_edge`](Self::contract_edge) together with the vertex and
    /// edge correspondences.
    pub fn contract_edge_mapped(&self, e: usize) -> Result<Contraction, GraphError> {
        if e >= self.num_edges() {
            return Err(GraphError::NoSuchEdge(e));
        }
        let (a, b) = self.edge(e);
        if a == b {
            return Err(GraphError::LoopEdge(e));
        }
        let n = self.num_vertices();
        let key = unordered((a, b));
        let mut vertex_map = vec![0; n];
        let mut next = 0;
        for (v, slot) in vertex_map.iter_mut().enumerate() {
            if v != a && v != b {
                *slot = next;
                next += 1;
            }
        }
        let merged = next;
        vertex_map[a] = merged;
        vertex_map[b] = merged;

        let mut weights: Vec<u32> = (0..n)
            .filter(|&v| v != a && v != b)
            .map(|v| self.weights[v])
            .collect();
        let mut removed = 0u32;
        let mut edges = Vec::with_capacity(self.num_edges());
        let mut edge_map = vec![None; self.num_edges()];
        for (f, (x, y)) in self.edges().enumerate() {
            if unordered((x, y)) == key {
                removed += 1;
                continue;
            }
            edge_map[f] = Some(edges.len());
            edges.push((vertex_map[x], vertex_map[y]));
        }
        weights.push(self.weights[a] + self.weights[b] + removed - 1);
        let markings = self
            .markings
            .iter()
            .map(|(&l, &v)| (l, vertex_map[v]))
            .collect();
        let graph = HalfEdgeGraph::new(weights, &edges, self.directed, markings)?;
        Ok(Contraction {
            graph,
            vertex_map,
            edge_map,
        })
    }

    /// Contracts only the non-loop edge `e`, the ordinary tropical
    /// contraction: parallel partners of `e` become loops at the merged
    /// vertex, whose weight is `w + w'`. Vertex and edge order follow
    /// [`contract_edge_mapped`](Self::contract_edge_mapped).
    pub fn contract_single_edge_mapped(&self, e: usize) -> Result<Contraction, GraphError> {
        if e >= self.num_edges() {
            return Err(GraphError::NoSuchEdge(e));
        }
        let (a, b) = self.edge(e);
        if a == b {
            return Err(GraphError::LoopEdge(e));
        }
        let n = self.num_vertices();
        let mut vertex_map = vec![0; n];
        let mut weights = Vec::with_capacity(n - 1);
        for v in 0..n {
            if v != a && v != b {
                vertex_map[v] = weights.len();
                weights.push(self.weights[v]);
            }
        }
        vertex_map[a] = weights.len();
        vertex_map[b] = weights.len();
        weights.push(self.weights[a] + self.weights[b]);
        let mut edges = Vec::with_capacity(self.num_edges() - 1);
        let mut edge_map = vec![None; self.num_edges()];
        for (f, (x, y)) in self.edges().enumerate() {
            if f != e {
                edge_map[f] = Some(edges.len());
                edges.push((vertex_map[x], vertex_map[y]));
            }
        }
        let markings = self
            .markings
            .iter()
            .map(|(&l, &v)| (l, vertex_map[v]))
            .collect();
        // a directed e with parallel partners yields DirectedLoop here
        let graph = HalfEdgeGraph::new(weights, &edges, self.directed, markings)?;
        Ok(Contraction {
            graph,
            vertex_map,
            edge_map,
        })
    }

    /// Removes a loop and raises the weight of its vertex by one.
    pub fn contract_loop(&self, e: usize) -> Result<HalfEdgeGraph, GraphError> {
        if e >= self.num_edges() {
            return Err(GraphError::NoSuchEdge(e));
        }
        let (a, b) = self.edge(e);
        if a != b {
            return Err(GraphError::NotLoop(e));
        }
        let mut weights = self.weights.clone();
        weights[a] += 1;
        let edges: Vec<_> = self
            .edges()
            .enumerate()
            .filter(|&(f, _)| f != e)
            .map(|(_, p)| p)
            .collect();
        HalfEdgeGraph::new(weights, &edges, self.directed, self.markings.clone())
    }

    /// Isomorphic copy: old vertex `v` becomes `vertex_perm[v]`, old edge `e`
    /// becomes `edge_perm[e]`, and undirected edges with `flip[e]` set swap
    /// their half-edges.
    pub fn relabel(
        &self,
        vertex_perm: &[usize],
        edge_perm: &[usize],
        flip: &[bool],
    ) -> HalfEdgeGraph {
        let mut weights = vec![0; self.num_vertices()];
        for (v, &w) in self.weights.iter().enumerate() {
            weights[vertex_perm[v]] = w;
        }
        let mut ends = vec![0; self.ends.len()];
        for (e, (a, b)) in self.edges().enumerate() {
            let (a, b) = (vertex_perm[a], vertex_perm[b]);
            let (a, b) = if !self.directed && flip.get(e).copied().unwrap_or(false) {
                (b, a)
            } else {
                (a, b)
            };
            let f = edge_perm[e];
            ends[2 * f] = a;
            ends[2 * f + 1] = b;
        }
        let markings = self
            .markings
            .iter()
            .map(|(&l, &v)| (l, vertex_perm[v]))
            .collect();
        HalfEdgeGraph {
            weights,
            ends,
            directed: self.directed,
            markings,
        }
    }

    /// Canonical representative of the isomorphism class together with the
    /// relabeling into it and automorphism data.
    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self)
    }

    /// Checks the structural invariants required of catalog and file input.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.num_vertices() == 0 {
            return Err(GraphError::Invalid("graph has no vertices".into()));
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if self.directed {
            if let Some(e) = (0..self.num_edges()).find(|&e| self.is_loop(e)) {
                return Err(GraphError::DirectedLoop(self.edge(e).0));
            }
        }
        Ok(())
    }
}

fn unordered((a, b): (usize, usize)) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(marked: bool) -> HalfEdgeGraph {
        let marks: &[(Label, usize)] = if marked { &[(1, 0)] } else { &[] };
        HalfEdgeGraph::undirected(2, &[(0, 1), (0, 1), (0, 1)], marks).unwrap()
    }

    #[test]
    fn genus_examples() {
        let g = HalfEdgeGraph::new(vec![3], &[], false, [(1, 0)].into()).unwrap();
        assert_eq!(g.genus().unwrap(), 3);
        let g = HalfEdgeGraph::undirected(1, &[(0, 0)], &[]).unwrap();
        assert_eq!(g.genus().unwrap(), 1);
        assert_eq!(theta(false).genus().unwrap(), 2);
    }

    #[test]
    fn genus_rejects_disconnected() {
        let g = HalfEdgeGraph::undirected(2, &[], &[(1, 0), (2, 1)]).unwrap();
        assert_eq!(g.genus(), Err(GraphError::Disconnected));
    }

    #[test]
    fn acyclicity_examples() {
        let g = HalfEdgeGraph::directed(2, &[(0, 1)], &[]).unwrap();
        assert!(g.is_acyclic().unwrap());
        let g = HalfEdgeGraph::directed(2, &[(0, 1), (1, 0)], &[]).unwrap();
        assert!(!g.is_acyclic().unwrap());
        let oriented_loop = HalfEdgeGraph::directed(2, &[(0, 1), (0, 1)], &[(1, 1)]).unwrap();
        assert!(oriented_loop.is_acyclic().unwrap());
        assert_eq!(theta(true).is_acyclic(), Err(GraphError::Undirected));
    }

    #[test]
    fn directed_loops_are_rejected() {
        assert_eq!(
            HalfEdgeGraph::directed(1, &[(0, 0)], &[]),
            Err(GraphError::DirectedLoop(0))
        );
    }

    #[test]
    fn parallel_contraction_raises_weight() {
        let g = HalfEdgeGraph::new(
            vec![1, 2],
            &[(0, 1), (0, 1), (0, 1)],
            false,
            BTreeMap::new(),
        )
        .unwrap();
        let c = g.contract_edge(1).unwrap();
        assert_eq!(c.weights(), &[5]);
        assert_eq!(c.num_edges(), 0);
        assert_eq!(c.genus().unwrap(), g.genus().unwrap());
    }

    #[test]
    fn simple_contraction_merges() {
        let g = HalfEdgeGraph::undirected(2, &[(0, 1)], &[(1, 0), (2, 1)]).unwrap();
        let c = g.contract_edge_mapped(0).unwrap();
        assert_eq!(c.graph.weights(), &[0]);
        assert_eq!(c.graph.labels_at(0), vec![1, 2]);
        assert_eq!(c.edge_map, vec![None]);
        assert_eq!(g.contract_edge(0).unwrap().genus(), g.genus());
    }

    #[test]
    fn loop_contraction() {
        let g = HalfEdgeGraph::undirected(1, &[(0, 0)], &[(1, 0)]).unwrap();
        assert_eq!(g.contract_edge(0), Err(GraphError::LoopEdge(0)));
        let c = g.contract_loop(0).unwrap();
        assert_eq!(c.weights(), &[1]);
        assert_eq!(c.num_edges(), 0);
        assert_eq!(c.genus().unwrap(), 1);
        let g = HalfEdgeGraph::new(vec![2], &[(0, 0)], false, BTreeMap::new()).unwrap();
        assert_eq!(g.contract_loop(0).unwrap().weights(), &[3]);
        assert_eq!(theta(false).contract_loop(0), Err(GraphError::NotLoop(0)));
    }

    #[test]
    fn degrees_count_hairs_as_outgoing() {
        let g = HalfEdgeGraph::directed(2, &[(0, 1), (0, 1)], &[(1, 1)]).unwrap();
        assert_eq!(g.out_degree(0), 2);
        assert_eq!(g.in_degree(1), 2);
        assert_eq!(g.out_degree(1), 1);
        assert_eq!(g.valence(1), 3);
    }
}
