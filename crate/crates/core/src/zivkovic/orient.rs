use std::collections::{BTreeMap, VecDeque};

use crate::enumerate::SpanningForest;
use crate::graph::{HalfEdgeGraph, Label};

use super::ZivkovicError;

/// A marked graph turned into an acyclic graph by a rooted forest: forest
/// edges flow towards the root marking of their component, every other edge
/// becomes a new source with two outgoing edges, and every other marking
/// becomes a new source with one outgoing edge carrying that marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestOrientedGraph {
    pub source: HalfEdgeGraph,
    pub forest: SpanningForest,
    pub graph: HalfEdgeGraph,
    /// Vertex of `graph` matched to each edge of `source`: the tail of a
    /// forest edge, or the new source subdividing a non-forest edge.
    pub edge_cells: Vec<usize>,
    /// Vertex matched to each marking: the root vertex for the root marking
    /// of a component, otherwise the new source carrying it.
    pub leg_cells: BTreeMap<Label, usize>,
    /// Root vertex of each component, ordered by vertex.
    pub roots: Vec<usize>,
}

/// Orients `g` along `forest`. Vertices of `g` keep their indices; new
/// sources follow, first one per non-forest edge in edge order, then one per
/// non-root marking in label order.
pub fn forest_orient(
    g: &HalfEdgeGraph,
    forest: &SpanningForest,
) -> Result<ForestOrientedGraph, ZivkovicError> {
    let n = g.num_vertices();
    let bad = |msg: &str| Err(ZivkovicError::NotAForest(msg.to_string()));
    if g.is_directed() {
        return bad("source graph is directed");
    }
    if forest.root.len() != n {
        return bad("root map does not cover the vertices");
    }
    if forest.edges.windows(2).any(|w| w[0] >= w[1]) {
        return bad("forest edges are not increasing");
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in &forest.edges {
        if e >= g.num_edges() || g.is_loop(e) {
            return bad("forest contains a loop or an unknown edge");
        }
        let (a, b) = g.edge(e);
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    // root vertices, one per component, found by the root marking
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut roots = Vec::new();
    let mut root_labels = Vec::new();
    for (&l, &v) in g.markings() {
        if forest.root[v] != l {
            continue;
        }
        if seen[v] {
            return bad("component has two roots");
        }
        roots.push(v);
        root_labels.push(l);
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if forest.root[y] != l {
                    return bad("root map is not constant on a component");
                }
                if parent_edge[x] == Some(e) {
                    continue;
                }
                if seen[y] {
                    return bad("forest has a cycle");
                }
                seen[y] = true;
                parent_edge[y] = Some(e);
                queue.push_back(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return bad("some component has no root marking");
    }
    roots.sort_unstable();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_cells = vec![0; g.num_edges()];
    let mut next = n;
    for (e, (a, b)) in g.edges().enumerate() {
        if forest.contains(e) {
            // points from child to parent
            let child = if parent_edge[a] == Some(e) { a } else { b };
            let parent = if child == a { b } else { a };
            edges.push((child, parent));
            edge_cells[e] = child;
        } else {
            edges.push((next, a));
            edges.push((next, b));
            edge_cells[e] = next;
            next += 1;
        }
    }
    let mut markings = BTreeMap::new();
    let mut leg_cells = BTreeMap::new();
    for (&l, &v) in g.markings() {
        if root_labels.contains(&l) {
            markings.insert(l, v);
            leg_cells.insert(l, v);
        } else {
            edges.push((next, v));
            markings.insert(l, next);
            leg_cells.insert(l, next);
            next += 1;
        }
    }
    let weights = vec![0; next];
    let graph = HalfEdgeGraph::new(weights, &edges, true, markings)?;
    Ok(ForestOrientedGraph {
        source: g.clone(),
        forest: forest.clone(),
        graph,
        edge_cells,
        leg_cells,
        roots,
    })
}
