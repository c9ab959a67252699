use crate::graph::{HalfEdgeGraph, Label};

/// A forest of a marked graph together with the marking each vertex flows
/// towards.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningForest {
    /// Forest edges, increasing.
    pub edges: Vec<usize>,
    /// `root[v]` is the marking label of the component containing `v`.
    pub root: Vec<Label>,
}

impl SpanningForest {
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Number of connected components.
    pub fn components(&self, g: &HalfEdgeGraph) -> usize {
        g.num_vertices() - self.edges.len()
    }
}

/// Acyclic subsets of the non-loop edges, as component labelings of the
/// vertices, in order of increasing bitmask.
fn acyclic_subsets(g: &HalfEdgeGraph) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> + '_ {
    let candidates: Vec<usize> = (0..g.num_edges()).filter(|&e| !g.is_loop(e)).collect();
    assert!(
        candidates.len() < 64,
        "too many edges for forest enumeration"
    );
    (0u64..1 << candidates.len()).filter_map(move |mask| {
        let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut edges = Vec::new();
        for (i, &e) in candidates.iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            let (a, b) = g.edge(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return None;
            }
            parent[ra] = rb;
            edges.push(e);
        }
        let comp = (0..g.num_vertices())
            .map(|v| find(&mut parent, v))
            .collect();
        Some((edges, comp))
    })
}

/// All edge subsets that are acyclic, cover the vertices and carry exactly
/// one marking per component. Loops never belong to a forest.
pub fn spanning_forests(g: &HalfEdgeGraph) -> Vec<SpanningForest> {
    let n = g.num_vertices();
    acyclic_subsets(g)
        .filter_map(|(edges, comp)| {
            let mut label: Vec<Option<Label>> = vec![None; n];
            let mut count = vec![0usize; n];
            for (&l, &v) in g.markings() {
                count[comp[v]] += 1;
                label[comp[v]] = Some(l);
            }
            if (0..n).any(|v| comp[v] == v && count[v] != 1) {
                return None;
            }
            let root = (0..n).map(|v| label[comp[v]].expect("counted")).collect();
            Some(SpanningForest { edges, root })
        })
        .collect()
}

/// Forests in which every component carries at least one marking, each
/// paired with a choice of one marking per component as its root. These
/// index the oriented graphs lying over `g` when markings act as legs.
pub fn rooted_forests(g: &HalfEdgeGraph) -> Vec<SpanningForest> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    for (edges, comp) in acyclic_subsets(g) {
        let mut labels: Vec<Vec<Label>> = vec![Vec::new(); n];
        for (&l, &v) in g.markings() {
            labels[comp[v]].push(l);
        }
        let reps: Vec<usize> = (0..n).filter(|&v| comp[v] == v).collect();
        if reps.iter().any(|&r| labels[r].is_empty()) {
            continue;
        }
        // mixed-radix choice of one label per component
        let mut choice = vec![0usize; reps.len()];
        loop {
            let mut pick = vec![0; n];
            for (&r, &c) in reps.iter().zip(&choice) {
                pick[r] = labels[r][c];
            }
            out.push(SpanningForest {
                edges: edges.clone(),
                root: (0..n).map(|v| pick[comp[v]]).collect(),
            });
            let mut i = 0;
            while i < reps.len() && choice[i] + 1 == labels[reps[i]].len() {
                choice[i] = 0;
                i += 1;
            }
            if i == reps.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    out
}
