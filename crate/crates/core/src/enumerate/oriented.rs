//! Oriented graphs from their cores.
//!
//! In a stable acyclic graph every bivalent vertex is either a source with
//! two edges or a vertex carrying one edge and one marking, whose edge must
//! point away from it. Forgetting the sources of the first kind (replacing
//! each by a single undirected edge) yields an undirected core in which every
//! other vertex is at least trivalent. Conversely every orientation of a core
//! is recovered by choosing which edges to subdivide (loops always are) and
//! orienting the rest without creating a directed cycle or an unmarked sink.

use crate::graph::{CanonKey, HalfEdgeGraph};

struct Group {
    ends: (usize, usize),
    size: usize,
}

pub(super) fn orientations_of_core(core: &HalfEdgeGraph) -> Vec<(CanonKey, HalfEdgeGraph)> {
    let n = core.num_vertices();
    let is_leaf = |v: usize| core.edge_valence(v) == 1 && core.marking_count(v) == 1;

    let mut loops: Vec<usize> = Vec::new();
    let mut forced: Vec<(usize, usize)> = Vec::new();
    let mut classes: Vec<Group> = Vec::new();
    for (a, b) in core.edges() {
        if a == b {
            loops.push(a);
        } else if is_leaf(a) {
            forced.push((a, b));
        } else if is_leaf(b) {
            forced.push((b, a));
        } else {
            let ends = (a.min(b), a.max(b));
            match classes.iter_mut().find(|c| c.ends == ends) {
                Some(c) => c.size += 1,
                None => classes.push(Group { ends, size: 1 }),
            }
        }
    }

    let mut out = Vec::new();
    // number of subdivided edges in each parallel class
    let mut counts = vec![0usize; classes.len()];
    loop {
        let mut sources: Vec<(usize, usize)> = loops.iter().map(|&v| (v, v)).collect();
        let mut free: Vec<(usize, usize, usize)> = Vec::new();
        for (c, &k) in classes.iter().zip(&counts) {
            sources.extend(std::iter::repeat(c.ends).take(k));
            if k < c.size {
                free.push((c.ends.0, c.ends.1, c.size - k));
            }
        }
        orient_free(core, n, &forced, &sources, &free, &mut out);

        // advance the mixed-radix counter
        let mut i = 0;
        while i < counts.len() && counts[i] == classes[i].size {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        counts[i] += 1;
    }
    out
}

fn orient_free(
    core: &HalfEdgeGraph,
    n: usize,
    forced: &[(usize, usize)],
    sources: &[(usize, usize)],
    free: &[(usize, usize, usize)],
    out: &mut Vec<(CanonKey, HalfEdgeGraph)>,
) {
    let total = n + sources.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); total];
    for &(a, b) in forced {
        succ[a].push(b);
    }
    for (i, &(a, b)) in sources.iter().enumerate() {
        succ[n + i].push(a);
        succ[n + i].push(b);
    }
    let mut chosen = Vec::with_capacity(free.len());
    backtrack(core, n, forced, sources, free, &mut succ, &mut chosen, out);
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    core: &HalfEdgeGraph,
    n: usize,
    forced: &[(usize, usize)],
    sources: &[(usize, usize)],
    free: &[(usize, usize, usize)],
    succ: &mut Vec<Vec<usize>>,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<(CanonKey, HalfEdgeGraph)>,
) {
    let i = chosen.len();
    if i == free.len() {
        // every vertex needs an outgoing edge or a marking
        if (0..n).any(|v| succ[v].is_empty() && core.marking_count(v) == 0) {
            return;
        }
        let mut edges: Vec<(usize, usize)> = forced.to_vec();
        for (k, &(a, b)) in sources.iter().enumerate() {
            edges.push((n + k, a));
            edges.push((n + k, b));
        }
        for (&(s, t), &(_, _, mult)) in chosen.iter().zip(free) {
            edges.extend(std::iter::repeat((s, t)).take(mult));
        }
        let mut weights = core.weights().to_vec();
        weights.resize(n + sources.len(), 0);
        let g = HalfEdgeGraph::new(weights, &edges, true, core.markings().clone())
            .expect("orientation is well formed");
        let form = g.canonical_form();
        out.push((form.key, form.graph));
        return;
    }
    let (a, b, _) = free[i];
    for (s, t) in [(a, b), (b, a)] {
        if reaches(succ, t, s) {
            continue;
        }
        succ[s].push(t);
        chosen.push((s, t));
        backtrack(core, n, forced, sources, free, succ, chosen, out);
        chosen.pop();
        succ[s].pop();
    }
}

fn reaches(succ: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        stack.extend(succ[v].iter().copied());
    }
    false
}
