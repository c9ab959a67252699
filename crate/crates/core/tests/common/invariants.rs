use std::collections::BTreeMap;

use ogclab_core::graph::HalfEdgeGraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts pairs (vertex bijection, half-edge bijection) preserving incidence,
/// edges, directions, weights and labels.
pub fn brute_force_automorphisms(g: &HalfEdgeGraph) -> u128 {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut total = 0u128;
    for sigma in permutations(n) {
        let fixed = g.markings().values().all(|&v| sigma[v] == v);
        let weights = (0..n).all(|v| g.weight(v) == g.weight(sigma[v]));
        if !fixed || !weights {
            continue;
        }
        fn count(g: &HalfEdgeGraph, sigma: &[usize], e: usize, used: &mut Vec<bool>) -> u128 {
            if e == g.num_edges() {
                return 1;
            }
            let (a, b) = g.edge(e);
            let mut c = 0;
            for f in 0..g.num_edges() {
                if used[f] {
                    continue;
                }
                let (x, y) = g.edge(f);
                let flips: &[bool] = if g.is_directed() {
                    &[false]
                } else {
                    &[false, true]
                };
                for &flip in flips {
                    let (x, y) = if flip { (y, x) } else { (x, y) };
                    if (sigma[a], sigma[b]) == (x, y) {
                        used[f] = true;
                        c += count(g, sigma, e + 1, used);
                        used[f] = false;
                    }
                }
            }
            c
        }
        total += count(g, &sigma, 0, &mut vec![false; m]);
    }
    total
}

pub fn random_relabel(g: &HalfEdgeGraph, rng: &mut ChaCha8Rng) -> HalfEdgeGraph {
    let mut vp: Vec<usize> = (0..g.num_vertices()).collect();
    let mut ep: Vec<usize> = (0..g.num_edges()).collect();
    vp.shuffle(rng);
    ep.shuffle(rng);
    let flip: Vec<bool> = (0..g.num_edges()).map(|_| rng.gen()).collect();
    g.relabel(&vp, &ep, &flip)
}

/// Directed path from `a` to `b` other than the edges `a -> b` themselves.
pub fn detour(g: &HalfEdgeGraph, a: usize, b: usize) -> bool {
    let mut seen = vec![false; g.num_vertices()];
    let mut stack: Vec<usize> = g
        .edges()
        .filter(|&(x, y)| x == a && y != b)
        .map(|(_, y)| y)
        .collect();
    while let Some(v) = stack.pop() {
        if v == b {
            return true;
        }
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        stack.extend(g.edges().filter(|&(x, _)| x == v).map(|(_, y)| y));
    }
    false
}

/// Brute-force forest counts: acyclic edge subsets with exactly one marking
/// per component, and the same with at least one marking weighted by the
/// number of root choices.
pub fn subset_forest_counts(g: &HalfEdgeGraph) -> (usize, usize) {
    let m = g.num_edges();
    let (mut literal, mut rooted) = (0, 0);
    for mask in 0u32..(1 << m) {
        let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] == x {
                x
            } else {
                let r = find(p, p[x]);
                p[x] = r;
                r
            }
        }
        let mut acyclic = true;
        for e in (0..m).filter(|e| mask >> e & 1 == 1) {
            let (a, b) = g.edge(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                acyclic = false;
                break;
            }
            parent[ra] = rb;
        }
        if !acyclic {
            continue;
        }
        let mut marks: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..g.num_vertices() {
            let r = find(&mut parent, v);
            *marks.entry(r).or_default() += g.marking_count(v);
        }
        if marks.values().all(|&k| k == 1) {
            literal += 1;
        }
        if marks.values().all(|&k| k >= 1) {
            rooted += marks.values().product::<usize>();
        }
    }
    (literal, rooted)
}
