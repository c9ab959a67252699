//! Naive reference pipeline: graphs as vertex lists with explicit edge
//! lists, generation by exhaustive edge multisets, isomorphism by bijection
//! search, and dense rational elimination. Shares no code with the engine
//! beyond reading its graphs.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use ogclab_core::HalfEdgeGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    /// `(a, b)`; for directed graphs `a` is the source.
    pub edges: Vec<(usize, usize)>,
    pub directed: bool,
    /// Vertex of label `i + 1`.
    pub marks: Vec<usize>,
}

impl Graph {
    pub fn from_engine(g: &HalfEdgeGraph) -> Self {
        let marks: Vec<usize> = g.markings().values().copied().collect();
        let labels: Vec<u32> = g.markings().keys().copied().collect();
        assert_eq!(labels, (1..=labels.len() as u32).collect::<Vec<_>>());
        Graph {
            vertices: g.num_vertices(),
            edges: g.edges().collect(),
            directed: g.is_directed(),
            marks,
        }
    }

    fn mult(&self) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0; self.vertices]; self.vertices];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if !self.directed && a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    fn in_out(&self) -> (Vec<usize>, Vec<usize>) {
        let mut i = vec![0; self.vertices];
        let mut o = vec![0; self.vertices];
        for &(a, b) in &self.edges {
            o[a] += 1;
            i[b] += 1;
        }
        (i, o)
    }

    fn mark_count(&self) -> Vec<usize> {
        let mut c = vec![0; self.vertices];
        for &v in &self.marks {
            c[v] += 1;
        }
        c
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut comps = self.vertices;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps == 1
    }

    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertices as i64 + 1
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn
        let (mut indeg, _) = self.in_out();
        let mut stack: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        seen == self.vertices
    }

    /// Per-vertex data an isomorphism must preserve, refined once by the
    /// neighbours.
    fn vertex_invariants(&self) -> Vec<Vec<u64>> {
        let (mut i, mut o) = self.in_out();
        if !self.directed {
            for v in 0..self.vertices {
                i[v] += o[v];
                o[v] = i[v];
            }
        }
        let m = self.mult();
        let base: Vec<Vec<u64>> = (0..self.vertices)
            .map(|v| {
                let mut x = vec![i[v] as u64, o[v] as u64, m[v][v] as u64];
                let mut labels: Vec<u64> = self
                    .marks
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w == v)
                    .map(|(l, _)| l as u64 + 1)
                    .collect();
                x.push(labels.len() as u64);
                x.append(&mut labels);
                x
            })
            .collect();
        (0..self.vertices)
            .map(|v| {
                let mut nbrs: Vec<Vec<u64>> = (0..self.vertices)
                    .filter(|&u| u != v && (m[v][u] > 0 || m[u][v] > 0))
                    .map(|u| {
                        let mut x = vec![m[v][u] as u64, m[u][v] as u64];
                        x.extend(&base[u]);
                        x
                    })
                    .collect();
                nbrs.sort();
                let mut x = base[v].clone();
                x.push(u64::MAX);
                for n in nbrs {
                    x.extend(n);
                    x.push(u64::MAX - 1);
                }
                x
            })
            .collect()
    }

    pub fn bucket(&self) -> Vec<Vec<u64>> {
        let mut inv = self.vertex_invariants();
        inv.sort();
        inv.push(vec![self.edges.len() as u64, self.directed as u64]);
        inv
    }
}

/// Calls `f` on every vertex bijection `a -> b` preserving markings and
/// edge multiplicities, until it returns `true`.
pub fn for_each_isomorphism(a: &Graph, b: &Graph, mut f: impl FnMut(&[usize]) -> bool) {
    if a.vertices != b.vertices
        || a.edges.len() != b.edges.len()
        || a.directed != b.directed
        || a.marks.len() != b.marks.len()
    {
        return;
    }
    let (ia, ib) = (a.vertex_invariants(), b.vertex_invariants());
    let (ma, mb) = (a.mult(), b.mult());
    let n = a.vertices;
    // breadth-first order keeps assigned vertices adjacent
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        order.push(s);
        let mut k = order.len() - 1;
        while k < order.len() {
            let v = order[k];
            for u in 0..n {
                if !placed[u] && (ma[v][u] > 0 || ma[u][v] > 0) {
                    placed[u] = true;
                    order.push(u);
                }
            }
            k += 1;
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        depth: usize,
        order: &[usize],
        ia: &[Vec<u64>],
        ib: &[Vec<u64>],
        ma: &[Vec<u32>],
        mb: &[Vec<u32>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return f(map);
        }
        let v = order[depth];
        for w in 0..ib.len() {
            if used[w] || ia[v] != ib[w] {
                continue;
            }
            let ok = order[..depth]
                .iter()
                .all(|&u| ma[u][v] == mb[map[u]][w] && ma[v][u] == mb[w][map[u]])
                && ma[v][v] == mb[w][w];
            if !ok {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(depth + 1, order, ia, ib, ma, mb, map, used, f) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    go(0, &order, &ia, &ib, &ma, &mb, &mut map, &mut used, &mut f);
}

pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    let mut out = None;
    for_each_isomorphism(a, b, |m| {
        out = Some(m.to_vec());
        true
    });
    out
}

pub fn parity(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Sign by which a vertex bijection `a -> b` carries the orientation of `a`
/// to that of `b`: on edges for undirected graphs (which must have no
/// repeated edges), on vertices for directed ones.
pub fn orientation_sign(a: &Graph, b: &Graph, map: &[usize]) -> i64 {
    if a.directed {
        return parity(map);
    }
    let norm = |(x, y): (usize, usize)| (x.min(y), x.max(y));
    let position: HashMap<(usize, usize), usize> = b
        .edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (norm(e), i))
        .collect();
    assert_eq!(position.len(), b.edges.len(), "repeated edge");
    let perm: Vec<usize> = a
        .edges
        .iter()
        .map(|&(x, y)| position[&norm((map[x], map[y]))])
        .collect();
    parity(&perm)
}

/// Vanishes when some automorphism reverses the orientation.
pub fn is_zero(g: &Graph) -> bool {
    if !g.directed && g.mult().iter().flatten().any(|&m| m > 1) {
        return true;
    }
    let mut odd = false;
    for_each_isomorphism(g, g, |m| {
        odd = orientation_sign(g, g, m) < 0;
        odd
    });
    odd
}

/// Isomorphism classes with a bucket index for lookups.
#[derive(Default)]
pub struct Classes {
    pub reps: Vec<Graph>,
    buckets: HashMap<Vec<Vec<u64>>, Vec<usize>>,
}

impl Classes {
    pub fn find(&self, g: &Graph) -> Option<(usize, Vec<usize>)> {
        let list = self.buckets.get(&g.bucket())?;
        list.iter()
            .find_map(|&i| find_isomorphism(g, &self.reps[i]).map(|m| (i, m)))
    }

    pub fn insert(&mut self, g: Graph) {
        let key = g.bucket();
        let list = self.buckets.entry(key).or_default();
        if list
            .iter()
            .any(|&i| find_isomorphism(&g, &self.reps[i]).is_some())
        {
            return;
        }
        list.push(self.reps.len());
        self.reps.push(g);
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }
}

pub fn multisets(slots: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn go(start: usize, slots: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for s in start..slots {
            cur.push(s);
            go(s, slots, k, cur, f);
            cur.pop();
        }
    }
    go(0, slots, k, &mut Vec::new(), &mut f);
}

/// All assignments of `n` labels to vertices giving vertex `v` at least
/// `need[v]` labels.
fn label_assignments(need: &[usize], n: usize, mut f: impl FnMut(&[usize])) {
    fn go(
        i: usize,
        n: usize,
        need: &mut [usize],
        outstanding: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if n - i < outstanding {
            return;
        }
        if i == n {
            f(cur);
            return;
        }
        for v in 0..need.len() {
            let helped = need[v] > 0;
            if helped {
                need[v] -= 1;
            }
            cur.push(v);
            go(i + 1, n, need, outstanding - helped as usize, cur, f);
            cur.pop();
            if helped {
                need[v] += 1;
            }
        }
    }
    let mut need = need.to_vec();
    let outstanding = need.iter().sum();
    go(0, n, &mut need, outstanding, &mut Vec::new(), &mut f);
}

pub fn marked_stable(g: &Graph) -> bool {
    let m = g.mark_count();
    let mut val = m;
    for &(a, b) in &g.edges {
        val[a] += 1;
        val[b] += 1;
    }
    val.iter().all(|&v| v >= 3)
}

pub fn oriented_vertex_ok(inn: usize, out: usize, marks: usize) -> bool {
    let val = inn + out + marks;
    let up = out + marks;
    val >= 2 && up >= 1 && !(val == 2 && inn == 1)
}

pub fn oriented_stable(g: &Graph) -> bool {
    let (i, o) = g.in_out();
    let m = g.mark_count();
    (0..g.vertices).all(|v| oriented_vertex_ok(i[v], o[v], m[v]))
}

/// Marked classes by edge count.
pub fn marked_classes(genus: usize, n: usize) -> Vec<Classes> {
    let max_edges = (3 * genus + n).saturating_sub(3);
    let mut out: Vec<Classes> = (0..=max_edges).map(|_| Classes::default()).collect();
    for e in genus..=max_edges {
        let v = e + 1 - genus;
        let slots: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        multisets(slots.len(), e, |pick| {
            let edges: Vec<(usize, usize)> = pick.iter().map(|&s| slots[s]).collect();
            let shape = Graph {
                vertices: v,
                edges,
                directed: false,
                marks: Vec::new(),
            };
            if !shape.is_connected() {
                return;
            }
            let mut val = vec![0usize; v];
            for &(a, b) in &shape.edges {
                val[a] += 1;
                val[b] += 1;
            }
            let need: Vec<usize> = val.iter().map(|&x| 3usize.saturating_sub(x)).collect();
            label_assignments(&need, n, |marks| {
                let g = Graph {
                    marks: marks.to_vec(),
                    ..shape.clone()
                };
                if marked_stable(&g) {
                    out[e].insert(g);
                }
            });
        });
    }
    out
}

/// Oriented classes by vertex count. Vertices are numbered in a topological
/// order, so every edge goes from a smaller to a larger index.
pub fn oriented_classes(genus: usize, n: usize) -> Vec<Classes> {
    let max_vertices = (3 * genus + 2 * n).saturating_sub(3).max(1);
    let mut out: Vec<Classes> = (0..=max_vertices).map(|_| Classes::default()).collect();
    for v in 1..=max_vertices {
        let e = v - 1 + genus;
        let slots: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .collect();
        if slots.is_empty() && e > 0 {
            continue;
        }
        multisets(slots.len(), e, |pick| {
            let edges: Vec<(usize, usize)> = pick.iter().map(|&s| slots[s]).collect();
            let shape = Graph {
                vertices: v,
                edges,
                directed: true,
                marks: Vec::new(),
            };
            if !shape.is_connected() {
                return;
            }
            let (i, o) = shape.in_out();
            let need: Vec<usize> = (0..v)
                .map(|x| {
                    (0..=3)
                        .find(|&m| oriented_vertex_ok(i[x], o[x], m))
                        .unwrap()
                })
                .collect();
            label_assignments(&need, n, |marks| {
                let g = Graph {
                    marks: marks.to_vec(),
                    ..shape.clone()
                };
                if oriented_stable(&g) {
                    out[v].insert(g);
                }
            });
        });
    }
    out
}

/// `(target, sign)` terms of the boundary of a marked graph: contract each
/// non-loop edge `i` with sign `(-1)^i`, merging into the smaller endpoint.
pub fn marked_boundary(g: &Graph) -> Vec<(Graph, i64)> {
    let mut out = Vec::new();
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        if a == b {
            continue;
        }
        let (keep, gone) = (a.min(b), a.max(b));
        let relabel = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges = g
            .edges
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &(x, y))| (relabel(x), relabel(y)))
            .collect();
        let t = Graph {
            vertices: g.vertices - 1,
            edges,
            directed: false,
            marks: g.marks.iter().map(|&x| relabel(x)).collect(),
        };
        out.push((t, if i % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// Boundary of an oriented graph: contract every edge without a parallel
/// partner whose contraction stays acyclic and stable. The merged vertex
/// goes last, with the sign of listing the other vertices in order followed
/// by the tail and the head.
pub fn oriented_boundary(g: &Graph) -> Vec<(Graph, i64)> {
    let mut out = Vec::new();
    for &(a, b) in &g.edges {
        if g.edges.iter().filter(|&&e| e == (a, b)).count() > 1 {
            continue;
        }
        let rest: Vec<usize> = (0..g.vertices).filter(|&x| x != a && x != b).collect();
        let mut order = rest.clone();
        order.extend([a, b]);
        let sign = parity(&order);
        let merged = rest.len();
        let relabel = |x: usize| {
            if x == a || x == b {
                merged
            } else {
                rest.iter().position(|&r| r == x).unwrap()
            }
        };
        let mut removed = false;
        let edges = g
            .edges
            .iter()
            .filter(|&&e| {
                if e == (a, b) && !removed {
                    removed = true;
                    return false;
                }
                true
            })
            .map(|&(x, y)| (relabel(x), relabel(y)))
            .collect();
        let t = Graph {
            vertices: g.vertices - 1,
            edges,
            directed: true,
            marks: g.marks.iter().map(|&x| relabel(x)).collect(),
        };
        if t.is_acyclic() && oriented_stable(&t) {
            out.push((t, sign));
        }
    }
    out
}

/// Dense boundary matrix `degree -> degree - 1` on nonzero classes, with the
/// nonzero class lists of both degrees.
pub fn boundary_matrix(classes: &[Classes], degree: usize) -> Vec<Vec<i64>> {
    let nonzero = |d: usize| -> Vec<usize> {
        classes
            .get(d)
            .map(|c| (0..c.len()).filter(|&i| !is_zero(&c.reps[i])).collect())
            .unwrap_or_default()
    };
    let cols = nonzero(degree);
    let rows = nonzero(degree.wrapping_sub(1));
    let mut m = vec![vec![0i64; cols.len()]; rows.len()];
    if rows.is_empty() {
        return m;
    }
    let below = &classes[degree - 1];
    for (c, &i) in cols.iter().enumerate() {
        let g = &classes[degree].reps[i];
        let terms = if g.directed {
            oriented_boundary(g)
        } else {
            marked_boundary(g)
        };
        for (t, sign) in terms {
            let (j, map) = below.find(&t).expect("boundary term is a class");
            let rep = &below.reps[j];
            if is_zero(rep) {
                continue;
            }
            let r = rows.iter().position(|&x| x == j).unwrap();
            m[r][c] += sign * orientation_sign(&t, rep, &map);
        }
    }
    m
}

pub fn nonzero_count(c: &Classes) -> usize {
    c.reps.iter().filter(|g| !is_zero(g)).count()
}

/// Rank over the rationals by Gaussian elimination on a dense matrix.
pub fn dense_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = BigRational::one() / &a[rank][c];
        let pivot: Vec<(usize, BigRational)> = (c..cols)
            .filter(|&j| !a[rank][j].is_zero())
            .map(|j| (j, &a[rank][j] * &inv))
            .collect();
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for (j, v) in &pivot {
                let d = &f * v;
                a[r][*j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// `true` when `a` equals `b` or `-b`.
pub fn equal_up_to_sign(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let neg: Vec<Vec<i64>> = b.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    a == b || a == neg.as_slice()
}
