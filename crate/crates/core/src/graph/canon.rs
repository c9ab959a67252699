//! Canonical labeling by individualization and refinement.
//!
//! Vertices are first colored by weight, marking labels and degrees, the
//! coloring is refined to an equitable partition, and the search tree of
//! individualizations is explored exhaustively. Each leaf is a vertex order;
//! the lexicographically smallest encoding of the weighted, marked
//! multiplicity matrix wins. Leaves tying with the winner are exactly the
//! vertex automorphisms.

use std::fmt;

use super::{permutation_sign, HalfEdgeGraph, OrientationKind};

/// Encoding of the canonical representative; equal keys iff isomorphic graphs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey(Box<[u32]>);

impl CanonKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonKey{:?}", &self.0)
    }
}

/// A graph automorphism acting on vertices and half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub vertex_perm: Vec<usize>,
    pub half_perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(g: &HalfEdgeGraph) -> Self {
        Automorphism {
            vertex_perm: (0..g.num_vertices()).collect(),
            half_perm: (0..g.num_half_edges()).collect(),
        }
    }

    pub fn edge_perm(&self) -> Vec<usize> {
        self.half_perm.iter().step_by(2).map(|&h| h / 2).collect()
    }

    /// Sign of the induced permutation on edges or vertices.
    pub fn sign(&self, kind: OrientationKind) -> i8 {
        match kind {
            OrientationKind::EdgeOrder => permutation_sign(&self.edge_perm()),
            OrientationKind::VertexOrder => permutation_sign(&self.vertex_perm),
        }
    }

    /// `self` after `other` (apply `other` first).
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertex_perm: other
                .vertex_perm
                .iter()
                .map(|&v| self.vertex_perm[v])
                .collect(),
            half_perm: other.half_perm.iter().map(|&h| self.half_perm[h]).collect(),
        }
    }

    /// Checks that this is a structure-preserving bijection of `g`.
    pub fn is_automorphism_of(&self, g: &HalfEdgeGraph) -> bool {
        let n = g.num_vertices();
        let m = g.num_half_edges();
        if self.vertex_perm.len() != n || self.half_perm.len() != m {
            return false;
        }
        let mut hit = vec![false; n];
        for &v in &self.vertex_perm {
            if v >= n || std::mem::replace(&mut hit[v], true) {
                return false;
            }
        }
        let mut hit = vec![false; m];
        for &h in &self.half_perm {
            if h >= m || std::mem::replace(&mut hit[h], true) {
                return false;
            }
        }
        (0..n).all(|v| g.weight(v) == g.weight(self.vertex_perm[v]))
            && (0..m).all(|h| {
                let img = self.half_perm[h];
                self.vertex_perm[g.half_vertex(h)] == g.half_vertex(img)
                    && self.half_perm[HalfEdgeGraph::pair(h)] == HalfEdgeGraph::pair(img)
                    && (!g.is_directed() || h % 2 == img % 2)
            })
            // labeled markings pin their vertices
            && g.markings().values().all(|&v| self.vertex_perm[v] == v)
    }
}

/// Output of [`HalfEdgeGraph::canonical_form`].
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub graph: HalfEdgeGraph,
    pub key: CanonKey,
    /// Input vertex -> canonical vertex.
    pub vertex_map: Vec<usize>,
    /// Input edge -> canonical edge.
    pub edge_map: Vec<usize>,
    /// Input half-edge -> canonical half-edge.
    pub half_map: Vec<usize>,
    /// All vertex automorphisms of the canonical graph, identity first.
    vertex_automorphisms: Vec<Vec<usize>>,
}

impl CanonicalForm {
    pub fn vertex_automorphism_count(&self) -> usize {
        self.vertex_automorphisms.len()
    }

    /// Order of the full automorphism group, including permutations of
    /// parallel edges and flips of undirected loops.
    pub fn automorphism_count(&self) -> u128 {
        let g = &self.graph;
        let mut total = self.vertex_automorphisms.len() as u128;
        for class in edge_classes(g) {
            total *= (1..=class.len() as u128).product::<u128>();
        }
        if !g.is_directed() {
            let loops = (0..g.num_edges()).filter(|&e| g.is_loop(e)).count() as u32;
            total <<= loops;
        }
        total
    }

    /// Generators of the automorphism group of the canonical graph.
    pub fn automorphism_generators(&self) -> Vec<Automorphism> {
        let g = &self.graph;
        let mut gens: Vec<Automorphism> = self
            .vertex_automorphisms
            .iter()
            .skip(1)
            .map(|sigma| lift_vertex_automorphism(g, sigma))
            .collect();
        let id = Automorphism::identity(g);
        for class in edge_classes(g) {
            for pair in class.windows(2) {
                let mut a = id.clone();
                let (e, f) = (pair[0], pair[1]);
                a.half_perm.swap(2 * e, 2 * f);
                a.half_perm.swap(2 * e + 1, 2 * f + 1);
                gens.push(a);
            }
        }
        if !g.is_directed() {
            for e in (0..g.num_edges()).filter(|&e| g.is_loop(e)) {
                let mut a = id.clone();
                a.half_perm.swap(2 * e, 2 * e + 1);
                gens.push(a);
            }
        }
        gens
    }

    /// Generators of the automorphism group of the input graph.
    pub fn input_automorphism_generators(&self) -> Vec<Automorphism> {
        let inv_v = invert(&self.vertex_map);
        let inv_h = invert(&self.half_map);
        self.automorphism_generators()
            .into_iter()
            .map(|a| Automorphism {
                vertex_perm: self
                    .vertex_map
                    .iter()
                    .map(|&c| inv_v[a.vertex_perm[c]])
                    .collect(),
                half_perm: self
                    .half_map
                    .iter()
                    .map(|&c| inv_h[a.half_perm[c]])
                    .collect(),
            })
            .collect()
    }

    /// True iff some automorphism reverses orientations of the given kind,
    /// which makes the generator vanish over the rationals.
    pub fn has_odd_automorphism(&self, kind: OrientationKind) -> bool {
        self.automorphism_generators()
            .iter()
            .any(|a| a.sign(kind) < 0)
    }
}

pub(crate) fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Groups of parallel edges (same endpoints, same direction), each sorted by
/// edge index; only groups with at least two members are returned.
fn edge_classes(g: &HalfEdgeGraph) -> Vec<Vec<usize>> {
    let mut keyed: Vec<((usize, usize), usize)> =
        (0..g.num_edges()).map(|e| (edge_key(g, e), e)).collect();
    keyed.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i + 1;
        while j < keyed.len() && keyed[j].0 == keyed[i].0 {
            j += 1;
        }
        if j - i > 1 {
            out.push(keyed[i..j].iter().map(|&(_, e)| e).collect());
        }
        i = j;
    }
    out
}

fn edge_key(g: &HalfEdgeGraph, e: usize) -> (usize, usize) {
    let (a, b) = g.edge(e);
    if g.is_directed() || a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Lifts a vertex automorphism to half-edges, mapping the i-th edge of a
/// parallel class to the i-th edge of the image class.
fn lift_vertex_automorphism(g: &HalfEdgeGraph, sigma: &[usize]) -> Automorphism {
    use std::collections::HashMap;
    let mut classes: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for e in 0..g.num_edges() {
        classes.entry(edge_key(g, e)).or_default().push(e);
    }
    let mut half_perm = vec![0; g.num_half_edges()];
    for (key, members) in &classes {
        let (a, b) = *key;
        let (sa, sb) = (sigma[a], sigma[b]);
        let image_key = if g.is_directed() || sa <= sb {
            (sa, sb)
        } else {
            (sb, sa)
        };
        let image = &classes[&image_key];
        for (i, &e) in members.iter().enumerate() {
            let f = image[i];
            let straight =
                g.is_directed() || a == b || g.half_vertex(2 * f) == sigma[g.half_vertex(2 * e)];
            if straight {
                half_perm[2 * e] = 2 * f;
                half_perm[2 * e + 1] = 2 * f + 1;
            } else {
                half_perm[2 * e] = 2 * f + 1;
                half_perm[2 * e + 1] = 2 * f;
            }
        }
    }
    Automorphism {
        vertex_perm: sigma.to_vec(),
        half_perm,
    }
}

struct View<'a> {
    g: &'a HalfEdgeGraph,
    n: usize,
    /// `cnt[i * n + j]`: edges from i to j (directed) or between i and j.
    cnt: Vec<u32>,
    labels: Vec<Vec<u32>>,
}

impl<'a> View<'a> {
    fn new(g: &'a HalfEdgeGraph) -> Self {
        let n = g.num_vertices();
        let mut cnt = vec![0u32; n * n];
        for (a, b) in g.edges() {
            cnt[a * n + b] += 1;
            if !g.is_directed() && a != b {
                cnt[b * n + a] += 1;
            }
        }
        let mut labels = vec![Vec::new(); n];
        for (&l, &v) in g.markings() {
            labels[v].push(l);
        }
        View { g, n, cnt, labels }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let invariants: Vec<(u32, &Vec<u32>, usize, usize, usize)> = (0..self.n)
            .map(|v| {
                (
                    self.g.weight(v),
                    &self.labels[v],
                    self.g.edge_valence(v),
                    self.g.in_degree(v),
                    self.g.out_degree(v),
                )
            })
            .collect();
        rank(&invariants)
    }

    /// Refines a coloring to the coarsest equitable refinement.
    fn refine(&self, colors: Vec<u32>) -> Vec<u32> {
        let n = self.n;
        let mut colors = rank(&colors);
        let mut cells = count_distinct(&colors);
        loop {
            if cells == n {
                return colors;
            }
            let sigs: Vec<(u32, Vec<u64>)> = (0..n)
                .map(|v| {
                    let mut s: Vec<u64> = (0..n)
                        .filter_map(|u| {
                            let out = self.cnt[v * n + u];
                            let inc = self.cnt[u * n + v];
                            (out != 0 || inc != 0).then(|| {
                                ((colors[u] as u64) << 40) | ((out as u64) << 20) | inc as u64
                            })
                        })
                        .collect();
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let next = rank(&sigs);
            let next_cells = count_distinct(&next);
            colors = next;
            if next_cells == cells {
                return colors;
            }
            cells = next_cells;
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut code = Vec::with_capacity(4 + 3 * n + n * n);
        code.push(n as u32);
        code.push(self.g.is_directed() as u32);
        code.push(self.g.num_edges() as u32);
        for &v in order {
            code.push(self.g.weight(v));
            code.push(self.labels[v].len() as u32);
            code.extend_from_slice(&self.labels[v]);
        }
        for (i, &a) in order.iter().enumerate() {
            let start = if self.g.is_directed() { 0 } else { i };
            for &b in &order[start..] {
                code.push(self.cnt[a * n + b]);
            }
        }
        code
    }
}

fn rank<T: Ord>(items: &[T]) -> Vec<u32> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.sort_by(|&a, &b| items[a].cmp(&items[b]));
    let mut out = vec![0u32; items.len()];
    let mut r = 0u32;
    for k in 0..idx.len() {
        if k > 0 && items[idx[k]] != items[idx[k - 1]] {
            r += 1;
        }
        out[idx[k]] = r;
    }
    out
}

fn count_distinct(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

struct Search {
    best: Option<(Vec<u32>, Vec<usize>)>,
    /// Leaf orders whose encoding equals the current best.
    ties: Vec<Vec<usize>>,
}

fn explore(view: &View, colors: Vec<u32>, state: &mut Search) {
    let colors = view.refine(colors);
    let n = view.n;
    let cells = count_distinct(&colors);
    if cells == n {
        let mut order = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let code = view.encode(&order);
        match &state.best {
            Some((best, _)) if code > *best => {}
            Some((best, _)) if code == *best => state.ties.push(order),
            _ => {
                state.ties = vec![order.clone()];
                state.best = Some((code, order));
            }
        }
        return;
    }
    let mut sizes = vec![0usize; cells];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let target = sizes
        .iter()
        .position(|&s| s > 1)
        .expect("non-discrete coloring") as u32;
    for v in (0..n).filter(|&v| colors[v] == target) {
        let child: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| {
                if c == target && u != v {
                    2 * c + 1
                } else {
                    2 * c
                }
            })
            .collect();
        explore(view, child, state);
    }
}

pub(super) fn canonical_form(g: &HalfEdgeGraph) -> CanonicalForm {
    let view = View::new(g);
    let n = view.n;
    let mut state = Search {
        best: None,
        ties: Vec::new(),
    };
    if n > 0 {
        explore(&view, view.initial_colors(), &mut state);
    }
    let (code, order) = state.best.unwrap_or_else(|| (view.encode(&[]), Vec::new()));

    let mut vertex_map = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        vertex_map[v] = i;
    }
    // canonical vertex automorphisms: i -> position of ties[k][i] in `order`
    let vertex_automorphisms: Vec<Vec<usize>> = state
        .ties
        .iter()
        .map(|tie| tie.iter().map(|&v| vertex_map[v]).collect::<Vec<_>>())
        .collect();
    let mut vertex_automorphisms = vertex_automorphisms;
    vertex_automorphisms.sort();
    vertex_automorphisms.dedup();
    if let Some(pos) = vertex_automorphisms
        .iter()
        .position(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    {
        vertex_automorphisms.swap(0, pos);
    }

    let mut keyed: Vec<((usize, usize), usize)> = g
        .edges()
        .enumerate()
        .map(|(e, (a, b))| {
            let (a, b) = (vertex_map[a], vertex_map[b]);
            let k = if g.is_directed() || a <= b {
                (a, b)
            } else {
                (b, a)
            };
            (k, e)
        })
        .collect();
    keyed.sort_unstable();
    let mut edge_map = vec![0; g.num_edges()];
    let mut half_map = vec![0; g.num_half_edges()];
    let mut edges = Vec::with_capacity(keyed.len());
    for (new, &(k, e)) in keyed.iter().enumerate() {
        edge_map[e] = new;
        edges.push(k);
        let straight = g.is_directed() || vertex_map[g.half_vertex(2 * e)] == k.0;
        if straight {
            half_map[2 * e] = 2 * new;
            half_map[2 * e + 1] = 2 * new + 1;
        } else {
            half_map[2 * e] = 2 * new + 1;
            half_map[2 * e + 1] = 2 * new;
        }
    }
    let weights = order.iter().map(|&v| g.weight(v)).collect();
    let markings = g
        .markings()
        .iter()
        .map(|(&l, &v)| (l, vertex_map[v]))
        .collect();
    let graph = HalfEdgeGraph::new(weights, &edges, g.is_directed(), markings)
        .expect("relabeling preserves validity");
    CanonicalForm {
        graph,
        key: CanonKey(code.into_boxed_slice()),
        vertex_map,
        edge_map,
        half_map,
        vertex_automorphisms,
    }
}
