//! Generation of marked and oriented weight-zero graphs up to isomorphism.
//!
//! Marked graphs are produced by closing the single-vertex rose under vertex
//! splitting: every stable weight-zero graph with a non-loop edge contracts
//! to a stable weight-zero graph with one edge fewer. Oriented graphs are
//! produced from their cores (see [`oriented`]).

mod catalog;
mod forest;
mod oriented;

pub use catalog::{
    CatalogEntry, CatalogIndex, CatalogLoadError, Flavor, GraphCatalog, StratumCount, INDEX_FILE,
};
pub use forest::{rooted_forests, spanning_forests, SpanningForest};

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{
    CanonKey, Contraction, GraphError, HalfEdgeGraph, Label, OrientationKind, StabilityProfile,
};

pub const GENERATOR_VERSION: &str = concat!("ogclab-enumerate/", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("unstable pair (g={genus}, |S|={markings}): 2g + |S| - 2 must be positive")]
    Unstable { genus: u32, markings: usize },
    #[error("cell cap of {cap} exceeded while generating degree {degree}")]
    CapExceeded { cap: usize, degree: usize },
    #[error("profile {profile} cannot be used for {flavor:?} catalogs")]
    ProfileMismatch {
        profile: &'static str,
        flavor: Flavor,
    },
    #[error("closure violation: {0}")]
    Closure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GenerateOptions {
    /// Abort once a single degree holds more than this many graphs.
    pub max_cells: Option<usize>,
}

pub fn check_stable_pair(genus: u32, labels: &[Label]) -> Result<(), EnumerateError> {
    if 2 * genus as i64 + labels.len() as i64 - 2 <= 0 {
        return Err(EnumerateError::Unstable {
            genus,
            markings: labels.len(),
        });
    }
    Ok(())
}

/// The labels `1..=n`.
pub fn standard_labels(n: usize) -> Vec<Label> {
    (1..=n as Label).collect()
}

/// Single weight-zero vertex with `genus` loops and every marking.
pub fn rose(genus: u32, labels: &[Label]) -> HalfEdgeGraph {
    let edges = vec![(0, 0); genus as usize];
    HalfEdgeGraph::new(
        vec![0],
        &edges,
        false,
        labels.iter().map(|&l| (l, 0)).collect(),
    )
    .expect("rose is well formed")
}

/// All isomorphism classes of connected stable weight-zero undirected graphs
/// of the given genus and marking set, stratified by edge count.
pub fn generate_marked(
    genus: u32,
    labels: &[Label],
    profile: StabilityProfile,
    opts: GenerateOptions,
) -> Result<GraphCatalog, EnumerateError> {
    check_stable_pair(genus, labels)?;
    if profile != StabilityProfile::marked() {
        return Err(EnumerateError::ProfileMismatch {
            profile: profile.name(),
            flavor: Flavor::Marked,
        });
    }
    let levels = split_closure(genus, labels, false, opts)?;
    let bound = marked_edge_bound(genus, labels.len());
    if levels.len() > bound + 1 {
        return Err(EnumerateError::Closure(format!(
            "marked graphs with {} edges exceed the valence bound {bound}",
            levels.len() - 1
        )));
    }
    let entries = levels
        .into_iter()
        .flatten()
        .map(|(key, graph)| CatalogEntry::new(graph, key, OrientationKind::EdgeOrder))
        .collect();
    Ok(GraphCatalog::from_entries(
        Flavor::Marked,
        genus,
        labels.to_vec(),
        profile,
        entries,
    ))
}

/// Largest edge count of a stable weight-zero marked graph: every vertex is
/// at least trivalent, so `2|E| + |S| >= 3|V|` with `|V| = |E| - g + 1`.
pub fn marked_edge_bound(genus: u32, markings: usize) -> usize {
    (3 * genus as i64 - 3 + markings as i64).max(0) as usize
}

/// Largest vertex count of a stable oriented weight-zero graph. Bivalent
/// vertices are sources, so every edge ends at a vertex of valence at least
/// three, which bounds `|E|` by `2(2g - 2 + |S|)`.
pub fn oriented_vertex_bound(genus: u32, markings: usize) -> usize {
    (3 * genus as i64 - 3 + 2 * markings as i64).max(1) as usize
}

/// All isomorphism classes of acyclic directed stable weight-zero graphs,
/// stratified by vertex count.
pub fn generate_oriented(
    genus: u32,
    labels: &[Label],
    profile: StabilityProfile,
    opts: GenerateOptions,
) -> Result<GraphCatalog, EnumerateError> {
    check_stable_pair(genus, labels)?;
    if profile.flavor != crate::graph::StabilityFlavor::OrientedStable {
        return Err(EnumerateError::ProfileMismatch {
            profile: profile.name(),
            flavor: Flavor::Oriented,
        });
    }
    let cores = split_closure(genus, labels, true, GenerateOptions::default())?;
    // non-isomorphic cores have non-isomorphic orientations
    let mut found: Vec<(CanonKey, HalfEdgeGraph)> = cores
        .par_iter()
        .flatten()
        .flat_map_iter(|(_, core)| {
            let mut list = oriented::orientations_of_core(core);
            list.retain(|(_, g)| g.is_stable(&profile));
            list.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            list.dedup_by(|a, b| a.0 == b.0);
            list
        })
        .collect();
    found.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    if found.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(EnumerateError::Closure(
            "two cores share an orientation".into(),
        ));
    }

    let bound = oriented_vertex_bound(genus, labels.len());
    let mut per_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, g) in &found {
        *per_degree.entry(g.num_vertices()).or_default() += 1;
    }
    if let Some((&deg, _)) = per_degree.iter().next_back() {
        if deg > bound {
            return Err(EnumerateError::Closure(format!(
                "oriented graph with {deg} vertices exceeds the bound {bound}"
            )));
        }
    }
    if let Some(cap) = opts.max_cells {
        if let Some((&degree, _)) = per_degree.iter().find(|(_, &c)| c > cap) {
            return Err(EnumerateError::CapExceeded { cap, degree });
        }
    }
    let entries = found
        .into_par_iter()
        .map(|(key, graph)| CatalogEntry::new(graph, key, OrientationKind::VertexOrder))
        .collect();
    Ok(GraphCatalog::from_entries(
        Flavor::Oriented,
        genus,
        labels.to_vec(),
        profile,
        entries,
    ))
}

type Level = Vec<(CanonKey, HalfEdgeGraph)>;

/// Closes the rose under vertex splitting. Each side of a split keeps at
/// least two half-edges or hairs; with `hair_leaves` a side may also be a
/// single hair, which produces a bivalent vertex carrying one edge and one
/// marking. Levels are indexed by edge count and sorted by canonical key.
fn split_closure(
    genus: u32,
    labels: &[Label],
    hair_leaves: bool,
    opts: GenerateOptions,
) -> Result<Vec<Level>, EnumerateError> {
    let start = rose(genus, labels);
    let form = start.canonical_form();
    let mut levels: Vec<Level> = Vec::new();
    let mut current: Level = vec![(form.key, form.graph)];
    // the rose already carries `genus` loops
    for _ in 0..genus {
        levels.push(Vec::new());
    }
    while !current.is_empty() {
        if let Some(cap) = opts.max_cells {
            if current.len() > cap {
                return Err(EnumerateError::CapExceeded {
                    cap,
                    degree: levels.len(),
                });
            }
        }
        let mut next: Level = current
            .par_iter()
            .flat_map_iter(|(_, g)| splits(g, hair_leaves))
            .map(|g| {
                let c = g.canonical_form();
                (c.key, c.graph)
            })
            .collect();
        next.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        levels.push(std::mem::replace(&mut current, next));
    }
    Ok(levels)
}

/// All graphs obtained from `g` by splitting one vertex into two joined by a
/// new edge.
fn splits(g: &HalfEdgeGraph, hair_leaves: bool) -> Vec<HalfEdgeGraph> {
    #[derive(Clone, Copy)]
    enum Item {
        Half(usize),
        Hair(Label),
    }
    let mut out = Vec::new();
    let n = g.num_vertices();
    for v in 0..n {
        let mut items: Vec<Item> = (0..g.num_half_edges())
            .filter(|&h| g.half_vertex(h) == v)
            .map(Item::Half)
            .collect();
        items.extend(g.labels_at(v).into_iter().map(Item::Hair));
        let k = items.len();
        let side_ok = |mask: u64| {
            let size = mask.count_ones();
            size >= 2
                || (hair_leaves
                    && size == 1
                    && matches!(items[mask.trailing_zeros() as usize], Item::Hair(_)))
        };
        let full = (1u64 << k) - 1;
        // the moved side never contains item 0, so each unordered split is seen once
        for moved in 1..=full {
            if moved & 1 == 1 || !side_ok(moved) || !side_ok(full & !moved) {
                continue;
            }
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            let mut markings = g.markings().clone();
            for (i, item) in items.iter().enumerate() {
                if moved >> i & 1 == 0 {
                    continue;
                }
                match *item {
                    Item::Half(h) => {
                        let e = &mut edges[h / 2];
                        if h % 2 == 0 {
                            e.0 = n;
                        } else {
                            e.1 = n;
                        }
                    }
                    Item::Hair(l) => {
                        markings.insert(l, n);
                    }
                }
            }
            edges.push((v, n));
            let mut weights = g.weights().to_vec();
            weights.push(0);
            out.push(
                HalfEdgeGraph::new(weights, &edges, false, markings).expect("split is well formed"),
            );
        }
    }
    out
}

/// How a single edge contraction of a catalog member behaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractionOutcome {
    /// Lands on the catalog member `(degree, index)`; `vertex_map` and
    /// `edge_map` compose the contraction with the relabeling into the
    /// canonical target.
    Target {
        degree: usize,
        index: usize,
        vertex_map: Vec<usize>,
        edge_map: Vec<Option<usize>>,
    },
    /// Loop contraction raises a weight.
    ExitsLoop,
    /// Collapsing parallel edges raises a weight.
    ExitsParallel,
    /// The contracted directed graph has a directed cycle.
    ExitsCycle,
    /// The result violates the stability profile.
    ExitsUnstable,
}

impl ContractionOutcome {
    pub fn exits_locus(&self) -> bool {
        !matches!(self, ContractionOutcome::Target { .. })
    }
}

/// Contraction behaviour of every edge of `g`, a member of `catalog`.
pub fn contraction_targets(
    g: &HalfEdgeGraph,
    catalog: &GraphCatalog,
) -> Result<Vec<(usize, ContractionOutcome)>, EnumerateError> {
    (0..g.num_edges())
        .map(|e| Ok((e, contract_into(g, e, catalog)?)))
        .collect()
}

pub(crate) fn contract_into(
    g: &HalfEdgeGraph,
    e: usize,
    catalog: &GraphCatalog,
) -> Result<ContractionOutcome, EnumerateError> {
    if g.is_loop(e) {
        return Ok(ContractionOutcome::ExitsLoop);
    }
    let contraction: Contraction = match catalog.flavor() {
        Flavor::Marked => g.contract_single_edge_mapped(e)?,
        Flavor::Oriented => {
            if !g.parallel_partners(e).is_empty() {
                return Ok(ContractionOutcome::ExitsParallel);
            }
            let c = g.contract_edge_mapped(e)?;
            if !c.graph.is_acyclic()? {
                return Ok(ContractionOutcome::ExitsCycle);
            }
            c
        }
    };
    if !contraction.graph.is_weight_zero() || !contraction.graph.is_stable(catalog.profile()) {
        return Ok(ContractionOutcome::ExitsUnstable);
    }
    let form = contraction.graph.canonical_form();
    let (degree, index) = catalog.lookup(&form.key).ok_or_else(|| {
        EnumerateError::Closure(format!(
            "contraction of edge {e} of {} is stable but missing from the catalog",
            g.to_json()
        ))
    })?;
    Ok(ContractionOutcome::Target {
        degree,
        index,
        vertex_map: contraction
            .vertex_map
            .iter()
            .map(|&v| form.vertex_map[v])
            .collect(),
        edge_map: contraction
            .edge_map
            .iter()
            .map(|m| m.map(|f| form.edge_map[f]))
            .collect(),
    })
}
