//! The spanning-forest map from the marked complex to the oriented complex
//! and its verification as a chain map and quasi-isomorphism.

mod orient;
mod verify;

pub use orient::{forest_orient, ForestOrientedGraph};
pub use verify::{
    verify_chain_map, verify_quasi_iso, ChainMapReport, Direction, OffendingGenerator,
    QuasiIsoDegree, QuasiIsoReport,
};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::GradedComplex;
use crate::enumerate::{rooted_forests, Flavor};
use crate::graph::{permutation_sign, GraphError, HalfEdgeGraph};
use crate::linalg::{LinalgError, SparseMatrix};

#[derive(Debug, Error)]
pub enum ZivkovicError {
    #[error("not a rooted forest: {0}")]
    NotAForest(String),
    #[error("complexes do not match: {0}")]
    Mismatch(String),
    #[error("forest image of a degree {marked_degree} graph has {vertices} vertices, expected {expected}")]
    Degree {
        marked_degree: usize,
        vertices: usize,
        expected: usize,
    },
    #[error("forest image {0} is stable but missing from the oriented catalog")]
    MissingImage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

/// How the ordered cells of a marked graph (its edges and markings) are
/// listed before being carried to vertices of the oriented image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiConvention {
    /// Edges in reverse order, then markings by label.
    ReversedEdges,
    /// Edges in order, then markings by label.
    LegsLast,
    /// Markings by label, then edges in order.
    LegsFirst,
    /// Edges, then non-root markings, then root markings, each by label.
    RootsLast,
}

impl PsiConvention {
    pub const ALL: [PsiConvention; 4] = [
        PsiConvention::ReversedEdges,
        PsiConvention::LegsLast,
        PsiConvention::LegsFirst,
        PsiConvention::RootsLast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PsiConvention::ReversedEdges => "reversed-edges",
            PsiConvention::LegsLast => "legs-last",
            PsiConvention::LegsFirst => "legs-first",
            PsiConvention::RootsLast => "roots-last",
        }
    }
}

/// Sign of a forest image relative to the standard vertex ordering of the
/// image graph, for the edge ordering of the source.
pub fn forest_sign(z: &ForestOrientedGraph, convention: PsiConvention) -> i8 {
    let edges = z.edge_cells.iter().copied();
    let legs = z.leg_cells.values().copied();
    let order: Vec<usize> = match convention {
        PsiConvention::ReversedEdges => edges.rev().chain(legs).collect(),
        PsiConvention::LegsLast => edges.chain(legs).collect(),
        PsiConvention::LegsFirst => legs.chain(edges).collect(),
        PsiConvention::RootsLast => {
            let is_root = |v: &usize| z.roots.binary_search(v).is_ok();
            let (root, other): (Vec<usize>, Vec<usize>) = legs.partition(is_root);
            edges.chain(other).chain(root).collect()
        }
    };
    permutation_sign(&order)
}

/// Signed sum of forest images of one marked graph, as canonical graphs
/// with coefficients relative to their standard vertex ordering.
pub fn psi_of_graph(
    g: &HalfEdgeGraph,
    convention: PsiConvention,
) -> Result<Vec<(HalfEdgeGraph, i8)>, ZivkovicError> {
    rooted_forests(g)
        .iter()
        .map(|f| {
            let z = forest_orient(g, f)?;
            let form = z.graph.canonical_form();
            let sign = forest_sign(&z, convention) * permutation_sign(&form.vertex_map);
            Ok((form.graph, sign))
        })
        .collect()
}

/// The map in every marked degree `k`, as a `dim O_{k+|S|} x dim M_k`
/// matrix in the two complexes' bases.
#[derive(Clone, Debug)]
pub struct PsiFamily {
    pub convention: PsiConvention,
    pub shift: usize,
    /// Marked degree to matrix.
    pub matrices: BTreeMap<usize, SparseMatrix>,
}

impl PsiFamily {
    /// `Psi_k`, or a zero matrix of the right shape.
    pub fn matrix(
        &self,
        marked: &GradedComplex,
        oriented: &GradedComplex,
        k: usize,
    ) -> SparseMatrix {
        self.matrices
            .get(&k)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(oriented.dim(k + self.shift), marked.dim(k)))
    }
}

fn check_pair(marked: &GradedComplex, oriented: &GradedComplex) -> Result<(), ZivkovicError> {
    if marked.flavor() != Flavor::Marked || oriented.flavor() != Flavor::Oriented {
        return Err(ZivkovicError::Mismatch(
            "expected a marked and an oriented complex".into(),
        ));
    }
    if marked.genus() != oriented.genus()
        || marked.catalog().labels() != oriented.catalog().labels()
    {
        return Err(ZivkovicError::Mismatch(format!(
            "(g={}, S={:?}) vs (g={}, S={:?})",
            marked.genus(),
            marked.catalog().labels(),
            oriented.genus(),
            oriented.catalog().labels()
        )));
    }
    Ok(())
}

pub fn psi_matrix(
    marked: &GradedComplex,
    oriented: &GradedComplex,
    convention: PsiConvention,
) -> Result<PsiFamily, ZivkovicError> {
    check_pair(marked, oriented)?;
    let shift = marked.markings();
    let target_catalog = oriented.catalog();
    let profile = target_catalog.profile();
    let mut matrices = BTreeMap::new();
    for k in marked.degrees() {
        let basis = marked.basis(k);
        let target_basis = oriented.basis(k + shift);
        let columns: Vec<BTreeMap<usize, i64>> = basis
            .generators()
            .par_iter()
            .map(|&i| {
                let g = &marked.catalog().stratum(k)[i].graph;
                let mut col: BTreeMap<usize, i64> = BTreeMap::new();
                for (image, sign) in psi_of_graph(g, convention)? {
                    if image.num_vertices() != k + shift {
                        return Err(ZivkovicError::Degree {
                            marked_degree: k,
                            vertices: image.num_vertices(),
                            expected: k + shift,
                        });
                    }
                    if !image.is_stable(profile) {
                        continue;
                    }
                    let key = image.canonical_form().key;
                    let (_, t) = target_catalog
                        .lookup(&key)
                        .ok_or_else(|| ZivkovicError::MissingImage(image.to_json()))?;
                    if let Some(row) = target_basis.position(t) {
                        *col.entry(row).or_default() += sign as i64;
                    }
                }
                Ok(col)
            })
            .collect::<Result<_, ZivkovicError>>()?;
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, &v)| (r, c, v)));
        let m = SparseMatrix::from_int_triplets(target_basis.len(), basis.len(), entries)?;
        matrices.insert(k, m);
    }
    Ok(PsiFamily {
        convention,
        shift,
        matrices,
    })
}

/// Tries each convention in [`PsiConvention::ALL`] order and returns the
/// first whose map passes the chain map check, or the last report if none.
pub fn select_convention(
    marked: &GradedComplex,
    oriented: &GradedComplex,
) -> Result<(PsiFamily, ChainMapReport), ZivkovicError> {
    let mut last = None;
    for convention in PsiConvention::ALL {
        let psi = psi_matrix(marked, oriented, convention)?;
        let report = verify_chain_map(&psi, marked, oriented)?;
        if report.passed {
            return Ok((psi, report));
        }
        last = Some((psi, report));
    }
    Ok(last.expect("at least one convention"))
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub genus: u32,
    pub labels: Vec<crate::graph::Label>,
    pub chain_map: ChainMapReport,
    pub quasi_iso: Option<QuasiIsoReport>,
    pub passed: bool,
}

/// Full check: pick a convention, verify the chain map identity, then the
/// quasi-isomorphism in the verified direction.
pub fn verify_zivkovic(
    marked: &GradedComplex,
    oriented: &GradedComplex,
    opts: crate::complex::BettiOptions,
) -> Result<(PsiFamily, VerificationReport), ZivkovicError> {
    let (psi, chain_map) = select_convention(marked, oriented)?;
    let quasi_iso = match chain_map.verified {
        Some((direction, _)) => Some(verify_quasi_iso(&psi, marked, oriented, direction, opts)?),
        None => None,
    };
    let passed = chain_map.passed && quasi_iso.as_ref().is_some_and(|q| q.passed);
    let report = VerificationReport {
        genus: marked.genus(),
        labels: marked.catalog().labels().to_vec(),
        chain_map,
        quasi_iso,
        passed,
    };
    Ok((psi, report))
}
