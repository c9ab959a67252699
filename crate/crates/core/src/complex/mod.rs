//! The two weight-zero graph complexes, stored homologically.
//!
//! Marked generators sit in degree `|E|` with an edge ordering as
//! orientation; the boundary contracts one edge at a time with sign
//! `(-1)^i` for the `i`-th edge. Oriented generators sit in degree `|V|`
//! with a vertex ordering; contracting `a -> b` moves `a, b` to the last two
//! slots and merges them into one. Vertex splitting is the transpose.
//! Terms leaving the weight-zero stable locus and generators with an
//! orientation-reversing automorphism are dropped.

mod betti;

pub use betti::{
    betti, cell_degree, euler_characteristic, hc_degree, BettiOptions, BettiRow, BettiTable,
};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::enumerate::{contract_into, ContractionOutcome, EnumerateError, Flavor, GraphCatalog};
use crate::graph::permutation_sign;
use crate::linalg::{LinalgError, SparseMatrix};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("expected a {expected:?} catalog, got {found:?}")]
    FlavorMismatch { expected: Flavor, found: Flavor },
    #[error(
        "d^2 != 0: generator {generator} in degree {degree} hits generator {target} in degree {} with coefficient {coefficient}",
        degree - 2
    )]
    NonZeroSquare {
        degree: usize,
        generator: usize,
        target: usize,
        coefficient: String,
    },
    #[error("rank of {matrix} disagrees: modular {modular}, rational {rational}")]
    RankDisagreement {
        matrix: String,
        modular: usize,
        rational: usize,
    },
    #[error("Euler characteristic mismatch: basis {basis}, cohomology {betti}")]
    EulerMismatch { basis: i64, betti: i64 },
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Ordered nonzero generators of one degree, as indices into the catalog
/// stratum of that degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedBasis {
    generators: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl GradedBasis {
    fn new(generators: Vec<usize>) -> Self {
        let position = generators
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, i))
            .collect();
        GradedBasis {
            generators,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Catalog index of the `i`-th basis element.
    pub fn generator(&self, i: usize) -> usize {
        self.generators[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Basis position of a catalog index, if it is a nonzero generator.
    pub fn position(&self, catalog_index: usize) -> Option<usize> {
        self.position.get(&catalog_index).copied()
    }
}

#[derive(Clone, Debug)]
pub struct GradedComplex {
    catalog: Arc<GraphCatalog>,
    parity: u8,
    bases: BTreeMap<usize, GradedBasis>,
    /// `k -> d_k : C_k -> C_{k-1}`, rows indexed by the basis of `k - 1`.
    differentials: BTreeMap<usize, SparseMatrix>,
}

static EMPTY: std::sync::OnceLock<GradedBasis> = std::sync::OnceLock::new();

impl GradedComplex {
    pub fn catalog(&self) -> &GraphCatalog {
        &self.catalog
    }

    pub fn catalog_arc(&self) -> Arc<GraphCatalog> {
        self.catalog.clone()
    }

    pub fn flavor(&self) -> Flavor {
        self.catalog.flavor()
    }

    pub fn genus(&self) -> u32 {
        self.catalog.genus()
    }

    pub fn markings(&self) -> usize {
        self.catalog.labels().len()
    }

    /// `0` for the marked complex, `1` for the oriented one.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    /// Degrees carrying catalog graphs (possibly with empty basis).
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.bases.keys().copied()
    }

    pub fn basis(&self, degree: usize) -> &GradedBasis {
        self.bases
            .get(&degree)
            .unwrap_or_else(|| EMPTY.get_or_init(GradedBasis::default))
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    /// `d_k`, a `dim(k-1) x dim(k)` matrix; zero blocks outside the stored range.
    pub fn differential(&self, degree: usize) -> SparseMatrix {
        match self.differentials.get(&degree) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(
                degree.checked_sub(1).map_or(0, |d| self.dim(d)),
                self.dim(degree),
            ),
        }
    }

    pub fn differential_ref(&self, degree: usize) -> Option<&SparseMatrix> {
        self.differentials.get(&degree)
    }

    /// Degree of the cohomological (vertex-splitting) differential
    /// `d_k^T : C_{k-1} -> C_k`.
    pub fn coboundary(&self, degree: usize) -> SparseMatrix {
        self.differential(degree).transpose()
    }

    /// Lowest and highest degree with catalog graphs.
    pub fn range(&self) -> Option<(usize, usize)> {
        Some((*self.bases.keys().next()?, *self.bases.keys().next_back()?))
    }

    /// Checks `d_{k-1} d_k = 0` for every `k`, reporting the first offending
    /// generator pair.
    pub fn check_square_zero(&self) -> Result<(), ComplexError> {
        for (&k, dk) in &self.differentials {
            let Some(prev) = k.checked_sub(1).and_then(|j| self.differentials.get(&j)) else {
                continue;
            };
            let product = prev.multiply(dk)?;
            if let Some((r, c, v)) = product.transpose().triplets().next() {
                return Err(ComplexError::NonZeroSquare {
                    degree: k,
                    generator: self.basis(k).generator(r),
                    target: self.basis(k - 2).generator(c),
                    coefficient: v.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Signed boundary of catalog graph `(degree, index)` as `(target catalog
/// index, coefficient)` pairs in degree `degree - 1`, with zero targets and
/// terms exiting the locus removed. The generator itself is not required to
/// be nonzero.
pub fn boundary_terms(
    catalog: &GraphCatalog,
    degree: usize,
    index: usize,
) -> Result<Vec<(usize, i64)>, EnumerateError> {
    let g = &catalog.stratum(degree)[index].graph;
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for e in 0..g.num_edges() {
        let ContractionOutcome::Target {
            degree: d,
            index: t,
            vertex_map,
            edge_map,
        } = contract_into(g, e, catalog)?
        else {
            continue;
        };
        debug_assert_eq!(d + 1, degree);
        if catalog.stratum(d)[t].zero {
            continue;
        }
        let sign = match catalog.flavor() {
            Flavor::Marked => {
                let order: Vec<usize> = edge_map.iter().flatten().copied().collect();
                let koszul = if e % 2 == 0 { 1 } else { -1 };
                koszul * permutation_sign(&order)
            }
            Flavor::Oriented => {
                let (a, b) = g.edge(e);
                contraction_vertex_sign(g.num_vertices(), a, b, &vertex_map)
            }
        };
        *acc.entry(t).or_default() += sign as i64;
    }
    Ok(acc.into_iter().filter(|&(_, c)| c != 0).collect())
}

/// Sign for merging vertex slots `a` (source) and `b` (target): move them to
/// the last two positions in that order, then transport the resulting
/// ordering along `vertex_map` (which sends both to the merged vertex).
fn contraction_vertex_sign(n: usize, a: usize, b: usize, vertex_map: &[usize]) -> i8 {
    let mut order: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
    order.push(a);
    order.push(b);
    let moved = permutation_sign(&order);
    let image: Vec<usize> = order[..n - 1].iter().map(|&v| vertex_map[v]).collect();
    moved * permutation_sign(&image)
}

fn assemble(catalog: Arc<GraphCatalog>, parity: u8) -> Result<GradedComplex, ComplexError> {
    let mut bases = BTreeMap::new();
    for d in catalog.degrees() {
        let nonzero = catalog
            .stratum(d)
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.zero)
            .map(|(i, _)| i)
            .collect();
        bases.insert(d, GradedBasis::new(nonzero));
    }
    let mut differentials = BTreeMap::new();
    for (&k, basis) in &bases {
        let Some(target) = k.checked_sub(1).and_then(|j| bases.get(&j)) else {
            continue;
        };
        let columns: Vec<Vec<(usize, i64)>> = basis
            .generators
            .par_iter()
            .map(|&g| boundary_terms(&catalog, k, g))
            .collect::<Result<_, _>>()?;
        let entries = columns.iter().enumerate().flat_map(|(c, col)| {
            col.iter().map(move |&(t, v)| {
                let r = target
                    .position(t)
                    .expect("nonzero targets are in the basis");
                (r, c, v)
            })
        });
        let m = SparseMatrix::from_int_triplets(target.len(), basis.len(), entries)?;
        differentials.insert(k, m);
    }
    let complex = GradedComplex {
        catalog,
        parity,
        bases,
        differentials,
    };
    complex.check_square_zero()?;
    Ok(complex)
}

/// The marked graph complex (even parity) of a marked catalog.
pub fn build_marked_complex(catalog: Arc<GraphCatalog>) -> Result<GradedComplex, ComplexError> {
    if catalog.flavor() != Flavor::Marked {
        return Err(ComplexError::FlavorMismatch {
            expected: Flavor::Marked,
            found: catalog.flavor(),
        });
    }
    assemble(catalog, 0)
}

/// The oriented graph complex of an oriented catalog.
pub fn build_oriented_complex(catalog: Arc<GraphCatalog>) -> Result<GradedComplex, ComplexError> {
    if catalog.flavor() != Flavor::Oriented {
        return Err(ComplexError::FlavorMismatch {
            expected: Flavor::Oriented,
            found: catalog.flavor(),
        });
    }
    assemble(catalog, 1)
}
