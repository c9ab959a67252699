use serde::Serialize;

use super::{check_pair, PsiConvention, PsiFamily, ZivkovicError};
use crate::complex::{betti, hc_degree, BettiOptions, BettiTable, GradedComplex};
use crate::linalg::{rank, SparseMatrix};

/// Which way the forest map was checked. `MarkedToOriented` compares
/// boundaries: `d_O Psi = eps Psi d_M`. `OrientedToMarked` is the transpose
/// map, a chain map exactly when `Psi` intertwines the vertex-splitting and
/// edge-splitting coboundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    MarkedToOriented,
    OrientedToMarked,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::MarkedToOriented, Direction::OrientedToMarked];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffendingGenerator {
    /// Flavor name and degree of the generator the identity fails on.
    pub flavor: &'static str,
    pub degree: usize,
    /// Catalog index of the generator within its stratum.
    pub generator: usize,
    /// `(target basis position, coefficient)` of `d Psi` applied to it.
    pub lhs: Vec<(usize, String)>,
    /// The same for `Psi d`.
    pub rhs: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionCheck {
    pub direction: Direction,
    /// Global signs `eps` for which the identity holds in every degree.
    pub epsilons: Vec<i8>,
    /// First failing generator for `eps = +1`, if any.
    pub offending: Option<OffendingGenerator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMapReport {
    pub convention: PsiConvention,
    pub shift: usize,
    pub checks: Vec<DirectionCheck>,
    /// The first direction (in `Direction::ALL` order) that holds, with its sign.
    pub verified: Option<(Direction, i8)>,
    pub passed: bool,
}

fn zeros_like(rows: usize, cols: usize) -> SparseMatrix {
    SparseMatrix::zeros(rows, cols)
}

/// `(lhs, rhs)` in source degree `k` for one direction, both mapping the
/// source degree `k` space to the target degree below the image of `k`.
fn sides(
    psi: &PsiFamily,
    marked: &GradedComplex,
    oriented: &GradedComplex,
    direction: Direction,
    k: usize,
) -> Result<(SparseMatrix, SparseMatrix), ZivkovicError> {
    let s = psi.shift;
    let below = |c: &GradedComplex, d: usize| d.checked_sub(1).map_or(0, |j| c.dim(j));
    Ok(match direction {
        Direction::MarkedToOriented => {
            let lhs = oriented
                .differential(k + s)
                .multiply(&psi.matrix(marked, oriented, k))?;
            let prev = match k.checked_sub(1) {
                Some(j) => psi.matrix(marked, oriented, j),
                None => zeros_like(below(oriented, s), 0),
            };
            let rhs = prev.multiply(&marked.differential(k))?;
            (lhs, rhs)
        }
        Direction::OrientedToMarked => {
            // source is the oriented degree k + s
            let lhs = marked
                .differential(k)
                .multiply(&psi.matrix(marked, oriented, k).transpose())?;
            let prev = match k.checked_sub(1) {
                Some(j) => psi.matrix(marked, oriented, j).transpose(),
                None => zeros_like(0, below(oriented, k + s)),
            };
            let rhs = prev.multiply(&oriented.differential(k + s))?;
            (lhs, rhs)
        }
    })
}

fn column(m: &SparseMatrix, c: usize) -> Vec<(usize, String)> {
    let t = m.transpose();
    t.row(c).iter().map(|(r, v)| (*r, v.to_string())).collect()
}

/// Checks the chain map identity in both directions and for both global
/// signs.
pub fn verify_chain_map(
    psi: &PsiFamily,
    marked: &GradedComplex,
    oriented: &GradedComplex,
) -> Result<ChainMapReport, ZivkovicError> {
    check_pair(marked, oriented)?;
    let Some((lo, hi)) = marked.range() else {
        return Ok(ChainMapReport {
            convention: psi.convention,
            shift: psi.shift,
            checks: Vec::new(),
            verified: Some((Direction::MarkedToOriented, 1)),
            passed: true,
        });
    };
    let mut checks = Vec::new();
    for direction in Direction::ALL {
        let mut plus = true;
        let mut minus = true;
        let mut offending = None;
        for k in lo..=hi + 1 {
            let (lhs, rhs) = sides(psi, marked, oriented, direction, k)?;
            let diff = lhs.add(&rhs.scale(-1)?)?;
            let sum = lhs.add(&rhs)?;
            if !diff.is_zero() {
                plus = false;
                if offending.is_none() {
                    let c = diff.transpose().triplets().next().expect("nonzero").0;
                    let (flavor, degree, generator) = match direction {
                        Direction::MarkedToOriented => ("marked", k, marked.basis(k).generator(c)),
                        Direction::OrientedToMarked => (
                            "oriented",
                            k + psi.shift,
                            oriented.basis(k + psi.shift).generator(c),
                        ),
                    };
                    offending = Some(OffendingGenerator {
                        flavor,
                        degree,
                        generator,
                        lhs: column(&lhs, c),
                        rhs: column(&rhs, c),
                    });
                }
            }
            if !sum.is_zero() {
                minus = false;
            }
        }
        let mut epsilons = Vec::new();
        if plus {
            epsilons.push(1);
        }
        if minus {
            epsilons.push(-1);
        }
        checks.push(DirectionCheck {
            direction,
            epsilons,
            offending,
        });
    }
    let verified = checks
        .iter()
        .find(|c| !c.epsilons.is_empty())
        .map(|c| (c.direction, c.epsilons[0]));
    Ok(ChainMapReport {
        convention: psi.convention,
        shift: psi.shift,
        checks,
        verified,
        passed: verified.is_some(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoDegree {
    pub source_degree: usize,
    pub target_degree: usize,
    pub hc_degree: i64,
    pub betti_source: usize,
    pub betti_target: usize,
    /// Rank of the induced map on homology.
    pub induced_rank: usize,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub direction: Direction,
    pub convention: PsiConvention,
    pub degrees: Vec<QuasiIsoDegree>,
    pub marked: BettiTable,
    pub oriented: BettiTable,
    pub passed: bool,
}

/// Degree-wise rank of the induced map on homology, from
/// `rank [[d_A, 0], [f, d_B]] - rank d_A - rank d_B`, compared against both
/// Betti numbers.
pub fn verify_quasi_iso(
    psi: &PsiFamily,
    marked: &GradedComplex,
    oriented: &GradedComplex,
    direction: Direction,
    opts: BettiOptions,
) -> Result<QuasiIsoReport, ZivkovicError> {
    check_pair(marked, oriented)?;
    let s = psi.shift;
    let mb = betti(marked, opts)?;
    let ob = betti(oriented, opts)?;
    let rank_out = |t: &BettiTable, k: usize| {
        t.rows
            .iter()
            .find(|r| r.cell_degree == k)
            .map_or(0, |r| r.rank_out)
    };
    let (source, target, source_table, target_table) = match direction {
        Direction::MarkedToOriented => (marked, oriented, &mb, &ob),
        Direction::OrientedToMarked => (oriented, marked, &ob, &mb),
    };
    // source degree -> target degree
    let image = |k: usize| -> Option<usize> {
        match direction {
            Direction::MarkedToOriented => Some(k + s),
            Direction::OrientedToMarked => k.checked_sub(s),
        }
    };
    let mut degrees: Vec<usize> = source.degrees().collect();
    for t in target.degrees() {
        let pre = match direction {
            Direction::MarkedToOriented => t.checked_sub(s),
            Direction::OrientedToMarked => Some(t + s),
        };
        if let Some(k) = pre {
            degrees.push(k);
        }
    }
    degrees.sort_unstable();
    degrees.dedup();

    let mut out = Vec::new();
    for k in degrees {
        let betti_source = source_table.betti(k);
        let Some(t) = image(k) else {
            out.push(QuasiIsoDegree {
                source_degree: k,
                target_degree: 0,
                hc_degree: hc_degree(source.flavor(), s, k),
                betti_source,
                betti_target: 0,
                induced_rank: 0,
                isomorphism: betti_source == 0,
            });
            continue;
        };
        let betti_target = target_table.betti(t);
        let f = match direction {
            Direction::MarkedToOriented => psi.matrix(marked, oriented, k),
            Direction::OrientedToMarked => psi.matrix(marked, oriented, t).transpose(),
        };
        let da = source.differential(k);
        let db = target.differential(t + 1);
        let below = k.checked_sub(1).map_or(0, |j| source.dim(j));
        let stacked = SparseMatrix::block(
            &[below, target.dim(t)],
            &[source.dim(k), target.dim(t + 1)],
            &[vec![Some(&da), None], vec![Some(&f), Some(&db)]],
        )?;
        let total = rank(&stacked, opts.strategy)?;
        let induced_rank = total - rank_out(source_table, k) - rank_out(target_table, t + 1);
        out.push(QuasiIsoDegree {
            source_degree: k,
            target_degree: t,
            hc_degree: hc_degree(source.flavor(), s, k),
            betti_source,
            betti_target,
            induced_rank,
            isomorphism: betti_source == betti_target && induced_rank == betti_source,
        });
    }
    let passed = out.iter().all(|d| d.isomorphism);
    Ok(QuasiIsoReport {
        direction,
        convention: psi.convention,
        degrees: out,
        marked: mb,
        oriented: ob,
        passed,
    })
}
