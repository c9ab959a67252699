use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ComplexError, GradedComplex};
use crate::enumerate::Flavor;
use crate::linalg::{rank_report, RankStrategy};

/// Degree of compactly supported cohomology of the moduli space matched to a
/// cell degree. Oriented graphs are graded by `|V| - 1` and shifted by
/// `-|S|`; marked graphs have `|V| = |E| + |S|` after turning markings into
/// legs, so their shift is `|E| - 1`.
pub fn hc_degree(flavor: Flavor, markings: usize, cell_degree: usize) -> i64 {
    match flavor {
        Flavor::Oriented => cell_degree as i64 - 1 - markings as i64,
        Flavor::Marked => cell_degree as i64 - 1,
    }
}

/// Inverse of [`hc_degree`]; `None` when no cell degree maps there.
pub fn cell_degree(flavor: Flavor, markings: usize, hc_degree: i64) -> Option<usize> {
    let d = match flavor {
        Flavor::Oriented => hc_degree + 1 + markings as i64,
        Flavor::Marked => hc_degree + 1,
    };
    usize::try_from(d).ok()
}

#[derive(Clone, Copy, Debug)]
pub struct BettiOptions {
    pub strategy: RankStrategy,
    /// Also compute every rank over the rationals and fail on disagreement.
    pub verify_rational: bool,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions {
            strategy: RankStrategy::consensus(0),
            verify_rational: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiRow {
    pub cell_degree: usize,
    pub hc_degree: i64,
    pub dim_basis: usize,
    /// Rank of the differential leaving this degree.
    pub rank_out: usize,
    pub betti: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub flavor: Flavor,
    pub genus: u32,
    pub markings: usize,
    pub parity: u8,
    pub rows: Vec<BettiRow>,
}

impl BettiTable {
    pub fn betti(&self, cell_degree: usize) -> usize {
        self.rows
            .iter()
            .find(|r| r.cell_degree == cell_degree)
            .map_or(0, |r| r.betti)
    }

    /// Nonzero Betti numbers keyed by cohomological degree.
    pub fn by_hc_degree(&self) -> Vec<(i64, usize)> {
        self.rows
            .iter()
            .filter(|r| r.betti > 0)
            .map(|r| (r.hc_degree, r.betti))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.betti).sum()
    }

    pub const CSV_HEADER: &'static str = "flavor,g,|S|,cell_degree,hc_degree,dim_basis,betti";

    /// Rows without the header line.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.flavor.name(),
                self.genus,
                self.markings,
                r.cell_degree,
                r.hc_degree,
                r.dim_basis,
                r.betti
            )
            .expect("writing to a string");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::CSV_HEADER, self.csv_rows())
    }
}

/// Betti numbers `dim C_k - rank d_k - rank d_{k+1}` for every degree with
/// catalog graphs.
pub fn betti(complex: &GradedComplex, opts: BettiOptions) -> Result<BettiTable, ComplexError> {
    let Some((lo, hi)) = complex.range() else {
        return Ok(BettiTable {
            flavor: complex.flavor(),
            genus: complex.genus(),
            markings: complex.markings(),
            parity: complex.parity(),
            rows: Vec::new(),
        });
    };
    // ranks[k - lo] = rank d_k
    let mut ranks = Vec::with_capacity(hi - lo + 2);
    for k in lo..=hi + 1 {
        let r = match complex.differential_ref(k) {
            None => 0,
            Some(m) => {
                let report = rank_report(m, opts.strategy)?;
                if opts.verify_rational {
                    let rational = match report.rational {
                        Some(r) => r,
                        None => rank_report(m, RankStrategy::Rational)?.rank,
                    };
                    if rational != report.rank {
                        return Err(ComplexError::RankDisagreement {
                            matrix: format!("{} d_{k}", complex.flavor().name()),
                            modular: report.rank,
                            rational,
                        });
                    }
                }
                report.rank
            }
        };
        ranks.push(r);
    }
    let rows = (lo..=hi)
        .map(|k| {
            let dim = complex.dim(k);
            let rank_in = ranks[k - lo + 1];
            let rank_out = ranks[k - lo];
            BettiRow {
                cell_degree: k,
                hc_degree: hc_degree(complex.flavor(), complex.markings(), k),
                dim_basis: dim,
                rank_out,
                betti: dim - rank_out - rank_in,
            }
        })
        .collect();
    Ok(BettiTable {
        flavor: complex.flavor(),
        genus: complex.genus(),
        markings: complex.markings(),
        parity: complex.parity(),
        rows,
    })
}

/// `(sum (-1)^k dim C_k, sum (-1)^k b_k)`; fails when they differ.
pub fn euler_characteristic(
    complex: &GradedComplex,
    table: &BettiTable,
) -> Result<(i64, i64), ComplexError> {
    let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };
    let basis: i64 = complex
        .degrees()
        .map(|k| sign(k) * complex.dim(k) as i64)
        .sum();
    let cohomology: i64 = table
        .rows
        .iter()
        .map(|r| sign(r.cell_degree) * r.betti as i64)
        .sum();
    if basis != cohomology {
        return Err(ComplexError::EulerMismatch {
            basis,
            betti: cohomology,
        });
    }
    Ok((basis, cohomology))
}
