#![allow(dead_code)]

pub mod invariants;
pub mod oracle;

use std::sync::Arc;

use ogclab_core::complex::{
    betti, build_marked_complex, build_oriented_complex, BettiOptions, BettiTable, GradedComplex,
};
use ogclab_core::enumerate::{generate_marked, generate_oriented, standard_labels, Flavor};
use ogclab_core::graph::StabilityProfile;
use ogclab_core::linalg::SparseMatrix;

use oracle::{Classes, Graph};

pub fn complex(flavor: Flavor, genus: u32, n: usize) -> GradedComplex {
    let labels = standard_labels(n);
    match flavor {
        Flavor::Marked => {
            let c = generate_marked(
                genus,
                &labels,
                StabilityProfile::marked(),
                Default::default(),
            )
            .unwrap();
            build_marked_complex(Arc::new(c)).unwrap()
        }
        Flavor::Oriented => {
            let c = generate_oriented(
                genus,
                &labels,
                StabilityProfile::oriented(),
                Default::default(),
            )
            .unwrap();
            build_oriented_complex(Arc::new(c)).unwrap()
        }
    }
}

pub fn table(c: &GradedComplex) -> BettiTable {
    betti(c, BettiOptions::default()).unwrap()
}

/// Nonzero Betti numbers keyed by the cohomological degree.
pub fn hc_betti(t: &BettiTable) -> Vec<(i64, usize)> {
    t.by_hc_degree()
        .into_iter()
        .filter(|&(_, b)| b > 0)
        .collect()
}

pub fn oracle_classes(flavor: Flavor, genus: u32, n: usize) -> Vec<Classes> {
    match flavor {
        Flavor::Marked => oracle::marked_classes(genus as usize, n),
        Flavor::Oriented => oracle::oriented_classes(genus as usize, n),
    }
}

fn to_dense(m: &SparseMatrix) -> Vec<Vec<i64>> {
    let mut d = vec![vec![0; m.cols()]; m.rows()];
    for (r, c, v) in m.triplets() {
        assert!(v.is_integer());
        d[r][c] = v.to_integer();
    }
    d
}

/// Compares an engine complex with oracle classes: stratum sizes, zero
/// cells, every differential up to signed basis permutation and one global
/// sign per degree, and the Betti numbers. Returns a description of the
/// first disagreement.
pub fn compare_with_oracle(c: &GradedComplex, classes: &[Classes]) -> Result<(), String> {
    let catalog = c.catalog();
    let top = classes
        .len()
        .max(catalog.degrees().max().map_or(0, |d| d + 1));
    // per degree: oracle nonzero position and sign of every engine basis vector
    let mut moved: Vec<Vec<(usize, i64)>> = vec![Vec::new(); top];
    let mut oracle_nonzero: Vec<Vec<usize>> = vec![Vec::new(); top];
    for d in 0..top {
        let cls = classes.get(d);
        let count = cls.map_or(0, Classes::len);
        let stratum = catalog.stratum(d);
        if stratum.len() != count {
            return Err(format!(
                "degree {d}: engine {} graphs, oracle {count}",
                stratum.len()
            ));
        }
        let Some(cls) = cls else { continue };
        oracle_nonzero[d] = (0..count)
            .filter(|&i| !oracle::is_zero(&cls.reps[i]))
            .collect();
        let mut hit = vec![false; count];
        for (i, e) in stratum.iter().enumerate() {
            let g = Graph::from_engine(&e.graph);
            let (j, _) = cls
                .find(&g)
                .ok_or_else(|| format!("degree {d}: engine graph {i} has no oracle class"))?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(format!("degree {d}: two engine graphs in oracle class {j}"));
            }
            let zero = oracle::is_zero(&cls.reps[j]);
            if zero != e.zero {
                return Err(format!(
                    "degree {d}: graph {i} zero={} vs oracle {zero}",
                    e.zero
                ));
            }
        }
        for &i in c.basis(d).generators() {
            let g = Graph::from_engine(&catalog.stratum(d)[i].graph);
            let (j, map) = cls.find(&g).unwrap();
            let pos = oracle_nonzero[d].iter().position(|&x| x == j).unwrap();
            moved[d].push((pos, oracle::orientation_sign(&g, &cls.reps[j], &map)));
        }
    }
    let mut ranks = vec![0usize; top + 1];
    for d in 1..top {
        let expected = oracle::boundary_matrix(classes, d);
        let mut got = vec![vec![0i64; moved[d].len()]; moved[d - 1].len()];
        for (r, row) in to_dense(&c.differential(d)).iter().enumerate() {
            for (col, &v) in row.iter().enumerate() {
                let (r2, s1) = moved[d - 1][r];
                let (c2, s2) = moved[d][col];
                got[r2][c2] = v * s1 * s2;
            }
        }
        if !oracle::equal_up_to_sign(&expected, &got) {
            return Err(format!("degree {d}: differentials differ"));
        }
        ranks[d] = oracle::dense_rank(&expected);
    }
    let t = table(c);
    for d in 0..top {
        let b = oracle_nonzero[d].len() - ranks[d] - ranks[d + 1];
        if b != t.betti(d) {
            return Err(format!("degree {d}: betti {} vs oracle {b}", t.betti(d)));
        }
    }
    Ok(())
}
