//! Sparse Gaussian elimination with Markowitz-style pivoting: the shortest
//! remaining row is used next, pivoting on its sparsest column.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::prime::pow_mod;
use super::SparseMatrix;

type Row<V> = Vec<(usize, V)>;

trait Scalars {
    type V: Clone;

    /// Prepares a row once it is chosen as pivot row.
    fn prepare_pivot(&self, row: &mut Row<Self::V>, col: usize);

    /// A row with `col` cleared, spanning together with `pivot` the same
    /// space as `target` and `pivot`.
    fn eliminate(&self, target: &Row<Self::V>, pivot: &Row<Self::V>, col: usize) -> Row<Self::V>;
}

fn value_at<V>(row: &Row<V>, col: usize) -> &V {
    let i = row
        .binary_search_by_key(&col, |e| e.0)
        .expect("column present");
    &row[i].1
}

fn rank_with<S: Scalars>(mut rows: Vec<Row<S::V>>, ncols: usize, s: &S) -> usize {
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut heap = BinaryHeap::new();
    let mut active = vec![false; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].push(r);
        }
        if !row.is_empty() {
            active[r] = true;
            heap.push(Reverse((row.len(), r)));
        }
    }
    let mut rank = 0;
    while let Some(Reverse((len, r))) = heap.pop() {
        if !active[r] || rows[r].len() != len {
            continue;
        }
        let col = rows[r]
            .iter()
            .map(|e| e.0)
            .min_by_key(|&c| (col_rows[c].len(), c))
            .expect("active rows are nonempty");
        active[r] = false;
        rank += 1;
        let mut pivot = std::mem::take(&mut rows[r]);
        s.prepare_pivot(&mut pivot, col);
        for t in std::mem::take(&mut col_rows[col]) {
            if !active[t] || rows[t].binary_search_by_key(&col, |e| e.0).is_err() {
                continue;
            }
            let new = s.eliminate(&rows[t], &pivot, col);
            // register fill-in
            let old = &rows[t];
            let mut i = 0;
            for &(c, _) in &new {
                while i < old.len() && old[i].0 < c {
                    i += 1;
                }
                if i == old.len() || old[i].0 != c {
                    col_rows[c].push(t);
                }
            }
            rows[t] = new;
            if rows[t].is_empty() {
                active[t] = false;
            } else {
                heap.push(Reverse((rows[t].len(), t)));
            }
        }
    }
    rank
}

/// Merges `a*x - b*y` for sparse rows, dropping zeros.
fn combine<V: Clone>(
    x: &Row<V>,
    y: &Row<V>,
    mut f: impl FnMut(Option<&V>, Option<&V>) -> Option<V>,
) -> Row<V> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                i += 1;
                j += 1;
                (a.0, f(Some(&a.1), Some(&b.1)))
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                i += 1;
                (a.0, f(Some(&a.1), None))
            }
            (Some(a), None) => {
                i += 1;
                (a.0, f(Some(&a.1), None))
            }
            (_, Some(b)) => {
                j += 1;
                (b.0, f(None, Some(&b.1)))
            }
            (None, None) => unreachable!(),
        };
        if let Some(v) = v {
            out.push((c, v));
        }
    }
    out
}

struct ModP(u64);

impl Scalars for ModP {
    type V = u64;

    fn prepare_pivot(&self, row: &mut Row<u64>, col: usize) {
        let p = self.0;
        let inv = pow_mod(*value_at(row, col), p - 2, p);
        for e in row.iter_mut() {
            e.1 = e.1 * inv % p;
        }
    }

    fn eliminate(&self, target: &Row<u64>, pivot: &Row<u64>, col: usize) -> Row<u64> {
        let p = self.0;
        let factor = *value_at(target, col);
        combine(target, pivot, |a, b| {
            let a = a.copied().unwrap_or(0);
            let b = b.map_or(0, |b| b * factor % p);
            let v = (a + p - b) % p;
            (v != 0).then_some(v)
        })
    }
}

struct FractionFree;

impl Scalars for FractionFree {
    type V = BigInt;

    fn prepare_pivot(&self, _row: &mut Row<BigInt>, _col: usize) {}

    fn eliminate(&self, target: &Row<BigInt>, pivot: &Row<BigInt>, col: usize) -> Row<BigInt> {
        let tv = value_at(target, col);
        let pv = value_at(pivot, col);
        let g = tv.gcd(pv);
        let (a, b) = (pv / &g, tv / &g);
        let mut row = combine(target, pivot, |x, y| {
            let v = match (x, y) {
                (Some(x), Some(y)) => &a * x - &b * y,
                (Some(x), None) => &a * x,
                (None, Some(y)) => -(&b * y),
                (None, None) => unreachable!(),
            };
            (!v.is_zero()).then_some(v)
        });
        make_primitive(&mut row);
        row
    }
}

fn make_primitive(row: &mut Row<BigInt>) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for e in row.iter_mut() {
            e.1 = &e.1 / &g;
        }
    }
}

pub(super) fn rank_modular(rows: Vec<Row<u64>>, ncols: usize, p: u64) -> usize {
    rank_with(rows, ncols, &ModP(p))
}

pub(super) fn rank_integer(m: &SparseMatrix) -> usize {
    let rows = (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, (_, v)| {
                acc.lcm(&BigInt::from(*v.denom()))
            });
            let mut out: Row<BigInt> = row
                .iter()
                .map(|(c, v)| {
                    let num = BigInt::from(*v.numer()) * &lcm / BigInt::from(*v.denom());
                    (*c, num)
                })
                .collect();
            make_primitive(&mut out);
            out
        })
        .collect();
    rank_with(rows, m.cols(), &FractionFree)
}
