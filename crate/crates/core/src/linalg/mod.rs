//! Exact sparse matrices with rank over the rationals and over prime fields.

mod elim;
mod market;
mod prime;

pub use market::{read_matrix_market, write_matrix_market};
pub use prime::{is_prime, random_prime_31};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field mismatch: {0:?} vs {1:?}")]
    FieldMismatch(Field, Field),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("matrix has non-integral entries")]
    NonIntegral,
    #[error("MatrixMarket line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// Row-major sparse matrix. Rows hold `(column, value)` pairs sorted by
/// column with no zeros; over `Prime(p)` values are integers in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            field: Field::Rational,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, row) in m.data.iter_mut().enumerate() {
            row.push((i, Rational::one()));
        }
        m
    }

    /// Sums duplicate positions and drops zeros.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut data: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::Dimension(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            data[r].push((c, v));
        }
        for row in &mut data {
            *row = normalize_row(std::mem::take(row))?;
        }
        Ok(SparseMatrix {
            rows,
            cols,
            field: Field::Rational,
            data,
        })
    }

    pub fn from_int_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self, LinalgError> {
        Self::from_triplets(
            rows,
            cols,
            entries
                .into_iter()
                .map(|(r, c, v)| (r, c, Rational::from_integer(v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.data[r][i].1,
            Err(_) => Rational::zero(),
        }
    }

    /// Entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn is_integral(&self) -> bool {
        self.triplets().all(|(_, _, v)| v.is_integer())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            data[c].push((r, v));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    pub fn scale(&self, k: i64) -> Result<SparseMatrix, LinalgError> {
        let k = Rational::from_integer(k);
        let mut out = self.clone();
        for row in &mut out.data {
            for e in row.iter_mut() {
                e.1 = e.1.checked_mul(&k).ok_or(LinalgError::Overflow)?;
            }
            row.retain(|e| !e.1.is_zero());
        }
        out.reduce_field()
    }

    /// The same entries reduced modulo `p`. Fails if `p` divides a
    /// denominator.
    pub fn to_prime_field(&self, p: u64) -> Result<SparseMatrix, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        let mut out = SparseMatrix {
            field: Field::Prime(p),
            ..self.clone()
        };
        out = out.reduce_field()?;
        Ok(out)
    }

    fn reduce_field(mut self) -> Result<SparseMatrix, LinalgError> {
        if let Field::Prime(p) = self.field {
            for row in &mut self.data {
                for e in row.iter_mut() {
                    let v = prime::reduce(&e.1, p).ok_or(LinalgError::NonIntegral)?;
                    e.1 = Rational::from_integer(v as i64);
                }
                row.retain(|e| !e.1.is_zero());
            }
        }
        Ok(self)
    }

    /// Exact product `self * other`.
    pub fn multiply(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: Vec<Rational> = vec![Rational::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for row in &self.data {
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    if acc[c].is_zero() {
                        touched.push(c);
                    }
                    let t = a.checked_mul(&b).ok_or(LinalgError::Overflow)?;
                    acc[c] = acc[c].checked_add(&t).ok_or(LinalgError::Overflow)?;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::new();
            for &c in &touched {
                let v = std::mem::replace(&mut acc[c], Rational::zero());
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            data,
        }
        .reduce_field()
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Dimension(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        let mut data = Vec::with_capacity(self.rows);
        for (a, b) in self.data.iter().zip(&other.data) {
            data.push(normalize_row(a.iter().chain(b).copied().collect())?);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
        .reduce_field()
    }

    /// Block matrix from a grid of optional blocks; `None` is a zero block.
    /// Row heights and column widths are given explicitly.
    pub fn block(
        heights: &[usize],
        widths: &[usize],
        blocks: &[Vec<Option<&SparseMatrix>>],
    ) -> Result<SparseMatrix, LinalgError> {
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut entries = Vec::new();
        let mut r0 = 0;
        for (bi, &h) in heights.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &w) in widths.iter().enumerate() {
                if let Some(m) = blocks[bi][bj] {
                    if (m.rows, m.cols) != (h, w) {
                        return Err(LinalgError::Dimension(format!(
                            "block ({bi},{bj}) is {}x{}, expected {h}x{w}",
                            m.rows, m.cols
                        )));
                    }
                    entries.extend(m.triplets().map(|(r, c, v)| (r0 + r, c0 + c, v)));
                }
                c0 += w;
            }
            r0 += h;
        }
        SparseMatrix::from_triplets(rows, cols, entries)
    }
}

fn normalize_row(mut row: Vec<(usize, Rational)>) -> Result<Vec<(usize, Rational)>, LinalgError> {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => {
                last.1 = last.1.checked_add(&v).ok_or(LinalgError::Overflow)?;
            }
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankStrategy {
    Rational,
    Modular(u64),
    /// `primes` random 31-bit primes drawn from `seed`; the common answer is
    /// accepted only if all agree, otherwise the rational rank is computed.
    Consensus {
        primes: usize,
        seed: u64,
    },
}

impl RankStrategy {
    pub fn consensus(seed: u64) -> Self {
        RankStrategy::Consensus { primes: 3, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// `(prime, rank mod prime)` for every modular run.
    pub modular: Vec<(u64, usize)>,
    pub rational: Option<usize>,
    pub escalated: bool,
}

pub fn rank(m: &SparseMatrix, strategy: RankStrategy) -> Result<usize, LinalgError> {
    rank_report(m, strategy).map(|r| r.rank)
}

pub fn rank_report(m: &SparseMatrix, strategy: RankStrategy) -> Result<RankReport, LinalgError> {
    match strategy {
        RankStrategy::Rational => {
            let r = rational_rank(m)?;
            Ok(RankReport {
                rank: r,
                modular: Vec::new(),
                rational: Some(r),
                escalated: false,
            })
        }
        RankStrategy::Modular(p) => {
            let r = modular_rank(m, p)?;
            Ok(RankReport {
                rank: r,
                modular: vec![(p, r)],
                rational: None,
                escalated: false,
            })
        }
        RankStrategy::Consensus { primes, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut modular = Vec::with_capacity(primes);
            while modular.len() < primes {
                let p = random_prime_31(&mut rng);
                match modular_rank(m, p) {
                    Ok(r) => modular.push((p, r)),
                    // p divides a denominator; draw another
                    Err(LinalgError::NonIntegral) => continue,
                    Err(e) => return Err(e),
                }
            }
            let first = modular.first().map(|x| x.1);
            if primes > 0 && modular.iter().all(|x| Some(x.1) == first) {
                return Ok(RankReport {
                    rank: first.unwrap_or(0),
                    modular,
                    rational: None,
                    escalated: false,
                });
            }
            let r = rational_rank(m)?;
            Ok(RankReport {
                rank: r,
                modular,
                rational: Some(r),
                escalated: primes > 0,
            })
        }
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn rational_rank(m: &SparseMatrix) -> Result<usize, LinalgError> {
    if let Field::Prime(p) = m.field {
        return modular_rank(m, p);
    }
    Ok(elim::rank_integer(m))
}

/// Rank over the prime field of order `p`.
pub fn modular_rank(m: &SparseMatrix, p: u64) -> Result<usize, LinalgError> {
    if !is_prime(p) || p >= 1 << 32 {
        return Err(LinalgError::NotPrime(p));
    }
    if let Field::Prime(q) = m.field {
        if q != p {
            return Err(LinalgError::FieldMismatch(m.field, Field::Prime(p)));
        }
    }
    let mut rows = Vec::with_capacity(m.rows);
    for row in &m.data {
        let mut out = Vec::with_capacity(row.len());
        for (c, v) in row {
            let x = prime::reduce(v, p).ok_or(LinalgError::NonIntegral)?;
            if x != 0 {
                out.push((*c, x));
            }
        }
        rows.push(out);
    }
    Ok(elim::rank_modular(rows, m.cols, p))
}
