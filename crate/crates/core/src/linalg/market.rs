//! MatrixMarket coordinate format with integer entries.

use std::io::{self, BufRead, Write};

use super::{LinalgError, Rational, SparseMatrix};

const HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

pub fn write_matrix_market<W: Write>(m: &SparseMatrix, mut w: W) -> io::Result<()> {
    if !m.is_integral() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            LinalgError::NonIntegral,
        ));
    }
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (r, c, v) in m.triplets() {
        writeln!(w, "{} {} {}", r + 1, c + 1, v.numer())?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(r: R) -> Result<SparseMatrix, LinalgError> {
    let err = |line: usize, message: &str| LinalgError::Parse {
        line,
        message: message.to_string(),
    };
    let mut lines = r.lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        _ => return Err(err(1, "missing header")),
    };
    let words: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if words.len() != 5
        || words[0] != "%%matrixmarket"
        || words[1] != "matrix"
        || words[2] != "coordinate"
        || words[3] != "integer"
        || words[4] != "general"
    {
        return Err(err(1, "expected a general integer coordinate matrix"));
    }
    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.map_err(|e| err(lineno, &e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                let nums: Result<Vec<usize>, _> = fields.iter().map(|f| f.parse()).collect();
                match nums.as_deref() {
                    Ok([r, c, n]) => size = Some((*r, *c, *n)),
                    _ => return Err(err(lineno, "expected `rows cols entries`")),
                }
            }
            Some((rows, cols, _)) => {
                let [r, c, v] = fields[..] else {
                    return Err(err(lineno, "expected `row col value`"));
                };
                let r: usize = r.parse().map_err(|_| err(lineno, "bad row index"))?;
                let c: usize = c.parse().map_err(|_| err(lineno, "bad column index"))?;
                let v: i64 = v.parse().map_err(|_| err(lineno, "bad integer value"))?;
                if r == 0 || c == 0 || r > rows || c > cols {
                    return Err(err(lineno, "index out of range"));
                }
                entries.push((r - 1, c - 1, Rational::from_integer(v)));
            }
        }
    }
    let (rows, cols, count) = size.ok_or_else(|| err(1, "missing size line"))?;
    if entries.len() != count {
        return Err(err(
            0,
            &format!("expected {count} entries, found {}", entries.len()),
        ));
    }
    SparseMatrix::from_triplets(rows, cols, entries)
}
