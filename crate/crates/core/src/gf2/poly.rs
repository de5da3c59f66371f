use std::fmt;
use std::str::FromStr;

use super::SparseBinMatrix;
use crate::error::{parse_err, Error, Result};

/// Matrix of binary polynomials, each stored as a sorted set of exponents.
///
/// With a modulus `r` the entries live in `F2[X]/(X^r - 1)`; without one they
/// are plain polynomials in the delay operator `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
    modulus: Option<u32>,
}

impl PolyMatrix {
    /// `entries` is row-major, one exponent list per cell. Lists are sorted and
    /// deduplicated; a repeated exponent is rejected since it would cancel.
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<Vec<u32>>,
        modulus: Option<u32>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if modulus == Some(0) {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut entries = entries;
        for cell in entries.iter_mut() {
            cell.sort_unstable();
            if cell.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatrix("repeated exponent in a cell".into()));
            }
            if let (Some(r), Some(&e)) = (modulus, cell.last()) {
                if e >= r {
                    return Err(Error::ExponentOutOfRange {
                        exponent: e,
                        modulus: r,
                    });
                }
            }
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
            modulus,
        })
    }

    /// Matrix whose every cell is the single monomial given by `exps`.
    pub fn from_monomials<R: AsRef<[u32]>>(exps: &[R], modulus: Option<u32>) -> Result<Self> {
        let rows = exps.len();
        let cols = exps.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows * cols);
        for row in exps {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            entries.extend(row.iter().map(|&e| vec![e]));
        }
        Self::new(rows, cols, entries, modulus)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    pub fn entry(&self, j: usize, i: usize) -> &[u32] {
        &self.entries[j * self.cols + i]
    }

    pub fn row_exponents(&self, j: usize) -> impl Iterator<Item = u32> + '_ {
        (0..self.cols).flat_map(move |i| self.entry(j, i).iter().copied())
    }

    /// Largest exponent anywhere, or `None` for the zero matrix.
    pub fn max_exponent(&self) -> Option<u32> {
        self.entries.iter().filter_map(|c| c.last().copied()).max()
    }

    /// Number of monomials in column `i`.
    pub fn column_weight(&self, i: usize) -> usize {
        (0..self.rows).map(|j| self.entry(j, i).len()).sum()
    }

    /// Same exponents under a different (or no) modulus.
    pub fn with_modulus(&self, modulus: Option<u32>) -> Result<Self> {
        Self::new(self.rows, self.cols, self.entries.clone(), modulus)
    }

    /// Replaces each monomial `X^s` by the `r×r` circulant `I_s` with
    /// `[I_s]_{j,i} = 1` iff `i ≡ j - s (mod r)`, so that `I_s` acts on a
    /// coefficient vector as multiplication by `X^s`.
    pub fn expand(&self) -> Result<SparseBinMatrix> {
        let r = self.modulus.ok_or(Error::MissingModulus)? as usize;
        let mut support = vec![Vec::new(); self.rows * r];
        for bj in 0..self.rows {
            for bi in 0..self.cols {
                for &s in self.entry(bj, bi) {
                    let s = s as usize;
                    for j in 0..r {
                        support[bj * r + j].push(bi * r + (j + r - s) % r);
                    }
                }
            }
        }
        for row in support.iter_mut() {
            row.sort_unstable();
        }
        SparseBinMatrix::new(self.rows * r, self.cols * r, support)
    }
}

/// Header `rows cols modulus|-`, then one line per row with cells `-` or
/// comma-separated exponents.
impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            Some(r) => writeln!(f, "{} {} {}", self.rows, self.cols, r)?,
            None => writeln!(f, "{} {} -", self.rows, self.cols)?,
        }
        for j in 0..self.rows {
            let cells: Vec<String> = (0..self.cols)
                .map(|i| {
                    let e = self.entry(j, i);
                    if e.is_empty() {
                        "-".to_string()
                    } else {
                        e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                    }
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PolyMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(parse_err(hl, "header must be `rows cols modulus`"));
        }
        let rows: usize = h[0].parse().map_err(|_| parse_err(hl, "bad row count"))?;
        let cols: usize = h[1].parse().map_err(|_| parse_err(hl, "bad column count"))?;
        let modulus = match h[2] {
            "-" => None,
            m => Some(m.parse::<u32>().map_err(|_| parse_err(hl, "bad modulus"))?),
        };
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl, format!("expected {rows} rows")))?;
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != cols {
                return Err(parse_err(ln, format!("expected {cols} cells")));
            }
            for cell in cells {
                if cell == "-" {
                    entries.push(Vec::new());
                    continue;
                }
                let exps = cell
                    .split(',')
                    .map(|e| e.parse::<u32>().map_err(|_| parse_err(ln, "bad exponent")))
                    .collect::<Result<Vec<_>>>()?;
                entries.push(exps);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content"));
        }
        Self::new(rows, cols, entries, modulus)
    }
}
