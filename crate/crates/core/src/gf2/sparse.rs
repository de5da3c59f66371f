use crate::error::{Error, Result};

/// Binary matrix stored as sorted column supports per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseBinMatrix {
    rows: usize,
    cols: usize,
    support: Vec<Vec<usize>>,
}

/// Row and column degree multisets of a matrix, both sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub col_degrees: Vec<usize>,
    pub row_degrees: Vec<usize>,
    /// `(J, K)` when every column has weight `J` and every row weight `K`.
    pub regular: Option<(usize, usize)>,
}

impl DegreeProfile {
    pub fn from_degrees(mut col_degrees: Vec<usize>, mut row_degrees: Vec<usize>) -> Self {
        col_degrees.sort_unstable();
        row_degrees.sort_unstable();
        let uniform = |v: &[usize]| match v {
            [] => None,
            [first, ..] if v.iter().all(|d| d == first) => Some(*first),
            _ => None,
        };
        let regular = match (uniform(&col_degrees), uniform(&row_degrees)) {
            (Some(j), Some(k)) => Some((j, k)),
            _ => None,
        };
        DegreeProfile {
            col_degrees,
            row_degrees,
            regular,
        }
    }
}

impl SparseBinMatrix {
    /// Builds a matrix from per-row supports, which must be strictly increasing and in range.
    pub fn new(rows: usize, cols: usize, support: Vec<Vec<usize>>) -> Result<Self> {
        if support.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                actual: support.len(),
            });
        }
        for (j, row) in support.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "row {j} support is not strictly increasing"
                )));
            }
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(Error::InvalidMatrix(format!(
                        "row {j} has column {last} >= {cols}"
                    )));
                }
            }
        }
        Ok(SparseBinMatrix {
            rows,
            cols,
            support,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBinMatrix {
            rows,
            cols,
            support: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseBinMatrix {
            rows: n,
            cols: n,
            support: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from `(row, col)` positions. Repeated positions are an error.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut support = vec![Vec::new(); rows];
        for (j, i) in entries {
            if j >= rows || i >= cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({j}, {i}) outside {rows}x{cols}"
                )));
            }
            support[j].push(i);
        }
        for (j, row) in support.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatrix(format!("duplicate entry in row {j}")));
            }
        }
        Ok(SparseBinMatrix {
            rows,
            cols,
            support,
        })
    }

    /// Like [`from_entries`](Self::from_entries) but repeated positions add over GF(2).
    pub fn from_entries_xor<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut support = vec![Vec::new(); rows];
        for (j, i) in entries {
            if j >= rows || i >= cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({j}, {i}) outside {rows}x{cols}"
                )));
            }
            support[j].push(i);
        }
        for row in support.iter_mut() {
            row.sort_unstable();
            let mut out: Vec<usize> = Vec::with_capacity(row.len());
            for &i in row.iter() {
                if out.last() == Some(&i) {
                    out.pop();
                } else {
                    out.push(i);
                }
            }
            *row = out;
        }
        Ok(SparseBinMatrix {
            rows,
            cols,
            support,
        })
    }

    /// Dense 0/1 rows; any nonzero byte counts as a one.
    pub fn from_dense<R: AsRef<[u8]>>(dense: &[R]) -> Result<Self> {
        let cols = dense.first().map_or(0, |r| r.as_ref().len());
        let mut support = Vec::with_capacity(dense.len());
        for row in dense {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            support.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(i, _)| i)
                    .collect(),
            );
        }
        Ok(SparseBinMatrix {
            rows: dense.len(),
            cols,
            support,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.support.iter().map(Vec::len).sum()
    }

    pub fn row(&self, j: usize) -> &[usize] {
        &self.support[j]
    }

    pub fn support(&self) -> &[Vec<usize>] {
        &self.support
    }

    pub fn get(&self, j: usize, i: usize) -> bool {
        self.support[j].binary_search(&i).is_ok()
    }

    /// All ones in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.support
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().map(move |&i| (j, i)))
    }

    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (j, i) in self.entries() {
            cols[i].push(j);
        }
        cols
    }

    pub fn transpose(&self) -> Self {
        SparseBinMatrix {
            rows: self.cols,
            cols: self.rows,
            support: self.col_supports(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.support
            .iter()
            .map(|row| {
                let mut d = vec![0u8; self.cols];
                for &i in row {
                    d[i] = 1;
                }
                d
            })
            .collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.support.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for (_, i) in self.entries() {
            w[i] += 1;
        }
        w
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile::from_degrees(self.col_weights(), self.row_weights())
    }

    /// Syndrome `M vᵀ` over GF(2).
    pub fn syndrome(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        Ok(self
            .support
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &i| acc ^ (v[i] & 1)))
            .collect())
    }

    pub fn is_in_nullspace(&self, v: &[u8]) -> Result<bool> {
        Ok(self.syndrome(v)?.iter().all(|&s| s == 0))
    }

    /// Removes rows without any ones.
    pub fn drop_zero_rows(&self) -> Self {
        let support: Vec<Vec<usize>> = self
            .support
            .iter()
            .filter(|r| !r.is_empty())
            .cloned()
            .collect();
        SparseBinMatrix {
            rows: support.len(),
            cols: self.cols,
            support,
        }
    }

    /// Keeps the given rows in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        SparseBinMatrix {
            rows: rows.len(),
            cols: self.cols,
            support: rows.iter().map(|&j| self.support[j].clone()).collect(),
        }
    }

    /// Keeps the given columns, renumbered in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            map[old] = new;
        }
        let support = self
            .support
            .iter()
            .map(|row| {
                let mut r: Vec<usize> = row
                    .iter()
                    .filter_map(|&i| (map[i] != usize::MAX).then_some(map[i]))
                    .collect();
                r.sort_unstable();
                r
            })
            .collect();
        SparseBinMatrix {
            rows: self.rows,
            cols: cols.len(),
            support,
        }
    }

    /// Entrywise integer sum; fails if supports overlap.
    pub fn disjoint_sum(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidMatrix("shape mismatch in sum".into()));
        }
        Self::from_entries(self.rows, self.cols, self.entries().chain(other.entries()))
    }

    /// Sorted row supports, useful for comparing matrices up to row order.
    pub fn sorted_rows(&self) -> Vec<Vec<usize>> {
        let mut r = self.support.clone();
        r.sort();
        r
    }

    pub fn vstack(blocks: &[&SparseBinMatrix]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut support = Vec::new();
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: b.cols,
                });
            }
            support.extend(b.support.iter().cloned());
        }
        Ok(SparseBinMatrix {
            rows: support.len(),
            cols,
            support,
        })
    }
}
