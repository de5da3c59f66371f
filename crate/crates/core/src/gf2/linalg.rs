use super::SparseBinMatrix;

/// Dense bit-packed matrix used for elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    data: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn from_sparse(m: &SparseBinMatrix) -> Self {
        let words = m.cols().div_ceil(64);
        let data = m
            .support()
            .iter()
            .map(|row| {
                let mut w = vec![0u64; words];
                for &i in row {
                    w[i / 64] |= 1 << (i % 64);
                }
                w
            })
            .collect();
        BitMatrix {
            cols: m.cols(),
            words,
            data,
        }
    }

    fn bit(&self, r: usize, c: usize) -> bool {
        self.data[r][c / 64] >> (c % 64) & 1 == 1
    }

    /// Reduces in place to reduced row echelon form and returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.data.len() {
                break;
            }
            let Some(p) = (row..self.data.len()).find(|&r| self.bit(r, c)) else {
                continue;
            };
            self.data.swap(row, p);
            let pivot = self.data[row].clone();
            for r in 0..self.data.len() {
                if r != row && self.bit(r, c) {
                    for (a, b) in self.data[r].iter_mut().zip(&pivot) {
                        *a ^= *b;
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        self.data.truncate(row);
        pivots
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.bit(r, c) as u8).collect()
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn words(&self) -> usize {
        self.words
    }
}

/// Rank over GF(2).
pub fn gf2_rank(m: &SparseBinMatrix) -> usize {
    BitMatrix::from_sparse(m).rref().len()
}

/// A basis of the right nullspace `{v : M vᵀ = 0}`, one vector per free column.
pub fn nullspace_basis(m: &SparseBinMatrix) -> Vec<Vec<u8>> {
    let mut b = BitMatrix::from_sparse(m);
    let pivots = b.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u8; m.cols()];
        v[free] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            if b.bit(r, free) {
                v[p] = 1;
            }
        }
        basis.push(v);
    }
    basis
}

/// True iff the two matrices have the same row space (hence the same code).
pub fn row_space_equal(a: &SparseBinMatrix, b: &SparseBinMatrix) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    let ra = gf2_rank(a);
    if ra != gf2_rank(b) {
        return false;
    }
    let both = SparseBinMatrix::vstack(&[a, b]).expect("same width");
    gf2_rank(&both) == ra
}
