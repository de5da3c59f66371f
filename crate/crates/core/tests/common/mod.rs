//! Independent reference implementations used by the integration tests.
//! Everything here is deliberately naive: dense vectors, brute force.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ldpc_conv::convcode::ConvCode;
use ldpc_conv::SparseBinMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank over GF(2) by textbook elimination on byte rows.
pub fn dense_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] == 1 {
                for k in 0..cols {
                    rows[r][k] ^= rows[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn random_dense(rows: usize, cols: usize, density: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_bool(density) as u8).collect())
        .collect()
}

pub fn syndrome_dense(h: &[Vec<u8>], v: &[u8]) -> Vec<u8> {
    h.iter()
        .map(|row| row.iter().zip(v).fold(0, |a, (x, y)| a ^ (x & y)))
        .collect()
}

/// All codewords by trying every word; only for short codes.
pub fn brute_codewords(h: &SparseBinMatrix) -> Vec<Vec<u8>> {
    let n = h.cols();
    assert!(n <= 22, "brute force over 2^{n} words");
    let dense = h.to_dense();
    (0u64..1 << n)
        .map(|x| (0..n).map(|i| ((x >> i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|v| syndrome_dense(&dense, v).iter().all(|&s| s == 0))
        .collect()
}

/// Maximum-likelihood codeword for BPSK LLRs (positive favours 0).
pub fn ml_decode(codewords: &[Vec<u8>], llr: &[f64]) -> Vec<u8> {
    let score = |c: &Vec<u8>| -> f64 { c.iter().zip(llr).map(|(&b, &l)| if b == 0 { l } else { -l }).sum() };
    codewords
        .iter()
        .max_by(|a, b| score(a).total_cmp(&score(b)))
        .cloned()
        .expect("at least the zero codeword")
}

/// Simple cycles of the Tanner graph by exhaustive DFS, keyed by length.
/// Each cycle is found from its smallest node in both directions.
pub fn dfs_cycles(h: &SparseBinMatrix, max_len: usize) -> BTreeMap<usize, u64> {
    let n = h.cols();
    let total = n + h.rows();
    let mut adj = vec![Vec::new(); total];
    for (j, i) in h.entries() {
        adj[i].push(n + j);
        adj[n + j].push(i);
    }
    let mut found: BTreeMap<usize, u64> = BTreeMap::new();
    fn walk(
        adj: &[Vec<usize>],
        start: usize,
        u: usize,
        depth: usize,
        max_len: usize,
        on_path: &mut [bool],
        found: &mut BTreeMap<usize, u64>,
    ) {
        for &w in &adj[u] {
            if w == start && depth >= 3 {
                *found.entry(depth + 1).or_default() += 1;
            } else if w > start && !on_path[w] && depth + 1 < max_len {
                on_path[w] = true;
                walk(adj, start, w, depth + 1, max_len, on_path, found);
                on_path[w] = false;
            }
        }
    }
    let mut on_path = vec![false; total];
    for s in 0..total {
        on_path[s] = true;
        walk(&adj, s, s, 0, max_len, &mut on_path, &mut found);
        on_path[s] = false;
    }
    found.into_iter().map(|(l, c)| (l, c / 2)).collect()
}

/// Terminated window assembled block by block from `H_i(t)`: row block `t`
/// in `0..n_blocks + m_s` and column block `k` in `0..n_blocks` hold
/// `H_{t-k}(t)`. Zero rows are kept.
pub fn assemble_window(code: &ConvCode, n_blocks: usize) -> Vec<Vec<u8>> {
    let (c, p) = (code.c(), code.c() - code.b());
    let mut rows = vec![vec![0u8; n_blocks * c]; (n_blocks + code.m_s()) * p];
    for t in 0..n_blocks + code.m_s() {
        for k in 0..n_blocks {
            if k > t || t - k > code.m_s() {
                continue;
            }
            let blk = code.block(t - k, t);
            for (r, col) in blk.entries() {
                rows[t * p + r][k * c + col] = 1;
            }
        }
    }
    rows
}

/// `x(X) · X^e` summed over `exps`, modulo `X^r - 1`, on coefficient vectors.
pub fn poly_mul_mod(exps: &[u32], x: &[u8], r: usize) -> Vec<u8> {
    let mut out = vec![0u8; r];
    for &e in exps {
        for (k, &b) in x.iter().enumerate() {
            out[(k + e as usize) % r] ^= b;
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse random parity-check matrix with every column nonempty.
pub fn random_sparse(rows: usize, cols: usize, col_weight: usize, rng: &mut ChaCha8Rng) -> SparseBinMatrix {
    let mut entries = Vec::new();
    for i in 0..cols {
        let mut picked: Vec<usize> = Vec::new();
        while picked.len() < col_weight.min(rows) {
            let j = rng.random_range(0..rows);
            if !picked.contains(&j) {
                picked.push(j);
            }
        }
        entries.extend(picked.into_iter().map(|j| (j, i)));
    }
    SparseBinMatrix::from_entries(rows, cols, entries).unwrap()
}
