use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::convcode::ConvCode;
use crate::error::{Error, Result};
use crate::gf2::SparseBinMatrix;

/// Length of the shortest cycle of the Tanner graph, `None` for a forest.
pub fn girth(h: &SparseBinMatrix) -> Option<usize> {
    let n = h.cols();
    let cols = h.col_supports();
    let nodes = n + h.rows();
    let adj = |v: usize| -> &[usize] {
        if v < n {
            &cols[v]
        } else {
            h.row(v - n)
        }
    };
    let node = |v: usize, w: usize| if v < n { n + w } else { w };
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; nodes];
    let mut parent = vec![usize::MAX; nodes];
    for root in 0..nodes {
        let mut seen = vec![root];
        dist[root] = 0;
        let mut q = VecDeque::from([root]);
        'bfs: while let Some(u) = q.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] >= b {
                    break 'bfs;
                }
            }
            for &w in adj(u) {
                let w = node(u, w);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    seen.push(w);
                    q.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        for v in seen {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
    }
    best
}

/// Cycle counts by length with the per-bit normalization basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSpectrum {
    /// Even lengths from the girth up to the requested maximum.
    pub counts: BTreeMap<usize, u64>,
    /// Number of bit nodes the counts are spread over.
    pub basis: usize,
    pub girth: Option<usize>,
}

impl CycleSpectrum {
    /// Average number of cycles of length `len` per bit node.
    pub fn normalized(&self, len: usize) -> Ratio<u64> {
        Ratio::new(self.counts.get(&len).copied().unwrap_or(0), self.basis.max(1) as u64)
    }

    pub fn normalized_f64(&self, len: usize) -> f64 {
        let r = self.normalized(len);
        *r.numer() as f64 / *r.denom() as f64
    }

    /// CSV with header `length,count,normalized_avg`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("length,count,normalized_avg\n");
        for (&len, &count) in &self.counts {
            let _ = writeln!(s, "{len},{count},{:.6}", self.normalized_f64(len));
        }
        s
    }
}

/// Tanner graph as directed edges. Undirected edge `u` is numbered in
/// column-major order; `2u` runs bit→check and `2u + 1` check→bit.
struct EdgeGraph {
    succ: Vec<Vec<u32>>,
    edge_col: Vec<usize>,
}

impl EdgeGraph {
    fn new(h: &SparseBinMatrix) -> Self {
        let cols = h.col_supports();
        let mut edge_col = Vec::new();
        let mut by_col: Vec<Vec<u32>> = vec![Vec::new(); h.cols()];
        let mut by_row: Vec<Vec<u32>> = vec![Vec::new(); h.rows()];
        let mut ends = Vec::new();
        for (i, col) in cols.iter().enumerate() {
            for &j in col {
                let u = edge_col.len() as u32;
                edge_col.push(i);
                by_col[i].push(u);
                by_row[j].push(u);
                ends.push((j, i));
            }
        }
        let mut succ = Vec::with_capacity(2 * ends.len());
        for (u, &(j, i)) in ends.iter().enumerate() {
            let u = u as u32;
            // bit i -> check j continues to check j -> other bits
            succ.push(by_row[j].iter().filter(|&&x| x != u).map(|&x| 2 * x + 1).collect());
            // check j -> bit i continues to bit i -> other checks
            succ.push(by_col[i].iter().filter(|&&x| x != u).map(|&x| 2 * x).collect());
        }
        EdgeGraph { succ, edge_col }
    }

    /// Closed non-backtracking walks of each length `<= max_len` that start
    /// and end on directed edge `start` and use only undirected edges whose
    /// index is at least that of `start`.
    fn rooted_walks(&self, start: usize, max_len: usize, cur: &mut Vec<u64>, next: &mut Vec<u64>) -> Vec<u64> {
        let floor = (start / 2) as u32;
        let mut out = vec![0u64; max_len + 1];
        let mut frontier = vec![start as u32];
        cur[start] = 1;
        let mut touched = Vec::new();
        for len in 1..=max_len {
            for &e in &frontier {
                let w = cur[e as usize];
                for &f in &self.succ[e as usize] {
                    if f / 2 < floor {
                        continue;
                    }
                    if next[f as usize] == 0 {
                        touched.push(f);
                    }
                    next[f as usize] += w;
                }
                cur[e as usize] = 0;
            }
            out[len] = next[start];
            std::mem::swap(cur, next);
            frontier = std::mem::take(&mut touched);
        }
        for &e in &frontier {
            cur[e as usize] = 0;
        }
        out
    }

    /// Cycles whose lowest-indexed edge lies in `[lo, hi)`, by length.
    fn count_cycles(&self, lo: usize, hi: usize, max_len: usize) -> Vec<u64> {
        let total = self.succ.len();
        let starts: Vec<usize> = (2 * lo..2 * hi).collect();
        let sums = starts
            .par_chunks(64)
            .map(|chunk| {
                let mut cur = vec![0u64; total];
                let mut next = vec![0u64; total];
                let mut acc = vec![0u64; max_len + 1];
                for &s in chunk {
                    for (a, w) in acc.iter_mut().zip(self.rooted_walks(s, max_len, &mut cur, &mut next)) {
                        *a += w;
                    }
                }
                acc
            })
            .reduce(
                || vec![0u64; max_len + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        // Each cycle is met once per direction at its lowest edge.
        sums.into_iter().map(|x| x / 2).collect()
    }
}

fn spectrum_from_counts(counts: Vec<u64>, max_len: usize, basis: usize) -> Result<CycleSpectrum> {
    let girth = (4..=max_len).step_by(2).find(|&l| counts[l] > 0);
    if let Some(g) = girth {
        if max_len >= 2 * g {
            return Err(Error::BeyondTwiceGirth { max_len, girth: g });
        }
    }
    let counts = match girth {
        Some(g) => (g..=max_len).step_by(2).map(|l| (l, counts[l])).collect(),
        None => BTreeMap::new(),
    };
    Ok(CycleSpectrum { counts, basis, girth })
}

/// Exact cycle counts up to `max_len` by traces of the non-backtracking edge
/// matrix, normalized per bit node. Requires `max_len < 2 * girth`.
pub fn cycle_spectrum(h: &SparseBinMatrix, max_len: usize) -> Result<CycleSpectrum> {
    if let Some(g) = girth(h) {
        if max_len >= 2 * g {
            return Err(Error::BeyondTwiceGirth { max_len, girth: g });
        }
    }
    let g = EdgeGraph::new(h);
    let counts = g.count_cycles(0, h.nnz(), max_len);
    spectrum_from_counts(counts, max_len, h.cols())
}

/// Cycles per period of a convolutional code, normalized per bit node
/// (`T_s c` bits per period). Counts the cycles whose leftmost bit lies in
/// the first period of a window long enough to contain any cycle of length
/// up to `max_len` entirely.
pub fn conv_cycle_spectrum(code: &ConvCode, max_len: usize) -> Result<CycleSpectrum> {
    let t_s = code.period();
    // Consecutive bits on a cycle share a check, so they are at most m_s
    // blocks apart; a cycle with max_len/2 bits spans at most this many blocks.
    let span = (max_len / 4) * code.m_s() + 1;
    let window = code.materialize_window(0, t_s + span)?;
    let period_bits = t_s * code.c();
    let g = EdgeGraph::new(&window);
    let hi = g.edge_col.partition_point(|&c| c < period_bits);
    let counts = g.count_cycles(0, hi, max_len);
    spectrum_from_counts(counts, max_len, period_bits)
}
