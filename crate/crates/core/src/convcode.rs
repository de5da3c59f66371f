//! Periodically time-varying convolutional codes given by the sub-blocks `H_i(t)`.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gf2::{gf2_rank, BitMatrix, PolyMatrix, SparseBinMatrix};

/// Convolutional code with period `T_s`, blocks of `c` symbols carrying `b`
/// information symbols, and syndrome former memory `m_s`.
///
/// Row block `t` is stored as a band of `c - b` rows whose column
/// `i * c + k` stands for column `k` of `H_i(t mod T_s)`, i.e. global column
/// `(t - i) * c + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCode {
    c: usize,
    b: usize,
    m_s: usize,
    bands: Vec<SparseBinMatrix>,
}

/// Summary parameters of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamsReport {
    pub rate: Ratio<usize>,
    pub m_s: usize,
    pub nu_s: usize,
    pub period: usize,
}

impl fmt::Display for ParamsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R={}/{} m_s={} nu_s={} T_s={}",
            self.rate.numer(),
            self.rate.denom(),
            self.m_s,
            self.nu_s,
            self.period
        )
    }
}

impl ConvCode {
    /// Builds a code from one band per time step (see the type docs). The
    /// memory is trimmed to the largest lag that actually carries a one.
    pub fn from_bands(c: usize, b: usize, bands: Vec<SparseBinMatrix>) -> Result<Self> {
        if c == 0 || b > c {
            return Err(Error::InvalidArgument(format!("need 0 <= b <= c and c > 0, got b={b} c={c}")));
        }
        if bands.is_empty() {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        let width = bands[0].cols();
        if width == 0 || width % c != 0 {
            return Err(Error::InvalidArgument("band width must be a positive multiple of c".into()));
        }
        for band in &bands {
            if band.rows() != c - b || band.cols() != width {
                return Err(Error::InvalidMatrix(format!(
                    "band is {}x{}, expected {}x{}",
                    band.rows(),
                    band.cols(),
                    c - b,
                    width
                )));
            }
        }
        let m_s = bands
            .iter()
            .flat_map(|band| band.entries().map(|(_, col)| col / c))
            .max()
            .unwrap_or(0);
        let keep = (m_s + 1) * c;
        let bands = if keep == width {
            bands
        } else {
            let cols: Vec<usize> = (0..keep).collect();
            bands.iter().map(|band| band.select_cols(&cols)).collect()
        };
        Ok(ConvCode { c, b, m_s, bands })
    }

    /// `blocks[t][i]` is `H_i(t)`; every block is `(c - b) × c`.
    pub fn from_blocks(c: usize, b: usize, blocks: &[Vec<SparseBinMatrix>]) -> Result<Self> {
        let mut bands = Vec::with_capacity(blocks.len());
        for row in blocks {
            let mut entries = Vec::new();
            for (i, h) in row.iter().enumerate() {
                if h.rows() != c - b || h.cols() != c {
                    return Err(Error::InvalidMatrix(format!("H_{i} has shape {}x{}", h.rows(), h.cols())));
                }
                entries.extend(h.entries().map(|(r, k)| (r, i * c + k)));
            }
            let width = row.len().max(1) * c;
            bands.push(SparseBinMatrix::from_entries(c - b, width, entries)?);
        }
        Self::from_bands(c, b, bands)
    }

    /// Time-invariant code with `H_i = parts[i]`.
    pub fn time_invariant(parts: &[SparseBinMatrix]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("at least one part is required".into()))?;
        let (m, n) = (first.rows(), first.cols());
        if m > n {
            return Err(Error::InvalidArgument(format!("{m} checks per block exceed {n} symbols")));
        }
        Self::from_blocks(n, n - m, &[parts.to_vec()])
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Checks per block, `c - b`.
    pub fn checks_per_block(&self) -> usize {
        self.c - self.b
    }

    pub fn m_s(&self) -> usize {
        self.m_s
    }

    pub fn period(&self) -> usize {
        self.bands.len()
    }

    /// Constraint length `(m_s + 1) c`.
    pub fn nu_s(&self) -> usize {
        (self.m_s + 1) * self.c
    }

    /// Design rate `b / c`.
    pub fn rate(&self) -> Ratio<usize> {
        Ratio::new(self.b, self.c)
    }

    pub fn is_time_invariant(&self) -> bool {
        self.bands.len() == 1
    }

    /// Band of row block `t`.
    pub fn band(&self, t: usize) -> &SparseBinMatrix {
        &self.bands[t % self.bands.len()]
    }

    /// `H_i(t)` as a `(c - b) × c` matrix.
    pub fn block(&self, i: usize, t: usize) -> SparseBinMatrix {
        let band = self.band(t);
        let lo = i * self.c;
        let support = (0..band.rows())
            .map(|r| {
                band.row(r)
                    .iter()
                    .filter(|&&k| k >= lo && k < lo + self.c)
                    .map(|&k| k - lo)
                    .collect()
            })
            .collect();
        SparseBinMatrix::new(band.rows(), self.c, support).expect("sub-block of a valid band")
    }

    pub fn params_report(&self) -> ParamsReport {
        ParamsReport {
            rate: self.rate(),
            m_s: self.m_s,
            nu_s: self.nu_s(),
            period: self.period(),
        }
    }

    /// Columns of row `r` in row block `t`, as global column indices; entries
    /// at negative time are skipped.
    pub fn row_columns(&self, t: usize, r: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.c;
        self.band(t).row(r).iter().filter_map(move |&k| {
            let lag = k / c;
            (lag <= t).then(|| (t - lag) * c + k % c)
        })
    }

    fn window(&self, t_start: usize, n_blocks: usize, tail: bool) -> Result<SparseBinMatrix> {
        Ok(self.window_with_row_blocks(t_start, n_blocks, tail)?.0)
    }

    /// Window matrix together with the row block `t` of every kept row.
    pub fn window_with_row_blocks(
        &self,
        t_start: usize,
        n_blocks: usize,
        tail: bool,
    ) -> Result<(SparseBinMatrix, Vec<usize>)> {
        if n_blocks == 0 {
            return Err(Error::InvalidArgument("window must contain at least one block".into()));
        }
        let (lo, hi) = (t_start * self.c, (t_start + n_blocks) * self.c);
        let last = if tail { t_start + n_blocks + self.m_s } else { t_start + n_blocks };
        let mut support = Vec::new();
        let mut blocks = Vec::new();
        for t in t_start..last {
            for r in 0..self.checks_per_block() {
                let mut row: Vec<usize> = self
                    .row_columns(t, r)
                    .filter(|&g| g >= lo && g < hi)
                    .map(|g| g - lo)
                    .collect();
                if !row.is_empty() {
                    row.sort_unstable();
                    support.push(row);
                    blocks.push(t);
                }
            }
        }
        Ok((SparseBinMatrix::new(support.len(), hi - lo, support)?, blocks))
    }

    /// Finite part of the semi-infinite parity-check matrix on block columns
    /// `[t_start, t_start + n_blocks)`. All checks touching those columns are
    /// included (so the last `m_s` row blocks act as termination), columns
    /// outside the window are shortened, and empty rows are dropped.
    pub fn materialize_window(&self, t_start: usize, n_blocks: usize) -> Result<SparseBinMatrix> {
        self.window(t_start, n_blocks, true)
    }

    /// Like [`materialize_window`](Self::materialize_window) but without the
    /// trailing `m_s` row blocks, i.e. only checks whose row block lies inside the window.
    pub fn truncated_window(&self, t_start: usize, n_blocks: usize) -> Result<SparseBinMatrix> {
        self.window(t_start, n_blocks, false)
    }

    /// True iff every check fully supported on the finite stream `v`
    /// (starting at time 0) is satisfied.
    pub fn is_valid_stream(&self, v: &[u8]) -> Result<bool> {
        if v.len() % self.c != 0 {
            return Err(Error::InvalidArgument(format!(
                "stream length {} is not a multiple of c = {}",
                v.len(),
                self.c
            )));
        }
        let blocks = v.len() / self.c;
        for t in 0..blocks {
            for r in 0..self.checks_per_block() {
                if self.row_columns(t, r).fold(0u8, |a, g| a ^ (v[g] & 1)) != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Merges `ell` consecutive blocks: `T' = T/ell`, `b' = ell b`, `c' = ell c`.
    pub fn reblock(&self, ell: usize) -> Result<Self> {
        if ell == 0 || self.period() % ell != 0 {
            return Err(Error::NotADivisor {
                ell,
                of: self.period(),
            });
        }
        let (c, rb) = (self.c, self.checks_per_block());
        let new_c = ell * c;
        let new_m = self.m_s.div_ceil(ell);
        let mut bands = Vec::with_capacity(self.period() / ell);
        for tau in 0..self.period() / ell {
            // Row block tau*ell + p reaches back to global block
            // (tau*ell + p) - lag, which is merged block tau - (new lag).
            let mut entries = Vec::new();
            for p in 0..ell {
                let t = tau * ell + p;
                for r in 0..rb {
                    for &k in self.band(t).row(r) {
                        let (lag, col) = (k / c, k % c);
                        let rel = p as isize - lag as isize;
                        let new_lag = (-(rel.div_euclid(ell as isize))) as usize;
                        let q = rel.rem_euclid(ell as isize) as usize;
                        entries.push((p * rb + r, new_lag * new_c + q * c + col));
                    }
                }
            }
            bands.push(SparseBinMatrix::from_entries(ell * rb, (new_m + 1) * new_c, entries)?);
        }
        Self::from_bands(new_c, ell * self.b, bands)
    }

    /// Re-slices the code into blocks of `c_new` symbols and `c_new - b_new`
    /// checks. The fully merged block (`T_s c` symbols, `T_s (c - b)` checks)
    /// must split evenly, and every check must stay at or after the blocks it
    /// touches.
    pub fn rechunk(&self, b_new: usize, c_new: usize) -> Result<Self> {
        let merged = self.reblock(self.period())?;
        let (big_c, big_r) = (merged.c, merged.checks_per_block());
        if c_new == 0 || b_new > c_new || big_c % c_new != 0 {
            return Err(Error::NotADivisor { ell: c_new, of: big_c });
        }
        let period = big_c / c_new;
        let r_new = c_new - b_new;
        if r_new * period != big_r {
            return Err(Error::InvalidArgument(format!(
                "{big_r} checks per period cannot be split into {period} blocks of {r_new}"
            )));
        }
        let mut per_t: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); period];
        let mut max_lag = 0;
        for (row, k) in merged.band(0).entries() {
            let (lag, col) = (k / big_c, k % big_c);
            // Period-0 row `row` sits in new block row `row / r_new`; column
            // `col` at merged lag `lag` sits in new block `col / c_new - lag*period`.
            let t = row / r_new;
            let target = col / c_new;
            let diff = t as isize + (lag * period) as isize - target as isize;
            if diff < 0 {
                return Err(Error::InvalidArgument(
                    "requested blocking is not causal (entry above the block diagonal)".into(),
                ));
            }
            max_lag = max_lag.max(diff as usize);
            per_t[t].push((row % r_new, diff as usize, col % c_new));
        }
        let bands = per_t
            .into_iter()
            .map(|e| {
                SparseBinMatrix::from_entries(
                    r_new,
                    (max_lag + 1) * c_new,
                    e.into_iter().map(|(r, lag, k)| (r, lag * c_new + k)),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bands(c_new, b_new, bands)
    }

    /// Time-invariant code of a `D`-domain polynomial matrix: `H_i` holds the
    /// coefficients of `D^i`. Any modulus on `p` is ignored.
    pub fn from_tanner_poly(p: &PolyMatrix) -> Result<Self> {
        let (m, n) = (p.rows(), p.cols());
        if m > n || n == 0 {
            return Err(Error::InvalidArgument(format!("{m}x{n} polynomial matrix cannot define a code")));
        }
        let ms = p.max_exponent().unwrap_or(0) as usize;
        let mut entries = Vec::new();
        for j in 0..m {
            for i in 0..n {
                for &e in p.entry(j, i) {
                    entries.push((j, e as usize * n + i));
                }
            }
        }
        let band = SparseBinMatrix::from_entries(m, (ms + 1) * n, entries)?;
        Self::from_bands(n, n - m, vec![band])
    }

    /// Column weights over one period, indexed `t * c + k`, counting every
    /// check that touches the column in the bi-infinite matrix.
    pub fn period_col_degrees(&self) -> Vec<usize> {
        let t_s = self.period();
        let mut deg = vec![0; t_s * self.c];
        for t in 0..t_s {
            for (_, k) in self.band(t).entries() {
                let (lag, col) = (k / self.c, k % self.c);
                let blk = (t + t_s * (lag / t_s + 1) - lag) % t_s;
                deg[blk * self.c + col] += 1;
            }
        }
        deg
    }
}

/// Systematic-style causal encoder.
///
/// For each time step it picks `c - b` parity positions whose columns of the
/// block-diagonal part are linearly independent, preferring the rightmost
/// columns, so that codes whose trailing square part of `H_0(t)` is invertible
/// get info bits first and parity bits last. When a single block is rank
/// deficient, consecutive blocks are grouped (up to one full period). If even
/// the full period is rank deficient, rows of the merged time-invariant
/// matrix are combined and delayed until its `H_0` has full rank.
#[derive(Clone, Debug)]
pub struct Encoder {
    code: ConvCode,
    group: usize,
    steps: Vec<EncodeStep>,
}

#[derive(Clone, Debug)]
struct EncodeStep {
    info_pos: Vec<usize>,
    parity_pos: Vec<usize>,
    // Rows of the inverse of the square parity submatrix, over GF(2).
    inverse: Vec<Vec<u8>>,
}

impl Encoder {
    pub fn new(code: &ConvCode) -> Result<Self> {
        let t_s = code.period();
        for g in (1..=t_s).filter(|g| t_s % g == 0) {
            let merged = code.reblock(g)?;
            if let Some(steps) = (0..merged.period())
                .map(|t| encode_step(&merged.block(0, t)))
                .collect::<Option<Vec<_>>>()
            {
                return Ok(Encoder {
                    code: merged,
                    group: g,
                    steps,
                });
            }
        }
        // Rank deficient for every grouping: rewrite the fully merged code so
        // that its H_0 has full row rank, then encode that.
        let merged = delay_free(&code.reblock(t_s)?)?;
        let step = encode_step(&merged.block(0, 0))
            .ok_or_else(|| Error::NotEncodable("no invertible parity part after row delays".into()))?;
        Ok(Encoder {
            code: merged,
            group: t_s,
            steps: vec![step],
        })
    }

    /// Information bits consumed per encoding step.
    pub fn info_per_step(&self) -> usize {
        self.code.b
    }

    /// Number of original blocks encoded together.
    pub fn group(&self) -> usize {
        self.group
    }

    /// Positions (within the grouped block of time step `t`) carrying information.
    pub fn info_positions(&self, t: usize) -> &[usize] {
        &self.steps[t % self.steps.len()].info_pos
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let k = self.code.b;
        if k == 0 || info.len() % k != 0 {
            return Err(Error::InvalidArgument(format!(
                "info length {} is not a multiple of {k}",
                info.len()
            )));
        }
        let c = self.code.c;
        let steps = info.len() / k;
        let mut v = vec![0u8; steps * c];
        for t in 0..steps {
            let step = &self.steps[t % self.steps.len()];
            for (&p, &u) in step.info_pos.iter().zip(&info[t * k..(t + 1) * k]) {
                v[t * c + p] = u & 1;
            }
            let rb = self.code.checks_per_block();
            let syn: Vec<u8> = (0..rb)
                .map(|r| {
                    self.code
                        .row_columns(t, r)
                        .filter(|&g| g < t * c || !step.parity_pos.contains(&(g - t * c)))
                        .fold(0u8, |a, g| a ^ v[g])
                })
                .collect();
            for (row, &p) in step.inverse.iter().zip(&step.parity_pos) {
                v[t * c + p] = row.iter().zip(&syn).fold(0u8, |a, (x, s)| a ^ (x & s));
            }
        }
        Ok(v)
    }
}

/// Equivalent parity-check matrix of a time-invariant code whose `H_0` has
/// full row rank. While some nonzero sum of rows vanishes on `H_0`, the
/// summand of largest degree is replaced by that sum delayed by one block.
/// On causal streams this keeps the code unchanged, and the total row degree
/// drops at each step.
fn delay_free(code: &ConvCode) -> Result<ConvCode> {
    let (c, p) = (code.c, code.checks_per_block());
    let width = (code.m_s + 1) * c;
    let band = code.band(0);
    let mut rows: Vec<Vec<u8>> = (0..p)
        .map(|r| {
            let mut v = vec![0u8; width];
            for &k in band.row(r) {
                v[k] = 1;
            }
            v
        })
        .collect();
    loop {
        let Some(combo) = left_null_vector(&rows, c) else {
            break;
        };
        let degree = |v: &[u8]| v.iter().rposition(|&x| x == 1).map_or(0, |k| k / c);
        let j = *combo.iter().max_by_key(|&&k| (degree(&rows[k]), k)).expect("nonempty combination");
        let mut sum = vec![0u8; width];
        for &k in &combo {
            sum.iter_mut().zip(&rows[k]).for_each(|(a, b)| *a ^= b);
        }
        if sum.iter().all(|&x| x == 0) {
            return Err(Error::NotEncodable("the checks are linearly dependent".into()));
        }
        let mut shifted = vec![0u8; width];
        shifted[..width - c].copy_from_slice(&sum[c..]);
        rows[j] = shifted;
    }
    let entries = rows
        .iter()
        .enumerate()
        .flat_map(|(r, v)| v.iter().enumerate().filter(|(_, &x)| x == 1).map(move |(k, _)| (r, k)));
    let band = SparseBinMatrix::from_entries(p, width, entries)?;
    ConvCode::from_bands(c, code.b, vec![band])
}

/// Indices of a nonempty set of rows whose first `c` entries sum to zero.
fn left_null_vector(rows: &[Vec<u8>], c: usize) -> Option<Vec<usize>> {
    // Eliminate on the H_0 part, tracking which original rows were combined.
    let mut work: Vec<(Vec<u8>, Vec<usize>)> = rows.iter().enumerate().map(|(r, v)| (v[..c].to_vec(), vec![r])).collect();
    let mut rank = 0;
    for col in 0..c {
        let Some(piv) = (rank..work.len()).find(|&r| work[r].0[col] == 1) else {
            continue;
        };
        work.swap(rank, piv);
        let (pv, pc) = work[rank].clone();
        for r in 0..work.len() {
            if r != rank && work[r].0[col] == 1 {
                work[r].0.iter_mut().zip(&pv).for_each(|(a, b)| *a ^= b);
                let mut set: std::collections::BTreeSet<usize> = work[r].1.iter().copied().collect();
                for k in &pc {
                    if !set.remove(k) {
                        set.insert(*k);
                    }
                }
                work[r].1 = set.into_iter().collect();
            }
        }
        rank += 1;
    }
    work.into_iter().skip(rank).map(|(_, set)| set).find(|s| !s.is_empty())
}

/// Chooses parity columns of `h0` right to left and inverts them.
fn encode_step(h0: &SparseBinMatrix) -> Option<EncodeStep> {
    let (m, n) = (h0.rows(), h0.cols());
    if gf2_rank(h0) != m {
        return None;
    }
    let cols = h0.col_supports();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut parity_pos = Vec::new();
    let words = m.div_ceil(64).max(1);
    for i in (0..n).rev() {
        let mut v = vec![0u64; words];
        for &j in &cols[i] {
            v[j / 64] |= 1 << (j % 64);
        }
        for (piv, b) in &basis {
            if v[piv / 64] >> (piv % 64) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if let Some(piv) = (0..m).find(|&j| v[j / 64] >> (j % 64) & 1 == 1) {
            basis.push((piv, v));
            parity_pos.push(i);
            if parity_pos.len() == m {
                break;
            }
        }
    }
    parity_pos.sort_unstable();
    let info_pos: Vec<usize> = (0..n).filter(|i| !parity_pos.contains(i)).collect();
    // Invert the square submatrix via elimination on [S | I].
    let aug = SparseBinMatrix::from_entries(
        m,
        2 * m,
        h0.select_cols(&parity_pos)
            .entries()
            .chain((0..m).map(|j| (j, m + j))),
    )
    .ok()?;
    let mut bm = BitMatrix::from_sparse(&aug);
    let piv = bm.rref();
    if piv.len() != m || piv.iter().enumerate().any(|(a, &b)| a != b) {
        return None;
    }
    let inverse = (0..m).map(|r| bm.row_bits(r)[m..].to_vec()).collect();
    Some(EncodeStep {
        info_pos,
        parity_pos,
        inverse,
    })
}

/// Convenience wrapper around [`Encoder`].
pub fn encode(code: &ConvCode, info: &[u8]) -> Result<Vec<u8>> {
    Encoder::new(code)?.encode(info)
}
