//! Tanner unwrapping (drop the modulus), JFZ unwrapping (cut and repeat) and
//! the related wrapping and memory-reduction maps.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convcode::ConvCode;
use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::gf2::{PolyMatrix, SparseBinMatrix};

/// Drops the modulus of a quasi-cyclic polynomial matrix.
pub fn tanner_unwrap(hqc: &PolyMatrix) -> Result<PolyMatrix> {
    if hqc.modulus().is_none() {
        return Err(Error::MissingModulus);
    }
    hqc.with_modulus(None)
}

/// Reduces each polynomial of a `D`-domain vector modulo `D^r - 1`.
/// Exponents are sorted; coinciding exponents cancel.
pub fn tanner_wrap(v: &[Vec<u32>], r: u32) -> Result<Vec<Vec<u32>>> {
    if r == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    Ok(v.iter()
        .map(|p| {
            let mut e: Vec<u32> = p.iter().map(|&x| x % r).collect();
            e.sort_unstable();
            let mut out: Vec<u32> = Vec::with_capacity(e.len());
            for x in e {
                if out.last() == Some(&x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
            out
        })
        .collect())
}

/// Reads a stream of `c`-symbol blocks as `c` polynomials in `D`.
pub fn stream_to_poly(v: &[u8], c: usize) -> Vec<Vec<u32>> {
    let mut p = vec![Vec::new(); c];
    for (g, &bit) in v.iter().enumerate() {
        if bit & 1 == 1 {
            p[g % c].push((g / c) as u32);
        }
    }
    p
}

/// Coefficient vector of a polynomial vector modulo `X^r - 1`, laid out
/// column block by column block (entry `i * r + k` is the `X^k` coefficient of
/// component `i`), matching [`PolyMatrix::expand`].
pub fn poly_to_bits(v: &[Vec<u32>], r: u32) -> Result<Vec<u8>> {
    let r = r as usize;
    let mut bits = vec![0u8; v.len() * r];
    for (i, p) in v.iter().enumerate() {
        for &e in p {
            if e as usize >= r {
                return Err(Error::ExponentOutOfRange {
                    exponent: e,
                    modulus: r as u32,
                });
            }
            bits[i * r + e as usize] ^= 1;
        }
    }
    Ok(bits)
}

/// Divides every row of a `D`-domain matrix by its lowest power of `D`.
pub fn reduce_memory(hconv: &PolyMatrix) -> Result<PolyMatrix> {
    if hconv.modulus().is_some() {
        return Err(Error::InvalidArgument("memory reduction applies to D-domain matrices".into()));
    }
    let mut entries = Vec::with_capacity(hconv.rows() * hconv.cols());
    for j in 0..hconv.rows() {
        let e = hconv.row_exponents(j).min().ok_or(Error::EmptyRow(j))?;
        for i in 0..hconv.cols() {
            entries.push(hconv.entry(j, i).iter().map(|&x| x - e).collect());
        }
    }
    PolyMatrix::new(hconv.rows(), hconv.cols(), entries, None)
}

/// Step-size parameters of a diagonal cut of an `m × n` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutParams {
    pub eta: usize,
    pub ell: usize,
    pub c: usize,
    pub b: usize,
    pub m_s: usize,
    pub period: usize,
}

impl CutParams {
    pub fn new(m: usize, n: usize, ell: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidArgument(format!("cannot cut a {m}x{n} matrix")));
        }
        let eta = gcd(m, n);
        if ell == 0 || eta % ell != 0 {
            return Err(Error::NotADivisor { ell, of: eta });
        }
        Ok(CutParams {
            eta,
            ell,
            c: ell * n / eta,
            b: ell * (n - m) / eta,
            m_s: eta / ell - 1,
            period: eta / ell,
        })
    }

    pub fn nu_s(&self) -> usize {
        (self.m_s + 1) * self.c
    }
}

impl fmt::Display for CutParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eta={} ell={} b={} c={} m_s={} T_s={} nu_s={}",
            self.eta,
            self.ell,
            self.b,
            self.c,
            self.m_s,
            self.period,
            self.nu_s()
        )
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ordered parts `H_0, H_1, …` of equal shape with disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    parts: Vec<SparseBinMatrix>,
}

impl Decomposition {
    pub fn new(parts: Vec<SparseBinMatrix>) -> Result<Self> {
        let d = Decomposition { parts };
        d.sum()?;
        Ok(d)
    }

    pub fn parts(&self) -> &[SparseBinMatrix] {
        &self.parts
    }

    /// `Σ H_ℓ`, failing if two parts share a one.
    pub fn sum(&self) -> Result<SparseBinMatrix> {
        let first = self
            .parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("decomposition has no parts".into()))?;
        let mut acc = SparseBinMatrix::zeros(first.rows(), first.cols());
        for p in &self.parts {
            acc = acc.disjoint_sum(p)?;
        }
        Ok(acc)
    }
}

/// Staircase cut moving `c'` right and `c' - b'` down; ones on or below the
/// staircase go to `H_0`, the rest to `H_1`.
pub fn jfz_diagonal_cut(h: &SparseBinMatrix, ell: usize) -> Result<(Decomposition, CutParams)> {
    let p = CutParams::new(h.rows(), h.cols(), ell)?;
    let rows_per_step = p.c - p.b;
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for (j, i) in h.entries() {
        if i < p.c * (j / rows_per_step + 1) {
            lower.push((j, i));
        } else {
            upper.push((j, i));
        }
    }
    let parts = vec![
        SparseBinMatrix::from_entries(h.rows(), h.cols(), lower)?,
        SparseBinMatrix::from_entries(h.rows(), h.cols(), upper)?,
    ];
    Ok((Decomposition { parts }, p))
}

/// Assigns each one of `h` (row-major order, one draw each) to `H_0` or `H_1`
/// with probability 1/2 from a ChaCha stream seeded by `seed`.
pub fn jfz_random_cut(h: &SparseBinMatrix, seed: u64) -> Decomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for e in h.entries() {
        if rng.random::<bool>() {
            b.push(e);
        } else {
            a.push(e);
        }
    }
    let parts = vec![
        SparseBinMatrix::from_entries(h.rows(), h.cols(), a).expect("subset of a valid matrix"),
        SparseBinMatrix::from_entries(h.rows(), h.cols(), b).expect("subset of a valid matrix"),
    ];
    Decomposition { parts }
}

/// Time-invariant code with `H_i = parts[i]`: `c = n`, `b = n - m`.
pub fn jfz_unwrap(d: &Decomposition) -> Result<ConvCode> {
    ConvCode::time_invariant(&d.parts)
}

/// Diagonal cut followed by unwrapping, exposed in the periodic view with
/// blocks of `c'` symbols.
pub fn diagonal_cut_code(h: &SparseBinMatrix, ell: usize) -> Result<(ConvCode, CutParams)> {
    let (d, p) = jfz_diagonal_cut(h, ell)?;
    let code = jfz_unwrap(&d)?.rechunk(p.b, p.c)?;
    Ok((code, p))
}

/// Unwraps a cover whose permutations are all Toeplitz shifts, in the GCC2
/// ordering: `H_s` is the sum of the parts shifted by `s`, and negative time
/// is shortened.
pub fn from_toeplitz_cover(spec: &CoverSpec) -> Result<ConvCode> {
    use crate::cover::PermSpec;
    let (m, n) = (spec.proto().rows(), spec.proto().cols());
    let mut by_shift: Vec<Vec<(usize, usize)>> = Vec::new();
    for (a, p) in spec.parts() {
        let PermSpec::ToeplitzShift(s) = *p else {
            return Err(Error::InvalidCover("all permutations must be Toeplitz shifts".into()));
        };
        if by_shift.len() <= s {
            by_shift.resize(s + 1, Vec::new());
        }
        for (j, i, v) in a.nonzeros() {
            if v > 1 {
                return Err(Error::InvalidCover("parallel edges cannot be unwrapped".into()));
            }
            by_shift[s].push((j, i));
        }
    }
    if by_shift.is_empty() {
        by_shift.push(Vec::new());
    }
    let parts = by_shift
        .into_iter()
        .map(|e| SparseBinMatrix::from_entries(m, n, e))
        .collect::<Result<Vec<_>>>()?;
    ConvCode::time_invariant(&parts)
}

/// Inserts all-zero columns so that they occupy `positions` of the widened
/// matrix. Returns the matrix and a mask flagging the inserted (punctured) columns.
pub fn pad_for_cut(h: &SparseBinMatrix, positions: &[usize]) -> Result<(SparseBinMatrix, Vec<bool>)> {
    let new_n = h.cols() + positions.len();
    let mut mask = vec![false; new_n];
    for &p in positions {
        if p >= new_n || std::mem::replace(&mut mask[p], true) {
            return Err(Error::InvalidArgument(format!("bad padding position {p}")));
        }
    }
    let map: Vec<usize> = (0..new_n).filter(|&i| !mask[i]).collect();
    let entries = h.entries().map(|(j, i)| (j, map[i]));
    Ok((SparseBinMatrix::from_entries(h.rows(), new_n, entries)?, mask))
}
