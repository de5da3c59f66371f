//! Graph-cover constructions from a decomposed proto-matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::gf2::{PolyMatrix, SparseBinMatrix};

/// Dense matrix of nonnegative integers (edge multiplicities of a proto-graph).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProtoMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ProtoMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ProtoMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(ProtoMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_binary(m: &SparseBinMatrix) -> Self {
        let mut p = Self::zeros(m.rows(), m.cols());
        for (j, i) in m.entries() {
            p.set(j, i, 1);
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, i: usize) -> u32 {
        self.data[j * self.cols + i]
    }

    pub fn set(&mut self, j: usize, i: usize, v: u32) {
        self.data[j * self.cols + i] = v;
    }

    /// Nonzero cells as `(row, col, value)` in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(k, &v)| (k / self.cols, k % self.cols, v))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|i| (0..self.rows).map(|j| self.get(j, i) as usize).sum())
            .collect()
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|j| (0..self.cols).map(|i| self.get(j, i) as usize).sum())
            .collect()
    }
}

/// Header `rows cols`, then one line of integers per row.
impl fmt::Display for ProtoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for j in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|i| self.get(j, i).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ProtoMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = s
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let (hl, header) = *lines.first().ok_or_else(|| parse_err(1, "empty input"))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(hl, "bad header")))
            .collect::<Result<_>>()?;
        if h.len() != 2 {
            return Err(parse_err(hl, "header must be `rows cols`"));
        }
        if lines.len() != h[0] + 1 {
            return Err(parse_err(hl, format!("expected {} rows", h[0])));
        }
        let mut rows = Vec::with_capacity(h[0]);
        for &(ln, l) in &lines[1..] {
            let r: Vec<u32> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(ln, "bad entry")))
                .collect::<Result<_>>()?;
            if r.len() != h[1] {
                return Err(parse_err(ln, format!("expected {} entries", h[1])));
            }
            rows.push(r);
        }
        if h[0] == 0 {
            return Ok(Self::zeros(0, h[1]));
        }
        Self::from_rows(&rows)
    }
}

/// A permutation matrix, finite or bi-infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PermSpec {
    /// `r×r` circulant with `[I_s]_{j,i} = 1` iff `i ≡ j - s (mod r)`.
    CirculantShift { s: usize, r: usize },
    /// Bi-infinite `[T_s]_{j,i} = 1` iff `j = i + s`.
    ToeplitzShift(usize),
    /// Row `j` has its one in column `perm[j]`.
    Explicit(Vec<usize>),
    Identity(usize),
}

impl PermSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PermSpec::CirculantShift { s, r } if *r == 0 || s >= r => Err(Error::InvalidCover(
                format!("circulant shift {s} not below size {r}"),
            )),
            PermSpec::Explicit(p) => {
                let mut seen = vec![false; p.len()];
                for &x in p {
                    if x >= p.len() || std::mem::replace(&mut seen[x], true) {
                        return Err(Error::InvalidCover("explicit permutation is not a bijection".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Finite size, `None` for Toeplitz.
    pub fn size(&self) -> Option<usize> {
        match self {
            PermSpec::CirculantShift { r, .. } => Some(*r),
            PermSpec::ToeplitzShift(_) => None,
            PermSpec::Explicit(p) => Some(p.len()),
            PermSpec::Identity(r) => Some(*r),
        }
    }

    /// Column of the one in row `j` (finite permutations only).
    pub fn image(&self, j: usize) -> Result<usize> {
        match self {
            PermSpec::CirculantShift { s, r } => Ok((j + r - s) % r),
            PermSpec::ToeplitzShift(_) => Err(Error::InfinitePermutation),
            PermSpec::Explicit(p) => Ok(p[j]),
            PermSpec::Identity(_) => Ok(j),
        }
    }

    pub fn to_matrix(&self) -> Result<SparseBinMatrix> {
        self.validate()?;
        let r = self.size().ok_or(Error::InfinitePermutation)?;
        let mut support = Vec::with_capacity(r);
        for j in 0..r {
            support.push(vec![self.image(j)?]);
        }
        SparseBinMatrix::new(r, r, support)
    }
}

/// Sparse matrix of edge multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    rows: usize,
    cols: usize,
    support: Vec<BTreeMap<usize, u32>>,
}

impl CountMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CountMatrix {
            rows,
            cols,
            support: vec![BTreeMap::new(); rows],
        }
    }

    pub fn add(&mut self, j: usize, i: usize, v: u32) {
        if v > 0 {
            *self.support[j].entry(i).or_insert(0) += v;
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, i: usize) -> u32 {
        self.support[j].get(&i).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.support
            .iter()
            .enumerate()
            .flat_map(|(j, r)| r.iter().map(move |(&i, &v)| (j, i, v)))
    }

    /// Support pattern: every nonzero multiplicity becomes a one.
    pub fn to_support(&self) -> SparseBinMatrix {
        let support = self.support.iter().map(|r| r.keys().copied().collect()).collect();
        SparseBinMatrix::new(self.rows, self.cols, support).expect("sorted keys")
    }

    /// Reduction over GF(2): even multiplicities cancel.
    pub fn to_gf2(&self) -> SparseBinMatrix {
        let support = self
            .support
            .iter()
            .map(|r| r.iter().filter(|(_, &v)| v % 2 == 1).map(|(&i, _)| i).collect())
            .collect();
        SparseBinMatrix::new(self.rows, self.cols, support).expect("sorted keys")
    }

    /// Positions holding more than one edge.
    pub fn parallel_edges(&self) -> Vec<(usize, usize, u32)> {
        self.entries().filter(|&(_, _, v)| v > 1).collect()
    }

    /// Column degrees counting multiplicity.
    pub fn col_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.cols];
        for (_, i, v) in self.entries() {
            d[i] += v as usize;
        }
        d
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        self.support
            .iter()
            .map(|r| r.values().map(|&v| v as usize).sum())
            .collect()
    }
}

/// `A ⊗ P` for a finite permutation `P`.
pub fn kron_perm(a: &ProtoMatrix, p: &PermSpec) -> Result<CountMatrix> {
    p.validate()?;
    let r = p.size().ok_or(Error::InfinitePermutation)?;
    let mut out = CountMatrix::zeros(a.rows() * r, a.cols() * r);
    for (j, i, v) in a.nonzeros() {
        for pj in 0..r {
            out.add(j * r + pj, i * r + p.image(pj)?, v);
        }
    }
    Ok(out)
}

/// `P ⊗ A` for a finite permutation `P`.
pub fn kron_perm_left(p: &PermSpec, a: &ProtoMatrix) -> Result<CountMatrix> {
    p.validate()?;
    let r = p.size().ok_or(Error::InfinitePermutation)?;
    let (m, n) = (a.rows(), a.cols());
    let mut out = CountMatrix::zeros(r * m, r * n);
    for pj in 0..r {
        let pi = p.image(pj)?;
        for (j, i, v) in a.nonzeros() {
            out.add(pj * m + j, pi * n + i, v);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverKind {
    Gcc1,
    Gcc2,
}

impl FromStr for CoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gcc1" => Ok(CoverKind::Gcc1),
            "gcc2" => Ok(CoverKind::Gcc2),
            other => Err(Error::InvalidArgument(format!("unknown cover kind `{other}`"))),
        }
    }
}

impl fmt::Display for CoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverKind::Gcc1 => "gcc1",
            CoverKind::Gcc2 => "gcc2",
        })
    }
}

/// Proto-matrix decomposition `A = Σ A_ℓ` with one permutation per part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    proto: ProtoMatrix,
    parts: Vec<(ProtoMatrix, PermSpec)>,
    kind: CoverKind,
}

impl CoverSpec {
    pub fn new(proto: ProtoMatrix, parts: Vec<(ProtoMatrix, PermSpec)>, kind: CoverKind) -> Result<Self> {
        let mut sum = ProtoMatrix::zeros(proto.rows(), proto.cols());
        let mut finite = None;
        let mut toeplitz = false;
        for (a, p) in &parts {
            p.validate()?;
            if a.rows() != proto.rows() || a.cols() != proto.cols() {
                return Err(Error::InvalidCover("part shape differs from proto".into()));
            }
            for (j, i, v) in a.nonzeros() {
                sum.set(j, i, sum.get(j, i) + v);
            }
            match p.size() {
                None => toeplitz = true,
                Some(r) => {
                    if *finite.get_or_insert(r) != r {
                        return Err(Error::InvalidCover("permutations differ in size".into()));
                    }
                }
            }
        }
        if toeplitz && finite.is_some() {
            return Err(Error::InvalidCover(
                "Toeplitz and finite permutations mixed".into(),
            ));
        }
        if sum != proto {
            return Err(Error::InvalidCover("parts do not sum to the proto-matrix".into()));
        }
        Ok(CoverSpec { proto, parts, kind })
    }

    /// Parts sum is taken as the proto-matrix.
    pub fn from_parts(rows: usize, cols: usize, parts: Vec<(ProtoMatrix, PermSpec)>, kind: CoverKind) -> Result<Self> {
        let mut proto = ProtoMatrix::zeros(rows, cols);
        for (a, _) in &parts {
            if a.rows() != rows || a.cols() != cols {
                return Err(Error::InvalidCover("part shape differs from proto".into()));
            }
            for (j, i, v) in a.nonzeros() {
                proto.set(j, i, proto.get(j, i) + v);
            }
        }
        Self::new(proto, parts, kind)
    }

    /// One single-entry part per monomial `X^s`, permuted by the circulant `I_s`.
    pub fn from_poly(p: &PolyMatrix, kind: CoverKind) -> Result<Self> {
        let r = p.modulus().ok_or(Error::MissingModulus)? as usize;
        let mut parts = Vec::new();
        for j in 0..p.rows() {
            for i in 0..p.cols() {
                for &s in p.entry(j, i) {
                    let mut a = ProtoMatrix::zeros(p.rows(), p.cols());
                    a.set(j, i, 1);
                    parts.push((a, PermSpec::CirculantShift { s: s as usize, r }));
                }
            }
        }
        Self::from_parts(p.rows(), p.cols(), parts, kind)
    }

    pub fn proto(&self) -> &ProtoMatrix {
        &self.proto
    }

    pub fn parts(&self) -> &[(ProtoMatrix, PermSpec)] {
        &self.parts
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    /// Cover degree, `None` when the permutations are Toeplitz or there are no parts.
    pub fn degree(&self) -> Option<usize> {
        self.parts.first().and_then(|(_, p)| p.size())
    }

    pub fn is_toeplitz(&self) -> bool {
        self.parts.iter().any(|(_, p)| p.size().is_none())
    }

    /// Builds the cover selected by [`kind`](Self::kind).
    pub fn build(&self) -> Result<Cover> {
        match self.kind {
            CoverKind::Gcc1 => gcc1(self),
            CoverKind::Gcc2 => gcc2(self),
        }
    }
}

/// Parts file: `kind gcc1|gcc2`, `size rows cols`, then per part a `part` line
/// followed by `cell row col value` lines. Part lines are `part circulant s r`,
/// `part toeplitz s`, `part identity r` or `part explicit p0 p1 ...`.
impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind {}", self.kind)?;
        writeln!(f, "size {} {}", self.proto.rows(), self.proto.cols())?;
        for (a, p) in &self.parts {
            match p {
                PermSpec::CirculantShift { s, r } => writeln!(f, "part circulant {s} {r}")?,
                PermSpec::ToeplitzShift(s) => writeln!(f, "part toeplitz {s}")?,
                PermSpec::Identity(r) => writeln!(f, "part identity {r}")?,
                PermSpec::Explicit(v) => {
                    let s: Vec<String> = v.iter().map(usize::to_string).collect();
                    writeln!(f, "part explicit {}", s.join(" "))?
                }
            }
            for (j, i, v) in a.nonzeros() {
                writeln!(f, "cell {j} {i} {v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CoverSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut kind = None;
        let mut size = None;
        let mut parts: Vec<(ProtoMatrix, PermSpec)> = Vec::new();
        for (n, line) in s.lines().enumerate() {
            let ln = n + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            let num = |k: usize| -> Result<usize> {
                t.get(k)
                    .ok_or_else(|| parse_err(ln, "missing field"))?
                    .parse()
                    .map_err(|_| parse_err(ln, "bad number"))
            };
            match t[0] {
                "kind" => kind = Some(t.get(1).ok_or_else(|| parse_err(ln, "missing kind"))?.parse::<CoverKind>()?),
                "size" => size = Some((num(1)?, num(2)?)),
                "part" => {
                    let (rows, cols) = size.ok_or_else(|| parse_err(ln, "`size` must precede parts"))?;
                    let spec = match t.get(1).copied() {
                        Some("circulant") => PermSpec::CirculantShift { s: num(2)?, r: num(3)? },
                        Some("toeplitz") => PermSpec::ToeplitzShift(num(2)?),
                        Some("identity") => PermSpec::Identity(num(2)?),
                        Some("explicit") => PermSpec::Explicit((2..t.len()).map(num).collect::<Result<_>>()?),
                        _ => return Err(parse_err(ln, "unknown permutation")),
                    };
                    parts.push((ProtoMatrix::zeros(rows, cols), spec));
                }
                "cell" => {
                    let (a, _) = parts.last_mut().ok_or_else(|| parse_err(ln, "cell before any part"))?;
                    let (j, i, v) = (num(1)?, num(2)?, num(3)?);
                    if j >= a.rows() || i >= a.cols() {
                        return Err(parse_err(ln, "cell outside proto-matrix"));
                    }
                    a.set(j, i, a.get(j, i) + v as u32);
                }
                other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
            }
        }
        let kind = kind.ok_or_else(|| parse_err(0, "missing `kind` line"))?;
        let (rows, cols) = size.ok_or_else(|| parse_err(0, "missing `size` line"))?;
        Self::from_parts(rows, cols, parts, kind)
    }
}

/// Maps cover nodes onto base nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub var_map: Vec<usize>,
    pub check_map: Vec<usize>,
}

impl Projection {
    pub fn identity(rows: usize, cols: usize) -> Self {
        Projection {
            var_map: (0..cols).collect(),
            check_map: (0..rows).collect(),
        }
    }

    /// Cover variables grouped by base variable.
    pub fn var_fibers(&self, base_cols: usize) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); base_cols];
        for (i, &b) in self.var_map.iter().enumerate() {
            f[b].push(i);
        }
        f
    }
}

/// A constructed cover together with its multiplicities and canonical projection.
#[derive(Clone, Debug)]
pub struct Cover {
    pub counts: CountMatrix,
    pub projection: Projection,
    pub degree: usize,
}

impl Cover {
    /// Parity-check matrix with parallel edges collapsed to single ones.
    pub fn matrix(&self) -> SparseBinMatrix {
        self.counts.to_support()
    }

    /// Parity-check matrix with parallel edges cancelled over GF(2).
    pub fn matrix_gf2(&self) -> SparseBinMatrix {
        self.counts.to_gf2()
    }

    pub fn parallel_edges(&self) -> Vec<(usize, usize, u32)> {
        self.counts.parallel_edges()
    }
}

fn finite_degree(spec: &CoverSpec) -> Result<usize> {
    if spec.is_toeplitz() {
        return Err(Error::InfinitePermutation);
    }
    spec.degree()
        .ok_or_else(|| Error::InvalidCover("no parts, cover degree undefined".into()))
}

/// GCC1: `B = Σ A_ℓ ⊗ P_ℓ`. Node `k` of the cover projects to `k / r`.
pub fn gcc1(spec: &CoverSpec) -> Result<Cover> {
    let r = finite_degree(spec)?;
    let (m, n) = (spec.proto.rows(), spec.proto.cols());
    let mut counts = CountMatrix::zeros(m * r, n * r);
    for (a, p) in &spec.parts {
        for (j, i, v) in kron_perm(a, p)?.entries() {
            counts.add(j, i, v);
        }
    }
    Ok(Cover {
        counts,
        projection: Projection {
            var_map: (0..n * r).map(|k| k / r).collect(),
            check_map: (0..m * r).map(|k| k / r).collect(),
        },
        degree: r,
    })
}

/// GCC2: `B̄ = Σ P_ℓ ⊗ A_ℓ`. Node `k` of the cover projects to `k mod n_A` (or `m_A`).
pub fn gcc2(spec: &CoverSpec) -> Result<Cover> {
    let r = finite_degree(spec)?;
    let (m, n) = (spec.proto.rows(), spec.proto.cols());
    let mut counts = CountMatrix::zeros(r * m, r * n);
    for (a, p) in &spec.parts {
        for (j, i, v) in kron_perm_left(p, a)?.entries() {
            counts.add(j, i, v);
        }
    }
    Ok(Cover {
        counts,
        projection: Projection {
            var_map: (0..r * n).map(|k| k % n).collect(),
            check_map: (0..r * m).map(|k| k % m).collect(),
        },
        degree: r,
    })
}

/// One part per nonzero entry of `A`, in row-major order.
pub fn per_entry_decomposition(a: &ProtoMatrix) -> Vec<ProtoMatrix> {
    a.nonzeros()
        .map(|(j, i, v)| {
            let mut p = ProtoMatrix::zeros(a.rows(), a.cols());
            p.set(j, i, v);
            p
        })
        .collect()
}

/// Checks the local-bijection property of `projection` and that all fibers have equal size.
pub fn validate_cover(base: &SparseBinMatrix, cover: &SparseBinMatrix, projection: &Projection) -> Result<bool> {
    let Projection { var_map, check_map } = projection;
    if var_map.len() != cover.cols() || check_map.len() != cover.rows() {
        return Err(Error::InvalidCover("projection length differs from cover size".into()));
    }
    let fiber_sizes = |map: &[usize], base_n: usize| -> Result<Vec<usize>> {
        let mut f = vec![0usize; base_n];
        for &b in map {
            if b >= base_n {
                return Err(Error::InvalidCover(format!("projection target {b} out of range")));
            }
            f[b] += 1;
        }
        if f.iter().any(|&c| c == 0) {
            return Err(Error::InvalidCover("projection is not surjective".into()));
        }
        Ok(f)
    };
    let fv = fiber_sizes(var_map, base.cols())?;
    let fc = fiber_sizes(check_map, base.rows())?;
    let m = fv.first().or(fc.first()).copied().unwrap_or(0);
    if fv.iter().chain(&fc).any(|&s| s != m) {
        return Ok(false);
    }
    for j in 0..cover.rows() {
        let mut img: Vec<usize> = cover.row(j).iter().map(|&i| var_map[i]).collect();
        img.sort_unstable();
        if img != base.row(check_map[j]) {
            return Ok(false);
        }
    }
    let base_cols = base.col_supports();
    for (i, col) in cover.col_supports().iter().enumerate() {
        let mut img: Vec<usize> = col.iter().map(|&j| check_map[j]).collect();
        img.sort_unstable();
        if img != base_cols[var_map[i]] {
            return Ok(false);
        }
    }
    Ok(true)
}
