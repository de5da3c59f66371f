//! ConvCode manifests: a small text file naming one alist per nonzero block.
//!
//! ```text
//! convcode
//! c 5
//! b 2
//! m_s 28
//! period 1
//! block 0 0 code.t0.h0.alist
//! ```
//!
//! `block t i path` gives `H_i(t)`; paths are relative to the manifest.
//! Missing blocks are zero.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ldpc_conv::convcode::ConvCode;
use ldpc_conv::gf2::{read_alist, write_alist};
use ldpc_conv::SparseBinMatrix;

pub const MAGIC: &str = "convcode";

/// Writes the manifest and its block files; returns every path written.
pub fn write_conv(code: &ConvCode, path: &Path) -> Result<Vec<PathBuf>> {
    let dir = path.parent().unwrap_or(Path::new(""));
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .context("manifest path needs a file name")?;
    let mut text = format!(
        "{MAGIC}\nc {}\nb {}\nm_s {}\nperiod {}\n",
        code.c(),
        code.b(),
        code.m_s(),
        code.period()
    );
    let mut written = Vec::new();
    for t in 0..code.period() {
        for i in 0..=code.m_s() {
            let h = code.block(i, t);
            if h.nnz() == 0 {
                continue;
            }
            let name = format!("{stem}.t{t}.h{i}.alist");
            let p = dir.join(&name);
            fs::write(&p, write_alist(&h)).with_context(|| format!("writing {}", p.display()))?;
            written.push(p);
            text.push_str(&format!("block {t} {i} {name}\n"));
        }
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    written.insert(0, path.to_path_buf());
    Ok(written)
}

pub fn read_conv(path: &Path) -> Result<ConvCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_conv(&text, path.parent().unwrap_or(Path::new("")))
        .with_context(|| format!("in {}", path.display()))
}

fn parse_conv(text: &str, dir: &Path) -> Result<ConvCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, MAGIC)) => {}
        _ => bail!("missing `{MAGIC}` header"),
    }
    let (mut c, mut b, mut m_s, mut period) = (None, None, None, None);
    let mut blocks = Vec::new();
    for (n, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> { s.parse().with_context(|| format!("line {n}: bad number `{s}`")) };
        match f.as_slice() {
            ["c", v] => c = Some(num(v)?),
            ["b", v] => b = Some(num(v)?),
            ["m_s", v] => m_s = Some(num(v)?),
            ["period", v] => period = Some(num(v)?),
            ["block", t, i, p] => blocks.push((num(t)?, num(i)?, dir.join(p), n)),
            _ => bail!("line {n}: unrecognized `{line}`"),
        }
    }
    let (Some(c), Some(b), Some(m_s), Some(period)) = (c, b, m_s, period) else {
        bail!("c, b, m_s and period are all required");
    };
    if b >= c || period == 0 {
        bail!("need 0 <= b < c and a positive period");
    }
    let mut grid = vec![vec![SparseBinMatrix::zeros(c - b, c); m_s + 1]; period];
    for (t, i, p, n) in blocks {
        if t >= period || i > m_s {
            bail!("line {n}: block ({t}, {i}) outside period {period} and memory {m_s}");
        }
        let s = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
        grid[t][i] = read_alist(&s).with_context(|| format!("parsing {}", p.display()))?;
    }
    Ok(ConvCode::from_blocks(c, b, &grid)?)
}
