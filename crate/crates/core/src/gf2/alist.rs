use super::SparseBinMatrix;
use crate::error::{parse_err, Error, Result};

/// Writes the MacKay alist layout with zero-padded neighbour lists.
pub fn write_alist(m: &SparseBinMatrix) -> String {
    let cols = m.col_supports();
    let col_w: Vec<usize> = cols.iter().map(Vec::len).collect();
    let row_w = m.row_weights();
    let max_c = col_w.iter().copied().max().unwrap_or(0);
    let max_r = row_w.iter().copied().max().unwrap_or(0);
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let padded = |list: &[usize], width: usize| {
        let mut it = list
            .iter()
            .map(|&x| x + 1)
            .chain(std::iter::repeat(0).take(width - list.len()));
        join(&mut it)
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.cols(), m.rows()));
    out.push_str(&format!("{max_c} {max_r}\n"));
    out.push_str(&join(&mut col_w.iter().copied()));
    out.push('\n');
    out.push_str(&join(&mut row_w.iter().copied()));
    out.push('\n');
    for c in &cols {
        out.push_str(&padded(c, max_c));
        out.push('\n');
    }
    for j in 0..m.rows() {
        out.push_str(&padded(m.row(j), max_r));
        out.push('\n');
    }
    out
}

/// Reads an alist file. Neighbour lists may be zero-padded or not.
pub fn read_alist(s: &str) -> Result<SparseBinMatrix> {
    let mut toks = s
        .lines()
        .enumerate()
        .flat_map(|(n, l)| l.split_whitespace().map(move |t| (n + 1, t)));
    let mut next = |what: &str| -> Result<usize> {
        let (line, t) = toks
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of input reading {what}")))?;
        t.parse::<usize>()
            .map_err(|_| parse_err(line, format!("bad {what} `{t}`")))
    };
    let n = next("n")?;
    let m = next("m")?;
    let max_c = next("max column degree")?;
    let max_r = next("max row degree")?;
    let col_w = (0..n).map(|_| next("column degree")).collect::<Result<Vec<_>>>()?;
    let row_w = (0..m).map(|_| next("row degree")).collect::<Result<Vec<_>>>()?;
    let mut rest = Vec::new();
    while let Ok(v) = next("neighbour") {
        rest.push(v);
    }
    let sum_c: usize = col_w.iter().sum();
    let sum_r: usize = row_w.iter().sum();
    let padded = rest.len() == n * max_c + m * max_r;
    if !padded && rest.len() != sum_c + sum_r {
        return Err(parse_err(0, "neighbour list length matches neither layout"));
    }
    let mut pos = 0;
    let mut take = |deg: usize, width: usize| -> Result<Vec<usize>> {
        let w = if padded { width } else { deg };
        let chunk = &rest[pos..pos + w];
        pos += w;
        let list: Vec<usize> = chunk.iter().filter(|&&x| x != 0).map(|&x| x - 1).collect();
        if list.len() != deg {
            return Err(parse_err(0, "neighbour list disagrees with degree"));
        }
        Ok(list)
    };
    let mut from_cols = Vec::with_capacity(sum_c);
    for (i, &d) in col_w.iter().enumerate() {
        for j in take(d, max_c)? {
            if j >= m {
                return Err(parse_err(0, format!("row index {} out of range", j + 1)));
            }
            from_cols.push((j, i));
        }
    }
    let mut from_rows = Vec::with_capacity(sum_r);
    for (j, &d) in row_w.iter().enumerate() {
        for i in take(d, max_r)? {
            if i >= n {
                return Err(parse_err(0, format!("column index {} out of range", i + 1)));
            }
            from_rows.push((j, i));
        }
    }
    let a = SparseBinMatrix::from_entries(m, n, from_cols)?;
    let b = SparseBinMatrix::from_entries(m, n, from_rows)?;
    if a != b {
        return Err(Error::InvalidMatrix(
            "column and row neighbour lists disagree".into(),
        ));
    }
    Ok(a)
}
