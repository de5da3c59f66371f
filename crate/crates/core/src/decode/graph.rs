use crate::gf2::SparseBinMatrix;
use crate::scalar::LlrScalar;

/// Edge lists of a Tanner graph. Edges are numbered check by check, in
/// increasing column order within a check.
#[derive(Clone, Debug)]
pub struct DecoderGraph {
    n: usize,
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl DecoderGraph {
    pub fn new(h: &SparseBinMatrix) -> Self {
        let mut check_ptr = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_ptr.push(0);
        for j in 0..h.rows() {
            edge_var.extend_from_slice(h.row(j));
            check_ptr.push(edge_var.len());
        }
        let mut deg = vec![0usize; h.cols()];
        for &i in &edge_var {
            deg[i] += 1;
        }
        let mut var_ptr = Vec::with_capacity(h.cols() + 1);
        var_ptr.push(0);
        for d in &deg {
            var_ptr.push(var_ptr.last().unwrap() + d);
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &i) in edge_var.iter().enumerate() {
            var_edges[fill[i]] = e;
            fill[i] += 1;
        }
        DecoderGraph {
            n: h.cols(),
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
        }
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Tanh-rule update of check `j`, reading `v2c` and writing `c2v`.
    pub(crate) fn update_check<F: LlrScalar>(&self, j: usize, v2c: &[F], c2v: &mut [F], scratch: &mut Vec<F>) {
        let (lo, hi) = (self.check_ptr[j], self.check_ptr[j + 1]);
        let half = F::from_f64(0.5).unwrap();
        let two = F::from_f64(2.0).unwrap();
        let clip = F::clip();
        scratch.clear();
        scratch.extend(v2c[lo..hi].iter().map(|&m| (m * half).tanh()));
        // prefix products in c2v, then multiply by suffix products
        let mut acc = F::one();
        for (k, e) in (lo..hi).enumerate() {
            c2v[e] = acc;
            acc = acc * scratch[k];
        }
        let mut acc = F::one();
        for (k, e) in (lo..hi).enumerate().rev() {
            let p = c2v[e] * acc;
            acc = acc * scratch[k];
            c2v[e] = (two * p.atanh()).max(-clip).min(clip);
        }
    }

    /// Variable update of bit `i`: returns the posterior and writes `v2c`.
    pub(crate) fn update_var<F: LlrScalar>(&self, i: usize, llr: F, c2v: &[F], v2c: &mut [F]) -> F {
        let edges = &self.var_edges[self.var_ptr[i]..self.var_ptr[i + 1]];
        let clip = F::clip();
        let mut total = llr;
        for &e in edges {
            total = total + c2v[e];
        }
        for &e in edges {
            v2c[e] = (total - c2v[e]).max(-clip).min(clip);
        }
        total
    }

    /// Initial bit-to-check messages: the clipped channel values.
    pub(crate) fn init_v2c<F: LlrScalar>(&self, llr: &[F], v2c: &mut [F]) {
        let clip = F::clip();
        for (e, &i) in self.edge_var.iter().enumerate() {
            v2c[e] = llr[i].max(-clip).min(clip);
        }
    }

    /// Sets every outgoing message of bit `i` to `value`.
    pub(crate) fn seed_var<F: LlrScalar>(&self, i: usize, value: F, v2c: &mut [F]) {
        for &e in &self.var_edges[self.var_ptr[i]..self.var_ptr[i + 1]] {
            v2c[e] = value;
        }
    }

    pub(crate) fn syndrome_ok(&self, bits: &[u8]) -> bool {
        (0..self.checks()).all(|j| {
            self.edge_var[self.check_ptr[j]..self.check_ptr[j + 1]]
                .iter()
                .fold(0u8, |a, &i| a ^ bits[i])
                == 0
        })
    }
}

#[inline]
pub(crate) fn decide<F: LlrScalar>(posterior: F) -> u8 {
    (posterior < F::zero()) as u8
}
