use super::graph::{decide, DecoderGraph};
use crate::error::{Error, Result};
use crate::gf2::SparseBinMatrix;
use crate::scalar::LlrScalar;

/// Iteration cap used unless told otherwise.
pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub decisions: Vec<u8>,
    pub iterations: usize,
    /// The decisions satisfy every check.
    pub converged: bool,
}

/// Flooding sum-product decoder with reusable message buffers.
#[derive(Clone, Debug)]
pub struct BpDecoder<F> {
    graph: DecoderGraph,
    v2c: Vec<F>,
    c2v: Vec<F>,
    scratch: Vec<F>,
}

impl<F: LlrScalar> BpDecoder<F> {
    pub fn new(h: &SparseBinMatrix) -> Self {
        Self::from_graph(DecoderGraph::new(h))
    }

    pub fn from_graph(graph: DecoderGraph) -> Self {
        let e = graph.edges();
        BpDecoder {
            graph,
            v2c: vec![F::zero(); e],
            c2v: vec![F::zero(); e],
            scratch: Vec::new(),
        }
    }

    pub fn graph(&self) -> &DecoderGraph {
        &self.graph
    }

    /// Runs up to `max_iter` iterations (check update, then bit update). With
    /// `early_stop` the decoder halts at the first iteration whose decisions
    /// have zero syndrome.
    pub fn decode(&mut self, llr: &[F], max_iter: usize, early_stop: bool) -> Result<DecodeResult> {
        let g = &self.graph;
        if llr.len() != g.vars() {
            return Err(Error::DimensionMismatch {
                expected: g.vars(),
                actual: llr.len(),
            });
        }
        let mut decisions: Vec<u8> = llr.iter().map(|&l| decide(l)).collect();
        if early_stop && g.syndrome_ok(&decisions) {
            return Ok(DecodeResult {
                decisions,
                iterations: 0,
                converged: true,
            });
        }
        g.init_v2c(llr, &mut self.v2c);
        let mut iterations = 0;
        for it in 1..=max_iter {
            iterations = it;
            for j in 0..g.checks() {
                g.update_check(j, &self.v2c, &mut self.c2v, &mut self.scratch);
            }
            for (i, d) in decisions.iter_mut().enumerate() {
                *d = decide(g.update_var(i, llr[i], &self.c2v, &mut self.v2c));
            }
            if early_stop && g.syndrome_ok(&decisions) {
                return Ok(DecodeResult {
                    decisions,
                    iterations,
                    converged: true,
                });
            }
        }
        let converged = g.syndrome_ok(&decisions);
        Ok(DecodeResult {
            decisions,
            iterations,
            converged,
        })
    }
}

/// Flooding sum-product decoding that stops at the first zero syndrome or after `max_iter` iterations.
pub fn bp_decode_block<F: LlrScalar>(h: &SparseBinMatrix, llr: &[F], max_iter: usize) -> Result<DecodeResult> {
    BpDecoder::new(h).decode(llr, max_iter, true)
}
