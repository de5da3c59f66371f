use super::graph::{decide, DecoderGraph};
use crate::convcode::ConvCode;
use crate::error::{Error, Result};
use crate::scalar::LlrScalar;

/// Sliding-window decoder for terminated frames of a convolutional code.
///
/// `I` processors run in a pipeline. At time step `τ` block `τ` of channel
/// values enters, and processor `k` (1-based) updates the checks of row block
/// `ρ = τ - (k-1)(m_s+1)` and then the bits of block `ρ - m_s`, using
/// iteration-`k` messages. Two processors never touch bits closer than
/// `m_s + 1` blocks, and every bit leaves processor `I` after exactly `I`
/// iterations, `I (m_s + 1)` blocks after it entered. The decisions equal
/// those of `I` flooding iterations (without early stopping) on
/// [`ConvCode::materialize_window`]`(0, L)`.
#[derive(Clone, Debug)]
pub struct PipelineDecoder<F> {
    graph: DecoderGraph,
    c: usize,
    m_s: usize,
    frame_blocks: usize,
    iterations: usize,
    // checks of row block t are check_range[t]..check_range[t + 1]
    check_range: Vec<usize>,
    v2c: Vec<F>,
    c2v: Vec<F>,
    scratch: Vec<F>,
}

impl<F: LlrScalar> PipelineDecoder<F> {
    pub fn new(code: &ConvCode, frame_blocks: usize, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::InvalidArgument("at least one iteration is required".into()));
        }
        let (h, row_blocks) = code.window_with_row_blocks(0, frame_blocks, true)?;
        let n_row_blocks = frame_blocks + code.m_s();
        let mut check_range = vec![0usize; n_row_blocks + 1];
        for &t in &row_blocks {
            check_range[t + 1] += 1;
        }
        for t in 0..n_row_blocks {
            check_range[t + 1] += check_range[t];
        }
        let graph = DecoderGraph::new(&h);
        let e = graph.edges();
        Ok(PipelineDecoder {
            graph,
            c: code.c(),
            m_s: code.m_s(),
            frame_blocks,
            iterations,
            check_range,
            v2c: vec![F::zero(); e],
            c2v: vec![F::zero(); e],
            scratch: Vec::new(),
        })
    }

    /// Decoding delay in blocks.
    pub fn delay_blocks(&self) -> usize {
        self.iterations * (self.m_s + 1)
    }

    pub fn frame_len(&self) -> usize {
        self.frame_blocks * self.c
    }

    pub fn decode(&mut self, llr: &[F]) -> Result<Vec<u8>> {
        if llr.len() != self.frame_len() {
            return Err(Error::DimensionMismatch {
                expected: self.frame_len(),
                actual: llr.len(),
            });
        }
        let (c, span) = (self.c, self.m_s + 1);
        let l = self.frame_blocks as isize;
        let rows = (self.check_range.len() - 1) as isize;
        let last_step = (l - 1) + self.m_s as isize + (self.iterations as isize - 1) * span as isize;
        let mut out = vec![0u8; llr.len()];
        // Bits are seeded as their block arrives; the check update that first
        // reads them happens in the same step.
        let clip = F::clip();
        for tau in 0..=last_step {
            if tau < l {
                for i in tau as usize * c..(tau as usize + 1) * c {
                    let v = llr[i].max(-clip).min(clip);
                    self.graph.seed_var(i, v, &mut self.v2c);
                }
            }
            for k in 1..=self.iterations {
                let rho = tau - ((k - 1) * span) as isize;
                if rho < 0 {
                    break;
                }
                if rho < rows {
                    let t = rho as usize;
                    for j in self.check_range[t]..self.check_range[t + 1] {
                        self.graph.update_check(j, &self.v2c, &mut self.c2v, &mut self.scratch);
                    }
                }
                let u = rho - self.m_s as isize;
                if (0..l).contains(&u) {
                    for i in u as usize * c..(u as usize + 1) * c {
                        let post = self.graph.update_var(i, llr[i], &self.c2v, &mut self.v2c);
                        if k == self.iterations {
                            out[i] = decide(post);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Pipeline decoding of one terminated frame with `iterations` processors.
pub fn pipeline_decode<F: LlrScalar>(code: &ConvCode, llr: &[F], iterations: usize) -> Result<Vec<u8>> {
    if llr.len() % code.c() != 0 {
        return Err(Error::InvalidArgument("stream is not block aligned".into()));
    }
    PipelineDecoder::new(code, llr.len() / code.c(), iterations)?.decode(llr)
}
