//! Sum-product decoding in the log-likelihood-ratio domain.
//!
//! LLRs are positive for bit 0. Check updates use the exact tanh rule and all
//! messages are clipped to ±[`LlrScalar::clip`](crate::scalar::LlrScalar::clip).
//! A posterior of exactly zero decides 0.

mod bp;
mod channel;
mod graph;
mod pipeline;

pub use bp::{bp_decode_block, BpDecoder, DecodeResult, DEFAULT_MAX_ITER};
pub use channel::{llr_from_awgn, noise_variance};
pub use graph::DecoderGraph;
pub use pipeline::{pipeline_decode, PipelineDecoder};
