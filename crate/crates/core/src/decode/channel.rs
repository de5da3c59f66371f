use crate::error::{Error, Result};
use crate::scalar::LlrScalar;

/// Noise variance per real dimension for BPSK at `ebn0_db` and rate `rate`:
/// `σ² = 1 / (2 R 10^(Eb/N0 / 10))`.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidArgument(format!("rate {rate} not in (0, 1]")));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

/// Channel LLRs `2 y / σ²` for BPSK outputs (bit 0 sent as +1).
pub fn llr_from_awgn<F: LlrScalar>(y: &[f64], ebn0_db: f64, rate: f64) -> Result<Vec<F>> {
    let s2 = noise_variance(ebn0_db, rate)?;
    Ok(y.iter().map(|&v| F::from_f64(2.0 * v / s2).unwrap()).collect())
}
