//! Fixed example codes and a seeded random regular ensemble.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convcode::ConvCode;
use crate::error::{Error, Result};
use crate::gf2::{PolyMatrix, SparseBinMatrix};

/// Circulant exponents of Tanner's (3,5)-regular quasi-cyclic family.
pub const TANNER_EXPONENTS: [[u32; 5]; 3] = [[1, 2, 4, 8, 16], [5, 10, 20, 9, 18], [25, 19, 7, 14, 28]];

/// Tanner's quasi-cyclic code for circulant size `r` (> 28).
pub fn tanner_qc(r: u32) -> Result<PolyMatrix> {
    PolyMatrix::from_monomials(&TANNER_EXPONENTS, Some(r))
}

/// `[[X, X^2, X^4], [X^6, X^5, X^3]]` modulo `X^7 - 1`.
pub fn cyclic_example() -> PolyMatrix {
    PolyMatrix::from_monomials(&[[1u32, 2, 4], [6, 5, 3]], Some(7)).expect("valid exponents")
}

/// The (3,6)-regular 5×10 proto-matrix used for the rate-1/2 diagonal-cut example.
pub fn proto_5x10() -> SparseBinMatrix {
    SparseBinMatrix::from_dense(&[
        [0u8, 0, 1, 1, 1, 0, 1, 1, 1, 0],
        [0, 1, 1, 1, 0, 1, 0, 0, 1, 1],
        [1, 1, 1, 0, 0, 1, 1, 1, 0, 0],
        [1, 0, 0, 1, 1, 0, 0, 1, 1, 1],
        [1, 1, 0, 0, 1, 1, 1, 0, 0, 1],
    ])
    .expect("rectangular")
}

/// Parity-check matrix of the [8,4,4] extended Hamming code.
pub fn hamming_8_4() -> SparseBinMatrix {
    SparseBinMatrix::from_dense(&[
        [1u8, 1, 1, 1, 1, 1, 1, 1],
        [0, 0, 0, 0, 1, 1, 1, 1],
        [0, 0, 1, 1, 0, 0, 1, 1],
        [0, 1, 0, 1, 0, 1, 0, 1],
    ])
    .expect("rectangular")
}

/// Small time-invariant rate-1/3 code with `m_s = 2` and `ν_s = 9`.
pub fn toy_rate_third() -> ConvCode {
    let h0 = SparseBinMatrix::from_dense(&[[1u8, 1, 0], [1, 0, 1]]).expect("rectangular");
    let h1 = SparseBinMatrix::from_dense(&[[0u8, 1, 1], [1, 0, 0]]).expect("rectangular");
    let h2 = SparseBinMatrix::from_dense(&[[1u8, 0, 0], [0, 1, 1]]).expect("rectangular");
    ConvCode::time_invariant(&[h0, h1, h2]).expect("consistent shapes")
}

/// Random `(j, k)`-regular `m × n` matrix without parallel edges.
///
/// Sockets are matched by a seeded shuffle; every repeated edge is then
/// repaired by swapping its check endpoint with a random other edge.
pub fn random_regular(m: usize, n: usize, j: usize, k: usize, seed: u64) -> Result<SparseBinMatrix> {
    if n * j != m * k || m == 0 || j > m || k > n {
        return Err(Error::InvalidArgument(format!(
            "no ({j},{k})-regular {m}x{n} matrix exists"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = n * j;
    let mut checks: Vec<usize> = (0..e).map(|s| s / k).collect();
    checks.shuffle(&mut rng);
    let var_of = |s: usize| s / j;
    let mut present = std::collections::HashSet::with_capacity(e);
    let mut dup = Vec::new();
    for s in 0..e {
        if !present.insert((checks[s], var_of(s))) {
            dup.push(s);
        }
    }
    let mut guard = 0usize;
    while let Some(s) = dup.pop() {
        guard += 1;
        if guard > 100 * e + 1000 {
            return Err(Error::InvalidArgument("failed to remove parallel edges".into()));
        }
        let t = rng.random_range(0..e);
        let (cs, ct) = (checks[s], checks[t]);
        let (vs, vt) = (var_of(s), var_of(t));
        if t == s || dup.contains(&t) || present.contains(&(ct, vs)) || present.contains(&(cs, vt)) || cs == ct {
            dup.push(s);
            continue;
        }
        // Edge s is a duplicate, so its (cs, vs) entry stays owned by the original.
        present.remove(&(ct, vt));
        present.insert((ct, vs));
        present.insert((cs, vt));
        checks.swap(s, t);
    }
    SparseBinMatrix::from_entries(m, n, (0..e).map(|s| (checks[s], var_of(s))))
}
