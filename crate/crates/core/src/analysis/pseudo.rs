use crate::error::{Error, Result};
use crate::gf2::SparseBinMatrix;
use crate::scalar::WeightScalar;

/// Largest check degree for which the odd-subset inequalities are enumerated.
pub const MAX_POLYTOPE_ROW_WEIGHT: usize = 12;

/// Nonnegative vector indexed by the bit nodes of a Tanner graph.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoCodeword<T> {
    omega: Vec<T>,
}

/// AWGN, BSC and BEC pseudo-weights.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoWeights<T> {
    pub awgnc: T,
    pub bsc: T,
    pub bec: T,
}

impl<T: WeightScalar> PseudoCodeword<T> {
    pub fn new(omega: Vec<T>) -> Result<Self> {
        if omega.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidArgument("pseudo-codeword entries must be nonnegative".into()));
        }
        Ok(PseudoCodeword { omega })
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        PseudoCodeword {
            omega: bits
                .iter()
                .map(|&b| if b & 1 == 1 { T::one() } else { T::zero() })
                .collect(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().all(|x| x.is_zero())
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.omega.len()).filter(|&i| !self.omega[i].is_zero()).collect()
    }
}

/// Averages `omega_tilde` over the fibers of the cover map: base bit `i`
/// receives `(1/m) Σ ω̃_k` over the `m` cover bits `k` with `fiber_of[k] = i`.
pub fn project_pseudocodeword<T: WeightScalar>(
    omega_tilde: &PseudoCodeword<T>,
    m: usize,
    fiber_of: &[usize],
) -> Result<PseudoCodeword<T>> {
    if m == 0 || fiber_of.len() != omega_tilde.len() || fiber_of.len() % m != 0 {
        return Err(Error::InvalidArgument("fiber map does not match the cover degree".into()));
    }
    let base_n = fiber_of.len() / m;
    let mut sums = vec![T::zero(); base_n];
    let mut sizes = vec![0usize; base_n];
    for (k, &i) in fiber_of.iter().enumerate() {
        if i >= base_n {
            return Err(Error::InvalidArgument(format!("fiber index {i} out of range")));
        }
        sums[i] = sums[i].clone() + omega_tilde.omega[k].clone();
        sizes[i] += 1;
    }
    if sizes.iter().any(|&s| s != m) {
        return Err(Error::InvalidArgument("fibers are not all of size m".into()));
    }
    let mm = T::from_count(m);
    PseudoCodeword::new(sums.into_iter().map(|s| s / mm.clone()).collect())
}

/// Pseudo-weights of a nonzero pseudo-codeword.
///
/// AWGNC: `(Σω)² / Σω²`. BEC: size of the support. BSC: twice the number of
/// largest entries needed to collect half of `Σω`, where the last entry
/// counts fractionally.
pub fn pseudoweights<T: WeightScalar>(omega: &PseudoCodeword<T>) -> Result<PseudoWeights<T>> {
    if omega.is_zero() {
        return Err(Error::InvalidArgument("pseudo-weights of the zero vector are undefined".into()));
    }
    let sum = omega.omega.iter().fold(T::zero(), |a, x| a + x.clone());
    let sq = omega.omega.iter().fold(T::zero(), |a, x| a + x.clone() * x.clone());
    let awgnc = sum.clone() * sum.clone() / sq;
    let bec = T::from_count(omega.support().len());
    let mut sorted: Vec<T> = omega.omega.iter().filter(|x| !x.is_zero()).cloned().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("comparable entries"));
    let two = T::one() + T::one();
    let half = sum / two.clone();
    let mut acc = T::zero();
    let mut bsc = T::zero();
    for (e, x) in sorted.iter().enumerate() {
        let next = acc.clone() + x.clone();
        if next >= half {
            let frac = (half - acc) / x.clone();
            bsc = two.clone() * (T::from_count(e) + frac);
            break;
        }
        acc = next;
    }
    Ok(PseudoWeights { awgnc, bsc, bec })
}

/// Membership in the fundamental polytope: `0 <= ω <= 1` and, for every
/// check and odd subset `S` of its neighbourhood,
/// `Σ_S ω - Σ_{N∖S} ω <= |S| - 1`.
pub fn fundamental_polytope_contains<T: WeightScalar>(
    h: &SparseBinMatrix,
    omega: &PseudoCodeword<T>,
) -> Result<bool> {
    if omega.len() != h.cols() {
        return Err(Error::DimensionMismatch {
            expected: h.cols(),
            actual: omega.len(),
        });
    }
    if let Some(w) = h.row_weights().into_iter().find(|&w| w > MAX_POLYTOPE_ROW_WEIGHT) {
        return Err(Error::RowWeightTooLarge {
            weight: w,
            bound: MAX_POLYTOPE_ROW_WEIGHT,
        });
    }
    if omega.omega.iter().any(|x| x.is_negative() || *x > T::one()) {
        return Ok(false);
    }
    for j in 0..h.rows() {
        let nb: Vec<T> = h.row(j).iter().map(|&i| omega.omega[i].clone()).collect();
        for mask in 0u32..(1 << nb.len()) {
            let size = mask.count_ones() as usize;
            if size % 2 == 0 {
                continue;
            }
            let mut lhs = T::zero();
            for (k, x) in nb.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    lhs = lhs + x.clone();
                } else {
                    lhs = lhs - x.clone();
                }
            }
            if lhs > T::from_count(size - 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff the support of `omega`, its incident edges and checks contain a
/// cycle, or the support contains a bit node of degree one.
pub fn active_part_has_cycle<T: WeightScalar>(h: &SparseBinMatrix, omega: &PseudoCodeword<T>) -> Result<bool> {
    if omega.len() != h.cols() {
        return Err(Error::DimensionMismatch {
            expected: h.cols(),
            actual: omega.len(),
        });
    }
    let cols = h.col_supports();
    let support = omega.support();
    if support.iter().any(|&i| cols[i].len() == 1) {
        return Ok(true);
    }
    // Union-find over bits (0..n) and checks (n..n+m): an edge joining two
    // already connected nodes closes a cycle.
    let n = h.cols();
    let mut parent: Vec<usize> = (0..n + h.rows()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &i in &support {
        for &j in &cols[i] {
            let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
            if a == b {
                return Ok(true);
            }
            parent[a] = b;
        }
    }
    Ok(false)
}
