//! Monte-Carlo BER/FER estimation over BPSK and AWGN.
//!
//! The all-zero codeword is sent. Noise for frame `f` at SNR index `s` comes
//! from a ChaCha8 generator seeded with the run seed on stream
//! `(s << 40) | f`, so a result depends only on the configuration and never on
//! the worker count. Frames are drawn in fixed batches and the stop rule is
//! checked between batches.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::convcode::ConvCode;
use crate::decode::{llr_from_awgn, noise_variance, BpDecoder, PipelineDecoder, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::gf2::{gf2_rank, SparseBinMatrix};
use crate::Llr;

/// Frames shorter than this many constraint lengths are rejected for
/// pipeline decoding.
pub const MIN_FRAME_CONSTRAINT_LENGTHS: usize = 20;

#[derive(Clone, Debug)]
pub enum SimCode {
    Block(SparseBinMatrix),
    /// A convolutional code sent in terminated frames of `frame_blocks`
    /// blocks. `None` picks `20 ν_s` symbols.
    Conv { code: ConvCode, frame_blocks: Option<usize> },
}

impl SimCode {
    pub fn conv(code: ConvCode) -> Self {
        SimCode::Conv { code, frame_blocks: None }
    }

    /// Rate used for Eb/N0: `(n - rank H) / n` for block codes and `b / c`
    /// for convolutional codes.
    pub fn rate(&self) -> f64 {
        match self {
            SimCode::Block(h) => (h.cols() - gf2_rank(h)) as f64 / h.cols() as f64,
            SimCode::Conv { code, .. } => code.b() as f64 / code.c() as f64,
        }
    }

    /// Symbols per transmitted frame.
    pub fn frame_len(&self) -> usize {
        match self {
            SimCode::Block(h) => h.cols(),
            SimCode::Conv { code, frame_blocks } => code.c() * self.conv_blocks(code, *frame_blocks),
        }
    }

    fn conv_blocks(&self, code: &ConvCode, frame_blocks: Option<usize>) -> usize {
        frame_blocks.unwrap_or_else(|| (MIN_FRAME_CONSTRAINT_LENGTHS * code.nu_s()).div_ceil(code.c()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    /// Flooding sum-product with syndrome-based stopping.
    Block { max_iter: usize },
    /// Pipeline decoder with `I` processors.
    Pipeline { iterations: usize },
}

impl Default for DecoderKind {
    fn default() -> Self {
        DecoderKind::Block { max_iter: DEFAULT_MAX_ITER }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub max_frames: u64,
    pub min_bit_errors: u64,
    pub min_frame_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_frames: 1_000_000,
            min_bit_errors: 500,
            min_frame_errors: 100,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub code_id: String,
    pub code: SimCode,
    pub decoder: DecoderKind,
    pub snr_db: Vec<f64>,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    /// Frames per batch. Changing it can change the result.
    pub batch: usize,
}

impl SimConfig {
    pub fn new(code_id: impl Into<String>, code: SimCode, decoder: DecoderKind, snr_db: Vec<f64>, seed: u64) -> Self {
        SimConfig {
            code_id: code_id.into(),
            code,
            decoder,
            snr_db,
            stop: StopRule::default(),
            seed,
            threads: 1,
            batch: 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(Error::InvalidArgument("empty SNR list".into()));
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument("SNR values must be finite".into()));
        }
        let s = &self.stop;
        if s.max_frames == 0 || s.min_bit_errors == 0 || s.min_frame_errors == 0 || self.batch == 0 {
            return Err(Error::InvalidArgument("stop rules and batch size must be positive".into()));
        }
        if self.snr_db.len() >= 1 << 23 {
            return Err(Error::InvalidArgument("too many SNR points".into()));
        }
        match (&self.code, self.decoder) {
            (SimCode::Block(_), DecoderKind::Block { max_iter }) if max_iter > 0 => Ok(()),
            (SimCode::Conv { code, frame_blocks }, DecoderKind::Pipeline { iterations }) if iterations > 0 => {
                let blocks = self.code.conv_blocks(code, *frame_blocks);
                if blocks * code.c() < MIN_FRAME_CONSTRAINT_LENGTHS * code.nu_s() {
                    return Err(Error::InvalidArgument(format!(
                        "frame of {blocks} blocks is shorter than {MIN_FRAME_CONSTRAINT_LENGTHS} constraint lengths"
                    )));
                }
                Ok(())
            }
            (_, DecoderKind::Block { max_iter: 0 }) | (_, DecoderKind::Pipeline { iterations: 0 }) => {
                Err(Error::InvalidArgument("iteration count must be positive".into()))
            }
            (SimCode::Block(_), _) => Err(Error::InvalidArgument("pipeline decoder needs a convolutional code".into())),
            (SimCode::Conv { .. }, _) => Err(Error::InvalidArgument("block decoder needs a block code".into())),
        }
    }

    /// Applies `key=value` settings (see [`parse_kv`]). The keys `code`,
    /// `code_id` and `type` are left to the caller; any other unknown key is
    /// an error.
    pub fn apply_kv(&mut self, kv: &BTreeMap<String, String>) -> Result<()> {
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::InvalidArgument(format!("bad value for {k}: {v}")))
        }
        let mut iterations = None;
        let mut kind = None;
        for (k, v) in kv {
            match k.as_str() {
                "code" | "code_id" | "type" => {}
                "snr" | "ebn0_db" => {
                    self.snr_db = v
                        .split(',')
                        .map(|s| num::<f64>(k, s.trim()))
                        .collect::<Result<Vec<_>>>()?;
                }
                "seed" => self.seed = num(k, v)?,
                "threads" => self.threads = num(k, v)?,
                "batch" => self.batch = num(k, v)?,
                "max_frames" => self.stop.max_frames = num(k, v)?,
                "min_bit_errors" => self.stop.min_bit_errors = num(k, v)?,
                "min_frame_errors" => self.stop.min_frame_errors = num(k, v)?,
                "iterations" | "max_iter" => iterations = Some(num::<usize>(k, v)?),
                "frame_blocks" => match &mut self.code {
                    SimCode::Conv { frame_blocks, .. } => *frame_blocks = Some(num(k, v)?),
                    SimCode::Block(_) => {
                        return Err(Error::InvalidArgument("frame_blocks applies to convolutional codes".into()))
                    }
                },
                "decoder" => {
                    kind = Some(match v.as_str() {
                        "block" => "block",
                        "pipeline" => "pipeline",
                        _ => return Err(Error::InvalidArgument(format!("unknown decoder {v}"))),
                    })
                }
                _ => return Err(Error::InvalidArgument(format!("unknown key {k}"))),
            }
        }
        let kind = kind.unwrap_or(match self.decoder {
            DecoderKind::Block { .. } => "block",
            DecoderKind::Pipeline { .. } => "pipeline",
        });
        let it = iterations.unwrap_or(match self.decoder {
            DecoderKind::Block { max_iter } => max_iter,
            DecoderKind::Pipeline { iterations } => iterations,
        });
        self.decoder = if kind == "block" {
            DecoderKind::Block { max_iter: it }
        } else {
            DecoderKind::Pipeline { iterations: it }
        };
        Ok(())
    }
}

/// Parses a flat `key=value` file. `#` starts a comment and blank lines are
/// ignored; repeated keys are an error.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| crate::error::parse_err(i + 1, "expected key=value"))?;
        let k = k.trim().to_string();
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(crate::error::parse_err(i + 1, &format!("duplicate key {k}")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub iterations: u64,
    /// The error targets were met before the frame cap.
    pub converged: bool,
}

impl SimPoint {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits)
    }

    pub fn fer(&self) -> f64 {
        ratio(self.frame_errors, self.frames)
    }

    pub fn avg_iter(&self) -> f64 {
        ratio(self.iterations, self.frames)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SimResult {
    pub code_id: String,
    pub points: Vec<SimPoint>,
}

impl SimResult {
    /// Indices of points whose BER exceeds that of a lower-SNR point that met
    /// the error targets.
    pub fn non_monotone(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.points[a].ebn0_db.total_cmp(&self.points[b].ebn0_db));
        let mut out = Vec::new();
        for (pos, &i) in order.iter().enumerate() {
            let p = &self.points[i];
            let bad = order[..pos].iter().any(|&j| {
                let q = &self.points[j];
                q.converged && q.ebn0_db < p.ebn0_db && p.ber() > q.ber()
            });
            if bad {
                out.push(i);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("code_id,ebn0_db,frames,bits,bit_errors,frame_errors,ber,fer,avg_iter\n");
        for p in &self.points {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                self.code_id,
                fmt_sig(p.ebn0_db),
                p.frames,
                p.bits,
                p.bit_errors,
                p.frame_errors,
                fmt_sig(p.ber()),
                fmt_sig(p.fer()),
                fmt_sig(p.avg_iter())
            )
            .unwrap();
        }
        s
    }

    /// Reads back the output of [`SimResult::to_csv`]. Iteration totals are
    /// reconstructed from the rounded averages.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "code_id,ebn0_db,frames,bits,bit_errors,frame_errors,ber,fer,avg_iter" => {}
            _ => return Err(crate::error::parse_err(1, "missing header")),
        }
        let mut res = SimResult::default();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            let bad = || crate::error::parse_err(i + 2, "malformed row");
            if f.len() != 9 {
                return Err(bad());
            }
            if res.points.is_empty() {
                res.code_id = f[0].to_string();
            } else if res.code_id != f[0] {
                return Err(crate::error::parse_err(i + 2, "mixed code ids"));
            }
            let u = |s: &str| s.parse::<u64>().map_err(|_| bad());
            let frames = u(f[2])?;
            let avg: f64 = f[8].parse().map_err(|_| bad())?;
            res.points.push(SimPoint {
                ebn0_db: f[1].parse().map_err(|_| bad())?,
                frames,
                bits: u(f[3])?,
                bit_errors: u(f[4])?,
                frame_errors: u(f[5])?,
                iterations: (avg * frames as f64).round() as u64,
                converged: true,
            });
        }
        Ok(res)
    }
}

/// Writes [`SimResult::to_csv`] to `path`.
pub fn emit_csv(res: &SimResult, path: &Path) -> Result<()> {
    std::fs::write(path, res.to_csv()).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Formats with six significant digits, like C's `%.6g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mant.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

enum Worker {
    Block(BpDecoder<Llr>, usize),
    Pipe(PipelineDecoder<Llr>, usize),
}

impl Worker {
    fn run(&mut self, llr: &[Llr]) -> Result<(u64, u64)> {
        let (dec, it) = match self {
            Worker::Block(d, max_iter) => {
                let r = d.decode(llr, *max_iter, true)?;
                (r.decisions, r.iterations as u64)
            }
            Worker::Pipe(d, iters) => (d.decode(llr)?, *iters as u64),
        };
        Ok((dec.iter().map(|&b| b as u64).sum(), it))
    }
}

/// Runs the simulation described by `cfg`.
pub fn run_ber(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let template = match (&cfg.code, cfg.decoder) {
        (SimCode::Block(h), DecoderKind::Block { max_iter }) => Worker::Block(BpDecoder::new(h), max_iter),
        (SimCode::Conv { code, frame_blocks }, DecoderKind::Pipeline { iterations }) => {
            let blocks = cfg.code.conv_blocks(code, *frame_blocks);
            Worker::Pipe(PipelineDecoder::new(code, blocks, iterations)?, iterations)
        }
        _ => unreachable!("checked by validate"),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let n = cfg.code.frame_len();
    let rate = cfg.code.rate();
    let mut res = SimResult {
        code_id: cfg.code_id.clone(),
        points: Vec::new(),
    };
    for (si, &snr) in cfg.snr_db.iter().enumerate() {
        let sigma = noise_variance(snr, rate)?.sqrt();
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut p = SimPoint {
            ebn0_db: snr,
            frames: 0,
            bits: 0,
            bit_errors: 0,
            frame_errors: 0,
            iterations: 0,
            converged: false,
        };
        while p.frames < cfg.stop.max_frames {
            let start = p.frames;
            let end = (start + cfg.batch as u64).min(cfg.stop.max_frames);
            let frame = |w: &mut Worker, f: u64| -> Result<(u64, u64)> {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(((si as u64) << 40) | f);
                let y: Vec<f64> = (0..n).map(|_| 1.0 + normal.sample(&mut rng)).collect();
                w.run(&llr_from_awgn::<Llr>(&y, snr, rate)?)
            };
            let outcomes: Vec<Result<(u64, u64)>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map_init(|| template.clone_worker(), |w, f| frame(w, f))
                    .collect()
            });
            for o in outcomes {
                let (errs, it) = o?;
                p.frames += 1;
                p.bits += n as u64;
                p.bit_errors += errs;
                p.frame_errors += (errs > 0) as u64;
                p.iterations += it;
            }
            if p.bit_errors >= cfg.stop.min_bit_errors && p.frame_errors >= cfg.stop.min_frame_errors {
                p.converged = true;
                break;
            }
        }
        res.points.push(p);
    }
    Ok(res)
}

impl Worker {
    fn clone_worker(&self) -> Worker {
        match self {
            Worker::Block(d, i) => Worker::Block(d.clone(), *i),
            Worker::Pipe(d, i) => Worker::Pipe(d.clone(), *i),
        }
    }
}

/// SNR where the BER curve crosses `target`, by linear interpolation of
/// `log BER` between the first bracketing pair of points (sorted by SNR).
pub fn snr_at_ber(res: &SimResult, target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::NotBracketed(target));
    }
    let mut pts: Vec<(f64, f64)> = res.points.iter().map(|p| (p.ebn0_db, p.ber())).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pts.windows(2) {
        let ((s0, b0), (s1, b1)) = (w[0], w[1]);
        if b0 == target {
            return Ok(s0);
        }
        if b0 > target && target >= b1 {
            if b1 == target {
                return Ok(s1);
            }
            if b1 == 0.0 {
                continue;
            }
            let t = (b0.ln() - target.ln()) / (b0.ln() - b1.ln());
            return Ok(s0 + t * (s1 - s0));
        }
    }
    match pts.last() {
        Some(&(s, b)) if b == target => Ok(s),
        _ => Err(Error::NotBracketed(target)),
    }
}

/// SNR needed by the block code minus SNR needed by the convolutional code
/// to reach `target_ber`.
pub fn convolutional_gain(block: &SimResult, conv: &SimResult, target_ber: f64) -> Result<f64> {
    Ok(snr_at_ber(block, target_ber)? - snr_at_ber(conv, target_ber)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hamming_8_4;

    fn point(snr: f64, ber: f64) -> SimPoint {
        SimPoint {
            ebn0_db: snr,
            frames: 1,
            bits: 1_000_000,
            bit_errors: (ber * 1e6).round() as u64,
            frame_errors: 1,
            iterations: 1,
            converged: true,
        }
    }

    fn curve(pts: &[(f64, f64)]) -> SimResult {
        SimResult {
            code_id: "x".into(),
            points: pts.iter().map(|&(s, b)| point(s, b)).collect(),
        }
    }

    #[test]
    fn sig_digits() {
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(0.000123456789), "0.000123457");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-07");
        assert_eq!(fmt_sig(9.9999996), "10");
        assert_eq!(fmt_sig(123456789.0), "1.23457e+08");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn gain_of_shifted_curve() {
        let a = curve(&[(1.0, 1e-2), (2.0, 1e-3), (3.0, 1e-4)]);
        let b = curve(&[(2.0, 1e-2), (3.0, 1e-3), (4.0, 1e-4)]);
        assert_eq!(convolutional_gain(&b, &a, 3e-3).unwrap(), 1.0);
        assert_eq!(convolutional_gain(&a, &a, 3e-3).unwrap(), 0.0);
        assert!(matches!(convolutional_gain(&a, &b, 1e-6), Err(Error::NotBracketed(_))));
    }

    #[test]
    fn flags_non_monotone() {
        let r = curve(&[(1.0, 1e-2), (2.0, 2e-2), (3.0, 1e-3)]);
        assert_eq!(r.non_monotone(), vec![1]);
    }

    #[test]
    fn kv_parsing() {
        let kv = parse_kv("# c\nsnr = 1, 2.5\nseed=9\ndecoder=block\nmax_iter=20\n").unwrap();
        let mut cfg = SimConfig::new("h", SimCode::Block(hamming_8_4()), DecoderKind::default(), vec![], 0);
        cfg.apply_kv(&kv).unwrap();
        assert_eq!(cfg.snr_db, vec![1.0, 2.5]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.decoder, DecoderKind::Block { max_iter: 20 });
        assert!(parse_kv("a=1\na=2").is_err());
        assert!(cfg.apply_kv(&parse_kv("bogus=1").unwrap()).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut cfg = SimConfig::new("ham", SimCode::Block(hamming_8_4()), DecoderKind::default(), vec![3.0], 5);
        cfg.stop.max_frames = 200;
        let r = run_ber(&cfg).unwrap();
        let back = SimResult::from_csv(&r.to_csv()).unwrap();
        assert_eq!(back.points[0].bit_errors, r.points[0].bit_errors);
        assert_eq!(back.to_csv(), r.to_csv());
        assert_eq!(SimResult::default().to_csv().lines().count(), 1);
    }

    #[test]
    fn mismatch_rejected() {
        let cfg = SimConfig::new(
            "ham",
            SimCode::Block(hamming_8_4()),
            DecoderKind::Pipeline { iterations: 5 },
            vec![3.0],
            5,
        );
        assert!(run_ber(&cfg).is_err());
    }
}
