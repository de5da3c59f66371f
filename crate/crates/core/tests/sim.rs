mod common;

use common::*;
use ldpc_conv::codes::{hamming_8_4, toy_rate_third};
use ldpc_conv::decode::{bp_decode_block, llr_from_awgn, noise_variance};
use ldpc_conv::sim::*;
use rand_distr::{Distribution, Normal};

fn hamming_cfg(snr: Vec<f64>, seed: u64, frames: u64) -> SimConfig {
    let mut cfg = SimConfig::new("hamming", SimCode::Block(hamming_8_4()), DecoderKind::Block { max_iter: 100 }, snr, seed);
    cfg.stop = StopRule {
        max_frames: frames,
        min_bit_errors: u64::MAX,
        min_frame_errors: u64::MAX,
    };
    cfg
}

fn toy_cfg(seed: u64, threads: usize) -> SimConfig {
    let mut cfg = SimConfig::new(
        "toy",
        SimCode::conv(toy_rate_third()),
        DecoderKind::Pipeline { iterations: 10 },
        vec![1.0, 2.0, 3.0],
        seed,
    );
    cfg.stop = StopRule {
        max_frames: 200,
        min_bit_errors: 50,
        min_frame_errors: 5,
    };
    cfg.threads = threads;
    cfg
}

#[test]
fn identical_csv_for_any_thread_count() {
    let base = run_ber(&toy_cfg(17, 1)).unwrap().to_csv();
    for threads in [2, 8] {
        assert_eq!(run_ber(&toy_cfg(17, threads)).unwrap().to_csv(), base);
    }
    assert_ne!(run_ber(&toy_cfg(18, 1)).unwrap().to_csv(), base);
}

#[test]
fn reruns_write_identical_files() {
    let dir = std::env::temp_dir().join(format!("ldpc-sim-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    emit_csv(&run_ber(&hamming_cfg(vec![2.0, 3.0], 4, 500)).unwrap(), &a).unwrap();
    emit_csv(&run_ber(&hamming_cfg(vec![2.0, 3.0], 4, 500)).unwrap(), &b).unwrap();
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let back = SimResult::from_csv(std::str::from_utf8(&x).unwrap()).unwrap();
    assert_eq!(back.to_csv().as_bytes(), &x[..]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn very_high_snr_is_error_free() {
    let res = run_ber(&hamming_cfg(vec![40.0], 1, 300)).unwrap();
    let p = &res.points[0];
    assert_eq!((p.frames, p.bit_errors, p.frame_errors), (300, 0, 0));
    assert_eq!(p.ber(), 0.0);
    assert!(!p.converged);
    let mut conv = toy_cfg(2, 1);
    conv.snr_db = vec![40.0];
    let p = &run_ber(&conv).unwrap().points[0];
    assert_eq!(p.bit_errors, 0);
}

#[test]
fn hamming_ber_against_independent_runs() {
    // Independent Monte Carlo with the zero codeword: ML decoding, plain BP
    // and hard decisions, against the simulator on different noise.
    let (snr, frames) = (4.0, 20_000u64);
    let h = hamming_8_4();
    let words = brute_codewords(&h);
    let noise = Normal::new(0.0, noise_variance(snr, 0.5).unwrap().sqrt()).unwrap();
    let mut g = rng(99);
    let (mut ml_errs, mut bp_errs, mut raw_errs) = (0u64, 0u64, 0u64);
    for _ in 0..frames {
        let y: Vec<f64> = (0..8).map(|_| 1.0 + noise.sample(&mut g)).collect();
        let llr: Vec<f64> = llr_from_awgn(&y, snr, 0.5).unwrap();
        ml_errs += ml_decode(&words, &llr).iter().map(|&b| b as u64).sum::<u64>();
        bp_errs += bp_decode_block(&h, &llr, 100).unwrap().decisions.iter().map(|&b| b as u64).sum::<u64>();
        raw_errs += llr.iter().filter(|&&l| l < 0.0).count() as u64;
    }
    let bits = (8 * frames) as f64;
    let (ml, bp_ref, raw) = (ml_errs as f64 / bits, bp_errs as f64 / bits, raw_errs as f64 / bits);
    let sim = run_ber(&hamming_cfg(vec![snr], 3, frames)).unwrap().points[0].ber();
    assert!(ml < sim && sim < raw, "ml {ml} sim {sim} channel {raw}");
    assert!((sim / bp_ref - 1.0).abs() < 0.2, "sim {sim} reference {bp_ref}");
}

#[test]
fn stop_rule_is_checked_per_batch() {
    let mut cfg = toy_cfg(5, 1);
    cfg.snr_db = vec![0.0];
    cfg.stop.max_frames = 10_000;
    let p = &run_ber(&cfg).unwrap().points[0];
    assert!(p.converged);
    assert!(p.bit_errors >= 50 && p.frame_errors >= 5);
    // The rule is checked once per batch.
    assert_eq!(p.frames % cfg.batch as u64, 0);
    assert!(p.frames < 10_000);
}

#[test]
fn config_checks() {
    let mut cfg = toy_cfg(1, 1);
    cfg.code = SimCode::Conv {
        code: toy_rate_third(),
        frame_blocks: Some(10),
    };
    assert!(run_ber(&cfg).is_err());
    let mut cfg = hamming_cfg(vec![1.0], 1, 10);
    cfg.decoder = DecoderKind::Pipeline { iterations: 3 };
    assert!(run_ber(&cfg).is_err());
    let kv = parse_kv("# demo\nsnr = 1.0, 2.5  # two points\nmax_frames=7\n").unwrap();
    let mut cfg = hamming_cfg(vec![1.0], 1, 10);
    cfg.apply_kv(&kv).unwrap();
    assert_eq!(cfg.snr_db, vec![1.0, 2.5]);
    assert_eq!(cfg.stop.max_frames, 7);
    assert!(parse_kv("a=1\na=2").is_err());
    assert!(cfg.apply_kv(&parse_kv("colour=blue").unwrap()).is_err());
}
