use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ldpc_conv::analysis::{
    active_part_has_cycle, conv_cycle_spectrum, cycle_spectrum, fundamental_polytope_contains, girth,
    pseudoweights, CycleSpectrum,
};
use ldpc_conv::convcode::ConvCode;
use ldpc_conv::cover::{CoverKind, CoverSpec};
use ldpc_conv::gf2::{gf2_rank, read_alist, write_alist};
use ldpc_conv::sim::{emit_csv, parse_kv, run_ber, DecoderKind, SimCode, SimConfig};
use ldpc_conv::unwrap::{diagonal_cut_code, jfz_random_cut, jfz_unwrap, reduce_memory, tanner_unwrap};
use ldpc_conv::{PolyMatrix, Rational, RationalPseudoCodeword, SparseBinMatrix};

mod convfile;
mod manifest;

use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "ldpc-conv", version, about = "LDPC convolutional codes from LDPC block codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lift a polynomial matrix or a cover description to a parity-check matrix.
    Construct(ConstructArgs),
    /// Turn a block code into a convolutional code.
    Unwrap(UnwrapArgs),
    /// Reduce the syndrome former memory of a polynomial matrix.
    Reduce(ReduceArgs),
    /// Girth and cycle counts.
    Analyze(AnalyzeArgs),
    /// Pseudo-weights and polytope membership of a vector.
    Pseudoweight(PseudoArgs),
    /// BER/FER simulation over BPSK and AWGN.
    Simulate(SimArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Polynomial (exponent) matrix file.
    #[arg(long, conflicts_with = "parts", required_unless_present = "parts")]
    proto: Option<PathBuf>,
    /// Cover description with explicit parts and permutations.
    #[arg(long)]
    parts: Option<PathBuf>,
    /// Circulant size, needed when the polynomial file has none.
    #[arg(long)]
    r: Option<u32>,
    /// gcc1, gcc2 or qc (same matrix as gcc1).
    #[arg(long, default_value = "qc")]
    kind: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct UnwrapArgs {
    /// Polynomial matrix or alist file.
    input: PathBuf,
    #[arg(long, group = "method")]
    tanner: bool,
    #[arg(long, group = "method", requires = "ell")]
    jfz_diagonal: bool,
    #[arg(long, group = "method", requires = "seed")]
    jfz_random: bool,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output manifest; block files are written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// alist, polynomial matrix or convolutional code manifest.
    input: PathBuf,
    /// Longest cycle to count; defaults to twice the girth minus two.
    #[arg(long)]
    max_len: Option<usize>,
    /// Cycle CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PseudoArgs {
    /// Whitespace separated entries such as `1`, `0` or `1/2`.
    #[arg(long)]
    vector: PathBuf,
    #[arg(long)]
    alist: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimArgs {
    /// key=value file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra key=value settings, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Construct(a) => construct(a),
        Cmd::Unwrap(a) => unwrap(a),
        Cmd::Reduce(a) => reduce(a),
        Cmd::Analyze(a) => analyze(a),
        Cmd::Pseudoweight(a) => pseudoweight(a),
        Cmd::Simulate(a) => simulate(a),
    }
}

enum Input {
    Alist(SparseBinMatrix),
    Poly(PolyMatrix),
    Conv(ConvCode),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Sniffs the format from the first meaningful line: `convcode` for a
/// manifest, three fields for a polynomial matrix, otherwise alist.
fn load(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let ctx = || format!("parsing {}", path.display());
    if first == convfile::MAGIC {
        Ok(Input::Conv(convfile::read_conv(path)?))
    } else if first.split_whitespace().count() == 3 {
        Ok(Input::Poly(text.parse().with_context(ctx)?))
    } else {
        Ok(Input::Alist(read_alist(&text).with_context(ctx)?))
    }
}

fn load_matrix(path: &Path) -> Result<SparseBinMatrix> {
    match load(path)? {
        Input::Alist(h) => Ok(h),
        Input::Poly(p) => Ok(p.expand().with_context(|| format!("expanding {}", path.display()))?),
        Input::Conv(_) => bail!("{} is a convolutional code, expected a block code", path.display()),
    }
}

fn load_poly(path: &Path) -> Result<PolyMatrix> {
    match load(path)? {
        Input::Poly(p) => Ok(p),
        _ => bail!("{} is not a polynomial matrix", path.display()),
    }
}

fn construct(a: ConstructArgs) -> Result<()> {
    let mut m = RunManifest::new("construct");
    let spec = if let Some(parts) = &a.parts {
        m.input(parts);
        read(parts)?
            .parse::<CoverSpec>()
            .with_context(|| format!("parsing {}", parts.display()))?
    } else {
        let proto = a.proto.as_ref().expect("clap requires --proto or --parts");
        m.input(proto);
        let mut p = load_poly(proto)?;
        match (p.modulus(), a.r) {
            (None, Some(r)) => p = p.with_modulus(Some(r))?,
            (Some(q), Some(r)) if q != r => bail!("file has circulant size {q} but --r is {r}"),
            (None, None) => bail!("circulant size missing: pass --r"),
            _ => {}
        }
        let kind = match a.kind.as_str() {
            "qc" => CoverKind::Gcc1,
            k => k.parse()?,
        };
        m.param("kind", &a.kind);
        m.param("r", p.modulus().unwrap_or(0));
        CoverSpec::from_poly(&p, kind)?
    };
    let cover = spec.build()?;
    let parallel = cover.parallel_edges();
    if !parallel.is_empty() {
        eprintln!(
            "warning: {} entries carry parallel edges; the alist keeps multiplicities mod 2",
            parallel.len()
        );
    }
    let h = cover.matrix_gf2();
    write(&a.out, &write_alist(&h))?;
    println!("{}x{} rank {}", h.rows(), h.cols(), gf2_rank(&h));
    m.output(&a.out);
    m.write_beside(&a.out)
}

fn unwrap(a: UnwrapArgs) -> Result<()> {
    let mut m = RunManifest::new("unwrap");
    m.input(&a.input);
    let code = if a.tanner {
        m.param("method", "tanner");
        ConvCode::from_tanner_poly(&tanner_unwrap(&load_poly(&a.input)?)?)?
    } else if a.jfz_diagonal {
        let ell = a.ell.expect("clap requires --ell");
        m.param("method", "jfz-diagonal");
        m.param("ell", ell);
        let (code, cut) = diagonal_cut_code(&load_matrix(&a.input)?, ell)?;
        println!("{cut}");
        code
    } else if a.jfz_random {
        let seed = a.seed.expect("clap requires --seed");
        m.param("method", "jfz-random");
        m.seed = Some(seed);
        jfz_unwrap(&jfz_random_cut(&load_matrix(&a.input)?, seed))?
    } else {
        bail!("choose one of --tanner, --jfz-diagonal, --jfz-random");
    };
    println!("{}", code.params_report());
    for p in convfile::write_conv(&code, &a.out)? {
        m.output(&p);
    }
    m.write_beside(&a.out)
}

fn reduce(a: ReduceArgs) -> Result<()> {
    let mut m = RunManifest::new("reduce");
    m.input(&a.input);
    let p = load_poly(&a.input)?;
    let r = reduce_memory(&p)?;
    let ms = |q: &PolyMatrix| q.max_exponent().unwrap_or(0);
    println!("m_s {} -> {}", ms(&p), ms(&r));
    write(&a.out, &r.to_string())?;
    m.output(&a.out);
    m.write_beside(&a.out)
}

/// Smallest cycle length of a convolutional code, searched up to `limit`.
fn conv_girth(code: &ConvCode, limit: usize) -> Result<Option<usize>> {
    let mut len = 4;
    while len <= limit {
        let s = conv_cycle_spectrum(code, len)?;
        if s.girth.is_some() {
            return Ok(s.girth);
        }
        len += 2;
    }
    Ok(None)
}

const CONV_GIRTH_SEARCH: usize = 20;

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let mut m = RunManifest::new("analyze");
    m.input(&a.input);
    let (g, spectrum): (Option<usize>, CycleSpectrum) = match load(&a.input)? {
        Input::Conv(code) => {
            let g = conv_girth(&code, a.max_len.unwrap_or(CONV_GIRTH_SEARCH))?;
            let max_len = a.max_len.or(g.map(|g| 2 * g - 2)).unwrap_or(0);
            (g, conv_cycle_spectrum(&code, max_len)?)
        }
        other => {
            let h = match other {
                Input::Alist(h) => h,
                Input::Poly(p) => p.expand()?,
                Input::Conv(_) => unreachable!(),
            };
            let g = girth(&h);
            let max_len = a.max_len.or(g.map(|g| 2 * g - 2)).unwrap_or(0);
            (g, cycle_spectrum(&h, max_len)?)
        }
    };
    match g {
        Some(g) => println!("girth {g}"),
        None => println!("girth inf"),
    }
    for (len, _) in &spectrum.counts {
        println!("N_{len} {:.3}", spectrum.normalized_f64(*len));
    }
    if let Some(l) = a.max_len {
        m.param("max_len", l);
    }
    write(&a.out, &spectrum.to_csv())?;
    m.output(&a.out);
    m.write_beside(&a.out)
}

fn pseudoweight(a: PseudoArgs) -> Result<()> {
    let mut m = RunManifest::new("pseudoweight");
    m.input(&a.vector);
    m.input(&a.alist);
    let h = read_alist(&read(&a.alist)?).with_context(|| format!("parsing {}", a.alist.display()))?;
    let values = read(&a.vector)?
        .split_whitespace()
        .map(|t| t.parse::<Rational>().map_err(|_| anyhow!("bad entry `{t}` in {}", a.vector.display())))
        .collect::<Result<Vec<_>>>()?;
    let w = RationalPseudoCodeword::new(values)?;
    if w.len() != h.cols() {
        bail!("vector has {} entries, the matrix has {} columns", w.len(), h.cols());
    }
    let pw = pseudoweights(&w)?;
    let f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
    let report = format!(
        "awgnc {} {:.6}\nbsc {} {:.6}\nbec {}\nin_polytope {}\nactive_part_has_cycle {}\n",
        pw.awgnc,
        f(&pw.awgnc),
        pw.bsc,
        f(&pw.bsc),
        pw.bec,
        fundamental_polytope_contains(&h, &w)?,
        active_part_has_cycle(&h, &w)?
    );
    print!("{report}");
    write(&a.out, &report)?;
    m.output(&a.out);
    m.write_beside(&a.out)
}

fn simulate(a: SimArgs) -> Result<()> {
    let mut m = RunManifest::new("simulate");
    let mut kv = BTreeMap::new();
    let mut base = PathBuf::new();
    if let Some(c) = &a.config {
        m.input(c);
        kv = parse_kv(&read(c)?).with_context(|| format!("parsing {}", c.display()))?;
        base = c.parent().map(Path::to_path_buf).unwrap_or_default();
    }
    for s in &a.set {
        let (k, v) = s.split_once('=').ok_or_else(|| anyhow!("--set expects KEY=VALUE, got `{s}`"))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    if kv.contains_key("seed") || kv.contains_key("threads") {
        bail!("seed and threads are set with --seed and --threads only");
    }
    let code_path = base.join(kv.get("code").ok_or_else(|| anyhow!("config needs a `code` entry"))?);
    m.input(&code_path);
    let code_id = kv.get("code_id").cloned().unwrap_or_else(|| {
        code_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "code".into())
    });
    let (code, decoder) = match load(&code_path)? {
        Input::Conv(c) => (SimCode::conv(c), DecoderKind::Pipeline { iterations: 100 }),
        Input::Alist(h) => (SimCode::Block(h), DecoderKind::default()),
        Input::Poly(p) => (SimCode::Block(p.expand()?), DecoderKind::default()),
    };
    let mut cfg = SimConfig::new(code_id, code, decoder, Vec::new(), a.seed);
    cfg.threads = a.threads;
    cfg.apply_kv(&kv)?;
    for (k, v) in &kv {
        if k != "code" {
            m.param(k, v);
        }
    }
    m.seed = Some(a.seed);
    let res = run_ber(&cfg)?;
    for i in res.non_monotone() {
        eprintln!("warning: BER rises at {} dB", res.points[i].ebn0_db);
    }
    for p in res.points.iter().filter(|p| !p.converged) {
        eprintln!("warning: frame cap reached at {} dB before the error targets", p.ebn0_db);
    }
    emit_csv(&res, &a.out)?;
    print!("{}", res.to_csv());
    m.output(&a.out);
    m.write_beside(&a.out)
}
