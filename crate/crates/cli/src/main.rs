use std::collections::hash_map::RandomState;
use std::fmt;
use std::fs;
use std::hash::{BuildHasher, Hasher};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use radon_core::export::{lattice_to_dot, lattice_to_json};
use radon_core::geometry::{fixtures, PointConfig};
use radon_core::montecarlo::{
    compare_samplers, estimate_partition_probability, estimate_reay_probability,
    estimate_tolerance_probability, SimConfig,
};
use radon_core::tables::{generate, TableKind};
use radon_core::volumes::{v0_exact, Method, VkRequest, VolumeEngine};

#[derive(Parser, Debug)]
#[command(name = "radon", version, about = "Radon partitions of Gaussian points: intrinsic volumes, polytopes, simulations")]
struct Cli {
    #[command(flatten)]
    shared: Shared,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Shared {
    /// Absolute tolerance of numerical evaluations
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed of randomized commands (drawn from entropy and echoed if absent)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of Monte Carlo samples
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: u64,

    /// Worker threads for simulations
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Output format (defaults depend on the command)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Require --seed for randomized commands
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intrinsic volume v_k(m,n) of a partition cone
    Vk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// auto, m1, m2, m3, kmax or general
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Probability that a fixed (m,n) partition of Gaussian points in R^d is Radon
    Prob {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Regenerate a reference table of v_k(m,n)
    Tables {
        #[arg(value_enum)]
        section: Section,
        /// Largest column n (defaults to the reference table's)
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Gauss–Bonnet and symmetry identities, plus the balance probe
    Identities {
        /// Check all shapes with m + n up to this total
        #[arg(long, default_value_t = 12)]
        max_total: usize,
    },
    /// Radon polytope of a point set: lattice as JSON or DOT
    Polytope {
        #[command(flatten)]
        source: PointSource,
    },
    /// Monte Carlo estimates
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
        /// Dimension
        #[arg(long)]
        d: usize,
        /// |A| for `radon`
        #[arg(long)]
        m: Option<usize>,
        /// |B| for `radon`; number of points otherwise
        #[arg(long)]
        n: usize,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Section {
    M1,
    M2,
    M3,
    Kmax,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SimKind {
    Radon,
    Reay,
    Tolerance,
    /// Chi-square comparison of Gaussian and Gram–Schmidt sampling
    Compare,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PointSource {
    /// CSV file with one point per row
    #[arg(long)]
    points: Option<PathBuf>,
    /// x_i = i for i = 1..N
    #[arg(long)]
    line: Option<usize>,
    /// N-th roots of unity
    #[arg(long)]
    circle: Option<usize>,
    /// Regular pentagon plus its center
    #[arg(long)]
    pentagon_center: bool,
}

/// Invalid flag combinations, reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let s = &cli.shared;
    if !(s.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    if s.workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    let output = match &cli.command {
        Command::Vk { k, m, n, method } => {
            let method: Method = method.parse().map_err(|e| usage(format!("{e}")))?;
            let format = pick_format(s.format, Format::Json, &[Format::Json, Format::Csv])?;
            cmd_vk(*k, *m, *n, method, s.tol, format)?
        }
        Command::Prob { d, m, n } => {
            let format = pick_format(s.format, Format::Json, &[Format::Json, Format::Csv])?;
            cmd_prob(*d, *m, *n, s.tol, format)?
        }
        Command::Tables { section, max_n } => {
            let format = pick_format(s.format, Format::Csv, &[Format::Json, Format::Csv])?;
            cmd_tables(*section, *max_n, s.tol, format)?
        }
        Command::Identities { max_total } => {
            pick_format(s.format, Format::Json, &[Format::Json])?;
            cmd_identities(*max_total, s.tol)?
        }
        Command::Polytope { source } => {
            let format = pick_format(s.format, Format::Json, &[Format::Json, Format::Dot])?;
            cmd_polytope(source, format)?
        }
        Command::Simulate { kind, d, m, n } => {
            pick_format(s.format, Format::Json, &[Format::Json])?;
            let seed = match s.seed {
                Some(seed) => seed,
                None if s.strict => return Err(usage("--strict requires --seed for simulate")),
                None => {
                    let seed = RandomState::new().build_hasher().finish();
                    eprintln!("seed: {seed}");
                    seed
                }
            };
            let cfg = SimConfig::new(s.samples, seed).workers(s.workers);
            cmd_simulate(*kind, *d, *m, *n, cfg)?
        }
    };
    match &s.out {
        Some(path) => fs::write(path, output).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{output}"),
    }
    Ok(())
}

fn pick_format(requested: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(format!("--format {f:?} is not available for this command").to_lowercase()))
    }
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_vk(k: usize, m: usize, n: usize, method: Method, tol: f64, format: Format) -> Result<String> {
    let engine = VolumeEngine::default();
    let value = engine.vk(VkRequest::new(k, m, n).method(method).tol(tol))?;
    let exact = if k == 0 { Some(v0_exact(m, n)?.to_string()) } else { None };
    Ok(match format {
        Format::Csv => format!("k,m,n,method,value\n{k},{m},{n},{method},{value:e}\n"),
        _ => pretty(&json!({
            "k": k, "m": m, "n": n, "method": method.name(), "tol": tol,
            "value": value, "exact": exact,
        }))?,
    })
}

fn cmd_prob(d: usize, m: usize, n: usize, tol: f64, format: Format) -> Result<String> {
    let engine = VolumeEngine::default();
    let p = engine.radon_probability(d, m, n, tol)?;
    Ok(match format {
        Format::Csv => format!("d,m,n,probability\n{d},{m},{n},{p:e}\n"),
        _ => pretty(&json!({ "d": d, "m": m, "n": n, "tol": tol, "probability": p }))?,
    })
}

fn cmd_tables(section: Section, max_n: Option<usize>, tol: f64, format: Format) -> Result<String> {
    let kind = match section {
        Section::M1 => TableKind::M1,
        Section::M2 => TableKind::M2,
        Section::M3 => TableKind::M3,
        Section::Kmax => TableKind::Kmax,
    };
    let engine = VolumeEngine::default();
    let table = generate(&engine, kind, max_n.unwrap_or(kind.default_max_n()), tol)?;
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(&table)?)?,
        _ => table.to_csv(),
    })
}

fn cmd_identities(max_total: usize, tol: f64) -> Result<String> {
    let engine = VolumeEngine::default();
    let mut gauss_bonnet = Vec::new();
    let mut symmetry = Vec::new();
    let mut all_pass = true;
    let check_tol = tol;
    for total in 2..=max_total {
        for m in 1..total {
            let n = total - m;
            let gb = engine.check_gauss_bonnet(m, n, check_tol)?;
            all_pass &= gb.passed();
            gauss_bonnet.push(json!({
                "m": m, "n": n, "even_sum": gb.even_sum, "odd_sum": gb.odd_sum,
                "max_residual": gb.max_residual(), "passed": gb.passed(),
            }));
            if m <= n {
                let sym = engine.check_symmetry(m, n, check_tol)?;
                all_pass &= sym.passed();
                symmetry.push(json!({
                    "m": m, "n": n, "max_diff": sym.max_diff(),
                    "kmax_forward": sym.kmax_forward, "kmax_backward": sym.kmax_backward,
                    "passed": sym.passed(),
                }));
            }
        }
    }
    let mut balance = Vec::new();
    for d in 1..=3 {
        for total in d + 2..=max_total {
            let probe = engine.balance_probe(d, total, check_tol)?;
            balance.push(serde_json::to_value(&probe)?);
        }
    }
    let report = json!({
        "tol": check_tol,
        "passed": all_pass,
        "gauss_bonnet": gauss_bonnet,
        "symmetry": symmetry,
        "balance_probe": balance,
    });
    let text = pretty(&report)?;
    if !all_pass {
        anyhow::bail!("identity check failed:\n{text}");
    }
    Ok(text)
}

fn load_points(source: &PointSource) -> Result<PointConfig> {
    Ok(if let Some(path) = &source.points {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        PointConfig::from_csv(&text)?
    } else if let Some(n) = source.line {
        fixtures::line(n)?
    } else if let Some(n) = source.circle {
        fixtures::circle(n)?
    } else {
        fixtures::pentagon_with_center()?
    })
}

fn cmd_polytope(source: &PointSource, format: Format) -> Result<String> {
    let cfg = load_points(source)?;
    let lattice = cfg.face_lattice()?;
    let tolerant: Vec<String> = cfg.tolerant_partitions()?.iter().map(|p| p.label()).collect();
    if tolerant.is_empty() {
        eprintln!("tolerant partitions: none");
    } else {
        eprintln!("tolerant partitions: {}", tolerant.join(" "));
    }
    eprintln!(
        "f-vector: {}",
        lattice.f_vector().iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    );
    Ok(match format {
        Format::Dot => lattice_to_dot(&lattice)?,
        _ => {
            let mut doc: Value = serde_json::from_str(&lattice_to_json(&lattice)?)?;
            doc["tolerant"] = json!(tolerant);
            pretty(&doc)?
        }
    })
}

fn cmd_simulate(kind: SimKind, d: usize, m: Option<usize>, n: usize, cfg: SimConfig) -> Result<String> {
    let (label, estimate) = match kind {
        SimKind::Radon => {
            let m = m.ok_or_else(|| usage("simulate radon needs --m"))?;
            ("radon", estimate_partition_probability(d, m, n, cfg)?)
        }
        SimKind::Reay => ("reay", estimate_reay_probability(n, d, cfg)?),
        SimKind::Tolerance => ("tolerance", estimate_tolerance_probability(n, d, cfg)?),
        SimKind::Compare => {
            let report = compare_samplers(n, d, cfg.samples, cfg.seed)?;
            return pretty(&serde_json::to_value(&report)?);
        }
    };
    let mut doc = serde_json::to_value(&estimate)?;
    doc["kind"] = json!(label);
    doc["d"] = json!(d);
    doc["n"] = json!(n);
    if let Some(m) = m {
        doc["m"] = json!(m);
    }
    pretty(&doc)
}
