use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greedypack::audit::{
    codiet_error, coquasirandomness_error, cover_error, diet_error, quasirandomness_error,
    AuditPolicy,
};
use greedypack::engine::{verify_packing, Embedding, PackingResult};
use greedypack::generators::generate_any;
use greedypack::harness::{run_experiment, ExperimentConfig};
use greedypack::rng::stream_rng;
use greedypack::{prepare_guest_family, Error, Graph, PrepareOptions, PreparedGuest, VertexSet};

#[derive(Parser)]
#[command(name = "greedypack", version, about = "Randomized greedy packing of degenerate graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a packing experiment and write one CSV row per trial.
    Pack(PackArgs),
    /// Measure a quasirandomness condition on edge-list graphs.
    Audit(AuditArgs),
    /// Generate a graph from a spec string such as `tree:n=50`.
    Gen(GenArgs),
    /// Re-check a packing result against its host and guests.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PackArgs {
    /// JSON experiment config; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    host: Option<String>,
    /// Guest specs separated by `;` (repeatable).
    #[arg(long)]
    guests: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated audit stages.
    #[arg(long, value_delimiter = ',')]
    checkpoints: Option<Vec<usize>>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary destination.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Directory for per-trial host, guests, result JSON and colors.
    #[arg(long)]
    artifacts: Option<PathBuf>,
    #[arg(long)]
    continue_on_completion_failure: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// Degeneracy bound `D` for guest preparation.
    #[arg(long)]
    degeneracy: Option<usize>,
    #[arg(long)]
    auto_shrink: bool,
    /// Fill the wall_ms column (output is then no longer reproducible).
    #[arg(long)]
    wall_time: bool,
    #[command(flatten)]
    policy: PolicyArgs,
}

#[derive(Args, Clone)]
struct PolicyArgs {
    /// Largest witness set size `L`.
    #[arg(long)]
    max_set_size: Option<usize>,
    /// Sizes up to this are enumerated exhaustively (default min(L, 2)).
    #[arg(long)]
    exhaustive_max: Option<usize>,
    /// Sampled witness sets per larger size.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    policy_seed: Option<u64>,
}

impl PolicyArgs {
    fn any(&self) -> bool {
        self.max_set_size.is_some()
            || self.exhaustive_max.is_some()
            || self.samples.is_some()
            || self.policy_seed.is_some()
    }

    fn apply(&self, base: AuditPolicy) -> AuditPolicy {
        let max_set_size = self.max_set_size.unwrap_or(base.max_set_size);
        AuditPolicy {
            max_set_size,
            exhaustive_max_size: self
                .exhaustive_max
                .unwrap_or_else(|| base.exhaustive_max_size.min(max_set_size)),
            samples_per_size: self.samples.unwrap_or(base.samples_per_size),
            rng_seed: self.policy_seed.unwrap_or(base.rng_seed),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditKind {
    Quasi,
    Coquasi,
    Diet,
    Codiet,
    Cover,
}

#[derive(Args)]
struct AuditArgs {
    kind: AuditKind,
    /// The audited graph (`F` or `H`; the host for `cover`).
    #[arg(long)]
    graph: PathBuf,
    /// Second graph for `coquasi` and `codiet`.
    #[arg(long)]
    second: Option<PathBuf>,
    /// Whitespace-separated excluded vertices for `diet` and `codiet`.
    #[arg(long)]
    excluded: Option<PathBuf>,
    /// Guest in positional order, for `cover`.
    #[arg(long)]
    guest: Option<PathBuf>,
    /// Tail length of the positional guest.
    #[arg(long, default_value_t = 0)]
    tail: usize,
    /// Partial embedding JSON (`{"host_n": .., "forward": [..]}`), for `cover`.
    #[arg(long)]
    embedding: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[command(flatten)]
    policy: PolicyArgs,
}

#[derive(Args)]
struct GenArgs {
    spec: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; a directory when the spec yields several graphs.
    /// Stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    host: PathBuf,
    /// Guest edge-list files in packing order.
    #[arg(long, num_args = 0..)]
    guests: Vec<PathBuf>,
    #[arg(long)]
    result: PathBuf,
    /// Optional little-endian u32 color array to compare with the result.
    #[arg(long)]
    colors: Option<PathBuf>,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    degeneracy: usize,
    #[arg(long)]
    auto_shrink: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Pack(a) => pack(a),
        Command::Audit(a) => audit(a),
        Command::Gen(a) => gen(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Error::Config(problems)) => {
            eprintln!("error: invalid configuration");
            for p in problems {
                eprintln!("  - {p}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn pack(a: PackArgs) -> greedypack::Result<ExitCode> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(h) = &a.host {
        cfg.host = Some(h.parse()?);
    }
    if !a.guests.is_empty() {
        cfg.guests = a
            .guests
            .iter()
            .flat_map(|g| g.split(';'))
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<greedypack::Result<_>>()?;
    }
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {$(
            if let Some(v) = a.$flag.clone() { cfg.$field = v; }
        )*};
    }
    set!(seed => master_seed, gamma => gamma, delta => delta, trials => trials, workers => workers);
    if let Some(c) = &a.checkpoints {
        cfg.checkpoints = Some(c.clone());
    }
    if a.degeneracy.is_some() {
        cfg.max_degeneracy = a.degeneracy;
    }
    if a.policy.any() {
        let base = cfg
            .policy
            .clone()
            .unwrap_or_else(|| AuditPolicy::for_degeneracy(cfg.max_degeneracy.unwrap_or(1)));
        cfg.policy = Some(a.policy.apply(base));
    }
    cfg.continue_on_completion_failure |= a.continue_on_completion_failure;
    cfg.auto_shrink |= a.auto_shrink;
    cfg.record_wall_time |= a.wall_time;
    if a.out.is_some() {
        cfg.csv_out = a.out.clone();
    }
    if a.summary.is_some() {
        cfg.summary_out = a.summary.clone();
    }
    if a.artifacts.is_some() {
        cfg.artifacts_dir = a.artifacts.clone();
    }

    let out = run_experiment(&cfg)?;
    if cfg.csv_out.is_none() {
        emit(&out.csv)?;
    }
    let s = &out.summary;
    eprintln!(
        "{} of {} trials succeeded ({} embedding failures, {} completion failures)",
        s.successes, s.trials, s.embed_failures, s.completion_failures
    );
    Ok(ExitCode::SUCCESS)
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> io::Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn read_vertex_list(path: &Path, n: usize) -> greedypack::Result<VertexSet> {
    let text = fs::read_to_string(path)?;
    let mut set = VertexSet::empty(n);
    for (i, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            match tok.parse::<u32>() {
                Ok(v) if (v as usize) < n => {
                    set.insert(v);
                }
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: format!("expected a vertex id below {n}, got \"{tok}\""),
                    })
                }
            }
        }
    }
    Ok(set)
}

fn need<'a>(v: &'a Option<PathBuf>, flag: &str, kind: &str) -> greedypack::Result<&'a Path> {
    v.as_deref()
        .ok_or_else(|| Error::InvalidParameter(format!("{kind} audit needs --{flag}")))
}

fn audit(a: AuditArgs) -> greedypack::Result<ExitCode> {
    let h = Graph::read_edge_list_file(&a.graph)?;
    let policy = a.policy.apply(AuditPolicy::exhaustive(2));
    let second = || -> greedypack::Result<Graph> {
        Graph::read_edge_list_file(need(&a.second, "second", "this")?)
    };
    let excluded = || -> greedypack::Result<VertexSet> {
        match &a.excluded {
            Some(p) => read_vertex_list(p, h.n()),
            None => Ok(VertexSet::empty(h.n())),
        }
    };
    let json = match a.kind {
        AuditKind::Quasi => serde_json::to_string_pretty(&quasirandomness_error(&h, &policy)?)?,
        AuditKind::Diet => serde_json::to_string_pretty(&diet_error(&h, &excluded()?, &policy)?)?,
        AuditKind::Coquasi => {
            serde_json::to_string_pretty(&coquasirandomness_error(&h, &second()?, &policy)?)?
        }
        AuditKind::Codiet => {
            serde_json::to_string_pretty(&codiet_error(&h, &second()?, &excluded()?, &policy)?)?
        }
        AuditKind::Cover => {
            let g = Graph::read_edge_list_file(need(&a.guest, "guest", "cover")?)?;
            let guest = PreparedGuest::from_positional(g, a.tail)?;
            let psi: Embedding =
                serde_json::from_str(&fs::read_to_string(need(&a.embedding, "embedding", "cover")?)?)?;
            serde_json::to_string_pretty(&cover_error(&guest, &h, &psi, a.start, a.eps)?)?
        }
    };
    emit(&json)?;
    emit("\n")?;
    Ok(ExitCode::SUCCESS)
}

fn gen(a: GenArgs) -> greedypack::Result<ExitCode> {
    let graphs = generate_any(&a.spec, &mut stream_rng(a.seed, 0))?;
    match (&a.out, graphs.as_slice()) {
        (None, _) => {
            for g in &graphs {
                emit(&g.to_edge_list_string())?;
            }
        }
        (Some(path), [g]) => g.write_edge_list(fs::File::create(path)?)?,
        (Some(dir), _) => {
            fs::create_dir_all(dir)?;
            for (i, g) in graphs.iter().enumerate() {
                g.write_edge_list(fs::File::create(dir.join(format!("graph_{i:03}.txt")))?)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> greedypack::Result<ExitCode> {
    let host = Graph::read_edge_list_file(&a.host)?;
    let guests = a
        .guests
        .iter()
        .map(Graph::read_edge_list_file)
        .collect::<greedypack::Result<Vec<_>>>()?;
    let family = prepare_guest_family(
        &guests,
        host.n(),
        a.degeneracy,
        &PrepareOptions {
            delta: a.delta,
            auto_shrink: a.auto_shrink,
        },
    )?;
    let result: PackingResult = serde_json::from_str(&fs::read_to_string(&a.result)?)?;
    let verdict = verify_packing(&family.guests, &host, &result);
    let mut ok = verdict.passed();
    emit(&format!("{verdict}\n"))?;
    if let Some(path) = &a.colors {
        if fs::read(path)? != result.colors_le_bytes() {
            emit("color array file differs from the result's colors\n")?;
            ok = false;
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
