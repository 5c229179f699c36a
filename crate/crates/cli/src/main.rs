//! `gallager`: construct codes, inspect girth, verify error correction,
//! trace single decodes and simulate the BSC.
//!
//! Every run echoes its resolved configuration as one JSON line on stderr
//! and writes its files plus a `manifest.json` under `--out`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gallager::analysis::{self, MinSearchResult, SweepMode, SweepSpec};
use gallager::decoder::trace_to_jsonl;
use gallager::sim::{self, SimSpec};
use gallager::{
    decode_with_trace, find_min_uncorrectable, from_alist, girth, peg_search, to_alist, ConstructError,
    ConstructionSpec, DecoderConfig, TannerGraph, Word,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gallager", version, about = "Gallager A decoding and error-correction verification for LDPC codes")]
struct Cli {
    /// JSON object of subcommand options; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run directory for all output files.
    #[arg(long, global = true, default_value = "gallager-run")]
    out: PathBuf,
    /// Worker threads (defaults to available parallelism). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a column-weight code by progressive edge growth.
    Construct(ConstructArgs),
    /// Print the girth of an alist code (`inf` for a forest).
    Girth(GirthArgs),
    /// Decode every (or a sample of) low-weight error pattern, or search for the smallest failure.
    Verify(VerifyArgs),
    /// Decode one error pattern and write its message trace.
    Decode(DecodeArgs),
    /// Monte Carlo FER/BER over the binary symmetric channel.
    Simulate(SimulateArgs),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    dv: Option<usize>,
    /// Target girth.
    #[arg(long)]
    girth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seeds to try (seed, seed + 1, ...) until the target girth is met.
    #[arg(long)]
    attempts: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GirthArgs {
    #[arg(long)]
    alist: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyArgs {
    #[arg(long)]
    alist: Option<PathBuf>,
    #[arg(long)]
    max_weight: Option<usize>,
    #[arg(long)]
    min_weight: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Sample this many patterns per weight instead of enumerating all.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest number of patterns an exhaustive sweep or search may decode.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    failure_cap: Option<usize>,
    /// Search upward from --start-weight for the smallest uncorrectable pattern.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    search: bool,
    #[arg(long)]
    start_weight: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecodeArgs {
    #[arg(long)]
    alist: Option<PathBuf>,
    /// Comma-separated 0-based positions of flipped bits.
    #[arg(long)]
    errors: Option<String>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateArgs {
    #[arg(long)]
    alist: Option<PathBuf>,
    /// Comma-separated crossover probabilities.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Frames per point (upper bound).
    #[arg(long)]
    frames: Option<u64>,
    /// Stop a point after this many frame errors.
    #[arg(long)]
    target_errors: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    fit_min: Option<f64>,
    #[arg(long)]
    fit_max: Option<f64>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Infeasible(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Infeasible(_) | Failure::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Infeasible(m) => write!(f, "infeasible: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

type Outcome = Result<u8, Failure>;

const DEFAULT_ITERATIONS: usize = 20;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gallager: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    let config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Some(value)
        }
        None => None,
    };
    let out = Run { dir: cli.out.clone() };
    match cli.command {
        Command::Construct(a) => construct(overlay(a, config.as_ref())?, &out),
        Command::Girth(a) => cmd_girth(overlay(a, config.as_ref())?, &out),
        Command::Verify(a) => verify(overlay(a, config.as_ref())?, &out),
        Command::Decode(a) => decode(overlay(a, config.as_ref())?, &out),
        Command::Simulate(a) => simulate(overlay(a, config.as_ref())?, &out),
    }
}

/// Fills unset flags from the config object.
fn overlay<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Value>) -> Result<T, Failure> {
    let mut merged = match config {
        Some(Value::Object(map)) => map.clone(),
        Some(_) => return Err(Failure::Usage("config must be a JSON object".into())),
        None => serde_json::Map::new(),
    };
    if let Value::Object(set) = serde_json::to_value(&flags).expect("flags serialize") {
        for (k, v) in set {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Failure::Usage(format!("config: {e}")))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("missing required option --{flag}")))
}

fn echo_config(command: &str, resolved: &impl Serialize) -> Value {
    let header = json!({ "command": command, "config": resolved });
    eprintln!("{header}");
    header
}

struct Run {
    dir: PathBuf,
}

impl Run {
    fn write(&self, files: &mut Vec<String>, name: &str, contents: &str) -> Result<(), Failure> {
        fs::create_dir_all(&self.dir).map_err(|e| Failure::Io(format!("{}: {e}", self.dir.display())))?;
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        files.push(name.to_string());
        Ok(())
    }

    fn finish(&self, header: Value, mut files: Vec<String>) -> Result<(), Failure> {
        let manifest = json!({
            "tool": "gallager",
            "version": env!("CARGO_PKG_VERSION"),
            "command": header["command"],
            "config": header["config"],
            "files": files.clone(),
        });
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        self.write(&mut files, "manifest.json", &text)
    }
}

fn load_graph(path: &Path) -> Result<TannerGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    from_alist(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn construct(mut a: ConstructArgs, out: &Run) -> Outcome {
    let spec = ConstructionSpec {
        n: required(a.n, "n")?,
        m: required(a.m, "m")?,
        dv: *a.dv.get_or_insert(3),
        target_girth: *a.girth.get_or_insert(10),
        seed: *a.seed.get_or_insert(0),
    };
    let attempts = *a.attempts.get_or_insert(1);
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if attempts == 0 {
        return Err(Failure::Usage("--attempts must be at least 1".into()));
    }
    let header = echo_config("construct", &a);

    let (outcome, seed) = peg_search(&spec, attempts).map_err(|e| match e {
        ConstructError::InvalidSpec(m) => Failure::Usage(m),
        other => Failure::Infeasible(other.to_string()),
    })?;
    let met = outcome.achieved_girth.is_at_least(spec.target_girth);
    if !met {
        eprintln!("warning: achieved girth {} below target {}", outcome.achieved_girth, spec.target_girth);
    }
    let sidecar = json!({
        "spec": spec,
        "seed_used": seed,
        "achieved_girth": outcome.achieved_girth,
        "target_met": met,
        "edges": outcome.graph.num_edges(),
    });
    let mut files = Vec::new();
    out.write(&mut files, "code.alist", &to_alist(&outcome.graph))?;
    out.write(&mut files, "code.json", &(serde_json::to_string_pretty(&sidecar).unwrap() + "\n"))?;
    out.finish(header, files)?;
    println!("girth {} (target {}, seed {seed})", outcome.achieved_girth, spec.target_girth);
    Ok(0)
}

fn cmd_girth(a: GirthArgs, out: &Run) -> Outcome {
    let path = required(a.alist.clone(), "alist")?;
    let header = echo_config("girth", &a);
    let g = load_graph(&path)?;
    let value = girth(&g);
    let mut files = Vec::new();
    let body = json!({ "n": g.n(), "m": g.m(), "girth": value });
    out.write(&mut files, "girth.json", &(serde_json::to_string_pretty(&body).unwrap() + "\n"))?;
    out.finish(header, files)?;
    println!("{value}");
    Ok(0)
}

fn verify(mut a: VerifyArgs, out: &Run) -> Outcome {
    let path = required(a.alist.clone(), "alist")?;
    let g = load_graph(&path)?;
    // g/2 when checking the guarantee, 4g for open-ended searches
    let g_len = girth(&g).finite().unwrap_or(DEFAULT_ITERATIONS);
    let max_iters = *a.max_iters.get_or_insert(if a.search { 4 * g_len } else { (g_len / 2).max(1) });
    if max_iters == 0 {
        return Err(Failure::Usage("--max-iters must be at least 1".into()));
    }
    let budget = *a.budget.get_or_insert(analysis::DEFAULT_PATTERN_BUDGET);
    if a.search {
        let start = *a.start_weight.get_or_insert(1);
        let header = echo_config("verify", &a);
        let result =
            find_min_uncorrectable(&g, max_iters, start, budget).map_err(|e| Failure::Usage(e.to_string()))?;
        let mut files = Vec::new();
        out.write(&mut files, "search.json", &(serde_json::to_string_pretty(&result).unwrap() + "\n"))?;
        out.finish(header, files)?;
        match &result {
            MinSearchResult::Found { weight, configuration, patterns_tried, .. } => {
                println!("uncorrectable weight {weight}: {:?} ({patterns_tried} patterns tried)", configuration.support)
            }
            MinSearchResult::NoneWithinBudget { patterns_tried, .. } => {
                println!("no uncorrectable pattern within {patterns_tried} patterns")
            }
        }
        return Ok(0);
    }

    let max_weight = required(a.max_weight, "max-weight")?;
    let min_weight = *a.min_weight.get_or_insert(0);
    let failure_cap = *a.failure_cap.get_or_insert(analysis::DEFAULT_FAILURE_CAP);
    let mode = match a.samples {
        Some(count) => SweepMode::Sampled { count, seed: *a.seed.get_or_insert(0) },
        None => SweepMode::Exhaustive,
    };
    let spec = SweepSpec {
        max_weight,
        max_iterations: max_iters,
        mode,
        weight_range: Some((min_weight, max_weight)),
        failure_cap,
        pattern_budget: budget,
    };
    let header = echo_config("verify", &a);
    let report = analysis::exhaustive_verify(&g, &spec).map_err(|e| match e {
        analysis::AnalysisError::BudgetExceeded { .. } => Failure::Infeasible(e.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    let mut files = Vec::new();
    out.write(&mut files, "report.json", &(report.to_json() + "\n"))?;
    out.write(&mut files, "report.csv", &report.to_csv())?;
    out.finish(header, files)?;
    print!("{}", report.to_csv());
    let failed = report.total_failed();
    println!("failures: {failed} of {} patterns", report.total_tested());
    Ok(if failed > 0 { 3 } else { 0 })
}

fn parse_support(text: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let mut support = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i: usize = tok.parse().map_err(|_| Failure::Usage(format!("invalid error position {tok:?}")))?;
        if i >= n {
            return Err(Failure::Usage(format!("error position {i} out of range for n = {n}")));
        }
        support.push(i);
    }
    support.sort_unstable();
    support.dedup();
    Ok(support)
}

fn decode(mut a: DecodeArgs, out: &Run) -> Outcome {
    let path = required(a.alist.clone(), "alist")?;
    let errors = required(a.errors.clone(), "errors")?;
    let max_iters = *a.max_iters.get_or_insert(DEFAULT_ITERATIONS);
    if max_iters == 0 {
        return Err(Failure::Usage("--max-iters must be at least 1".into()));
    }
    let header = echo_config("decode", &a);
    let g = load_graph(&path)?;
    let support = parse_support(&errors, g.n())?;
    let r = Word::from_support(g.n(), &support);
    let outcome = decode_with_trace(&g, &r, &DecoderConfig::new(max_iters));
    let summary = json!({
        "errors": support,
        "converged": outcome.converged,
        "corrected": outcome.estimate.is_zero(),
        "iterations_used": outcome.iterations_used,
        "estimate_support": outcome.estimate.support(),
    });
    let mut files = Vec::new();
    out.write(&mut files, "trace.jsonl", &trace_to_jsonl(outcome.trace.as_deref().unwrap_or(&[])))?;
    out.write(&mut files, "decode.json", &(serde_json::to_string_pretty(&summary).unwrap() + "\n"))?;
    out.finish(header, files)?;
    println!(
        "converged {} after {} iterations; corrected {}",
        outcome.converged,
        outcome.iterations_used,
        outcome.estimate.is_zero()
    );
    Ok(0)
}

fn simulate(mut a: SimulateArgs, out: &Run) -> Outcome {
    let path = required(a.alist.clone(), "alist")?;
    let spec = SimSpec {
        crossover_probabilities: required(a.p.clone(), "p")?,
        frames_per_point: *a.frames.get_or_insert(1_000_000),
        target_frame_errors: Some(*a.target_errors.get_or_insert(sim::DEFAULT_TARGET_FRAME_ERRORS)),
        max_iterations: *a.max_iters.get_or_insert(DEFAULT_ITERATIONS),
        master_seed: *a.seed.get_or_insert(0),
        fit_range: match (a.fit_min, a.fit_max) {
            (None, None) => None,
            (lo, hi) => Some((lo.unwrap_or(0.0), hi.unwrap_or(1.0))),
        },
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let header = echo_config("simulate", &a);
    let g = load_graph(&path)?;
    let result = sim::simulate(&g, &spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut files = Vec::new();
    out.write(&mut files, "sim.csv", &result.to_csv())?;
    out.write(&mut files, "sim.json", &(result.to_json() + "\n"))?;
    out.finish(header, files)?;
    print!("{}", result.to_csv());
    match result.slope {
        Some(s) => println!("slope {s:.4}"),
        None => println!("slope undefined (fewer than two points with frame errors)"),
    }
    Ok(0)
}
