//! `banachgeo`: volumes, volume ratios, Lozanovskii factorizations,
//! p-summing norm brackets and verification suites from the command line.
//!
//! Exit codes: 0 when no verdict FAILs (INCONCLUSIVE counts as failure only
//! with `--strict`), 1 on FAIL or a numerical error, 2 on a malformed input.

use std::hash::{BuildHasher, RandomState};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use banachgeo::lozanovskii::{alpha_beta, lozanovskii_factor};
use banachgeo::operator::OperatorSpec;
use banachgeo::suites::{preset, run_suite, run_sweep};
use banachgeo::summing::pi_p_bracket;
use banachgeo::volume::{ball_volume, hit_or_miss, radial_volume};
use banachgeo::vr::{vr_best, vr_estimate};
use banachgeo::{Exponent, GeoError, LinOperator, McConfig, NormedSpace, OptBudget, Report, SpaceSpec};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "banachgeo", version, about = "Convex-geometric computations on finite-dimensional normed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Treat INCONCLUSIVE verdicts as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "BANACHGEO_THREADS")]
    threads: Option<usize>,
    /// Master seed; a random seed is drawn and logged when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Optimizer budget: quick, default or thorough.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Override the number of optimizer restarts.
    #[arg(long, global = true)]
    restarts: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VolumeMethodArg {
    Auto,
    Exact,
    Radial,
    HitOrMiss,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of a unit ball.
    Volume {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum, default_value_t = VolumeMethodArg::Auto)]
        method: VolumeMethodArg,
    },
    /// Volume ratio of a space relative to ℓ_p.
    Vr {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        p: Exponent,
        /// Columns of T for p = ∞; the best of several counts when omitted.
        #[arg(long)]
        columns: Option<usize>,
    },
    /// Lozanovskii factorization of a space, or of a block sum with --blocks.
    Lozanovskii {
        /// The lattice to factor (or the outer space with --blocks).
        #[arg(long, alias = "outer")]
        space: PathBuf,
        /// Block dimensions, e.g. 2,3,1.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
    },
    /// Bracket the p-summing norm of an operator.
    Sumnorm {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        p: Exponent,
    },
    /// Run a verification suite.
    Verify {
        /// lemma2.1, lemma2.3, lemma2.4, thm1.3, lemma2.2, lemma1.7, thm2.6 or santalo.
        suite: String,
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// default or quick.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Run a grid of cases, one verdict row each.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        use GeoError::*;
        match e {
            Spec { .. }
            | InvalidExponent(_)
            | InvalidSpace(_)
            | InvalidOperator(_)
            | DimensionMismatch { .. }
            | DimensionCap { .. }
            | TooFewSamples { .. }
            | EnumerationCap(_)
            | NotSquare { .. }
            | Unsupported(_) => Failure::Input(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<NormedSpace, Failure> {
    let spec = SpaceSpec::from_json(&read_json(path)?, "space")?;
    Ok(spec.build()?)
}

fn load_operator(path: &Path) -> Result<LinOperator, Failure> {
    let spec = OperatorSpec::from_json(&read_json(path)?)?;
    Ok(spec.build()?)
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = RandomState::new().hash_one(std::process::id());
        eprintln!("seed: {s} (random)");
        s
    })
}

fn budget(cli: &Cli, seed: u64) -> Result<OptBudget, Failure> {
    let name = cli.budget.as_deref().unwrap_or("default");
    let mut b = OptBudget::named(name, seed)
        .ok_or_else(|| Failure::Input(format!("invalid field `budget`: unknown budget `{name}`; use quick, default or thorough")))?;
    if let Some(r) = cli.restarts {
        if r == 0 {
            return Err(Failure::Input("invalid field `restarts`: must be positive".into()));
        }
        b.restarts = r;
    }
    Ok(b)
}

/// The result object with the resolved config alongside it.
struct Output {
    command: &'static str,
    config: Value,
    result: Value,
}

fn compute(cli: &Cli) -> Result<Output, Failure> {
    let seed = match cli.command {
        Command::Lozanovskii { .. } => 0,
        _ => resolve_seed(cli.seed),
    };
    let samples = cli.samples.unwrap_or(1_000_000);
    let mc = McConfig::new(samples, seed);
    match &cli.command {
        Command::Volume { space, method } => {
            let s = load_space(space)?;
            let est = match method {
                VolumeMethodArg::Auto => ball_volume(&s, &mc)?,
                VolumeMethodArg::Exact => {
                    let v = s.exact_volume().ok_or_else(|| Failure::Input("invalid field `method`: no closed form for this space".into()))?;
                    banachgeo::VolumeEstimate::exact(v)
                }
                VolumeMethodArg::Radial => radial_volume(&s, &mc)?,
                VolumeMethodArg::HitOrMiss => hit_or_miss(&s, &mc)?,
            };
            let method_name = method.to_possible_value().map(|v| v.get_name().to_string());
            Ok(Output {
                command: "volume",
                config: json!({"space": s, "method": method_name, "samples": samples, "seed": seed}),
                result: to_value(&est),
            })
        }
        Command::Vr { space, p, columns } => {
            let s = load_space(space)?;
            let b = budget(cli, seed)?;
            let mc = McConfig::new(cli.samples.unwrap_or(200_000), seed);
            let r = match columns {
                Some(c) => vr_estimate(&s, *p, *c, &b, &mc)?,
                None => vr_best(&s, *p, &b, &mc)?,
            };
            Ok(Output {
                command: "vr",
                config: json!({"space": s, "p": p, "columns": columns, "budget": b, "samples": mc.samples, "seed": seed}),
                result: to_value(&r),
            })
        }
        Command::Lozanovskii { space, blocks } => {
            let s = load_space(space)?;
            let f = match blocks {
                Some(dims) => {
                    if dims.len() != s.dim() || dims.contains(&0) {
                        return Err(Failure::Input(format!(
                            "invalid field `blocks`: need {} positive block dimensions, got {dims:?}",
                            s.dim()
                        )));
                    }
                    alpha_beta(&s, dims)?
                }
                None => lozanovskii_factor(&s)?,
            };
            Ok(Output { command: "lozanovskii", config: json!({"space": s, "blocks": blocks}), result: to_value(&f) })
        }
        Command::Sumnorm { op, p } => {
            let t = load_operator(op)?;
            let b = budget(cli, seed)?;
            let bracket = pi_p_bracket(&t, *p, &b)?;
            Ok(Output {
                command: "sumnorm",
                config: json!({"op": t.to_spec(), "p": p, "budget": b, "seed": seed}),
                result: to_value(&bracket),
            })
        }
        Command::Verify { .. } | Command::Sweep { .. } => unreachable!("reports are handled separately"),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn set_default(config: &mut Value, key: &str, v: Value, force: bool) {
    if let Value::Object(m) = config {
        if force || !m.contains_key(key) {
            m.insert(key.into(), v);
        }
    }
}

fn report(cli: &Cli) -> Result<Report, Failure> {
    let mut config = match &cli.command {
        Command::Verify { config: Some(path), .. } => read_json(path)?,
        Command::Verify { suite, preset: name, .. } => preset(suite, name.as_deref().unwrap_or("default"))?,
        Command::Sweep { config } => read_json(config)?,
        _ => unreachable!("only report commands"),
    };
    let is_sweep = matches!(cli.command, Command::Sweep { .. });
    let has_seed = config.get(if is_sweep { "seeds" } else { "seed" }).is_some();
    if cli.seed.is_some() || !has_seed {
        let seed = resolve_seed(cli.seed);
        let v = if is_sweep { json!([seed]) } else { json!(seed) };
        set_default(&mut config, if is_sweep { "seeds" } else { "seed" }, v, true);
    }
    if let Some(s) = cli.samples {
        set_default(&mut config, "samples", json!(s), true);
    }
    if let Some(b) = &cli.budget {
        set_default(&mut config, "budget", json!(b), true);
    }
    if cli.restarts.is_some() {
        return Err(Failure::Input("invalid field `restarts`: suites take a named --budget".into()));
    }
    Ok(match &cli.command {
        Command::Verify { suite, .. } => run_suite(suite, &config)?,
        _ => run_sweep(&config)?,
    })
}

fn flatten_csv(out: &Output) -> String {
    let mut header = vec!["command".to_string()];
    let mut row = vec![out.command.to_string()];
    let mut walk = Map::new();
    if let Value::Object(m) = &out.result {
        walk = m.clone();
    }
    for (k, v) in walk {
        let cell = match v {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s,
            Value::Bool(b) => b.to_string(),
            Value::Null => String::new(),
            other => format!("\"{}\"", other.to_string().replace('"', "\"\"")),
        };
        header.push(k);
        row.push(cell);
    }
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn write(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Input("invalid field `threads`: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let start = Instant::now();
    let threads = rayon::current_num_threads();
    match cli.command {
        Command::Verify { .. } | Command::Sweep { .. } => {
            let mut r = report(cli)?;
            r.provenance.threads = threads;
            r.provenance.wall_time_s = start.elapsed().as_secs_f64();
            let text = match cli.format {
                Format::Json => r.to_json() + "\n",
                Format::Csv => r.to_csv(),
            };
            write(cli, &text)?;
            for v in &r.verdicts {
                eprintln!("{:<12} {}", v.status.to_string(), v.name);
            }
            Ok(r.exit_code(cli.strict))
        }
        _ => {
            let out = compute(cli)?;
            let text = match cli.format {
                Format::Json => {
                    let mut obj = match &out.result {
                        Value::Object(m) => m.clone(),
                        other => Map::from_iter([("result".to_string(), other.clone())]),
                    };
                    obj.insert("config".into(), out.config.clone());
                    obj.insert(
                        "provenance".into(),
                        json!({"command": out.command, "version": env!("CARGO_PKG_VERSION"), "threads": threads, "wall_time_s": start.elapsed().as_secs_f64()}),
                    );
                    serde_json::to_string_pretty(&Value::Object(obj)).expect("json") + "\n"
                }
                Format::Csv => flatten_csv(&out),
            };
            write(cli, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
