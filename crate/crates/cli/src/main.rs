//! `gradsamp` command-line front-end.
//!
//! ```text
//! gradsamp [-v] [--out-dir DIR] <COMMAND>
//!   list-problems [--json] [--out FILE]
//!   solve   --problem NAME [--n N] [--method gs|gsi|both] [--seed S] [--scale S]
//!           [--tol T] [--no-target] [--from-x0] [--config FILE] [solver overrides]
//!   bench   [--scale S] [--problems A,B] [--dims N,M] [--runs R] [--seed S]
//!           [--jobs J] [--method gs|gsi|both] [--metrics M,..] [--config FILE]
//!           [solver overrides]
//!   profile --input results.csv [--metric M,..]
//! ```
//!
//! The output directory is `--out-dir`, else `$GRADSAMP_OUT_DIR`, else the
//! config file's `out_dir`, else `gradsamp-out`. Exit codes: 0 success, 1
//! solver or data failure, 2 usage error.

mod settings;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand};
use gradsamp::bench::{
    default_config, emit_reports, profile_from_rows, read_results_csv, run_suite, start_point, suite_dims,
    suite_problems, write_profile_csv, write_profile_svg, Metric, RunRecord, SuiteOptions,
};
use gradsamp::solver::write_trace_jsonl;
use gradsamp::{catalog_json, catalog_records, get_problem, run, Problem, RngStream, Scale, StoppingRule};

use settings::{parse_metrics, FileConfig, MethodChoice, Overrides};

const OUT_DIR_ENV: &str = "GRADSAMP_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "gradsamp-out";

#[derive(Debug, Parser)]
#[command(name = "gradsamp", version, about = "Gradient sampling solvers for nonsmooth minimization")]
struct Cli {
    /// More log output (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Output directory (overrides $GRADSAMP_OUT_DIR and config files)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the problem catalog
    ListProblems {
        /// Print the catalog as JSON
        #[arg(long)]
        json: bool,
        /// Write the JSON catalog to this file instead of printing
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one problem and write its trace and report
    Solve {
        #[arg(long)]
        problem: String,
        /// Dimension of a scalable problem
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<MethodChoice>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scale preset (default: by dimension)
        #[arg(long)]
        scale: Option<Scale>,
        /// Relative tolerance of the known-minimum stopping rule
        #[arg(long)]
        tol: Option<f64>,
        /// Ignore the known minimum; stop on tolerances or the iteration cap
        #[arg(long)]
        no_target: bool,
        /// Start at the problem's x0 instead of the seeded random start
        #[arg(long)]
        from_x0: bool,
        /// TOML file with defaults for these options
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a seeded benchmark suite and write results and profiles
    Bench {
        #[arg(long)]
        scale: Option<Scale>,
        /// Restrict to these problems (comma separated)
        #[arg(long, value_delimiter = ',')]
        problems: Option<Vec<String>>,
        /// Dimensions of scalable problems (comma separated)
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Runs per (problem, method)
        #[arg(long)]
        runs: Option<usize>,
        /// Seed of the first run
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: logical processors)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<MethodChoice>,
        /// Profile metrics (comma separated)
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<String>>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Build performance profiles from a results CSV
    Profile {
        #[arg(long)]
        input: PathBuf,
        /// Metrics (comma separated); default cpu_time and qp_time
        #[arg(long, value_delimiter = ',')]
        metric: Option<Vec<String>>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code == 2 {
                let _ = writeln!(io::stderr(), "\n{}", Cli::command().render_long_help());
            }
            return ExitCode::from(code as u8);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(
                io::stderr(),
                "error: {e:#}\n\n{}\nFor more information, try '--help'.",
                Cli::command().render_usage()
            );
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn out_dir(flag: Option<PathBuf>, file: Option<&FileConfig>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| file.and_then(|f| f.out_dir.clone()))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn load_file(path: Option<&Path>) -> Result<Option<FileConfig>, Failure> {
    path.map(FileConfig::load).transpose().map_err(usage)
}

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::ListProblems { json, out } => list_problems(json, out),
        Command::Solve {
            problem,
            n,
            method,
            seed,
            scale,
            tol,
            no_target,
            from_x0,
            config,
            overrides,
        } => {
            let file = load_file(config.as_deref())?;
            let dir = out_dir(cli.out_dir, file.as_ref());
            let args = SolveArgs {
                problem,
                n,
                method: method.or(file.as_ref().and_then(|f| f.method)).unwrap_or(MethodChoice::Gsi),
                seed,
                scale: scale.or(file.as_ref().and_then(|f| f.scale)),
                tol,
                no_target,
                from_x0,
                overrides: file.as_ref().map(|f| f.solver.clone()).unwrap_or_default().merged(&overrides),
            };
            solve(args, &dir)
        }
        Command::Bench {
            scale,
            problems,
            dims,
            runs,
            seed,
            jobs,
            method,
            metrics,
            config,
            overrides,
        } => {
            let file = load_file(config.as_deref())?.unwrap_or_default();
            let dir = out_dir(cli.out_dir, Some(&file));
            let metrics = metrics.or(file.metrics.clone());
            let args = BenchArgs {
                scale: scale.or(file.scale).unwrap_or(Scale::Small),
                problems: problems.or(file.problems.clone()),
                dims: dims.or(file.dims.clone()).unwrap_or_default(),
                runs: runs.or(file.runs).unwrap_or(5),
                seed: seed.or(file.seed).unwrap_or(0),
                jobs: jobs.or(file.jobs),
                method: method.or(file.method).unwrap_or(MethodChoice::Both),
                metrics: match metrics {
                    Some(m) => parse_metrics(&m).map_err(usage)?,
                    None => vec![Metric::CpuTime, Metric::QpTime, Metric::QpCount],
                },
                overrides: file.solver.merged(&overrides),
            };
            bench(args, &dir)
        }
        Command::Profile { input, metric } => {
            let metrics = match metric {
                Some(m) => parse_metrics(&m).map_err(usage)?,
                None => vec![Metric::CpuTime, Metric::QpTime],
            };
            let dir = out_dir(cli.out_dir, None);
            profile(&input, &metrics, &dir)
        }
    }
}

fn list_problems(json: bool, out: Option<PathBuf>) -> Result<ExitCode, Failure> {
    if let Some(path) = out {
        fs::write(&path, catalog_json()).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
        return Ok(ExitCode::SUCCESS);
    }
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    if json {
        w.write_all(catalog_json().as_bytes()).context("writing catalog")?;
    } else {
        writeln!(w, "{:<20} {:<6} {:<10} {:<14} f*", "name", "n", "type", "suites").context("writing catalog")?;
        for r in catalog_records() {
            let n = match r.n_max {
                Some(hi) if hi == r.n_min => hi.to_string(),
                _ => format!(">={}", r.n_min),
            };
            let f = r.f_star.map_or_else(|| r.f_star_rule.clone(), |v| v.to_string());
            writeln!(
                w,
                "{:<20} {:<6} {:<10} {:<14} {}",
                r.name,
                n,
                format!("{:?}", r.convexity).to_lowercase(),
                r.suites.join(","),
                f
            )
            .context("writing catalog")?;
        }
    }
    w.flush().context("writing catalog")?;
    Ok(ExitCode::SUCCESS)
}

struct SolveArgs {
    problem: String,
    n: Option<usize>,
    method: MethodChoice,
    seed: u64,
    scale: Option<Scale>,
    tol: Option<f64>,
    no_target: bool,
    from_x0: bool,
    overrides: Overrides,
}

fn solve(args: SolveArgs, dir: &Path) -> Result<ExitCode, Failure> {
    let problem: Problem = get_problem(&args.problem, args.n).map_err(usage)?;
    let scale = args.scale.unwrap_or_else(|| Scale::from_dim(problem.dim()));
    let base = args.overrides.apply(default_config(&problem, scale)).with_seed(args.seed);
    base.validate().map_err(usage)?;
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage(anyhow!("--tol must be positive, got {t}")));
        }
    }
    let target = if args.no_target {
        None
    } else {
        problem
            .f_star()
            .map(|f| StoppingRule::new(f, args.tol.unwrap_or(scale.target_tol())))
    };
    let start = if args.from_x0 {
        problem.x0().to_vec()
    } else {
        start_point(&problem, args.seed)
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut all_ok = true;
    for method in args.method.methods() {
        let config = base.clone().with_method(method);
        let mut rng = RngStream::new(args.seed);
        let clock = Instant::now();
        let outcome = run(&problem, &start, &config, &mut rng, target.as_ref());
        let cpu_time = clock.elapsed().as_secs_f64();
        let stem = format!("{}_{}_seed{}", problem.label(), method, args.seed);
        let (report, error) = match outcome {
            Ok(out) => {
                let path = dir.join(format!("{stem}.trace.jsonl"));
                let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_trace_jsonl(BufWriter::new(file), &out.trace)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
                (Some(out.report), None)
            }
            Err(e) => (None, Some(e.to_string())),
        };
        let record = RunRecord {
            problem: problem.label(),
            method,
            seed: args.seed,
            config,
            target,
            start: start.clone(),
            report,
            error,
            cpu_time,
        };
        let path = dir.join(format!("{stem}.report.json"));
        let text = serde_json::to_string_pretty(&record).context("serializing report")?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
        match (&record.report, &record.error) {
            (Some(r), _) => eprintln!(
                "{} {}: success={} f={} iters={} pii={:.3} qp_count={} stop={:?}",
                record.problem, method, r.success, r.final_f, r.iters, r.pii, r.qp_count, r.stop_reason
            ),
            (None, Some(e)) => eprintln!("{} {}: failed: {e}", record.problem, method),
            (None, None) => unreachable!(),
        }
        all_ok &= record.success();
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

struct BenchArgs {
    scale: Scale,
    problems: Option<Vec<String>>,
    dims: Vec<usize>,
    runs: usize,
    seed: u64,
    jobs: Option<usize>,
    method: MethodChoice,
    metrics: Vec<Metric>,
    overrides: Overrides,
}

/// Named problems, scalable ones at each of `dims` (or the suite dimensions).
fn named_problems(names: &[String], scale: Scale, dims: &[usize]) -> Result<Vec<Problem>> {
    let records = catalog_records();
    let dims = if dims.is_empty() { suite_dims(scale) } else { dims };
    let mut out = Vec::new();
    for name in names {
        let rec = records
            .iter()
            .find(|r| &r.name == name)
            .ok_or_else(|| anyhow!("unknown problem `{name}`"))?;
        if rec.dimension == "scalable" {
            if dims.is_empty() {
                bail!("`{name}` is scalable; pass --dims");
            }
            for &n in dims {
                out.push(get_problem(name, Some(n))?);
            }
        } else {
            out.push(get_problem(name, None)?);
        }
    }
    Ok(out)
}

fn bench(args: BenchArgs, dir: &Path) -> Result<ExitCode, Failure> {
    let problems = match &args.problems {
        Some(names) => named_problems(names, args.scale, &args.dims).map_err(usage)?,
        None => suite_problems(args.scale, &args.dims).map_err(usage)?,
    };
    if problems.is_empty() {
        return Err(usage(anyhow!("no problems selected")));
    }
    if args.runs == 0 {
        return Err(usage(anyhow!("--runs must be at least 1")));
    }
    let config_for = |p: &Problem| args.overrides.apply(default_config(p, args.scale));
    for p in &problems {
        config_for(p)
            .validate()
            .map_err(|e| usage(anyhow!("{}: {e}", p.label())))?;
    }
    let options = SuiteOptions {
        methods: args.method.methods(),
        runs_per_problem: args.runs,
        base_seed: args.seed,
        jobs: args.jobs,
        scale: args.scale,
    };
    log::info!(
        "{} problems x {} runs x {} methods",
        problems.len(),
        args.runs,
        options.methods.len()
    );
    let records = run_suite(&problems, &options, config_for);
    let files = emit_reports(dir, &records, &args.metrics).context("writing results")?;
    println!("{}", files.results_csv.display());
    for p in files.profile_csv.iter().chain(&files.profile_svg) {
        println!("{}", p.display());
    }
    let ok = records.iter().filter(|r| r.success()).count();
    eprintln!("{ok}/{} runs succeeded", records.len());
    Ok(ExitCode::SUCCESS)
}

fn profile(input: &Path, metrics: &[Metric], dir: &Path) -> Result<ExitCode, Failure> {
    let rows = read_results_csv(input).map_err(usage)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for &metric in metrics {
        let table = profile_from_rows(&rows, metric).with_context(|| format!("{metric} profile"))?;
        let csv = dir.join(format!("profile_{metric}.csv"));
        let svg = dir.join(format!("profile_{metric}.svg"));
        write_profile_csv(&csv, &table).context("writing profile")?;
        write_profile_svg(&svg, &table).context("writing profile")?;
        println!("{}", csv.display());
        println!("{}", svg.display());
    }
    Ok(ExitCode::SUCCESS)
}
