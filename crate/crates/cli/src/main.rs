use std::path::PathBuf;
use std::process::ExitCode;

use bipartite_canon::bounds::{self, CheckKind, DEFAULT_PRECISION_CAP};
use bipartite_canon::experiments::{expected_counts_exact, run_trials, zero_copy_search, ExperimentReport, ZeroCopyReport};
use bipartite_canon::finder::{self, default_params, Branch, FailureReason, Mode, PipelineParams};
use bipartite_canon::generators::io::{load_coloring, save_coloring, to_csv, to_json, Format};
use bipartite_canon::oracle::{er1_verify, find_canonical_biclique, DEFAULT_EXHAUSTIVE_UP_TO, DEFAULT_WORK_CAP};
use bipartite_canon::{
    classify_grid, instantiate, materialize, restrict, ColoringSource, ColoringSpec, Error, ErrorKind, PatternSet,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "canon", version, about = "Canonical K_{m,m} copies in edge-colored complete bipartite graphs")]
struct Cli {
    /// Worker threads (default: all cores). Never changes output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Materialize a coloring to a file or stdout.
    Generate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// json or csv (default: from --out, else json).
        #[arg(long)]
        format: Option<String>,
    },
    /// Classify a coloring, or its restriction to --left x --right.
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_delimiter = ',')]
        left: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        right: Option<Vec<usize>>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Search for a canonical K_{m,m}.
    Find {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        m: usize,
        /// oracle or pipeline.
        #[arg(long, default_value = "oracle")]
        engine: String,
        /// strict or best-effort (pipeline only).
        #[arg(long, default_value = "best-effort")]
        mode: String,
        /// Patterns to accept (oracle only), e.g. `left,rainbow`.
        #[arg(long, default_value = "all")]
        allow: String,
        #[command(flatten)]
        tuning: PipelineArgs,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Run the pipeline and print its report.
    Pipeline {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "best-effort")]
        mode: String,
        #[command(flatten)]
        tuning: PipelineArgs,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Verify the numeric bound inequalities, one JSON line per m.
    Bounds {
        /// Inclusive range `a..b` (or a single value).
        #[arg(long = "m-range", default_value = "2..12")]
        m_range: String,
        /// Comma list of probability, expectation, case1, x_size,
        /// lower_bound, exponent; or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Precision cap in bits.
        #[arg(long, default_value_t = DEFAULT_PRECISION_CAP)]
        bits: u32,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Expected and sampled canonical-copy counts in uniform colorings.
    Montecarlo {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Also search this many random colorings for one with no
        /// canonical copy.
        #[arg(long)]
        search_attempts: Option<u64>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Certify the canonical pigeonhole number (m-1)^2 + 1.
    Er1 {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_UP_TO)]
        exhaustive_up_to: usize,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Coloring file (json or csv).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    input_format: Option<String>,
    /// Coloring spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n1: Option<usize>,
    /// Defaults to --n1.
    #[arg(long)]
    n2: Option<usize>,
    /// Seed for randomized families and the pipeline.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    palette: Option<String>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    tuple_len: Option<usize>,
    #[arg(long)]
    s2_target: Option<u64>,
    #[arg(long)]
    quota: Option<usize>,
    #[arg(long)]
    retries: Option<u32>,
}

/// Failure modes mapped to exit codes.
enum Fail {
    Negative,
    /// A size limit stopped the run after its report was printed.
    Size,
    Usage(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

type Out = Result<(), Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail::Usage(msg.into())
}

fn work_cap() -> Result<u128, Fail> {
    match std::env::var("CANON_WORK_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("CANON_WORK_CAP must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_WORK_CAP),
    }
}

fn json_only(format: &str) -> Out {
    if format == "json" {
        Ok(())
    } else {
        Err(usage(format!("unsupported --format `{format}` (only json)")))
    }
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string(v).expect("output serializes"));
}

impl SourceArgs {
    fn load(&self) -> Result<ColoringSource, Fail> {
        let given = [self.input.is_some(), self.spec.is_some(), self.family.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(usage("give exactly one of --input, --spec, --family"));
        }
        if let Some(path) = &self.input {
            let format = match &self.input_format {
                Some(f) => f.parse()?,
                None => Format::from_path(path),
            };
            return Ok(load_coloring(path, format)?);
        }
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            return Ok(instantiate(&ColoringSpec::from_json(&text)?)?);
        }
        Ok(instantiate(&self.inline_spec()?)?)
    }

    fn inline_spec(&self) -> Result<ColoringSpec, Fail> {
        let family = self.family.as_deref().unwrap_or_default();
        let n1 = self.n1.ok_or_else(|| usage("--family needs --n1"))?;
        let mut spec = ColoringSpec::new(family, n1, self.n2.unwrap_or(n1));
        for (key, value) in [("q", self.q), ("r", self.r), ("s", self.s), ("c", self.c)] {
            if let Some(v) = value {
                spec = spec.param(key, v);
            }
        }
        if let Some(p) = &self.palette {
            spec = spec.param("palette", p.as_str());
        }
        if let Some(seed) = self.seed {
            spec = spec.seed(seed);
        }
        Ok(spec)
    }
}

fn pipeline_params(src: &ColoringSource, m: usize, mode: &str, seed: Option<u64>, tuning: &PipelineArgs) -> Result<PipelineParams, Fail> {
    let seed = seed.ok_or_else(|| usage("the pipeline is randomized: --seed is required"))?;
    let mode: Mode = mode.parse()?;
    let mut p = match mode {
        Mode::Strict => default_params(m)?.with_seed(seed),
        Mode::BestEffort => PipelineParams::best_effort(m, src.n1(), src.n2(), seed)?,
    };
    if let Some(t) = tuning.tuple_len {
        p.tuple_len = t;
    }
    if let Some(s) = tuning.s2_target {
        p.s2_target = s.into();
    }
    if let Some(q) = tuning.quota {
        p.pigeonhole_quota = q;
    }
    if let Some(r) = tuning.retries {
        p.max_sampling_retries = r;
    }
    p.work_cap = work_cap()?;
    Ok(p)
}

fn run_pipeline_cmd(source: &SourceArgs, m: usize, mode: &str, tuning: &PipelineArgs) -> Out {
    let src = source.load()?;
    let p = pipeline_params(&src, m, mode, source.seed, tuning)?;
    let report = finder::run_pipeline(&src, &p)?;
    print_json(&report);
    match (report.branch, report.failure_reason) {
        (Branch::Failure, Some(FailureReason::WorkCap)) => Err(Fail::Size),
        (Branch::Failure, _) => Err(Fail::Negative),
        _ => Ok(()),
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>, Fail> {
    let bad = || usage(format!("bad --m-range `{s}` (expected a..b)"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if b < a {
        return Err(usage(format!("empty --m-range `{s}`: {b} < {a}")));
    }
    if a < 2 {
        return Err(usage("--m-range must start at 2 or more"));
    }
    Ok(a..=b)
}

fn parse_checks(s: &str) -> Result<Vec<CheckKind>, Fail> {
    if s.trim() == "all" {
        return Ok(CheckKind::ALL.to_vec());
    }
    Ok(s.split(',').map(|c| CheckKind::parse(c.trim())).collect::<Result<_, _>>()?)
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Generate { source, out, format } => {
            let format = match (&format, &out) {
                (Some(f), _) => f.parse()?,
                (None, Some(path)) => Format::from_path(path),
                (None, None) => Format::Json,
            };
            let src = source.load()?;
            match out {
                Some(path) => save_coloring(&src, &path, format)?,
                None => print!(
                    "{}",
                    match format {
                        Format::Json => to_json(&src)?,
                        Format::Csv => to_csv(&src)?,
                    }
                ),
            }
            Ok(())
        }
        Cmd::Classify { source, left, right, format } => {
            json_only(&format)?;
            let src = source.load()?;
            let grid = match (left, right) {
                (None, None) => materialize(&src, bipartite_canon::generators::DEFAULT_CELL_CAP)?,
                (Some(l), Some(r)) => restrict(&src, &l, &r)?,
                _ => return Err(usage("--left and --right go together")),
            };
            let patterns = classify_grid(&grid)?;
            print_json(&serde_json::json!({ "patterns": patterns }));
            if patterns.is_empty() {
                Err(Fail::Negative)
            } else {
                Ok(())
            }
        }
        Cmd::Find { source, m, engine, mode, allow, tuning, format } => {
            json_only(&format)?;
            match engine.as_str() {
                "oracle" => {
                    let allow = PatternSet::parse_list(&allow)?;
                    let src = source.load()?;
                    let w = find_canonical_biclique(&src, m, allow, work_cap()?)?;
                    print_json(&w);
                    w.map(|_| ()).ok_or(Fail::Negative)
                }
                "pipeline" => run_pipeline_cmd(&source, m, &mode, &tuning),
                other => Err(usage(format!("unknown --engine `{other}` (oracle or pipeline)"))),
            }
        }
        Cmd::Pipeline { source, m, mode, tuning, format } => {
            json_only(&format)?;
            run_pipeline_cmd(&source, m, &mode, &tuning)
        }
        Cmd::Bounds { m_range, checks, bits, format } => {
            json_only(&format)?;
            let range = parse_range(&m_range)?;
            let kinds = parse_checks(&checks)?;
            if bits < 64 {
                return Err(usage("--bits must be at least 64"));
            }
            let reports = bounds::verify_range(range, &kinds, bits)?;
            for r in &reports {
                print_json(r);
            }
            if reports.iter().all(|r| r.all_hold()) {
                Ok(())
            } else {
                Err(Fail::Negative)
            }
        }
        Cmd::Montecarlo { n, m, q, trials, seed, search_attempts, format } => {
            json_only(&format)?;
            let cap = work_cap()?;
            let table = expected_counts_exact(n, m, q)?;
            let totals = run_trials(n, m, q, trials, seed, cap)?;
            let mut report = ExperimentReport::new(&table, &totals, seed);
            if let Some(attempts) = search_attempts {
                let s = zero_copy_search(n, m, q, attempts, seed, cap)?;
                report.zero_copy = Some(ZeroCopyReport {
                    attempts: s.attempts,
                    certificate: s.certificate,
                });
            }
            print_json(&report);
            match &report.zero_copy {
                Some(z) if z.certificate.is_none() => Err(Fail::Negative),
                _ => Ok(()),
            }
        }
        Cmd::Er1 { m, exhaustive_up_to, format } => {
            json_only(&format)?;
            let report = er1_verify(m, exhaustive_up_to)?;
            print_json(&report);
            if report.lower_certified && report.upper_certified {
                Ok(())
            } else {
                Err(Fail::Negative)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.cmd)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Negative) => ExitCode::from(1),
        Err(Fail::Size) => ExitCode::from(3),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Size => 3,
                ErrorKind::Internal => 4,
            })
        }
    }
}
