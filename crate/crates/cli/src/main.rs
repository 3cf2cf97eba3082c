//! Command-line front end: every computation in the library as a
//! subcommand with reproducible, machine-readable output.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hochster::experiments::{
    run_convergence, run_covariance_check, run_variance_scaling, ConvergenceConfig,
    ExperimentError, VarScaleConfig,
};
use hochster::io::{
    complex_from_json, complex_to_json, convergence_to_csv, covariance_check_to_csv, table_to_csv,
    table_to_json, variance_scaling_to_csv, PolyDoc, PolyKind,
};
use hochster::limits::{
    exact_cov_poly, exact_variance_poly, limit_poly_f, limit_poly_g, LimitError,
};
use hochster::sampler::{sample_lm, sample_stream, LMParams};
use hochster::{bigraded_betti, tor_via_taylor, zk_betti_numbers, FieldSpec, HochsterError};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(
    name = "hochster",
    version,
    about = "Bigraded Betti numbers of Stanley-Reisner rings, moment-angle Betti vectors, \
             random complex sampling, exact limit polynomials, and Monte Carlo checks",
    after_help = "Defaults: --field f2, --seed 0, --format json; --trials defaults per \
                  subcommand (converge 200, var-scale 500, cov-check 5000).\n\
                  Seeds are never read from the environment: reproducibility is explicit.\n\
                  Exit codes: 0 success, 2 argument or parse error, 3 guard/budget refusal, \
                  4 internal invariant violation."
)]
struct Cli {
    /// Coefficient field: q (rationals), f2, or f<prime> [default: f2]
    #[arg(long, global = true)]
    field: Option<String>,

    /// Master seed for sampling subcommands [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trial count for Monte Carlo subcommands [default: per subcommand]
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Cap on worker threads [default: available parallelism]
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Lift the exponential-size guards and run anyway
    #[arg(long, global = true)]
    override_guards: bool,

    /// Also write the output to this path (experiment subcommands write
    /// both <path>.csv and <path>.json)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Stdout rendering [default: json]
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Bigraded Betti table of a complex file
    Betti {
        /// Complex document: {"n": <int>, "facets": [[<int>, ..], ..]}
        complex: PathBuf,
        /// Restrict to an (i,j) entry, e.g. --entry 1,2 (repeatable)
        #[arg(long = "entry", value_parser = parse_pair)]
        entries: Vec<(usize, usize)>,
    },
    /// Betti vector of the moment-angle complex of a complex file
    Zk { complex: PathBuf },
    /// Sample a random complex and print it as a complex document
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        /// Substream index; omitted means the master seed is used directly
        #[arg(long)]
        trial: Option<u64>,
    },
    /// Exact limit, variance, or covariance polynomial
    LimitPoly {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Overlap size (required for kind=cov)
        #[arg(long)]
        m: Option<usize>,
        /// Homological index for var/cov [default: j - d]
        #[arg(long)]
        i: Option<usize>,
    },
    /// Convergence table of the normalized statistic against its limit
    Converge(GridArgs),
    /// Empirical variance per n with the fitted log-log slope
    VarScale(GridArgs),
    /// Empirical covariance of two overlapping subset statistics
    CovCheck {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        j: usize,
        /// Homological index [default: j - d]
        #[arg(long)]
        i: Option<usize>,
        /// Overlap size of the two subsets
        #[arg(long)]
        m: usize,
        /// Vertex count [default: 2j - m]
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Verify the table against the independent Taylor-complex route
    TaylorCheck { complex: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    F,
    G,
    Var,
    Cov,
}

/// Flags shared by converge and var-scale; values omitted here fall back
/// to the config file, then to built-in defaults.
#[derive(Args)]
struct GridArgs {
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    /// Comma-separated probabilities (converge only)
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    /// Single probability (var-scale only)
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated vertex counts
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j but got {s:?}"))?;
    let i = a.trim().parse().map_err(|e| format!("bad i: {e}"))?;
    let j = b.trim().parse().map_err(|e| format!("bad j: {e}"))?;
    Ok((i, j))
}

enum CliError {
    Usage(String),
    Guard(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Guard(m) | CliError::Internal(m) => m,
        }
    }

    fn usage(e: impl Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<HochsterError> for CliError {
    fn from(e: HochsterError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::CandidateGuard { .. } => CliError::Guard(e.to_string()),
            LimitError::InvalidArguments(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::BudgetExceeded { .. } | ExperimentError::DegenerateFit(_) => {
                CliError::Guard(e.to_string())
            }
            ExperimentError::Limit(inner) => inner.into(),
            ExperimentError::InvalidArguments(_) | ExperimentError::Sample(_) => {
                CliError::Usage(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        None => run(&cli),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError::Internal(format!("cannot build thread pool: {e}"))),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Rendered output: what goes to stdout (per --format) and what goes to
/// --out. Experiment commands carry both renderings so the file side can
/// write the CSV and the JSON mirror.
struct Rendered {
    json: String,
    csv: Option<String>,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let field = match &cli.field {
        None => FieldSpec::f2(),
        Some(text) => text.parse::<FieldSpec>().map_err(CliError::usage)?,
    };
    let format = cli.format.unwrap_or(OutputFormat::Json);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);

    let (rendered, mirror_both) = match &cli.command {
        Command::Betti { complex, entries } => {
            let k = load_complex(complex)?;
            let filter = if entries.is_empty() {
                None
            } else {
                Some(entries.as_slice())
            };
            let table = bigraded_betti(&k, &field, filter, cli.override_guards)?;
            (
                Rendered {
                    json: table_to_json(&table),
                    csv: Some(table_to_csv(&table)),
                },
                false,
            )
        }
        Command::Zk { complex } => {
            let k = load_complex(complex)?;
            let betti = zk_betti_numbers(&k, &field, cli.override_guards)?;
            let mut csv = String::from("l,beta\n");
            for (l, b) in betti.iter().enumerate() {
                csv.push_str(&format!("{l},{b}\n"));
            }
            (
                Rendered {
                    json: serde_json::to_string(&betti).expect("vector serializes"),
                    csv: Some(csv),
                },
                false,
            )
        }
        Command::Sample { n, d, p, trial } => {
            let params = LMParams {
                n: *n,
                d: *d,
                p: *p,
                seed,
            };
            let sample = match trial {
                None => sample_lm(&params),
                Some(t) => sample_stream(&params, *t),
            }
            .map_err(CliError::usage)?;
            (
                Rendered {
                    json: complex_to_json(&sample),
                    csv: None,
                },
                false,
            )
        }
        Command::LimitPoly { d, j, kind, m, i } => {
            let doc = limit_poly_doc(*d, *j, *kind, *m, *i, &field)?;
            (
                Rendered {
                    json: doc.to_json(),
                    csv: None,
                },
                false,
            )
        }
        Command::Converge(args) => {
            let config = converge_config(args, cli, seed, field)?;
            let rows = run_convergence(&config, cli.override_guards)?;
            (
                Rendered {
                    json: serde_json::to_string_pretty(&rows).expect("rows serialize"),
                    csv: Some(convergence_to_csv(&rows)),
                },
                true,
            )
        }
        Command::VarScale(args) => {
            let config = var_scale_config(args, cli, seed, field)?;
            let scaling = run_variance_scaling(&config, cli.override_guards)?;
            (
                Rendered {
                    json: serde_json::to_string_pretty(&scaling).expect("scaling serializes"),
                    csv: Some(variance_scaling_to_csv(&scaling)),
                },
                true,
            )
        }
        Command::CovCheck { d, j, i, m, n, p } => {
            let i = i.unwrap_or_else(|| j.saturating_sub(*d));
            let n = n.unwrap_or_else(|| (2 * j).saturating_sub(*m));
            let trials = cli.trials.unwrap_or(5000);
            let check = run_covariance_check(*d, *j, i, *m, n, *p, trials, seed, &field)?;
            (
                Rendered {
                    json: serde_json::to_string_pretty(&check).expect("check serializes"),
                    csv: Some(covariance_check_to_csv(&check)),
                },
                true,
            )
        }
        Command::TaylorCheck { complex } => {
            let k = load_complex(complex)?;
            let table = bigraded_betti(&k, &field, None, cli.override_guards)?;
            let taylor = tor_via_taylor(&k, &field, cli.override_guards)?;
            if table != taylor {
                let diff = format!(
                    "table mismatch:\n  hochster: {}\n  taylor:   {}",
                    table_to_csv(&table).replace('\n', " "),
                    table_to_csv(&taylor).replace('\n', " "),
                );
                return Err(CliError::Internal(diff));
            }
            let json = format!(
                "{{\n  \"equal\": true,\n  \"table\": {}\n}}",
                indent_tail(&table_to_json(&table))
            );
            (Rendered { json, csv: None }, false)
        }
    };

    emit(&rendered, format, cli.out.as_deref(), mirror_both)
}

fn load_complex(path: &Path) -> Result<hochster::SimplicialComplex, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    complex_from_json(&text).map_err(CliError::usage)
}

fn limit_poly_doc(
    d: usize,
    j: usize,
    kind: KindArg,
    m: Option<usize>,
    i: Option<usize>,
    field: &FieldSpec,
) -> Result<PolyDoc, CliError> {
    let default_i = j
        .checked_sub(d)
        .ok_or_else(|| CliError::Usage(format!("need j >= d, got d = {d}, j = {j}")))?;
    match kind {
        KindArg::F | KindArg::G => {
            if i.is_some() {
                return Err(CliError::Usage(
                    "--i only applies to kind=var and kind=cov".into(),
                ));
            }
            if m.is_some() {
                return Err(CliError::Usage("--m only applies to kind=cov".into()));
            }
            let (poly, kind_tag) = match kind {
                KindArg::F => (limit_poly_f(d, j, field)?, PolyKind::F),
                _ => (limit_poly_g(d, j, field)?, PolyKind::G),
            };
            Ok(PolyDoc::new(d, j, kind_tag, None, *field, &poly))
        }
        KindArg::Var => {
            if m.is_some() {
                return Err(CliError::Usage("--m only applies to kind=cov".into()));
            }
            let i = i.unwrap_or(default_i);
            let poly = exact_variance_poly(d, j, i, field)?;
            Ok(PolyDoc::new(d, j, PolyKind::Var, None, *field, &poly))
        }
        KindArg::Cov => {
            let m = m.ok_or_else(|| CliError::Usage("kind=cov requires --m".into()))?;
            let i = i.unwrap_or(default_i);
            let poly = exact_cov_poly(d, j, m, i, field)?;
            Ok(PolyDoc::new(d, j, PolyKind::Cov, Some(m), *field, &poly))
        }
    }
}

fn converge_config(
    args: &GridArgs,
    cli: &Cli,
    seed: u64,
    field: FieldSpec,
) -> Result<ConvergenceConfig, CliError> {
    if args.p.is_some() {
        return Err(CliError::Usage(
            "converge takes --p-grid, not --p (that flag belongs to var-scale)".into(),
        ));
    }
    let mut config: ConvergenceConfig = match &args.config {
        None => ConvergenceConfig::default(),
        Some(path) => parse_config(path)?,
    };
    // Flags override config values, which override the defaults.
    if let Some(d) = args.d {
        config.d = d;
    }
    if let Some(j) = args.j {
        config.j = j;
    }
    if let Some(i) = args.i {
        config.i = i;
    }
    if let Some(p_grid) = &args.p_grid {
        config.p_grid = p_grid.clone();
    }
    if let Some(n_grid) = &args.n_grid {
        config.n_grid = n_grid.clone();
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    if cli.seed.is_some() {
        config.seed = seed;
    } else if args.config.is_none() {
        config.seed = DEFAULT_SEED;
    }
    if cli.field.is_some() || args.config.is_none() {
        config.field = field;
    }
    Ok(config)
}

fn var_scale_config(
    args: &GridArgs,
    cli: &Cli,
    seed: u64,
    field: FieldSpec,
) -> Result<VarScaleConfig, CliError> {
    if args.p_grid.is_some() {
        return Err(CliError::Usage(
            "var-scale takes a single --p, not --p-grid (that flag belongs to converge)".into(),
        ));
    }
    let mut config: VarScaleConfig = match &args.config {
        None => VarScaleConfig::default(),
        Some(path) => parse_config(path)?,
    };
    if let Some(d) = args.d {
        config.d = d;
    }
    if let Some(j) = args.j {
        config.j = j;
    }
    if let Some(i) = args.i {
        config.i = i;
    }
    if let Some(p) = args.p {
        config.p = p;
    }
    if let Some(n_grid) = &args.n_grid {
        config.n_grid = n_grid.clone();
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    if cli.seed.is_some() {
        config.seed = seed;
    } else if args.config.is_none() {
        config.seed = DEFAULT_SEED;
    }
    if cli.field.is_some() || args.config.is_none() {
        config.field = field;
    }
    Ok(config)
}

fn parse_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// Re-indents a pretty-printed JSON blob so it nests one level deep.
fn indent_tail(text: &str) -> String {
    text.replace('\n', "\n  ")
}

fn emit(
    rendered: &Rendered,
    format: OutputFormat,
    out: Option<&Path>,
    mirror_both: bool,
) -> Result<(), CliError> {
    let stdout_text = match format {
        OutputFormat::Json => &rendered.json,
        OutputFormat::Csv => rendered.csv.as_ref().ok_or_else(|| {
            CliError::Usage("this subcommand has no CSV rendering; use --format json".into())
        })?,
    };
    println!("{}", stdout_text.trim_end());

    if let Some(path) = out {
        if mirror_both {
            let csv = rendered
                .csv
                .as_ref()
                .expect("experiment outputs always render CSV");
            let base = path.with_extension("");
            write_file(&base.with_extension("csv"), csv)?;
            write_file(&base.with_extension("json"), &rendered.json)?;
        } else {
            write_file(path, stdout_text)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let mut owned = text.to_string();
    if !owned.ends_with('\n') {
        owned.push('\n');
    }
    fs::write(path, owned)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
