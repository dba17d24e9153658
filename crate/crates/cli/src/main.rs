//! `dfs`: feature ranking, cross-validated evaluation and diagnostics.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 malformed or
//! unusable input data, 4 numerical failure, 5 invalid configuration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dfs_core::harness::{
    default_k_grid, generate_synthetic, run_curve, CurveOptions, DfsSelector, FeatureSelector, NoSelection,
    RandomSelector, SyntheticSpec,
};
use dfs_core::io::{
    curve_csv_string, load_dense_csv, load_sparse_libsvm_format, ranking_json_string, traces_csv_string, write_json,
    write_text, LabelColumn, LoadedDataset, RunManifest,
};
use dfs_core::{
    compute_scatter, redundancy_rate, solve, standardize, Config64, CorrelationMode, DfsError, FeatureSubset,
};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;
const EXIT_CONFIG: u8 = 5;

#[derive(Parser)]
#[command(name = "dfs", version, about = "Discriminative feature selection with l2,p row sparsity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank features of a labeled dataset.
    Select(SelectArgs),
    /// Cross-validated accuracy and redundancy against subset size.
    Eval(EvalArgs),
    /// Redundancy rate of a feature subset.
    Redundancy(RedundancyArgs),
    /// Print the max-abs deviation of St - Sb - Sw.
    ScatterCheck(InputArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Sparse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Dfs,
    Random,
    None,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Label column name or 0-based index (dense CSV only).
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args)]
struct SolverArgs {
    /// Regularization weight (required for DFS).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Projection dimension; defaults to classes - 1.
    #[arg(long)]
    l: Option<usize>,
    /// Ridge on the total scatter; defaults to 1e-6 * tr(St) / d.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    zeta: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Also write traces.csv with one row per iteration.
    #[arg(long)]
    emit_traces: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    label: Option<String>,
    /// Planted dataset instead of a file, e.g. `n=200,d=50,c=3,informative=5`.
    #[arg(long)]
    synthetic: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Dfs)]
    method: Method,
    #[command(flatten)]
    solver: SolverArgs,
    /// Comma-separated subset sizes; defaults to 10..=100 step 5 clipped to d.
    #[arg(long, value_delimiter = ',')]
    k_grid: Option<Vec<usize>>,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use |corr| in the redundancy rate.
    #[arg(long)]
    abs_corr: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RedundancyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated 0-based feature indices.
    #[arg(long, value_delimiter = ',', required_unless_present = "ranking", conflicts_with = "ranking")]
    features: Option<Vec<usize>>,
    /// A ranking.json written by `select`; its first `--top` features are used.
    #[arg(long)]
    ranking: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[arg(long)]
    abs_corr: bool,
}

enum CliError {
    Usage(String),
    Core(DfsError),
}

impl From<DfsError> for CliError {
    fn from(e: DfsError) -> Self {
        match e {
            DfsError::InvalidK { .. } => CliError::Usage(e.to_string()),
            e => CliError::Core(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                DfsError::Io(_) => EXIT_IO,
                DfsError::InvalidK { .. } => EXIT_USAGE,
                DfsError::Parse { .. }
                | DfsError::MissingLabelColumn(_)
                | DfsError::NonNumericValue { .. }
                | DfsError::NonAscendingIndex { .. }
                | DfsError::InvalidDataset(_)
                | DfsError::DegenerateClass(_)
                | DfsError::NonFinite { .. }
                | DfsError::DimensionMismatch(_) => EXIT_INPUT,
                DfsError::NotPositiveDefinite { .. }
                | DfsError::NotSymmetric { .. }
                | DfsError::ScatterIdentity { .. }
                | DfsError::SingularWithinScatter
                | DfsError::ZeroVector
                | DfsError::ConstantFeature(_)
                | DfsError::ZeroVariance => EXIT_NUMERICAL,
                DfsError::InvalidConfig(_) | DfsError::InvalidSpec(_) | DfsError::InvalidSubset(_) => EXIT_CONFIG,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DFS_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Select(args) => select(args),
        Command::Eval(args) => eval(args),
        Command::Redundancy(args) => redundancy(args),
        Command::ScatterCheck(args) => scatter_check(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(path: &Path, format: Format, label: Option<&str>) -> CliResult<LoadedDataset<f64>> {
    match format {
        Format::Csv => {
            let label = label.ok_or_else(|| CliError::Usage("--label is required for CSV input".into()))?;
            Ok(load_dense_csv(path, &LabelColumn::from(label))?)
        }
        Format::Sparse => {
            if label.is_some() {
                log::warn!("--label is ignored for sparse input");
            }
            Ok(load_sparse_libsvm_format(path)?)
        }
    }
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Sparse => "sparse",
    }
}

fn solver_config(args: &SolverArgs) -> CliResult<Config64> {
    let gamma = args.gamma.ok_or_else(|| CliError::Usage("--gamma is required".into()))?;
    let mut cfg = Config64::new(gamma, args.p).with_zeta(args.zeta).with_tol(args.tol).with_max_iter(args.max_iter);
    if let Some(l) = args.l {
        cfg = cfg.with_l(l);
    }
    if let Some(alpha) = args.alpha {
        cfg = cfg.with_alpha(alpha);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn correlation(abs: bool) -> CorrelationMode {
    if abs {
        CorrelationMode::Absolute
    } else {
        CorrelationMode::Signed
    }
}

fn create_out_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Core(e.into()))
}

fn output_path(dir: &Path, name: &str) -> (PathBuf, String) {
    let path = dir.join(name);
    let shown = path.display().to_string();
    (path, shown)
}

fn select(args: SelectArgs) -> CliResult<()> {
    let cfg = solver_config(&args.solver)?;
    let loaded = load(&args.input.input, args.input.format, args.input.label.as_deref())?;
    let (z, params) = standardize(&loaded.dataset)?;
    let sol = solve(&z, &cfg)?;

    create_out_dir(&args.out_dir)?;
    let mut manifest = RunManifest::new("select", args.seed);
    let (ranking_path, shown) = output_path(&args.out_dir, "ranking.json");
    write_text(&ranking_path, &ranking_json_string(&sol, args.top, loaded.dataset.feature_names())?)?;
    manifest.outputs.push(shown);
    if args.emit_traces {
        let (path, shown) = output_path(&args.out_dir, "traces.csv");
        write_text(&path, &traces_csv_string(&sol))?;
        manifest.outputs.push(shown);
    }
    manifest.input_path = Some(args.input.input.display().to_string());
    manifest.input_format = Some(format_name(args.input.format).into());
    manifest.label_column = loaded.label_column.clone();
    manifest.label_mapping = loaded.label_names.clone();
    manifest.config = json!({
        "gamma": cfg.gamma,
        "p": cfg.p,
        "l": sol.l,
        "alpha": sol.alpha,
        "zeta": cfg.zeta,
        "tol": cfg.tol,
        "max_iter": cfg.max_iter,
    });
    manifest.options = json!({
        "top": args.top,
        "emit_traces": args.emit_traces,
        "standardized": true,
        "constant_columns": params.constant_columns,
    });
    let (manifest_path, _) = output_path(&args.out_dir, "manifest.json");
    write_json(&manifest_path, &manifest)?;

    println!(
        "{} after {} iterations; top {}: {:?}",
        match sol.terminated_by {
            dfs_core::Termination::Converged => "converged",
            dfs_core::Termination::MaxIter => "stopped at max-iter",
        },
        sol.iterations,
        args.top.min(sol.ranking.len()),
        sol.top(args.top)
    );
    Ok(())
}

/// Parses `key=value` pairs such as `n=200,d=50,c=3,informative=5`.
fn parse_synthetic(text: &str, seed: u64) -> CliResult<SyntheticSpec> {
    let mut spec = SyntheticSpec { seed, ..Default::default() };
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value in --synthetic, got {pair:?}")))?;
        let bad = || CliError::Usage(format!("invalid value for {key}: {value:?}"));
        match key.trim() {
            "n" => spec.n = value.parse().map_err(|_| bad())?,
            "d" => spec.d = value.parse().map_err(|_| bad())?,
            "c" => spec.c = value.parse().map_err(|_| bad())?,
            "informative" | "n_informative" => spec.n_informative = value.parse().map_err(|_| bad())?,
            "redundant" | "n_redundant" => spec.n_redundant = value.parse().map_err(|_| bad())?,
            "sigma" | "noise_sigma" => spec.noise_sigma = value.parse().map_err(|_| bad())?,
            "rho" | "duplicate_rho" => spec.duplicate_rho = value.parse().map_err(|_| bad())?,
            "seed" => spec.seed = value.parse().map_err(|_| bad())?,
            other => return Err(CliError::Usage(format!("unknown --synthetic key {other:?}"))),
        }
    }
    Ok(spec)
}

fn eval(args: EvalArgs) -> CliResult<()> {
    if args.folds < 2 {
        return Err(CliError::Usage(format!("--folds must be at least 2, got {}", args.folds)));
    }
    let mut manifest = RunManifest::new("eval", args.seed);
    let (data, planted) = match (&args.input, &args.synthetic) {
        (Some(path), _) => {
            let loaded = load(path, args.format, args.label.as_deref())?;
            manifest.input_path = Some(path.display().to_string());
            manifest.input_format = Some(format_name(args.format).into());
            manifest.label_column = loaded.label_column.clone();
            manifest.label_mapping = loaded.label_names.clone();
            (loaded.dataset, serde_json::Value::Null)
        }
        (None, Some(text)) => {
            let spec = parse_synthetic(text, args.seed)?;
            let synthetic = generate_synthetic::<f64>(&spec)?;
            manifest.input_format = Some("synthetic".into());
            let planted = json!({
                "spec": {
                    "n": spec.n, "d": spec.d, "c": spec.c,
                    "n_informative": spec.n_informative, "n_redundant": spec.n_redundant,
                    "noise_sigma": spec.noise_sigma, "duplicate_rho": spec.duplicate_rho, "seed": spec.seed,
                },
                "informative": synthetic.ground_truth.indices(),
                "redundant": synthetic.redundant.iter().map(|r| json!({"index": r.index, "source": r.source})).collect::<Vec<_>>(),
            });
            (synthetic.dataset, planted)
        }
        (None, None) => return Err(CliError::Usage("one of --input or --synthetic is required".into())),
    };

    let selector: Box<dyn FeatureSelector<f64>> = match args.method {
        Method::Dfs => Box::new(DfsSelector { config: solver_config(&args.solver)? }),
        Method::Random => Box::new(RandomSelector { seed: args.seed }),
        Method::None => Box::new(NoSelection),
    };
    let mut opts = CurveOptions::new(args.k_grid.clone().unwrap_or_else(|| default_k_grid(data.n_features())));
    opts.folds = args.folds;
    opts.seed = args.seed;
    opts.jobs = args.jobs.max(1);
    opts.correlation = correlation(args.abs_corr);
    let report = run_curve(&data, selector.as_ref(), &opts)?;

    create_out_dir(&args.out_dir)?;
    let (report_path, shown) = output_path(&args.out_dir, "eval_report.json");
    write_json(&report_path, &report)?;
    manifest.outputs.push(shown);
    let (curve_path, shown) = output_path(&args.out_dir, "curve.csv");
    write_text(&curve_path, &curve_csv_string(&report))?;
    manifest.outputs.push(shown);
    manifest.config = report.config.clone();
    manifest.options = json!({
        "method": report.method_name,
        "k_grid": report.k_grid,
        "folds": args.folds,
        "jobs": opts.jobs,
        "correlation": if args.abs_corr { "absolute" } else { "signed" },
        "synthetic": planted,
    });
    let (manifest_path, _) = output_path(&args.out_dir, "manifest.json");
    write_json(&manifest_path, &manifest)?;

    for (acc, red) in report.accuracy.iter().zip(&report.redundancy) {
        let red = red.map(|r| format!("{r:.4}")).unwrap_or_else(|| "-".into());
        println!("k={:<4} accuracy={:.4} redundancy={red}", acc.k, acc.mean);
    }
    Ok(())
}

fn redundancy(args: RedundancyArgs) -> CliResult<()> {
    let loaded = load(&args.input.input, args.input.format, args.input.label.as_deref())?;
    let d = loaded.dataset.n_features();
    let indices = match (&args.features, &args.ranking) {
        (Some(f), _) => f.clone(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Core(e.into()))?;
            let file: dfs_core::io::RankingFile = serde_json::from_str(&text).map_err(|e| CliError::Core(e.into()))?;
            file.ranking.iter().take(args.top).map(|r| r.feature_index).collect()
        }
        (None, None) => return Err(CliError::Usage("one of --features or --ranking is required".into())),
    };
    let subset = FeatureSubset::new(indices, d)?;
    let mode = correlation(args.abs_corr);
    let rate = redundancy_rate(&loaded.dataset, &subset, mode)?;
    let out = json!({
        "features": subset.indices(),
        "correlation": if args.abs_corr { "absolute" } else { "signed" },
        "redundancy_rate": rate,
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| CliError::Core(e.into()))?);
    Ok(())
}

fn scatter_check(args: InputArgs) -> CliResult<()> {
    let loaded = load(&args.input, args.format, args.label.as_deref())?;
    let s = compute_scatter(&loaded.dataset)?;
    let bound = 1e-8 * s.st.frobenius().max(1.0);
    println!("max|St - Sb - Sw| = {:e} (bound {:e})", s.identity_deviation(), bound);
    s.check_invariants()?;
    Ok(())
}
