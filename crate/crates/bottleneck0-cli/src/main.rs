//! Command-line front end: distances, pairwise matrices, simulation,
//! oracle verification, and timing sweeps.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 validation error,
//! 3 oracle mismatch from `verify`. Data goes to stdout or `--out` paths;
//! diagnostics go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use bottleneck0::bench::{self, BenchRecord, FitModel, SweepSetting, TimingBoundary};
use bottleneck0::diagram::{BirthPolicy, DiagramError, InfinitePolicy};
use bottleneck0::features;
use bottleneck0::oracle;
use bottleneck0::sim::{self, PairSpec, PartnerRange, SimSpec};
use bottleneck0::verify::{run_verify, VerifyConfig};
use bottleneck0::{bottleneck0, parse_diagram, DiagramFormat, PersistenceDiagram, ValidationPolicy};

#[derive(Parser)]
#[command(name = "bottleneck0", version, about = "Dimension-zero bottleneck distances for persistence diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the distance between two diagram files.
    Dist(DistArgs),
    /// Pairwise distance matrix over a collection of diagram files.
    Matrix(MatrixArgs),
    /// Generate synthetic diagrams.
    Simulate(SimulateArgs),
    /// Fuzz the fast path against the exact oracles.
    Verify(VerifyArgs),
    /// Timing sweeps and regression fits.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Deaths,
    Pairs,
}

impl From<FormatArg> for DiagramFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Deaths => DiagramFormat::DeathsOnly,
            FormatArg::Pairs => DiagramFormat::BirthDeathPairs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BirthArg {
    Reject,
    Coerce,
}

#[derive(Clone, Copy, ValueEnum)]
enum InfiniteArg {
    Reject,
    Drop,
}

#[derive(Args, Clone, Copy)]
struct PolicyArgs {
    /// How to treat nonzero births.
    #[arg(long, value_enum, default_value = "reject")]
    on_nonzero_birth: BirthArg,
    /// How to treat infinite deaths.
    #[arg(long, value_enum, default_value = "reject")]
    on_infinite_death: InfiniteArg,
    /// Births within this tolerance count as zero.
    #[arg(long, default_value_t = 0.0)]
    zero_tolerance: f64,
}

impl PolicyArgs {
    fn policy(&self) -> Result<ValidationPolicy, CliError> {
        if self.zero_tolerance < 0.0 {
            return Err(CliError::Usage("zero tolerance must be nonnegative".into()));
        }
        Ok(ValidationPolicy {
            on_nonzero_birth: match self.on_nonzero_birth {
                BirthArg::Reject => BirthPolicy::Reject,
                BirthArg::Coerce => BirthPolicy::CoerceToZero,
            },
            on_infinite_death: match self.on_infinite_death {
                InfiniteArg::Reject => InfinitePolicy::Reject,
                InfiniteArg::Drop => InfinitePolicy::Drop,
            },
            zero_tolerance: self.zero_tolerance,
        })
    }
}

#[derive(Args)]
struct DistArgs {
    file_a: PathBuf,
    file_b: PathBuf,
    /// Input layout.
    #[arg(long, value_enum, default_value = "deaths")]
    format: FormatArg,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Also report which rule resolved the distance and the trim count.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct MatrixArgs {
    /// Diagram files, or directories scanned for *.csv.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "deaths")]
    format: FormatArg,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Where to write the matrix CSV.
    #[arg(long)]
    out_matrix: PathBuf,
    /// Where to write the summary JSON (needs at least two diagrams).
    #[arg(long)]
    out_summary: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Points in the (base) diagram.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Death range upper bound; defaults to twice the point count.
    #[arg(long)]
    upper: Option<f64>,
    /// Output layout.
    #[arg(long, value_enum, default_value = "deaths")]
    format: FormatArg,
    /// Output path (single-diagram mode).
    #[arg(long, required_unless_present = "pair", conflicts_with = "pair")]
    out: Option<PathBuf>,
    /// Generate a base/partner pair instead of one diagram.
    #[arg(long)]
    pair: bool,
    /// Partner size jitter fraction in [0, 1].
    #[arg(long, default_value_t = 0.8)]
    jitter: f64,
    /// Partner death range rule.
    #[arg(long, value_enum, default_value = "twice-partner")]
    partner_range: PartnerRangeArg,
    #[arg(long, required_if_eq("pair", "true"))]
    out_a: Option<PathBuf>,
    #[arg(long, required_if_eq("pair", "true"))]
    out_b: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartnerRangeArg {
    TwicePartner,
    SameAsBase,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random pairs.
    #[arg(long)]
    count: usize,
    /// Maximum points per side.
    #[arg(long, default_value_t = 8)]
    max_size: usize,
    #[arg(long)]
    seed: u64,
    /// Where to write the counterexample file on mismatch.
    #[arg(long, default_value = "verify_counterexample.json")]
    repro_out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    EqualSize,
    HalfRange,
    HalfSize,
    HalfSizeHalfRange,
    Heatmap,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    sweep: SweepArg,
    /// Comma-separated diagram sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pull canonicalization (validation + sort) into the timed region.
    #[arg(long)]
    include_sort_time: bool,
    /// Where to write the per-run records CSV.
    #[arg(long)]
    out_records: PathBuf,
    /// Where to write the aggregated report JSON.
    #[arg(long)]
    out_report: PathBuf,
}

enum CliError {
    Usage(String),
    Validation(String),
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Mismatch(m) => m,
        }
    }
}

fn diagram_error(path: &Path, err: DiagramError) -> CliError {
    let msg = format!("{}: {err}", path.display());
    if err.is_validation() {
        CliError::Validation(msg)
    } else {
        CliError::Usage(msg)
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_diagram(
    path: &Path,
    format: DiagramFormat,
    policy: &ValidationPolicy,
) -> Result<PersistenceDiagram, CliError> {
    let text = read_file(path)?;
    parse_diagram(&text, format, policy).map_err(|e| diagram_error(path, e))
}

/// Decimal with at most 10 significant digits, shortest form.
fn fmt_sig10(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(9 - exp);
    let rounded = (v * scale).round() / scale;
    format!("{rounded}")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dist(args) => cmd_dist(args),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_dist(args: DistArgs) -> Result<(), CliError> {
    let policy = args.policy.policy()?;
    let a = load_diagram(&args.file_a, args.format.into(), &policy)?;
    let b = load_diagram(&args.file_b, args.format.into(), &policy)?;
    let result = bottleneck0(&a, &b);
    println!("{}", fmt_sig10(result.value));
    if args.verbose {
        eprintln!(
            "case: {}  trims: {}",
            result.terminal_case.label(),
            result.trims
        );
    }
    Ok(())
}

fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(input)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(CliError::Usage("no diagram files found".into()));
    }
    Ok(files)
}

fn cmd_matrix(args: MatrixArgs) -> Result<(), CliError> {
    let policy = args.policy.policy()?;
    let files = collect_inputs(&args.inputs)?;
    let mut diagrams = Vec::with_capacity(files.len());
    for path in &files {
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        diagrams.push((label, load_diagram(path, args.format.into(), &policy)?));
    }
    if args.out_summary.is_some() && diagrams.len() < 2 {
        return Err(CliError::Validation(format!(
            "distance summary needs at least 2 diagrams, got {}",
            diagrams.len()
        )));
    }
    let matrix = features::pairwise_matrix(&diagrams);
    write_file(&args.out_matrix, &matrix.to_csv())?;
    if let Some(out_summary) = &args.out_summary {
        let summary = features::summarize_distances(&matrix)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        write_file(out_summary, &json)?;
    }
    Ok(())
}

fn render_diagram(d: &PersistenceDiagram, format: DiagramFormat) -> String {
    let mut out = String::new();
    for &death in d.deaths() {
        match format {
            DiagramFormat::DeathsOnly => out.push_str(&format!("{death}\n")),
            DiagramFormat::BirthDeathPairs => out.push_str(&format!("0,{death}\n")),
        }
    }
    out
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.jitter) {
        return Err(CliError::Usage("jitter must lie in [0, 1]".into()));
    }
    let mut spec = SimSpec::new(args.n, args.seed);
    if let Some(upper) = args.upper {
        if upper <= 0.0 {
            return Err(CliError::Usage("upper must be positive".into()));
        }
        spec = spec.with_upper(upper);
    }
    if args.pair {
        if args.n == 0 {
            return Err(CliError::Usage("pair mode needs --n of at least 1".into()));
        }
        let pair_spec = PairSpec::new(spec)
            .with_jitter(args.jitter)
            .with_partner_range(match args.partner_range {
                PartnerRangeArg::TwicePartner => PartnerRange::TwicePartnerSize,
                PartnerRangeArg::SameAsBase => PartnerRange::SameAsBase,
            });
        let (a, b) = sim::simulate_pair(&pair_spec);
        write_file(args.out_a.as_ref().unwrap(), &render_diagram(&a, args.format.into()))?;
        write_file(args.out_b.as_ref().unwrap(), &render_diagram(&b, args.format.into()))?;
    } else {
        let d = sim::simulate_diagram(&spec);
        write_file(args.out.as_ref().unwrap(), &render_diagram(&d, args.format.into()))?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    if 2 * args.max_size > oracle::MATCHING_LIMIT {
        return Err(CliError::Usage(format!(
            "--max-size must be at most {}",
            oracle::MATCHING_LIMIT / 2
        )));
    }
    let report = run_verify(VerifyConfig {
        count: args.count,
        max_size: args.max_size,
        seed: args.seed,
    });
    print!("{}", report.render());
    if !report.passed() {
        let json = serde_json::to_string_pretty(&report.mismatches).expect("serializes");
        write_file(&args.repro_out, &json)?;
        return Err(CliError::Mismatch(format!(
            "{} mismatching pair(s); reproduction written to {}",
            report.mismatches.len(),
            args.repro_out.display()
        )));
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if args.sizes.contains(&0) {
        return Err(CliError::Usage("sizes must be positive".into()));
    }
    let boundary = if args.include_sort_time {
        TimingBoundary::IncludeCanonicalization
    } else {
        TimingBoundary::DistanceOnly
    };

    let (records, report) = match args.sweep {
        SweepArg::Heatmap => {
            let (records, cells) =
                bench::sweep_heatmap(&args.sizes, args.reps, args.seed, boundary);
            let report = serde_json::json!({
                "setting": "heatmap",
                "sizes": args.sizes,
                "reps": args.reps,
                "seed": args.seed,
                "include_sort_time": args.include_sort_time,
                "grid": cells,
            });
            (records, report)
        }
        _ => {
            let setting = match args.sweep {
                SweepArg::EqualSize => SweepSetting::EqualSize,
                SweepArg::HalfRange => SweepSetting::EqualSizeHalfRange,
                SweepArg::HalfSize => SweepSetting::HalfSize,
                SweepArg::HalfSizeHalfRange => SweepSetting::HalfSizeHalfRange,
                SweepArg::Heatmap => unreachable!(),
            };
            let records = bench::sweep(setting, &args.sizes, args.reps, args.seed, boundary);
            let fits = serde_json::json!({
                "linear": bench::fit(&records, FitModel::Linear).ok(),
                "quadratic": bench::fit(&records, FitModel::Quadratic).ok(),
                "power": bench::fit(&records, FitModel::Power).ok(),
            });
            let report = serde_json::json!({
                "setting": setting.label(),
                "sizes": args.sizes,
                "reps": args.reps,
                "seed": args.seed,
                "include_sort_time": args.include_sort_time,
                "fits": fits,
            });
            (records, report)
        }
    };

    let mut csv = String::from(BenchRecord::CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    write_file(&args.out_records, &csv)?;
    write_file(
        &args.out_report,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(())
}
