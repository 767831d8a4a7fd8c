//! Subcommand front end for the concord agreement-analysis toolkit.

mod analyze;

use std::error::Error;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use concord::display;
use concord::{
    apply_pooling, builtin_pooling, interpret_kappa, read_table_csv, scatter_plot, sign_test,
    AgreementTable, BuiltinPooling, CategoryScheme, GuessingModel, Kappa, PoolingScheme,
    ScatterPoint, ScatterSpec, SignTestResult, SummaryFormat, SummaryRow, GENERATOR_ID,
};

/// Fixed default seed for the simulator; randomness never comes from the
/// clock, so identical invocations produce identical outputs.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "concord",
    version,
    about = "Agreement statistics for categorical ratings",
    after_help = "Table CSV layout: an empty cell then the category labels, then one \
`label,counts...` row per category. Records CSV header: \
examiner_id,set_id,round,material,ground_truth,conclusion."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize one agreement table: observed/expected agreement and kappa
    Stats(StatsArgs),
    /// Pool a table's categories and write the pooled table
    Pool(PoolArgs),
    /// Full batch analysis of an evaluation-records file
    Analyze(analyze::AnalyzeArgs),
    /// Closed-form guessing-model table and its kappa
    Model(ModelArgs),
    /// Simulate a guessing-model run and tally the count table
    Simulate(SimulateArgs),
    /// Exact one-sided sign test on observed-vs-expected pairs
    Signtest(SigntestArgs),
    /// Render an observed-vs-expected scatter with kappa isolines
    Plot(PlotArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Agreement-table CSV to summarize
    #[arg(long)]
    table: PathBuf,
    /// Decimal places for percentage display
    #[arg(long, default_value_t = 1)]
    decimals: u32,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Args)]
struct PoolArgs {
    /// Agreement-table CSV to pool
    #[arg(long)]
    table: PathBuf,
    /// Builtin pooling: pool_inconclusives or pool_to_lean
    #[arg(long, conflicts_with = "pooling_file")]
    pooling: Option<String>,
    /// Custom pooling file with one `source -> target` line per label
    #[arg(long)]
    pooling_file: Option<PathBuf>,
    /// Write the pooled table here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// Precise-perception rate in [0, 1]
    #[arg(long)]
    pi: f64,
    /// Comma-separated category probabilities, e.g. 0.1,0.5,0.4
    #[arg(long)]
    probs: String,
    /// Comma-separated category labels (default C1..Ck)
    #[arg(long)]
    labels: Option<String>,
    /// Write the table here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Precise-perception rate in [0, 1]
    #[arg(long)]
    pi: f64,
    /// Comma-separated category probabilities
    #[arg(long)]
    probs: String,
    /// Number of paired positions to simulate
    #[arg(long)]
    n: u64,
    /// RNG seed (chacha8 stream)
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated category labels (default C1..Ck)
    #[arg(long)]
    labels: Option<String>,
    /// Write the table here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SigntestArgs {
    /// Two-column CSV with header `observed,expected`, one row per examiner
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Points CSV with header `subject,p_expected,p_observed`
    #[arg(long)]
    points: PathBuf,
    /// Comma-separated kappa values for reference lines
    #[arg(long, default_value = "0,0.8")]
    isolines: String,
    /// Plot title
    #[arg(long, default_value = "observed vs expected agreement")]
    title: String,
    /// Output SVG path
    #[arg(long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

type CmdResult = Result<(), Box<dyn Error>>;

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Pool(args) => cmd_pool(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Model(args) => cmd_model(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Signtest(args) => cmd_signtest(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Box<dyn Error>> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(BufReader::new(file))
}

fn load_table(path: &Path) -> Result<AgreementTable, Box<dyn Error>> {
    let table = read_table_csv(open(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(table)
}

fn write_or_print(output: Option<&Path>, content: &str) -> CmdResult {
    match output {
        Some(path) => {
            fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, Box<dyn Error>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<T>()
                .map_err(|e| format!("bad {what} entry `{f}`: {e}").into())
        })
        .collect()
}

fn cmd_stats(args: StatsArgs) -> CmdResult {
    let table = load_table(&args.table)?;
    let summary = table.summarize();
    match args.format {
        OutputFormat::Text => {
            println!(
                "categories: {} ({})",
                table.scheme().labels().join(", "),
                table.scheme().len()
            );
            println!("n: {}", summary.n);
            println!(
                "observed agreement: {} ({}/{})",
                display::percent(summary.p_observed, args.decimals),
                table.diagonal_total(),
                table.total()
            );
            println!(
                "expected agreement: {}",
                display::percent(summary.p_expected, args.decimals)
            );
            match summary.kappa {
                Kappa::Value(v) => {
                    println!("kappa: {}", display::fixed(v, 4));
                    if let Ok(band) = interpret_kappa(&summary.kappa) {
                        println!("band: {} ({})", band.label(), band.interval_label());
                    }
                }
                Kappa::Degenerate => println!("kappa: degenerate (expected agreement is 1)"),
            }
        }
        OutputFormat::Csv => {
            let row = SummaryRow {
                subject: "ALL".to_string(),
                stratum: "-".to_string(),
                material: "-".to_string(),
                scheme: "-".to_string(),
                summary,
            };
            print!(
                "{}",
                concord::render_summary(&[row], SummaryFormat::Csv, args.decimals)?
            );
        }
    }
    Ok(())
}

fn load_pooling(
    pooling: Option<&str>,
    pooling_file: Option<&Path>,
    source: &CategoryScheme,
) -> Result<PoolingScheme, Box<dyn Error>> {
    match (pooling, pooling_file) {
        (Some(name), None) => {
            let builtin: BuiltinPooling = name.parse()?;
            let pooling = builtin_pooling(builtin);
            if pooling.source() != source {
                return Err("builtin poolings apply to the six-way conclusion scheme".into());
            }
            Ok(pooling)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(PoolingScheme::parse_config(&text, source)?)
        }
        _ => Err("specify exactly one of --pooling or --pooling-file".into()),
    }
}

fn cmd_pool(args: PoolArgs) -> CmdResult {
    let table = load_table(&args.table)?;
    let pooling = load_pooling(
        args.pooling.as_deref(),
        args.pooling_file.as_deref(),
        table.scheme(),
    )?;
    let pooled = apply_pooling(&table, &pooling)?;
    write_or_print(args.output.as_deref(), &pooled.to_csv())
}

fn parse_model(pi: f64, probs: &str) -> Result<GuessingModel, Box<dyn Error>> {
    let probs: Vec<f64> = parse_list(probs, "probability")?;
    Ok(GuessingModel::new(pi, probs)?)
}

fn model_scheme(
    model: &GuessingModel,
    labels: Option<&str>,
) -> Result<CategoryScheme, Box<dyn Error>> {
    match labels {
        Some(labels) => {
            let labels: Vec<String> = parse_list(labels, "label")?;
            Ok(CategoryScheme::new(labels)?)
        }
        None => Ok(CategoryScheme::numbered(model.num_categories())?),
    }
}

fn cmd_model(args: ModelArgs) -> CmdResult {
    let model = parse_model(args.pi, &args.probs)?;
    let scheme = model_scheme(&model, args.labels.as_deref())?;
    let table = model.model_table(&scheme)?;
    let mut out = table.to_csv();
    out.push_str(&format!("# kappa={}\n", model.model_kappa()));
    write_or_print(args.output.as_deref(), &out)
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    let model = parse_model(args.pi, &args.probs)?;
    let scheme = model_scheme(&model, args.labels.as_deref())?;
    let table = model.simulate_run(&scheme, args.n, args.seed)?;
    let mut out = format!(
        "# seed={} generator={} n={}\n",
        args.seed, GENERATOR_ID, args.n
    );
    out.push_str(&table.to_csv());
    write_or_print(args.output.as_deref(), &out)
}

fn cmd_signtest(args: SigntestArgs) -> CmdResult {
    let text =
        fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or("empty input")?;
    if header.trim_end_matches('\r') != "observed,expected" {
        return Err(format!("line 1: header must be `observed,expected`, got `{header}`").into());
    }
    let mut differences = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (observed, expected) = line
            .split_once(',')
            .ok_or_else(|| format!("line {}: expected two fields", i + 1))?;
        let observed: f64 = observed
            .trim()
            .parse()
            .map_err(|_| format!("line {}: `{observed}` is not a number", i + 1))?;
        let expected: f64 = expected
            .trim()
            .parse()
            .map_err(|_| format!("line {}: `{expected}` is not a number", i + 1))?;
        differences.push(observed - expected);
    }
    let result = sign_test(&differences)?;
    print_sign_test(&result);
    Ok(())
}

fn print_sign_test(result: &SignTestResult) {
    println!("sign test, one-sided: {}", SignTestResult::ALTERNATIVE);
    println!("n_positive: {}", result.n_positive);
    println!("n_negative: {}", result.n_negative);
    println!("n_zero (dropped): {}", result.n_zero);
    println!("n_effective: {}", result.n_effective());
    println!("p_value: {}", result.p_value);
    println!("result {result}");
}

fn cmd_plot(args: PlotArgs) -> CmdResult {
    let text =
        fs::read_to_string(&args.points).map_err(|e| format!("{}: {e}", args.points.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or("empty input")?;
    if header.trim_end_matches('\r') != "subject,p_expected,p_observed" {
        return Err(format!(
            "line 1: header must be `subject,p_expected,p_observed`, got `{header}`"
        )
        .into());
    }
    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(format!("line {}: expected 3 fields", i + 1).into());
        }
        let parse = |f: &str| -> Result<f64, Box<dyn Error>> {
            f.trim()
                .parse()
                .map_err(|_| format!("line {}: `{f}` is not a number", i + 1).into())
        };
        points.push(ScatterPoint {
            label: fields[0].to_string(),
            p_expected: parse(fields[1])?,
            p_observed: parse(fields[2])?,
        });
    }
    let spec = ScatterSpec {
        title: args.title,
        points,
        isolines: parse_list(&args.isolines, "isoline")?,
    };
    let svg = scatter_plot(&spec)?;
    fs::write(&args.output, svg).map_err(|e| format!("{}: {e}", args.output.display()))?;
    println!("wrote {}", args.output.display());
    Ok(())
}
