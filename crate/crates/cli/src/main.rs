//! `basketmine` — deterministic transaction-analytics toolkit.
//!
//! One subcommand per pipeline stage, composed through plain CSV/JSON files.
//! Every run writes a `<command>.manifest.json` provenance record next to its
//! outputs; identical flags over identical inputs reproduce identical bytes.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(
    name = "basketmine",
    version,
    about = "Transaction analytics: synthetic data, temporal profiles, itemset/rule/sequence \
             mining, next-purchase prediction, and daily-volume forecasting",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic transaction CSV
    Gen(GenArgs),
    /// Write hour-of-day and day-of-week transaction histograms
    Temporal(TemporalArgs),
    /// Mine frequent itemsets with Apriori or FP-Growth
    MineItemsets(MineItemsetsArgs),
    /// Mine association rules with support/confidence/lift/leverage/conviction/zhangs_metric
    MineRules(MineRulesArgs),
    /// Mine frequent sequential purchase patterns per user
    MineSeq(MineSeqArgs),
    /// Rank a user's likely next purchases from rules and sequences
    Predict(PredictArgs),
    /// Fit an additive daily-volume model; write forecast, change table, and holdout metrics
    Forecast(ForecastArgs),
    /// Compare two value series with MAE/MSE/RMSE
    Eval(EvalArgs),
    /// Run every stage in order into one output directory
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// Level-wise candidate generation
    Apriori,
    /// Pattern growth over a compressed prefix tree
    Fpgrowth,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Apriori => "apriori",
            Algo::Fpgrowth => "fpgrowth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
pub struct GenArgs {
    /// PRNG seed; identical seeds give byte-identical output
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of transactions to generate
    #[arg(long, default_value_t = 1000)]
    pub transactions: u32,
    /// Size of the user population
    #[arg(long, default_value_t = 50)]
    pub users: u32,
    /// Size of the item catalogue
    #[arg(long, default_value_t = 20)]
    pub items: u32,
    /// Smallest basket size
    #[arg(long, default_value_t = 1)]
    pub min_basket: u32,
    /// Largest basket size
    #[arg(long, default_value_t = 5)]
    pub max_basket: u32,
    /// Calendar year the timestamps fall in
    #[arg(long, default_value_t = 2023)]
    pub year: i32,
    /// Output CSV path
    #[arg(long, default_value = "data.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct TemporalArgs {
    /// Transaction CSV to profile
    #[arg(long, default_value = "data.csv")]
    pub input: PathBuf,
    /// Histogram encoding
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Directory for hourly.* and daily.* outputs
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct MineItemsetsArgs {
    /// Transaction CSV to mine
    #[arg(long, default_value = "data.csv")]
    pub input: PathBuf,
    /// Mining algorithm (both produce identical results)
    #[arg(long, value_enum, default_value_t = Algo::Fpgrowth)]
    pub algo: Algo,
    /// Minimum support as a fraction of transactions
    #[arg(long, default_value_t = 0.005)]
    pub min_support: f64,
    /// Cap on itemset length
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Output JSON path
    #[arg(long, default_value = "itemsets.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct MineRulesArgs {
    /// Transaction CSV to mine
    #[arg(long, default_value = "data.csv")]
    pub input: PathBuf,
    /// Mining algorithm (both produce identical results)
    #[arg(long, value_enum, default_value_t = Algo::Fpgrowth)]
    pub algo: Algo,
    /// Minimum support as a fraction of transactions
    #[arg(long, default_value_t = 0.005)]
    pub min_support: f64,
    /// Minimum rule confidence
    #[arg(long, default_value_t = 0.3)]
    pub min_confidence: f64,
    /// Cap on itemset length
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Output JSON path
    #[arg(long, default_value = "rules.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct MineSeqArgs {
    /// Transaction CSV to mine
    #[arg(long, default_value = "data.csv")]
    pub input: PathBuf,
    /// Minimum number of users a pattern must occur in
    #[arg(long, default_value_t = 10)]
    pub min_count: u64,
    /// Cap on pattern length
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Output JSON path
    #[arg(long, default_value = "sequences.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct PredictArgs {
    /// Transaction CSV holding the user's history
    #[arg(long, default_value = "data.csv")]
    pub input: PathBuf,
    /// User to predict for
    #[arg(long)]
    pub user: String,
    /// Number of items to rank
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    /// Minimum support for the rule channel
    #[arg(long, default_value_t = 0.005)]
    pub min_support: f64,
    /// Minimum confidence for the rule channel
    #[arg(long, default_value_t = 0.3)]
    pub min_confidence: f64,
    /// Minimum user count for the sequence channel
    #[arg(long, default_value_t = 10)]
    pub min_count: u64,
    /// Output JSON path
    #[arg(long, default_value = "predictions.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ForecastArgs {
    /// Transaction CSV to aggregate into a daily series
    #[arg(long, default_value = "data.csv")]
    pub input: PathBuf,
    /// Days to forecast beyond the observed series
    #[arg(long, default_value_t = 30)]
    pub horizon: usize,
    /// Trailing days held out for the error metrics (default: 20% of the series)
    #[arg(long)]
    pub holdout: Option<usize>,
    /// File of YYYY-MM-DD holiday dates, one per line
    #[arg(long)]
    pub holidays: Option<PathBuf>,
    /// Denominator for percentage changes (default: mean of the training days)
    #[arg(long)]
    pub baseline: Option<f64>,
    /// Number of evenly spaced trend changepoints
    #[arg(long, default_value_t = 25)]
    pub changepoints: usize,
    /// Weekly seasonality Fourier order
    #[arg(long, default_value_t = 3)]
    pub weekly_order: usize,
    /// Yearly seasonality Fourier order
    #[arg(long, default_value_t = 10)]
    pub yearly_order: usize,
    /// Ridge penalty applied to all non-intercept coefficients
    #[arg(long, default_value_t = 1e-3)]
    pub ridge_lambda: f64,
    /// Directory for forecast.csv, pct_change.csv, and metrics.json
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EvalArgs {
    /// CSV of observed values (single column, or value in the second column)
    #[arg(long)]
    pub actual: PathBuf,
    /// CSV of predicted values, same layout
    #[arg(long)]
    pub pred: PathBuf,
    /// Also write the metrics JSON to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PipelineArgs {
    /// PRNG seed for the generation stage
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of transactions to generate
    #[arg(long, default_value_t = 1000)]
    pub transactions: u32,
    /// Size of the user population
    #[arg(long, default_value_t = 50)]
    pub users: u32,
    /// Size of the item catalogue
    #[arg(long, default_value_t = 20)]
    pub items: u32,
    /// Smallest basket size
    #[arg(long, default_value_t = 1)]
    pub min_basket: u32,
    /// Largest basket size
    #[arg(long, default_value_t = 5)]
    pub max_basket: u32,
    /// Calendar year the timestamps fall in
    #[arg(long, default_value_t = 2023)]
    pub year: i32,
    /// Mining algorithm for the itemset stages
    #[arg(long, value_enum, default_value_t = Algo::Fpgrowth)]
    pub algo: Algo,
    /// Minimum support as a fraction of transactions
    #[arg(long, default_value_t = 0.005)]
    pub min_support: f64,
    /// Minimum rule confidence
    #[arg(long, default_value_t = 0.3)]
    pub min_confidence: f64,
    /// Cap on itemset/pattern length
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Minimum user count for sequential patterns
    #[arg(long, default_value_t = 10)]
    pub min_count: u64,
    /// Predict for this user only (default: every user, as a JSON array)
    #[arg(long)]
    pub user: Option<String>,
    /// Number of items to rank per user
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    /// Days to forecast beyond the observed series
    #[arg(long, default_value_t = 30)]
    pub horizon: usize,
    /// Trailing days held out for the error metrics (default: 20% of the series)
    #[arg(long)]
    pub holdout: Option<usize>,
    /// Denominator for percentage changes (default: mean of the training days)
    #[arg(long)]
    pub baseline: Option<f64>,
    /// Number of evenly spaced trend changepoints
    #[arg(long, default_value_t = 25)]
    pub changepoints: usize,
    /// Weekly seasonality Fourier order
    #[arg(long, default_value_t = 3)]
    pub weekly_order: usize,
    /// Yearly seasonality Fourier order
    #[arg(long, default_value_t = 10)]
    pub yearly_order: usize,
    /// Ridge penalty applied to all non-intercept coefficients
    #[arg(long, default_value_t = 1e-3)]
    pub ridge_lambda: f64,
    /// Directory receiving every artifact
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Gen(args) => commands::gen(args)?,
        Command::Temporal(args) => commands::temporal(args)?,
        Command::MineItemsets(args) => commands::mine_itemsets(args)?,
        Command::MineRules(args) => commands::mine_rules(args)?,
        Command::MineSeq(args) => commands::mine_seq(args)?,
        Command::Predict(args) => commands::predict(args)?,
        Command::Forecast(args) => commands::forecast(args)?,
        Command::Eval(args) => commands::eval(args)?,
        Command::Pipeline(args) => commands::pipeline(args)?,
    };
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                // --help / --version are successful runs, not usage errors.
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
