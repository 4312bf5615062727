mod output;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use shiftmine::matrixio::{diff_histogram, diff_summary, share_at_most, DEFAULT_ROUND_DECIMALS};
use shiftmine::oracle::{applicable_specs, random_matrix, verify_theorems, TheoremReport};
use shiftmine::{fixtures, load_matrix, mine, Caps, EncodingSpec, LoadOptions, Matrix, MineOptions, Mode, TextFormat};

use output::OutFormat;

#[derive(Parser)]
#[command(name = "shiftmine", version, about = "Mine constant and shifting biclusters from numeric matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all inclusion-maximal patterns.
    Mine(MineArgs),
    /// Summarize in-row differences.
    Stats(StatsArgs),
    /// Write detail files for the best patterns.
    Report(ReportArgs),
    /// Cross-check mined patterns against brute-force enumeration.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// First line holds column labels.
    #[arg(long)]
    header: bool,
    /// First field of each line is a row label.
    #[arg(long)]
    row_labels: bool,
    /// Swap rows and columns after loading.
    #[arg(long)]
    transpose: bool,
    /// Decimals that differences are rounded to before comparison.
    #[arg(long, default_value_t = DEFAULT_ROUND_DECIMALS)]
    round_decimals: u32,
}

impl InputArgs {
    fn load(&self) -> Result<Matrix> {
        let file = File::open(&self.input).with_context(|| format!("opening {}", self.input.display()))?;
        let opts = LoadOptions {
            format: match self.format {
                FormatArg::Csv => TextFormat::Csv,
                FormatArg::Tsv => TextFormat::Tsv,
            },
            has_header: self.header,
            has_row_labels: self.row_labels,
        };
        let m = load_matrix(BufReader::new(file), opts).with_context(|| format!("reading {}", self.input.display()))?;
        let m = if self.transpose { m.transpose() } else { m };
        Ok(m.with_round_decimals(self.round_decimals))
    }
}

#[derive(Args)]
struct MiningArgs {
    #[arg(long)]
    mode: Mode,
    /// Tolerance; required by delta, pruned and global modes.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    min_rows: usize,
    #[arg(long, default_value_t = 0)]
    min_cols: usize,
    /// Abort when the intermediate term count exceeds this.
    #[arg(long)]
    max_terms: Option<usize>,
    /// Abort after this many seconds of enumeration.
    #[arg(long)]
    max_seconds: Option<u64>,
}

impl MiningArgs {
    fn spec(&self) -> Result<EncodingSpec> {
        let delta = match (self.mode.uses_delta(), self.delta) {
            (true, Some(d)) => d,
            (true, None) => bail!("--delta is required for {} mode", self.mode),
            (false, Some(_)) => bail!("--delta is not used by {} mode", self.mode),
            (false, None) => 0.0,
        };
        Ok(match self.mode {
            Mode::Constant => EncodingSpec::constant(),
            Mode::Delta => EncodingSpec::delta(delta),
            Mode::Exhaustive => EncodingSpec::exhaustive(),
            Mode::Pruned => EncodingSpec::pruned(delta),
            Mode::Global => EncodingSpec::global(delta),
        })
    }

    fn options(&self) -> MineOptions {
        let mut caps = Caps::default();
        if self.max_terms.is_some() {
            caps.max_terms = self.max_terms;
        }
        caps.max_duration = self.max_seconds.map(Duration::from_secs);
        MineOptions {
            min_rows: self.min_rows,
            min_cols: self.min_cols,
            caps,
        }
    }
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    out_format: OutFormat,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Histogram bin width.
    #[arg(long, default_value_t = 0.1)]
    bin_width: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    out_format: OutFormat,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Number of patterns to describe, best harmonic diameter first.
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Directory for the detail files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix to verify; the built-in fixtures when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    header: bool,
    #[arg(long)]
    row_labels: bool,
    #[arg(long)]
    transpose: bool,
    #[arg(long, default_value_t = DEFAULT_ROUND_DECIMALS)]
    round_decimals: u32,
    /// Restrict to one mode; every applicable mode and threshold otherwise.
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    delta: Option<f64>,
    /// Random matrices to add to the built-in fixtures.
    #[arg(long, default_value_t = 100)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest random matrix side.
    #[arg(long, default_value_t = 5)]
    max_side: usize,
    /// Largest random integer entry.
    #[arg(long, default_value_t = 3)]
    max_value: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_mine(args: &MineArgs) -> Result<()> {
    let m = args.input.load()?;
    let spec = args.mining.spec()?;
    let records = mine(&m, spec, &args.mining.options())?;
    let mut w = writer(&args.out)?;
    output::write_patterns(&mut w, &spec, &records, args.out_format)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Stats {
    rows: usize,
    cols: usize,
    summary: shiftmine::matrixio::DiffSummary,
    share_at_most: Vec<(f64, f64)>,
    histogram: Vec<shiftmine::matrixio::HistogramBin>,
}

fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let m = args.input.load()?;
    let stats = Stats {
        rows: m.rows(),
        cols: m.cols(),
        summary: diff_summary(&m),
        share_at_most: [0.1, 0.2, 0.3, 1.0].iter().map(|&t| (t, share_at_most(&m, t))).collect(),
        histogram: diff_histogram(&m, args.bin_width)?,
    };
    let mut w = writer(&args.out)?;
    match args.out_format {
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &stats)?;
            writeln!(w)?;
        }
        OutFormat::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["bin_lower", "count"])?;
            for b in &stats.histogram {
                c.write_record([b.lower.to_string(), b.count.to_string()])?;
            }
            c.flush()?;
        }
        OutFormat::Table => {
            let s = &stats.summary;
            writeln!(w, "matrix: {} x {}", stats.rows, stats.cols)?;
            writeln!(w, "pairs: {}  unique: {}  nonzero unique: {}", s.pairs, s.unique, s.nonzero_unique)?;
            writeln!(w, "min: {}  mean: {:.4}  max: {}", s.min, s.mean, s.max)?;
            for (t, share) in &stats.share_at_most {
                writeln!(w, "share <= {t}: {:.2}%", share * 100.0)?;
            }
            writeln!(w, "bin_lower\tcount")?;
            for b in &stats.histogram {
                writeln!(w, "{}\t{}", b.lower, b.count)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let m = args.input.load()?;
    let spec = args.mining.spec()?;
    let records = mine(&m, spec, &args.mining.options())?;
    output::write_report(&args.out, &m, &spec, &records, args.top)
}

#[derive(Serialize)]
struct VerifyRun {
    matrix: String,
    #[serde(flatten)]
    report: TheoremReport,
}

#[derive(Serialize)]
struct VerifyReport {
    runs: usize,
    failed: usize,
    passed: bool,
    failures: Vec<VerifyRun>,
    results: Vec<VerifyRun>,
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let mut matrices: Vec<(String, Matrix)> = Vec::new();
    if let Some(path) = &args.input {
        let input = InputArgs {
            input: path.clone(),
            format: args.format,
            header: args.header,
            row_labels: args.row_labels,
            transpose: args.transpose,
            round_decimals: args.round_decimals,
        };
        matrices.push((path.display().to_string(), input.load()?));
    } else {
        matrices.extend(fixtures::all().into_iter().map(|(n, m)| (n.to_string(), m)));
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for k in 0..args.random {
            matrices.push((format!("random-{k}"), random_matrix(&mut rng, args.max_side, args.max_side, args.max_value)));
        }
    }
    let only = match args.mode {
        Some(mode) => Some(
            MiningArgs {
                mode,
                delta: args.delta,
                min_rows: 0,
                min_cols: 0,
                max_terms: None,
                max_seconds: None,
            }
            .spec()?,
        ),
        None => None,
    };

    let caps = Caps::default();
    let mut results = Vec::new();
    for (name, m) in &matrices {
        let specs = only.map_or_else(|| applicable_specs(m), |s| vec![s]);
        for spec in specs {
            let report = verify_theorems(m, &spec, &caps).with_context(|| format!("{name}, {spec}"))?;
            results.push(VerifyRun { matrix: name.clone(), report });
        }
    }
    let (failures, passing): (Vec<_>, Vec<_>) = results.into_iter().partition(|r| !r.report.passed);
    let report = VerifyReport {
        runs: failures.len() + passing.len(),
        failed: failures.len(),
        passed: failures.is_empty(),
        failures,
        results: passing,
    };
    let mut w = writer(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Mine(a) => cmd_mine(a).map(|_| true),
        Command::Stats(a) => cmd_stats(a).map(|_| true),
        Command::Report(a) => cmd_report(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
