// SPDX-License-Identifier: MIT OR Apache-2.0

//! The `hetvar` command line.
//!
//! Exit codes: 0 on success, 1 on usage/validation/ingestion errors, 2 on I/O
//! errors. Errors go to stderr as `error: <category>: <detail>`. Output files
//! are written to a temporary sibling and renamed into place on success.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::distribution::{self, DEFAULT_BINS};
use crate::divergence::{self, LogBase, Metric};
use crate::error::{Error, Result};
use crate::local_variance::DEFAULT_WINDOW;
use crate::measure::{measure, MeasureConfig, Variant};
use crate::series::{self, SegmentedGeneratorConfig, Spacing, TimeSeries};
use crate::sweep::{run_sweep, SweepConfig};

#[derive(Parser, Debug)]
#[command(name = "hetvar", version, about = "Quantify heteroskedasticity from the distribution of local variances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded piecewise-constant-variance Gaussian series
    Generate(GenerateArgs),
    /// Score a series read from CSV
    Analyze(AnalyzeArgs),
    /// Compare two histogram CSVs with a divergence or entropy measure
    Divergence(DivergenceArgs),
    /// Sweep score against number of sigmas and window size
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct GeneratorFlags {
    /// Smallest segment standard deviation
    #[arg(long, default_value_t = series::DEFAULT_SIGMA_MIN)]
    sigma_min: f64,
    /// Largest segment standard deviation
    #[arg(long, default_value_t = series::DEFAULT_SIGMA_MAX)]
    sigma_max: f64,
    /// Sigma spacing: linear or logarithmic
    #[arg(long, default_value = "logarithmic")]
    spacing: Spacing,
    /// Randomly permute segment order
    #[arg(long)]
    shuffle: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Number of samples
    #[arg(long, default_value_t = 65_536)]
    samples: usize,
    /// Number of distinct sigmas (contiguous segments)
    #[arg(long, default_value_t = 64)]
    num_sigmas: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    generator: GeneratorFlags,
    /// Emit a `t,value` CSV with the sample index as `t`
    #[arg(long)]
    time_column: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Input series CSV (`value` or `t,value`)
    #[arg(long)]
    input: PathBuf,
    /// Local variance window length
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Histogram bin count
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Score variant: bhattacharyya (H_B) or hellinger (H_H)
    #[arg(long, default_value = "bhattacharyya")]
    variant: Variant,
    /// Also write the local-variance histogram as `bin_midpoint,mass` CSV
    #[arg(long)]
    emit_distribution: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DivergenceArgs {
    /// First distribution (`bin_midpoint,mass` or `mass` CSV)
    #[arg(long)]
    p: PathBuf,
    /// Second distribution; not needed for the entropies
    #[arg(long)]
    q: Option<PathBuf>,
    /// kl, renyi, tsallis, jsd, bc, bhattacharyya, hellinger_paper,
    /// hellinger_standard, shannon_entropy, renyi_entropy
    #[arg(long)]
    metric: Metric,
    /// Order for renyi, tsallis and renyi_entropy
    #[arg(long)]
    alpha: Option<f64>,
    /// Logarithm base: natural or base2
    #[arg(long, default_value = "natural")]
    log_base: LogBase,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated numbers of distinct sigmas
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
    sigma_counts: Vec<usize>,
    /// Comma-separated window lengths
    #[arg(long, value_delimiter = ',', default_value = "32,64,128,256")]
    windows: Vec<usize>,
    /// Histogram bin count
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Samples per generated series
    #[arg(long, default_value_t = 65_536)]
    samples: usize,
    /// Comma-separated seeds
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19"
    )]
    seeds: Vec<u64>,
    #[command(flatten)]
    generator: GeneratorFlags,
    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Report CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-(window, metric) summary CSV path
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// Runs the CLI with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let detail = rendered.strip_prefix("error: ").unwrap_or(&rendered);
            let _ = write!(stderr, "error: usage: {detail}");
            return 1;
        }
    };

    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.category());
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match command {
        Command::Generate(args) => generate(args, stdout),
        Command::Analyze(args) => analyze(args, stdout, stderr),
        Command::Divergence(args) => divergence_cmd(args, stdout),
        Command::Sweep(args) => sweep(args, stdout),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Writes via a temporary file in the target directory, renamed on success.
fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut writer = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut writer)?;
        writer.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(path: Option<&Path>, stdout: &mut dyn Write, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, fill),
        None => fill(stdout),
    }
}

fn generator_config(flags: &GeneratorFlags, samples: usize, k: usize, seed: u64) -> SegmentedGeneratorConfig {
    SegmentedGeneratorConfig {
        total_samples: samples,
        num_sigmas: k,
        sigma_min: flags.sigma_min,
        sigma_max: flags.sigma_max,
        spacing: flags.spacing,
        shuffle_segments: flags.shuffle,
        seed,
    }
}

fn generate(args: GenerateArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = generator_config(&args.generator, args.samples, args.num_sigmas, args.seed);
    config.validate()?;
    let mut series = series::generate_segmented(&config)?;
    if args.time_column {
        let times = (0..series.len()).map(|i| i.to_string()).collect();
        series = series.with_times(times)?;
    }
    emit(args.out.as_deref(), stdout, |w| series::write_csv(&series, w))
}

fn analyze(args: AnalyzeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let config = MeasureConfig { window: args.window, bins: args.bins, variant: args.variant };
    config.validate()?;
    let series: TimeSeries = series::read_csv(open(&args.input)?)?;
    let report = measure(&series, &config)?;
    if report.sparse {
        let _ = writeln!(
            stderr,
            "warning: only {} local variances for {} bins; the score may be noisy",
            report.n_variances, config.bins
        );
    }
    if let Some(path) = &args.emit_distribution {
        write_atomic(path, |w| report.distribution.write_csv(w))?;
    }
    writeln!(stdout, "variant,score,window,bins,n_variances")?;
    writeln!(
        stdout,
        "{},{},{},{},{}",
        report.variant, report.score, config.window, config.bins, report.n_variances
    )?;
    Ok(())
}

fn divergence_cmd(args: DivergenceArgs, stdout: &mut dyn Write) -> Result<()> {
    if args.metric.needs_alpha() && args.alpha.is_none() {
        return Err(Error::Parameter(format!("metric `{}` requires --alpha", args.metric)));
    }
    if args.metric.is_pairwise() && args.q.is_none() {
        return Err(Error::Parameter(format!("metric `{}` requires --q", args.metric)));
    }
    let p = distribution::read_csv(open(&args.p)?)?;
    let q = match &args.q {
        Some(path) => Some(distribution::read_csv(open(path)?)?),
        None => None,
    };
    let result = divergence::evaluate(args.metric, &p, q.as_ref(), args.alpha, args.log_base)?;
    writeln!(stdout, "metric,value,alpha,log_base")?;
    let alpha = result.alpha.map(|a| a.to_string()).unwrap_or_default();
    writeln!(stdout, "{},{},{},{}", result.metric, result.value, alpha, result.log_base)?;
    Ok(())
}

fn sweep(args: SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = SweepConfig {
        sigma_counts: args.sigma_counts,
        windows: args.windows,
        bins: args.bins,
        total_samples: args.samples,
        seeds: args.seeds,
        sigma_min: args.generator.sigma_min,
        sigma_max: args.generator.sigma_max,
        spacing: args.generator.spacing,
        shuffle_segments: args.generator.shuffle,
    };
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let report = pool.install(|| run_sweep(&config))?;

    if let Some(path) = &args.summary {
        write_atomic(path, |w| report.write_summary_csv(w))?;
    }
    emit(args.out.as_deref(), stdout, |w| report.write_rows_csv(w))
}
