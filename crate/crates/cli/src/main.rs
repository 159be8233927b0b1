//! `nckp`: count, sample, verify and draw k-noncrossing set partitions.

mod svg;

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use nckp_core::count::{load_tables_for, save_tables};
use nckp_core::sampler::sample_round_robin;
use nckp_core::{total_partitions, total_regular, Error, Partition, Tables};

/// Environment variable naming the directory for relative cache paths.
const CACHE_DIR_VAR: &str = "NCKP_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "nckp", version, about = "Exact counting and uniform sampling of k-noncrossing set partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact number of partitions.
    Count(Target),
    /// Stream uniformly random partitions, one per line.
    Sample(SampleArgs),
    /// Manage precomputed tables.
    #[command(subcommand)]
    Cache(CacheCommand),
    /// Check the engine against brute-force oracles and print a JSON report.
    Verify(VerifyArgs),
    /// Print a histogram of a statistic over random partitions.
    Stats(StatsArgs),
    /// Read partitions on stdin and draw them as arc diagrams.
    Render(RenderArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct Target {
    /// Crossing bound: partitions have no k-crossing.
    #[arg(long)]
    k: usize,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Only 2-regular partitions (no block holds two consecutive numbers).
    #[arg(long)]
    regular: bool,
}

impl Target {
    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(usage(format!("--k must be at least 2, got {}", self.k)));
        }
        if self.regular && self.k < 3 {
            return Err(usage(format!("--regular needs --k of at least 3, got {}", self.k)));
        }
        Ok(())
    }

    fn mode(&self) -> &'static str {
        if self.regular {
            "regular"
        } else {
            "plain"
        }
    }
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    target: Target,
    /// How many partitions to draw.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Blocks)]
    format: Format,
    /// Table cache: loaded if present, written after preprocessing if not.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads. Sample m comes from worker m mod J, which draws from
    /// its own stream seeded with seed XOR worker.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    /// `{1,3}{2}`
    Blocks,
    /// `(1,3)`
    Arcs,
    /// `{"n":3,"blocks":[[1,3],[2]]}`
    Json,
}

#[derive(Subcommand, Debug)]
enum CacheCommand {
    /// Run preprocessing and save the tables.
    Build {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, value_enum, default_value_t = Metric::Blocks)]
    metric: Metric,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    /// Number of blocks.
    Blocks,
    /// Number of arcs (n minus the number of blocks).
    Arcs,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long, value_enum, default_value_t = RenderFormat::Svg)]
    format: RenderFormat,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum RenderFormat {
    Svg,
}

/// One partition as a JSON line.
#[derive(Serialize, Deserialize)]
struct Record {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

/// A bad flag value, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn usage(msg: String) -> anyhow::Error {
    Usage(msg).into()
}

/// Verification ran but found disagreements; exit code 4.
#[derive(Debug, thiserror::Error)]
#[error("verification failed: {0} checks disagree")]
struct VerifyFailed(usize);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if code != 0 {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if cause.is::<VerifyFailed>() {
            return 4;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            match err {
                Error::Parameter { .. } => return 2,
                Error::CacheMismatch { .. } | Error::CacheParse { .. } => return 3,
                _ => {}
            }
        }
        if let Some(io) = cause.downcast_ref::<io::Error>() {
            // a closed pipe downstream just ends the stream
            if io.kind() == io::ErrorKind::BrokenPipe {
                return 0;
            }
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Count(t) => count(t),
        Command::Sample(args) => sample(args),
        Command::Cache(CacheCommand::Build { target, out }) => build_cache(target, &out),
        Command::Verify(args) => verify(args),
        Command::Stats(args) => stats(args),
        Command::Render(args) => render(args),
    }
}

fn count(t: Target) -> Result<()> {
    t.validate()?;
    let total = if t.regular {
        total_regular(t.k, t.n)?
    } else {
        total_partitions(t.k, t.n)?
    };
    println!("{total}");
    Ok(())
}

/// Relative cache paths live under `$NCKP_CACHE_DIR` when it is set.
fn cache_path(path: &Path) -> PathBuf {
    match std::env::var_os(CACHE_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn tables_for(t: Target, cache: Option<&Path>) -> Result<Arc<Tables>> {
    let Some(path) = cache.map(cache_path) else {
        return Ok(Arc::new(Tables::build(t.k, t.n, t.regular)?));
    };
    if path.exists() {
        let tables = load_tables_for(&path, t.k, t.n, t.regular)
            .with_context(|| format!("reading cache {}", path.display()))?;
        return Ok(Arc::new(tables));
    }
    let tables = Tables::build(t.k, t.n, t.regular)?;
    save_tables(&tables, &path).with_context(|| format!("writing cache {}", path.display()))?;
    Ok(Arc::new(tables))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_partition(out: &mut dyn Write, p: &Partition, format: Format) -> io::Result<()> {
    match format {
        Format::Blocks => writeln!(out, "{p}"),
        Format::Arcs => writeln!(out, "{}", p.arcs_string()),
        Format::Json => {
            let record = Record {
                n: p.n(),
                blocks: p.blocks().to_vec(),
            };
            serde_json::to_writer(&mut *out, &record)?;
            writeln!(out)
        }
    }
}

fn check_jobs(jobs: usize) -> Result<()> {
    if jobs == 0 {
        return Err(usage("--jobs must be at least 1".into()));
    }
    Ok(())
}

fn sample(args: SampleArgs) -> Result<()> {
    args.target.validate()?;
    check_jobs(args.jobs)?;
    let tables = tables_for(args.target, args.cache.as_deref())?;
    let mut out = output(args.out.as_deref())?;
    sample_round_robin(tables, args.target.n, args.seed, args.count, args.jobs, |_, p| {
        write_partition(&mut *out, &p, args.format).map_err(Error::from)
    })?;
    out.flush()?;
    Ok(())
}

fn build_cache(t: Target, out: &Path) -> Result<()> {
    t.validate()?;
    let path = cache_path(out);
    let tables = Tables::build(t.k, t.n, t.regular)?;
    save_tables(&tables, &path).with_context(|| format!("writing cache {}", path.display()))?;
    eprintln!("wrote {} (k={}, n={}, {})", path.display(), t.k, t.n, t.mode());
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<()> {
    let report = nckp_core::testkit::verify(args.k_max, args.n_max)?;
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    if !report.passed {
        let bad = report.checks.iter().filter(|c| !c.passed).count();
        return Err(VerifyFailed(bad).into());
    }
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    args.target.validate()?;
    check_jobs(args.jobs)?;
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1".into()));
    }
    let t = args.target;
    let tables = tables_for(t, args.cache.as_deref())?;
    let mut hist = vec![0u64; t.n + 1];
    sample_round_robin(tables, t.n, args.seed, args.samples, args.jobs, |_, p| {
        let blocks = p.block_count();
        let value = match args.metric {
            Metric::Blocks => blocks,
            Metric::Arcs => p.n() as usize - blocks,
        };
        hist[value] += 1;
        Ok(())
    })?;
    let metric = match args.metric {
        Metric::Blocks => "blocks",
        Metric::Arcs => "arcs",
    };
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(
        out,
        "# {metric} k={} n={} mode={} samples={} seed={}",
        t.k,
        t.n,
        t.mode(),
        args.samples,
        args.seed
    )?;
    let peak = hist.iter().copied().max().unwrap_or(0).max(1);
    let mut sum = 0u64;
    for (value, &c) in hist.iter().enumerate() {
        sum += value as u64 * c;
        if c == 0 {
            continue;
        }
        let bar = "#".repeat(((c * 50).div_ceil(peak)) as usize);
        writeln!(out, "{value}\t{c}\t{bar}")?;
    }
    writeln!(out, "# mean {:.4}", sum as f64 / args.samples as f64)?;
    out.flush()?;
    Ok(())
}

fn parse_line(line: &str) -> Result<Partition> {
    if line.starts_with("{\"") {
        let r: Record = serde_json::from_str(line)?;
        return Ok(Partition::new(r.n, r.blocks)?);
    }
    Ok(line.parse::<Partition>()?)
}

fn render(args: RenderArgs) -> Result<()> {
    match args.format {
        RenderFormat::Svg => {}
    }
    let mut parts = Vec::new();
    for (idx, line) in io::stdin().lock().lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let p = parse_line(line).with_context(|| format!("stdin line {}", idx + 1))?;
        parts.push(p);
    }
    if parts.is_empty() {
        bail!("no partitions on stdin");
    }
    let mut out = output(args.out.as_deref())?;
    out.write_all(svg::render(&parts).as_bytes())?;
    out.flush()?;
    Ok(())
}
