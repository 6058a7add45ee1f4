use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use sgl_core::bench::{self, BenchRecord, DEFAULT_REPETITIONS};
use sgl_core::indexing::{coefficient_count, sample_count};
use sgl_core::store;
use sgl_core::{TransformPlan, Variant};

/// Naive runs above this bandlimit take minutes to hours.
const NAIVE_WARN_ABOVE: usize = 16;

#[derive(Parser)]
#[command(name = "sglfft", version, about = "Spherical Gauss-Laguerre Fourier transforms")]
struct Cli {
    /// Worker threads for the transforms (0 uses every core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and store the quadrature and Legendre tables for one bandlimit
    Precompute {
        #[arg(long, short = 'b')]
        bandlimit: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time inverse-then-forward roundtrips on random coefficients
    Roundtrip {
        #[arg(long, short = 'b')]
        bandlimit: usize,
        #[arg(long, default_value = "fast")]
        variant: Variant,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append the result row to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tables: TableArgs,
    },
    /// Run the roundtrip protocol over several bandlimits and variants
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
        bandlimits: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "naive,fast")]
        variants: Vec<Variant>,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write all result rows to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tables: TableArgs,
    },
    /// Transform a raw vector of interleaved little-endian f64 re/im pairs
    Transform {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, short = 'b')]
        bandlimit: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, default_value = "fast")]
        variant: Variant,
        #[command(flatten)]
        tables: TableArgs,
    },
}

#[derive(Args)]
struct TableArgs {
    /// Directory of precomputed tables
    #[arg(long, env = "SGL_TABLES")]
    tables: Option<PathBuf>,
    /// Build missing tables in memory instead of failing
    #[arg(long)]
    allow_generate: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Fwd,
    Inv,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Precompute { bandlimit, out } => {
            let manifest = store::precompute_all(bandlimit, &out)?;
            for entry in &manifest.entries {
                println!("{}", out.join(&entry.file).display());
            }
        }
        Command::Roundtrip {
            bandlimit,
            variant,
            repetitions,
            seed,
            csv,
            tables,
        } => {
            let record = roundtrip(bandlimit, variant, repetitions, seed, &tables, cli.threads)?;
            print!("{}", bench::render_table(std::slice::from_ref(&record.0), record.1));
            if let Some(path) = csv {
                bench::write_csv(&path, &[record.0], true)?;
            }
        }
        Command::Bench {
            bandlimits,
            variants,
            repetitions,
            seed,
            csv,
            tables,
        } => {
            let mut records = Vec::with_capacity(bandlimits.len() * variants.len());
            let mut threads = 0;
            for &b in &bandlimits {
                for &v in &variants {
                    let (record, t) = roundtrip(b, v, repetitions, seed, &tables, cli.threads)?;
                    threads = t;
                    records.push(record);
                }
            }
            print!("{}", bench::render_table(&records, threads));
            if let Some(path) = csv {
                bench::write_csv(&path, &records, false)?;
            }
        }
        Command::Transform {
            direction,
            bandlimit,
            input,
            output,
            variant,
            tables,
        } => {
            let plan = obtain_plan(bandlimit, &tables, cli.threads)?;
            let expected = match direction {
                Direction::Fwd => sample_count(bandlimit),
                Direction::Inv => coefficient_count(bandlimit),
            };
            let data = read_vector(&input, expected)?;
            let result = match direction {
                Direction::Fwd => plan.forward(variant, &data)?,
                Direction::Inv => plan.inverse(variant, &data)?,
            };
            write_vector(&output, &result)?;
        }
    }
    Ok(())
}

fn roundtrip(
    bandlimit: usize,
    variant: Variant,
    repetitions: usize,
    seed: u64,
    tables: &TableArgs,
    threads: usize,
) -> Result<(BenchRecord, usize)> {
    if variant == Variant::Naive && bandlimit > NAIVE_WARN_ABOVE {
        log::warn!("naive transform at B = {bandlimit} scales like B^7 and will take a long time");
    }
    let plan = obtain_plan(bandlimit, tables, threads)?;
    let (record, _) = bench::run_roundtrip(&plan, variant, repetitions, seed)?;
    Ok((record, plan.threads()))
}

fn obtain_plan(bandlimit: usize, tables: &TableArgs, threads: usize) -> Result<TransformPlan> {
    let plan = match &tables.tables {
        Some(dir) if store::has_tables(dir, bandlimit) => store::load_plan(dir, bandlimit)
            .with_context(|| format!("loading tables for B = {bandlimit} from {}", dir.display()))?,
        found if tables.allow_generate => {
            if let Some(dir) = found {
                log::warn!("no tables for B = {bandlimit} in {}; generating in memory", dir.display());
            } else {
                log::warn!("no table directory given; generating B = {bandlimit} tables in memory");
            }
            TransformPlan::generate(bandlimit)?
        }
        Some(dir) => bail!(
            "no tables for B = {bandlimit} in {}; run `precompute` or pass --allow-generate",
            dir.display()
        ),
        None => bail!("no table directory; pass --tables, set SGL_TABLES, or pass --allow-generate"),
    };
    Ok(plan.with_threads(threads)?)
}

fn read_vector(path: &Path, expected: usize) -> Result<Vec<Complex64>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.len() != 16 * expected {
        bail!(
            "{} holds {} bytes; expected {expected} complex values ({} bytes)",
            path.display(),
            bytes.len(),
            16 * expected
        );
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8-byte half"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8-byte half"));
            Complex64::new(re, im)
        })
        .collect())
}

fn write_vector(path: &Path, data: &[Complex64]) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 * data.len());
    for z in data {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}
