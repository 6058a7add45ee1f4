//! Roundtrip benchmark protocol: random coefficients, one timed inverse
//! followed by one forward transform per repetition, averaged errors.
//!
//! Coefficients come from a single `ChaCha8Rng` stream seeded with
//! `seed_from_u64(seed)`. Each coefficient, in ω-order, draws its real part
//! then its imaginary part uniformly from `[−1, 1]`; repetition `r` continues
//! the stream where repetition `r − 1` stopped.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SglError};
use crate::indexing::coefficient_count;
use crate::transform::{roundtrip_error, TransformPlan, Variant};

pub const DEFAULT_REPETITIONS: usize = 10;

/// Averages over the repetitions of one `(B, variant)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(rename = "B")]
    pub bandlimit: usize,
    pub variant: Variant,
    #[serde(rename = "reps")]
    pub repetitions: usize,
    pub mean_time_s: f64,
    pub mean_max_abs_err: f64,
    pub mean_max_rel_err: f64,
}

/// One repetition's measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Repetition {
    pub seconds: f64,
    pub max_abs: f64,
    pub max_rel: f64,
}

/// Seeded coefficient stream.
#[derive(Debug, Clone)]
pub struct CoefficientStream {
    rng: ChaCha8Rng,
}

impl CoefficientStream {
    pub fn new(seed: u64) -> Self {
        CoefficientStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Next `Ω(B)` coefficients.
    pub fn draw(&mut self, bandlimit: usize) -> Vec<Complex64> {
        (0..coefficient_count(bandlimit))
            .map(|_| {
                let re = self.rng.gen_range(-1.0..=1.0);
                let im = self.rng.gen_range(-1.0..=1.0);
                Complex64::new(re, im)
            })
            .collect()
    }
}

/// Runs the protocol and returns the averages plus every repetition.
pub fn run_roundtrip(
    plan: &TransformPlan,
    variant: Variant,
    repetitions: usize,
    seed: u64,
) -> Result<(BenchRecord, Vec<Repetition>)> {
    if repetitions == 0 {
        return Err(SglError::Domain("repetitions must be at least 1".into()));
    }
    let b = plan.bandlimit();
    let mut stream = CoefficientStream::new(seed);
    let mut reps = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let coeffs = stream.draw(b);
        let start = Instant::now();
        let grid = plan.inverse(variant, &coeffs)?;
        let back = plan.forward(variant, &grid)?;
        let seconds = start.elapsed().as_secs_f64();
        let err = roundtrip_error(&coeffs, &back)?;
        if err.skipped > 0 {
            log::warn!("{} zero-magnitude coefficients excluded from the relative error", err.skipped);
        }
        reps.push(Repetition {
            seconds,
            max_abs: err.max_abs,
            max_rel: err.max_rel,
        });
    }
    let n = repetitions as f64;
    let record = BenchRecord {
        bandlimit: b,
        variant,
        repetitions,
        mean_time_s: reps.iter().map(|r| r.seconds).sum::<f64>() / n,
        mean_max_abs_err: reps.iter().map(|r| r.max_abs).sum::<f64>() / n,
        mean_max_rel_err: reps.iter().map(|r| r.max_rel).sum::<f64>() / n,
    };
    Ok((record, reps))
}

/// Writes records as CSV; with `append`, an existing non-empty file keeps its header.
pub fn write_csv(path: impl AsRef<Path>, records: &[BenchRecord], append: bool) -> Result<()> {
    let path = path.as_ref();
    let has_content = append && path.metadata().map(|m| m.len() > 0).unwrap_or(false);
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(append)
        .truncate(!append)
        .open(path)
        .map_err(|e| SglError::io(path, e))?;
    let mut writer = csv::WriterBuilder::new().has_headers(!has_content).from_writer(file);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush().map_err(|e| SglError::io(path, e))?;
    Ok(())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    reader.deserialize().map(|r| r.map_err(SglError::from)).collect()
}

/// Least-squares slope of `ln t` against `ln B`.
pub fn log_log_slope(points: &[(usize, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(b, t)| b == 0 || !(t > 0.0)) {
        return Err(SglError::Domain(
            "slope fit needs at least two points with positive B and time".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|&(b, _)| (b as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Aligned text table: one row per `B`, one column group per variant.
pub fn render_table(records: &[BenchRecord], threads: usize) -> String {
    let mut variants: Vec<Variant> = Vec::new();
    for r in records {
        if !variants.contains(&r.variant) {
            variants.push(r.variant);
        }
    }
    let mut rows: BTreeMap<usize, Vec<Option<&BenchRecord>>> = BTreeMap::new();
    for r in records {
        let slot = variants.iter().position(|&v| v == r.variant).expect("collected above");
        rows.entry(r.bandlimit).or_insert_with(|| vec![None; variants.len()])[slot] = Some(r);
    }
    let mut out = String::new();
    let _ = writeln!(out, "threads: {threads}");
    let _ = write!(out, "{:>4}", "B");
    for v in &variants {
        let _ = write!(out, " | {:>11} {:>10} {:>10}", format!("{v} time/s"), "max abs", "max rel");
    }
    out.push('\n');
    for (b, cells) in rows {
        let _ = write!(out, "{b:>4}");
        for cell in cells {
            match cell {
                Some(r) => {
                    let _ = write!(
                        out,
                        " | {:>11.4e} {:>10.3e} {:>10.3e}",
                        r.mean_time_s, r.mean_max_abs_err, r.mean_max_rel_err
                    );
                }
                None => {
                    let _ = write!(out, " | {:>11} {:>10} {:>10}", "-", "-", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}
