//! Experiment harness: one recolouring run per generated instance, emitted
//! as CSV rows for fitting the growth of sequence lengths.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::random_proper_colouring;
use crate::decompose::peel;
use crate::density::{derive_params, mad, params_with_override, DensityError};
use crate::generate::{generate, GraphKind};
use crate::graph::{Graph, GraphError};
use crate::oracle::{bfs_distance, STATE_LIMIT};
use crate::rational::Rational;
use crate::recolor::{length_bound, recolor_over, verify_sequence, RecolorError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("instance {instance}: no feasible parameters for k = {k} (mad = {mad})")]
    Infeasible { instance: String, k: usize, mad: Rational },
    #[error("instance {instance}: {source}")]
    Params { instance: String, source: DensityError },
    #[error("instance {instance}: {source}")]
    Recolor { instance: String, source: RecolorError },
    #[error("instance {instance}: produced sequence failed verification: {reason}")]
    Verification { instance: String, reason: String },
    #[error("unknown family `{0}` (expected forest_union:<t>, cycle or grid)")]
    UnknownFamily(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Instance families for benchmarking, parameterised by vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    ForestUnion(usize),
    Cycle,
    /// `r x c` with `r = floor(sqrt(n))` and `c = floor(n / r)`.
    Grid,
}

impl Family {
    pub fn instance(&self, n: usize, seed: u64) -> Result<Graph, GraphError> {
        let kind = match *self {
            Family::ForestUnion(forests) => GraphKind::ForestUnion { n, forests, seed },
            Family::Cycle => GraphKind::Cycle(n),
            Family::Grid => {
                let rows = n.isqrt().max(1);
                GraphKind::Grid {
                    rows,
                    cols: (n / rows).max(1),
                }
            }
        };
        generate(kind)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::ForestUnion(t) => write!(f, "forest_union:{t}"),
            Family::Cycle => f.write_str("cycle"),
            Family::Grid => f.write_str("grid"),
        }
    }
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "cycle" => Ok(Family::Cycle),
            None if s == "grid" => Ok(Family::Grid),
            Some(("forest_union", t)) => t
                .parse()
                .ok()
                .filter(|&t| t >= 1)
                .map(Family::ForestUnion)
                .ok_or_else(|| BenchError::UnknownFamily(s.into())),
            _ => Err(BenchError::UnknownFamily(s.into())),
        }
    }
}

/// One benchmark row. Column order is the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub mad: Rational,
    pub d: usize,
    pub epsilon: Rational,
    pub k: usize,
    pub length: usize,
    pub bound: String,
    /// Every peeling layer met its size bound, so `length <= bound` is guaranteed.
    pub certified: bool,
    pub max_per_vertex: usize,
    pub oracle_distance: Option<usize>,
    pub wall_ms: f64,
}

/// Settings shared by every instance of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub seeds: usize,
    pub k: usize,
    pub seed: u64,
    pub d_override: Option<usize>,
    pub epsilon_override: Option<Rational>,
    /// Compute the exact distance when `k^n` is within the oracle limit.
    pub oracle: bool,
}

/// SplitMix64 finaliser; decorrelates derived seeds.
pub fn mix_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z = base ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates, peels, recolours between two random proper colourings, and
/// verifies one instance.
pub fn run_instance(config: &BenchConfig, n: usize, replicate: usize) -> Result<RunRecord, BenchError> {
    let seed = mix_seed(config.seed, n as u64, replicate as u64);
    let instance = format!("{}/n={n}/r={replicate}", config.family);
    let started = Instant::now();
    let g = config.family.instance(n, seed)?;
    let madval = mad(&g).map_err(|source| BenchError::Params {
        instance: instance.clone(),
        source,
    })?;
    let params = match config.d_override {
        Some(d) => {
            params_with_override(madval, config.k, d, config.epsilon_override).map_err(|source| BenchError::Params {
                instance: instance.clone(),
                source,
            })?
        }
        None => derive_params(madval, config.k).ok_or_else(|| BenchError::Infeasible {
            instance: instance.clone(),
            k: config.k,
            mad: madval,
        })?,
    };
    let recolor_err = |source| BenchError::Recolor {
        instance: instance.clone(),
        source,
    };
    let peeling = peel(&g, params.d, params.epsilon).map_err(|e| recolor_err(e.into()))?;
    let colouring = |salt| {
        random_proper_colouring(&g, params.k, mix_seed(seed, salt, 0))
            .expect("k exceeds the degeneracy whenever peeling succeeds")
    };
    let (alpha, beta) = (colouring(1), colouring(2));
    let seq = recolor_over(&g, &peeling, &alpha, &beta).map_err(recolor_err)?;
    verify_sequence(&g, &alpha, &beta, &seq.steps).map_err(|f| BenchError::Verification {
        instance: instance.clone(),
        reason: f.to_string(),
    })?;
    let budget = length_bound(g.n(), params.d, params.epsilon);
    let wall_ms = started.elapsed().as_micros() as f64 / 1e3;
    let oracle_distance = match (params.k as u64).checked_pow(g.n() as u32) {
        Some(states) if config.oracle && states <= STATE_LIMIT => {
            bfs_distance(&g, params.k, &alpha, &beta).ok().flatten()
        }
        _ => None,
    };
    Ok(RunRecord {
        instance,
        n: g.n(),
        m: g.m(),
        mad: madval,
        d: params.d,
        epsilon: params.epsilon,
        k: params.k,
        length: seq.len(),
        bound: budget.total_bound.to_string(),
        certified: peeling.all_size_bounds_met(),
        max_per_vertex: seq.max_recolourings(),
        oracle_distance,
        wall_ms,
    })
}

/// Runs every `(n, replicate)` pair in parallel; rows come back in
/// instance order.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<RunRecord>, BenchError> {
    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.seeds).map(move |r| (n, r)))
        .collect();
    jobs.par_iter().map(|&(n, r)| run_instance(config, n, r)).collect()
}

/// Least-squares slope of `ln(length)` against `ln(n)`, over rows with a
/// nonzero length. `None` with fewer than two distinct sizes.
pub fn loglog_slope(records: &[RunRecord]) -> Option<f64> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.length > 0 && r.n > 0)
        .map(|r| ((r.n as f64).ln(), (r.length as f64).ln()))
        .collect();
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if points.len() < 2 || sxx <= f64::EPSILON {
        return None;
    }
    Some(sxy / sxx)
}

pub const CSV_COLUMNS: [&str; 13] = [
    "instance",
    "n",
    "m",
    "mad",
    "d",
    "epsilon",
    "k",
    "length",
    "bound",
    "certified",
    "max_per_vertex",
    "oracle_distance",
    "wall_ms",
];

/// Writes a header, one row per record, and (when there is something to fit)
/// a footer row `loglog_slope,<slope>,,...`.
pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), BenchError> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for record in records {
        writer.serialize(record)?;
    }
    if let Some(slope) = loglog_slope(records) {
        let mut footer = vec![String::new(); CSV_COLUMNS.len()];
        footer[0] = "loglog_slope".into();
        footer[1] = format!("{slope:.6}");
        writer.write_record(&footer)?;
    }
    writer.flush()?;
    Ok(())
}
