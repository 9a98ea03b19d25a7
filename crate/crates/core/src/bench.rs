//! Random query workloads and latency measurement.

use std::fmt::Write as _;
use std::hint::black_box;
use std::thread;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::{Semantics, TimeInterval, TripIndex};
use crate::query::{Query, TopKAlgo};

pub const CSV_HEADER: &str = "query,mean_us,median_us,count";

#[derive(Clone, Copy, Debug)]
pub struct WorkloadParams {
    pub queries_per_type: usize,
    /// Top-k queries draw k uniformly from `1..=max_k`.
    pub max_k: usize,
    /// Interval half-widths are drawn from `0..=max_half_width` time slots.
    pub max_half_width: u32,
    pub seed: u64,
}

impl Default for WorkloadParams {
    fn default() -> Self {
        WorkloadParams { queries_per_type: 10_000, max_k: 100, max_half_width: 36, seed: 1 }
    }
}

/// Queries grouped by family, in table order.
#[derive(Clone, Debug)]
pub struct Workload {
    pub families: Vec<(&'static str, Vec<Query>)>,
}

impl Workload {
    pub fn query_count(&self) -> usize {
        self.families.iter().map(|f| f.1.len()).sum()
    }
}

/// Builds queries from trips sampled out of the index itself, so stop and
/// time arguments follow the data distribution. Intervals stay within the
/// day type of their centre.
pub fn random_workload(index: &TripIndex, params: &WorkloadParams) -> Result<Workload> {
    if params.queries_per_type == 0 || params.max_k == 0 {
        return Err(Error::usage("workload needs at least one query per type and k >= 1"));
    }
    if index.trip_count() == 0 {
        return Err(Error::usage("index holds no trips"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let grid = index.grid();
    let spd = grid.slots_per_day();
    let interval = |rng: &mut ChaCha8Rng, centre: u32| {
        let day_lo = centre / spd * spd;
        let day_hi = day_lo + spd - 1;
        let hw = rng.random_range(0..=params.max_half_width);
        let t1 = centre.saturating_sub(hw).max(day_lo);
        let t2 = (centre + hw).min(day_hi);
        TimeInterval::new(t1, t2).expect("ordered bounds")
    };

    let names = [
        "starts",
        "ends",
        "starts-ends",
        "uses",
        "topk-seq",
        "topk-bin",
        "starts-between",
        "ends-between",
        "uses-between",
        "starts-ends-strong",
        "starts-ends-weak",
    ];
    let mut families: Vec<(&'static str, Vec<Query>)> =
        names.iter().map(|&n| (n, Vec::with_capacity(params.queries_per_type))).collect();
    for _ in 0..params.queries_per_type {
        let trip = index.trip(rng.random_range(1..=index.trip_count()))?;
        let (x, y) = (trip.first_stop(), trip.last_stop());
        let j = rng.random_range(0..trip.len());
        let (mid_stop, mid_time) = (trip.stops()[j], trip.times()[j].0);
        let (start, end) = (trip.start_time().0, trip.end_time().0);
        let k = rng.random_range(1..=params.max_k);
        let batch = [
            Query::Starts(x),
            Query::Ends(y),
            Query::StartsEnds(x, y),
            Query::Uses(mid_stop),
            Query::TopK(k, TopKAlgo::Sequential),
            Query::TopK(k, TopKAlgo::Binary),
            Query::StartsBetween(x, interval(&mut rng, start)),
            Query::EndsBetween(y, interval(&mut rng, end)),
            Query::UsesBetween(mid_stop, interval(&mut rng, mid_time)),
            Query::StartsEndsBetween(x, y, interval(&mut rng, start), Semantics::Strong),
            Query::StartsEndsBetween(x, y, interval(&mut rng, start), Semantics::Weak),
        ];
        for (fam, q) in families.iter_mut().zip(batch) {
            fam.1.push(q);
        }
    }
    Ok(Workload { families })
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    /// Timed executions per query; the reported latency is their mean.
    pub repetitions: usize,
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { repetitions: 1, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub query: String,
    pub mean_us: f64,
    pub median_us: f64,
    pub count: usize,
    /// Mean per reader thread, in thread order.
    pub thread_means_us: Vec<f64>,
}

fn time_queries(index: &TripIndex, queries: &[Query], reps: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(queries.len());
    for q in queries {
        let t0 = Instant::now();
        for _ in 0..reps {
            black_box(index.answer(black_box(q))?);
        }
        out.push(t0.elapsed().as_secs_f64() * 1e6 / reps as f64);
    }
    Ok(out)
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Runs every family: one untimed priming pass, then each query timed
/// individually. With several threads each takes a contiguous share of the
/// family's queries over the shared index.
pub fn run(index: &TripIndex, workload: &Workload, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.repetitions == 0 {
        return Err(Error::usage("repetitions must be at least 1"));
    }
    if cfg.threads == 0 {
        return Err(Error::usage("threads must be at least 1"));
    }
    let mut rows = Vec::with_capacity(workload.families.len());
    for (name, queries) in &workload.families {
        for q in queries {
            black_box(index.answer(q)?);
        }
        let chunk = queries.len().div_ceil(cfg.threads).max(1);
        let per_thread: Vec<Vec<f64>> = if cfg.threads == 1 {
            vec![time_queries(index, queries, cfg.repetitions)?]
        } else {
            thread::scope(|s| {
                let handles: Vec<_> = queries
                    .chunks(chunk)
                    .map(|part| s.spawn(move || time_queries(index, part, cfg.repetitions)))
                    .collect();
                handles.into_iter().map(|h| h.join().expect("bench thread panicked")).collect::<Result<Vec<_>>>()
            })?
        };
        let thread_means_us = per_thread.iter().map(|t| mean(t)).collect();
        let mut all: Vec<f64> = per_thread.into_iter().flatten().collect();
        rows.push(BenchRow {
            query: name.to_string(),
            mean_us: mean(&all),
            median_us: median(&mut all),
            count: all.len(),
            thread_means_us,
        });
    }
    Ok(rows)
}

pub fn table(rows: &[BenchRow]) -> String {
    let w = rows.iter().map(|r| r.query.len()).max().unwrap_or(5).max(5);
    let mut s = format!("{:<w$}  {:>12}  {:>12}  {:>8}\n", "query", "mean_us", "median_us", "count");
    for r in rows {
        let _ = writeln!(s, "{:<w$}  {:>12.3}  {:>12.3}  {:>8}", r.query, r.mean_us, r.median_us, r.count);
    }
    s
}

pub fn csv(rows: &[BenchRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{:.3},{:.3},{}", r.query, r.mean_us, r.median_us, r.count);
    }
    s
}

/// Mean latency each time-restricted family adds over its purely spatial
/// counterpart, for families present in `rows`.
pub fn temporal_overhead(rows: &[BenchRow]) -> Vec<(String, f64)> {
    let find = |name: &str| rows.iter().find(|r| r.query == name).map(|r| r.mean_us);
    [
        ("starts-between", "starts"),
        ("ends-between", "ends"),
        ("uses-between", "uses"),
        ("starts-ends-strong", "starts-ends"),
        ("starts-ends-weak", "starts-ends"),
    ]
    .iter()
    .filter_map(|&(t, s)| Some((t.to_string(), find(t)? - find(s)?)))
    .collect()
}
