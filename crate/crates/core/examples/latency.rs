//! A small latency run over a synthetic index; pass the trip count as an argument.

use tctr::bench::{self, BenchConfig, WorkloadParams};
use tctr::corpus::{generate_synthetic, synthetic_network, LengthParams, NetworkParams, TimeGrid};
use tctr::TripIndex;

fn main() -> tctr::Result<()> {
    let trips: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let net = synthetic_network(&NetworkParams::default(), 3)?;
    let corpus = generate_synthetic(&net, trips, 3, LengthParams::default(), TimeGrid::default())?;
    let index = TripIndex::build(&corpus, 64)?;
    let params = WorkloadParams { queries_per_type: 2_000, ..WorkloadParams::default() };
    let workload = bench::random_workload(&index, &params)?;
    let rows = bench::run(&index, &workload, &BenchConfig { repetitions: 3, threads: 2 })?;
    print!("{}", bench::table(&rows));
    print!("{}", bench::csv(&rows));
    Ok(())
}
