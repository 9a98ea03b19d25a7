//! Index size against the fixed-width baseline at each sample rate.

use tctr::corpus::{generate_synthetic, synthetic_network, LengthParams, NetworkParams, TimeGrid};
use tctr::stats::SpaceReport;
use tctr::TripIndex;

fn main() -> tctr::Result<()> {
    let trips: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let net = synthetic_network(&NetworkParams::default(), 1)?;
    let corpus = generate_synthetic(&net, trips, 1, LengthParams::default(), TimeGrid::default())?;
    println!("{trips} trips, {} stop occurrences", corpus.stop_occurrences());
    println!("rate  stops_bytes  time_bytes  ratio");
    for rate in [16, 64, 256] {
        let r = SpaceReport::of(&TripIndex::build(&corpus, rate)?);
        println!("{rate:>4}  {:>11}  {:>10}  {:.2}%", r.stops_index_bytes, r.time_index_bytes, r.ratio_percent());
    }
    Ok(())
}
