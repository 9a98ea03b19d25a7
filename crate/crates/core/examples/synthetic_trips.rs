//! A synthetic network and a batch of trips drawn over it.

use tctr::corpus::{generate_synthetic, synthetic_network, LengthParams, NetworkParams, TimeGrid};

fn main() -> tctr::Result<()> {
    let net = synthetic_network(&NetworkParams::default(), 7)?;
    println!("{} stops, {} lines", net.stops.len(), net.lines.len());
    let corpus = generate_synthetic(&net, 5_000, 7, LengthParams::default(), TimeGrid::default())?;
    println!("{} trips, mean length {:.2}", corpus.len(), corpus.mean_trip_length());
    let mut hist = [0usize; 32];
    for t in corpus.trips() {
        hist[t.len()] += 1;
    }
    for (len, n) in hist.iter().enumerate().filter(|(_, &n)| n > 0) {
        println!("{len:>2} {}", "#".repeat(n / 20));
    }
    print!("{}", corpus.to_text().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
