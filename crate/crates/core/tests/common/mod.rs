#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use tctr::corpus::{sort_trips, StopId, TimeCode, TimeGrid, Trip, TripCorpus};
use tctr::index::{Semantics, TimeInterval, TripIndex};
use tctr::oracle::oracle_suffix_order;
use tctr::query::{Query, TopKAlgo};
use tctr::tcsa::{suffix_layout, CompressedPsi, Tcsa};

/// Lengths `2 + Binomial(29, 9.81/29)`, so the mean is 11.81 within `[2, 31]`.
pub fn trip_length(rng: &mut ChaCha8Rng) -> usize {
    let b = Binomial::new(29, 9.81 / 29.0).unwrap();
    (2 + b.sample(rng) as usize).min(31)
}

/// A random corpus with up to `max_trips` trips over up to `max_stops` stops.
/// Grids alternate between the default one and a coarse hourly one so that
/// equal time codes are common.
pub fn random_corpus(rng: &mut ChaCha8Rng, max_trips: usize, max_stops: u32) -> TripCorpus {
    let grid = if rng.random_bool(0.5) { TimeGrid::default() } else { TimeGrid::new(60, 2, 1440).unwrap() };
    let sigma = grid.alphabet_size();
    let stops = rng.random_range(1..=max_stops);
    let n_trips = rng.random_range(1..=max_trips);
    // a few popular endpoints make start-end pairs repeat
    let hubs: Vec<u32> = (0..3).map(|_| rng.random_range(1..=stops)).collect();
    let mut trips = Vec::with_capacity(n_trips);
    for k in 0..n_trips {
        let len = trip_length(rng);
        let mut seq: Vec<StopId> = (0..len).map(|_| StopId(rng.random_range(1..=stops))).collect();
        if rng.random_bool(0.4) {
            seq[0] = StopId(hubs[rng.random_range(0..hubs.len())]);
            seq[len - 1] = StopId(hubs[rng.random_range(0..hubs.len())]);
        }
        let mut t = rng.random_range(0..sigma);
        let mut times = Vec::with_capacity(len);
        for _ in 0..len {
            times.push(TimeCode(t));
            t = (t + rng.random_range(0..=2)).min(sigma - 1);
        }
        trips.push(Trip::new(seq, times, k + 1).unwrap());
    }
    // occasionally declare stops that never occur
    let declared = stops + if rng.random_bool(0.2) { 3 } else { 0 };
    TripCorpus::with_stop_count(trips, declared, grid).unwrap()
}

fn pick_stop(rng: &mut ChaCha8Rng, corpus: &TripCorpus) -> StopId {
    if rng.random_bool(0.75) {
        let t = &corpus.trips()[rng.random_range(0..corpus.len())];
        t.stops()[rng.random_range(0..t.len())]
    } else {
        StopId(rng.random_range(1..=corpus.stop_count()))
    }
}

fn pick_interval(rng: &mut ChaCha8Rng, corpus: &TripCorpus) -> TimeInterval {
    let sigma = corpus.grid().alphabet_size();
    let centre = if rng.random_bool(0.7) {
        let t = &corpus.trips()[rng.random_range(0..corpus.len())];
        t.times()[rng.random_range(0..t.len())].0
    } else {
        rng.random_range(0..sigma)
    };
    let hw = match rng.random_range(0..4) {
        0 => 0,
        1 => rng.random_range(0..=3),
        2 => rng.random_range(0..=sigma / 8),
        _ => sigma,
    };
    TimeInterval::new(centre.saturating_sub(hw), (centre + hw).min(sigma - 1)).unwrap()
}

pub const FAMILIES: [&str; 11] = [
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

/// A random query of family `FAMILIES[family]`, arguments biased towards
/// values present in `corpus`.
pub fn random_query(rng: &mut ChaCha8Rng, corpus: &TripCorpus, family: usize) -> Query {
    let endpoints = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.6) {
            let t = &corpus.trips()[rng.random_range(0..corpus.len())];
            (t.first_stop(), t.last_stop())
        } else {
            (pick_stop(rng, corpus), pick_stop(rng, corpus))
        }
    };
    let k = rng.random_range(1..=corpus.stop_count() as usize + 3);
    match family {
        0 => Query::Starts(pick_stop(rng, corpus)),
        1 => Query::Ends(pick_stop(rng, corpus)),
        2 => {
            let (x, y) = endpoints(rng);
            Query::StartsEnds(x, y)
        }
        3 => Query::Uses(pick_stop(rng, corpus)),
        4 => Query::TopK(k, TopKAlgo::Sequential),
        5 => Query::TopK(k, TopKAlgo::Binary),
        6 => Query::StartsBetween(pick_stop(rng, corpus), pick_interval(rng, corpus)),
        7 => Query::EndsBetween(pick_stop(rng, corpus), pick_interval(rng, corpus)),
        8 => Query::UsesBetween(pick_stop(rng, corpus), pick_interval(rng, corpus)),
        9 | 10 => {
            let (x, y) = endpoints(rng);
            let sem = if family == 9 { Semantics::Strong } else { Semantics::Weak };
            Query::StartsEndsBetween(x, y, pick_interval(rng, corpus), sem)
        }
        _ => unreachable!(),
    }
}

/// Checks the structural properties of the index of `corpus`, returning the
/// first violation found.
pub fn check_structure(corpus: &TripCorpus, rate: usize) -> Result<(), String> {
    let sorted = sort_trips(corpus);
    let layout = suffix_layout(&sorted).map_err(|e| e.to_string())?;
    let naive = oracle_suffix_order(corpus);
    let as_usize = |v: &[u32]| v.iter().map(|&x| x as usize).collect::<Vec<_>>();
    if as_usize(&layout.sa) != naive.sa {
        return Err("suffix array differs from the naive sort".into());
    }
    if as_usize(&layout.psi) != naive.psi {
        return Err("Ψ differs from the naive sort".into());
    }

    let tcsa = Tcsa::build(&sorted, rate).map_err(|e| e.to_string())?;
    let n = tcsa.len();
    for i in 1..=n {
        if tcsa.psi(i).unwrap() != naive.psi[i - 1] {
            return Err(format!("compressed Ψ[{i}] wrong at rate {rate}"));
        }
        if tcsa.sections().access(i).unwrap() != naive.d[i - 1] {
            return Err(format!("D[{i}] wrong"));
        }
    }

    // cyclic closure: from a trip's `$`, len + 1 steps return to it, reading its stops
    for (rank, trip) in sorted.ranked() {
        let home = rank + 1;
        let mut p = home;
        for (step, stop) in trip.stops().iter().enumerate() {
            p = tcsa.psi(p).unwrap();
            if tcsa.symbol_at(p).unwrap() != stop.0 {
                return Err(format!("trip {rank} step {step} reads the wrong stop"));
            }
        }
        if tcsa.psi(p).unwrap() != home {
            return Err(format!("trip {rank} does not close its cycle"));
        }
    }

    // Ψ strictly increasing inside every stop section
    let vocab = tcsa.vocabulary().len();
    for v in 2..=vocab {
        let lo = tcsa.sections().select1(v).unwrap();
        let hi = if v < vocab { tcsa.sections().select1(v + 1).unwrap() - 1 } else { n };
        for i in lo..hi {
            if tcsa.psi(i).unwrap() >= tcsa.psi(i + 1).unwrap() {
                return Err(format!("Ψ not increasing at {i} in section of stop {}", tcsa.vocabulary()[v - 1]));
            }
        }
    }

    // Y$X maps onto $XY in order, and start codes ascend across $XY
    let index = TripIndex::build(corpus, rate).map_err(|e| e.to_string())?;
    let mut pairs: Vec<(StopId, StopId)> = sorted.trips().iter().map(|t| (t.first_stop(), t.last_stop())).collect();
    pairs.dedup();
    for &(x, y) in &pairs {
        let Some((yx, xy)) = tcsa.range_start_end(x, y).unwrap() else {
            return Err(format!("no range for existing pair {x} {y}"));
        };
        if yx.len() != xy.len() {
            return Err(format!("range sizes differ for {x} {y}"));
        }
        for off in 0..yx.len() {
            if tcsa.psi(yx.start + off).unwrap() != xy.start + off {
                return Err(format!("Ψ image of {y}${x} not contiguous or not in order"));
            }
        }
        for i in xy.start..xy.end {
            if index.times().access(i).unwrap() > index.times().access(i + 1).unwrap() {
                return Err(format!("start codes decrease inside ${x}{y}"));
            }
        }
    }

    for r in [16, 64, 256] {
        let values = &layout.psi;
        let c = CompressedPsi::encode(values, r).map_err(|e| e.to_string())?;
        if c.decode_all() != *values {
            return Err(format!("decode_all differs at rate {r}"));
        }
        if (0..values.len()).any(|i| c.get(i) != values[i]) {
            return Err(format!("random access differs at rate {r}"));
        }
    }
    Ok(())
}
