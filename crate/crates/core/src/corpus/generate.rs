//! Synthetic trips drawn from a network description.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{NetworkDescription, TimeGrid, Trip, TripCorpus};
use crate::error::{Error, Result};

/// Trip lengths follow `min + Binomial(max - min, p)` with `p` chosen so the
/// mean is `mean`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthParams {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

impl Default for LengthParams {
    fn default() -> Self {
        LengthParams { min: 2, max: 31, mean: 11.81 }
    }
}

impl LengthParams {
    fn distribution(&self) -> Result<Binomial> {
        if self.min < 2 || self.min > self.max {
            return Err(Error::Config(format!("trip length bounds [{}, {}] are unusable", self.min, self.max)));
        }
        let trials = (self.max - self.min) as u64;
        let p = if trials == 0 { 0.0 } else { (self.mean - self.min as f64) / trials as f64 };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("mean length {} outside [{}, {}]", self.mean, self.min, self.max)));
        }
        Binomial::new(trials, p).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Per-hop travel time range in minutes.
const HOP_MINUTES: (u32, u32) = (1, 5);

/// Draws `trip_count` trips, each a contiguous run of some line. The length is
/// drawn first and a line long enough for it is then picked uniformly; lengths
/// no line can hold are redrawn. Start times fall inside the line's service
/// window on a uniformly drawn day type, and every hop adds 1 to 5 minutes.
pub fn generate_synthetic(
    network: &NetworkDescription,
    trip_count: usize,
    seed: u64,
    lengths: LengthParams,
    grid: TimeGrid,
) -> Result<TripCorpus> {
    network.validate()?;
    if trip_count == 0 {
        return Err(Error::Config("trip count must be positive".into()));
    }
    let dist = lengths.distribution()?;
    let longest = network.lines.iter().map(|l| l.stops.len()).max().unwrap_or(0);
    if longest < lengths.min {
        return Err(Error::Config(format!("no line holds a trip of {} stops", lengths.min)));
    }
    // lines sorted by length so the eligible ones form a suffix
    let mut by_len: Vec<usize> = (0..network.lines.len()).collect();
    by_len.sort_by_key(|&k| network.lines[k].stops.len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trips = Vec::with_capacity(trip_count);
    for ordinal in 1..=trip_count {
        let len = loop {
            let l = lengths.min + dist.sample(&mut rng) as usize;
            if l <= longest {
                break l.min(lengths.max);
            }
        };
        let first_fit = by_len.partition_point(|&k| network.lines[k].stops.len() < len);
        let line = &network.lines[by_len[rng.random_range(first_fit..by_len.len())]];
        let offset = rng.random_range(0..=line.stops.len() - len);
        let stops = line.stops[offset..offset + len].to_vec();

        let day_type = rng.random_range(0..grid.day_type_count);
        let (w_start, w_end) = pick_window(&line.windows, grid.day_minutes, &mut rng);
        let mut minute = rng.random_range(w_start..w_end);
        let mut times = Vec::with_capacity(len);
        for hop in 0..len {
            if hop > 0 {
                minute += rng.random_range(HOP_MINUTES.0..=HOP_MINUTES.1);
            }
            times.push(grid.code(day_type, minute.min(grid.day_minutes - 1))?);
        }
        trips.push(Trip::new(stops, times, ordinal)?);
    }
    TripCorpus::with_stop_count(trips, network.stop_count(), grid)
}

fn pick_window(windows: &[(u32, u32)], day_minutes: u32, rng: &mut ChaCha8Rng) -> (u32, u32) {
    let clipped: Vec<(u32, u32)> =
        windows.iter().map(|&(a, b)| (a.min(day_minutes - 1), b.min(day_minutes))).filter(|(a, b)| a < b).collect();
    if clipped.is_empty() {
        return (0, day_minutes);
    }
    let total: u32 = clipped.iter().map(|(a, b)| b - a).sum();
    let mut pick = rng.random_range(0..total);
    for &(a, b) in &clipped {
        if pick < b - a {
            return (a, b);
        }
        pick -= b - a;
    }
    unreachable!()
}
