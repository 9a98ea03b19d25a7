//! Space accounting against a fixed-width plain encoding of the stops.

use std::fmt;

use crate::index::TripIndex;

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub stop_count: u32,
    pub trip_count: usize,
    pub stop_occurrences: usize,
    pub sample_rate: usize,
    /// Fixed bit width that holds every stop id.
    pub plain_bits_per_stop: u32,
    pub plain_baseline_bytes: usize,
    pub stops_index_bytes: usize,
    pub time_index_bytes: usize,
    /// Share of Ψ differences stored inside `+1` runs.
    pub psi_run_fraction: f64,
}

/// Smallest width able to hold the values `0..=max`.
pub fn bits_for(max: u32) -> u32 {
    u32::BITS - max.leading_zeros()
}

impl SpaceReport {
    pub fn of(index: &TripIndex) -> Self {
        let t = index.tcsa();
        let stop_occurrences = t.len() - t.trip_count() - 1;
        let plain_bits_per_stop = bits_for(t.stop_count()).max(1);
        SpaceReport {
            n: t.len(),
            stop_count: t.stop_count(),
            trip_count: t.trip_count(),
            stop_occurrences,
            sample_rate: t.sample_rate(),
            plain_bits_per_stop,
            plain_baseline_bytes: (stop_occurrences * plain_bits_per_stop as usize).div_ceil(8),
            stops_index_bytes: t.serialized_bytes(),
            time_index_bytes: index.times().serialized_bytes(),
            psi_run_fraction: t.compressed_psi().run_fraction(),
        }
    }

    pub fn ratio_percent(&self) -> f64 {
        self.stops_index_bytes as f64 / self.plain_baseline_bytes as f64 * 100.0
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "text length n        {}", self.n)?;
        writeln!(f, "stops (delta)        {}", self.stop_count)?;
        writeln!(f, "trips                {}", self.trip_count)?;
        writeln!(f, "stop occurrences     {}", self.stop_occurrences)?;
        writeln!(f, "psi sample rate      {}", self.sample_rate)?;
        writeln!(
            f,
            "plain baseline       {} bytes ({} x {} bits)",
            self.plain_baseline_bytes, self.stop_occurrences, self.plain_bits_per_stop
        )?;
        writeln!(f, "stops index          {} bytes", self.stops_index_bytes)?;
        writeln!(f, "time index           {} bytes", self.time_index_bytes)?;
        writeln!(f, "ratio                {:.2}%", self.ratio_percent())?;
        write!(f, "psi +1 run fraction  {:.4}", self.psi_run_fraction)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::example_corpus;

    #[test]
    fn widths() {
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(7), 3);
        assert_eq!(bits_for(8), 4);
        assert_eq!(bits_for(10), 4);
    }

    #[test]
    fn example_baseline() {
        let r = SpaceReport::of(&TripIndex::build(&example_corpus(), 64).unwrap());
        assert_eq!((r.stop_occurrences, r.plain_bits_per_stop), (21, 4));
        assert_eq!(r.plain_baseline_bytes, 11);
        assert!(r.to_string().contains("ratio"));
    }

    #[test]
    fn sparser_sampling_is_not_larger() {
        let e = example_corpus();
        let size = |rate| SpaceReport::of(&TripIndex::build(&e, rate).unwrap()).stops_index_bytes;
        assert!(size(16) >= size(256));
    }
}
