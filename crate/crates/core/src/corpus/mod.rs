//! Trips, their text format, and the canonical order the index is built in.

mod generate;
mod network;
mod time;

use std::fmt::{self, Write as _};
use std::io::BufRead;

use crate::error::{Error, Result};

pub use generate::{generate_synthetic, LengthParams};
pub use network::{synthetic_network, Line, NetworkDescription, NetworkParams, Stop};
pub use time::{discretize, DayClassifier, SeasonalWeek, TimeCode, TimeGrid};

/// A network node. Zero is reserved for the trip separator and is never a stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StopId(pub u32);

impl fmt::Display for StopId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trip {
    stops: Vec<StopId>,
    times: Vec<TimeCode>,
    /// Position of the trip in the ingested input (1-based).
    pub input_ordinal: usize,
}

impl Trip {
    pub fn new(stops: Vec<StopId>, times: Vec<TimeCode>, input_ordinal: usize) -> Result<Self> {
        if stops.len() != times.len() {
            return Err(Error::Build(format!("{} stops but {} time codes", stops.len(), times.len())));
        }
        if stops.len() < 2 {
            return Err(Error::Build(format!("trip of length {} (need at least 2)", stops.len())));
        }
        if stops.iter().any(|s| s.0 == 0) {
            return Err(Error::Build("stop id 0 is reserved for the separator".into()));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Build("time codes decrease along the trip".into()));
        }
        Ok(Trip { stops, times, input_ordinal })
    }

    pub fn stops(&self) -> &[StopId] {
        &self.stops
    }

    pub fn times(&self) -> &[TimeCode] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.stops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stops.is_empty()
    }

    pub fn first_stop(&self) -> StopId {
        self.stops[0]
    }

    pub fn last_stop(&self) -> StopId {
        self.stops[self.stops.len() - 1]
    }

    pub fn start_time(&self) -> TimeCode {
        self.times[0]
    }

    pub fn end_time(&self) -> TimeCode {
        self.times[self.times.len() - 1]
    }

    /// Sort key: first stop, last stop, start time, then the remaining stops
    /// in order, then input position.
    fn canonical_cmp(&self, other: &Trip) -> std::cmp::Ordering {
        self.first_stop()
            .cmp(&other.first_stop())
            .then(self.last_stop().cmp(&other.last_stop()))
            .then(self.start_time().cmp(&other.start_time()))
            .then_with(|| self.stops[1..].cmp(&other.stops[1..]))
            .then(self.input_ordinal.cmp(&other.input_ordinal))
    }
}

/// A validated collection of trips over stops `1..=stop_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripCorpus {
    trips: Vec<Trip>,
    stop_count: u32,
    grid: TimeGrid,
}

impl TripCorpus {
    /// Validates the trips against the grid; the stop count becomes the
    /// largest stop id present.
    pub fn new(trips: Vec<Trip>, grid: TimeGrid) -> Result<Self> {
        let stop_count = trips.iter().flat_map(|t| t.stops.iter()).map(|s| s.0).max().unwrap_or(0);
        Self::with_stop_count(trips, stop_count, grid)
    }

    pub fn with_stop_count(trips: Vec<Trip>, stop_count: u32, grid: TimeGrid) -> Result<Self> {
        let sigma = grid.alphabet_size();
        for t in &trips {
            if let Some(s) = t.stops.iter().find(|s| s.0 > stop_count) {
                return Err(Error::Build(format!(
                    "trip {} uses stop {s} beyond the stop count {stop_count}",
                    t.input_ordinal
                )));
            }
            if let Some(c) = t.times.iter().find(|c| c.0 >= sigma) {
                return Err(Error::Build(format!(
                    "trip {} has time code {c} outside the grid's {sigma} codes",
                    t.input_ordinal
                )));
            }
        }
        Ok(TripCorpus { trips, stop_count, grid })
    }

    pub fn trips(&self) -> &[Trip] {
        &self.trips
    }

    pub fn stop_count(&self) -> u32 {
        self.stop_count
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.trips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trips.is_empty()
    }

    /// Total stop occurrences over all trips.
    pub fn stop_occurrences(&self) -> usize {
        self.trips.iter().map(Trip::len).sum()
    }

    pub fn mean_trip_length(&self) -> f64 {
        if self.trips.is_empty() {
            0.0
        } else {
            self.stop_occurrences() as f64 / self.trips.len() as f64
        }
    }

    /// Parses the corpus text format: one trip per line as whitespace
    /// separated `stop:timecode` tokens, `#` comment lines, and an optional
    /// `#grid SLOT DAYTYPES DAYMINUTES` directive before the first trip.
    pub fn parse<R: BufRead>(input: R) -> Result<Self> {
        Self::parse_with_grid(input, None)
    }

    /// As [`TripCorpus::parse`], but `grid` overrides any `#grid` directive.
    pub fn parse_with_grid<R: BufRead>(input: R, grid: Option<TimeGrid>) -> Result<Self> {
        let mut parsed_grid = None;
        let mut trips = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let text = line.trim();
            if let Some(rest) = text.strip_prefix("#grid") {
                if !trips.is_empty() {
                    return Err(Error::parse(line_no, "#grid directive after the first trip"));
                }
                let nums = rest
                    .split_whitespace()
                    .map(|t| t.parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::parse(line_no, "malformed #grid directive"))?;
                let [slot, days, minutes] = nums[..] else {
                    return Err(Error::parse(line_no, "#grid takes SLOT DAYTYPES DAYMINUTES"));
                };
                parsed_grid =
                    Some(TimeGrid::new(slot, days, minutes).map_err(|e| Error::parse(line_no, e.to_string()))?);
                continue;
            }
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut stops = Vec::new();
            let mut times = Vec::new();
            for token in text.split_whitespace() {
                let (s, t) = token
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line_no, format!("token {token:?} is not stop:time")))?;
                let s: u32 = s.parse().map_err(|_| Error::parse(line_no, format!("non-integer stop {s:?}")))?;
                let t: u32 = t.parse().map_err(|_| Error::parse(line_no, format!("non-integer time code {t:?}")))?;
                stops.push(StopId(s));
                times.push(TimeCode(t));
            }
            let trip = Trip::new(stops, times, trips.len() + 1).map_err(|e| match e {
                Error::Build(msg) => Error::parse(line_no, msg),
                other => other,
            })?;
            let sigma = grid.or(parsed_grid).unwrap_or_default().alphabet_size();
            if let Some(c) = trip.times.iter().find(|c| c.0 >= sigma) {
                return Err(Error::parse(line_no, format!("time code {c} outside the grid's {sigma} codes")));
            }
            trips.push(trip);
        }
        TripCorpus::new(trips, grid.or(parsed_grid).unwrap_or_default())
    }

    /// Renders the corpus text format (round-trips through [`TripCorpus::parse`]).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let g = self.grid;
        let _ = writeln!(out, "#grid {} {} {}", g.slot_minutes, g.day_type_count, g.day_minutes);
        for trip in &self.trips {
            for (k, (s, t)) in trip.stops.iter().zip(&trip.times).enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{s}:{t}");
            }
            out.push('\n');
        }
        out
    }
}

/// Trips in canonical order; the trip at index `k` has rank `k + 1`.
#[derive(Clone, Debug)]
pub struct SortedCorpus {
    trips: Vec<Trip>,
    stop_count: u32,
    grid: TimeGrid,
}

impl SortedCorpus {
    pub fn trips(&self) -> &[Trip] {
        &self.trips
    }

    pub fn stop_count(&self) -> u32 {
        self.stop_count
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    /// Rank (1-based) paired with each trip.
    pub fn ranked(&self) -> impl Iterator<Item = (usize, &Trip)> {
        self.trips.iter().enumerate().map(|(k, t)| (k + 1, t))
    }
}

/// Orders trips by first stop, last stop, start time, the remaining stops,
/// and finally input position.
pub fn sort_trips(corpus: &TripCorpus) -> SortedCorpus {
    let mut trips = corpus.trips.clone();
    trips.sort_by(Trip::canonical_cmp);
    SortedCorpus { trips, stop_count: corpus.stop_count, grid: corpus.grid }
}

/// The six-trip running example with start codes 10, 2, 0, 9, 5, 12 and one
/// code per hop after that.
pub fn example_corpus() -> TripCorpus {
    let raw: [(&[u32], u32); 6] = [
        (&[2, 3, 10, 6], 10),
        (&[2, 3, 10, 4, 7], 2),
        (&[1, 2, 3], 0),
        (&[3, 10, 5], 9),
        (&[1, 2, 3], 5),
        (&[9, 8, 7], 12),
    ];
    let trips = raw
        .iter()
        .enumerate()
        .map(|(k, (stops, start))| {
            let times = (0..stops.len() as u32).map(|h| TimeCode(start + h)).collect();
            Trip::new(stops.iter().map(|&s| StopId(s)).collect(), times, k + 1).unwrap()
        })
        .collect();
    TripCorpus::new(trips, TimeGrid::default()).unwrap()
}
