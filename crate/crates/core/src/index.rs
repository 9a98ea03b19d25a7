//! The queryable index: spatial self-index plus the aligned time matrix.
//!
//! Entry `i` of the time matrix is the time code of the stop occurrence at
//! suffix-array position `i`. Separator positions carry their trip's start
//! time, and the global terminator (position 1) carries code 0; it matches no
//! `$X` pattern and no stop section, so no query ever counts it.

use crate::corpus::{sort_trips, StopId, TimeCode, TimeGrid, Trip, TripCorpus};
use crate::error::{Error, Result};
use crate::tcsa::{suffix_layout, SaRange, Tcsa, SEPARATOR};
use crate::wmatrix::WaveletMatrix;

/// Closed interval of time codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeInterval {
    pub t1: TimeCode,
    pub t2: TimeCode,
}

impl TimeInterval {
    pub fn new(t1: u32, t2: u32) -> Result<Self> {
        if t1 > t2 {
            return Err(Error::usage(format!("time interval [{t1}, {t2}] is reversed")));
        }
        Ok(TimeInterval { t1: TimeCode(t1), t2: TimeCode(t2) })
    }

    pub fn contains(&self, t: TimeCode) -> bool {
        self.t1 <= t && t <= self.t2
    }
}

/// How a trip's `[start, end]` must relate to the query interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    /// Start and end both inside the interval.
    Strong,
    /// The trip's time span overlaps the interval.
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripIndex {
    tcsa: Tcsa,
    times: WaveletMatrix,
    grid: TimeGrid,
}

impl TripIndex {
    pub fn build(corpus: &TripCorpus, sample_rate: usize) -> Result<Self> {
        let sorted = sort_trips(corpus);
        let layout = suffix_layout(&sorted)?;
        let tcsa = Tcsa::from_layout(&layout, corpus.stop_count(), corpus.len(), sample_rate)?;

        // time code per text position, separators taking their trip's start
        let mut text_times = Vec::with_capacity(layout.text.len());
        for trip in sorted.trips() {
            text_times.extend(trip.times().iter().map(|t| t.0));
            text_times.push(trip.start_time().0);
        }
        text_times.push(0);
        let aligned: Vec<u32> = layout.sa.iter().map(|&p| text_times[p as usize - 1]).collect();
        let times = WaveletMatrix::build(&aligned, corpus.grid().alphabet_size())?;
        Ok(TripIndex { tcsa, times, grid: corpus.grid() })
    }

    pub(crate) fn from_parts(tcsa: Tcsa, times: WaveletMatrix, grid: TimeGrid) -> Result<Self> {
        if times.len() != tcsa.len() || times.alphabet_size() != grid.alphabet_size() {
            return Err(Error::integrity("time matrix does not match the spatial index or grid"));
        }
        Ok(TripIndex { tcsa, times, grid })
    }

    pub fn tcsa(&self) -> &Tcsa {
        &self.tcsa
    }

    pub fn times(&self) -> &WaveletMatrix {
        &self.times
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn trip_count(&self) -> usize {
        self.tcsa.trip_count()
    }

    pub fn stop_count(&self) -> u32 {
        self.tcsa.stop_count()
    }

    /// Stops and time codes of the trip with rank `rank`, recovered from the
    /// index alone.
    pub fn trip(&self, rank: usize) -> Result<Trip> {
        let positions = self.tcsa.trip_positions(rank)?;
        let stops = positions.iter().map(|&p| StopId(self.tcsa.symbol_unchecked(p))).collect();
        let times = positions.iter().map(|&p| TimeCode(self.times.access_unchecked(p))).collect();
        Trip::new(stops, times, rank)
    }

    /// Every trip, in rank order, recovered from the index.
    pub fn reconstruct(&self) -> Result<TripCorpus> {
        let trips = (1..=self.trip_count()).map(|r| self.trip(r)).collect::<Result<Vec<_>>>()?;
        TripCorpus::with_stop_count(trips, self.stop_count(), self.grid)
    }

    fn check_interval(&self, iv: TimeInterval) -> Result<()> {
        if iv.t1 > iv.t2 || iv.t2.0 >= self.grid.alphabet_size() {
            return Err(Error::usage(format!(
                "time interval [{}, {}] outside 0..{}",
                iv.t1,
                iv.t2,
                self.grid.alphabet_size()
            )));
        }
        Ok(())
    }

    fn count_in(&self, range: Option<SaRange>, iv: TimeInterval) -> usize {
        range.map_or(0, |r| self.times.count_unchecked(r.start, r.end, iv.t1.0, iv.t2.0))
    }

    pub fn starts_at(&self, x: StopId) -> Result<usize> {
        Ok(self.tcsa.count_starts_at(x)?.0)
    }

    pub fn ends_at(&self, x: StopId) -> Result<usize> {
        Ok(self.tcsa.count_ends_at(x)?.0)
    }

    pub fn starts_ends(&self, x: StopId, y: StopId) -> Result<usize> {
        self.tcsa.count_start_end(x, y)
    }

    pub fn uses(&self, x: StopId) -> Result<usize> {
        self.tcsa.count_uses(x)
    }

    /// Trips starting at `x` with start time in the interval.
    pub fn starts_between(&self, x: StopId, iv: TimeInterval) -> Result<usize> {
        self.check_interval(iv)?;
        Ok(self.count_in(self.tcsa.count_starts_at(x)?.1, iv))
    }

    /// Trips ending at `x` with end time in the interval.
    pub fn ends_between(&self, x: StopId, iv: TimeInterval) -> Result<usize> {
        self.check_interval(iv)?;
        Ok(self.count_in(self.tcsa.count_ends_at(x)?.1, iv))
    }

    /// Visits of `x` timed inside the interval.
    pub fn uses_between(&self, x: StopId, iv: TimeInterval) -> Result<usize> {
        self.check_interval(iv)?;
        Ok(self.count_in(self.tcsa.uses_range(x)?, iv))
    }

    /// Trips from `x` to `y` whose timing satisfies `sem` against the interval.
    ///
    /// Start codes ascend across the `$XY` range, so the qualifying starts form
    /// a subrange found by binary search; the same offsets in `Y$X` hold those
    /// trips' end codes, which one range count then filters.
    pub fn starts_ends_between(&self, x: StopId, y: StopId, iv: TimeInterval, sem: Semantics) -> Result<usize> {
        self.check_interval(iv)?;
        let Some((ends, starts)) = self.tcsa.range_start_end(x, y)? else {
            return Ok(0);
        };
        let start_code = |off: usize| self.times.access_unchecked(starts.start + off);
        // first offset whose start code exceeds t2
        let upto = partition(starts.len(), |off| start_code(off) <= iv.t2.0);
        let (from, y_hi) = match sem {
            Semantics::Strong => (partition(upto, |off| start_code(off) < iv.t1.0), iv.t2.0),
            Semantics::Weak => (0, self.grid.alphabet_size() - 1),
        };
        if from >= upto {
            return Ok(0);
        }
        Ok(self.times.count_unchecked(ends.start + from, ends.start + upto - 1, iv.t1.0, y_hi))
    }
}

/// Number of leading offsets in `0..len` satisfying the monotone `pred`.
fn partition(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Codes stored in the separator section, in trip-rank order (terminator excluded).
pub fn separator_times(index: &TripIndex) -> Vec<u32> {
    let t = index.tcsa();
    (2..=t.trip_count() + 1)
        .inspect(|&i| debug_assert_eq!(t.symbol_unchecked(i), SEPARATOR))
        .map(|i| index.times().access_unchecked(i))
        .collect()
}
