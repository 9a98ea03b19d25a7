//! The spatial self-index over stop sequences.
//!
//! Trips are concatenated in canonical order, each followed by a separator
//! `$` (symbol 0), with one extra `$` terminating the whole sequence. Suffixes
//! are sorted with a cyclic reading of each trip: after a trip's `$` comes the
//! trip's first stop again. Two suffixes are compared symbol by symbol until
//! they differ; `$` is the smallest symbol, and when both reach their own
//! trip's `$` at the same offset the trip with the smaller rank goes first.
//! The global terminator behaves as a trip of rank 0 and length 0.
//!
//! Consequences of the rank tie-break:
//!
//! * every separator suffix starts with `$`, so the separator section is
//!   simply the trips in rank order (first stop, last stop, start time, ...);
//! * inside a stop's section, two suffixes either differ before `$`, in which
//!   case their successors differ at the same place, or reach `$` together, in
//!   which case both they and their successors are ordered by rank. Hence Ψ
//!   is increasing over every stop section;
//! * suffixes `Y $ X ...` reach `$` together, so they are in rank order, and
//!   the trips starting at `X` and ending at `Y` are adjacent in rank order.
//!   Ψ maps the `Y$X` range onto the `$XY` range of the separator section,
//!   contiguously and preserving order.
//!
//! Only the vocabulary, the bitmap `D` of section starts and the compressed Ψ
//! are kept after construction. Positions are 1-based.

mod psi;
mod topk;

use std::cmp::Ordering;

use crate::bitseq::BitVector;
use crate::corpus::{SortedCorpus, StopId};
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

pub use psi::CompressedPsi;
pub use topk::{Split, TopKTrace};

/// The separator symbol.
pub const SEPARATOR: u32 = 0;

/// Inclusive range of suffix-array positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaRange {
    pub start: usize,
    pub end: usize,
}

impl SaRange {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn positions(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

/// Construction-time view: suffix array and successor permutation before compression.
#[derive(Clone, Debug)]
pub struct SuffixLayout {
    /// Concatenated symbols (stops, `$` = 0), 1-based positions map to index - 1.
    pub text: Vec<u32>,
    /// Suffix array: `sa[i - 1]` is the text position (1-based) of the i-th suffix.
    pub sa: Vec<u32>,
    /// `psi[i - 1]` is the suffix-array position of the cyclic successor of `sa[i - 1]`.
    pub psi: Vec<u32>,
    /// Trip rank (1-based) for every text position; 0 for the terminator.
    pub rank_of: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tcsa {
    n: usize,
    stop_count: u32,
    trip_count: usize,
    vocabulary: Vec<u32>,
    sections: BitVector,
    psi: CompressedPsi,
}

/// Sorts every suffix of the concatenated trips under the cyclic order and
/// derives Ψ. Exposed for tests and for inspecting construction.
pub fn suffix_layout(corpus: &SortedCorpus) -> Result<SuffixLayout> {
    let trips = corpus.trips();
    if trips.is_empty() {
        return Err(Error::Build("cannot index an empty corpus".into()));
    }
    let n: usize = trips.iter().map(|t| t.len() + 1).sum::<usize>() + 1;
    if n > u32::MAX as usize {
        return Err(Error::Build(format!("sequence of {n} symbols exceeds 32-bit positions")));
    }
    let mut text = Vec::with_capacity(n);
    let mut rank_of = Vec::with_capacity(n);
    let mut trip_start = Vec::with_capacity(trips.len());
    let mut trip_len = Vec::with_capacity(trips.len());
    for (rank, trip) in corpus.ranked() {
        trip_start.push(text.len());
        trip_len.push(trip.len());
        text.extend(trip.stops().iter().map(|s| s.0));
        text.push(SEPARATOR);
        rank_of.extend(std::iter::repeat_n(rank as u32, trip.len() + 1));
    }
    text.push(SEPARATOR);
    rank_of.push(0);

    // remaining stops of the suffix's own trip, up to (excluding) its `$`
    let terminator = n - 1;
    let tail = |p: usize| -> &[u32] {
        if p == terminator {
            return &[];
        }
        let t = rank_of[p] as usize - 1;
        &text[p..trip_start[t] + trip_len[t]]
    };
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (a, b) = (a as usize, b as usize);
        tail(a).cmp(tail(b)).then(rank_of[a].cmp(&rank_of[b]))
    });

    let mut inverse = vec![0u32; n];
    for (i, &p) in order.iter().enumerate() {
        inverse[p as usize] = i as u32;
    }
    let successor = |p: usize| -> usize {
        if p == terminator {
            p
        } else if text[p] == SEPARATOR {
            trip_start[rank_of[p] as usize - 1]
        } else {
            p + 1
        }
    };
    let psi = order.iter().map(|&p| inverse[successor(p as usize)] + 1).collect();
    let sa = order.iter().map(|&p| p + 1).collect();
    Ok(SuffixLayout { text, sa, psi, rank_of })
}

impl Tcsa {
    pub fn build(corpus: &SortedCorpus, sample_rate: usize) -> Result<Self> {
        let layout = suffix_layout(corpus)?;
        Self::from_layout(&layout, corpus.stop_count(), corpus.trips().len(), sample_rate)
    }

    pub(crate) fn from_layout(
        layout: &SuffixLayout,
        stop_count: u32,
        trip_count: usize,
        sample_rate: usize,
    ) -> Result<Self> {
        let n = layout.sa.len();
        let mut vocabulary = Vec::new();
        let mut prev = None;
        let bits: BitVector = layout
            .sa
            .iter()
            .map(|&p| {
                let sym = layout.text[p as usize - 1];
                let starts = prev != Some(sym);
                if starts {
                    vocabulary.push(sym);
                }
                prev = Some(sym);
                starts
            })
            .collect();
        let psi = CompressedPsi::encode(&layout.psi, sample_rate)?;
        Ok(Tcsa { n, stop_count, trip_count, vocabulary, sections: bits, psi })
    }

    /// Length of the indexed sequence (stops + one `$` per trip + terminator).
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Largest stop id the index accepts, δ.
    pub fn stop_count(&self) -> u32 {
        self.stop_count
    }

    pub fn trip_count(&self) -> usize {
        self.trip_count
    }

    pub fn sample_rate(&self) -> usize {
        self.psi.sample_rate()
    }

    /// `$` followed by the stops present, ascending.
    pub fn vocabulary(&self) -> &[u32] {
        &self.vocabulary
    }

    /// Bitmap marking the first suffix of each vocabulary symbol.
    pub fn sections(&self) -> &BitVector {
        &self.sections
    }

    pub fn compressed_psi(&self) -> &CompressedPsi {
        &self.psi
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::Range { pos: i, len: self.n })
        } else {
            Ok(())
        }
    }

    pub fn psi(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        Ok(self.psi_unchecked(i))
    }

    #[inline]
    pub(crate) fn psi_unchecked(&self, i: usize) -> usize {
        self.psi.get(i - 1) as usize
    }

    /// Leading symbol of the suffix at `i`: 0 for `$`, else a stop id.
    pub fn symbol_at(&self, i: usize) -> Result<u32> {
        self.check_pos(i)?;
        Ok(self.symbol_unchecked(i))
    }

    #[inline]
    pub(crate) fn symbol_unchecked(&self, i: usize) -> u32 {
        self.vocabulary[self.sections.rank1_prefix(i) - 1]
    }

    /// Walks Ψ from the separator of the trip with rank `rank`, returning the
    /// suffix-array positions of its stops in trip order.
    pub fn trip_positions(&self, rank: usize) -> Result<Vec<usize>> {
        if rank == 0 || rank > self.trip_count {
            return Err(Error::usage(format!("trip rank {rank} outside 1..={}", self.trip_count)));
        }
        let sep = rank + 1;
        let mut out = Vec::new();
        let mut pos = self.psi_unchecked(sep);
        while pos != sep {
            out.push(pos);
            pos = self.psi_unchecked(pos);
        }
        Ok(out)
    }

    /// Stops of the trip with rank `rank`, recovered through Ψ.
    pub fn trip_stops(&self, rank: usize) -> Result<Vec<StopId>> {
        Ok(self.trip_positions(rank)?.into_iter().map(|p| StopId(self.symbol_unchecked(p))).collect())
    }

    fn vocab_index(&self, symbol: u32) -> Option<usize> {
        self.vocabulary.binary_search(&symbol).ok().map(|k| k + 1)
    }

    /// Suffix-array range of the vocabulary entry `p` (1-based).
    fn section(&self, p: usize) -> SaRange {
        let start = self.sections.select1_unchecked(p);
        let end = if p < self.vocabulary.len() { self.sections.select1_unchecked(p + 1) - 1 } else { self.n };
        SaRange { start, end }
    }

    fn check_stop(&self, x: StopId) -> Result<()> {
        if x.0 == 0 || x.0 > self.stop_count {
            Err(Error::usage(format!("stop {x} outside 1..={}", self.stop_count)))
        } else {
            Ok(())
        }
    }

    /// Range of the suffixes that start with `pattern`.
    ///
    /// Supported shapes: stops only (a contiguous subpath), `$` or `$ X` (trip
    /// start), and stops followed by `$` and at most one more stop (trip end,
    /// optionally joined to the first stop of the same trip).
    pub fn pattern_range(&self, pattern: &[u32]) -> Result<Option<SaRange>> {
        validate_pattern(pattern, self.stop_count)?;
        let Some(p) = self.vocab_index(pattern[0]) else {
            return Ok(None);
        };
        let section = self.section(p);
        let rest = &pattern[1..];
        if rest.is_empty() {
            return Ok(Some(section));
        }
        // first suffix not below the pattern, then first suffix above it
        let lower = self.partition(section, |i| self.compare_tail(i, rest) == Ordering::Less);
        let upper = self
            .partition(SaRange { start: lower, end: section.end }, |i| self.compare_tail(i, rest) != Ordering::Greater);
        Ok((lower < upper).then(|| SaRange { start: lower, end: upper - 1 }))
    }

    /// First position in `range` (or `range.end + 1`) where `pred` turns false.
    fn partition(&self, range: SaRange, pred: impl Fn(usize) -> bool) -> usize {
        let (mut lo, mut hi) = (range.start, range.end + 1);
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

    /// Compares the symbols following the leading one of suffix `i` with `rest`;
    /// a suffix that has `rest` as a prefix compares equal.
    fn compare_tail(&self, i: usize, rest: &[u32]) -> Ordering {
        let mut pos = i;
        for &want in rest {
            pos = self.psi_unchecked(pos);
            let got = self.symbol_unchecked(pos);
            match got.cmp(&want) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        Ordering::Equal
    }

    pub fn count_starts_at(&self, x: StopId) -> Result<(usize, Option<SaRange>)> {
        self.check_stop(x)?;
        let r = self.pattern_range(&[SEPARATOR, x.0])?;
        Ok((r.map_or(0, |r| r.len()), r))
    }

    pub fn count_ends_at(&self, x: StopId) -> Result<(usize, Option<SaRange>)> {
        self.check_stop(x)?;
        let r = self.pattern_range(&[x.0, SEPARATOR])?;
        Ok((r.map_or(0, |r| r.len()), r))
    }

    /// Ranges `Y$X` (in Y's section) and `$XY` (in the separator section) of
    /// the trips starting at `x` and ending at `y`.
    pub fn range_start_end(&self, x: StopId, y: StopId) -> Result<Option<(SaRange, SaRange)>> {
        self.check_stop(x)?;
        self.check_stop(y)?;
        Ok(self.pattern_range(&[y.0, SEPARATOR, x.0])?.map(|r| {
            let image = SaRange { start: self.psi_unchecked(r.start), end: self.psi_unchecked(r.end) };
            (r, image)
        }))
    }

    pub fn count_start_end(&self, x: StopId, y: StopId) -> Result<usize> {
        Ok(self.range_start_end(x, y)?.map_or(0, |(r, _)| r.len()))
    }

    /// Occurrences of stop `x` (a trip passing twice counts twice).
    pub fn count_uses(&self, x: StopId) -> Result<usize> {
        self.check_stop(x)?;
        Ok(self.vocab_index(x.0).map_or(0, |p| self.frequency(p)))
    }

    /// Section of stop `x`, if it occurs at all.
    pub fn uses_range(&self, x: StopId) -> Result<Option<SaRange>> {
        self.check_stop(x)?;
        Ok(self.vocab_index(x.0).map(|p| self.section(p)))
    }

    /// Size of the section of vocabulary entry `p`, by two selects on `D`.
    fn frequency(&self, p: usize) -> usize {
        let start = self.sections.select1_unchecked(p);
        if p < self.vocabulary.len() {
            self.sections.select1_unchecked(p + 1) - start
        } else {
            self.n + 1 - start
        }
    }

    pub fn serialized_bytes(&self) -> usize {
        let mut w = Writer::new();
        self.write(&mut w);
        w.buf.len()
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        w.u64(self.n as u64);
        w.u64(self.stop_count as u64);
        w.u64(self.trip_count as u64);
        w.u64(self.psi.sample_rate() as u64);
        w.u64(self.vocabulary.len() as u64);
        let mut prev = 0;
        for &v in &self.vocabulary {
            w.varint((v - prev) as u64);
            prev = v;
        }
        self.sections.write(w);
        self.psi.write(w);
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.len(u32::MAX as usize)?;
        let stop_count = r.len(u32::MAX as usize)? as u32;
        let trip_count = r.len(n)?;
        let sample_rate = r.len(u32::MAX as usize)?;
        let vocab_len = r.len(n)?;
        let mut vocabulary = Vec::with_capacity(vocab_len);
        let mut prev = 0u64;
        for k in 0..vocab_len {
            let d = r.varint()?;
            if k > 0 && d == 0 {
                return Err(Error::integrity("vocabulary not strictly ascending"));
            }
            prev += d;
            if prev > stop_count as u64 {
                return Err(Error::integrity("vocabulary entry beyond the stop count"));
            }
            vocabulary.push(prev as u32);
        }
        if vocabulary.first() != Some(&SEPARATOR) {
            return Err(Error::integrity("vocabulary must start with the separator"));
        }
        let sections = BitVector::read(r)?;
        let psi = CompressedPsi::read(r)?;
        if sections.len() != n || sections.count_ones() != vocab_len || psi.len() != n {
            return Err(Error::integrity("section bitmap or Ψ length disagrees with the header"));
        }
        if !sections.access(1)? || psi.sample_rate() != sample_rate {
            return Err(Error::integrity("inconsistent spatial header"));
        }
        if sections.select1(2).unwrap_or(n + 1) != trip_count + 2 {
            return Err(Error::integrity("separator section does not match the trip count"));
        }
        Ok(Tcsa { n, stop_count, trip_count, vocabulary, sections, psi })
    }
}

fn validate_pattern(pattern: &[u32], stop_count: u32) -> Result<()> {
    let shape_err = || {
        Error::usage(format!(
            "unsupported pattern {pattern:?}: use stops, `$ X`, or stops followed by `$` and at most one stop"
        ))
    };
    if pattern.is_empty() {
        return Err(shape_err());
    }
    if let Some(&s) = pattern.iter().find(|&&s| s > stop_count) {
        return Err(Error::usage(format!("stop {s} outside 1..={stop_count}")));
    }
    match pattern.iter().position(|&s| s == SEPARATOR) {
        None => Ok(()),
        Some(0) if pattern.len() <= 2 && pattern.get(1) != Some(&SEPARATOR) => Ok(()),
        Some(k) if k > 0 && pattern.len() <= k + 2 && pattern.get(k + 1) != Some(&SEPARATOR) => Ok(()),
        _ => Err(shape_err()),
    }
}
