//! Most frequent stops, by sequential probing of `D` or by binary partition.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{SaRange, Tcsa};
use crate::corpus::StopId;
use crate::error::{Error, Result};

/// One partition step of the binary algorithm: a segment of `D` (suffix-array
/// positions) and the two halves it was cut into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub segment: SaRange,
    pub left: SaRange,
    pub right: SaRange,
}

#[derive(Clone, Debug, Default)]
pub struct TopKTrace {
    pub splits: Vec<Split>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Segment {
    size: usize,
    // a single stop outranks a wider segment of the same size
    single: bool,
    // smaller stops first on ties
    first: Reverse<usize>,
    last: usize,
    start: usize,
}

impl Tcsa {
    /// `k` most frequent stops by one frequency probe per vocabulary entry and a
    /// size-`k` min-heap. Ties go to the smaller stop id; the output is sorted
    /// by frequency descending, then stop id ascending.
    pub fn topk_sequential(&self, k: usize) -> Result<Vec<(StopId, usize)>> {
        check_k(k)?;
        // heap top is the weakest candidate kept so far
        let mut heap: BinaryHeap<Reverse<(usize, Reverse<u32>)>> = BinaryHeap::with_capacity(k + 1);
        for p in 2..=self.vocabulary.len() {
            let cand = (self.frequency(p), Reverse(self.vocabulary[p - 1]));
            if heap.len() < k {
                heap.push(Reverse(cand));
            } else if let Some(mut weakest) = heap.peek_mut() {
                if cand > weakest.0 {
                    *weakest = Reverse(cand);
                }
            }
        }
        Ok(heap.into_sorted_vec().into_iter().map(|Reverse((f, Reverse(s)))| (StopId(s), f)).collect())
    }

    /// `k` most frequent stops by recursively halving segments of `D` (each
    /// half holding the same number of distinct stops, give or take one) and
    /// always expanding the largest segment first.
    pub fn topk_binary(&self, k: usize) -> Result<Vec<(StopId, usize)>> {
        self.topk_binary_impl(k, None)
    }

    /// As [`Tcsa::topk_binary`], also recording every split performed.
    pub fn topk_binary_traced(&self, k: usize) -> Result<(Vec<(StopId, usize)>, TopKTrace)> {
        let mut trace = TopKTrace::default();
        let out = self.topk_binary_impl(k, Some(&mut trace))?;
        Ok((out, trace))
    }

    fn topk_binary_impl(&self, k: usize, mut trace: Option<&mut TopKTrace>) -> Result<Vec<(StopId, usize)>> {
        check_k(k)?;
        let vocab = self.vocabulary.len();
        let mut out = Vec::new();
        if vocab < 2 {
            return Ok(out);
        }
        let segment = |first: usize, last: usize, start: usize, end: usize| Segment {
            size: end + 1 - start,
            single: first == last,
            first: Reverse(first),
            last,
            start,
        };
        // skip the separator section
        let mut queue = BinaryHeap::new();
        queue.push(segment(2, vocab, self.sections.select1_unchecked(2), self.n));
        while let Some(seg) = queue.pop() {
            let first = seg.first.0;
            let end = seg.start + seg.size - 1;
            if seg.single {
                out.push((StopId(self.vocabulary[first - 1]), seg.size));
                if out.len() == k {
                    break;
                }
                continue;
            }
            let mid = (first + seg.last) / 2;
            let split = self.sections.select1_unchecked(mid + 1);
            let left = segment(first, mid, seg.start, split - 1);
            let right = segment(mid + 1, seg.last, split, end);
            if let Some(t) = trace.as_deref_mut() {
                t.splits.push(Split {
                    segment: SaRange { start: seg.start, end },
                    left: SaRange { start: seg.start, end: split - 1 },
                    right: SaRange { start: split, end },
                });
            }
            queue.push(left);
            queue.push(right);
        }
        Ok(out)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::usage("k must be at least 1"))
    } else {
        Ok(())
    }
}
