//! Balanced wavelet matrix over a sequence of time codes.
//!
//! Level 1 holds the most significant bit of every code in input order. Each
//! following level holds the next bit, with the sequence stably partitioned by
//! the previous level's bit (zeros first). Codes use a fixed width of
//! `log2(next_power_of_two(σ))` bits, at least one.

use crate::bitseq::BitVector;
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletMatrix {
    n: usize,
    sigma: u32,
    levels: Vec<BitVector>,
    zeros: Vec<usize>,
}

impl WaveletMatrix {
    pub fn build(seq: &[u32], sigma: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::Build("alphabet size must be at least 1".into()));
        }
        if let Some((i, &c)) = seq.iter().enumerate().find(|(_, &c)| c >= sigma) {
            return Err(Error::Build(format!("code {c} at position {} is not below σ = {sigma}", i + 1)));
        }
        let m = level_count(sigma);
        let n = seq.len();
        let mut current = seq.to_vec();
        let mut next = Vec::with_capacity(n);
        let mut levels = Vec::with_capacity(m);
        let mut zeros = Vec::with_capacity(m);
        for level in 0..m {
            let shift = m - 1 - level;
            let mut words = vec![0u64; n.div_ceil(64)];
            for (p, &c) in current.iter().enumerate() {
                if (c >> shift) & 1 == 1 {
                    words[p / 64] |= 1 << (p % 64);
                }
            }
            next.clear();
            next.extend(current.iter().filter(|&&c| (c >> shift) & 1 == 0));
            zeros.push(next.len());
            next.extend(current.iter().filter(|&&c| (c >> shift) & 1 == 1));
            std::mem::swap(&mut current, &mut next);
            levels.push(BitVector::from_words(words, n));
        }
        Ok(WaveletMatrix { n, sigma, levels, zeros })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alphabet_size(&self) -> u32 {
        self.sigma
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[BitVector] {
        &self.levels
    }

    /// Zeros on each level, z[ℓ].
    pub fn zeros(&self) -> &[usize] {
        &self.zeros
    }

    #[inline]
    fn bit(&self, code: u32, level: usize) -> bool {
        (code >> (self.levels.len() - 1 - level)) & 1 == 1
    }

    fn check_code(&self, c: u32) -> Result<()> {
        if c >= self.sigma {
            Err(Error::usage(format!("time code {c} outside 0..{}", self.sigma)))
        } else {
            Ok(())
        }
    }

    pub fn access(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.n {
            return Err(Error::Range { pos: i, len: self.n });
        }
        Ok(self.access_unchecked(i))
    }

    #[inline]
    pub(crate) fn access_unchecked(&self, i: usize) -> u32 {
        let mut p = i - 1;
        let mut code = 0u32;
        for (level, bv) in self.levels.iter().enumerate() {
            code <<= 1;
            if bv.get(p) {
                code |= 1;
                p = self.zeros[level] + bv.rank1_prefix(p);
            } else {
                p = bv.rank0_prefix(p);
            }
        }
        code
    }

    /// Occurrences of `c` among the first `i` entries.
    pub fn rank(&self, c: u32, i: usize) -> Result<usize> {
        self.check_code(c)?;
        if i > self.n {
            return Err(Error::Range { pos: i, len: self.n });
        }
        let (s, e) = self.descend(c, 0, i);
        Ok(e - s)
    }

    /// Maps the half-open range `[s, e)` of level 1 to the range of entries
    /// equal to `c` on the bottom level.
    fn descend(&self, c: u32, mut s: usize, mut e: usize) -> (usize, usize) {
        for (level, bv) in self.levels.iter().enumerate() {
            if self.bit(c, level) {
                s = self.zeros[level] + bv.rank1_prefix(s);
                e = self.zeros[level] + bv.rank1_prefix(e);
            } else {
                s = bv.rank0_prefix(s);
                e = bv.rank0_prefix(e);
            }
        }
        (s, e)
    }

    /// Position of the `j`-th occurrence of `c`.
    pub fn select(&self, c: u32, j: usize) -> Result<usize> {
        self.check_code(c)?;
        let (s, e) = self.descend(c, 0, self.n);
        if j == 0 || j > e - s {
            return Err(Error::NotFound(format!("code {c} occurs {} times, asked for #{j}", e - s)));
        }
        Ok(self.lift(c, s + j - 1) + 1)
    }

    /// Follows bottom-level offset `p` of code `c` back to its input offset.
    fn lift(&self, c: u32, mut p: usize) -> usize {
        for level in (0..self.levels.len()).rev() {
            let bv = &self.levels[level];
            p = if self.bit(c, level) {
                bv.select1_unchecked(p - self.zeros[level] + 1) - 1
            } else {
                bv.select0_unchecked(p + 1) - 1
            };
        }
        p
    }

    fn check_rect(&self, x1: usize, x2: usize, y1: u32, y2: u32) -> Result<()> {
        if x1 == 0 || x1 > x2 || x2 > self.n {
            return Err(Error::usage(format!("position range [{x1}, {x2}] invalid for length {}", self.n)));
        }
        if y1 > y2 || y2 >= self.sigma {
            return Err(Error::usage(format!("code range [{y1}, {y2}] invalid for σ = {}", self.sigma)));
        }
        Ok(())
    }

    /// Entries in positions `x1..=x2` with codes in `y1..=y2`.
    pub fn count(&self, x1: usize, x2: usize, y1: u32, y2: u32) -> Result<usize> {
        self.check_rect(x1, x2, y1, y2)?;
        Ok(self.count_unchecked(x1, x2, y1, y2))
    }

    pub(crate) fn count_unchecked(&self, x1: usize, x2: usize, y1: u32, y2: u32) -> usize {
        let mut total = 0;
        self.refine(0, x1 - 1, x2, 0, y1, y2, &mut |_, s, e| total += e - s);
        total
    }

    /// Descends from `level` with range `[s, e)` of the node whose codes start
    /// at `node_lo`, splitting wherever the code interval needs both children,
    /// and reports every maximal node fully inside `[y1, y2]`.
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        level: usize,
        s: usize,
        e: usize,
        node_lo: u32,
        y1: u32,
        y2: u32,
        emit: &mut impl FnMut(NodeAt, usize, usize),
    ) {
        if s == e {
            return;
        }
        let width = self.levels.len() - level;
        let node_hi = node_lo as u64 + (1u64 << width) - 1;
        if (y2 as u64) < node_lo as u64 || (y1 as u64) > node_hi {
            return;
        }
        if y1 <= node_lo && node_hi <= y2 as u64 {
            emit(NodeAt { level, lo: node_lo }, s, e);
            return;
        }
        let bv = &self.levels[level];
        let half = 1u32 << (width - 1);
        let (zs, ze) = (bv.rank0_prefix(s), bv.rank0_prefix(e));
        self.refine(level + 1, zs, ze, node_lo, y1, y2, emit);
        let z = self.zeros[level];
        self.refine(level + 1, z + (s - zs), z + (e - ze), node_lo + half, y1, y2, emit);
    }

    /// Every entry counted by [`WaveletMatrix::count`] as (position, code),
    /// grouped by code in ascending order and by position within a code.
    pub fn report(&self, x1: usize, x2: usize, y1: u32, y2: u32) -> Result<Vec<(usize, u32)>> {
        self.check_rect(x1, x2, y1, y2)?;
        let mut nodes = Vec::new();
        self.refine(0, x1 - 1, x2, 0, y1, y2, &mut |node, s, e| nodes.push((node, s, e)));
        let mut out = Vec::new();
        for (node, s, e) in nodes {
            self.expand(node, s, e, &mut out);
        }
        Ok(out)
    }

    /// Pushes a fully-matching inner node down to its leaves, then lifts each
    /// leaf entry back to its input position.
    fn expand(&self, node: NodeAt, s: usize, e: usize, out: &mut Vec<(usize, u32)>) {
        if s == e {
            return;
        }
        if node.level == self.levels.len() {
            for p in s..e {
                out.push((self.lift(node.lo, p) + 1, node.lo));
            }
            return;
        }
        let bv = &self.levels[node.level];
        let half = 1u32 << (self.levels.len() - node.level - 1);
        let (zs, ze) = (bv.rank0_prefix(s), bv.rank0_prefix(e));
        let z = self.zeros[node.level];
        self.expand(NodeAt { level: node.level + 1, lo: node.lo }, zs, ze, out);
        self.expand(NodeAt { level: node.level + 1, lo: node.lo + half }, z + (s - zs), z + (e - ze), out);
    }

    pub fn serialized_bytes(&self) -> usize {
        8 * 3 + self.levels.iter().map(BitVector::serialized_bytes).sum::<usize>() + 8 * self.zeros.len()
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        w.u64(self.n as u64);
        w.u64(self.sigma as u64);
        w.u64(self.levels.len() as u64);
        for bv in &self.levels {
            bv.write(w);
        }
        for &z in &self.zeros {
            w.u64(z as u64);
        }
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.len(usize::MAX)?;
        let sigma = r.len(u32::MAX as usize)? as u32;
        let m = r.len(32)?;
        if sigma == 0 || m != level_count(sigma) {
            return Err(Error::integrity(format!("{m} levels do not fit σ = {sigma}")));
        }
        let mut levels = Vec::with_capacity(m);
        for _ in 0..m {
            let bv = BitVector::read(r)?;
            if bv.len() != n {
                return Err(Error::integrity("wavelet level length differs from n"));
            }
            levels.push(bv);
        }
        let mut zeros = Vec::with_capacity(m);
        for bv in &levels {
            let z = r.len(n)?;
            if z != bv.count_zeros() {
                return Err(Error::integrity("wavelet zero count does not match its level"));
            }
            zeros.push(z);
        }
        Ok(WaveletMatrix { n, sigma, levels, zeros })
    }
}

#[derive(Clone, Copy, Debug)]
struct NodeAt {
    level: usize,
    lo: u32,
}

fn level_count(sigma: u32) -> usize {
    let padded = (sigma as u64).next_power_of_two();
    (padded.trailing_zeros() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> WaveletMatrix {
        WaveletMatrix::build(&[1, 0, 3, 1, 2], 4).unwrap()
    }

    #[test]
    fn first_level_holds_msb() {
        let wm = sample();
        assert_eq!(wm.level_count(), 2);
        let top: Vec<bool> = wm.levels()[0].iter().collect();
        assert_eq!(top, vec![false, false, true, false, true]);
        assert_eq!(wm.zeros()[0], 3);
    }

    #[test]
    fn degenerate_sizes() {
        let one = WaveletMatrix::build(&[0], 2).unwrap();
        assert_eq!(one.level_count(), 1);
        assert!(!one.levels()[0].access(1).unwrap());
        let unary = WaveletMatrix::build(&[0, 0, 0], 1).unwrap();
        assert_eq!(unary.level_count(), 1);
        assert_eq!(unary.count(1, 3, 0, 0).unwrap(), 3);
        let empty = WaveletMatrix::build(&[], 8).unwrap();
        assert!(empty.access(1).is_err());
        assert!(empty.count(1, 1, 0, 7).is_err());
        assert_eq!(empty.rank(3, 0).unwrap(), 0);
        assert!(WaveletMatrix::build(&[4], 4).is_err());
        assert_eq!(level_count(5), 3);
        assert_eq!(level_count(4096), 12);
    }

    #[test]
    fn access_rank_select() {
        let wm = sample();
        assert_eq!(wm.access(3).unwrap(), 3);
        assert_eq!(wm.access(1).unwrap(), 1);
        assert!(matches!(wm.access(6), Err(Error::Range { .. })));
        assert_eq!(wm.rank(1, 4).unwrap(), 2);
        assert_eq!(wm.rank(0, 0).unwrap(), 0);
        assert_eq!(wm.rank(2, 5).unwrap(), 1);
        assert!(wm.rank(4, 1).is_err());
        assert_eq!(wm.select(1, 2).unwrap(), 4);
        assert_eq!(wm.select(3, 1).unwrap(), 3);
        assert!(matches!(wm.select(0, 2), Err(Error::NotFound(_))));
    }

    #[test]
    fn counting_and_reporting() {
        let wm = sample();
        assert_eq!(wm.count(1, 5, 0, 3).unwrap(), 5);
        assert_eq!(wm.count(2, 4, 1, 2).unwrap(), 1);
        assert_eq!(wm.count(2, 2, 3, 3).unwrap(), 0);
        assert!(wm.count(3, 2, 0, 1).is_err());
        assert!(wm.count(1, 2, 2, 1).is_err());
        assert!(wm.count(1, 2, 0, 4).is_err());
        assert_eq!(wm.report(1, 5, 3, 3).unwrap(), vec![(3, 3)]);
        assert!(wm.report(2, 2, 3, 3).unwrap().is_empty());
        let mut all = wm.report(1, 5, 0, 3).unwrap();
        all.sort();
        assert_eq!(all, vec![(1, 1), (2, 0), (3, 3), (4, 1), (5, 2)]);
    }

    #[test]
    fn serialization_roundtrip() {
        let seq: Vec<u32> = (0..777).map(|i| (i * 31 % 100) as u32).collect();
        let wm = WaveletMatrix::build(&seq, 100).unwrap();
        let mut w = Writer::new();
        wm.write(&mut w);
        assert_eq!(w.buf.len(), wm.serialized_bytes());
        assert_eq!(WaveletMatrix::read(&mut Reader::new(&w.buf)).unwrap(), wm);
    }
}
