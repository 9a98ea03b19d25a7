//! Plain bit vectors with constant-time rank and sampled select.
//!
//! Positions are 1-based: `access(1)` is the first bit, `rank1(i)` counts the
//! set bits among the first `i` bits (so `rank1(0) == 0`), and `select1(j)`
//! returns the position of the `j`-th set bit.
//!
//! The rank directory follows the rank9 layout: one pair of words per 512-bit
//! superblock, the first holding the absolute count of set bits before the
//! superblock and the second packing seven 9-bit counts relative to the
//! superblock start (one per 64-bit block after the first). Select binary
//! searches superblocks between sampled hints taken every [`SELECT_SAMPLE`]
//! set (resp. unset) bits.

use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

const WORD_BITS: usize = 64;
const WORDS_PER_SUPER: usize = 8;
const SUPER_BITS: usize = WORD_BITS * WORDS_PER_SUPER;

/// One select hint every this many set (and unset) bits.
pub const SELECT_SAMPLE: usize = 8192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVector {
    n_bits: usize,
    words: Vec<u64>,
    // [absolute, packed relative] per superblock, plus one trailing sentinel superblock
    directory: Vec<u64>,
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
    ones: usize,
}

impl BitVector {
    pub fn from_bits(bits: &[bool]) -> Self {
        bits.iter().copied().collect()
    }

    /// Builds from packed words (bit `p` of the sequence is bit `p % 64` of
    /// word `p / 64`). Bits beyond `n_bits` are cleared.
    pub fn from_words(mut words: Vec<u64>, n_bits: usize) -> Self {
        let n_words = n_bits.div_ceil(WORD_BITS);
        words.resize(n_words, 0);
        if !n_bits.is_multiple_of(WORD_BITS) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (n_bits % WORD_BITS)) - 1;
        }
        let mut bv = BitVector {
            n_bits,
            words,
            directory: Vec::new(),
            select1_hints: Vec::new(),
            select0_hints: Vec::new(),
            ones: 0,
        };
        bv.build_directories();
        bv
    }

    fn build_directories(&mut self) {
        let n_super = self.words.len().div_ceil(WORDS_PER_SUPER) + 1;
        let mut directory = Vec::with_capacity(2 * n_super);
        let mut total = 0u64;
        for sb in 0..n_super {
            let absolute = total;
            let mut packed = 0u64;
            let mut relative = 0u64;
            for b in 0..WORDS_PER_SUPER {
                if b > 0 {
                    packed |= relative << (9 * (b - 1));
                }
                let w = sb * WORDS_PER_SUPER + b;
                if let Some(word) = self.words.get(w) {
                    relative += word.count_ones() as u64;
                }
            }
            total += relative;
            directory.push(absolute);
            directory.push(packed);
        }
        self.directory = directory;
        self.ones = total as usize;

        let mut hints1 = Vec::new();
        let mut hints0 = Vec::new();
        let mut seen1 = 0usize;
        let mut seen0 = 0usize;
        for sb in 0..n_super - 1 {
            let start = sb * SUPER_BITS;
            let width = SUPER_BITS.min(self.n_bits - start);
            let ones_here = (self.directory[2 * sb + 2] - self.directory[2 * sb]) as usize;
            let zeros_here = width - ones_here;
            // a hint records the superblock holding the (k * SELECT_SAMPLE + 1)-th bit
            while hints1.len() * SELECT_SAMPLE < seen1 + ones_here {
                hints1.push(sb as u32);
            }
            while hints0.len() * SELECT_SAMPLE < seen0 + zeros_here {
                hints0.push(sb as u32);
            }
            seen1 += ones_here;
            seen0 += zeros_here;
        }
        self.select1_hints = hints1;
        self.select0_hints = hints0;
    }

    pub fn len(&self) -> usize {
        self.n_bits
    }

    pub fn is_empty(&self) -> bool {
        self.n_bits == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.n_bits - self.ones
    }

    pub fn access(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.n_bits {
            return Err(Error::Range { pos: i, len: self.n_bits });
        }
        Ok(self.get(i - 1))
    }

    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.n_bits {
            return Err(Error::Range { pos: i, len: self.n_bits });
        }
        Ok(self.rank1_prefix(i))
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i - self.rank1(i)?)
    }

    pub fn select1(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.ones {
            return Err(Error::NotFound(format!("select1({j}) with {} set bits", self.ones)));
        }
        Ok(self.select1_unchecked(j))
    }

    pub fn select0(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.count_zeros() {
            return Err(Error::NotFound(format!("select0({j}) with {} unset bits", self.count_zeros())));
        }
        Ok(self.select0_unchecked(j))
    }

    /// Bit at 0-based offset `p`.
    #[inline]
    pub(crate) fn get(&self, p: usize) -> bool {
        (self.words[p / WORD_BITS] >> (p % WORD_BITS)) & 1 == 1
    }

    /// Set bits among the first `i` bits; `i <= len()`.
    #[inline]
    pub(crate) fn rank1_prefix(&self, i: usize) -> usize {
        let w = i / WORD_BITS;
        let sb = w / WORDS_PER_SUPER;
        let b = w % WORDS_PER_SUPER;
        let mut r = self.directory[2 * sb] + relative(self.directory[2 * sb + 1], b);
        let rem = i % WORD_BITS;
        if rem != 0 {
            r += (self.words[w] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        r as usize
    }

    #[inline]
    pub(crate) fn rank0_prefix(&self, i: usize) -> usize {
        i - self.rank1_prefix(i)
    }

    /// 1-based position of the `j`-th set bit; `1 <= j <= count_ones()`.
    pub(crate) fn select1_unchecked(&self, j: usize) -> usize {
        let target = j as u64;
        let k = (j - 1) / SELECT_SAMPLE;
        let mut lo = self.select1_hints[k] as usize;
        let mut hi = match self.select1_hints.get(k + 1) {
            Some(&h) => h as usize,
            None => self.super_count() - 1,
        };
        // largest superblock whose absolute count is < target
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.directory[2 * mid] < target {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let mut before = self.directory[2 * sb];
        let packed = self.directory[2 * sb + 1];
        let mut b = 0;
        while b + 1 < WORDS_PER_SUPER && before + relative(packed, b + 1) < target {
            b += 1;
        }
        before += relative(packed, b);
        let w = sb * WORDS_PER_SUPER + b;
        w * WORD_BITS + select_in_word(self.words[w], (target - before) as u32) + 1
    }

    /// 1-based position of the `j`-th unset bit; `1 <= j <= count_zeros()`.
    pub(crate) fn select0_unchecked(&self, j: usize) -> usize {
        let target = j as u64;
        let zeros_before = |sb: usize| (sb * SUPER_BITS) as u64 - self.directory[2 * sb];
        let k = (j - 1) / SELECT_SAMPLE;
        let mut lo = self.select0_hints[k] as usize;
        let mut hi = match self.select0_hints.get(k + 1) {
            Some(&h) => h as usize,
            None => self.super_count() - 1,
        };
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if zeros_before(mid) < target {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let base = zeros_before(sb);
        let packed = self.directory[2 * sb + 1];
        let zeros_at = |b: usize| (b * WORD_BITS) as u64 - relative(packed, b);
        let mut b = 0;
        while b + 1 < WORDS_PER_SUPER
            && sb * WORDS_PER_SUPER + b + 1 < self.words.len()
            && base + zeros_at(b + 1) < target
        {
            b += 1;
        }
        let before = base + zeros_at(b);
        let w = sb * WORDS_PER_SUPER + b;
        w * WORD_BITS + select_in_word(!self.words[w], (target - before) as u32) + 1
    }

    /// Superblocks excluding the sentinel.
    fn super_count(&self) -> usize {
        self.directory.len() / 2 - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n_bits).map(move |p| self.get(p))
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        w.u64(self.n_bits as u64);
        for &word in &self.words {
            w.u64(word);
        }
        for &d in &self.directory {
            w.u64(d);
        }
        w.u64(self.select1_hints.len() as u64);
        for &h in &self.select1_hints {
            w.u32(h);
        }
        w.u64(self.select0_hints.len() as u64);
        for &h in &self.select0_hints {
            w.u32(h);
        }
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let n_bits = r.len(r.remaining().saturating_mul(8))?;
        let n_words = n_bits.div_ceil(WORD_BITS);
        let mut words = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            words.push(r.u64()?);
        }
        let n_dir = 2 * (n_words.div_ceil(WORDS_PER_SUPER) + 1);
        let mut directory = Vec::with_capacity(n_dir);
        for _ in 0..n_dir {
            directory.push(r.u64()?);
        }
        let mut hints = [Vec::new(), Vec::new()];
        for h in hints.iter_mut() {
            let count = r.len(r.remaining() / 4)?;
            for _ in 0..count {
                h.push(r.u32()?);
            }
        }
        let [select1_hints, select0_hints] = hints;
        let bv = BitVector::from_words(words, n_bits);
        // the stored directories must agree with the payload
        if bv.directory != directory || bv.select1_hints != select1_hints || bv.select0_hints != select0_hints {
            return Err(Error::integrity("bit vector directory does not match payload"));
        }
        Ok(bv)
    }

    /// Bytes written by the serializer.
    pub fn serialized_bytes(&self) -> usize {
        8 + 8 * self.words.len()
            + 8 * self.directory.len()
            + 8
            + 4 * self.select1_hints.len()
            + 8
            + 4 * self.select0_hints.len()
    }

    /// Bytes of raw payload (bits padded to whole words).
    pub fn payload_bytes(&self) -> usize {
        8 * self.words.len()
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut words = Vec::new();
        let mut n_bits = 0usize;
        for bit in iter {
            if n_bits.is_multiple_of(WORD_BITS) {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1u64 << (n_bits % WORD_BITS);
            }
            n_bits += 1;
        }
        BitVector::from_words(words, n_bits)
    }
}

#[inline]
fn relative(packed: u64, b: usize) -> u64 {
    if b == 0 {
        0
    } else {
        (packed >> (9 * (b - 1))) & 0x1ff
    }
}

/// 0-based offset of the `r`-th (1-based) set bit of `word`.
#[inline]
fn select_in_word(word: u64, r: u32) -> usize {
    let mut r = r;
    let mut shift = 0;
    loop {
        let byte = (word >> shift) & 0xff;
        let c = byte.count_ones();
        if c >= r {
            let mut byte = byte;
            for _ in 1..r {
                byte &= byte - 1;
            }
            return shift + byte.trailing_zeros() as usize;
        }
        r -= c;
        shift += 8;
        debug_assert!(shift < 64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BitVector {
        BitVector::from_bits(&[true, false, true, true, false])
    }

    #[test]
    fn empty_vector() {
        let bv = BitVector::from_bits(&[]);
        assert_eq!(bv.len(), 0);
        assert_eq!(bv.rank1(0).unwrap(), 0);
        assert!(bv.access(1).is_err());
        assert!(bv.select1(1).is_err());
        assert!(bv.select0(1).is_err());
    }

    #[test]
    fn small_examples() {
        let bv = sample();
        assert_eq!(bv.rank1(5).unwrap(), 3);
        assert_eq!(bv.rank1(0).unwrap(), 0);
        assert_eq!(bv.rank1(3).unwrap(), 2);
        assert_eq!(bv.rank0(4).unwrap(), 1);
        assert!(bv.access(1).unwrap());
        assert!(!bv.access(5).unwrap());
        assert!(matches!(bv.access(6), Err(Error::Range { .. })));
        assert!(matches!(bv.rank1(6), Err(Error::Range { .. })));
        assert_eq!(bv.select1(3).unwrap(), 4);
        assert_eq!(bv.select1(1).unwrap(), 1);
        assert!(matches!(bv.select1(4), Err(Error::NotFound(_))));
        assert_eq!(bv.select0(1).unwrap(), 2);
        assert_eq!(bv.select0(2).unwrap(), 5);
    }

    #[test]
    fn all_ones_identity() {
        let bv = BitVector::from_bits(&[true; 64]);
        assert_eq!(bv.select1(64).unwrap(), 64);
        for j in 1..=64 {
            assert_eq!(bv.select1(j).unwrap(), j);
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn superblock_boundaries() {
        for n in [511, 512, 513, 1024, 1025, 4096 + 7] {
            let bits: Vec<bool> = (0..n).map(|i| i % 3 == 0).collect();
            let bv = BitVector::from_bits(&bits);
            let mut ones = 0;
            for i in 0..=n {
                assert_eq!(bv.rank1(i).unwrap(), ones, "n={n} i={i}");
                if i < n && bits[i] {
                    ones += 1;
                    assert_eq!(bv.select1(ones).unwrap(), i + 1);
                }
            }
            let mut zeros = 0;
            for (i, &b) in bits.iter().enumerate() {
                if !b {
                    zeros += 1;
                    assert_eq!(bv.select0(zeros).unwrap(), i + 1);
                }
            }
        }
    }

    #[test]
    fn serialization_roundtrip_and_tamper() {
        let bits: Vec<bool> = (0..3000).map(|i| (i * 7) % 5 < 2).collect();
        let bv = BitVector::from_bits(&bits);
        let mut w = Writer::new();
        bv.write(&mut w);
        assert_eq!(w.buf.len(), bv.serialized_bytes());
        let back = BitVector::read(&mut Reader::new(&w.buf)).unwrap();
        assert_eq!(back, bv);

        let mut bad = w.buf.clone();
        bad[9] ^= 1;
        assert!(BitVector::read(&mut Reader::new(&bad)).is_err());
    }

    #[test]
    fn select_in_word_positions() {
        assert_eq!(select_in_word(0b1011, 1), 0);
        assert_eq!(select_in_word(0b1011, 3), 3);
        assert_eq!(select_in_word(1u64 << 63, 1), 63);
        assert_eq!(select_in_word(u64::MAX, 64), 63);
    }
}
