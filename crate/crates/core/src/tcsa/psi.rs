//! Sampled differential encoding of Ψ.
//!
//! Every `sample_rate`-th entry is stored verbatim together with the byte
//! offset of its block. The remaining entries of a block are stored as
//! differences to the previous entry, one LEB128 token each:
//!
//! * `r << 1` is a run of `r` consecutive `+1` differences;
//! * `(zigzag(d) << 1) | 1` is a single difference `d`.
//!
//! Runs never cross a block boundary, so any entry is decoded from its block's
//! sample with at most `sample_rate - 1` steps (fewer when runs are long).
//! Differences are zigzagged because Ψ decreases inside the separator section
//! and at section boundaries.

use crate::error::{Error, Result};
use crate::wire::{get_varint, put_varint, unzigzag, zigzag, Reader, Writer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedPsi {
    len: usize,
    sample_rate: usize,
    samples: Vec<u32>,
    offsets: Vec<u32>,
    stream: Vec<u8>,
    run_deltas: u64,
    total_deltas: u64,
}

impl CompressedPsi {
    /// Encodes `values` (any sequence of u32; Ψ uses 1-based positions).
    pub fn encode(values: &[u32], sample_rate: usize) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::Build("sample rate must be at least 1".into()));
        }
        let mut samples = Vec::with_capacity(values.len().div_ceil(sample_rate));
        let mut offsets = Vec::with_capacity(samples.capacity());
        let mut stream = Vec::new();
        let mut run_deltas = 0u64;
        let mut total_deltas = 0u64;
        for block in values.chunks(sample_rate) {
            if stream.len() > u32::MAX as usize {
                return Err(Error::Build("Ψ stream exceeds 4 GiB".into()));
            }
            samples.push(block[0]);
            offsets.push(stream.len() as u32);
            let mut run = 0u64;
            for w in block.windows(2) {
                let d = w[1] as i64 - w[0] as i64;
                total_deltas += 1;
                if d == 1 {
                    run += 1;
                    run_deltas += 1;
                    continue;
                }
                if run > 0 {
                    put_varint(&mut stream, run << 1);
                    run = 0;
                }
                put_varint(&mut stream, (zigzag(d) << 1) | 1);
            }
            if run > 0 {
                put_varint(&mut stream, run << 1);
            }
        }
        Ok(CompressedPsi { len: values.len(), sample_rate, samples, offsets, stream, run_deltas, total_deltas })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sample_rate(&self) -> usize {
        self.sample_rate
    }

    /// Entry at 0-based index `i < len()`.
    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        let block = i / self.sample_rate;
        let mut remaining = i % self.sample_rate;
        let mut value = self.samples[block] as i64;
        let mut pos = self.offsets[block] as usize;
        while remaining > 0 {
            let (token, used) = read_token(&self.stream, pos);
            pos += used;
            if token & 1 == 0 {
                let step = ((token >> 1) as usize).min(remaining);
                value += step as i64;
                remaining -= step;
            } else {
                value += unzigzag(token >> 1);
                remaining -= 1;
            }
        }
        value as u32
    }

    pub fn decode_all(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len);
        for (block, &sample) in self.samples.iter().enumerate() {
            let count = self.sample_rate.min(self.len - block * self.sample_rate);
            let mut value = sample as i64;
            out.push(sample);
            let mut pos = self.offsets[block] as usize;
            let mut produced = 1;
            while produced < count {
                let (token, used) = read_token(&self.stream, pos);
                pos += used;
                if token & 1 == 0 {
                    for _ in 0..(token >> 1) {
                        value += 1;
                        out.push(value as u32);
                    }
                    produced += (token >> 1) as usize;
                } else {
                    value += unzigzag(token >> 1);
                    out.push(value as u32);
                    produced += 1;
                }
            }
        }
        out
    }

    /// Share of differences that were absorbed into `+1` runs.
    pub fn run_fraction(&self) -> f64 {
        if self.total_deltas == 0 {
            0.0
        } else {
            self.run_deltas as f64 / self.total_deltas as f64
        }
    }

    pub fn stream_bytes(&self) -> usize {
        self.stream.len()
    }

    pub fn serialized_bytes(&self) -> usize {
        8 * 5 + 4 * self.samples.len() + 4 * self.offsets.len() + 8 + self.stream.len()
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        w.u64(self.len as u64);
        w.u64(self.sample_rate as u64);
        w.u64(self.run_deltas);
        w.u64(self.total_deltas);
        w.u64(self.samples.len() as u64);
        for &s in &self.samples {
            w.u32(s);
        }
        for &o in &self.offsets {
            w.u32(o);
        }
        w.section(&self.stream);
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let len = r.len(u32::MAX as usize)?;
        let sample_rate = r.len(u32::MAX as usize)?;
        let run_deltas = r.u64()?;
        let total_deltas = r.u64()?;
        let n_samples = r.len(r.remaining() / 8)?;
        if sample_rate == 0 || n_samples != len.div_ceil(sample_rate) {
            return Err(Error::integrity("Ψ sample table does not match its length"));
        }
        let mut samples = Vec::with_capacity(n_samples);
        for _ in 0..n_samples {
            samples.push(r.u32()?);
        }
        let mut offsets = Vec::with_capacity(n_samples);
        for _ in 0..n_samples {
            let o = r.u32()?;
            if offsets.last().is_some_and(|&prev| o < prev) {
                return Err(Error::integrity("Ψ block offsets decrease"));
            }
            offsets.push(o);
        }
        let stream = r.section()?.to_vec();
        if offsets.last().is_some_and(|&o| o as usize > stream.len()) {
            return Err(Error::integrity("Ψ block offset beyond the stream"));
        }
        let psi = CompressedPsi { len, sample_rate, samples, offsets, stream, run_deltas, total_deltas };
        psi.check_stream()?;
        Ok(psi)
    }

    /// Walks every block once so later lookups cannot run off the stream.
    fn check_stream(&self) -> Result<()> {
        for block in 0..self.samples.len() {
            let count = self.sample_rate.min(self.len - block * self.sample_rate);
            let end = self.offsets.get(block + 1).map_or(self.stream.len(), |&o| o as usize);
            let mut pos = self.offsets[block] as usize;
            let mut produced = 1;
            let mut value = self.samples[block] as i64;
            while produced < count {
                let (token, used) =
                    get_varint(&self.stream[pos..end]).ok_or_else(|| Error::integrity("Ψ stream truncated"))?;
                pos += used;
                if token & 1 == 0 {
                    if token == 0 {
                        return Err(Error::integrity("empty Ψ run"));
                    }
                    produced += (token >> 1) as usize;
                    value += (token >> 1) as i64;
                } else {
                    produced += 1;
                    value += unzigzag(token >> 1);
                }
                if !(0..=u32::MAX as i64).contains(&value) {
                    return Err(Error::integrity("Ψ value out of range"));
                }
            }
            if produced != count || pos != end {
                return Err(Error::integrity("Ψ block length mismatch"));
            }
        }
        Ok(())
    }
}

#[inline]
fn read_token(stream: &[u8], pos: usize) -> (u64, usize) {
    let b = stream[pos];
    if b < 0x80 {
        (b as u64, 1)
    } else {
        get_varint(&stream[pos..]).expect("Ψ stream validated on build/load")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_runs_and_jumps() {
        let values: Vec<u32> = vec![5, 6, 7, 8, 2, 3, 4, 100, 101, 1, 1, 2];
        for rate in [1, 2, 3, 4, 5, 16, 64] {
            let psi = CompressedPsi::encode(&values, rate).unwrap();
            assert_eq!(psi.decode_all(), values, "rate {rate}");
            for (i, &v) in values.iter().enumerate() {
                assert_eq!(psi.get(i), v, "rate {rate} i {i}");
            }
        }
    }

    #[test]
    fn run_fraction_counts_plus_one_steps() {
        let psi = CompressedPsi::encode(&[1, 2, 3, 4, 9], 64).unwrap();
        assert!((psi.run_fraction() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn empty_and_zero_rate() {
        let psi = CompressedPsi::encode(&[], 16).unwrap();
        assert!(psi.is_empty());
        assert!(psi.decode_all().is_empty());
        assert!(CompressedPsi::encode(&[1], 0).is_err());
    }

    #[test]
    fn serialization_detects_damage() {
        let values: Vec<u32> = (0..1000).map(|i| (i * 7919 % 1000) as u32 + 1).collect();
        let psi = CompressedPsi::encode(&values, 16).unwrap();
        let mut w = Writer::new();
        psi.write(&mut w);
        assert_eq!(w.buf.len(), psi.serialized_bytes());
        assert_eq!(CompressedPsi::read(&mut Reader::new(&w.buf)).unwrap(), psi);
        let cut = &w.buf[..w.buf.len() - 3];
        assert!(CompressedPsi::read(&mut Reader::new(cut)).is_err());
    }
}
