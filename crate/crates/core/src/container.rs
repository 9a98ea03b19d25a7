//! The single-file index container.
//!
//! ```text
//! "TCTR1"  magic
//! u32      format version
//! u8       1 = little-endian
//! u32 x3   slot minutes, day types, minutes per day
//! u64 + .. spatial record (length-prefixed)
//! u64 + .. time matrix record (length-prefixed)
//! ```
//!
//! All integers are little-endian. Every section must be consumed exactly and
//! nothing may follow the last one.

use std::fs;
use std::path::Path;

use crate::corpus::TimeGrid;
use crate::error::{Error, Result};
use crate::index::TripIndex;
use crate::tcsa::Tcsa;
use crate::wire::{Reader, Writer};
use crate::wmatrix::WaveletMatrix;

pub const MAGIC: &[u8; 5] = b"TCTR1";
pub const FORMAT_VERSION: u32 = 1;
const LITTLE_ENDIAN: u8 = 1;

/// Header fields and section sizes of a container, readable without decoding
/// the structures themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerInfo {
    pub version: u32,
    pub grid: TimeGrid,
    pub spatial_bytes: usize,
    pub time_bytes: usize,
}

pub fn to_bytes(index: &TripIndex) -> Vec<u8> {
    let mut spatial = Writer::new();
    index.tcsa().write(&mut spatial);
    let mut time = Writer::new();
    index.times().write(&mut time);

    let mut w = Writer::new();
    w.bytes(MAGIC);
    w.u32(FORMAT_VERSION);
    w.u8(LITTLE_ENDIAN);
    let g = index.grid();
    w.u32(g.slot_minutes);
    w.u32(g.day_type_count);
    w.u32(g.day_minutes);
    w.section(&spatial.buf);
    w.section(&time.buf);
    w.buf
}

struct Parsed<'a> {
    info: ContainerInfo,
    spatial: &'a [u8],
    time: &'a [u8],
}

fn parse_header(data: &[u8]) -> Result<Parsed<'_>> {
    let mut r = Reader::new(data);
    if r.take(MAGIC.len()).ok() != Some(&MAGIC[..]) {
        return Err(Error::integrity("not an index container (bad magic)"));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::integrity(format!("unsupported container version {version}")));
    }
    if r.u8()? != LITTLE_ENDIAN {
        return Err(Error::integrity("unsupported byte order flag"));
    }
    let grid =
        TimeGrid::new(r.u32()?, r.u32()?, r.u32()?).map_err(|e| Error::integrity(format!("bad time grid: {e}")))?;
    let spatial = r.section()?;
    let time = r.section()?;
    if !r.is_empty() {
        return Err(Error::integrity(format!("{} trailing bytes after the last section", r.remaining())));
    }
    let info = ContainerInfo { version, grid, spatial_bytes: spatial.len(), time_bytes: time.len() };
    Ok(Parsed { info, spatial, time })
}

pub fn inspect(data: &[u8]) -> Result<ContainerInfo> {
    parse_header(data).map(|p| p.info)
}

pub fn from_bytes(data: &[u8]) -> Result<TripIndex> {
    let p = parse_header(data)?;
    let mut r = Reader::new(p.spatial);
    let tcsa = Tcsa::read(&mut r)?;
    if !r.is_empty() {
        return Err(Error::integrity("spatial section longer than its record"));
    }
    let mut r = Reader::new(p.time);
    let times = WaveletMatrix::read(&mut r)?;
    if !r.is_empty() {
        return Err(Error::integrity("time section longer than its record"));
    }
    TripIndex::from_parts(tcsa, times, p.info.grid)
}

pub fn save(index: &TripIndex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_bytes(index))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<TripIndex> {
    from_bytes(&fs::read(path)?)
}
