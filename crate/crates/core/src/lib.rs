//! Compressed, self-indexed representation of trips over a transport network.
//!
//! The spatial side is a compressed suffix array over the concatenated stop
//! sequences in which every trip is read as a cycle, so Ψ walks from a trip's
//! separator back to its first stop. The temporal side is a wavelet matrix of
//! time codes aligned with suffix-array positions. Together they count trips
//! starting, ending, or passing through stops, optionally restricted to time
//! intervals, without decompressing anything.

pub mod bench;
pub mod bitseq;
pub mod cli;
pub mod container;
pub mod corpus;
pub mod error;
pub mod index;
pub mod oracle;
pub mod query;
pub mod stats;
pub mod tcsa;
mod wire;
pub mod wmatrix;

pub use corpus::{StopId, TimeCode, TimeGrid, Trip, TripCorpus};
pub use error::{Error, Result};
pub use index::{Semantics, TimeInterval, TripIndex};
pub use query::{Answer, Query};
