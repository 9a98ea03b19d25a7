//! A GTFS-lite network: stops, lines as ordered stop sequences, and per-line
//! service windows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::StopId;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stop {
    pub id: StopId,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub id: u32,
    pub stops: Vec<StopId>,
    /// Operating ranges `[start, end)` in minutes from the start of the day.
    /// Empty means the whole day.
    pub windows: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkDescription {
    pub stops: Vec<Stop>,
    pub lines: Vec<Line>,
}

impl NetworkDescription {
    pub fn stop_count(&self) -> u32 {
        self.stops.iter().map(|s| s.id.0).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stops.is_empty() {
            return Err(Error::parse(0, "network declares no stops"));
        }
        let known: BTreeSet<StopId> = self.stops.iter().map(|s| s.id).collect();
        for line in &self.lines {
            if line.stops.len() < 2 {
                return Err(Error::parse(0, format!("line {} has fewer than 2 stops", line.id)));
            }
            if let Some(s) = line.stops.iter().find(|s| !known.contains(s)) {
                return Err(Error::parse(0, format!("line {} references unknown stop {s}", line.id)));
            }
        }
        Ok(())
    }

    /// Parses `stop <id> <label>`, `line <id> <stop ids...>` and
    /// `window <line id> <start minute> <end minute>` records; `#` starts a
    /// comment line.
    pub fn parse<R: BufRead>(input: R) -> Result<Self> {
        let mut stops: Vec<Stop> = Vec::new();
        let mut stop_ids = BTreeSet::new();
        let mut lines: Vec<Line> = Vec::new();
        let mut line_index = BTreeMap::new();
        // windows may only name lines declared earlier
        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            let raw = raw?;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut tokens = text.split_whitespace();
            let kind = tokens.next().unwrap();
            let int = |t: Option<&str>, what: &str| -> Result<u32> {
                let t = t.ok_or_else(|| Error::parse(line_no, format!("missing {what}")))?;
                t.parse().map_err(|_| Error::parse(line_no, format!("non-integer {what} {t:?}")))
            };
            match kind {
                "stop" => {
                    let id = int(tokens.next(), "stop id")?;
                    if id == 0 {
                        return Err(Error::parse(line_no, "stop id 0 is reserved"));
                    }
                    if !stop_ids.insert(id) {
                        return Err(Error::parse(line_no, format!("duplicate stop {id}")));
                    }
                    let label = tokens.collect::<Vec<_>>().join(" ");
                    stops.push(Stop { id: StopId(id), label });
                }
                "line" => {
                    let id = int(tokens.next(), "line id")?;
                    let mut seq = Vec::new();
                    for t in tokens {
                        let s = int(Some(t), "stop id")?;
                        if !stop_ids.contains(&s) {
                            return Err(Error::parse(line_no, format!("line {id} references unknown stop {s}")));
                        }
                        seq.push(StopId(s));
                    }
                    if seq.len() < 2 {
                        return Err(Error::parse(line_no, format!("line {id} needs at least 2 stops")));
                    }
                    if line_index.insert(id, lines.len()).is_some() {
                        return Err(Error::parse(line_no, format!("duplicate line {id}")));
                    }
                    lines.push(Line { id, stops: seq, windows: Vec::new() });
                }
                "window" => {
                    let id = int(tokens.next(), "line id")?;
                    let start = int(tokens.next(), "start minute")?;
                    let end = int(tokens.next(), "end minute")?;
                    if start >= end {
                        return Err(Error::parse(line_no, "window start must precede its end"));
                    }
                    let &k = line_index
                        .get(&id)
                        .ok_or_else(|| Error::parse(line_no, format!("window for unknown line {id}")))?;
                    lines[k].windows.push((start, end));
                }
                other => {
                    return Err(Error::parse(line_no, format!("unknown record {other:?}")));
                }
            }
        }
        if stops.is_empty() {
            return Err(Error::parse(0, "network declares no stops"));
        }
        Ok(NetworkDescription { stops, lines })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.stops {
            let _ = writeln!(out, "stop {} {}", s.id, s.label);
        }
        for l in &self.lines {
            let _ = write!(out, "line {}", l.id);
            for s in &l.stops {
                let _ = write!(out, " {s}");
            }
            out.push('\n');
        }
        for l in &self.lines {
            for (a, b) in &l.windows {
                let _ = writeln!(out, "window {} {a} {b}", l.id);
            }
        }
        out
    }
}

/// Shape of a generated network.
#[derive(Clone, Copy, Debug)]
pub struct NetworkParams {
    pub stops: u32,
    /// Lines per direction; every line is also emitted reversed.
    pub lines: u32,
    pub min_line_len: usize,
    pub max_line_len: usize,
    /// Service window applied to every line, in minutes.
    pub window: Option<(u32, u32)>,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams { stops: 313, lines: 23, min_line_len: 20, max_line_len: 45, window: Some((360, 1440)) }
    }
}

/// Lays stops on a square grid and routes each line as a mostly straight walk
/// across it, so lines cross and share stops the way a city network does.
pub fn synthetic_network(params: &NetworkParams, seed: u64) -> Result<NetworkDescription> {
    if params.stops < 4 || params.lines == 0 || params.min_line_len < 2 || params.min_line_len > params.max_line_len {
        return Err(Error::Config(format!("unusable network parameters {params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (params.stops as f64).sqrt().ceil() as i64;
    let id_of = |r: i64, c: i64| -> Option<u32> {
        if r < 0 || c < 0 || r >= side || c >= side {
            return None;
        }
        let id = (r * side + c + 1) as u32;
        (id <= params.stops).then_some(id)
    };
    let dirs = [(0i64, 1i64), (1, 0), (0, -1), (-1, 0)];
    let mut lines = Vec::new();
    let mut attempts = 0;
    while lines.len() < 2 * params.lines as usize {
        attempts += 1;
        if attempts > 10_000 * params.lines as usize {
            return Err(Error::Config("could not route lines on the stop grid".into()));
        }
        let target = rng.random_range(params.min_line_len..=params.max_line_len);
        let main = dirs[rng.random_range(0..4)];
        // enter from the border opposite the main heading
        let across = rng.random_range(0..side);
        let (mut r, mut c) = match main {
            (0, 1) => (across, 0),
            (0, _) => (across, side - 1),
            (1, _) => (0, across),
            _ => (side - 1, across),
        };
        if id_of(r, c).is_none() {
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut seq = vec![StopId(id_of(r, c).unwrap())];
        seen.insert((r, c));
        while seq.len() < target {
            let mut options = vec![main; 3];
            options.push((main.1, main.0));
            options.push((-main.1, -main.0));
            options.shuffle(&mut rng);
            let next = options
                .iter()
                .map(|d| (r + d.0, c + d.1))
                .find(|&(nr, nc)| !seen.contains(&(nr, nc)) && id_of(nr, nc).is_some());
            let Some((nr, nc)) = next else { break };
            r = nr;
            c = nc;
            seen.insert((r, c));
            seq.push(StopId(id_of(r, c).unwrap()));
        }
        if seq.len() < params.min_line_len.min(side as usize) {
            continue;
        }
        let windows = params.window.into_iter().collect::<Vec<_>>();
        let mut back = seq.clone();
        back.reverse();
        let id = lines.len() as u32 + 1;
        lines.push(Line { id, stops: seq, windows: windows.clone() });
        lines.push(Line { id: id + 1, stops: back, windows });
    }
    let stops = (1..=params.stops).map(|id| Stop { id: StopId(id), label: format!("S{id}") }).collect();
    let net = NetworkDescription { stops, lines };
    net.validate()?;
    Ok(net)
}
