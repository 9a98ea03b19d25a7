//! Textual query expressions and their evaluation against an index.
//!
//! ```text
//! starts X | ends X | starts-ends X Y | uses X | topk K [seq|bin]
//! starts-between X T1 T2 | ends-between X T1 T2 | uses-between X T1 T2
//! starts-ends-between X Y T1 T2 (strong|weak)
//! ```

use std::fmt;

use crate::corpus::{StopId, TimeGrid};
use crate::error::{Error, Result};
use crate::index::{Semantics, TimeInterval, TripIndex};
use crate::tcsa::SaRange;

pub const GRAMMAR: &str = "starts X | ends X | starts-ends X Y | uses X | topk K [seq|bin] | \
starts-between X T1 T2 | ends-between X T1 T2 | uses-between X T1 T2 | \
starts-ends-between X Y T1 T2 (strong|weak)";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopKAlgo {
    Sequential,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    Starts(StopId),
    Ends(StopId),
    StartsEnds(StopId, StopId),
    Uses(StopId),
    TopK(usize, TopKAlgo),
    StartsBetween(StopId, TimeInterval),
    EndsBetween(StopId, TimeInterval),
    UsesBetween(StopId, TimeInterval),
    StartsEndsBetween(StopId, StopId, TimeInterval, Semantics),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Count(usize),
    Ranking(Vec<(StopId, usize)>),
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Count(c) => write!(f, "{c}"),
            Answer::Ranking(rows) => {
                for (k, (s, freq)) in rows.iter().enumerate() {
                    if k > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{s} {freq}")?;
                }
                Ok(())
            }
        }
    }
}

impl Query {
    /// Parses an expression. With `clock`, time arguments are `DAYTYPE/HH:MM`
    /// converted through that grid; otherwise they are raw codes.
    pub fn parse(text: &str, clock: Option<&TimeGrid>) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let bad = |msg: &str| Error::usage(format!("{msg} in {text:?}; grammar: {GRAMMAR}"));
        let stop = |t: &str| -> Result<StopId> { t.parse().map(StopId).map_err(|_| bad(&format!("bad stop {t:?}"))) };
        let time = |t: &str| -> Result<u32> {
            match clock {
                Some(grid) => grid.parse_clock(t).map(|c| c.0),
                None => t.parse().map_err(|_| bad(&format!("bad time code {t:?}"))),
            }
        };
        let interval = |a: &str, b: &str| -> Result<TimeInterval> { TimeInterval::new(time(a)?, time(b)?) };
        let Some((&head, args)) = tokens.split_first() else {
            return Err(bad("empty query"));
        };
        let q = match (head, args) {
            ("starts", [x]) => Query::Starts(stop(x)?),
            ("ends", [x]) => Query::Ends(stop(x)?),
            ("starts-ends", [x, y]) => Query::StartsEnds(stop(x)?, stop(y)?),
            ("uses", [x]) => Query::Uses(stop(x)?),
            ("topk", [k, rest @ ..]) if rest.len() <= 1 => {
                let k = k.parse().map_err(|_| bad(&format!("bad k {k:?}")))?;
                let algo = match rest.first().copied() {
                    None | Some("seq") => TopKAlgo::Sequential,
                    Some("bin") => TopKAlgo::Binary,
                    Some(other) => return Err(bad(&format!("unknown top-k variant {other:?}"))),
                };
                Query::TopK(k, algo)
            }
            ("starts-between", [x, a, b]) => Query::StartsBetween(stop(x)?, interval(a, b)?),
            ("ends-between", [x, a, b]) => Query::EndsBetween(stop(x)?, interval(a, b)?),
            ("uses-between", [x, a, b]) => Query::UsesBetween(stop(x)?, interval(a, b)?),
            ("starts-ends-between", [x, y, a, b, s]) => {
                let sem = match *s {
                    "strong" => Semantics::Strong,
                    "weak" => Semantics::Weak,
                    other => return Err(bad(&format!("unknown semantics {other:?}"))),
                };
                Query::StartsEndsBetween(stop(x)?, stop(y)?, interval(a, b)?, sem)
            }
            _ => return Err(bad("unrecognized query")),
        };
        Ok(q)
    }

    /// Short name of the query family, as used in benchmark tables.
    pub fn family(&self) -> &'static str {
        match self {
            Query::Starts(_) => "starts",
            Query::Ends(_) => "ends",
            Query::StartsEnds(..) => "starts-ends",
            Query::Uses(_) => "uses",
            Query::TopK(_, TopKAlgo::Sequential) => "topk-seq",
            Query::TopK(_, TopKAlgo::Binary) => "topk-bin",
            Query::StartsBetween(..) => "starts-between",
            Query::EndsBetween(..) => "ends-between",
            Query::UsesBetween(..) => "uses-between",
            Query::StartsEndsBetween(.., Semantics::Strong) => "starts-ends-strong",
            Query::StartsEndsBetween(.., Semantics::Weak) => "starts-ends-weak",
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Query::Starts(x) => write!(f, "starts {x}"),
            Query::Ends(x) => write!(f, "ends {x}"),
            Query::StartsEnds(x, y) => write!(f, "starts-ends {x} {y}"),
            Query::Uses(x) => write!(f, "uses {x}"),
            Query::TopK(k, TopKAlgo::Sequential) => write!(f, "topk {k} seq"),
            Query::TopK(k, TopKAlgo::Binary) => write!(f, "topk {k} bin"),
            Query::StartsBetween(x, iv) => write!(f, "starts-between {x} {} {}", iv.t1, iv.t2),
            Query::EndsBetween(x, iv) => write!(f, "ends-between {x} {} {}", iv.t1, iv.t2),
            Query::UsesBetween(x, iv) => write!(f, "uses-between {x} {} {}", iv.t1, iv.t2),
            Query::StartsEndsBetween(x, y, iv, sem) => {
                let s = if sem == Semantics::Strong { "strong" } else { "weak" };
                write!(f, "starts-ends-between {x} {y} {} {} {s}", iv.t1, iv.t2)
            }
        }
    }
}

impl TripIndex {
    pub fn answer(&self, q: &Query) -> Result<Answer> {
        let count = match *q {
            Query::Starts(x) => self.starts_at(x)?,
            Query::Ends(x) => self.ends_at(x)?,
            Query::StartsEnds(x, y) => self.starts_ends(x, y)?,
            Query::Uses(x) => self.uses(x)?,
            Query::TopK(k, TopKAlgo::Sequential) => return Ok(Answer::Ranking(self.tcsa().topk_sequential(k)?)),
            Query::TopK(k, TopKAlgo::Binary) => return Ok(Answer::Ranking(self.tcsa().topk_binary(k)?)),
            Query::StartsBetween(x, iv) => self.starts_between(x, iv)?,
            Query::EndsBetween(x, iv) => self.ends_between(x, iv)?,
            Query::UsesBetween(x, iv) => self.uses_between(x, iv)?,
            Query::StartsEndsBetween(x, y, iv, sem) => self.starts_ends_between(x, y, iv, sem)?,
        };
        Ok(Answer::Count(count))
    }

    /// Suffix-array ranges a query works on, labelled by pattern.
    pub fn explain(&self, q: &Query) -> Result<Vec<(String, SaRange)>> {
        let t = self.tcsa();
        let mut out = Vec::new();
        match *q {
            Query::Starts(x) | Query::StartsBetween(x, _) => {
                if let Some(r) = t.count_starts_at(x)?.1 {
                    out.push((format!("${x}"), r));
                }
            }
            Query::Ends(x) | Query::EndsBetween(x, _) => {
                if let Some(r) = t.count_ends_at(x)?.1 {
                    out.push((format!("{x}$"), r));
                }
            }
            Query::Uses(x) | Query::UsesBetween(x, _) => {
                if let Some(r) = t.uses_range(x)? {
                    out.push((format!("{x}"), r));
                }
            }
            Query::StartsEnds(x, y) | Query::StartsEndsBetween(x, y, ..) => {
                if let Some((yx, xy)) = t.range_start_end(x, y)? {
                    out.push((format!("{y}${x}"), yx));
                    out.push((format!("${x}{y}"), xy));
                }
            }
            Query::TopK(..) => {
                if t.vocabulary().len() > 1 {
                    let start = t.sections().select1(2)?;
                    out.push(("stops".into(), SaRange { start, end: t.len() }));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::example_corpus;

    #[test]
    fn parse_and_print_roundtrip() {
        for text in [
            "starts 1",
            "ends 7",
            "starts-ends 1 3",
            "uses 3",
            "topk 5 seq",
            "topk 5 bin",
            "starts-between 1 0 4",
            "ends-between 7 0 10",
            "uses-between 3 2 9",
            "starts-ends-between 1 3 0 4 strong",
            "starts-ends-between 1 3 4 6 weak",
        ] {
            let q = Query::parse(text, None).unwrap();
            assert_eq!(q.to_string(), text);
        }
        assert_eq!(Query::parse("topk 3", None).unwrap(), Query::TopK(3, TopKAlgo::Sequential));
    }

    #[test]
    fn malformed_expressions() {
        for text in [
            "",
            "starts",
            "starts x",
            "topk 1 fast",
            "starts-between 1 5 4",
            "nearest 3",
            "starts-ends-between 1 3 0 4 maybe",
        ] {
            let err = Query::parse(text, None).unwrap_err();
            assert!(matches!(err, Error::Usage(_)), "{text:?}");
        }
        let err = Query::parse("starts", None).unwrap_err().to_string();
        assert!(err.contains("starts-ends-between"), "{err}");
    }

    #[test]
    fn clock_times() {
        let grid = TimeGrid::default();
        let q = Query::parse("uses-between 3 3/09:15 3/10:00", Some(&grid)).unwrap();
        assert_eq!(q, Query::UsesBetween(StopId(3), TimeInterval::new(975, 984).unwrap()));
    }

    #[test]
    fn answers_on_the_example() {
        let idx = TripIndex::build(&example_corpus(), 64).unwrap();
        let ask = |t: &str| idx.answer(&Query::parse(t, None).unwrap()).unwrap();
        assert_eq!(ask("starts-ends 1 3"), Answer::Count(2));
        assert_eq!(ask("topk 1").to_string(), "3 5");
        assert_eq!(ask("starts-ends-between 1 3 0 4 strong"), Answer::Count(1));
        assert_eq!(ask("uses 3"), Answer::Count(5));
        let ranges = idx.explain(&Query::parse("starts-ends 1 3", None).unwrap()).unwrap();
        assert_eq!(ranges.len(), 2);
        assert_eq!(ranges[1].1, SaRange { start: 2, end: 3 });
    }
}
