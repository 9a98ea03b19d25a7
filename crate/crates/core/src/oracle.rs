//! Brute-force ground truth computed from the raw trips, with no succinct
//! structure involved. The predicates here are written out independently of
//! the index code; any disagreement is a bug in the index.

use std::cmp::Ordering;

use crate::corpus::{StopId, Trip, TripCorpus};
use crate::error::{Error, Result};
use crate::index::{Semantics, TimeInterval};
use crate::query::{Answer, Query};

/// A count, with the input ordinals of the matching trips where that makes sense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub count: usize,
    pub trips: Option<Vec<usize>>,
}

impl OracleAnswer {
    fn from_trips(trips: Vec<usize>) -> Self {
        OracleAnswer { count: trips.len(), trips: Some(trips) }
    }
}

fn check_stop(corpus: &TripCorpus, x: StopId) -> Result<()> {
    if x.0 == 0 || x.0 > corpus.stop_count() {
        return Err(Error::usage(format!("stop {x} outside 1..={}", corpus.stop_count())));
    }
    Ok(())
}

fn check_interval(corpus: &TripCorpus, iv: TimeInterval) -> Result<()> {
    if iv.t1 > iv.t2 || iv.t2.0 >= corpus.grid().alphabet_size() {
        return Err(Error::usage(format!("time interval [{}, {}] out of range", iv.t1, iv.t2)));
    }
    Ok(())
}

fn select(corpus: &TripCorpus, pred: impl Fn(&Trip) -> bool) -> OracleAnswer {
    OracleAnswer::from_trips(corpus.trips().iter().filter(|t| pred(t)).map(|t| t.input_ordinal).collect())
}

/// Counting queries (everything but top-k) by linear scan.
pub fn oracle_count(corpus: &TripCorpus, query: &Query) -> Result<OracleAnswer> {
    let first = |t: &Trip| t.stops()[0];
    let last = |t: &Trip| *t.stops().last().unwrap();
    let start = |t: &Trip| t.times()[0];
    let end = |t: &Trip| *t.times().last().unwrap();
    let ans = match *query {
        Query::Starts(x) => {
            check_stop(corpus, x)?;
            select(corpus, |t| first(t) == x)
        }
        Query::Ends(x) => {
            check_stop(corpus, x)?;
            select(corpus, |t| last(t) == x)
        }
        Query::StartsEnds(x, y) => {
            check_stop(corpus, x)?;
            check_stop(corpus, y)?;
            select(corpus, |t| first(t) == x && last(t) == y)
        }
        Query::Uses(x) => {
            check_stop(corpus, x)?;
            let count = corpus.trips().iter().map(|t| t.stops().iter().filter(|&&s| s == x).count()).sum();
            OracleAnswer { count, trips: None }
        }
        Query::StartsBetween(x, iv) => {
            check_stop(corpus, x)?;
            check_interval(corpus, iv)?;
            select(corpus, |t| first(t) == x && iv.contains(start(t)))
        }
        Query::EndsBetween(x, iv) => {
            check_stop(corpus, x)?;
            check_interval(corpus, iv)?;
            select(corpus, |t| last(t) == x && iv.contains(end(t)))
        }
        Query::UsesBetween(x, iv) => {
            check_stop(corpus, x)?;
            check_interval(corpus, iv)?;
            let count = corpus
                .trips()
                .iter()
                .flat_map(|t| t.stops().iter().zip(t.times()))
                .filter(|&(&s, &c)| s == x && iv.contains(c))
                .count();
            OracleAnswer { count, trips: None }
        }
        Query::StartsEndsBetween(x, y, iv, sem) => {
            check_stop(corpus, x)?;
            check_stop(corpus, y)?;
            check_interval(corpus, iv)?;
            select(corpus, |t| {
                first(t) == x
                    && last(t) == y
                    && match sem {
                        Semantics::Strong => iv.contains(start(t)) && iv.contains(end(t)),
                        Semantics::Weak => start(t) <= iv.t2 && end(t) >= iv.t1,
                    }
            })
        }
        Query::TopK(..) => return Err(Error::usage("top-k has no count; use oracle_topk")),
    };
    Ok(ans)
}

/// Stop frequencies (occurrences), highest first, ties to the smaller id;
/// stops that never occur are left out.
pub fn oracle_topk(corpus: &TripCorpus, k: usize) -> Result<Vec<(StopId, usize)>> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    let mut freq = vec![0usize; corpus.stop_count() as usize + 1];
    for t in corpus.trips() {
        for s in t.stops() {
            freq[s.0 as usize] += 1;
        }
    }
    let mut rows: Vec<(StopId, usize)> =
        freq.iter().enumerate().filter(|&(_, &f)| f > 0).map(|(s, &f)| (StopId(s as u32), f)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    rows.truncate(k);
    Ok(rows)
}

pub fn evaluate(corpus: &TripCorpus, query: &Query) -> Result<Answer> {
    match *query {
        Query::TopK(k, _) => Ok(Answer::Ranking(oracle_topk(corpus, k)?)),
        _ => Ok(Answer::Count(oracle_count(corpus, query)?.count)),
    }
}

/// The text, suffix array, Ψ and `D` produced by a direct suffix sort.
/// All positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveSuffixOrder {
    pub text: Vec<u32>,
    pub sa: Vec<usize>,
    pub psi: Vec<usize>,
    pub d: Vec<bool>,
}

/// Materializes the concatenation and sorts every position by walking the
/// cyclic successors symbol by symbol.
pub fn oracle_suffix_order(corpus: &TripCorpus) -> NaiveSuffixOrder {
    let mut trips: Vec<&Trip> = corpus.trips().iter().collect();
    trips.sort_by(|a, b| {
        (a.stops()[0], a.stops().last(), a.times()[0], &a.stops()[1..], a.input_ordinal).cmp(&(
            b.stops()[0],
            b.stops().last(),
            b.times()[0],
            &b.stops()[1..],
            b.input_ordinal,
        ))
    });
    let mut text = Vec::new();
    let mut owner = Vec::new(); // trip rank per position, 0 for the terminator
    let mut begin = Vec::new(); // first position of the owning trip
    for (k, t) in trips.iter().enumerate() {
        let b = text.len();
        for s in t.stops() {
            text.push(s.0);
            owner.push(k + 1);
            begin.push(b);
        }
        text.push(0);
        owner.push(k + 1);
        begin.push(b);
    }
    text.push(0);
    owner.push(0);
    begin.push(text.len() - 1);
    let n = text.len();
    let next = |p: usize| if text[p] == 0 { begin[p] } else { p + 1 };

    let cmp = |a: usize, b: usize| -> Ordering {
        let (mut p, mut q) = (a, b);
        loop {
            let (x, y) = (text[p], text[q]);
            if x == 0 && y == 0 {
                return owner[a].cmp(&owner[b]);
            }
            if x != y {
                return x.cmp(&y);
            }
            p = next(p);
            q = next(q);
        }
    };
    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_by(|&a, &b| cmp(a, b));
    let mut inv = vec![0; n];
    for (i, &p) in sa.iter().enumerate() {
        inv[p] = i;
    }
    let psi = sa.iter().map(|&p| inv[next(p)] + 1).collect();
    let d = (0..n).map(|i| i == 0 || text[sa[i]] != text[sa[i - 1]]).collect();
    NaiveSuffixOrder { text, sa: sa.iter().map(|p| p + 1).collect(), psi, d }
}
