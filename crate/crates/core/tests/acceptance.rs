//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tctr::bench::{BenchConfig, WorkloadParams};
use tctr::cli;
use tctr::container;
use tctr::corpus::{
    example_corpus, generate_synthetic, sort_trips, synthetic_network, LengthParams, NetworkParams, StopId, TimeGrid,
    TripCorpus,
};
use tctr::oracle::{self, oracle_suffix_order};
use tctr::stats::SpaceReport;
use tctr::tcsa::{suffix_layout, SaRange, Tcsa};
use tctr::wmatrix::WaveletMatrix;
use tctr::{Query, TripIndex};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn running_example() -> Outcome {
    let t0 = Instant::now();
    let e = example_corpus();
    let sorted = sort_trips(&e);
    let tcsa = Tcsa::build(&sorted, 16).map_err(|e| e.to_string())?;
    for (i, want) in [(2, 8), (5, 12), (8, 10), (10, 14), (12, 16), (14, 2)] {
        let got = tcsa.psi(i).unwrap();
        ensure!(got == want, "Ψ[{i}] = {got}, expected {want}");
    }
    ensure!(tcsa.sections().rank1(12).unwrap() == 3, "rank1(D, 12) != 3");
    ensure!(tcsa.sections().rank1(16).unwrap() == 4, "rank1(D, 16) != 4");
    ensure!(tcsa.sections().select1(2).unwrap() == 8, "$-section is not [1, 7]");
    ensure!((1..=7).all(|i| tcsa.symbol_at(i).unwrap() == 0), "$-section holds stops");
    ensure!(
        tcsa.uses_range(StopId(3)).unwrap() == Some(SaRange { start: 14, end: 18 }),
        "stop-3 section is not [14, 18]"
    );
    let layout = suffix_layout(&sorted).unwrap();
    ensure!((layout.sa[21], layout.sa[22]) == (18, 26), "A[22], A[23] = {}, {}", layout.sa[21], layout.sa[22]);
    let naive = oracle_suffix_order(&e);
    ensure!(naive.psi[3] == 13 && tcsa.psi(4).unwrap() == 13, "Ψ[4] != 13");
    ensure!((1..=28).all(|i| tcsa.psi(i).unwrap() == naive.psi[i - 1]), "Ψ differs from the brute-force sort");
    let secs = t0.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.3} s");
    Ok(format!("{secs:.4} s"))
}

fn topk_golden() -> Outcome {
    let tcsa = Tcsa::build(&sort_trips(&example_corpus()), 16).map_err(|e| e.to_string())?;
    let top = vec![(StopId(3), 5)];
    ensure!(tcsa.topk_sequential(1).unwrap() == top, "sequential top-1 wrong");
    let (bin, trace) = tcsa.topk_binary_traced(1).unwrap();
    ensure!(bin == top, "binary top-1 is {bin:?}");
    let s = &trace.splits[0];
    ensure!(
        s.segment == SaRange { start: 8, end: 28 }
            && s.left == SaRange { start: 8, end: 20 }
            && s.right == SaRange { start: 21, end: 28 },
        "first split {s:?}"
    );
    Ok(format!("top-1 (3, 5), {} splits", trace.splits.len()))
}

fn oracle_equivalence() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let (corpora, per_type) = (200, 50);
    let mut checked = 0usize;
    for c in 0..corpora {
        let corpus = common::random_corpus(&mut rng, 500, 60);
        let rate = [16, 64, 256][c % 3];
        let index = TripIndex::build(&corpus, rate).map_err(|e| e.to_string())?;
        for family in 0..common::FAMILIES.len() {
            for _ in 0..per_type {
                let q = common::random_query(&mut rng, &corpus, family);
                let got = index.answer(&q).map_err(|e| format!("{q}: {e}"))?;
                let want = oracle::evaluate(&corpus, &q).map_err(|e| format!("{q}: {e}"))?;
                ensure!(got == want, "corpus {c} ({} trips), {q}: index {got:?}, oracle {want:?}", corpus.len());
                checked += 1;
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    ensure!(secs < 300.0, "took {secs:.1} s");
    Ok(format!("{corpora} corpora, {checked} queries over {} families, {secs:.1} s", common::FAMILIES.len()))
}

fn structural_invariants() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
    let strategy = (any::<u64>(), prop_oneof![Just(16usize), Just(64), Just(256)]);
    runner
        .run(&strategy, |(seed, rate)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let corpus = common::random_corpus(&mut rng, 200, 60);
            common::check_structure(&corpus, rate).map_err(|e| TestCaseError::fail(format!("seed {seed}: {e}")))
        })
        .map_err(|e| e.to_string())?;
    Ok("200 generated corpora: closure, monotone sections, contiguity, sorted starts, Ψ decoding".into())
}

fn wavelet_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut queries = [0usize; 5];
    let shapes = [(100_000usize, 4096u32), (100_000, 2304), (60_000, 1), (30_000, 3), (100_000, 17), (5_000, 4096)];
    for (n, sigma) in shapes {
        let seq: Vec<u32> = (0..n).map(|_| rng.random_range(0..sigma)).collect();
        let wm = WaveletMatrix::build(&seq, sigma).map_err(|e| e.to_string())?;
        let mut occ = vec![Vec::new(); sigma as usize];
        for (k, &v) in seq.iter().enumerate() {
            occ[v as usize].push(k + 1);
        }
        for _ in 0..2_000 {
            let i = rng.random_range(1..=n);
            ensure!(wm.access(i).unwrap() == seq[i - 1], "access({i})");
            let c = if rng.random_bool(0.8) { seq[rng.random_range(0..n)] } else { rng.random_range(0..sigma) };
            let rank = seq[..i].iter().filter(|&&v| v == c).count();
            ensure!(wm.rank(c, i).unwrap() == rank, "rank({c}, {i})");
            let list = &occ[c as usize];
            if !list.is_empty() {
                let j = rng.random_range(0..list.len());
                ensure!(wm.select(c, j + 1).unwrap() == list[j], "select({c}, {})", j + 1);
            }
            ensure!(wm.select(c, list.len() + 1).is_err(), "select past the last {c}");
            let a = rng.random_range(1..=n);
            let b = rng.random_range(a..=n);
            let y1 = rng.random_range(0..sigma);
            let y2 = rng.random_range(y1..sigma);
            let want = seq[a - 1..b].iter().filter(|&&v| y1 <= v && v <= y2).count();
            ensure!(wm.count(a, b, y1, y2).unwrap() == want, "count({a}, {b}, {y1}, {y2})");
            let b = (a + rng.random_range(0..3_000)).min(n);
            let mut got = wm.report(a, b, y1, y2).unwrap();
            got.sort_unstable();
            let want: Vec<(usize, u32)> =
                (a..=b).filter(|&k| (y1..=y2).contains(&seq[k - 1])).map(|k| (k, seq[k - 1])).collect();
            ensure!(got == want, "report({a}, {b}, {y1}, {y2})");
            for q in &mut queries {
                *q += 1;
            }
        }
    }
    Ok(format!(
        "{} sequences (n <= 100000, sigma <= 4096), {} queries of each of access/rank/select/count/report",
        shapes.len(),
        queries[0]
    ))
}

fn hundred_k_corpus() -> TripCorpus {
    let net = synthetic_network(&NetworkParams::default(), 1).unwrap();
    generate_synthetic(&net, 100_000, 1, LengthParams::default(), TimeGrid::default()).unwrap()
}

fn space_behavior(corpus: &TripCorpus) -> Outcome {
    let mut reports = Vec::new();
    for rate in [16, 64, 256] {
        reports.push(SpaceReport::of(&TripIndex::build(corpus, rate).map_err(|e| e.to_string())?));
    }
    let line = reports
        .iter()
        .map(|r| format!("Ψ{} {:.2}% ({} B)", r.sample_rate, r.ratio_percent(), r.stops_index_bytes))
        .collect::<Vec<_>>()
        .join(", ");
    ensure!(
        reports[0].stops_index_bytes > reports[1].stops_index_bytes
            && reports[1].stops_index_bytes > reports[2].stops_index_bytes,
        "sizes do not strictly decrease: {line}"
    );
    ensure!(reports[2].ratio_percent() <= 50.0, "ratio at Ψ256 above 50%: {line}");
    Ok(format!("baseline {} B; {line}", reports[0].plain_baseline_bytes))
}

fn latency_behavior(corpus: &TripCorpus) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("100k.tctr");
    let csv = dir.path().join("bench.csv");
    container::save(&TripIndex::build(corpus, 64).map_err(|e| e.to_string())?, &path).map_err(|e| e.to_string())?;
    let params = WorkloadParams { queries_per_type: 10_000, max_k: 1000, ..WorkloadParams::default() };
    let table = cli::cmd_bench(&path, &params, &BenchConfig::default(), Some(&csv)).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&csv).map_err(|e| e.to_string())?;
    let mut worst_plain: (f64, String) = (0.0, String::new());
    let mut worst_topk: (f64, String) = (0.0, String::new());
    for row in text.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        let (name, mean, count): (&str, f64, usize) = (f[0], f[1].parse().unwrap(), f[3].parse().unwrap());
        ensure!(count == 10_000, "{name}: {count} queries");
        let worst = if name.starts_with("topk") { &mut worst_topk } else { &mut worst_plain };
        if mean > worst.0 {
            *worst = (mean, name.to_string());
        }
    }
    ensure!(worst_plain.0 < 100.0, "{} averages {:.2} µs", worst_plain.1, worst_plain.0);
    ensure!(worst_topk.0 < 50_000.0, "{} averages {:.2} µs", worst_topk.1, worst_topk.0);
    let overhead: Vec<String> = table
        .lines()
        .skip_while(|l| !l.starts_with("time restriction"))
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    Ok(format!(
        "slowest counting {} {:.2} µs, slowest top-k {} {:.2} µs; time overhead: {}",
        worst_plain.1,
        worst_plain.0,
        worst_topk.1,
        worst_topk.0,
        overhead.join(", ")
    ))
}

fn serialization_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for c in 0..20 {
        let corpus = common::random_corpus(&mut rng, 300, 60);
        let queries: Vec<Query> = (0..common::FAMILIES.len())
            .flat_map(|f| (0..20).map(move |_| f))
            .map(|f| common::random_query(&mut rng, &corpus, f))
            .collect();
        for rate in [16, 64, 256] {
            let index = TripIndex::build(&corpus, rate).map_err(|e| e.to_string())?;
            let path = dir.path().join(format!("c{c}-{rate}.tctr"));
            container::save(&index, &path).map_err(|e| e.to_string())?;
            let back = container::load(&path).map_err(|e| e.to_string())?;
            ensure!(back == index, "corpus {c} rate {rate}: loaded index differs");
            ensure!(container::to_bytes(&back) == std::fs::read(&path).unwrap(), "re-serialization differs");
            for q in &queries {
                ensure!(back.answer(q).unwrap() == index.answer(q).unwrap(), "corpus {c} rate {rate}: {q}");
                compared += 1;
            }
        }
    }
    Ok(format!("20 corpora x 3 rates, {compared} answers identical after load"))
}

fn main() {
    let corpus = std::cell::OnceCell::new();
    let big = || corpus.get_or_init(hundred_k_corpus);
    let criteria: Vec<Criterion> = vec![
        ("1 running example golden values", Box::new(running_example)),
        ("2 top-k golden values", Box::new(topk_golden)),
        ("3 oracle equivalence", Box::new(oracle_equivalence)),
        ("4 structural invariants", Box::new(structural_invariants)),
        ("5 wavelet matrix vs linear scan", Box::new(wavelet_suite)),
        ("6 space on 100k trips", Box::new(|| space_behavior(big()))),
        ("7 latency on 100k trips", Box::new(|| latency_behavior(big()))),
        ("8 serialization round-trip", Box::new(serialization_roundtrip)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let t0 = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(msg.unwrap_or_else(|| "panicked".into()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{secs:.2}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.2}s]: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
