//! Query expressions evaluated by the index and by the brute-force oracle.

use tctr::corpus::example_corpus;
use tctr::oracle;
use tctr::{Query, TripIndex};

fn main() -> tctr::Result<()> {
    let corpus = example_corpus();
    let index = TripIndex::build(&corpus, 64)?;
    for text in
        ["starts-ends 1 3", "topk 2 bin", "uses-between 10 0 15", "starts-ends-between 1 3 0 4 strong", "ends 9"]
    {
        let q = Query::parse(text, None)?;
        let got = index.answer(&q)?;
        let want = oracle::evaluate(&corpus, &q)?;
        println!(
            "{text:<36} index {:<8} oracle {}",
            got.to_string().replace('\n', ","),
            want.to_string().replace('\n', ",")
        );
        for (label, r) in index.explain(&q)? {
            println!("    {label} -> [{}, {}]", r.start, r.end);
        }
    }
    match Query::parse("between 1 2", None) {
        Err(e) => println!("rejected: {e}"),
        Ok(q) => println!("unexpected {q}"),
    }
    Ok(())
}
