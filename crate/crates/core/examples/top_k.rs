//! Most used stops, both ways, with the binary variant's partition steps.

use tctr::corpus::{example_corpus, sort_trips};
use tctr::tcsa::Tcsa;

fn main() -> tctr::Result<()> {
    let tcsa = Tcsa::build(&sort_trips(&example_corpus()), 16)?;
    println!("sequential top-3: {:?}", tcsa.topk_sequential(3)?);
    let (top, trace) = tcsa.topk_binary_traced(3)?;
    println!("binary top-3:     {top:?}");
    for s in &trace.splits {
        println!(
            "[{}, {}] -> [{}, {}] / [{}, {}]",
            s.segment.start, s.segment.end, s.left.start, s.left.end, s.right.start, s.right.end
        );
    }
    Ok(())
}
