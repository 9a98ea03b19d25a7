//! Spatial counting: starts, ends, start-end pairs and stop usage.

use tctr::corpus::{example_corpus, sort_trips, StopId};
use tctr::tcsa::Tcsa;

fn main() -> tctr::Result<()> {
    let tcsa = Tcsa::build(&sort_trips(&example_corpus()), 64)?;
    for x in 1..=10 {
        let s = StopId(x);
        println!(
            "stop {x:>2}: starts {}  ends {}  uses {}",
            tcsa.count_starts_at(s)?.0,
            tcsa.count_ends_at(s)?.0,
            tcsa.count_uses(s)?
        );
    }
    if let Some((yx, xy)) = tcsa.range_start_end(StopId(1), StopId(3))? {
        println!("3$1 at {}..={}, $13 at {}..={}", yx.start, yx.end, xy.start, xy.end);
    }
    println!("pattern 2 3 -> {:?}", tcsa.pattern_range(&[2, 3])?);
    println!("pattern 3 $ -> {:?}", tcsa.pattern_range(&[3, 0])?);
    Ok(())
}
