//! Spatio-temporal counts on the running example.

use tctr::corpus::{example_corpus, StopId};
use tctr::index::{Semantics, TimeInterval, TripIndex};

fn main() -> tctr::Result<()> {
    let index = TripIndex::build(&example_corpus(), 16)?;
    let iv = |a, b| TimeInterval::new(a, b);
    println!("start at 1 in [0,4]:  {}", index.starts_between(StopId(1), iv(0, 4)?)?);
    println!("end at 7 in [0,10]:   {}", index.ends_between(StopId(7), iv(0, 10)?)?);
    println!("visits of 3 in [2,9]: {}", index.uses_between(StopId(3), iv(2, 9)?)?);
    for (a, b) in [(0, 4), (4, 6), (0, 20)] {
        let strong = index.starts_ends_between(StopId(1), StopId(3), iv(a, b)?, Semantics::Strong)?;
        let weak = index.starts_ends_between(StopId(1), StopId(3), iv(a, b)?, Semantics::Weak)?;
        println!("1 -> 3 in [{a},{b}]: strong {strong}, weak {weak}");
    }
    Ok(())
}
