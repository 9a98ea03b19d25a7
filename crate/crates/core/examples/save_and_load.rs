//! Writing an index container to disk and reading it back.

use tctr::container;
use tctr::corpus::example_corpus;
use tctr::{Query, TripIndex};

fn main() -> tctr::Result<()> {
    let dir = std::env::temp_dir().join("tctr-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("example.tctr");
    let index = TripIndex::build(&example_corpus(), 256)?;
    container::save(&index, &path)?;
    let bytes = std::fs::read(&path)?;
    let info = container::inspect(&bytes)?;
    println!("{} bytes: {info:?}", bytes.len());
    let back = container::load(&path)?;
    let q = Query::parse("uses 3", None)?;
    println!("uses 3 before {} after {}", index.answer(&q)?, back.answer(&q)?);
    assert_eq!(back, index);
    Ok(())
}
