//! The cyclic suffix order of the six-trip example, printed as a table.

use tctr::corpus::{example_corpus, sort_trips};
use tctr::tcsa::{suffix_layout, Tcsa};

fn main() -> tctr::Result<()> {
    let sorted = sort_trips(&example_corpus());
    let layout = suffix_layout(&sorted)?;
    let tcsa = Tcsa::build(&sorted, 16)?;
    println!("  i  A[i]  S[A[i]]  Psi[i]  D[i]");
    for i in 1..=tcsa.len() {
        let sym = tcsa.symbol_at(i)?;
        let shown = if sym == 0 { "$".to_string() } else { sym.to_string() };
        let d = tcsa.sections().access(i)? as u8;
        println!("{i:>3}  {:>4}  {shown:>7}  {:>6}  {d:>4}", layout.sa[i - 1], tcsa.psi(i)?);
    }
    println!("vocabulary {:?}", tcsa.vocabulary());
    println!("trip 2 read back: {:?}", tcsa.trip_stops(2)?);
    Ok(())
}
