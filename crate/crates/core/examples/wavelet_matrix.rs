//! Access, rank, select, range counting and reporting on a wavelet matrix.

use tctr::wmatrix::WaveletMatrix;

fn main() -> tctr::Result<()> {
    let seq = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9];
    let wm = WaveletMatrix::build(&seq, 10)?;
    println!("n = {}, levels = {}", wm.len(), wm.level_count());
    println!("access(6) = {}", wm.access(6)?);
    println!("rank(5, 11) = {}", wm.rank(5, 11)?);
    println!("select(9, 2) = {}", wm.select(9, 2)?);
    println!("codes 3..=6 in [2, 10]: {}", wm.count(2, 10, 3, 6)?);
    println!("report: {:?}", wm.report(2, 10, 3, 6)?);
    Ok(())
}
