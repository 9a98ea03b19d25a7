//! Rank and select on a plain bit vector.

use tctr::bitseq::BitVector;

fn main() -> tctr::Result<()> {
    let bits: BitVector = (0..40).map(|i| i % 3 == 0).collect();
    println!("{} bits, {} ones", bits.len(), bits.count_ones());
    for i in [1, 10, 20, 40] {
        println!("rank1({i}) = {}  rank0({i}) = {}", bits.rank1(i)?, bits.rank0(i)?);
    }
    for j in [1, 5, 14] {
        println!("select1({j}) = {}", bits.select1(j)?);
    }
    println!("select0(3) = {}", bits.select0(3)?);
    println!("directory + payload: {} bytes", bits.serialized_bytes());
    Ok(())
}
