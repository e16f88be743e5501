//! Factor a maximal antichain of a Boolean algebra into binary antichains
//! whose meets recover every piece.

use cutchoose::structures::{FiniteBooleanAlgebra, Mask};
use cutchoose::transforms::factor_antichain;

fn main() -> cutchoose::error::Result<()> {
    let b = FiniteBooleanAlgebra::with_atoms(6)?;
    let pieces: Vec<Mask> = ["{0}", "{1,2}", "{3}", "{4,5}"].iter().map(|s| s.parse().unwrap()).collect();
    let f = factor_antichain(&b, b.top(), &pieces, 2, 2)?;
    for i in 0..f.beta {
        println!("factor {i}: {:?}", f.antichain(i));
    }
    for (r, piece) in pieces.iter().enumerate() {
        let digits = [r / 2, r % 2];
        println!("{digits:?} -> {} (piece {piece})", f.meet(&digits));
    }
    f.check_identities(&b)?;
    println!("identities hold");
    Ok(())
}
