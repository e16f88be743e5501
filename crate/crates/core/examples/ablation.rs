//! Drop the maximality requirement on cuts and watch Cut win a game that
//! Choose wins once cuts must be maximal.

use cutchoose::analysis::maximality_ablation;
use cutchoose::engine::{Flags, GameFamily, GameInstance, GameParams, Start, Structure, Variant, Width};
use cutchoose::solver::SolveOptions;
use cutchoose::structures::{GroundSet, MonotoneFamily};

fn main() -> cutchoose::error::Result<()> {
    let ground = GroundSet::new(4)?;
    let game = GameInstance::new(
        Structure::Sets(MonotoneFamily::size_at_most(ground, 0)),
        GameParams {
            family: GameFamily::GIdeal,
            start: Start::Set(ground.full()),
            rounds: 2,
            width: Width::Unbounded,
            variant: Variant::Exact,
            flags: Flags::default(),
        },
    )?;
    let r = maximality_ablation(&game, 1_000_000, &SolveOptions::default())?;
    println!("{}\nwithout maximality: {}", r.instance, r.ablated);
    println!("Cut forces the disjoint pair {} / {}: verified {}", r.pair.0, r.pair.1, r.forcing_verified);
    println!("with maximal cuts required, {} wins", r.restored_winner);
    Ok(())
}
