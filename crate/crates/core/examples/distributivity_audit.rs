//! Decide distributivity below a set directly, then cross-check it and the
//! related game equivalences on the same instance.

use cutchoose::analysis::{check_distributivity, equivalence_audit, DistributivityVariant};
use cutchoose::engine::{Flags, GameFamily, GameInstance, GameParams, Start, Structure, Variant, Width};
use cutchoose::solver::SolveOptions;
use cutchoose::structures::{GroundSet, Ideal, Mask};

fn main() -> cutchoose::error::Result<()> {
    let ground = GroundSet::new(5)?;
    let kernel: Mask = "{0,1}".parse().unwrap();
    let ideal = Ideal::generated_by(ground, &[kernel])?;
    let structure = Structure::Sets(ideal.family().clone());
    let start = Start::Set(ground.full());

    let verdict = check_distributivity(&structure, start, 2, Width::Unbounded, DistributivityVariant::Plain)?;
    println!("plain distributivity at 2 levels: {}", verdict.holds());

    let game = GameInstance::new(
        structure,
        GameParams {
            family: GameFamily::GIdeal,
            start,
            rounds: 2,
            width: Width::Unbounded,
            variant: Variant::Exact,
            flags: Flags::default(),
        },
    )?;
    print!("{}", equivalence_audit(&game, &SolveOptions::default())?.render());
    Ok(())
}
