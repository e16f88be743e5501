//! Solve a game, export the winner's strategy as a table, verify the table
//! against every opposing line and refute the loser.

use cutchoose::engine::{verify_winning_strategy, GameInstance, Variant};
use cutchoose::solver::{refute, solve, Refutation, SolveOptions};
use cutchoose::structures::{GroundSet, MonotoneFamily};

fn main() -> cutchoose::error::Result<()> {
    let family = MonotoneFamily::size_at_most(GroundSet::new(5)?, 1);
    let game = GameInstance::u_game(family, 2, 2, Variant::Exact)?;
    let solved = solve(&game)?;
    println!("{}\nwinner: {}", game.summary(), solved.winner);

    let table = solved.strategy.to_table(10_000)?;
    println!("strategy table: {} positions", table.entries.len());
    let check = verify_winning_strategy(&game, &table.strategy(), table.owner, 1_000_000)?;
    println!("table verified: {}", check.is_win());

    let loser = solved.winner.opponent();
    match refute(&game, loser, &SolveOptions::default(), 1_000_000)? {
        Refutation::NoStrategy { opponent, plays } => {
            println!("{loser} has no winning strategy: {opponent} beats all {plays} lines")
        }
        Refutation::Found { .. } => println!("{loser} wins after all"),
    }
    Ok(())
}
