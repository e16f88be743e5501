//! Least ground-set size at which Choose wins the singleton game, for two
//! and three pieces per cut.

use cutchoose::analysis::threshold_scan;
use cutchoose::engine::Variant;
use cutchoose::solver::SolveOptions;
use cutchoose::structures::FamilySpec;

fn main() -> cutchoose::error::Result<()> {
    let singletons = FamilySpec::SizeAtMost { k: 1 };
    for (width, rounds) in [(2usize, 1..=4), (3, 1..=2)] {
        let top = width.pow(*rounds.end() as u32) + 1;
        let table = threshold_scan(&singletons, width, rounds, 2..=top, Variant::Exact, &SolveOptions::default())?;
        print!("{}", table.render());
        println!("Cut wins exactly when m <= {width}^n: {}\n", table.matches_law(|n| width.pow(n as u32)));
    }
    Ok(())
}
