//! Generate a small seeded corpus and run every corpus-wide check on it.

use cutchoose::analysis::suite::{run_suite, SuiteOptions};
use cutchoose::analysis::{generate_corpus, DEFAULT_SEED};

fn main() -> cutchoose::error::Result<()> {
    for inst in generate_corpus(DEFAULT_SEED, 10)? {
        println!("#{:<3} {}", inst.id, inst.game.summary());
    }
    print!("{}", run_suite(DEFAULT_SEED, 10, &SuiteOptions::default())?.render());
    Ok(())
}
