//! Play a naive Cut against a greedy Choose, record the transcript
//! and replay it through the referee.

use cutchoose::engine::{play, replay_transcript, GameInstance, FirstLegal, LargestPiece, Transcript, Variant};
use cutchoose::structures::{GroundSet, MonotoneFamily};

fn main() -> cutchoose::error::Result<()> {
    let family = MonotoneFamily::size_at_most(GroundSet::new(6)?, 1);
    let game = GameInstance::u_game(family, 2, 2, Variant::Exact)?;
    let t = play(&game, &FirstLegal, &LargestPiece)?;
    print!("{}", t.render());

    let saved = t.to_json();
    let loaded: Transcript = serde_json::from_str(&saved)?;
    let again = replay_transcript(&game, &loaded)?;
    println!("replay agrees: {}", again == t);
    Ok(())
}
