//! Game instances, the referee, strategies, playouts and strategy checking.

pub mod game;
pub mod io;
pub mod playout;
pub mod referee;
pub mod state;
pub mod strategy;
pub mod verify;

pub use io::InstanceFile;
pub use game::{Flags, GameFamily, GameInstance, GameParams, Role, Start, Structure, Variant, Width};
pub use playout::{play, replay_transcript, Transcript, TRANSCRIPT_SCHEMA_VERSION};
pub use referee::Outcome;
pub use state::{Core, GameState, Move, StateView};
pub use strategy::{CopyCurrent, FirstLegal, GreedyPositivity, LargestPiece, Scripted, Strategy};
pub use verify::{verify_winning_strategy, Verification, DEFAULT_NODE_BUDGET};
