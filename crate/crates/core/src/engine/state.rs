//! Positions and moves.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::game::Role;
use crate::structures::poset::elems;
use crate::structures::{ElemSet, Mask};

/// A single move by either player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    /// Cut presents set-like pieces (partition, I-partition or algebra antichain).
    Partition(Vec<Mask>),
    /// Cut presents an antichain of poset elements.
    Antichain(Vec<usize>),
    /// Choose picks the piece with this index.
    Pick(usize),
    /// A Banach–Mazur move on sets or algebra elements.
    Set(Mask),
    /// A Banach–Mazur move on poset elements.
    Element(usize),
}

impl Move {
    pub fn pieces(&self) -> Option<&[Mask]> {
        match self {
            Move::Partition(p) => Some(p),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Move::Partition(p) => p.len(),
            Move::Antichain(a) => a.len(),
            _ => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Partition(p) => {
                f.write_str("cut [")?;
                for (i, m) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("]")
            }
            Move::Antichain(a) => write!(f, "cut {a:?}"),
            Move::Pick(i) => write!(f, "pick {i}"),
            Move::Set(m) => write!(f, "play {m}"),
            Move::Element(e) => write!(f, "play #{e}"),
        }
    }
}

/// The canonical abstraction of a history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Core {
    /// Running intersection (U, G on sets/algebras) or current set (BM).
    Set(Mask),
    /// Lower bounds of Choose's picks so far (G on posets).
    Elems(ElemSet),
    /// Current element (BM on posets).
    Element(usize),
}

impl Core {
    pub fn mask(self) -> Mask {
        match self {
            Core::Set(m) => m,
            _ => panic!("core is not a set"),
        }
    }
}

impl fmt::Display for Core {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Core::Set(m) => write!(f, "{m}"),
            Core::Elems(s) => {
                f.write_str("[")?;
                for (i, e) in elems(*s).enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
            Core::Element(e) => write!(f, "#{e}"),
        }
    }
}

/// A position: completed rounds, player to move, core, and the cut waiting
/// for Choose's answer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    pub round: usize,
    pub turn: Role,
    pub core: Core,
    pub pending: Option<Move>,
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "round {} {} to move, core {}", self.round, self.turn, self.core)?;
        if let Some(p) = &self.pending {
            write!(f, ", pending {p}")?;
        }
        Ok(())
    }
}

/// Serialized view of a state in transcripts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateView {
    pub round: usize,
    pub turn: Role,
    pub core: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pending: Option<Move>,
}

impl From<&GameState> for StateView {
    fn from(s: &GameState) -> Self {
        StateView { round: s.round, turn: s.turn, core: s.core.to_string(), pending: s.pending.clone() }
    }
}
