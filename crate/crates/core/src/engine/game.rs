//! Game parameters and validated game instances.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{FiniteBooleanAlgebra, FinitePoset, Mask, MonotoneFamily, DEFAULT_MOVE_BUDGET};

/// The four player roles. Cut and Empty move first in each round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Cut,
    Choose,
    Empty,
    Nonempty,
}

impl Role {
    /// The other player in the same game family.
    pub fn opponent(self) -> Role {
        match self {
            Role::Cut => Role::Choose,
            Role::Choose => Role::Cut,
            Role::Empty => Role::Nonempty,
            Role::Nonempty => Role::Empty,
        }
    }

    /// Cut or Empty.
    pub fn is_first_mover(self) -> bool {
        matches!(self, Role::Cut | Role::Empty)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameFamily {
    /// Cut splits into at most `width` disjoint pieces.
    #[serde(rename = "U")]
    U,
    /// Cut plays I-partitions.
    #[serde(rename = "G_ideal")]
    GIdeal,
    /// Cut plays maximal antichains of a poset or Boolean algebra.
    #[serde(rename = "G_poset")]
    GPoset,
    /// Empty and Nonempty shrink a positive set.
    #[serde(rename = "BM_ideal")]
    BmIdeal,
    /// Empty and Nonempty descend in a poset.
    #[serde(rename = "BM_poset")]
    BmPoset,
}

impl GameFamily {
    pub fn is_banach_mazur(self) -> bool {
        matches!(self, GameFamily::BmIdeal | GameFamily::BmPoset)
    }

    pub fn roles(self) -> (Role, Role) {
        if self.is_banach_mazur() {
            (Role::Empty, Role::Nonempty)
        } else {
            (Role::Cut, Role::Choose)
        }
    }
}

impl fmt::Display for GameFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GameFamily::U => "U",
            GameFamily::GIdeal => "G_ideal",
            GameFamily::GPoset => "G_poset",
            GameFamily::BmIdeal => "BM_ideal",
            GameFamily::BmPoset => "BM_poset",
        };
        f.write_str(s)
    }
}

/// Winning-condition variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// The final running intersection must be positive.
    Exact,
    /// Every running intersection must stay positive; Cut wins as soon as
    /// one falls into the family.
    Weak,
    /// Positivity is required through round `n - 1` only.
    StrictPrefix,
}

/// Bound on the number of pieces in a cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Width {
    Bounded(usize),
    Unbounded,
}

impl Width {
    pub fn limit(self) -> Option<usize> {
        match self {
            Width::Bounded(w) => Some(w),
            Width::Unbounded => None,
        }
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Width::Bounded(w) => write!(f, "{w}"),
            Width::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Width {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Width::Bounded(w) => s.serialize_u64(*w as u64),
            Width::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Width {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Width, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Width::Bounded(n)),
            Raw::S(s) if s == "unbounded" => Ok(Width::Unbounded),
            Raw::S(s) => Err(serde::de::Error::custom(format!("width must be an integer or \"unbounded\", got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct Flags {
    /// Cut must play maximal collections. Off only for the ablation games.
    pub maximal: bool,
    /// Cut partitions the running intersection rather than the start set.
    pub cut_current: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags { maximal: true, cut_current: true }
    }
}

/// What the game is played on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    /// A ground set with a monotone family deciding positivity.
    Sets(MonotoneFamily),
    /// A finite powerset algebra; the conditions are its nonzero elements.
    Algebra(FiniteBooleanAlgebra),
    /// A general finite poset of conditions.
    Poset(FinitePoset),
}

impl Structure {
    /// Positivity of a set-like element (sets and algebra elements).
    pub fn is_positive(&self, s: Mask) -> bool {
        match self {
            Structure::Sets(f) => f.is_positive(s),
            Structure::Algebra(_) => !s.is_empty(),
            Structure::Poset(_) => unreachable!("poset elements are not masks"),
        }
    }

    pub fn is_set_like(&self) -> bool {
        !matches!(self, Structure::Poset(_))
    }

    pub fn family(&self) -> Option<&MonotoneFamily> {
        match self {
            Structure::Sets(f) => Some(f),
            _ => None,
        }
    }

    pub fn poset(&self) -> Option<&FinitePoset> {
        match self {
            Structure::Poset(p) => Some(p),
            _ => None,
        }
    }

    pub fn universe(&self) -> Option<Mask> {
        match self {
            Structure::Sets(f) => Some(f.ground().full()),
            Structure::Algebra(b) => Some(b.top()),
            Structure::Poset(_) => None,
        }
    }
}

/// The starting position: a positive set, or a poset element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Start {
    Set(Mask),
    Element(usize),
}

impl Start {
    pub fn mask(self) -> Mask {
        match self {
            Start::Set(m) => m,
            Start::Element(_) => panic!("start is a poset element"),
        }
    }
}

/// A fully parameterized game. Construct with [`GameInstance::new`], which
/// enforces the parameter invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameInstance {
    structure: Structure,
    family: GameFamily,
    start: Start,
    rounds: usize,
    width: Width,
    variant: Variant,
    flags: Flags,
    move_budget: usize,
}

/// Unvalidated parameters for [`GameInstance::new`].
#[derive(Clone, Debug)]
pub struct GameParams {
    pub family: GameFamily,
    pub start: Start,
    pub rounds: usize,
    pub width: Width,
    pub variant: Variant,
    pub flags: Flags,
}

impl GameInstance {
    pub fn new(structure: Structure, p: GameParams) -> Result<Self> {
        let invalid = |m: &str| Err(Error::InvalidInstance(m.to_string()));
        if p.rounds == 0 {
            return invalid("rounds must be at least 1");
        }
        if let Width::Bounded(w) = p.width {
            if w < 2 {
                return invalid("width ≥ 2 required");
            }
        }
        if p.width == Width::Unbounded && p.family == GameFamily::U {
            return invalid("unbounded width is only available in G and BM games");
        }
        match (p.family, &structure) {
            (GameFamily::U | GameFamily::GIdeal | GameFamily::BmIdeal, Structure::Sets(_)) => {}
            (GameFamily::GPoset | GameFamily::BmPoset, Structure::Algebra(_) | Structure::Poset(_)) => {}
            _ => return invalid("game family does not match the structure"),
        }
        match (p.family, p.variant) {
            (GameFamily::GPoset, Variant::Weak) => return invalid("weak variant is defined for set games only"),
            (GameFamily::BmIdeal | GameFamily::BmPoset, v) if v != Variant::Exact => {
                return invalid("Banach–Mazur games have the exact variant only")
            }
            _ => {}
        }
        match (&structure, p.start) {
            (Structure::Sets(f), Start::Set(x)) => {
                if !f.ground().contains(x) {
                    return invalid("start has points outside the ground set");
                }
                if !f.is_positive(x) {
                    return invalid("start must be I-positive");
                }
            }
            (Structure::Algebra(b), Start::Set(x)) => {
                if !b.contains(x) || x.is_empty() {
                    return invalid("start must be a nonzero algebra element");
                }
            }
            (Structure::Poset(q), Start::Element(e)) => {
                if e >= q.len() {
                    return invalid("start element out of range");
                }
            }
            _ => return invalid("start does not match the structure"),
        }
        Ok(GameInstance {
            structure,
            family: p.family,
            start: p.start,
            rounds: p.rounds,
            width: p.width,
            variant: p.variant,
            flags: p.flags,
            move_budget: DEFAULT_MOVE_BUDGET,
        })
    }

    /// Shorthand for a U game on the full ground set.
    pub fn u_game(family: MonotoneFamily, rounds: usize, width: usize, variant: Variant) -> Result<Self> {
        let start = Start::Set(family.ground().full());
        GameInstance::new(
            Structure::Sets(family),
            GameParams {
                family: GameFamily::U,
                start,
                rounds,
                width: Width::Bounded(width),
                variant,
                flags: Flags::default(),
            },
        )
    }

    pub fn with_move_budget(mut self, budget: usize) -> Self {
        self.move_budget = budget;
        self
    }

    /// Copy of this instance with other parameters; revalidated.
    pub fn with_params(&self, f: impl FnOnce(&mut GameParams)) -> Result<Self> {
        let mut p = self.params();
        f(&mut p);
        Ok(GameInstance::new(self.structure.clone(), p)?.with_move_budget(self.move_budget))
    }

    pub fn params(&self) -> GameParams {
        GameParams {
            family: self.family,
            start: self.start,
            rounds: self.rounds,
            width: self.width,
            variant: self.variant,
            flags: self.flags,
        }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }
    pub fn family(&self) -> GameFamily {
        self.family
    }
    pub fn start(&self) -> Start {
        self.start
    }
    pub fn rounds(&self) -> usize {
        self.rounds
    }
    pub fn width(&self) -> Width {
        self.width
    }
    pub fn variant(&self) -> Variant {
        self.variant
    }
    pub fn flags(&self) -> Flags {
        self.flags
    }
    pub fn move_budget(&self) -> usize {
        self.move_budget
    }

    /// One-line human summary, also used as the `game` field of transcripts.
    pub fn summary(&self) -> String {
        let structure = match &self.structure {
            Structure::Sets(f) => format!("ground {} / {}", f.ground().size(), f),
            Structure::Algebra(b) => format!("algebra {} atoms", b.atoms().size()),
            Structure::Poset(q) => format!("poset {} elements", q.len()),
        };
        let start = match self.start {
            Start::Set(m) => m.to_string(),
            Start::Element(e) => format!("#{e}"),
        };
        format!(
            "{} on {structure}, start {start}, rounds {}, width {}, {:?}, maximal={}, cut_current={}",
            self.family, self.rounds, self.width, self.variant, self.flags.maximal, self.flags.cut_current
        )
    }
}
