//! JSON instance files.

use serde::{Deserialize, Serialize};

use super::game::{Flags, GameFamily, GameInstance, GameParams, Start, Structure, Variant, Width};
use crate::error::{Error, Result};
use crate::structures::{
    validate_family, FamilySpec, FiniteBooleanAlgebra, FinitePoset, GroundSet, Mask, MonotoneFamily, PosetSpec,
    Validation,
};

pub const INSTANCE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureFile {
    Sets {
        ground: usize,
        family: FamilySpec,
        /// Require the family to be a proper ideal.
        #[serde(default)]
        ideal: bool,
    },
    Algebra {
        atoms: usize,
    },
    Poset {
        size: usize,
        relations: Vec<(usize, usize)>,
    },
}

/// Start position in files: a mask string for set structures, an element
/// index for posets; omitted means the whole ground set or the top element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartFile {
    Element(usize),
    Set(Mask),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFile {
    pub family: GameFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartFile>,
    pub rounds: usize,
    pub width: Width,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    #[serde(default)]
    pub flags: Flags,
}

fn default_variant() -> Variant {
    Variant::Exact
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub structure: StructureFile,
    pub game: GameFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.schema_version != INSTANCE_SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema_version {}", file.schema_version)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    pub fn build(&self) -> Result<GameInstance> {
        let structure = match &self.structure {
            StructureFile::Sets { ground, family, ideal } => {
                let f = MonotoneFamily::new(GroundSet::new(*ground)?, family.clone())?;
                let v = validate_family(&f, *ideal);
                if v != Validation::Ok {
                    return Err(Error::InvalidInstance(format!("family {f} fails validation: {v:?}")));
                }
                Structure::Sets(f)
            }
            StructureFile::Algebra { atoms } => Structure::Algebra(FiniteBooleanAlgebra::with_atoms(*atoms)?),
            StructureFile::Poset { size, relations } => Structure::Poset(FinitePoset::from_relations(*size, relations)?),
        };
        let start = match (&structure, &self.game.start) {
            (Structure::Poset(q), None) => {
                Start::Element(q.top().ok_or_else(|| Error::InvalidInstance("poset has no top; give a start".into()))?)
            }
            (Structure::Poset(_), Some(StartFile::Element(e))) => Start::Element(*e),
            (s, None) => Start::Set(s.universe().expect("set-like")),
            (_, Some(StartFile::Set(m))) => Start::Set(*m),
            (_, Some(StartFile::Element(_))) => {
                return Err(Error::InvalidInstance("set structures take a mask start".into()))
            }
        };
        GameInstance::new(
            structure,
            GameParams {
                family: self.game.family,
                start,
                rounds: self.game.rounds,
                width: self.game.width,
                variant: self.game.variant,
                flags: self.game.flags,
            },
        )
    }

    /// The file describing `game`. Starts are always written out.
    pub fn from_instance(game: &GameInstance, seed: Option<u64>) -> Self {
        let structure = match game.structure() {
            Structure::Sets(f) => StructureFile::Sets { ground: f.ground().size(), family: f.spec().clone(), ideal: false },
            Structure::Algebra(b) => StructureFile::Algebra { atoms: b.atoms().size() },
            Structure::Poset(q) => {
                let PosetSpec { size, relations } = q.to_spec();
                StructureFile::Poset { size, relations }
            }
        };
        let start = Some(match game.start() {
            Start::Set(m) => StartFile::Set(m),
            Start::Element(e) => StartFile::Element(e),
        });
        InstanceFile {
            schema_version: INSTANCE_SCHEMA_VERSION,
            structure,
            game: GameFile {
                family: game.family(),
                start,
                rounds: game.rounds(),
                width: game.width(),
                variant: game.variant(),
                flags: game.flags(),
            },
            seed,
        }
    }
}

impl GameInstance {
    /// Stable text identifying the game up to equality, used as a cache key.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&InstanceFile::from_instance(self, None)).expect("instance files serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let text = r#"{
            "schema_version": 1,
            "structure": {"kind": "sets", "ground": 4, "family": {"kind": "size_at_most", "k": 1}},
            "game": {"family": "U", "rounds": 2, "width": 2}
        }"#;
        let g = InstanceFile::parse(text).unwrap().build().unwrap();
        assert_eq!(g.start(), Start::Set(Mask(0b1111)));
        let again = InstanceFile::parse(&InstanceFile::from_instance(&g, None).to_json()).unwrap().build().unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn poset_start_defaults_to_top() {
        let text = r#"{
            "schema_version": 1,
            "structure": {"kind": "poset", "size": 3, "relations": [[0, 2], [1, 2]]},
            "game": {"family": "G_poset", "rounds": 1, "width": "unbounded"}
        }"#;
        let g = InstanceFile::parse(text).unwrap().build().unwrap();
        assert_eq!(g.start(), Start::Element(2));
    }

    #[test]
    fn ideal_flag_is_checked() {
        let text = r#"{
            "schema_version": 1,
            "structure": {"kind": "sets", "ground": 3, "family": {"kind": "size_at_most", "k": 1}, "ideal": true},
            "game": {"family": "G_ideal", "rounds": 1, "width": 3}
        }"#;
        let err = InstanceFile::parse(text).unwrap().build().unwrap_err();
        assert!(matches!(err, Error::InvalidInstance(_)));
    }
}
