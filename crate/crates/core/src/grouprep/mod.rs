//! Polyhedral and binary polyhedral groups as explicit matrix groups,
//! their conjugacy classes, character tables and representation matrices.

mod group;
mod rep;
mod table;

pub use group::{build_binary_group, preferred_cover, standard_group, BinaryGroup, Realization};
pub use rep::{representation, Representation};
pub use table::{
    character_table, cover_character_table, Character, CharacterTable, ConjugacyClass, KappaVector,
    OrthogonalityReport, SymmetricPower,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic,
    Dihedral,
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

/// One of the finite groups of Möbius transformations of the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Only meaningful for cyclic and dihedral groups.
    pub n: u32,
}

/// Names of the exceptional orbits, in the order used everywhere.
pub const ORBIT_NAMES: [char; 3] = ['a', 'b', 'c'];

impl GroupSpec {
    pub fn cyclic(n: u32) -> Self {
        GroupSpec {
            kind: GroupKind::Cyclic,
            n,
        }
    }
    pub fn dihedral(n: u32) -> Self {
        GroupSpec {
            kind: GroupKind::Dihedral,
            n,
        }
    }
    pub fn tetrahedral() -> Self {
        GroupSpec {
            kind: GroupKind::Tetrahedral,
            n: 0,
        }
    }
    pub fn octahedral() -> Self {
        GroupSpec {
            kind: GroupKind::Octahedral,
            n: 0,
        }
    }
    pub fn icosahedral() -> Self {
        GroupSpec {
            kind: GroupKind::Icosahedral,
            n: 0,
        }
    }

    /// Parse `T`, `O`, `Y`, `D5`, `Z3` (or kind letter plus a separate N).
    pub fn parse(kind: &str, n: Option<u32>) -> Result<Self> {
        let k = kind.trim();
        let (head, tail) = k.split_at(k.chars().next().map_or(0, |c| c.len_utf8()));
        let n = if tail.is_empty() {
            n
        } else {
            Some(
                tail.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad group parameter in {kind:?}")))?,
            )
        };
        let spec = match head.to_ascii_uppercase().as_str() {
            "T" => Self::tetrahedral(),
            "O" => Self::octahedral(),
            "Y" | "I" => Self::icosahedral(),
            "D" => Self::dihedral(
                n.ok_or_else(|| Error::InvalidInput("dihedral group needs N".into()))?,
            ),
            "Z" | "C" => {
                Self::cyclic(n.ok_or_else(|| Error::InvalidInput("cyclic group needs N".into()))?)
            }
            _ => return Err(Error::InvalidInput(format!("unknown group kind {kind:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            GroupKind::Cyclic if self.n < 1 => {
                Err(Error::InvalidInput("cyclic group needs N >= 1".into()))
            }
            GroupKind::Dihedral if self.n < 2 => {
                Err(Error::InvalidInput("dihedral group needs N >= 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            GroupKind::Cyclic => format!("Z{}", self.n),
            GroupKind::Dihedral => format!("D{}", self.n),
            GroupKind::Tetrahedral => "T".into(),
            GroupKind::Octahedral => "O".into(),
            GroupKind::Icosahedral => "Y".into(),
        }
    }

    pub fn is_cyclic(&self) -> bool {
        self.kind == GroupKind::Cyclic
    }

    /// |G|, the order of the group acting on the sphere.
    pub fn order(&self) -> u32 {
        match self.kind {
            GroupKind::Cyclic => self.n,
            GroupKind::Dihedral => 2 * self.n,
            GroupKind::Tetrahedral => 12,
            GroupKind::Octahedral => 24,
            GroupKind::Icosahedral => 60,
        }
    }

    /// Stabiliser orders ν_i of the exceptional orbits.
    pub fn nu(&self) -> Vec<u32> {
        match self.kind {
            GroupKind::Cyclic => vec![self.n, self.n],
            GroupKind::Dihedral => vec![self.n, 2, 2],
            GroupKind::Tetrahedral => vec![3, 3, 2],
            GroupKind::Octahedral => vec![4, 3, 2],
            GroupKind::Icosahedral => vec![5, 3, 2],
        }
    }

    /// Orbit sizes d_i = |G|/ν_i.
    pub fn orbit_sizes(&self) -> Vec<u32> {
        self.nu().iter().map(|v| self.order() / v).collect()
    }

    pub fn omega(&self) -> usize {
        self.nu().len()
    }

    /// Exponent ‖G‖ of the polyhedral group.
    pub fn exponent(&self) -> u32 {
        use num_integer::Integer;
        self.nu().iter().fold(1, |acc, v| acc.lcm(v))
    }

    /// Order of the Schur multiplier M(G).
    pub fn schur_multiplier_order(&self) -> u32 {
        match self.kind {
            GroupKind::Cyclic => 1,
            GroupKind::Dihedral => {
                if self.n.is_multiple_of(2) {
                    2
                } else {
                    1
                }
            }
            _ => 2,
        }
    }

    /// Invariant factors of the abelianisation.
    pub fn abelianisation(&self) -> Vec<u32> {
        match self.kind {
            GroupKind::Cyclic => vec![self.n],
            GroupKind::Dihedral => {
                if self.n.is_multiple_of(2) {
                    vec![2, 2]
                } else {
                    vec![2]
                }
            }
            GroupKind::Tetrahedral => vec![3],
            GroupKind::Octahedral => vec![2],
            GroupKind::Icosahedral => vec![],
        }
    }

    /// The single conductor used for all arithmetic attached to this group.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        match self.kind {
            GroupKind::Cyclic | GroupKind::Dihedral => 4u32.lcm(&(2 * self.n)),
            GroupKind::Tetrahedral => 12,
            GroupKind::Octahedral => 24,
            GroupKind::Icosahedral => 60,
        }
    }

    /// Smallest m such that invariant vectors of degree m|G| generate
    /// (m = 1 when the Schur multiplier has order 2, else 2).
    pub fn generator_multiple(&self) -> u32 {
        2 / self.schur_multiplier_order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_hurwitz() {
        let mut specs = vec![
            GroupSpec::tetrahedral(),
            GroupSpec::octahedral(),
            GroupSpec::icosahedral(),
        ];
        for n in 1..10 {
            specs.push(GroupSpec::cyclic(n));
            if n >= 2 {
                specs.push(GroupSpec::dihedral(n));
            }
        }
        for s in specs {
            let total: u32 = s.orbit_sizes().iter().sum();
            assert_eq!(
                total,
                (s.omega() as u32 - 2) * s.order() + 2,
                "{}",
                s.label()
            );
        }
    }

    #[test]
    fn parse_labels() {
        assert_eq!(
            GroupSpec::parse("D5", None).unwrap(),
            GroupSpec::dihedral(5)
        );
        assert_eq!(
            GroupSpec::parse("D", Some(4)).unwrap(),
            GroupSpec::dihedral(4)
        );
        assert_eq!(
            GroupSpec::parse("Y", None).unwrap().orbit_sizes(),
            vec![12, 20, 30]
        );
        assert!(GroupSpec::parse("D1", None).is_err());
        assert!(GroupSpec::parse("Q", None).is_err());
    }
}
