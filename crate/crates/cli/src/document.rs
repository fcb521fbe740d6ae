//! The JSON lattice document read and written by the CLI.

use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use flasque::groupring::{BaseRing, CyclicGroup};
use flasque::{GroupLattice, IntMatrix};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// Integer entry: a JSON number, or a decimal string for values outside `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = Int;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Int, E> {
        Err(E::custom(format!("{v} is not an exact integer; write large values as strings")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
        v.trim().parse::<BigInt>().map(Int).map_err(|_| E::custom(format!("{v:?} is not an integer")))
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum BaseRingDoc {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z_loc")]
    Localized { p: u64 },
    #[serde(rename = "cyclotomic")]
    Cyclotomic { m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(rename = "type")]
    pub kind: GroupKind,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub format_version: u32,
    pub base_ring: BaseRingDoc,
    pub group: GroupDoc,
    pub rank: usize,
    pub sigma: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<Vec<Int>>>,
}

fn matrix_from_rows(name: &str, rows: &[Vec<Int>], rank: usize) -> Result<IntMatrix, CliError> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(CliError::Parse(format!("{name} must be a {rank} x {rank} matrix")));
    }
    Ok(IntMatrix::from_fn(rank, rank, |i, j| rows[i][j].0.clone()))
}

fn rows_from_matrix(a: &IntMatrix) -> Vec<Vec<Int>> {
    (0..a.rows()).map(|i| a.row(i).iter().cloned().map(Int).collect()).collect()
}

impl LatticeDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid lattice document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    /// Builds the lattice, re-checking every lattice invariant.
    pub fn to_lattice(&self) -> Result<GroupLattice, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Parse(format!("unsupported format_version {}", self.format_version)));
        }
        let base = match self.base_ring {
            BaseRingDoc::Integers => BaseRing::Integers,
            BaseRingDoc::Localized { p } => BaseRing::localized(p).map_err(|e| CliError::Parse(e.to_string()))?,
            BaseRingDoc::Cyclotomic { m } => BaseRing::cyclotomic(m).map_err(|e| CliError::Parse(e.to_string()))?,
        };
        let group = CyclicGroup::new(self.group.order).map_err(|e| CliError::Parse(e.to_string()))?;
        let sigma = matrix_from_rows("sigma", &self.sigma, self.rank)?;
        let zeta = self.zeta.as_ref().map(|z| matrix_from_rows("zeta", z, self.rank)).transpose()?;
        GroupLattice::new(base, group, sigma, zeta).map_err(|e| CliError::Parse(format!("lattice rejected: {e}")))
    }

    pub fn from_lattice(m: &GroupLattice) -> Self {
        let base_ring = match m.base() {
            BaseRing::Integers => BaseRingDoc::Integers,
            BaseRing::LocalizedAtP { p } => BaseRingDoc::Localized { p },
            BaseRing::Cyclotomic { m } => BaseRingDoc::Cyclotomic { m },
        };
        Self {
            format_version: FORMAT_VERSION,
            base_ring,
            group: GroupDoc { kind: GroupKind::Cyclic, order: m.group().order() },
            rank: m.z_rank(),
            sigma: rows_from_matrix(m.sigma()),
            zeta: m.zeta().map(rows_from_matrix),
        }
    }
}
