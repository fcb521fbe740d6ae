//! Serialisation of big integers: JSON numbers when they fit in `i64`,
//! decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};

use crate::exactla::IntMatrix;

struct Entry<'a>(&'a BigInt);

impl serde::Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn bigint_seq<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Entry(x))?;
    }
    seq.end()
}

struct Row<'a>(&'a [BigInt]);

impl serde::Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        bigint_seq(self.0, s)
    }
}

impl serde::Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}

/// Polynomials serialise as their coefficient list, constant term first.
impl serde::Serialize for crate::groupring::IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        bigint_seq(self.coeffs(), s)
    }
}
