//! File formats: ring files, category data files and big-integer encoding.
//!
//! Integers that fit in 64 bits are written as JSON numbers; larger ones as
//! decimal strings. Readers accept both.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ring::{default_labels, RingError, RingPresentation};

pub const SCHEMA: &str = "v1";

struct BigRef<'a>(&'a BigInt);

impl Serialize for BigRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_big(self.0, s)
    }
}

pub fn serialize_big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    if let Some(v) = x.to_i64() {
        s.serialize_i64(v)
    } else if let Some(v) = x.to_u64() {
        s.serialize_u64(v)
    } else {
        s.serialize_str(&x.to_string())
    }
}

pub fn serialize_big_vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&BigRef(x))?;
    }
    seq.end()
}

pub fn serialize_big_matrix<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    struct Row<'a>(&'a [BigInt]);
    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_big_vec(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(&Row(r))?;
    }
    seq.end()
}

/// `BigInt` wrapper with the number-or-string encoding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigJson(pub BigInt);

impl Serialize for BigJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_big(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for BigJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BigJson;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigJson, E> {
                Ok(BigJson(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigJson, E> {
                Ok(BigJson(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<BigJson, E> {
                v.parse().map(BigJson).map_err(|_| E::custom(format!("bad integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// On-disk ring: `{"rank", "labels", "unit", "constants"}` with constants
/// indexed `[i][j][k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub unit: usize,
    pub constants: Vec<Vec<Vec<u64>>>,
}

impl RingFile {
    pub fn to_ring(&self) -> Result<RingPresentation, RingError> {
        if self.constants.len() != self.rank {
            return Err(RingError::Shape(format!(
                "rank is {} but constants has {} planes",
                self.rank,
                self.constants.len()
            )));
        }
        let labels = self.labels.clone().unwrap_or_else(|| default_labels(self.rank));
        RingPresentation::new(labels, self.unit, &self.constants)
    }
}

impl From<&RingPresentation> for RingFile {
    fn from(r: &RingPresentation) -> Self {
        RingFile {
            rank: r.rank(),
            labels: Some(r.labels().to_vec()),
            unit: r.unit(),
            constants: r.nested_constants(),
        }
    }
}

pub fn parse_ring(text: &str) -> Result<RingPresentation, FormatError> {
    let file: RingFile = serde_json::from_str(text).map_err(FormatError::Json)?;
    file.to_ring().map_err(FormatError::Ring)
}

pub fn ring_to_json(ring: &RingPresentation) -> String {
    serde_json::to_string(&RingFile::from(ring)).expect("ring file serializes")
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Rounds to 15 significant digits, the precision used for floats in reports.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_file_round_trip() {
        let text = r#"{"rank": 2, "labels": ["1", "X"], "unit": 0,
            "constants": [[[1,0],[0,1]], [[0,1],[4,0]]]}"#;
        let ring = parse_ring(text).unwrap();
        assert_eq!(ring, RingPresentation::rank2(0, 4));
        assert_eq!(parse_ring(&ring_to_json(&ring)).unwrap(), ring);
    }

    #[test]
    fn labels_and_unit_default() {
        let text = r#"{"rank": 1, "constants": [[[1]]]}"#;
        let ring = parse_ring(text).unwrap();
        assert_eq!(ring.labels(), ["1"]);
    }

    #[test]
    fn rank_mismatch_is_a_shape_error() {
        let text = r#"{"rank": 3, "constants": [[[1,0],[0,1]], [[0,1],[4,0]]]}"#;
        assert!(matches!(parse_ring(text), Err(FormatError::Ring(RingError::Shape(_)))));
        assert!(matches!(parse_ring("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn big_values_use_strings_past_64_bits() {
        let big = BigJson("123456789012345678901234567890".parse().unwrap());
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, "\"123456789012345678901234567890\"");
        assert_eq!(serde_json::from_str::<BigJson>(&s).unwrap(), big);
        assert_eq!(serde_json::to_string(&BigJson(BigInt::from(-7))).unwrap(), "-7");
    }

    #[test]
    fn sig15_rounds() {
        assert_eq!(sig15(1.0 / 3.0), 0.333333333333333);
        assert_eq!(sig15(2.0), 2.0);
    }
}
