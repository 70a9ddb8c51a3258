//! Serde adapters for real-valued report fields that may hold an infinity
//! marker. Finite values serialize as JSON numbers; infinities serialize as
//! the strings `"inf"` / `"-inf"` because JSON has no literal for them.

use serde::de::{self, Deserializer, Unexpected};
use serde::ser::Serializer;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum RealRepr {
    Number(f64),
    Marker(String),
}

fn repr_to_f64<'de, D: Deserializer<'de>>(repr: RealRepr) -> Result<f64, D::Error> {
    match repr {
        RealRepr::Number(x) => Ok(x),
        RealRepr::Marker(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(de::Error::invalid_value(
                Unexpected::Str(other),
                &"a number, \"inf\", or \"-inf\"",
            )),
        },
    }
}

/// For `#[serde(with = "...")]` on `f64` fields.
pub mod real {
    use super::*;

    pub fn serialize<S: Serializer>(value: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if value.is_nan() {
            return Err(serde::ser::Error::custom("NaN is not representable"));
        }
        if value.is_infinite() {
            ser.serialize_str(if *value > 0.0 { "inf" } else { "-inf" })
        } else {
            ser.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        repr_to_f64::<D>(RealRepr::deserialize(de)?)
    }
}

/// For `#[serde(with = "...")]` on `Option<f64>` fields.
pub mod opt_real {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<f64>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(x) => real::serialize(x, ser),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<f64>, D::Error> {
        let repr = Option::<RealRepr>::deserialize(de)?;
        repr.map(repr_to_f64::<D>).transpose()
    }
}
