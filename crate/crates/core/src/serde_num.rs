//! Integers that serialize as decimal strings and deserialize from strings or numbers.

macro_rules! int_as_string {
    ($name:ident, $ty:ty) => {
        pub mod $name {
            use serde::de::{self, Deserializer, Visitor};
            use serde::Serializer;
            use std::fmt;

            pub fn serialize<S: Serializer>(v: &$ty, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&v.to_string())
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                struct V;
                impl<'de> Visitor<'de> for V {
                    type Value = $ty;
                    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        write!(f, "an integer or a decimal string")
                    }
                    fn visit_u64<E: de::Error>(self, v: u64) -> Result<$ty, E> {
                        <$ty>::try_from(v).map_err(|_| E::custom(format!("{v} out of range")))
                    }
                    fn visit_i64<E: de::Error>(self, v: i64) -> Result<$ty, E> {
                        <$ty>::try_from(v).map_err(|_| E::custom(format!("{v} out of range")))
                    }
                    fn visit_str<E: de::Error>(self, v: &str) -> Result<$ty, E> {
                        v.trim().parse().map_err(|_| E::custom(format!("invalid integer {v:?}")))
                    }
                }
                d.deserialize_any(V)
            }
        }
    };
}

int_as_string!(u64_str, u64);
int_as_string!(u32_str, u32);
int_as_string!(i64_str, i64);

/// Optional variant of [`u64_str`].
pub mod opt_u64_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "super::u64_str")] u64);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}
