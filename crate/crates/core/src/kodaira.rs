//! Kodaira reduction types of elliptic curves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    Good,
    /// `I_n`, `n >= 1`.
    I(u32),
    /// `I_n^*`, `n >= 0`.
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components of the special fiber of the minimal regular model.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::Good => 1,
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => 5 + n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// Order of the component group.
    pub fn component_group_order(self) -> u32 {
        match self {
            KodairaType::Good | KodairaType::II | KodairaType::IIStar => 1,
            KodairaType::I(n) => n,
            KodairaType::IStar(_) => 4,
            KodairaType::III | KodairaType::IIIStar => 2,
            KodairaType::IV | KodairaType::IVStar => 3,
        }
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, KodairaType::Good | KodairaType::I(_))
    }

    pub fn is_semistable(self) -> bool {
        !self.is_additive()
    }

    /// Every Kodaira type with `n <= max_n` for the families.
    pub fn enumerate(max_n: u32) -> Vec<KodairaType> {
        let mut out = vec![KodairaType::Good];
        out.extend((1..=max_n).map(KodairaType::I));
        out.extend((0..=max_n).map(KodairaType::IStar));
        out.extend([
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ]);
        out
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::Good => write!(f, "good"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = String;

    /// Accepts `I7`, `I_7`, `I0*`, `I_0^*`, `IV*`, `IV^*`, `good`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.trim().chars().filter(|c| !matches!(c, '_' | '^' | ' ')).collect();
        let (body, star) = match norm.strip_suffix('*') {
            Some(b) => (b, true),
            None => (norm.as_str(), false),
        };
        let t = match (body, star) {
            ("good" | "I0", false) => KodairaType::Good,
            ("II", false) => KodairaType::II,
            ("III", false) => KodairaType::III,
            ("IV", false) => KodairaType::IV,
            ("II", true) => KodairaType::IIStar,
            ("III", true) => KodairaType::IIIStar,
            ("IV", true) => KodairaType::IVStar,
            (b, star) => {
                let n: u32 = b
                    .strip_prefix('I')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| format!("unknown Kodaira type {s:?}"))?;
                if star {
                    KodairaType::IStar(n)
                } else {
                    KodairaType::I(n)
                }
            }
        };
        Ok(t)
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KodairaType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for t in KodairaType::enumerate(4) {
            assert_eq!(t.to_string().parse::<KodairaType>().unwrap(), t);
        }
        assert_eq!("I_4^*".parse::<KodairaType>().unwrap(), KodairaType::IStar(4));
        assert_eq!("IV^*".parse::<KodairaType>().unwrap(), KodairaType::IVStar);
        assert!("V".parse::<KodairaType>().is_err());
    }
}
