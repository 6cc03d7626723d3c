//! The split-reduction trichotomy.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitStatus {
    Split,
    /// Not split, but some order-`p` component lifts.
    NotSplit,
    /// No order-`p` component lifts to an order-`p` point.
    TotallyNotSplit,
    Inconclusive,
}

impl SplitStatus {
    pub fn is_split(self) -> bool {
        self == SplitStatus::Split
    }

    /// `NotSplit` or `TotallyNotSplit`.
    pub fn is_not_split(self) -> bool {
        matches!(self, SplitStatus::NotSplit | SplitStatus::TotallyNotSplit)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SplitStatus::Split => "Split",
            SplitStatus::NotSplit => "NotSplit",
            SplitStatus::TotallyNotSplit => "TotallyNotSplit",
            SplitStatus::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for SplitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SplitStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Split" => Ok(SplitStatus::Split),
            "NotSplit" => Ok(SplitStatus::NotSplit),
            "TotallyNotSplit" => Ok(SplitStatus::TotallyNotSplit),
            "Inconclusive" => Ok(SplitStatus::Inconclusive),
            other => Err(format!("unknown split status {other:?}")),
        }
    }
}
