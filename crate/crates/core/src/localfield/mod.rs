//! Exact arithmetic in truncated towers of complete discrete valuation rings.
//!
//! A [`Tower`] is an unramified base (`W(F_q)` or `F_q[[u]]`, truncated) followed by a
//! chain of Eisenstein extensions. [`RingElem`] values carry their own precision and
//! every operation recomputes it from its inputs. [`FieldElem`] adds a signed
//! uniformizer shift for elements of the fraction field.

mod base;
mod elem;
mod field_elem;
mod parse;
mod residue;
mod tower;

use thiserror::Error;

pub use elem::{RingElem, RootOfUnity};
pub use field_elem::FieldElem;
pub use parse::{parse_element, parse_field_element};
pub use residue::{ResidueElem, ResidueField};
pub use tower::{make_tower, LevelSpec, Tower, TowerMap, TowerSpec, DEFAULT_PRECISION};

pub(crate) use residue::factorize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalFieldError {
    #[error("level {level}: coefficient of t^{coefficient} violates the Eisenstein condition: {reason}")]
    NonEisenstein { level: String, coefficient: usize, reason: String },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("p^{digits} does not fit in 64 bits for p = {p}; lower the precision")]
    PrecisionOutOfRange { p: u64, digits: u32 },
    #[error("division by an element indistinguishable from 0")]
    DivisionByIndistinguishableZero,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("element is indistinguishable from 0 at precision {precision}")]
    IndistinguishableFromZero { precision: u32 },
    #[error("result is not integral (valuation {valuation})")]
    NotIntegral { valuation: i64 },
    #[error("element is not a unit")]
    NonUnit,
    #[error("unsupported extension shape: {0}")]
    UnsupportedExtensionShape(String),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("unknown level {0:?}")]
    UnknownLevel(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown symbol {symbol:?} at position {position}")]
    UnknownSymbol { position: usize, symbol: String },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
}

/// `v_p(n)` for `n > 0`.
pub fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}
