//! Elements of the fraction field: `π^shift · mantissa` with a unit mantissa.

use std::fmt;

use super::elem::RingElem;
use super::tower::Tower;
use super::LocalFieldError;

/// `π^shift · mant`, where `mant` is a unit or indistinguishable from zero.
/// The absolute precision is `shift + mant.precision()`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    shift: i64,
    mant: RingElem,
}

impl FieldElem {
    pub fn from_ring(a: &RingElem) -> FieldElem {
        FieldElem::normalize(0, a.clone())
    }

    fn normalize(shift: i64, mant: RingElem) -> FieldElem {
        match mant.valuation() {
            Ok(0) | Err(_) => FieldElem { shift, mant },
            Ok(v) => {
                let m = mant.div_pi_pow(v).expect("valuation below precision");
                FieldElem { shift: shift + v as i64, mant: m }
            }
        }
    }

    pub fn zero(tower: &Tower, level: usize) -> FieldElem {
        FieldElem::from_ring(&tower.zero(level))
    }

    pub fn one(tower: &Tower, level: usize) -> FieldElem {
        FieldElem::from_ring(&tower.one(level))
    }

    pub fn from_int(tower: &Tower, level: usize, n: i128) -> FieldElem {
        FieldElem::from_ring(&tower.from_int(level, n))
    }

    pub fn tower(&self) -> &Tower {
        self.mant.tower()
    }

    pub fn level(&self) -> usize {
        self.mant.level()
    }

    /// Absolute precision (may be negative for very imprecise values).
    pub fn abs_precision(&self) -> i64 {
        self.shift + self.mant.precision() as i64
    }

    /// Relative precision: digits known beyond the valuation.
    pub fn rel_precision(&self) -> u32 {
        self.mant.precision()
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.mant.is_zero_at_precision()
    }

    pub fn valuation(&self) -> Result<i64, LocalFieldError> {
        if self.mant.is_zero_at_precision() {
            Err(LocalFieldError::IndistinguishableFromZero {
                precision: self.abs_precision().max(0) as u32,
            })
        } else {
            Ok(self.shift)
        }
    }

    /// The unit part `u` in `π^v · u`.
    pub fn unit(&self) -> Result<&RingElem, LocalFieldError> {
        self.valuation()?;
        Ok(&self.mant)
    }

    pub fn to_ring(&self) -> Result<RingElem, LocalFieldError> {
        if self.mant.is_zero_at_precision() {
            let prec = self.abs_precision();
            if prec <= 0 {
                return Err(LocalFieldError::PrecisionExhausted);
            }
            return Ok(self.mant.tower().zero(self.level()).truncate(prec as u32));
        }
        if self.shift < 0 {
            return Err(LocalFieldError::NotIntegral { valuation: self.shift });
        }
        Ok(self.mant.mul_pi_pow(self.shift as u32))
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { shift: self.shift, mant: -&self.mant }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.add_sub(other, false)
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add_sub(other, true)
    }

    fn add_sub(&self, other: &FieldElem, negate: bool) -> FieldElem {
        let s = self.shift.min(other.shift);
        let a = self.mant.mul_pi_pow((self.shift - s) as u32);
        let b = other.mant.mul_pi_pow((other.shift - s) as u32);
        let sum = if negate { a - b } else { a + b };
        FieldElem::normalize(s, sum)
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        FieldElem::normalize(self.shift + other.shift, &self.mant * &other.mant)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, LocalFieldError> {
        if other.mant.is_zero_at_precision() {
            return Err(LocalFieldError::DivisionByIndistinguishableZero);
        }
        let inv = other.mant.inverse()?;
        Ok(FieldElem::normalize(self.shift - other.shift, &self.mant * &inv))
    }

    pub fn pow(&self, n: u64) -> FieldElem {
        FieldElem { shift: self.shift * n as i64, mant: self.mant.pow(n) }
    }

    pub fn scale(&self, n: i128) -> FieldElem {
        self.mul(&FieldElem::from_int(self.tower(), self.level(), n))
    }

    pub fn eq_at_precision(&self, other: &FieldElem) -> bool {
        self.sub(other).is_zero_at_precision()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.tower().level_name(self.level()).to_string();
        match self.shift {
            0 => write!(f, "{}", self.mant),
            s => write!(f, "pi_{name}^{s}*({})", self.mant),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::super::tower::TowerSpec;
    use super::*;

    #[test]
    fn negative_valuations_round_trip() {
        let t = TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 - 3").build().unwrap();
        let pi = FieldElem::from_ring(&t.uniformizer(1));
        let one = FieldElem::one(&t, 1);
        let x = one.div(&pi.pow(2)).unwrap();
        assert_eq!(x.valuation().unwrap(), -2);
        let back = x.mul(&pi.pow(3));
        assert!(back.eq_at_precision(&pi));
        assert!(matches!(x.to_ring(), Err(LocalFieldError::NotIntegral { valuation: -2 })));
    }

    #[test]
    fn cancellation_lowers_valuation_knowledge() {
        let t = TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 - 3").build().unwrap();
        let a = FieldElem::from_ring(&(t.one(1) + t.uniformizer(1).pow(5)));
        let b = FieldElem::one(&t, 1);
        assert_eq!(a.sub(&b).valuation().unwrap(), 5);
    }
}
