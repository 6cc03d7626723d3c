//! Elements of a tower level with tracked precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::residue::ResidueElem;
use super::tower::Tower;
use super::{factorize, LocalFieldError};

/// An element of `O_level / π_level^precision`.
///
/// The stored data is the canonical representative: every digit at or beyond
/// `precision` is zero.
#[derive(Clone)]
pub struct RingElem {
    tower: Tower,
    level: usize,
    data: Vec<u64>,
    prec: u32,
}

/// Outcome of [`RingElem::is_root_of_unity_heuristic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer")]
pub enum RootOfUnity {
    Yes { order: u64 },
    NoWithinModel,
}

impl RingElem {
    pub(crate) fn from_raw(tower: &Tower, level: usize, mut data: Vec<u64>, prec: u32) -> Self {
        let prec = prec.min(tower.cap(level));
        tower.raw_truncate(level, &mut data, prec);
        RingElem { tower: tower.clone(), level, data, prec }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Digits of `π_level` known exactly.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.data
    }

    /// Canonical digit vector, usable as a hash key among elements of one level.
    pub fn key(&self) -> &[u64] {
        &self.data
    }

    /// Exact valuation; fails when every known digit is zero.
    pub fn valuation(&self) -> Result<u32, LocalFieldError> {
        self.tower
            .raw_valuation(self.level, &self.data)
            .ok_or(LocalFieldError::IndistinguishableFromZero { precision: self.prec })
    }

    /// Valuation, or the precision when the element is indistinguishable from 0.
    pub fn valuation_or_precision(&self) -> u32 {
        self.tower.raw_valuation(self.level, &self.data).unwrap_or(self.prec)
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Ok(0)
    }

    pub fn residue(&self) -> ResidueElem {
        if self.prec == 0 {
            return self.tower.residue_field().zero();
        }
        self.tower.raw_residue(&self.data)
    }

    /// Equality of the common known digits.
    pub fn eq_at_precision(&self, other: &RingElem) -> bool {
        if !self.same_ring(other) {
            return false;
        }
        (self - other).is_zero_at_precision()
    }

    pub fn same_ring(&self, other: &RingElem) -> bool {
        self.level == other.level && self.tower.ptr_eq(&other.tower)
    }

    /// Forgets every digit at or beyond `prec`.
    pub fn truncate(&self, prec: u32) -> RingElem {
        RingElem::from_raw(&self.tower, self.level, self.data.clone(), prec.min(self.prec))
    }

    /// The same element seen at a higher level.
    pub fn embed(&self, level: usize) -> Result<RingElem, LocalFieldError> {
        if level < self.level || level > self.tower.top() {
            return Err(LocalFieldError::LevelMismatch(format!(
                "cannot embed {} into {}",
                self.tower.level_name(self.level),
                self.tower.level_name(level.min(self.tower.top()))
            )));
        }
        let ratio = self.tower.relative_degree(self.level, level)?;
        let data = self.tower.raw_embed(self.level, level, &self.data);
        Ok(RingElem::from_raw(&self.tower, level, data, self.prec.saturating_mul(ratio)))
    }

    pub fn pow(&self, mut n: u64) -> RingElem {
        let mut acc = self.tower.one(self.level);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow_i64(&self, n: i64) -> Result<RingElem, LocalFieldError> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inverse()?.pow(n.unsigned_abs()))
        }
    }

    /// Inverse of a unit, by Newton iteration.
    pub fn inverse(&self) -> Result<RingElem, LocalFieldError> {
        match self.tower.raw_valuation(self.level, &self.data) {
            None => Err(LocalFieldError::DivisionByIndistinguishableZero),
            Some(0) => {
                let inv = self
                    .tower
                    .raw_inverse(self.level, &self.data)
                    .ok_or(LocalFieldError::PrecisionExhausted)?;
                Ok(RingElem::from_raw(&self.tower, self.level, inv, self.prec))
            }
            Some(v) => Err(LocalFieldError::NotIntegral { valuation: -(v as i64) }),
        }
    }

    /// `self / other` in the ring; fails if the quotient is not integral.
    pub fn checked_div(&self, other: &RingElem) -> Result<RingElem, LocalFieldError> {
        self.check_same(other)?;
        let vb = other.valuation().map_err(|_| LocalFieldError::DivisionByIndistinguishableZero)?;
        if vb == 0 {
            return Ok(self * &other.inverse()?);
        }
        let b = other.div_pi_pow(vb)?;
        let a = match self.valuation() {
            Ok(va) if va < vb => {
                return Err(LocalFieldError::NotIntegral { valuation: va as i64 - vb as i64 })
            }
            Ok(_) => self.div_pi_pow(vb)?,
            Err(_) if self.prec > vb => self.div_pi_pow(vb)?,
            Err(_) => return Err(LocalFieldError::PrecisionExhausted),
        };
        Ok(&a * &b.inverse()?)
    }

    /// Exact division by `π^k`; the element must be divisible.
    pub fn div_pi_pow(&self, k: u32) -> Result<RingElem, LocalFieldError> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.prec <= k {
            return Err(LocalFieldError::PrecisionExhausted);
        }
        if let Some(v) = self.tower.raw_valuation(self.level, &self.data) {
            if v < k {
                return Err(LocalFieldError::NotIntegral { valuation: v as i64 - k as i64 });
            }
        }
        let (data, ceiling) = self.tower.raw_div_uniformizer_pow(self.level, &self.data, k);
        let prec = (self.prec - k).min(ceiling);
        if prec == 0 {
            return Err(LocalFieldError::PrecisionExhausted);
        }
        Ok(RingElem::from_raw(&self.tower, self.level, data, prec))
    }

    /// Multiplication by `π^k`, gaining `k` digits of absolute precision.
    pub fn mul_pi_pow(&self, k: u32) -> RingElem {
        if k == 0 {
            return self.clone();
        }
        let pi = self.tower.raw_pow(self.level, &self.tower.raw_uniformizer(self.level), k as u64);
        let data = self.tower.raw_mul(self.level, &self.data, &pi);
        RingElem::from_raw(&self.tower, self.level, data, self.prec.saturating_add(k))
    }

    /// `(v, u)` with `self = π^v · u` and `u` a unit.
    pub fn unit_part(&self) -> Result<(u32, RingElem), LocalFieldError> {
        let v = self.valuation()?;
        Ok((v, self.div_pi_pow(v)?))
    }

    /// Applies the automorphism `π_level ↦ ζ·π_level` of a binomial step `t^e - c`,
    /// where `ζ` lives one level down and satisfies `ζ^e = 1`.
    pub fn conjugate(&self, zeta: &RingElem) -> Result<RingElem, LocalFieldError> {
        let level = self.level;
        if level == 0 {
            return Err(LocalFieldError::UnsupportedExtensionShape(
                "the base level has no ramified automorphism".into(),
            ));
        }
        let prev = level - 1;
        if zeta.level != prev || !zeta.tower.ptr_eq(&self.tower) {
            return Err(LocalFieldError::LevelMismatch(format!(
                "zeta must lie at level {}",
                self.tower.level_name(prev)
            )));
        }
        let coeffs = self.tower.eisenstein_coefficients(level);
        if coeffs[1..].iter().any(|c| !c.is_zero_at_precision()) {
            return Err(LocalFieldError::UnsupportedExtensionShape(format!(
                "level {} is not defined by a binomial t^e - c",
                self.tower.level_name(level)
            )));
        }
        let e = self.tower.degree(level);
        if !zeta.pow(e as u64).eq_at_precision(&self.tower.one(prev)) {
            return Err(LocalFieldError::UnsupportedExtensionShape(format!(
                "zeta^{e} != 1 at precision"
            )));
        }
        let c = self.tower.size(prev);
        let mut data = Vec::with_capacity(self.data.len());
        let mut zpow = self.tower.raw_one(prev);
        for chunk in self.data.chunks(c) {
            data.extend(self.tower.raw_mul(prev, chunk, &zpow));
            zpow = self.tower.raw_mul(prev, &zpow, zeta.raw());
        }
        let prec = self.prec.min(zeta.prec.saturating_mul(e as u32));
        Ok(RingElem::from_raw(&self.tower, level, data, prec))
    }

    /// Tests `u^((q-1) p^a) = 1` at precision for `a <= max_p_power` and returns the exact
    /// order of the first hit. The default bound is the largest `b` with a primitive
    /// `p^b`-th root of unity possible at this ramification (0 in equal characteristic).
    pub fn is_root_of_unity_heuristic(
        &self,
        max_p_power: Option<u32>,
    ) -> Result<RootOfUnity, LocalFieldError> {
        if !self.is_unit() {
            return Err(LocalFieldError::NonUnit);
        }
        let p = self.tower.p();
        let q = self.tower.residue_field().size();
        let bound = max_p_power.unwrap_or_else(|| {
            if !self.tower.is_mixed() {
                return 0;
            }
            let e = self.tower.abs_ramification(self.level) as u64;
            let mut b = 0;
            while p.pow(b) * (p - 1) <= e {
                b += 1;
            }
            b
        });
        let one = self.tower.one(self.level);
        let mut n = q - 1;
        for a in 0..=bound {
            if a > 0 {
                n *= p;
            }
            if self.pow(n).eq_at_precision(&one) {
                let mut order = n;
                for (l, _) in factorize(n) {
                    while order % l == 0 && self.pow(order / l).eq_at_precision(&one) {
                        order /= l;
                    }
                }
                return Ok(RootOfUnity::Yes { order });
            }
        }
        Ok(RootOfUnity::NoWithinModel)
    }

    fn check_same(&self, other: &RingElem) -> Result<(), LocalFieldError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(LocalFieldError::LevelMismatch(format!(
                "operands at {} and {}",
                self.tower.level_name(self.level),
                other.tower.level_name(other.level)
            )))
        }
    }

    /// Checked binary operation; `op` is one of `+ - * /`.
    pub fn arith(&self, other: &RingElem, op: char) -> Result<RingElem, LocalFieldError> {
        self.check_same(other)?;
        match op {
            '+' => Ok(self + other),
            '-' => Ok(self - other),
            '*' => Ok(self * other),
            '/' => self.checked_div(other),
            _ => Err(LocalFieldError::Parse { position: 0, message: format!("unknown operator {op}") }),
        }
    }

    fn assert_same(&self, other: &RingElem) {
        assert!(
            self.same_ring(other),
            "arithmetic between different rings ({} vs {})",
            self.tower.level_name(self.level),
            other.tower.level_name(other.level)
        );
    }

    fn add_impl(&self, other: &RingElem, negate: bool) -> RingElem {
        self.assert_same(other);
        let mut data = self.data.clone();
        if negate {
            self.tower.raw_sub_assign(&mut data, &other.data);
        } else {
            self.tower.raw_add_assign(&mut data, &other.data);
        }
        RingElem::from_raw(&self.tower, self.level, data, self.prec.min(other.prec))
    }

    fn mul_impl(&self, other: &RingElem) -> RingElem {
        self.assert_same(other);
        let va = self.valuation_or_precision();
        let vb = other.valuation_or_precision();
        let prec = self
            .prec
            .saturating_add(vb)
            .min(other.prec.saturating_add(va))
            .min(self.tower.cap(self.level));
        let data = if va.saturating_add(vb) >= prec {
            self.tower.raw_zero(self.level)
        } else {
            self.tower.raw_mul(self.level, &self.data, &other.data)
        };
        RingElem::from_raw(&self.tower, self.level, data, prec)
    }

    /// Monomials `(coefficient, exponents)` where exponents index the levels `1..=level`
    /// plus the base uniformizer power in equal characteristic.
    fn monomials(&self) -> Vec<(String, Vec<u32>)> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.level + 1];
        self.collect_monomials(self.level, &self.data, self.prec, &mut exps, &mut out);
        out
    }

    fn collect_monomials(
        &self,
        level: usize,
        data: &[u64],
        prec: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<(String, Vec<u32>)>,
    ) {
        if prec == 0 {
            return;
        }
        if level == 0 {
            let base = self.tower.base();
            let p = base.p;
            let s = base.s();
            if let Some(modulus) = base.modulus() {
                let m = if prec >= base.digits { modulus } else { p.pow(prec) };
                let mut terms = Vec::new();
                for (r, &c) in data.iter().enumerate() {
                    let c = c % m;
                    if c == 0 {
                        continue;
                    }
                    let signed: i128 = if c > m / 2 { c as i128 - m as i128 } else { c as i128 };
                    terms.push((signed, r));
                }
                if !terms.is_empty() {
                    out.push((format_z_poly(&terms), exps.clone()));
                }
            } else {
                for (i, digit) in data.chunks(s).enumerate().take(prec as usize) {
                    let terms: Vec<(i128, usize)> = digit
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(r, &c)| {
                            let signed = if c > p / 2 { c as i128 - p as i128 } else { c as i128 };
                            (signed, r)
                        })
                        .collect();
                    if !terms.is_empty() {
                        exps[0] = i as u32;
                        out.push((format_z_poly(&terms), exps.clone()));
                        exps[0] = 0;
                    }
                }
            }
            return;
        }
        let c = self.tower.size(level - 1);
        let e = self.tower.degree(level) as u32;
        for (j, chunk) in data.chunks(c).enumerate() {
            let j = j as u32;
            if prec <= j {
                break;
            }
            exps[level] = j;
            self.collect_monomials(level - 1, chunk, (prec - j).div_ceil(e), exps, out);
        }
        exps[level] = 0;
    }
}

/// Formats `Σ c_r z^r` as a signed monomial coefficient.
fn format_z_poly(terms: &[(i128, usize)]) -> String {
    let mono = |c: i128, r: usize| -> String {
        match (c, r) {
            (c, 0) => c.to_string(),
            (1, 1) => "z".into(),
            (-1, 1) => "-z".into(),
            (c, 1) => format!("{c}*z"),
            (1, r) => format!("z^{r}"),
            (-1, r) => format!("-z^{r}"),
            (c, r) => format!("{c}*z^{r}"),
        }
    };
    if terms.len() == 1 {
        return mono(terms[0].0, terms[0].1);
    }
    let mut s = String::from("(");
    for (i, &(c, r)) in terms.iter().enumerate() {
        let m = mono(c, r);
        if i == 0 {
            s.push_str(&m);
        } else if let Some(rest) = m.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(&m);
        }
    }
    s.push(')');
    s
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tower = &self.tower;
        let mut first = true;
        for (coef, exps) in self.monomials() {
            let mut factors: Vec<String> = Vec::new();
            for (lvl, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                // exps[0] is the base uniformizer power (equal characteristic only)
                let name = tower.level_name(lvl);
                factors.push(if k == 1 { format!("pi_{name}") } else { format!("pi_{name}^{k}") });
            }
            let (neg, body) = match coef.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, coef),
            };
            let text = if factors.is_empty() {
                body
            } else if body == "1" {
                factors.join("*")
            } else {
                format!("{body}*{}", factors.join("*"))
            };
            match (first, neg) {
                (true, false) => write!(f, "{text}")?,
                (true, true) => write!(f, "-{text}")?,
                (false, false) => write!(f, " + {text}")?,
                (false, true) => write!(f, " - {text}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec < tower.cap(self.level) {
            write!(f, " + O(pi_{}^{})", tower.level_name(self.level), self.prec)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem[{}]({})", self.tower.level_name(self.level), self)
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.prec == other.prec && self.data == other.data
    }
}

impl Eq for RingElem {}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                $body(self, rhs)
            }
        }
        impl $trait<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                $body(&self, &rhs)
            }
        }
        impl $trait<&RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                $body(&self, rhs)
            }
        }
        impl $trait<RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &RingElem, b: &RingElem| a.add_impl(b, false));
binop!(Sub, sub, |a: &RingElem, b: &RingElem| a.add_impl(b, true));
binop!(Mul, mul, |a: &RingElem, b: &RingElem| a.mul_impl(b));

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        let data = self.tower.raw_neg(self.level, &self.data);
        RingElem::from_raw(&self.tower, self.level, data, self.prec)
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::super::tower::TowerSpec;
    use super::*;

    fn q2_tower() -> Tower {
        TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2").build().unwrap()
    }

    #[test]
    fn division_by_pi_with_a_non_binomial_step() {
        let t = TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3").build().unwrap();
        let pi = t.uniformizer(1);
        for k in 1..6u32 {
            let (v, u) = pi.pow(k as u64).unit_part().unwrap();
            assert_eq!(v, k);
            assert!(u.eq_at_precision(&t.one(1)), "{u}");
        }
        let x = &pi.pow(3) * &t.from_int(1, 5);
        assert!(x.div_pi_pow(3).unwrap().eq_at_precision(&t.from_int(1, 5)));
    }

    #[test]
    fn difference_of_squares() {
        let t = q2_tower();
        let pi = t.uniformizer(1);
        let one = t.one(1);
        let lhs = (&one + &pi) * (&one - &pi);
        assert!(lhs.eq_at_precision(&(&one - &pi.pow(2))));
    }

    #[test]
    fn geometric_series_inverse() {
        let t = q2_tower();
        let pi = t.uniformizer(1);
        let x = (t.one(1) + &pi).truncate(5);
        let inv = x.inverse().unwrap();
        let mut expected = t.zero(1);
        for k in 0..5u64 {
            let term = pi.pow(k);
            expected = if k % 2 == 0 { expected + term } else { expected - term };
        }
        assert_eq!(inv.precision(), 5);
        assert!(inv.eq_at_precision(&expected));
    }

    #[test]
    fn valuation_of_shifted_unit() {
        let t = q2_tower();
        let pi = t.uniformizer(1);
        let x = pi.pow(3) * (t.one(1) + &pi);
        assert_eq!(x.valuation().unwrap(), 3);
        assert_eq!(t.from_int(1, 2).valuation().unwrap(), 3);
    }

    #[test]
    fn zero_has_no_valuation() {
        let t = q2_tower();
        assert!(matches!(
            t.zero(1).valuation(),
            Err(LocalFieldError::IndistinguishableFromZero { .. })
        ));
    }

    #[test]
    fn division_shifts_out_uniformizer() {
        let t = q2_tower();
        let pi = t.uniformizer(1);
        let a = pi.pow(4) * (t.one(1) + &pi);
        let b = pi.pow(2);
        let q = a.checked_div(&b).unwrap();
        assert!(q.eq_at_precision(&(pi.pow(2) * (t.one(1) + &pi))));
        assert!(matches!(b.checked_div(&a), Err(LocalFieldError::NotIntegral { valuation: -2 })));
    }

    #[test]
    fn teichmuller_of_f4_generator_is_cube_root_of_one() {
        let t = TowerSpec::mixed(2, 2).base_name("K").level("L", "t^2 - 2").build().unwrap();
        let z = t.residue_field().generator();
        let w = t.teichmuller_lift(1, &z);
        assert!(w.pow(3).eq_at_precision(&t.one(1)));
        assert_eq!(w.residue(), z);
        assert!(t.teichmuller_lift(1, &t.residue_field().one()).eq_at_precision(&t.one(1)));
    }

    #[test]
    fn conjugation_negates_square_root() {
        let t = TowerSpec::mixed(2, 1).level("K", "t^3 - 2").level("L", "t^2 - pi_K").build().unwrap();
        let minus_one = t.from_int(1, -1);
        let pi = t.uniformizer(2);
        assert!(pi.conjugate(&minus_one).unwrap().eq_at_precision(&-&pi));
        let x = t.one(2) + &pi;
        assert!(x.conjugate(&minus_one).unwrap().eq_at_precision(&(t.one(2) - &pi)));
    }

    #[test]
    fn conjugation_rejects_non_binomial() {
        let t = TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3").build().unwrap();
        let err = t.uniformizer(1).conjugate(&t.from_int(0, -1)).unwrap_err();
        assert!(matches!(err, LocalFieldError::UnsupportedExtensionShape(_)));
    }

    #[test]
    fn zeta3_is_a_root_of_unity_of_order_3() {
        let t = TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3").build().unwrap();
        let zeta = t.one(1) + t.uniformizer(1);
        assert_eq!(zeta.is_root_of_unity_heuristic(None).unwrap(), RootOfUnity::Yes { order: 3 });
        assert_eq!(t.one(1).is_root_of_unity_heuristic(None).unwrap(), RootOfUnity::Yes { order: 1 });
    }

    #[test]
    fn display_uses_symmetric_digits() {
        let t = q2_tower();
        let x = t.from_int(1, -1) + t.uniformizer(1).pow(2);
        assert_eq!(x.to_string(), "-1 + pi_L^2");
        assert_eq!(x.truncate(5).to_string(), "-1 + pi_L^2 + O(pi_L^5)");
    }
}
