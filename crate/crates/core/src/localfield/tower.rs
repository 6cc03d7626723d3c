//! Towers `O_base ⊂ O_1 ⊂ .. ⊂ O_r` of totally ramified Eisenstein extensions over a
//! truncated unramified base.
//!
//! An element of level `i` is stored flat: `e_i` chunks, each an element of level
//! `i - 1`, holding the coefficients of `1, π_i, .., π_i^{e_i - 1}`. All arithmetic is
//! exact in the finite ring `O_i / π_i^{cap_i}` with `cap_i = digits * e_abs(i)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::base::{BaseKind, BaseRing};
use super::elem::RingElem;
use super::parse;
use super::residue::{ResidueElem, ResidueField};
use super::LocalFieldError;
use crate::serde_num;

pub const DEFAULT_PRECISION: u32 = 40;

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

fn default_residue_degree() -> u32 {
    1
}

fn default_base_name() -> String {
    "base".to_string()
}

/// Declarative description of a tower, as read from scenario files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    /// 0 for mixed characteristic, `p` for equal characteristic.
    #[serde(with = "serde_num::u64_str")]
    pub characteristic: u64,
    #[serde(with = "serde_num::u64_str")]
    pub p: u64,
    #[serde(default = "default_residue_degree", with = "serde_num::u32_str")]
    pub residue_degree: u32,
    /// Monic residue polynomial, low degree first. Defaults to the first irreducible one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_poly: Option<Vec<u64>>,
    /// Digits of the deepest uniformizer carried by every computation.
    #[serde(default = "default_precision", with = "serde_num::u32_str")]
    pub precision: u32,
    #[serde(default = "default_base_name")]
    pub base_name: String,
    #[serde(default)]
    pub levels: Vec<LevelSpec>,
}

/// One Eisenstein step: a monic polynomial in `t` over the previous level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub name: String,
    pub poly: String,
}

impl TowerSpec {
    pub fn mixed(p: u64, residue_degree: u32) -> Self {
        TowerSpec {
            characteristic: 0,
            p,
            residue_degree,
            residue_poly: None,
            precision: DEFAULT_PRECISION,
            base_name: default_base_name(),
            levels: Vec::new(),
        }
    }

    pub fn equal(p: u64, residue_degree: u32) -> Self {
        TowerSpec { characteristic: p, ..TowerSpec::mixed(p, residue_degree) }
    }

    pub fn base_name(mut self, name: &str) -> Self {
        self.base_name = name.to_string();
        self
    }

    pub fn precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn level(mut self, name: &str, poly: &str) -> Self {
        self.levels.push(LevelSpec { name: name.to_string(), poly: poly.to_string() });
        self
    }

    pub fn build(&self) -> Result<Tower, LocalFieldError> {
        make_tower(self)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct LevelData {
    pub name: String,
    pub degree: usize,
    pub e_abs: u32,
    pub size: usize,
    /// Non-leading coefficients `a_0 .. a_{e-1}` at the previous level.
    pub poly: Vec<Vec<u64>>,
    /// `π_base / π^{e_abs}`, computed on first use.
    pub eps_inv: OnceLock<Vec<u64>>,
}

struct TowerInner {
    spec: TowerSpec,
    base: BaseRing,
    levels: Vec<LevelData>,
}

/// An immutable, cheaply clonable tower of truncated complete DVRs.
#[derive(Clone)]
pub struct Tower {
    inner: Arc<TowerInner>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.num_levels())
            .map(|i| format!("{}(e={})", self.level_name(i), self.degree(i)))
            .collect();
        f.debug_struct("Tower")
            .field("p", &self.p())
            .field("characteristic", &self.characteristic())
            .field("residue_degree", &self.residue_field().degree())
            .field("digits", &self.digits())
            .field("levels", &names)
            .finish()
    }
}

/// Validates a [`TowerSpec`] and builds the tower, checking every Eisenstein condition.
pub fn make_tower(spec: &TowerSpec) -> Result<Tower, LocalFieldError> {
    let p = spec.p;
    if spec.characteristic != 0 && spec.characteristic != p {
        return Err(LocalFieldError::InvalidTower(format!(
            "characteristic must be 0 or p = {p}, got {}",
            spec.characteristic
        )));
    }
    if spec.precision == 0 {
        return Err(LocalFieldError::InsufficientPrecision("precision must be positive".into()));
    }
    let field = match &spec.residue_poly {
        Some(poly) => {
            let f = ResidueField::new(p, poly.clone())?;
            if f.degree() != spec.residue_degree as usize {
                return Err(LocalFieldError::InvalidTower(format!(
                    "residue polynomial has degree {} but residue_degree is {}",
                    f.degree(),
                    spec.residue_degree
                )));
            }
            f
        }
        None => ResidueField::with_degree(p, spec.residue_degree)?,
    };
    let mut names = vec![spec.base_name.clone()];
    let mut e_top: u32 = 1;
    for level in &spec.levels {
        if names.contains(&level.name) {
            return Err(LocalFieldError::InvalidTower(format!("duplicate level name {}", level.name)));
        }
        if !is_identifier(&level.name) {
            return Err(LocalFieldError::InvalidTower(format!("invalid level name {:?}", level.name)));
        }
        names.push(level.name.clone());
        let deg = parse::poly_degree(&level.poly)?;
        if deg == 0 {
            return Err(LocalFieldError::InvalidTower(format!(
                "level {} polynomial has degree 0",
                level.name
            )));
        }
        e_top = e_top
            .checked_mul(deg as u32)
            .ok_or_else(|| LocalFieldError::InvalidTower("ramification index overflow".into()))?;
    }
    if !is_identifier(&spec.base_name) {
        return Err(LocalFieldError::InvalidTower(format!("invalid level name {:?}", spec.base_name)));
    }
    let digits = spec.precision.div_ceil(e_top).max(2);
    let base = if spec.characteristic == 0 {
        BaseRing::mixed(field, digits).ok_or(LocalFieldError::PrecisionOutOfRange {
            p,
            digits,
        })?
    } else {
        BaseRing::equal(field, digits)
    };
    let chunk = base.chunk();
    let mut inner = TowerInner {
        spec: spec.clone(),
        base,
        levels: vec![LevelData {
            name: spec.base_name.clone(),
            degree: 1,
            e_abs: 1,
            size: chunk,
            poly: Vec::new(),
            eps_inv: OnceLock::new(),
        }],
    };
    for level in &spec.levels {
        let tower = Tower { inner: Arc::new(inner) };
        let prev = tower.num_levels() - 1;
        let coeffs = parse::parse_poly(&level.poly, &tower, prev)?;
        let degree = coeffs.len() - 1;
        let lead = &coeffs[degree];
        if !lead.eq_at_precision(&tower.one(prev)) {
            return Err(LocalFieldError::NonEisenstein {
                level: level.name.clone(),
                coefficient: degree,
                reason: "polynomial is not monic".into(),
            });
        }
        check_eisenstein(&level.name, &coeffs[..degree])?;
        let prev_data = &tower.inner.levels[prev];
        let data = LevelData {
            name: level.name.clone(),
            degree,
            e_abs: prev_data.e_abs * degree as u32,
            size: prev_data.size * degree,
            poly: coeffs[..degree].iter().map(|c| c.raw().to_vec()).collect(),
            eps_inv: OnceLock::new(),
        };
        inner = Arc::try_unwrap(tower.inner).unwrap_or_else(|arc| TowerInner {
            spec: arc.spec.clone(),
            base: arc.base.clone(),
            levels: arc.levels.clone(),
        });
        inner.levels.push(data);
    }
    Ok(Tower { inner: Arc::new(inner) })
}

/// Eisenstein test on the non-leading coefficients `a_0 .. a_{e-1}`.
pub(crate) fn check_eisenstein(level: &str, coeffs: &[RingElem]) -> Result<(), LocalFieldError> {
    for (j, c) in coeffs.iter().enumerate() {
        match c.valuation() {
            Ok(0) => {
                return Err(LocalFieldError::NonEisenstein {
                    level: level.to_string(),
                    coefficient: j,
                    reason: "coefficient is a unit (valuation 0)".into(),
                })
            }
            Ok(v) if j == 0 && v != 1 => {
                return Err(LocalFieldError::NonEisenstein {
                    level: level.to_string(),
                    coefficient: 0,
                    reason: format!("constant term has valuation {v}, expected exactly 1"),
                })
            }
            Ok(_) => {}
            Err(_) if j == 0 => {
                return Err(LocalFieldError::InsufficientPrecision(format!(
                    "constant term of level {level} is indistinguishable from 0"
                )))
            }
            Err(_) => {}
        }
    }
    Ok(())
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Tower {
    pub fn spec(&self) -> &TowerSpec {
        &self.inner.spec
    }

    pub fn p(&self) -> u64 {
        self.inner.base.p
    }

    /// 0 in mixed characteristic, `p` in equal characteristic.
    pub fn characteristic(&self) -> u64 {
        if self.inner.base.is_mixed() {
            0
        } else {
            self.p()
        }
    }

    pub fn is_mixed(&self) -> bool {
        self.inner.base.is_mixed()
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.inner.base.field
    }

    /// Base-uniformizer digits carried (`m` in `p^m` or `u^m`).
    pub fn digits(&self) -> u32 {
        self.inner.base.digits
    }

    /// Number of levels including the base.
    pub fn num_levels(&self) -> usize {
        self.inner.levels.len()
    }

    pub fn top(&self) -> usize {
        self.num_levels() - 1
    }

    pub fn level_name(&self, level: usize) -> &str {
        &self.inner.levels[level].name
    }

    pub fn level_index(&self, name: &str) -> Result<usize, LocalFieldError> {
        self.inner
            .levels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| LocalFieldError::UnknownLevel(name.to_string()))
    }

    /// Degree of the Eisenstein step that creates `level` (1 for the base).
    pub fn degree(&self, level: usize) -> usize {
        self.inner.levels[level].degree
    }

    /// Ramification index of `level` over the base; equals `v_level(p)` in mixed characteristic.
    pub fn abs_ramification(&self, level: usize) -> u32 {
        self.inner.levels[level].e_abs
    }

    /// `[upper : lower]`, also `v_upper(π_lower)`.
    pub fn relative_degree(&self, lower: usize, upper: usize) -> Result<u32, LocalFieldError> {
        if lower > upper {
            return Err(LocalFieldError::LevelMismatch(format!(
                "{} is not below {}",
                self.level_name(lower),
                self.level_name(upper)
            )));
        }
        Ok(self.abs_ramification(upper) / self.abs_ramification(lower))
    }

    /// Precision ceiling of the finite ring at `level`, in `π_level` digits.
    pub fn cap(&self, level: usize) -> u32 {
        self.digits() * self.abs_ramification(level)
    }

    /// Precision in deepest-level digits (at least the requested precision).
    pub fn precision(&self) -> u32 {
        self.cap(self.top())
    }

    /// Coefficients `a_0 .. a_{e-1}` of the defining polynomial of `level`.
    pub fn eisenstein_coefficients(&self, level: usize) -> Vec<RingElem> {
        assert!(level >= 1, "the base level has no defining polynomial");
        let prev = level - 1;
        self.inner.levels[level]
            .poly
            .iter()
            .map(|c| RingElem::from_raw(self, prev, c.clone(), self.cap(prev)))
            .collect()
    }

    pub fn ptr_eq(&self, other: &Tower) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    // ---- element constructors ----

    pub fn zero(&self, level: usize) -> RingElem {
        RingElem::from_raw(self, level, self.raw_zero(level), self.cap(level))
    }

    pub fn one(&self, level: usize) -> RingElem {
        self.from_int(level, 1)
    }

    pub fn from_int(&self, level: usize, n: i128) -> RingElem {
        let base = self.inner.base.from_int(n);
        RingElem::from_raw(self, level, self.raw_from_base(level, &base), self.cap(level))
    }

    /// `π_level`; the base uniformizer is `p` (mixed) or `u` (equal characteristic).
    pub fn uniformizer(&self, level: usize) -> RingElem {
        RingElem::from_raw(self, level, self.raw_uniformizer(level), self.cap(level))
    }

    /// The lift of the residue generator `z` with all higher digits zero.
    pub fn generator(&self, level: usize) -> RingElem {
        let g = self.inner.base.generator();
        RingElem::from_raw(self, level, self.raw_from_base(level, &g), self.cap(level))
    }

    /// Naive lift of a residue element (digits `0..p` in each coefficient).
    pub fn lift(&self, level: usize, r: &ResidueElem) -> RingElem {
        let b = self.inner.base.lift(r);
        RingElem::from_raw(self, level, self.raw_from_base(level, &b), self.cap(level))
    }

    /// The Teichmüller representative of `c`: the fixed point of `x ↦ x^{p^s}` above `c`.
    pub fn teichmuller_lift(&self, level: usize, c: &ResidueElem) -> RingElem {
        let base = &self.inner.base;
        let mut x = base.lift(c);
        if base.is_mixed() {
            let q = self.residue_field().size();
            // each iteration gains at least one p-adic digit
            for _ in 0..=base.digits + 1 {
                let y = self.raw_pow(0, &x, q);
                if y == x {
                    break;
                }
                x = y;
            }
        }
        RingElem::from_raw(self, level, self.raw_from_base(level, &x), self.cap(level))
    }

    /// `v_level(f'(π_level))` for the defining polynomial `f` of `level`.
    pub fn different_valuation(&self, level: usize) -> Result<u32, LocalFieldError> {
        if level == 0 || level > self.top() {
            return Err(LocalFieldError::LevelMismatch(
                "the different is defined for an Eisenstein step (level >= 1)".into(),
            ));
        }
        let e = self.degree(level);
        let pi = self.uniformizer(level);
        let coeffs = self.eisenstein_coefficients(level);
        let mut deriv = self.from_int(level, e as i128) * pi.pow(e as u64 - 1);
        for (j, a) in coeffs.iter().enumerate().skip(1) {
            deriv = deriv + self.from_int(level, j as i128) * a.embed(level)? * pi.pow(j as u64 - 1);
        }
        deriv.valuation().map_err(|_| LocalFieldError::PrecisionExhausted)
    }

    // ---- raw arithmetic on flat data ----

    pub(crate) fn base(&self) -> &BaseRing {
        &self.inner.base
    }

    pub(crate) fn size(&self, level: usize) -> usize {
        self.inner.levels[level].size
    }

    pub(crate) fn raw_zero(&self, level: usize) -> Vec<u64> {
        vec![0; self.size(level)]
    }

    pub(crate) fn raw_from_base(&self, level: usize, chunk: &[u64]) -> Vec<u64> {
        let mut out = self.raw_zero(level);
        out[..chunk.len()].copy_from_slice(chunk);
        out
    }

    pub(crate) fn raw_one(&self, level: usize) -> Vec<u64> {
        self.raw_from_base(level, &self.inner.base.from_int(1))
    }

    pub(crate) fn raw_uniformizer(&self, level: usize) -> Vec<u64> {
        if level == 0 {
            return self.inner.base.uniformizer();
        }
        let c = self.size(level - 1);
        let mut out = self.raw_zero(level);
        if self.degree(level) == 1 {
            // t + a_0 = 0
            let mut neg = self.raw_zero(level - 1);
            self.raw_sub_assign(&mut neg, &self.inner.levels[level].poly[0]);
            out[..c].copy_from_slice(&neg);
        } else {
            out[c..2 * c].copy_from_slice(&self.raw_one(level - 1));
        }
        out
    }

    /// Embeds data of level `from` into level `to >= from`.
    pub(crate) fn raw_embed(&self, from: usize, to: usize, data: &[u64]) -> Vec<u64> {
        debug_assert!(from <= to);
        let mut out = self.raw_zero(to);
        out[..data.len()].copy_from_slice(data);
        out
    }

    pub(crate) fn raw_add_assign(&self, a: &mut [u64], b: &[u64]) {
        let c = self.inner.base.chunk();
        for (x, y) in a.chunks_mut(c).zip(b.chunks(c)) {
            self.inner.base.add_assign(x, y);
        }
    }

    pub(crate) fn raw_sub_assign(&self, a: &mut [u64], b: &[u64]) {
        let c = self.inner.base.chunk();
        for (x, y) in a.chunks_mut(c).zip(b.chunks(c)) {
            self.inner.base.sub_assign(x, y);
        }
    }

    pub(crate) fn raw_neg(&self, level: usize, a: &[u64]) -> Vec<u64> {
        let mut out = self.raw_zero(level);
        self.raw_sub_assign(&mut out, a);
        out
    }

    pub(crate) fn raw_mul(&self, level: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.raw_zero(level);
        self.raw_mul_acc(level, &mut out, a, b);
        out
    }

    /// `acc += a * b` at `level`.
    pub(crate) fn raw_mul_acc(&self, level: usize, acc: &mut [u64], a: &[u64], b: &[u64]) {
        if level == 0 {
            self.inner.base.mul_acc(acc, a, b);
            return;
        }
        let c = self.size(level - 1);
        let e = self.degree(level);
        if e == 1 {
            self.raw_mul_acc(level - 1, acc, a, b);
            return;
        }
        let mut prod = vec![0u64; (2 * e - 1) * c];
        for i in 0..e {
            let ai = &a[i * c..(i + 1) * c];
            if is_zero(ai) {
                continue;
            }
            for j in 0..e {
                let bj = &b[j * c..(j + 1) * c];
                if is_zero(bj) {
                    continue;
                }
                self.raw_mul_acc(level - 1, &mut prod[(i + j) * c..(i + j + 1) * c], ai, bj);
            }
        }
        let poly = &self.inner.levels[level].poly;
        for k in (e..2 * e - 1).rev() {
            let ck = prod[k * c..(k + 1) * c].to_vec();
            if is_zero(&ck) {
                continue;
            }
            for (j, aj) in poly.iter().enumerate() {
                if is_zero(aj) {
                    continue;
                }
                let t = self.raw_mul(level - 1, &ck, aj);
                self.raw_sub_assign(&mut prod[(k - e + j) * c..(k - e + j + 1) * c], &t);
            }
        }
        self.raw_add_assign(acc, &prod[..e * c]);
    }

    pub(crate) fn raw_pow(&self, level: usize, a: &[u64], mut n: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.raw_one(level);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.raw_mul(level, &acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.raw_mul(level, &base, &base);
            }
        }
        acc
    }

    /// Reduces modulo `π_level^prec`, producing the canonical representative.
    pub(crate) fn raw_truncate(&self, level: usize, data: &mut [u64], prec: u32) {
        if level == 0 {
            self.inner.base.truncate(data, prec);
            return;
        }
        let c = self.size(level - 1);
        let e = self.degree(level) as u32;
        for (j, chunk) in data.chunks_mut(c).enumerate() {
            let j = j as u32;
            let pj = if prec > j { (prec - j).div_ceil(e) } else { 0 };
            if pj == 0 {
                chunk.iter_mut().for_each(|x| *x = 0);
            } else {
                self.raw_truncate(level - 1, chunk, pj);
            }
        }
    }

    /// Exact valuation by the filtered-basis rule; `None` if the data is zero.
    pub(crate) fn raw_valuation(&self, level: usize, data: &[u64]) -> Option<u32> {
        if level == 0 {
            return self.inner.base.valuation(data);
        }
        let c = self.size(level - 1);
        let e = self.degree(level) as u32;
        data.chunks(c)
            .enumerate()
            .filter_map(|(j, chunk)| self.raw_valuation(level - 1, chunk).map(|v| e * v + j as u32))
            .min()
    }

    pub(crate) fn raw_residue(&self, data: &[u64]) -> ResidueElem {
        self.inner.base.residue(&data[..self.inner.base.chunk()])
    }

    /// Divides data of valuation `>= k` by `π_level^k`. Returns the quotient and the
    /// precision ceiling up to which it is determined.
    pub(crate) fn raw_div_uniformizer_pow(&self, level: usize, data: &[u64], k: u32) -> (Vec<u64>, u32) {
        if k == 0 {
            return (data.to_vec(), self.cap(level));
        }
        let e = self.abs_ramification(level);
        let t = k.div_ceil(e);
        let shift = t * e - k;
        let mut x = if shift == 0 {
            data.to_vec()
        } else {
            let pi = self.raw_pow(level, &self.raw_uniformizer(level), shift as u64);
            self.raw_mul(level, data, &pi)
        };
        let c = self.inner.base.chunk();
        for chunk in x.chunks_mut(c) {
            self.inner.base.div_uniformizer_pow(chunk, t);
        }
        if e > 1 {
            let eps = self.raw_pow(level, self.eps_inv(level), t as u64);
            x = self.raw_mul(level, &x, &eps);
        }
        let ceiling = self.digits().saturating_sub(t) * e;
        self.raw_truncate(level, &mut x, ceiling);
        (x, ceiling)
    }

    /// `π_base / π^E` for `E = e_abs(level)`, so that `π^{tE} = π_base^t · eps_inv^{-t}`.
    fn eps_inv(&self, level: usize) -> &[u64] {
        self.inner.levels[level].eps_inv.get_or_init(|| {
            let e = self.abs_ramification(level);
            let mut eps = self.raw_pow(level, &self.raw_uniformizer(level), e as u64);
            let c = self.inner.base.chunk();
            for chunk in eps.chunks_mut(c) {
                self.inner.base.div_uniformizer_pow(chunk, 1);
            }
            self.raw_truncate(level, &mut eps, self.digits().saturating_sub(1) * e);
            self.raw_inverse(level, &eps).expect("pi^E / pi_base is a unit")
        })
    }

    /// Inverse of a unit in the finite ring, by Newton iteration from the residue inverse.
    pub(crate) fn raw_inverse(&self, level: usize, a: &[u64]) -> Option<Vec<u64>> {
        let field = self.residue_field();
        let r = self.raw_residue(a);
        let rinv = field.inv(&r)?;
        let one = self.raw_one(level);
        let mut x = self.raw_from_base(level, &self.inner.base.lift(&rinv));
        let mut two = one.clone();
        self.raw_add_assign(&mut two, &one);
        let rounds = 2 + 32 - self.cap(level).leading_zeros();
        for _ in 0..=rounds {
            let ax = self.raw_mul(level, a, &x);
            if ax == one {
                return Some(x);
            }
            let mut corr = two.clone();
            self.raw_sub_assign(&mut corr, &ax);
            x = self.raw_mul(level, &x, &corr);
        }
        (self.raw_mul(level, a, &x) == one).then_some(x)
    }

    /// Applies `f` to every base chunk of `data`.
    pub(crate) fn raw_map_chunks(&self, data: &[u64], f: impl Fn(&[u64]) -> Vec<u64>) -> Vec<u64> {
        data.chunks(self.inner.base.chunk()).flat_map(f).collect()
    }

    // ---- derived towers ----

    /// The tower cut at `top` (inclusive) and carried at `precision` digits of
    /// `π_top`, together with the map sending elements into it.
    pub fn sub_tower(&self, top: usize, precision: u32) -> Result<TowerMap, LocalFieldError> {
        if top > self.top() {
            return Err(LocalFieldError::LevelMismatch(format!("no level {top}")));
        }
        let e_top = self.abs_ramification(top);
        let digits = precision.div_ceil(e_top).max(2).min(self.digits());
        let base = match self.inner.base.kind {
            BaseKind::Mixed { .. } => BaseRing::mixed(self.residue_field().clone(), digits)
                .expect("smaller modulus always fits"),
            BaseKind::Equal => BaseRing::equal(self.residue_field().clone(), digits),
        };
        let kind = MapKind::Truncate;
        let target = self.derive(base, top, &kind, |spec| {
            spec.levels.truncate(top);
            spec.precision = digits * e_top;
        });
        Ok(TowerMap { source: self.clone(), target, kind })
    }

    /// The same tower over the residue extension `F_{p^s2}`; `s2` must be a multiple of `s`.
    pub fn extend_residue(&self, s2: u32) -> Result<TowerMap, LocalFieldError> {
        let field = self.residue_field();
        let s = field.degree() as u32;
        if s2 == 0 || s2 % s != 0 {
            return Err(LocalFieldError::InvalidTower(format!(
                "F_p^{s} does not embed in F_p^{s2}"
            )));
        }
        let field2 = ResidueField::with_degree(self.p(), s2)?;
        let f = field.modulus();
        let root = field2
            .elements()
            .find(|x| {
                let mut acc = field2.zero();
                for &c in f.iter().rev() {
                    acc = field2.add(&field2.mul(&acc, x), &field2.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("a finite field contains every subfield of dividing degree");
        let digits = self.digits();
        let (base2, image_of_z) = match self.inner.base.kind {
            BaseKind::Mixed { .. } => {
                let base2 = BaseRing::mixed(field2.clone(), digits).expect("same modulus");
                let z = hensel_root(&base2, f, &base2.lift(&root));
                (base2, z)
            }
            BaseKind::Equal => {
                let base2 = BaseRing::equal(field2.clone(), digits);
                (base2, root.coeffs().to_vec())
            }
        };
        let kind = MapKind::ResidueEmbed { image_of_z, field2: field2.clone() };
        let target = self.derive(base2, self.top(), &kind, |spec| {
            spec.residue_degree = s2;
            spec.residue_poly = Some(field2.modulus().to_vec());
        });
        Ok(TowerMap { source: self.clone(), target, kind })
    }

    fn derive(
        &self,
        base: BaseRing,
        top: usize,
        kind: &MapKind,
        edit_spec: impl FnOnce(&mut TowerSpec),
    ) -> Tower {
        let mut spec = self.inner.spec.clone();
        edit_spec(&mut spec);
        let mut levels: Vec<LevelData> = Vec::with_capacity(top + 1);
        let chunk = base.chunk();
        levels.push(LevelData {
            name: self.level_name(0).to_string(),
            degree: 1,
            e_abs: 1,
            size: chunk,
            poly: Vec::new(),
            eps_inv: OnceLock::new(),
        });
        for i in 1..=top {
            let src = &self.inner.levels[i];
            let size = levels[i - 1].size * src.degree;
            levels.push(LevelData {
                name: src.name.clone(),
                degree: src.degree,
                e_abs: src.e_abs,
                size,
                poly: src
                    .poly
                    .iter()
                    .map(|c| self.raw_map_chunks(c, |ch| kind.map_chunk(&self.inner.base, &base, ch)))
                    .collect(),
                eps_inv: OnceLock::new(),
            });
        }
        Tower { inner: Arc::new(TowerInner { spec, base, levels }) }
    }
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Newton lift of a simple root of the integer polynomial `f` in the mixed base.
fn hensel_root(base: &BaseRing, f: &[u64], start: &[u64]) -> Vec<u64> {
    let eval = |x: &[u64], poly: &[u64]| {
        let mut acc = base.from_int(0);
        for &c in poly.iter().rev() {
            let mut next = base.from_int(c as i128);
            base.mul_acc(&mut next, &acc, x);
            acc = next;
        }
        acc
    };
    let deriv: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| c * i as u64).collect();
    let mut x = start.to_vec();
    for _ in 0..=base.digits + 1 {
        let fx = eval(&x, f);
        if is_zero(&fx) {
            break;
        }
        let dfx = eval(&x, &deriv);
        let inv = base_inverse(base, &dfx);
        let mut step = base.from_int(0);
        base.mul_acc(&mut step, &fx, &inv);
        base.sub_assign(&mut x, &step);
    }
    x
}

fn base_inverse(base: &BaseRing, a: &[u64]) -> Vec<u64> {
    let r = base.residue(a);
    let rinv = base.field.inv(&r).expect("derivative of a separable polynomial at a simple root");
    let one = base.from_int(1);
    let two = base.from_int(2);
    let mut x = base.lift(&rinv);
    for _ in 0..=2 * base.digits + 2 {
        let mut ax = base.from_int(0);
        base.mul_acc(&mut ax, a, &x);
        if ax == one {
            break;
        }
        let mut corr = two.clone();
        base.sub_assign(&mut corr, &ax);
        let mut nx = base.from_int(0);
        base.mul_acc(&mut nx, &x, &corr);
        x = nx;
    }
    x
}

#[derive(Clone, Debug)]
enum MapKind {
    Truncate,
    ResidueEmbed { image_of_z: Vec<u64>, field2: ResidueField },
}

impl MapKind {
    fn map_chunk(&self, src: &BaseRing, dst: &BaseRing, chunk: &[u64]) -> Vec<u64> {
        match self {
            MapKind::Truncate => match dst.kind {
                BaseKind::Mixed { modulus } => chunk.iter().map(|&c| c % modulus).collect(),
                BaseKind::Equal => chunk[..dst.chunk()].to_vec(),
            },
            MapKind::ResidueEmbed { image_of_z, field2 } => {
                let s = src.s();
                match dst.kind {
                    BaseKind::Mixed { .. } => {
                        let mut acc = dst.from_int(0);
                        let mut zpow = dst.from_int(1);
                        for &c in &chunk[..s] {
                            if c != 0 {
                                dst.mul_acc(&mut acc, &dst.from_int(c as i128), &zpow);
                            }
                            let mut next = dst.from_int(0);
                            dst.mul_acc(&mut next, &zpow, image_of_z);
                            zpow = next;
                        }
                        acc
                    }
                    BaseKind::Equal => {
                        let s2 = field2.degree();
                        let beta = field2.from_coeffs(image_of_z);
                        let mut out = vec![0; dst.chunk()];
                        for (i, digit) in chunk.chunks(s).enumerate() {
                            let mut acc = field2.zero();
                            let mut zpow = field2.one();
                            for &c in digit {
                                acc = field2.add(&acc, &field2.mul(&field2.from_int(c as i64), &zpow));
                                zpow = field2.mul(&zpow, &beta);
                            }
                            out[i * s2..(i + 1) * s2].copy_from_slice(acc.coeffs());
                        }
                        out
                    }
                }
            }
        }
    }
}

/// A structure-preserving map from a tower into a derived tower
/// (precision reduction, level cut, or residue field extension).
#[derive(Clone, Debug)]
pub struct TowerMap {
    source: Tower,
    target: Tower,
    kind: MapKind,
}

impl TowerMap {
    pub fn source(&self) -> &Tower {
        &self.source
    }

    pub fn target(&self) -> &Tower {
        &self.target
    }

    pub fn apply(&self, a: &RingElem) -> Result<RingElem, LocalFieldError> {
        if !a.tower().ptr_eq(&self.source) {
            return Err(LocalFieldError::LevelMismatch("element belongs to another tower".into()));
        }
        if a.level() > self.target.top() {
            return Err(LocalFieldError::LevelMismatch(format!(
                "level {} is cut from the target tower",
                self.source.level_name(a.level())
            )));
        }
        let src = self.source.base();
        let dst = self.target.base();
        let data = self.source.raw_map_chunks(a.raw(), |ch| self.kind.map_chunk(src, dst, ch));
        let prec = a.precision().min(self.target.cap(a.level()));
        Ok(RingElem::from_raw(&self.target, a.level(), data, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_step_tower_over_q2() {
        let t = TowerSpec::mixed(2, 1).level("K", "t^3 - 2").level("L", "t^2 - pi_K").build().unwrap();
        let k = t.level_index("K").unwrap();
        let l = t.level_index("L").unwrap();
        assert_eq!(t.from_int(k, 2).valuation().unwrap(), 3);
        assert_eq!(t.from_int(l, 2).valuation().unwrap(), 6);
        assert_eq!(t.relative_degree(k, l).unwrap(), 2);
        assert!(t.precision() >= DEFAULT_PRECISION);
    }

    #[test]
    fn constant_term_unit_is_rejected() {
        let err = TowerSpec::mixed(2, 1)
            .level("K", "t^3 - 2")
            .level("L", "t^2 - pi_K*t - 1")
            .build()
            .unwrap_err();
        assert!(matches!(err, LocalFieldError::NonEisenstein { coefficient: 0, .. }), "{err:?}");
    }

    #[test]
    fn zeta3_minimal_polynomial_is_eisenstein() {
        let t = TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3").build().unwrap();
        assert_eq!(t.abs_ramification(1), 2);
    }

    #[test]
    fn non_monic_rejected() {
        let err = TowerSpec::mixed(2, 1).level("K", "2*t^2 - 2").build().unwrap_err();
        assert!(matches!(err, LocalFieldError::NonEisenstein { .. }));
    }

    #[test]
    fn extended_residue_keeps_valuations() {
        let t = TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2").build().unwrap();
        let map = t.extend_residue(2).unwrap();
        let x = t.uniformizer(1).pow(2) + t.from_int(1, 4);
        let y = map.apply(&x).unwrap();
        assert_eq!(y.valuation().unwrap(), 2);
        assert_eq!(map.target().residue_field().degree(), 2);
        let pi = map.target().uniformizer(1);
        assert!(pi.pow(3).eq_at_precision(&map.target().from_int(1, 2)));
    }

    #[test]
    fn sub_tower_lowers_precision() {
        let t = TowerSpec::equal(2, 1).base_name("K").level("L", "t^5 - pi_K").build().unwrap();
        let map = t.sub_tower(1, 10).unwrap();
        assert_eq!(map.target().cap(1), 10);
        let x = t.uniformizer(1) + t.one(1);
        let y = map.apply(&x).unwrap();
        assert_eq!(y.precision(), 10);
        assert!(y.pow(2).eq_at_precision(&(map.target().one(1) + map.target().uniformizer(1).pow(2))));
    }
}
