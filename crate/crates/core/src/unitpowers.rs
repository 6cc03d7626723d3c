//! Power membership in the unit group of `R = O_L / π_K O_L`.
//!
//! Since the defining polynomial of `L/K` is Eisenstein, `R ≅ k[t]/(t^d)`; in particular
//! `R` has characteristic `p` even when `L` does not. Verdicts follow algebraic-closure
//! semantics: `Yes` means a solution exists after a finite residue extension.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localfield::{
    p_adic_valuation, parse_element, LocalFieldError, ResidueElem, RingElem, Tower, TowerMap,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitPowersError {
    #[error("element is not a unit of R")]
    NonUnit,
    #[error("element is not a principal unit (residue != 1)")]
    NotPrincipal,
    #[error("enumeration of {size} elements exceeds the guard {guard}")]
    TooLarge { size: u128, guard: u64 },
    #[error("invalid truncated ring: {0}")]
    InvalidRing(String),
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error(transparent)]
    Field(#[from] LocalFieldError),
}

/// Resource limits for the search layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest residue degree tried by the witness search.
    pub s_max: u32,
    /// Largest enumeration size.
    pub guard: u64,
    /// Use the exact Frobenius-digit solver in mixed characteristic.
    pub algebraic_solver: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { s_max: 4, guard: 1 << 24, algebraic_solver: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

/// Why a verdict holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Certificate {
    /// Equal characteristic: `w - 1` is supported on multiples of `p^j` (or not).
    EqualCharSupport { exponents: Vec<u32> },
    /// Every `p^j`-th power of a principal unit is `≡ 1 mod π^threshold`, but `v(w - 1) < threshold`.
    ValuationScreen { threshold: u32, valuation: u32 },
    /// A witness was found by enumerating principal units over `F_{p^s}`.
    ExhaustiveSearch { s: u32 },
    /// A direct algebraic rule.
    Solver { rule: String },
    /// No layer decided within the budget.
    BudgetExhausted { s_max: u32 },
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::EqualCharSupport { .. } => "EqualCharSupport",
            Certificate::ValuationScreen { .. } => "ValuationScreen",
            Certificate::ExhaustiveSearch { .. } => "ExhaustiveSearch",
            Certificate::Solver { .. } => "Solver",
            Certificate::BudgetExhausted { .. } => "BudgetExhausted",
        }
    }
}

/// Outcome of a membership question `u ∈ τ · (R^×)^m`.
#[derive(Debug, Clone, Serialize)]
pub struct PowerMembershipVerdict {
    pub exponent: u64,
    pub answer: Answer,
    pub certificate: Certificate,
    /// `y` with `τ·y^m = u` (or `y^m = w` for principal questions).
    #[serde(skip)]
    pub witness: Option<RingElem>,
    /// Teichmüller constant `τ` absorbed from `O_K^×`.
    #[serde(skip)]
    pub constant: Option<RingElem>,
    pub witness_expr: Option<String>,
    pub constant_expr: Option<String>,
    /// Residue degree of the ring the witness lives in.
    pub witness_residue_degree: Option<u32>,
    pub searched_s: Vec<u32>,
}

impl PowerMembershipVerdict {
    fn new(exponent: u64, answer: Answer, certificate: Certificate) -> Self {
        PowerMembershipVerdict {
            exponent,
            answer,
            certificate,
            witness: None,
            constant: None,
            witness_expr: None,
            constant_expr: None,
            witness_residue_degree: None,
            searched_s: Vec::new(),
        }
    }

    fn with_witness(mut self, w: RingElem) -> Self {
        self.witness_expr = Some(w.to_string());
        self.witness_residue_degree = Some(w.tower().residue_field().degree() as u32);
        self.witness = Some(w);
        self
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

struct Extension {
    /// `None` for the trivial extension.
    map: Option<TowerMap>,
    tower: Tower,
    /// `lift_table[i][r]` is the lift of the `r`-th residue element times `π^i`.
    lift_table: Vec<Vec<RingElem>>,
}

/// The ring `R = O_L / π_K O_L` for levels `K ⊂ L` of a tower.
pub struct TruncatedUnitRing {
    source: Tower,
    reduce: TowerMap,
    l_level: usize,
    k_level: usize,
    d: u32,
    extensions: Mutex<HashMap<u32, Arc<Extension>>>,
    principal_images: Mutex<HashMap<(u32, u32), Arc<HashMap<Vec<u64>, RingElem>>>>,
    unit_powers: Mutex<HashMap<(u32, u64), Arc<HashSet<Vec<u64>>>>>,
}

impl Extension {
    fn apply(&self, x: &RingElem) -> Result<RingElem, LocalFieldError> {
        match &self.map {
            Some(m) => m.apply(x),
            None => Ok(x.clone()),
        }
    }
}

impl std::fmt::Debug for TruncatedUnitRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncatedUnitRing")
            .field("p", &self.p())
            .field("s", &self.residue_degree())
            .field("d", &self.d)
            .field("L", &self.source.level_name(self.l_level))
            .field("K", &self.source.level_name(self.k_level))
            .finish()
    }
}

impl TruncatedUnitRing {
    pub fn new(tower: &Tower, k_level: usize, l_level: usize) -> Result<Self, UnitPowersError> {
        if k_level >= l_level || l_level > tower.top() {
            return Err(UnitPowersError::InvalidRing(format!(
                "need levels K below L, got {k_level} and {l_level}"
            )));
        }
        let d = tower.relative_degree(k_level, l_level)?;
        // π_K and π_L^d generate the same ideal
        let pi_k = tower.uniformizer(k_level).embed(l_level)?;
        let (v, _) = pi_k.unit_part()?;
        if v != d {
            return Err(UnitPowersError::InvalidRing(format!("v_L(π_K) = {v}, expected {d}")));
        }
        let reduce = tower.sub_tower(l_level, d)?;
        Ok(TruncatedUnitRing {
            source: tower.clone(),
            reduce,
            l_level,
            k_level,
            d,
            extensions: Mutex::new(HashMap::new()),
            principal_images: Mutex::new(HashMap::new()),
            unit_powers: Mutex::new(HashMap::new()),
        })
    }

    /// `d = v_L(π_K)`, the length of `R`.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> u64 {
        self.source.p()
    }

    pub fn residue_degree(&self) -> u32 {
        self.source.residue_field().degree() as u32
    }

    pub fn source(&self) -> &Tower {
        &self.source
    }

    pub fn l_level(&self) -> usize {
        self.l_level
    }

    pub fn k_level(&self) -> usize {
        self.k_level
    }

    /// The working tower whose level `L` holds the elements of `R`.
    pub fn tower(&self) -> &Tower {
        self.reduce.target()
    }

    /// Reduction `O_L → R` (elements of lower levels are embedded first).
    pub fn reduce(&self, a: &RingElem) -> Result<RingElem, UnitPowersError> {
        let a = a.embed(self.l_level)?;
        Ok(self.reduce.apply(&a)?.truncate(self.d))
    }

    pub fn parse(&self, expr: &str) -> Result<RingElem, UnitPowersError> {
        self.reduce(&parse_element(expr, &self.source, self.l_level)?)
    }

    pub fn one(&self) -> RingElem {
        self.tower().one(self.l_level).truncate(self.d)
    }

    pub fn uniformizer(&self) -> RingElem {
        self.tower().uniformizer(self.l_level).truncate(self.d)
    }

    /// `p^⌈log_p d⌉`, the exponent of `1 + π_L R`.
    pub fn principal_exponent(&self) -> u64 {
        let p = self.p();
        let mut e = 1u64;
        while e < self.d as u64 {
            e *= p;
        }
        e
    }

    fn check_member(&self, a: &RingElem) -> Result<(), UnitPowersError> {
        if !a.tower().ptr_eq(self.tower()) || a.level() != self.l_level {
            return Err(UnitPowersError::InvalidRing("element does not belong to R".into()));
        }
        Ok(())
    }

    /// `u = τ·w` with `τ` the Teichmüller lift of the residue and `w ∈ 1 + π_L R`.
    pub fn unit_decompose(&self, u: &RingElem) -> Result<(RingElem, RingElem), UnitPowersError> {
        self.check_member(u)?;
        if !u.is_unit() {
            return Err(UnitPowersError::NonUnit);
        }
        let tau = self.tower().teichmuller_lift(self.l_level, &u.residue()).truncate(self.d);
        let w = u * &tau.inverse()?;
        Ok((tau, w))
    }

    /// The digits `c_0, .., c_{d-1} ∈ k` with `x = Σ c_i π_L^i` in `R`.
    pub fn digits(&self, x: &RingElem) -> Vec<ResidueElem> {
        let tower = x.tower();
        let mut out = Vec::with_capacity(self.d as usize);
        let mut cur = x.truncate(self.d);
        for i in 0..self.d {
            let c = cur.residue();
            out.push(c.clone());
            if i + 1 < self.d {
                let rest = &cur - &tower.lift(self.l_level, &c);
                cur = rest.div_pi_pow(1).expect("digit removed");
            }
        }
        out
    }

    /// Decides `w ∈ (1 + π_L R)^{p^j}` over the algebraic closure of the residue field.
    pub fn principal_power_membership(
        &self,
        w: &RingElem,
        j: u32,
        budget: &Budget,
    ) -> Result<PowerMembershipVerdict, UnitPowersError> {
        self.check_member(w)?;
        let p = self.p();
        let m = p.pow(j);
        if w.residue() != self.tower().residue_field().one() {
            return Err(UnitPowersError::NotPrincipal);
        }
        if j == 0 {
            return Ok(PowerMembershipVerdict::new(1, Answer::Yes, Certificate::Solver {
                rule: "exponent 1".into(),
            })
            .with_witness(w.clone()));
        }
        let one = self.one();
        let diff = w - &one;
        if diff.is_zero_at_precision() {
            return Ok(PowerMembershipVerdict::new(m, Answer::Yes, Certificate::Solver {
                rule: "w = 1".into(),
            })
            .with_witness(one));
        }
        if !self.tower().is_mixed() {
            let (ans, support, witness) = self.support_criterion(w, j);
            let v = PowerMembershipVerdict::new(m, ans, Certificate::EqualCharSupport {
                exponents: support,
            });
            return Ok(match witness {
                Some(y) => v.with_witness(y),
                None => v,
            });
        }
        let vw = diff.valuation()?;
        let threshold = self.screen_threshold(j);
        if vw < threshold {
            return Ok(PowerMembershipVerdict::new(m, Answer::No, Certificate::ValuationScreen {
                threshold,
                valuation: vw,
            }));
        }
        if budget.algebraic_solver {
            let (ans, _, witness) = self.support_criterion(w, j);
            let v = PowerMembershipVerdict::new(m, ans, Certificate::Solver {
                rule: "frobenius digits in R = k[t]/(t^d)".into(),
            });
            return Ok(match witness {
                Some(y) => v.with_witness(y),
                None => v,
            });
        }
        let mut searched = Vec::new();
        let s = self.residue_degree();
        let mut s2 = s;
        while s2 <= budget.s_max.max(s) {
            let size = (self.p() as u128).pow(s2 * (self.d - 1));
            if size > budget.guard as u128 {
                break;
            }
            searched.push(s2);
            let images = self.principal_images(s2, j)?;
            let ext = self.extension(s2)?;
            let target = ext.apply(w)?;
            if let Some(y) = images.get(target.key()) {
                let mut v = PowerMembershipVerdict::new(m, Answer::Yes, Certificate::ExhaustiveSearch {
                    s: s2,
                })
                .with_witness(y.clone());
                v.searched_s = searched;
                return Ok(v);
            }
            s2 += s;
        }
        let mut v = PowerMembershipVerdict::new(m, Answer::Inconclusive, Certificate::BudgetExhausted {
            s_max: budget.s_max,
        });
        v.searched_s = searched;
        Ok(v)
    }

    /// Lower bound on `v((1+x)^{p^j} - 1)` over `v(x) >= 1`, from the binomial expansion.
    pub fn screen_threshold(&self, j: u32) -> u32 {
        let p = self.p();
        let e = self.source.abs_ramification(self.l_level);
        (1..=p.pow(j))
            .map(|i| (j - p_adic_valuation(i, p)) * e + i as u32)
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Frobenius-digit criterion: `(1 + Σ a_i π^i)^{p^j} = 1 + Σ a_i^{p^j} π^{i p^j}` in `R`.
    fn support_criterion(&self, w: &RingElem, j: u32) -> (Answer, Vec<u32>, Option<RingElem>) {
        let p = self.p();
        let step = p.pow(j) as u32;
        let digits = self.digits(&(w - &self.one()));
        let support: Vec<u32> =
            (0..self.d).filter(|&i| !digits[i as usize].is_zero()).collect();
        if support.iter().any(|i| i % step != 0) {
            return (Answer::No, support, None);
        }
        let field = self.tower().residue_field();
        let tower = self.tower();
        let pi = self.uniformizer();
        let mut y = self.one();
        for &i in &support {
            let root = field.frobenius_root(&digits[i as usize], j);
            let term = tower.lift(self.l_level, &root).truncate(self.d) * pi.pow((i / step) as u64);
            y = y + term;
        }
        debug_assert!(y.pow(step as u64).eq_at_precision(w));
        (Answer::Yes, support, Some(y))
    }

    /// Decides `u ∈ O_K^× · (R^×)^m`, the constant factor being absorbed as a
    /// Teichmüller lift.
    pub fn mth_power_in_units(
        &self,
        u: &RingElem,
        m: u64,
        budget: &Budget,
    ) -> Result<PowerMembershipVerdict, UnitPowersError> {
        if m == 0 {
            return Err(UnitPowersError::ZeroExponent);
        }
        let (tau, w) = self.unit_decompose(u)?;
        let p = self.p();
        let j = p_adic_valuation(m, p);
        let m_prime = m / p.pow(j);
        let exp = self.principal_exponent();
        let c = (m_prime as i64).extended_gcd(&(exp as i64)).x.rem_euclid(exp as i64) as u64;
        let mut v = self.principal_power_membership(&w, j, budget)?;
        v.exponent = m;
        if j == 0 {
            v.certificate = Certificate::Solver { rule: "exponent prime to p".into() };
        }
        if v.answer != Answer::Yes {
            return Ok(v);
        }
        let root = v.witness.take().expect("Yes carries a witness");
        let y = root.pow(c);
        let (tau, u_img) = if root.tower().ptr_eq(self.tower()) {
            (tau, u.clone())
        } else {
            let ext = self.extension(root.tower().residue_field().degree() as u32)?;
            (ext.apply(&tau)?, ext.apply(u)?)
        };
        if !(&tau * &y.pow(m)).eq_at_precision(&u_img) {
            return Err(UnitPowersError::InvalidRing("witness failed verification".into()));
        }
        v.constant_expr = Some(tau.to_string());
        v.constant = Some(tau);
        Ok(v.with_witness(y))
    }

    fn extension(&self, s2: u32) -> Result<Arc<Extension>, UnitPowersError> {
        if let Some(e) = self.extensions.lock().unwrap().get(&s2) {
            return Ok(e.clone());
        }
        let (map, target) = if s2 == self.residue_degree() {
            (None, self.tower().clone())
        } else {
            let map = self.tower().extend_residue(s2)?;
            let target = map.target().clone();
            (Some(map), target)
        };
        let field = target.residue_field();
        let pi = target.uniformizer(self.l_level).truncate(self.d);
        let lift_table = (0..self.d)
            .map(|i| {
                let pw = pi.pow(i as u64);
                field.elements().map(|r| target.lift(self.l_level, &r).truncate(self.d) * &pw).collect()
            })
            .collect();
        let ext = Arc::new(Extension { map, tower: target, lift_table });
        self.extensions.lock().unwrap().insert(s2, ext.clone());
        Ok(ext)
    }

    fn check_size(&self, s2: u32, digits: u32, guard: u64) -> Result<u64, UnitPowersError> {
        let q = (self.p() as u128).pow(s2);
        let size = q.pow(digits);
        if size > guard as u128 {
            return Err(UnitPowersError::TooLarge { size, guard });
        }
        Ok(q as u64)
    }

    /// Calls `f` on every `Σ_{i in range} lift(r_i) π^i` over `F_{p^s2}`.
    fn enumerate(
        &self,
        ext: &Extension,
        first_digit: u32,
        unit_only: bool,
        mut f: impl FnMut(RingElem),
    ) {
        let target = &ext.tower;
        let q = ext.lift_table[0].len();
        let d = self.d as usize;
        let start = first_digit as usize;
        let mut idx = vec![0usize; d];
        if unit_only {
            idx[0] = 1;
        }
        let base = if start > 0 { self.one_in(target) } else { target.zero(self.l_level).truncate(self.d) };
        loop {
            let mut x = base.clone();
            for i in start..d {
                if idx[i] != 0 {
                    x = x + &ext.lift_table[i][idx[i]];
                }
            }
            f(x);
            let mut k = start;
            loop {
                if k == d {
                    return;
                }
                idx[k] += 1;
                if idx[k] < q {
                    break;
                }
                idx[k] = if unit_only && k == 0 { 1 } else { 0 };
                k += 1;
            }
        }
    }

    fn one_in(&self, tower: &Tower) -> RingElem {
        tower.one(self.l_level).truncate(self.d)
    }

    fn principal_images(&self, s2: u32, j: u32) -> Result<Arc<HashMap<Vec<u64>, RingElem>>, UnitPowersError> {
        if let Some(m) = self.principal_images.lock().unwrap().get(&(s2, j)) {
            return Ok(m.clone());
        }
        let ext = self.extension(s2)?;
        let e = self.p().pow(j);
        let mut map = HashMap::new();
        self.enumerate(&ext, 1, false, |x| {
            map.entry(x.pow(e).key().to_vec()).or_insert(x);
        });
        let map = Arc::new(map);
        self.principal_images.lock().unwrap().insert((s2, j), map.clone());
        Ok(map)
    }

    /// Ground truth over `F_{p^s2}`: is `u` an `m`-th power of a unit of `R ⊗ F_{p^s2}`?
    pub fn power_membership_oracle(
        &self,
        u: &RingElem,
        m: u64,
        s2: u32,
        guard: u64,
    ) -> Result<bool, UnitPowersError> {
        self.check_member(u)?;
        if m == 0 {
            return Err(UnitPowersError::ZeroExponent);
        }
        if s2 == 0 || s2 % self.residue_degree() != 0 {
            return Err(UnitPowersError::InvalidRing(format!(
                "residue degree {s2} is not a multiple of {}",
                self.residue_degree()
            )));
        }
        self.check_size(s2, self.d, guard)?;
        let ext = self.extension(s2)?;
        let key = (s2, m);
        let cached = self.unit_powers.lock().unwrap().get(&key).cloned();
        let set = match cached {
            Some(set) => set,
            None => {
                let mut set = HashSet::new();
                self.enumerate(&ext, 0, true, |x| {
                    set.insert(x.pow(m).key().to_vec());
                });
                let set = Arc::new(set);
                self.unit_powers.lock().unwrap().insert(key, set.clone());
                set
            }
        };
        Ok(set.contains(ext.apply(u)?.key()))
    }

    /// Every unit of `R` over its own residue field, in a fixed order.
    pub fn units(&self, guard: u64) -> Result<Vec<RingElem>, UnitPowersError> {
        let s = self.residue_degree();
        self.check_size(s, self.d, guard)?;
        let ext = self.extension(s)?;
        let mut out = Vec::new();
        self.enumerate(&ext, 0, true, |x| out.push(x));
        Ok(out)
    }

    /// Every principal unit of `R` over its own residue field.
    pub fn principal_units(&self, guard: u64) -> Result<Vec<RingElem>, UnitPowersError> {
        let s = self.residue_degree();
        self.check_size(s, self.d - 1, guard)?;
        let ext = self.extension(s)?;
        let mut out = Vec::new();
        self.enumerate(&ext, 1, false, |x| out.push(x));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::TowerSpec;

    fn ring(spec: TowerSpec) -> TruncatedUnitRing {
        let t = spec.build().unwrap();
        TruncatedUnitRing::new(&t, 0, t.top()).unwrap()
    }

    #[test]
    fn decompose_principal_unit() {
        let r = ring(TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2"));
        let u = r.parse("1 + pi_L").unwrap();
        let (tau, w) = r.unit_decompose(&u).unwrap();
        assert!(tau.eq_at_precision(&r.one()));
        assert!(w.eq_at_precision(&u));
    }

    #[test]
    fn decompose_zeta3() {
        let r = ring(TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3"));
        let zeta = r.parse("1 + pi_L").unwrap();
        let (tau, w) = r.unit_decompose(&zeta).unwrap();
        assert!(tau.pow(3).eq_at_precision(&r.one()));
        assert_eq!(w.residue(), r.tower().residue_field().one());
        assert!((&tau * &w).eq_at_precision(&zeta));
    }

    #[test]
    fn equal_char_support_no() {
        let r = ring(TowerSpec::equal(2, 1).base_name("K").level("L", "t^3 - pi_K"));
        let w = r.parse("1 + pi_L").unwrap();
        let v = r.principal_power_membership(&w, 1, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.certificate, Certificate::EqualCharSupport { exponents: vec![1] });
    }

    #[test]
    fn equal_char_square_root_of_one_plus_pi_squared() {
        let r = ring(TowerSpec::equal(2, 1).base_name("K").level("L", "t^5 - pi_K"));
        let w = r.parse("1 + pi_L^2").unwrap();
        let v = r.principal_power_membership(&w, 1, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.witness.unwrap().eq_at_precision(&r.parse("1 + pi_L").unwrap()));
    }

    #[test]
    fn zeta3_screened_out() {
        let r = ring(TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3"));
        let zeta = r.parse("1 + pi_L").unwrap();
        let (_, w) = r.unit_decompose(&zeta).unwrap();
        let v = r.principal_power_membership(&w, 1, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.certificate, Certificate::ValuationScreen { threshold: 3, valuation: 1 });
    }

    #[test]
    fn oracle_squares_mod_pi_cubed() {
        let r = ring(TowerSpec::equal(2, 1).base_name("K").level("L", "t^3 - pi_K"));
        let squares: Vec<String> = r
            .principal_units(1 << 20)
            .unwrap()
            .into_iter()
            .filter(|x| r.power_membership_oracle(x, 2, 1, 1 << 20).unwrap())
            .map(|x| x.to_string())
            .collect();
        assert_eq!(squares, vec!["1 + O(pi_L^3)", "1 + pi_L^2 + O(pi_L^3)"]);
    }

    #[test]
    fn prime_to_p_exponent_always_yes() {
        let r = ring(TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 - 3"));
        for u in r.units(1 << 20).unwrap() {
            let v = r.mth_power_in_units(&u, 4, &Budget::default()).unwrap();
            assert_eq!(v.answer, Answer::Yes);
        }
    }

    #[test]
    fn inverse_of_one_plus_pi_is_not_a_pth_power() {
        let r = ring(TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2"));
        let u = r.parse("1/(1 + pi_L)").unwrap();
        let v = r.mth_power_in_units(&u, 2, &Budget::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
    }

    #[test]
    fn equal_char_powers_of_one_plus_pi_p() {
        let r = ring(TowerSpec::equal(2, 1).base_name("K").level("L", "t^5 - pi_K"));
        let u = r.parse("1 + pi_L^2").unwrap();
        assert_eq!(r.mth_power_in_units(&u, 2, &Budget::default()).unwrap().answer, Answer::Yes);
        assert_eq!(r.mth_power_in_units(&u, 4, &Budget::default()).unwrap().answer, Answer::No);
        assert!(r.power_membership_oracle(&u, 2, 1, 1 << 20).unwrap());
        assert!(!r.power_membership_oracle(&u, 4, 1, 1 << 20).unwrap());
    }

    #[test]
    fn search_layer_agrees_with_solver() {
        let r = ring(TowerSpec::mixed(2, 1).base_name("K").level("L", "t^5 - 2"));
        let search = Budget { algebraic_solver: false, ..Budget::default() };
        for w in r.principal_units(1 << 20).unwrap() {
            let a = r.principal_power_membership(&w, 1, &Budget::default()).unwrap();
            let b = r.principal_power_membership(&w, 1, &search).unwrap();
            if b.answer != Answer::Inconclusive {
                assert_eq!(a.answer, b.answer, "{w}");
            } else {
                assert_eq!(a.answer, Answer::No, "{w}");
            }
        }
    }

    #[test]
    fn principal_units_have_p_power_exponent() {
        let r = ring(TowerSpec::mixed(3, 1).base_name("K").level("L", "t^4 - 3"));
        let e = r.principal_exponent();
        assert_eq!(e, 9);
        for x in r.principal_units(1 << 20).unwrap() {
            assert!(x.pow(e).eq_at_precision(&r.one()));
        }
    }
}
