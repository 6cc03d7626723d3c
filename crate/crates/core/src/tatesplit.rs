//! Tate curves over `L` and the reduction of their Weil restriction to `K`.
//!
//! For `E = G_m / q^Z` with `n = v_L(q)`, the component group is `Z/nZ`. An element of
//! order `m | n` lifts to a point of the same order exactly when `π_L^n / q` is an
//! `m`-th power in `(O_L/π_K O_L)^×`.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::localfield::{p_adic_valuation, FieldElem, LocalFieldError, RingElem, Tower};
use crate::status::SplitStatus;
use crate::unitpowers::{
    Answer, Budget, Certificate, PowerMembershipVerdict, TruncatedUnitRing, UnitPowersError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TateError {
    #[error("v_L(q) must be positive, got {0}")]
    NonPositiveValuation(i64),
    #[error("{m} does not divide n = {n}")]
    NotDivisor { m: u64, n: u32 },
    #[error(transparent)]
    UnitPowers(#[from] UnitPowersError),
    #[error(transparent)]
    Field(#[from] LocalFieldError),
}

/// The Tate curve attached to `q ∈ L^×` with `v_L(q) > 0`, together with `K ⊂ L`.
#[derive(Debug, Clone)]
pub struct TateCurve {
    ring: Arc<TruncatedUnitRing>,
    q: RingElem,
    n: u32,
}

/// Dimension bookkeeping for `A = Res_{L/K} E`: `dim A = 1 + (d - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionData {
    pub dim: u32,
    pub toric_rank: u32,
    pub unipotent_dim: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct TateRestrictionReport {
    pub p: u64,
    pub d: u32,
    pub n: u32,
    /// `r = v_p(n)`.
    pub p_valuation: u32,
    /// Largest `j <= r` such that elements of order `p^j` lift; `None` if undecided.
    pub lifting_exponent: Option<u32>,
    pub status: SplitStatus,
    /// Verdicts for `m = p, p^2, ..` in scan order.
    pub verdicts: Vec<PowerMembershipVerdict>,
    pub dimension: DimensionData,
    /// The certificate that stopped the scan, when the status is inconclusive.
    pub blocking: Option<Certificate>,
}

impl TateCurve {
    pub fn new(tower: &Tower, k_level: usize, l_level: usize, q: &RingElem) -> Result<Self, TateError> {
        let ring = TruncatedUnitRing::new(tower, k_level, l_level)?;
        TateCurve::with_ring(Arc::new(ring), q)
    }

    /// Shares an existing `R = O_L/π_K O_L` (and its enumeration caches).
    pub fn with_ring(ring: Arc<TruncatedUnitRing>, q: &RingElem) -> Result<Self, TateError> {
        let q = q.embed(ring.l_level())?;
        let n = q.valuation()?;
        if n == 0 {
            return Err(TateError::NonPositiveValuation(0));
        }
        Ok(TateCurve { ring, q, n })
    }

    pub fn q(&self) -> &RingElem {
        &self.q
    }

    pub fn ring(&self) -> &TruncatedUnitRing {
        &self.ring
    }

    /// `|Φ(E)| = v_L(q)`.
    pub fn component_group_order(&self) -> u32 {
        self.n
    }

    /// The component of the point represented by `z ∈ L^×`: `v_L(z) mod n`.
    pub fn component_of_point(&self, z: &FieldElem) -> Result<u32, TateError> {
        Ok(z.valuation()?.rem_euclid(self.n as i64) as u32)
    }

    /// `π_L^n / q` reduced into `R`.
    pub fn normalized_unit(&self) -> Result<RingElem, TateError> {
        let (_, unit) = self.q.unit_part()?;
        Ok(self.ring.reduce(&unit.inverse()?)?)
    }

    /// Does an element of order `m` of `Φ` lift to a point of order `m`?
    pub fn lifts_order_m(&self, m: u64, budget: &Budget) -> Result<PowerMembershipVerdict, TateError> {
        if m == 0 || self.n as u64 % m != 0 {
            return Err(TateError::NotDivisor { m, n: self.n });
        }
        let u = self.normalized_unit()?;
        Ok(self.ring.mth_power_in_units(&u, m, budget)?)
    }

    pub fn split_status(&self, budget: &Budget) -> Result<TateRestrictionReport, TateError> {
        let p = self.ring.p();
        let d = self.ring.d();
        let r = p_adic_valuation(self.n as u64, p);
        let mut verdicts = Vec::new();
        let mut j_star = Some(0);
        let mut blocking = None;
        for j in 1..=r {
            let v = self.lifts_order_m(p.pow(j), budget)?;
            let answer = v.answer;
            if answer == Answer::Inconclusive {
                blocking = Some(v.certificate.clone());
            }
            verdicts.push(v);
            match answer {
                Answer::Yes => j_star = Some(j),
                Answer::No => break,
                Answer::Inconclusive => {
                    j_star = None;
                    break;
                }
            }
        }
        let status = match j_star {
            None => SplitStatus::Inconclusive,
            Some(j) if j == r => SplitStatus::Split,
            Some(0) => SplitStatus::TotallyNotSplit,
            Some(_) => SplitStatus::NotSplit,
        };
        Ok(TateRestrictionReport {
            p,
            d,
            n: self.n,
            p_valuation: r,
            lifting_exponent: j_star,
            status,
            verdicts,
            dimension: DimensionData { dim: d, toric_rank: 1, unipotent_dim: d - 1 },
            blocking,
        })
    }
}
