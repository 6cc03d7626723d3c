//! Tame base change: stabilization indices, component-group growth and split certificates.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kodaira::KodairaType;
use crate::localfield::p_adic_valuation;
use crate::serde_num;
use crate::weierstrass::ogg_discriminant;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TameError {
    #[error("unknown reduction type {0}")]
    UnknownType(String),
    #[error("{a} does not divide {e}")]
    NotDivisor { e: u64, a: u64 },
    #[error("{d} is not prime to p = {p}")]
    NotTame { d: u64, p: u64 },
    #[error("inconsistent input: {0}")]
    InputInconsistent(String),
    #[error("jump {jump} has a denominator divisible by p = {p}")]
    DenominatorNotPrimeToP { jump: String, p: u64 },
    #[error("jumps inconsistent with e = {e}: {reason}")]
    InconsistentWithE { e: u64, reason: String },
    #[error("jump {0} is outside [0, 1)")]
    JumpOutOfRange(String),
    #[error("integer overflow")]
    Overflow,
}

fn require_tame(d: u64, p: u64) -> Result<(), TameError> {
    if d == 0 || d.gcd(&p) != 1 {
        return Err(TameError::NotTame { d, p });
    }
    Ok(())
}

/// Tame semistability degree of an elliptic reduction type.
pub fn elliptic_stabilization_index(t: KodairaType) -> u64 {
    match t {
        KodairaType::Good | KodairaType::I(_) => 1,
        KodairaType::IStar(_) => 2,
        KodairaType::IV | KodairaType::IVStar => 3,
        KodairaType::III | KodairaType::IIIStar => 4,
        KodairaType::II | KodairaType::IIStar => 6,
    }
}

/// `e(C_{K(a)}) = e(C/K) / a`.
pub fn stabilization_rescale(e: u64, a: u64, p: u64) -> Result<u64, TameError> {
    require_tame(a, p)?;
    if e % a != 0 {
        return Err(TameError::NotDivisor { e, a });
    }
    Ok(e / a)
}

/// `|Φ(J_{K(d)})| = (d/a)^{t} |Φ(J_{K(a)})|`.
pub fn tame_phi_order(phi_a: u64, t_a: u32, ratio: u64) -> Result<u64, TameError> {
    ratio
        .checked_pow(t_a)
        .and_then(|r| r.checked_mul(phi_a))
        .ok_or(TameError::Overflow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JacobianCertificate {
    SplitGuaranteed,
    NoGuarantee,
}

/// Split after the tame base change of degree `d` whenever `d > e`.
pub fn jacobian_split_certificate(e: u64, d: u64, p: u64) -> Result<JacobianCertificate, TameError> {
    require_tame(d, p)?;
    Ok(if d > e { JacobianCertificate::SplitGuaranteed } else { JacobianCertificate::NoGuarantee })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EllipticDecision {
    Split,
    NoGuarantee,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticSplitReport {
    pub decision: EllipticDecision,
    pub branch: String,
    pub trace: Vec<String>,
}

/// Reduction of `E_{K(d)}` for tame `d`, where `[L:K]` is the semistability degree.
pub fn elliptic_split_after(
    t: KodairaType,
    l_degree: u64,
    delta: u64,
    v_disc: u64,
    d: u64,
    p: u64,
) -> Result<EllipticSplitReport, TameError> {
    require_tame(d, p)?;
    let mut trace = vec![format!("d = {d} is prime to p = {p}")];
    let done = |decision, branch: &str, trace: Vec<String>| {
        Ok(EllipticSplitReport { decision, branch: branch.into(), trace })
    };
    if l_degree == 0 {
        return Err(TameError::InputInconsistent("[L:K] must be positive".into()));
    }
    if t.is_semistable() {
        let expected = match t {
            KodairaType::I(n) => n as u64,
            _ => 0,
        };
        if delta != 0 || v_disc != expected {
            return Err(TameError::InputInconsistent(format!(
                "type {t} needs delta = 0 and v(Delta) = {expected}"
            )));
        }
        trace.push(format!("type {t} is semistable"));
        return done(EllipticDecision::Split, "semi-abelian reduction", trace);
    }
    let ogg = ogg_discriminant(t, delta as u32).map_err(|e| TameError::UnknownType(e.to_string()))? as u64;
    if ogg != v_disc {
        return Err(TameError::InputInconsistent(format!(
            "Ogg's formula gives v(Delta) = {ogg} for type {t} with delta = {delta}, got {v_disc}"
        )));
    }
    trace.push(format!("Ogg: v(Delta) = {v_disc}"));
    if l_degree == 1 {
        return Err(TameError::InputInconsistent(format!("additive type {t} with [L:K] = 1")));
    }
    if matches!(t, KodairaType::IV | KodairaType::IVStar) && l_degree == 2 {
        return Err(TameError::InputInconsistent(format!(
            "type {t} has a component group of order 3, which is not killed by [L:K] = 2"
        )));
    }
    if d >= 4 {
        trace.push("tame base change of degree >= 4".into());
        return done(EllipticDecision::Split, "degree at least 4", trace);
    }
    if d <= l_degree {
        trace.push(format!("d = {d} <= [L:K] = {l_degree}"));
        return done(EllipticDecision::NoGuarantee, "d not above [L:K]", trace);
    }
    if d == 3 {
        if let KodairaType::IStar(_) = t {
            trace.push("e = 2 < d = 3".into());
            return done(EllipticDecision::Split, "stabilization index 2", trace);
        }
        if delta == 1 {
            if l_degree == 2 {
                return Err(TameError::InputInconsistent(format!(
                    "delta = 1 forces v(Delta) = {v_disc} in {{3, 4, 10, 11}}, impossible with [L:K] = 2"
                )));
            }
            trace.push(format!("delta(E_K(3)) = 3 with [L:K] = {l_degree}"));
            return done(EllipticDecision::NoGuarantee, "tame delta", trace);
        }
        trace.push(format!("delta(E_K(3)) = {} is outside [1, 3]", 3 * delta));
        return done(EllipticDecision::Split, "tame delta", trace);
    }
    // d = 2 > [L:K] = 1 was excluded above
    done(EllipticDecision::NoGuarantee, "no rule applies", trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JumpsSummary {
    /// Number of nonzero jumps.
    pub u: u64,
    pub lcm_denominator: u64,
}

pub fn jumps_summary(jumps: &[Ratio<u64>], e: Option<u64>, p: u64) -> Result<JumpsSummary, TameError> {
    let mut lcm = 1u64;
    let mut u = 0;
    for j in jumps {
        if *j.numer() >= *j.denom() {
            return Err(TameError::JumpOutOfRange(j.to_string()));
        }
        if j.denom().gcd(&p) != 1 {
            return Err(TameError::DenominatorNotPrimeToP { jump: j.to_string(), p });
        }
        lcm = lcm.lcm(j.denom());
        if *j.numer() != 0 {
            u += 1;
        }
    }
    if let Some(e) = e {
        if e % lcm != 0 {
            return Err(TameError::InconsistentWithE { e, reason: format!("{lcm} does not divide {e}") });
        }
        if let Some(min) = jumps.iter().filter(|j| *j.numer() != 0).min() {
            if *min < Ratio::new(1, e) {
                return Err(TameError::InconsistentWithE { e, reason: format!("jump {min} < 1/{e}") });
            }
        }
    }
    Ok(JumpsSummary { u, lcm_denominator: lcm })
}

/// Reduction data of a semi-abelian variety or a Jacobian; absent fields are unknown.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionDatum {
    #[serde(with = "serde_num::u64_str")]
    pub p: u64,
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub genus: Option<u64>,
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub stabilization_index: Option<u64>,
    /// Toric rank of the abelian part.
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub toric_rank: Option<u64>,
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub phi_order: Option<u64>,
    #[serde(default)]
    pub kodaira: Option<KodairaType>,
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub delta: Option<u64>,
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub v_disc: Option<u64>,
    /// Jumps as `"a/b"` strings.
    #[serde(default)]
    pub jumps: Option<Vec<String>>,
    #[serde(default)]
    pub semi_abelian_reduction: Option<bool>,
    /// Degree of the minimal extension with semi-abelian reduction.
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub l_degree: Option<u64>,
    /// Degree of a tame base change to certify.
    #[serde(default, with = "serde_num::opt_u64_str")]
    pub base_change_degree: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TameCertificate {
    pub name: String,
    pub applies_to: String,
    pub hypotheses: Vec<String>,
}

impl ReductionDatum {
    /// The stabilization index, from the elliptic table when not supplied.
    pub fn effective_stabilization_index(&self) -> Option<u64> {
        self.stabilization_index.or(self.kodaira.map(elliptic_stabilization_index))
    }

    pub fn parsed_jumps(&self) -> Result<Option<Vec<Ratio<u64>>>, TameError> {
        self.jumps
            .as_ref()
            .map(|js| {
                js.iter()
                    .map(|s| s.trim().parse::<Ratio<u64>>().map_err(|_| TameError::JumpOutOfRange(s.clone())))
                    .collect()
            })
            .transpose()
    }

    pub fn validate(&self) -> Result<(), TameError> {
        if let Some(e) = self.stabilization_index {
            if e == 0 {
                return Err(TameError::InconsistentWithE { e, reason: "e must be positive".into() });
            }
        }
        if let Some(jumps) = self.parsed_jumps()? {
            if let Some(g) = self.genus {
                if jumps.len() as u64 > g {
                    return Err(TameError::InputInconsistent(format!(
                        "{} jumps for genus {g}",
                        jumps.len()
                    )));
                }
            }
            jumps_summary(&jumps, self.effective_stabilization_index(), self.p)?;
        }
        Ok(())
    }
}

/// Every split guarantee whose hypotheses are met by `datum`.
pub fn tame_split_certificates(datum: &ReductionDatum) -> Vec<TameCertificate> {
    let p = datum.p;
    let cert = |name: &str, applies_to: &str, hypotheses: Vec<String>| TameCertificate {
        name: name.into(),
        applies_to: applies_to.into(),
        hypotheses,
    };
    let mut out = Vec::new();
    if let Some(phi) = datum.phi_order {
        if phi > 0 && phi % p != 0 {
            out.push(cert("component_group_prime_to_p", "K", vec![format!("|Phi| = {phi} is prime to p = {p}")]));
        }
    }
    if datum.semi_abelian_reduction == Some(true) {
        out.push(cert("semi_abelian_reduction", "K", vec!["identity component is semi-abelian".into()]));
    }
    if let (Some(l), Some(0)) = (datum.l_degree, datum.toric_rank) {
        if l.gcd(&p) == 1 {
            out.push(cert(
                "tame_semistability",
                "K",
                vec![format!("[L:K] = {l} is prime to p = {p}"), "abelian part has toric rank 0".into()],
            ));
        }
    }
    if datum.delta == Some(0) && datum.genus.unwrap_or(1) == 1 && datum.kodaira.is_some() {
        out.push(cert("tame_swan", "K", vec!["delta(E/K) = 0 so L/K is tame".into()]));
    }
    if let Some(d) = datum.base_change_degree {
        if let Some(e) = datum.effective_stabilization_index() {
            if let Ok(JacobianCertificate::SplitGuaranteed) = jacobian_split_certificate(e, d, p) {
                out.push(cert(
                    "tame_base_change",
                    &format!("K({d})"),
                    vec![format!("d = {d} is prime to p = {p}"), format!("d = {d} > e = {e}")],
                ));
            }
        }
        if let (Some(t), Some(l), Some(delta), Some(vd)) = (datum.kodaira, datum.l_degree, datum.delta, datum.v_disc) {
            if let Ok(rep) = elliptic_split_after(t, l, delta, vd, d, p) {
                if rep.decision == EllipticDecision::Split {
                    out.push(cert("elliptic_base_change", &format!("K({d})"), rep.trace));
                }
            }
        }
    }
    out
}

/// `v_p` of the component group is unchanged by tame base change.
pub fn phi_p_part_preserved(phi_a: u64, t_a: u32, ratio: u64, p: u64) -> Result<bool, TameError> {
    let phi_d = tame_phi_order(phi_a, t_a, ratio)?;
    Ok(p_adic_valuation(phi_d, p) == p_adic_valuation(phi_a, p))
}
