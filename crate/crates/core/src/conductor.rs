//! Swan-conductor identities, the Brumer–Kramer bound and consistency validators.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::kodaira::KodairaType;
use crate::localfield::p_adic_valuation;
use crate::status::SplitStatus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConductorError {
    #[error("bound is not integral: 2*d_a = {0} is not an integer")]
    NonIntegralBound(String),
    #[error("the restriction formula is only applied to extensions of degree p = {p}, got {degree}")]
    DegreeGuard { degree: u64, p: u64 },
    #[error("formula evaluates to the negative value {0}")]
    NegativeResult(i64),
    #[error("d = {d} is not prime to p = {p}")]
    NotTame { d: u64, p: u64 },
}

/// `λ_p(n) = Σ i r_i p^i` over the base-`p` digits `r_i` of `n`.
pub fn lambda_p(n: u64, p: u64) -> u64 {
    let mut out = 0;
    let mut rest = n;
    let mut i = 0;
    let mut pi = 1u64;
    while rest > 0 {
        out += i * (rest % p) * pi;
        rest /= p;
        i += 1;
        pi = pi.saturating_mul(p);
    }
    out
}

/// `2(d_t + d_a) p v + (p - 1)(2 λ_p(d_t) + λ_p(2 d_a)) v` with `d_a = two_da / 2`.
pub fn bk_bound(p: u64, v_kp: u64, d_t: u64, two_da: u64) -> u64 {
    (2 * d_t + two_da) * p * v_kp + (p - 1) * (2 * lambda_p(d_t, p) + lambda_p(two_da, p)) * v_kp
}

/// [`bk_bound`] for a rational `d_a`; `2 d_a` must be a non-negative integer.
pub fn bk_bound_rational(p: u64, v_kp: u64, d_t: u64, d_a: Ratio<i64>) -> Result<u64, ConductorError> {
    let two = d_a * 2;
    if !two.is_integer() || *two.numer() < 0 {
        return Err(ConductorError::NonIntegralBound(two.to_string()));
    }
    Ok(bk_bound(p, v_kp, d_t, two.to_integer() as u64))
}

/// `δ(A/K) = δ(E/L) + 2(v_L(D_{L/K}) - (p - 1))` for `[L:K] = p`.
pub fn swan_weil_restriction(delta_e: u64, v_different: u64, p: u64, degree: u64) -> Result<u64, ConductorError> {
    if degree != p {
        return Err(ConductorError::DegreeGuard { degree, p });
    }
    swan_weil_restriction_unchecked(delta_e, v_different, p)
}

/// The restriction formula without the degree guard.
pub fn swan_weil_restriction_unchecked(delta_e: u64, v_different: u64, p: u64) -> Result<u64, ConductorError> {
    let value = delta_e as i64 + 2 * (v_different as i64 - (p as i64 - 1));
    if value < 0 {
        return Err(ConductorError::NegativeResult(value));
    }
    Ok(value as u64)
}

/// Swan conductor of the norm-one torus of a quadratic `M/L`: `v_M(D_{M/L}) - 1`.
pub fn swan_norm_torus(v_different: u64) -> u64 {
    v_different.saturating_sub(1)
}

/// `δ(E/L) = 2 δ(torus)`.
pub fn swan_tate_from_norm_torus(delta_torus: u64) -> u64 {
    2 * delta_torus
}

/// `δ(E_{K(d)}) = d δ(E/K)` for tame `d`.
pub fn swan_tame_scaling(delta: u64, d: u64, p: u64) -> Result<u64, ConductorError> {
    if num_integer::gcd(d, p) != 1 {
        return Err(ConductorError::NotTame { d, p });
    }
    Ok(d * delta)
}

/// `δ(A/K) = δ(E/L) + 2p v_a - (p - 1)` in characteristic `p`.
pub fn equal_char_swan_family(delta_e: u64, p: u64, v_a: u64) -> Result<u64, ConductorError> {
    let value = delta_e as i64 + 2 * p as i64 * v_a as i64 - (p as i64 - 1);
    if value < 0 {
        return Err(ConductorError::NegativeResult(value));
    }
    Ok(value as u64)
}

/// One inequality with both sides recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: i64,
    pub relation: String,
    pub rhs: i64,
    pub holds: bool,
}

impl BoundCheck {
    fn le(name: &str, lhs: i64, rhs: i64) -> Self {
        BoundCheck { name: name.into(), lhs, relation: "<=".into(), rhs, holds: lhs <= rhs }
    }

    fn eq(name: &str, lhs: i64, rhs: i64) -> Self {
        BoundCheck { name: name.into(), lhs, relation: "==".into(), rhs, holds: lhs == rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub checks: Vec<BoundCheck>,
    pub note: Option<String>,
}

impl Verdict {
    fn from_checks(checks: Vec<BoundCheck>, note: Option<String>) -> Self {
        let pass = checks.iter().all(|c| c.holds);
        Verdict { pass, checks, note }
    }

    /// The first violated inequality.
    pub fn violation(&self) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

/// Consistency of a split status with the Swan conductor of an elliptic curve.
pub fn validate_elliptic_bounds(status: SplitStatus, delta: u64, kodaira: Option<KodairaType>) -> Verdict {
    let d = delta as i64;
    match status {
        SplitStatus::TotallyNotSplit => Verdict::from_checks(
            vec![BoundCheck::le("1 <= delta", 1, d), BoundCheck::le("delta <= 3", d, 3)],
            None,
        ),
        SplitStatus::NotSplit => match kodaira {
            Some(KodairaType::IStar(m)) if m % 2 == 0 => {
                let n = (m / 2) as i64;
                Verdict::from_checks(
                    vec![BoundCheck::le("1 <= delta", 1, d), BoundCheck::le("delta <= 2n + 3", d, 2 * n + 3)],
                    None,
                )
            }
            Some(t) => Verdict {
                pass: false,
                checks: vec![],
                note: Some(format!("not split but not totally requires type I_2n^*, got {t}")),
            },
            None => Verdict {
                pass: false,
                checks: vec![],
                note: Some("not split but not totally requires the reduction type".into()),
            },
        },
        SplitStatus::Split | SplitStatus::Inconclusive => Verdict::from_checks(vec![], None),
    }
}

/// `(dim S + 1) ord_p(dim S + 1) v_K(p)`.
pub fn quotient_torus_threshold(dim_s: u64, p: u64, v_kp: u64) -> u64 {
    (dim_s + 1) * p_adic_valuation(dim_s + 1, p) as u64 * v_kp
}

/// Consistency of a split status with the Swan conductor of a torus `S/K`.
pub fn validate_quotient_torus(dim_s: u64, delta: u64, status: SplitStatus, p: u64, v_kp: u64) -> Verdict {
    let in_range = 1 <= delta && delta <= dim_s;
    let totally = status == SplitStatus::TotallyNotSplit;
    let mut checks = vec![BoundCheck::eq(
        "(1 <= delta <= dim S) iff totally not split",
        in_range as i64,
        totally as i64,
    )];
    let threshold = quotient_torus_threshold(dim_s, p, v_kp);
    if delta >= threshold {
        checks.push(BoundCheck::eq(
            "delta >= threshold implies split",
            status.is_split() as i64,
            1,
        ));
    }
    Verdict::from_checks(checks, Some(format!("split threshold {threshold}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_p(0, 2), 0);
        assert_eq!(lambda_p(1, 3), 0);
        assert_eq!(lambda_p(3, 2), 2);
        assert_eq!(lambda_p(10, 3), 18);
        for p in [2u64, 3, 5] {
            for i in 0..=6u32 {
                assert_eq!(lambda_p(p.pow(i), p), i as u64 * p.pow(i));
            }
        }
    }

    #[test]
    fn bk_examples() {
        for v in 1..5 {
            assert_eq!(bk_bound(2, v, 1, 0), 4 * v);
            assert_eq!(bk_bound(3, v, 1, 0), 6 * v);
            assert_eq!(bk_bound(2, v, 0, 2), 6 * v);
            assert_eq!(bk_bound(3, v, 0, 1), 3 * v);
            assert_eq!(bk_bound_rational(3, v, 0, Ratio::new(1, 2)).unwrap(), 3 * v);
        }
        assert_eq!(bk_bound(5, 3, 0, 0), 0);
        assert!(matches!(
            bk_bound_rational(3, 1, 0, Ratio::new(1, 3)),
            Err(ConductorError::NonIntegralBound(_))
        ));
    }

    #[test]
    fn restriction_formula() {
        for d in 2..=4 {
            assert_eq!(swan_weil_restriction(2, 2 * d + 1, 2, 2).unwrap(), 2 + 4 * d);
        }
        assert_eq!(swan_weil_restriction(0, 3 * 2 + 2, 3, 3).unwrap(), 12);
        assert_eq!(swan_weil_restriction(0, 1, 2, 2).unwrap(), 0);
        assert_eq!(swan_weil_restriction(0, 1, 2, 4), Err(ConductorError::DegreeGuard { degree: 4, p: 2 }));
        assert_eq!(swan_weil_restriction(0, 0, 3, 3), Err(ConductorError::NegativeResult(-4)));
    }

    #[test]
    fn small_identities() {
        assert_eq!(swan_norm_torus(2), 1);
        assert_eq!(swan_norm_torus(1), 0);
        assert_eq!(swan_tate_from_norm_torus(1), 2);
        assert_eq!(swan_tate_from_norm_torus(3), 6);
        assert_eq!(swan_tame_scaling(1, 3, 2).unwrap(), 3);
        assert_eq!(swan_tame_scaling(2, 5, 3).unwrap(), 10);
        assert!(swan_tame_scaling(1, 4, 2).is_err());
        assert_eq!(equal_char_swan_family(1, 2, 1).unwrap(), 4);
        assert_eq!(equal_char_swan_family(1, 2, 10).unwrap(), 40);
    }

    #[test]
    fn elliptic_validator() {
        assert!(validate_elliptic_bounds(SplitStatus::TotallyNotSplit, 2, None).pass);
        let v = validate_elliptic_bounds(SplitStatus::TotallyNotSplit, 0, None);
        assert_eq!(v.violation().unwrap().name, "1 <= delta");
        assert!(validate_elliptic_bounds(SplitStatus::NotSplit, 7, Some(KodairaType::IStar(4))).pass);
        assert!(!validate_elliptic_bounds(SplitStatus::NotSplit, 8, Some(KodairaType::IStar(4))).pass);
        assert!(!validate_elliptic_bounds(SplitStatus::NotSplit, 2, Some(KodairaType::IStar(3))).pass);
    }

    #[test]
    fn torus_validator() {
        assert!(validate_quotient_torus(1, 1, SplitStatus::TotallyNotSplit, 2, 1).pass);
        assert!(!validate_quotient_torus(2, 5, SplitStatus::NotSplit, 3, 1).pass);
        assert!(validate_quotient_torus(3, 0, SplitStatus::Split, 2, 1).pass);
        assert!(!validate_quotient_torus(3, 2, SplitStatus::Split, 2, 1).pass);
    }
}
