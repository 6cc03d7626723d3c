use proptest::prelude::*;
use splitred::conductor::{self, bk_bound, lambda_p};
use splitred::kodaira::KodairaType;
use splitred::localfield::p_adic_valuation;
use splitred::status::SplitStatus;
use splitred::tamebase::{self, JacobianCertificate};

#[test]
fn lambda_of_a_prime_power() {
    for p in [2u64, 3, 5] {
        for i in 0..=6u32 {
            assert_eq!(lambda_p(p.pow(i), p), i as u64 * p.pow(i), "p={p} i={i}");
        }
    }
}

#[test]
fn bk_bound_is_monotone_on_the_grid() {
    for p in [2u64, 3, 5] {
        for v in 1..=4u64 {
            for d_t in 0..=8u64 {
                for two_da in 0..=8u64 {
                    let b = bk_bound(p, v, d_t, two_da);
                    assert!(bk_bound(p, v + 1, d_t, two_da) >= b);
                    assert!(bk_bound(p, v, d_t + 1, two_da) >= b);
                    assert!(bk_bound(p, v, d_t, two_da + 1) >= b);
                }
            }
        }
    }
}

#[test]
fn elliptic_bound_validator_accepts_the_tame_range_only() {
    for delta in 0..=8u64 {
        let v = conductor::validate_elliptic_bounds(SplitStatus::TotallyNotSplit, delta, None);
        assert_eq!(v.pass, (1..=3).contains(&delta), "delta={delta}");
        if !v.pass {
            assert!(v.violation().is_some());
        }
    }
    let v = conductor::validate_elliptic_bounds(SplitStatus::NotSplit, 7, Some(KodairaType::IStar(4)));
    assert!(v.pass);
    let v = conductor::validate_elliptic_bounds(SplitStatus::NotSplit, 8, Some(KodairaType::IStar(4)));
    assert!(!v.pass);
}

#[test]
fn swan_restriction_is_guarded_to_degree_p() {
    assert!(conductor::swan_weil_restriction(0, 3, 2, 2).is_ok());
    assert!(conductor::swan_weil_restriction(0, 3, 2, 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn jacobian_certificate_is_monotone_in_d(e in 1u64..20, d in 1u64..40, step in 1u64..20, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(d % p != 0 && (d + step) % p != 0);
        if tamebase::jacobian_split_certificate(e, d, p).unwrap() == JacobianCertificate::SplitGuaranteed {
            prop_assert_eq!(
                tamebase::jacobian_split_certificate(e, d + step, p).unwrap(),
                JacobianCertificate::SplitGuaranteed
            );
        }
    }

    #[test]
    fn tame_base_change_preserves_the_p_part(phi in 1u64..10_000, t in 0u32..4, ratio in 1u64..30, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(ratio % p != 0);
        let out = tamebase::tame_phi_order(phi, t, ratio).unwrap();
        prop_assert_eq!(p_adic_valuation(out, p), p_adic_valuation(phi, p));
        prop_assert!(tamebase::phi_p_part_preserved(phi, t, ratio, p).unwrap());
    }

    #[test]
    fn rescaling_composes(e in 1u64..200, a in 1u64..12, b in 1u64..12, p in prop::sample::select(vec![2u64, 3, 5])) {
        let once = tamebase::stabilization_rescale(e, a, p).and_then(|x| tamebase::stabilization_rescale(x, b, p));
        if let Ok(x) = once {
            prop_assert_eq!(tamebase::stabilization_rescale(e, a * b, p).unwrap(), x);
        }
    }
}
