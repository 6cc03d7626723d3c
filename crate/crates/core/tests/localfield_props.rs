mod common;

use common::{from_digits, sample_towers, unit_from_digits};
use proptest::prelude::*;
use splitred::localfield::{parse_element, LocalFieldError, TowerSpec};

fn digits() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..1000, 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn valuation_is_multiplicative(ti in 0usize..6, sa in 0u32..8, sb in 0u32..8, a in digits(), b in digits()) {
        let towers = sample_towers();
        let t = &towers[ti];
        let top = t.top();
        let pi = t.uniformizer(top);
        let x = &pi.pow(sa as u64) * &unit_from_digits(t, top, &a);
        let y = &pi.pow(sb as u64) * &unit_from_digits(t, top, &b);
        prop_assert_eq!(x.valuation().unwrap(), sa);
        prop_assert_eq!((&x * &y).valuation().unwrap(), sa + sb);
    }

    #[test]
    fn embedding_scales_valuation_by_ramification(ti in 0usize..6, s in 0u32..6, a in digits()) {
        let towers = sample_towers();
        let t = &towers[ti];
        let top = t.top();
        let below = top - 1;
        let x = &t.uniformizer(below).pow(s as u64) * &unit_from_digits(t, below, &a);
        let e = t.abs_ramification(top) / t.abs_ramification(below);
        prop_assert_eq!(x.embed(top).unwrap().valuation().unwrap(), e * x.valuation().unwrap());
    }

    #[test]
    fn eisenstein_violations_are_rejected(p in prop::sample::select(vec![2u64, 3, 5]), d in 2u32..6, k in 1u32..5, c in 1u64..4) {
        prop_assume!(k < d);
        // a unit coefficient below the leading term
        let unit = c % p + if c % p == 0 { 1 } else { 0 };
        let poly = format!("t^{d} + {unit}*t^{k} - {p}");
        let err = TowerSpec::mixed(p, 1).base_name("K").level("L", &poly).build().unwrap_err();
        let is_non_eisenstein = matches!(err, LocalFieldError::NonEisenstein { .. });
        prop_assert!(is_non_eisenstein);
        // constant term divisible by p^2
        let poly = format!("t^{d} - {}", p * p * c);
        let err = TowerSpec::mixed(p, 1).base_name("K").level("L", &poly).build().unwrap_err();
        let is_non_eisenstein = matches!(err, LocalFieldError::NonEisenstein { .. });
        prop_assert!(is_non_eisenstein);
        // the valid polynomial with a p-divisible middle coefficient is accepted
        let poly = format!("t^{d} + {}*t^{k} - {p}", p * c);
        prop_assert!(TowerSpec::mixed(p, 1).base_name("K").level("L", &poly).build().is_ok());
    }

    #[test]
    fn conjugation_is_an_involutive_homomorphism(a in digits(), b in digits()) {
        let t = TowerSpec::mixed(3, 2).base_name("K").level("L", "t^2 - 3").build().unwrap();
        let zeta = t.from_int(0, -1);
        let x = from_digits(&t, 1, &a);
        let y = from_digits(&t, 1, &b);
        let s = |z: &splitred::localfield::RingElem| z.conjugate(&zeta).unwrap();
        prop_assert!(s(&(&x * &y)).eq_at_precision(&(&s(&x) * &s(&y))));
        prop_assert!(s(&(&x + &y)).eq_at_precision(&(&s(&x) + &s(&y))));
        prop_assert!(s(&s(&x)).eq_at_precision(&x));
    }

    #[test]
    fn printing_then_parsing_is_the_identity(ti in 0usize..6, a in digits(), s in 0u32..5) {
        let towers = sample_towers();
        let t = &towers[ti];
        let top = t.top();
        let x = &t.uniformizer(top).pow(s as u64) * &from_digits(t, top, &a);
        let printed = x.to_string();
        let back = parse_element(&printed, t, top).unwrap();
        prop_assert!(back.eq_at_precision(&x), "{} reparsed as {}", printed, back);
        prop_assert_eq!(back.precision(), x.precision());
    }
}

#[test]
fn tame_binomial_different_is_d_minus_one() {
    for p in [2u64, 3, 5, 7] {
        for d in (2..=12u32).filter(|d| *d as u64 % p != 0) {
            let t = TowerSpec::mixed(p, 1).base_name("K").level("L", &format!("t^{d} - {p}")).build().unwrap();
            assert_eq!(t.different_valuation(1).unwrap(), d - 1, "p={p} d={d}");
            let t = TowerSpec::equal(p, 1).base_name("K").level("L", &format!("t^{d} - pi_K")).build().unwrap();
            assert_eq!(t.different_valuation(1).unwrap(), d - 1, "equal p={p} d={d}");
        }
    }
}
