mod common;

use common::{from_digits, unit_from_digits};
use proptest::prelude::*;
use splitred::localfield::{parse_element, TowerSpec};
use splitred::status::SplitStatus;
use splitred::tatesplit::TateCurve;
use splitred::unitpowers::Budget;

fn specs() -> Vec<TowerSpec> {
    vec![
        TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2"),
        TowerSpec::mixed(2, 1).base_name("K").level("L", "t^5 - 2"),
        TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 - 3"),
        TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3"),
        TowerSpec::equal(2, 1).base_name("K").level("L", "t^5 - pi_K"),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn status_is_stable_under_small_perturbation(si in 0usize..5, n in 1u32..10, a in prop::collection::vec(0u64..50, 1..6), b in prop::collection::vec(0u64..50, 1..6)) {
        let t = specs()[si].build().unwrap();
        let pi = t.uniformizer(1);
        let q = &pi.pow(n as u64) * &unit_from_digits(&t, 1, &a);
        let pi_k = t.uniformizer(0).embed(1).unwrap();
        let q2 = &q * &(&t.one(1) + &(&pi_k * &from_digits(&t, 1, &b)));
        let b0 = Budget::default();
        let r1 = TateCurve::new(&t, 0, 1, &q).unwrap().split_status(&b0).unwrap();
        let r2 = TateCurve::new(&t, 0, 1, &q2).unwrap().split_status(&b0).unwrap();
        prop_assert_eq!(r1.status, r2.status);
        prop_assert_eq!(r1.lifting_exponent, r2.lifting_exponent);
        prop_assert_eq!(r1.dimension.dim, r1.dimension.toric_rank + r1.dimension.unipotent_dim);
        prop_assert_eq!(r1.dimension.dim, t.degree(1) as u32);
    }

    #[test]
    fn prime_to_p_component_group_splits(si in 0usize..5, n in 1u32..12, a in prop::collection::vec(0u64..50, 1..6)) {
        let t = specs()[si].build().unwrap();
        prop_assume!(n as u64 % t.p() != 0);
        let q = &t.uniformizer(1).pow(n as u64) * &unit_from_digits(&t, 1, &a);
        let r = TateCurve::new(&t, 0, 1, &q).unwrap().split_status(&Budget::default()).unwrap();
        prop_assert_eq!(r.status, SplitStatus::Split);
    }
}

#[test]
fn lifting_exponent_does_not_grow_with_d() {
    let p = 2u64;
    for n in 1..=3u32 {
        for m in 0..=2u32 {
            let mut last = None;
            for d in 2..=9u32 {
                let t = TowerSpec::equal(p, 1).base_name("K").level("L", &format!("t^{d} - pi_K")).build().unwrap();
                let q = parse_element(&format!("pi_L^{}*(1 + pi_L^{})", p.pow(n), p.pow(m)), &t, 1).unwrap();
                let r = TateCurve::new(&t, 0, 1, &q).unwrap().split_status(&Budget::default()).unwrap();
                let j = r.lifting_exponent.expect("decided");
                if let Some(prev) = last {
                    assert!(j <= prev, "n={n} m={m} d={d}: {j} > {prev}");
                }
                last = Some(j);
            }
        }
    }
}

#[test]
fn report_serializes_with_status_and_verdicts() {
    let t = TowerSpec::mixed(2, 1).base_name("K").level("L", "t^3 - 2").build().unwrap();
    let q = parse_element("pi_L^2*(1 + pi_L)", &t, 1).unwrap();
    let r = TateCurve::new(&t, 0, 1, &q).unwrap().split_status(&Budget::default()).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["status"], "TotallyNotSplit");
    assert_eq!(json["verdicts"][0]["answer"], "No");
    assert_eq!(json["verdicts"][0]["certificate"]["tag"], "ValuationScreen");
}
