mod common;

use common::{from_digits, unit_from_digits};
use proptest::prelude::*;
use splitred::localfield::{FieldElem, Tower, TowerSpec};
use splitred::status::SplitStatus;
use splitred::weierstrass::{self, CurvePoint, Threshold, WeierstrassCurve};

fn towers() -> Vec<(Tower, usize)> {
    vec![
        (TowerSpec::mixed(5, 1).base_name("K").precision(20).build().unwrap(), 0),
        (TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 - 3").build().unwrap(), 1),
        (TowerSpec::mixed(2, 2).base_name("K").build().unwrap(), 0),
        (TowerSpec::equal(2, 2).base_name("K").build().unwrap(), 0),
    ]
}

fn digits() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..1000, 1..8)
}

/// A curve through two chosen integral points, with `a1, a2, a3` given.
fn curve_through(
    t: &Tower,
    lvl: usize,
    a: [&[u64]; 3],
    p1: (&[u64], &[u64]),
    p2: (&[u64], &[u64]),
) -> Option<(WeierstrassCurve, CurvePoint, CurvePoint)> {
    let f = |d: &[u64]| FieldElem::from_ring(&from_digits(t, lvl, d));
    let (a1, a2, a3) = (f(a[0]), f(a[1]), f(a[2]));
    let (x1, y1) = (f(p1.0), f(p1.1));
    let (x2, y2) = (f(p2.0), f(p2.1));
    let g = |x: &FieldElem, y: &FieldElem| {
        y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y)).sub(&x.pow(3)).sub(&a2.mul(&x.mul(x)))
    };
    let a4 = g(&x1, &y1).sub(&g(&x2, &y2)).div(&x1.sub(&x2)).ok()?;
    let a6 = g(&x1, &y1).sub(&a4.mul(&x1));
    let e = WeierstrassCurve::from_field([a1, a2, a3, a4, a6]).ok()?;
    let p = e.point(x1, y1).ok()?;
    let q = e.point(x2, y2).ok()?;
    Some((e, p, q))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn group_law_is_associative_and_commutative(
        ti in 0usize..4,
        a1 in digits(), a2 in digits(), a3 in digits(),
        x1 in digits(), y1 in digits(), x2 in digits(), y2 in digits(),
    ) {
        let towers = towers();
        let (t, lvl) = (&towers[ti].0, towers[ti].1);
        let mut x2 = x2;
        // distinct residues keep the chord integral
        x2[0] = x1[0] + 1 + x2[0] % (t.residue_field().size() - 1);
        let fitted = curve_through(t, lvl, [&a1, &a2, &a3], (&x1, &y1), (&x2, &y2));
        prop_assume!(fitted.is_some());
        let (e, p, q) = fitted.unwrap();
        let r = e.double(&q);
        prop_assume!(r.is_ok());
        let r = r.unwrap();
        let sums = (|| -> Result<_, weierstrass::WeierstrassError> {
            let pq = e.add_points(&p, &q)?;
            let qp = e.add_points(&q, &p)?;
            let left = e.add_points(&pq, &r)?;
            let qr = e.add_points(&q, &r)?;
            let right = e.add_points(&p, &qr)?;
            Ok((pq, qp, left, right))
        })();
        prop_assume!(sums.is_ok());
        let (pq, qp, left, right) = sums.unwrap();
        prop_assert!(pq.eq_at_precision(&qp));
        prop_assert!(left.eq_at_precision(&right));
        prop_assert!(e.is_on_curve(&left));
        prop_assert!(e.add_points(&p, &e.negate(&p)).unwrap().is_infinity());
    }

    #[test]
    fn b_invariants_satisfy_the_quartic_relation(ti in 0usize..4, a in prop::collection::vec(digits(), 5)) {
        let towers = towers();
        let (t, lvl) = (&towers[ti].0, towers[ti].1);
        let f = |d: &[u64]| FieldElem::from_ring(&from_digits(t, lvl, d));
        let e = WeierstrassCurve::from_field([f(&a[0]), f(&a[1]), f(&a[2]), f(&a[3]), f(&a[4])]);
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        let lhs = e.b8().scale(4);
        let rhs = e.b2().mul(&e.b6()).sub(&e.b4().mul(&e.b4()));
        prop_assert!(lhs.eq_at_precision(&rhs));
    }

    #[test]
    fn type_iv_reports_are_consistent(
        level in 0usize..2,
        vb8 in 3u32..7,
        c6 in digits(), w in digits(), c in digits(),
        d in 1u32..6,
    ) {
        let t = if level == 0 {
            TowerSpec::mixed(3, 1).base_name("L").build().unwrap()
        } else {
            TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 - 3").build().unwrap()
        };
        let f = FieldElem::from_ring;
        let pi = t.uniformizer(level);
        let y0 = &pi * &unit_from_digits(&t, level, &c6);
        let a6 = f(&(&y0 * &y0));
        let a4 = f(&(&pi.pow(2) * &from_digits(&t, level, &w)));
        let b8 = f(&(&pi.pow(vb8 as u64) * &unit_from_digits(&t, level, &c)));
        let a2 = a4.mul(&a4).add(&b8).div(&a6.scale(4)).unwrap();
        let zero = FieldElem::zero(&t, level);
        let e = WeierstrassCurve::from_field([zero.clone(), a2, zero.clone(), a4, a6]).unwrap();
        let r = weierstrass::analyze_type_iv(&e, d).unwrap();
        prop_assert_eq!(r.v_b8, vb8);
        prop_assert_eq!(r.z_valuation_3p, vb8 as i64 - 3);
        // restriction split implies split, and the converse for totally not split
        if r.res_split {
            prop_assert!(r.split_e);
        }
        if r.status_e == SplitStatus::TotallyNotSplit {
            prop_assert_eq!(r.status_res, SplitStatus::TotallyNotSplit);
        }
        prop_assert_eq!(r.res_split, r.z_valuation_3p >= d as i64);
    }

    #[test]
    fn i0star_thresholds_are_z_valuation_tests(
        perm in 0usize..24,
        noise in prop::collection::vec(digits(), 3),
        u1 in digits(), u3 in digits(),
        v1 in 1u32..3, v3 in 2u32..5,
        d in 1u32..5,
    ) {
        let t = TowerSpec::mixed(2, 2).base_name("L").build().unwrap();
        let field = t.residue_field();
        let pi = t.uniformizer(0);
        let mut res: Vec<u64> = vec![0, 1, 2, 3];
        let mut k = perm;
        for i in (1..4).rev() {
            res.swap(i, k % (i + 1));
            k /= i + 1;
        }
        let alphas: Vec<_> = (0..3)
            .map(|i| &t.lift(0, &field.from_index(res[i])) + &(&pi * &from_digits(&t, 0, &noise[i])))
            .collect();
        let a1 = &pi.pow(v1 as u64) * &unit_from_digits(&t, 0, &u1);
        let a3 = &pi.pow(v3 as u64) * &unit_from_digits(&t, 0, &u3);
        let r = weierstrass::analyze_type_i0star([&alphas[0], &alphas[1], &alphas[2]], &a1, &a3, d).unwrap();
        let e = weierstrass::i0star_curve([&alphas[0], &alphas[1], &alphas[2]], &a1, &a3).unwrap();
        let mut in_ed = Vec::new();
        for i in 0..3 {
            let p = CurvePoint::affine(FieldElem::from_ring(&(&pi * &alphas[i])), FieldElem::zero(&t, 0));
            let q = e.double(&p).unwrap();
            in_ed.push(q.en_membership(d as i64).unwrap());
            if let Threshold::Finite(m) = r.m[i] {
                prop_assert_eq!(q.z_valuation().unwrap(), m as i64);
            }
        }
        prop_assert_eq!(r.status_res == SplitStatus::Split, in_ed.iter().all(|&b| b));
        prop_assert_eq!(r.status_res == SplitStatus::TotallyNotSplit, in_ed.iter().all(|&b| !b));
        if r.status_res == SplitStatus::Split {
            prop_assert_eq!(r.status_e, SplitStatus::Split);
        }
        if r.status_e == SplitStatus::TotallyNotSplit {
            prop_assert_eq!(r.status_res, SplitStatus::TotallyNotSplit);
        }
    }
}
