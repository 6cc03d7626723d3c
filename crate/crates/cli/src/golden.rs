//! The reproduction suite: every published numeric example, recomputed.

use splitred::conductor;
use splitred::kodaira::KodairaType;
use splitred::localfield::{parse_element, Tower, TowerSpec};
use splitred::status::SplitStatus;
use splitred::tamebase::{self, EllipticDecision, JacobianCertificate, TameError};
use splitred::tatesplit::TateCurve;
use splitred::unitpowers::Budget;
use splitred::weierstrass::{self, WeierstrassCurve};

use crate::scenario::{self, Analysis, ConductorAnalysis, RunOptions, Scenario, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub case: &'static str,
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn row(case: &'static str, label: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Row {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Row { case, label: label.into(), pass: expected == actual, expected, actual }
}

fn err_row(case: &'static str, label: impl Into<String>, expected: impl ToString, e: impl ToString) -> Row {
    Row { case, label: label.into(), expected: expected.to_string(), actual: format!("error: {}", e.to_string()), pass: false }
}

pub struct Case {
    pub id: &'static str,
    pub description: &'static str,
    run: fn(&RunOptions) -> Vec<Row>,
}

pub fn cases() -> Vec<Case> {
    vec![
        Case { id: "counterexample", description: "Tate curves with q = pi_L^p(1+pi_L) over tame L/K", run: counterexample },
        Case { id: "zeta3-pair", description: "q = pi_L^3 and zeta_3 pi_L^3 over Q_3^ur(zeta_3)", run: zeta3_pair },
        Case { id: "lifting-exponent", description: "equal characteristic family pi^4(1+pi^(2^m))", run: lifting_exponent },
        Case { id: "differents", description: "valuations of differents of the quadratic and Kummer steps", run: differents },
        Case { id: "swan-quadratic", description: "delta(A/K) = 2 + 4d through the norm torus", run: swan_quadratic },
        Case { id: "swan-kummer", description: "delta(A/K) = 2p v_K(p) and the Brumer-Kramer bound", run: swan_kummer },
        Case { id: "lambda-bk", description: "lambda_p and the Brumer-Kramer bound instances", run: lambda_bk },
        Case { id: "elliptic-bounds", description: "Swan bounds for not split elliptic curves", run: elliptic_bounds },
        Case { id: "torus-bounds", description: "Swan bounds for tori", run: torus_bounds },
        Case { id: "ogg", description: "discriminant valuations from Ogg's formula", run: ogg },
        Case { id: "type-iv", description: "point valuations on type IV curves", run: type_iv },
        Case { id: "type-i0star", description: "point valuations on type I0* curves", run: type_i0star },
        Case { id: "tame-base", description: "tame base change certificates", run: tame_base },
    ]
}

/// Runs the selected cases (all when `filter` is `None`).
pub fn run(filter: Option<&str>, opts: &RunOptions) -> Result<Vec<Row>, String> {
    let all = cases();
    let selected: Vec<&Case> = match filter {
        None => all.iter().collect(),
        Some(id) => {
            let c: Vec<&Case> = all.iter().filter(|c| c.id == id).collect();
            if c.is_empty() {
                return Err(format!("unknown case {id:?}; see --list"));
            }
            c
        }
    };
    Ok(selected.iter().flat_map(|c| (c.run)(opts)).collect())
}

pub fn render(rows: &[Row]) -> String {
    let w = |f: fn(&Row) -> usize| rows.iter().map(f).max().unwrap_or(0);
    let (wc, wl, we, wa) = (
        w(|r| r.case.len()).max(4),
        w(|r| r.label.len()).max(5),
        w(|r| r.expected.len()).max(8),
        w(|r| r.actual.len()).max(6),
    );
    let mut out = format!("{:wc$}  {:wl$}  {:we$}  {:wa$}  result\n", "case", "check", "expected", "actual");
    for r in rows {
        out += &format!(
            "{:wc$}  {:wl$}  {:we$}  {:wa$}  {}\n",
            r.case,
            r.label,
            r.expected,
            r.actual,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out += &format!("{passed}/{} passed\n", rows.len());
    out
}

fn with_precision(spec: TowerSpec, opts: &RunOptions) -> TowerSpec {
    match opts.precision {
        Some(p) => spec.precision(p),
        None => spec,
    }
}

fn tate_status(tower: &Tower, q: &str) -> Result<(SplitStatus, Option<u32>, String), String> {
    let q = parse_element(q, tower, tower.top()).map_err(|e| e.to_string())?;
    let curve = TateCurve::new(tower, 0, tower.top(), &q).map_err(|e| e.to_string())?;
    let rep = curve.split_status(&Budget::default()).map_err(|e| e.to_string())?;
    let cert = rep.verdicts.last().map(|v| v.certificate.name().to_string()).unwrap_or_default();
    Ok((rep.status, rep.lifting_exponent, cert))
}

fn counterexample(opts: &RunOptions) -> Vec<Row> {
    let mut rows = Vec::new();
    for (p, d) in [(2u64, 3u32), (2, 5), (3, 2), (3, 4)] {
        let spec = TowerSpec::mixed(p, 1).base_name("K").level("L", &format!("t^{d} - {p}"));
        let tower = match with_precision(spec, opts).build() {
            Ok(t) => t,
            Err(e) => {
                rows.push(err_row("counterexample", format!("p={p} d={d}"), "tower", e));
                continue;
            }
        };
        for (q, expected) in [
            (format!("pi_L^{p}*(1+pi_L)"), SplitStatus::TotallyNotSplit),
            (format!("pi_L^{p}"), SplitStatus::Split),
        ] {
            let label = format!("p={p} d={d} q={q}");
            match tate_status(&tower, &q) {
                Ok((s, _, _)) => rows.push(row("counterexample", label, expected, s)),
                Err(e) => rows.push(err_row("counterexample", label, expected, e)),
            }
        }
    }
    rows
}

fn zeta3_pair(opts: &RunOptions) -> Vec<Row> {
    let case = "zeta3-pair";
    let spec = with_precision(TowerSpec::mixed(3, 1).base_name("K").level("L", "t^2 + 3*t + 3"), opts);
    let tower = match spec.build() {
        Ok(t) => t,
        Err(e) => return vec![err_row(case, "tower", "valid", e)],
    };
    let mut rows = Vec::new();
    // 1 + pi_L is the primitive cube root of unity for this uniformizer
    match parse_element("1 + pi_L", &tower, 1) {
        Ok(z) => {
            let cube = z.pow(3);
            rows.push(row(case, "(1+pi_L)^3", "1", cube.to_string()));
            rows.push(row(case, "v_L(zeta_3 - 1)", 1, (z - tower.one(1)).valuation().map(|v| v.to_string()).unwrap_or_default()));
        }
        Err(e) => rows.push(err_row(case, "zeta_3", "1 + pi_L", e)),
    }
    match tate_status(&tower, "pi_L^3") {
        Ok((s, _, _)) => rows.push(row(case, "q = pi_L^3", SplitStatus::Split, s)),
        Err(e) => rows.push(err_row(case, "q = pi_L^3", SplitStatus::Split, e)),
    }
    match tate_status(&tower, "(1+pi_L)*pi_L^3") {
        Ok((s, _, cert)) => {
            rows.push(Row {
                case,
                label: "q = zeta_3 pi_L^3".into(),
                expected: "not split".into(),
                actual: s.to_string(),
                pass: s.is_not_split(),
            });
            rows.push(row(case, "certificate", "ValuationScreen", cert));
        }
        Err(e) => rows.push(err_row(case, "q = zeta_3 pi_L^3", "not split", e)),
    }
    rows
}

fn lifting_exponent(opts: &RunOptions) -> Vec<Row> {
    let case = "lifting-exponent";
    let spec = with_precision(TowerSpec::equal(2, 1).base_name("K").level("L", "t^5 - pi_K"), opts);
    let tower = match spec.build() {
        Ok(t) => t,
        Err(e) => return vec![err_row(case, "tower", "valid", e)],
    };
    (0..2u32)
        .map(|m| {
            let q = format!("pi_L^4*(1+pi_L^{})", 1u32 << m);
            match tate_status(&tower, &q) {
                Ok((_, j, _)) => row(case, format!("m={m}"), m, j.map(|j| j.to_string()).unwrap_or("none".into())),
                Err(e) => err_row(case, format!("m={m}"), m, e),
            }
        })
        .collect()
}

fn quadratic_tower(d: u32, opts: &RunOptions) -> Result<Tower, String> {
    with_precision(
        TowerSpec::mixed(2, 1)
            .base_name("Q2")
            .level("K", &format!("t^{d} - 2"))
            .level("L", "t^2 - pi_K")
            .level("M", "t^2 + pi_L*t + pi_L"),
        opts,
    )
    .build()
    .map_err(|e| e.to_string())
}

fn kummer_tower(p: u64, v_kp: u32, opts: &RunOptions) -> Result<Tower, String> {
    let mut spec = TowerSpec::mixed(p, 1).base_name("Qp");
    if v_kp > 1 {
        spec = spec.level("K", &format!("t^{v_kp} - {p}"));
    } else {
        spec = spec.base_name("K");
    }
    with_precision(spec.level("L", &format!("t^{p} - pi_K")), opts).build().map_err(|e| e.to_string())
}

fn differents(opts: &RunOptions) -> Vec<Row> {
    let case = "differents";
    let mut rows = Vec::new();
    for d in 2..=4u32 {
        match quadratic_tower(d, opts) {
            Ok(t) => {
                let l = t.level_index("L").expect("level");
                let m = t.level_index("M").expect("level");
                rows.push(row(case, format!("t^2 - pi_K, d={d}"), 2 * d + 1, show(t.different_valuation(l))));
                rows.push(row(case, format!("t^2 + pi_L t + pi_L, d={d}"), 2, show(t.different_valuation(m))));
            }
            Err(e) => rows.push(err_row(case, format!("d={d}"), "tower", e)),
        }
    }
    for (p, v) in [(2u64, 1u32), (3, 1), (3, 2)] {
        match kummer_tower(p, v, opts) {
            Ok(t) => rows.push(row(
                case,
                format!("t^{p} - pi_K, v_K(p)={v}"),
                p as u32 * v + p as u32 - 1,
                show(t.different_valuation(t.top())),
            )),
            Err(e) => rows.push(err_row(case, format!("p={p}"), "tower", e)),
        }
    }
    rows
}

fn show<T: ToString, E: ToString>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {}", e.to_string()),
    }
}

fn conductor_report(spec: TowerSpec, a: ConductorAnalysis, opts: &RunOptions) -> Result<serde_json::Value, String> {
    let sc = Scenario {
        schema_version: SCHEMA_VERSION,
        id: None,
        tower: Some(spec),
        analysis: Analysis::Conductor(a),
    };
    scenario::run_scenario(&sc, opts).map(|o| o.report["report"].clone()).map_err(|e| e.to_string())
}

fn num(v: &serde_json::Value, key: &str) -> String {
    v.get(key).map(|x| x.to_string()).unwrap_or_else(|| "missing".into())
}

fn swan_quadratic(opts: &RunOptions) -> Vec<Row> {
    let case = "swan-quadratic";
    let mut rows = Vec::new();
    for d in 2..=4u64 {
        let spec = match quadratic_tower(d as u32, opts) {
            Ok(t) => t.spec().clone(),
            Err(e) => {
                rows.push(err_row(case, format!("d={d}"), "tower", e));
                continue;
            }
        };
        let a = ConductorAnalysis {
            k: Some("K".into()),
            l: Some("L".into()),
            norm_torus: Some("M".into()),
            ..ConductorAnalysis::default()
        };
        match conductor_report(spec, a, opts) {
            Ok(r) => {
                rows.push(row(case, format!("delta(norm torus), d={d}"), 1, num(&r, "delta_norm_torus")));
                rows.push(row(case, format!("delta(E/L), d={d}"), 2, num(&r, "delta_curve")));
                rows.push(row(case, format!("delta(A/K), d={d}"), 2 + 4 * d, num(&r, "delta_restriction")));
            }
            Err(e) => rows.push(err_row(case, format!("d={d}"), 2 + 4 * d, e)),
        }
    }
    rows
}

fn swan_kummer(opts: &RunOptions) -> Vec<Row> {
    let case = "swan-kummer";
    let mut rows = Vec::new();
    for (p, v) in [(2u64, 1u64), (3, 1), (3, 2)] {
        let spec = match kummer_tower(p, v as u32, opts) {
            Ok(t) => t.spec().clone(),
            Err(e) => {
                rows.push(err_row(case, format!("p={p}"), "tower", e));
                continue;
            }
        };
        let a = ConductorAnalysis {
            k: Some("K".into()),
            l: Some("L".into()),
            delta_e: Some(0),
            d_t: Some(1),
            d_a: Some("0".into()),
            ..ConductorAnalysis::default()
        };
        let label = format!("p={p} v_K(p)={v}");
        match conductor_report(spec, a, opts) {
            Ok(r) => {
                rows.push(row(case, format!("delta(A/K), {label}"), 2 * p * v, num(&r, "delta_restriction")));
                rows.push(row(case, format!("bk_bound, {label}"), 2 * p * v, num(&r, "bk_bound")));
            }
            Err(e) => rows.push(err_row(case, label, 2 * p * v, e)),
        }
    }
    rows
}

fn lambda_bk(_: &RunOptions) -> Vec<Row> {
    let case = "lambda-bk";
    let mut rows = Vec::new();
    for p in [2u64, 3] {
        rows.push(row(case, format!("lambda_{p}(0)"), 0, conductor::lambda_p(0, p)));
        rows.push(row(case, format!("lambda_{p}(1)"), 0, conductor::lambda_p(1, p)));
    }
    for v in 1..=3u64 {
        rows.push(row(case, format!("p=2 d_t=0 d_a=1 v={v}"), 6 * v, conductor::bk_bound(2, v, 0, 2)));
        rows.push(row(case, format!("p=3 d_t=0 d_a=1/2 v={v}"), 3 * v, conductor::bk_bound(3, v, 0, 1)));
        for p in [2u64, 3] {
            rows.push(row(case, format!("p={p} d_t=1 d_a=0 v={v}"), 2 * p * v, conductor::bk_bound(p, v, 1, 0)));
        }
    }
    rows.push(row(case, "swan_tate_from_norm_torus(1)", 2, conductor::swan_tate_from_norm_torus(1)));
    rows.push(row(case, "swan_tame_scaling(1, 3)", 3, show(conductor::swan_tame_scaling(1, 3, 2))));
    let family: Vec<String> =
        [1u64, 10, 100].iter().map(|&v| show(conductor::equal_char_swan_family(1, 2, v))).collect();
    rows.push(row(case, "equal char family v_a = 1, 10, 100", "4 40 400", family.join(" ")));
    rows
}

fn pass_fail(v: bool) -> &'static str {
    if v {
        "Pass"
    } else {
        "Fail"
    }
}

fn elliptic_bounds(_: &RunOptions) -> Vec<Row> {
    let case = "elliptic-bounds";
    vec![
        row(
            case,
            "totally not split, delta=2",
            "Pass",
            pass_fail(conductor::validate_elliptic_bounds(SplitStatus::TotallyNotSplit, 2, None).pass),
        ),
        row(
            case,
            "not split, I4*, delta=7",
            "Pass",
            pass_fail(conductor::validate_elliptic_bounds(SplitStatus::NotSplit, 7, Some(KodairaType::IStar(4))).pass),
        ),
    ]
}

fn torus_bounds(_: &RunOptions) -> Vec<Row> {
    let case = "torus-bounds";
    vec![
        row(
            case,
            "dim 1, delta=1, totally not split",
            "Pass",
            pass_fail(conductor::validate_quotient_torus(1, 1, SplitStatus::TotallyNotSplit, 2, 1).pass),
        ),
        row(
            case,
            "dim 2, delta=5, not split, p=3",
            "Fail",
            pass_fail(conductor::validate_quotient_torus(2, 5, SplitStatus::NotSplit, 3, 1).pass),
        ),
    ]
}

fn ogg(_: &RunOptions) -> Vec<Row> {
    let case = "ogg";
    let mut rows = Vec::new();
    let types = [KodairaType::II, KodairaType::III, KodairaType::IIIStar, KodairaType::IIStar];
    let got: Vec<String> = types.iter().map(|&t| show(weierstrass::ogg_discriminant(t, 1))).collect();
    rows.push(row(case, "delta=1 for II, III, III*, II*", "3 4 10 11", got.join(" ")));
    for e in 1..=2u32 {
        for n in 0..=2u32 {
            rows.push(row(
                case,
                format!("I{}*, delta={}", 2 * n, 6 * e),
                6 * e + 2 * n + 6,
                show(weierstrass::ogg_discriminant(KodairaType::IStar(2 * n), 6 * e)),
            ));
        }
    }
    rows
}

fn type_iv(opts: &RunOptions) -> Vec<Row> {
    let case = "type-iv";
    let tower = match with_precision(TowerSpec::mixed(3, 1).base_name("L"), opts).build() {
        Ok(t) => t,
        Err(e) => return vec![err_row(case, "tower", "valid", e)],
    };
    let mut rows = Vec::new();
    for (a2, a4, vb8) in [("pi_L", "pi_L^2", 3u32), ("pi_L^2", "pi_L^3", 4), ("pi_L^3", "pi_L^3", 5)] {
        let label = format!("a2={a2} a4={a4} a6=pi_L^2");
        let res = (|| {
            let e = |s: &str| parse_element(s, &tower, 0).map_err(|e| e.to_string());
            let c = WeierstrassCurve::new([&e("0")?, &e(a2)?, &e("0")?, &e(a4)?, &e("pi_L^2")?])
                .map_err(|e| e.to_string())?;
            weierstrass::analyze_type_iv(&c, 2).map_err(|e| e.to_string())
        })();
        match res {
            Ok(r) => {
                rows.push(row(case, format!("v(z(3P)), {label}"), vb8 - 3, r.z_valuation_3p));
                rows.push(row(case, format!("v(x(3P)), {label}"), 6 - 2 * vb8 as i64, r.x_valuation_3p));
                rows.push(row(case, format!("split_E, {label}"), vb8 >= 4, r.split_e));
            }
            Err(e) => rows.push(err_row(case, label, vb8 - 3, e)),
        }
    }
    rows
}

fn type_i0star(opts: &RunOptions) -> Vec<Row> {
    let case = "type-i0star";
    let tower = match with_precision(TowerSpec::mixed(2, 2).base_name("L"), opts).build() {
        Ok(t) => t,
        Err(e) => return vec![err_row(case, "tower", "valid", e)],
    };
    let e = |s: &str| parse_element(s, &tower, 0).expect("literal");
    let checks = [
        ("0, z, z+1", "pi_L", "pi_L^2", 1, SplitStatus::TotallyNotSplit),
        ("0, 3, z", "pi_L", "pi_L^2", 1, SplitStatus::NotSplit),
        ("0, 3, z", "pi_L", "pi_L^2", 3, SplitStatus::TotallyNotSplit),
        ("0, z, z+1", "pi_L^2", "pi_L^3", 1, SplitStatus::Split),
        ("0, z, z+1", "pi_L^2", "pi_L^3", 2, SplitStatus::TotallyNotSplit),
    ];
    checks
        .iter()
        .map(|(alphas, a1, a3, d, expected)| {
            let al: Vec<_> = alphas.split(", ").map(e).collect();
            let label = format!("alphas {alphas}; a1={a1} a3={a3} d={d}");
            match weierstrass::analyze_type_i0star([&al[0], &al[1], &al[2]], &e(a1), &e(a3), *d) {
                Ok(r) => row(case, label, expected, r.status_res),
                Err(err) => err_row(case, label, expected, err),
            }
        })
        .collect()
}

fn tame_base(_: &RunOptions) -> Vec<Row> {
    let case = "tame-base";
    let mut rows = vec![
        row(case, "jacobian e=2 d=3 p=2", "SplitGuaranteed", format!("{:?}", tamebase::jacobian_split_certificate(2, 3, 2).unwrap_or(JacobianCertificate::NoGuarantee))),
        row(case, "tame_phi_order(1, 2, 3)", 9, show(tamebase::tame_phi_order(1, 2, 3))),
        row(case, "stabilization_rescale(4, 2)", 2, show(tamebase::stabilization_rescale(4, 2, 3))),
        row(
            case,
            "max elliptic stabilization index",
            6,
            KodairaType::enumerate(12).into_iter().map(tamebase::elliptic_stabilization_index).max().unwrap_or(0),
        ),
        row(case, "p-part of Phi preserved (phi=8, t=2, ratio=3)", true, show(tamebase::phi_p_part_preserved(8, 2, 3, 2))),
    ];
    let iv = tamebase::elliptic_split_after(KodairaType::IV, 2, 0, 4, 3, 2);
    rows.push(row(case, "type IV with [L:K]=2", "InputInconsistent", match iv {
        Err(TameError::InputInconsistent(_)) => "InputInconsistent".to_string(),
        other => format!("{other:?}"),
    }));
    let mut all_split = true;
    for t in KodairaType::enumerate(4) {
        let l = tamebase::elliptic_stabilization_index(t);
        let delta = if t.is_additive() { 1 } else { 0 };
        let vd = match t {
            KodairaType::I(n) => n,
            KodairaType::Good => 0,
            _ => weierstrass::ogg_discriminant(t, delta).unwrap_or(0),
        } as u64;
        let ok = tamebase::elliptic_split_after(t, l, delta as u64, vd, 5, 2)
            .map(|r| r.decision == EllipticDecision::Split)
            .unwrap_or(false);
        all_split &= ok;
    }
    rows.push(row(case, "every type splits after d=5", true, all_split));
    let g1 = (7..=25u64)
        .filter(|d| d % 2 == 1)
        .all(|d| KodairaType::enumerate(6).into_iter().all(|t| {
            tamebase::jacobian_split_certificate(tamebase::elliptic_stabilization_index(t), d, 2)
                == Ok(JacobianCertificate::SplitGuaranteed)
        }));
    rows.push(row(case, "genus 1, d >= 7 prime to 2", true, g1));
    let jumps = tamebase::jumps_summary(&[num_rational::Ratio::new(1, 2), num_rational::Ratio::new(1, 2)], Some(2), 3)
        .map(|s| format!("u={} lcm={}", s.u, s.lcm_denominator));
    rows.push(row(case, "jumps [1/2, 1/2], e=2", "u=2 lcm=2", show(jumps)));
    rows
}
