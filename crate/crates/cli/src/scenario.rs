//! Scenario files and the analyses they drive.

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use splitred::conductor::{self, BoundCheck, Verdict};
use splitred::kodaira::KodairaType;
use splitred::localfield::{parse_element, LocalFieldError, RingElem, Tower, TowerSpec};
use splitred::serde_num;
use splitred::status::SplitStatus;
use splitred::tamebase::{self, ReductionDatum};
use splitred::tatesplit::TateCurve;
use splitred::unitpowers::{Budget, TruncatedUnitRing};
use splitred::weierstrass::{self, WeierstrassCurve};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(with = "serde_num::u32_str")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerSpec>,
    pub analysis: Analysis,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Analysis {
    #[serde(rename = "tate_restriction")]
    TateRestriction(TateAnalysis),
    #[serde(rename = "type_iv")]
    TypeIV(TypeIVAnalysis),
    #[serde(rename = "type_i0star")]
    TypeI0Star(TypeI0StarAnalysis),
    #[serde(rename = "conductor")]
    Conductor(ConductorAnalysis),
    #[serde(rename = "tame_base")]
    TameBase(TameBaseAnalysis),
}

impl Analysis {
    pub fn kind(&self) -> &'static str {
        match self {
            Analysis::TateRestriction(_) => "tate_restriction",
            Analysis::TypeIV(_) => "type_iv",
            Analysis::TypeI0Star(_) => "type_i0star",
            Analysis::Conductor(_) => "conductor",
            Analysis::TameBase(_) => "tame_base",
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    #[serde(default, with = "serde_num::opt_u64_str", skip_serializing_if = "Option::is_none")]
    pub s_max: Option<u64>,
    #[serde(default, with = "serde_num::opt_u64_str", skip_serializing_if = "Option::is_none")]
    pub guard: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebraic_solver: Option<bool>,
}

impl BudgetSpec {
    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(s) = self.s_max {
            b.s_max = s as u32;
        }
        if let Some(g) = self.guard {
            b.guard = g;
        }
        if let Some(a) = self.algebraic_solver {
            b.algebraic_solver = a;
        }
        b
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TateAnalysis {
    /// Level of `K`; the base by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    /// Level of `L`; the top level by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    pub q: String,
    #[serde(default)]
    pub budget: BudgetSpec,
}

fn zero() -> String {
    "0".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeIVAnalysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    #[serde(default = "zero")]
    pub a1: String,
    pub a2: String,
    #[serde(default = "zero")]
    pub a3: String,
    pub a4: String,
    pub a6: String,
    #[serde(with = "serde_num::u32_str")]
    pub d: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeI0StarAnalysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    pub alphas: [String; 3],
    pub a1: String,
    pub a3: String,
    #[serde(with = "serde_num::u32_str")]
    pub d: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticCheck {
    pub status: SplitStatus,
    #[serde(with = "serde_num::u64_str")]
    pub delta: u64,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub kodaira: Option<KodairaType>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusCheck {
    #[serde(with = "serde_num::u64_str")]
    pub dim_s: u64,
    #[serde(with = "serde_num::u64_str")]
    pub delta: u64,
    pub status: SplitStatus,
    #[serde(with = "serde_num::u64_str")]
    pub v_kp: u64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductorAnalysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    /// `δ(E/L)`; when absent it comes from `norm_torus` or defaults to 0.
    #[serde(default, with = "serde_num::opt_u64_str", skip_serializing_if = "Option::is_none")]
    pub delta_e: Option<u64>,
    /// A quadratic level `M` over `L`; `E/L` is the Tate curve twisted by `M/L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_torus: Option<String>,
    /// `v_K(a_{p-1})` for the equal-characteristic family.
    #[serde(default, with = "serde_num::opt_u64_str", skip_serializing_if = "Option::is_none")]
    pub v_a: Option<u64>,
    #[serde(default, with = "serde_num::opt_u64_str", skip_serializing_if = "Option::is_none")]
    pub d_t: Option<u64>,
    /// Rational, e.g. `"1/2"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_a: Option<String>,
    #[serde(default)]
    pub unsafe_degree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate_elliptic: Option<EllipticCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate_torus: Option<TorusCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TameBaseAnalysis {
    pub datum: ReductionDatum,
    /// Tabulate base-change certificates for tame `d <= d_max`.
    #[serde(default, with = "serde_num::opt_u64_str", skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u64>,
}

/// Knobs shared by every command.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub precision: Option<u32>,
    pub unsafe_degree: bool,
}

/// The CSV-facing summary of a report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub p: Option<u64>,
    pub d: Option<u64>,
    pub n: Option<u64>,
    pub v_p_n: Option<u64>,
    pub lifting_exponent: Option<u64>,
    pub status: Option<SplitStatus>,
    pub delta_swan: Option<u64>,
    pub bk_bound: Option<u64>,
    pub certificate: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub summary: Summary,
}

impl Outcome {
    pub fn is_inconclusive(&self) -> bool {
        self.summary.status == Some(SplitStatus::Inconclusive)
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let sc: Scenario = serde_json::from_str(text)
        .map_err(|e| CliError::Schema(format!("line {} column {}: {e}", e.line(), e.column())))?;
    if sc.schema_version != SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            sc.schema_version
        )));
    }
    Ok(sc)
}

fn field_err(field: &str, e: LocalFieldError) -> CliError {
    match e {
        LocalFieldError::Parse { .. } | LocalFieldError::UnknownSymbol { .. } | LocalFieldError::UnknownLevel(_) => {
            CliError::Schema(format!("{field}: {e}"))
        }
        e => CliError::Precondition(format!("{field}: {e}")),
    }
}

fn pre<E: std::fmt::Display>(what: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Precondition(format!("{what}: {e}"))
}

fn build_tower(sc: &Scenario, opts: &RunOptions) -> Result<Tower, CliError> {
    let mut spec = sc
        .tower
        .clone()
        .ok_or_else(|| CliError::Schema(format!("kind {} needs a tower", sc.analysis.kind())))?;
    if let Some(p) = opts.precision {
        spec.precision = p;
    }
    spec.build().map_err(|e| field_err("tower", e))
}

fn level(tower: &Tower, name: &Option<String>, default: usize, field: &str) -> Result<usize, CliError> {
    match name {
        Some(n) => tower.level_index(n).map_err(|e| field_err(field, e)),
        None => Ok(default),
    }
}

fn elem(tower: &Tower, lvl: usize, expr: &str, field: &str) -> Result<RingElem, CliError> {
    parse_element(expr, tower, lvl).map_err(|e| field_err(field, e))
}

/// Runs one scenario.
pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> Result<Outcome, CliError> {
    let (report, summary) = match &sc.analysis {
        Analysis::TateRestriction(a) => run_tate(sc, a, opts)?,
        Analysis::TypeIV(a) => run_type_iv(sc, a, opts)?,
        Analysis::TypeI0Star(a) => run_type_i0star(sc, a, opts)?,
        Analysis::Conductor(a) => run_conductor(sc, a, opts)?,
        Analysis::TameBase(a) => run_tame_base(a)?,
    };
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "id": sc.id.clone().unwrap_or_else(|| "scenario".into()),
        "kind": sc.analysis.kind(),
    });
    if let Some(s) = summary.status {
        out["status"] = json!(s);
    }
    out["report"] = report;
    Ok(Outcome { report: out, summary })
}

fn run_tate(sc: &Scenario, a: &TateAnalysis, opts: &RunOptions) -> Result<(Value, Summary), CliError> {
    let tower = build_tower(sc, opts)?;
    let k = level(&tower, &a.k, 0, "k")?;
    let l = level(&tower, &a.l, tower.top(), "l")?;
    if k >= l {
        return Err(CliError::Precondition("K must lie strictly below L".into()));
    }
    let q = elem(&tower, l, &a.q, "q")?;
    let ring = TruncatedUnitRing::new(&tower, k, l).map_err(pre("ring"))?;
    let curve = TateCurve::with_ring(Arc::new(ring), &q).map_err(pre("q"))?;
    let rep = curve.split_status(&a.budget.budget()).map_err(pre("analysis"))?;
    let p = tower.p();
    let mut swan = Value::Null;
    let (mut delta_swan, mut bk) = (None, None);
    if tower.is_mixed() && rep.d as u64 == p && l == k + 1 {
        let v_diff = tower.different_valuation(l).map_err(|e| field_err("l", e))? as u64;
        let v_kp = tower.abs_ramification(k) as u64;
        let delta = conductor::swan_weil_restriction(0, v_diff, p, p).map_err(pre("swan"))?;
        let bound = conductor::bk_bound(p, v_kp, 1, 0);
        delta_swan = Some(delta);
        bk = Some(bound);
        swan = json!({
            "delta_e": 0,
            "v_different": v_diff,
            "v_kp": v_kp,
            "delta_restriction": delta,
            "bk_bound": bound,
        });
    }
    let certificate = rep.verdicts.last().map(|v| v.certificate.name().to_string());
    let summary = Summary {
        p: Some(p),
        d: Some(rep.d as u64),
        n: Some(rep.n as u64),
        v_p_n: Some(rep.p_valuation as u64),
        lifting_exponent: rep.lifting_exponent.map(u64::from),
        status: Some(rep.status),
        delta_swan,
        bk_bound: bk,
        certificate,
    };
    let mut report = serde_json::to_value(&rep).map_err(|e| CliError::Precondition(e.to_string()))?;
    report["k"] = json!(tower.level_name(k));
    report["l"] = json!(tower.level_name(l));
    report["normalized_unit"] = json!(curve.normalized_unit().map_err(pre("q"))?.to_string());
    if !swan.is_null() {
        report["swan"] = swan;
    }
    Ok((report, summary))
}

fn run_type_iv(sc: &Scenario, a: &TypeIVAnalysis, opts: &RunOptions) -> Result<(Value, Summary), CliError> {
    let tower = build_tower(sc, opts)?;
    let lvl = level(&tower, &a.level, tower.top(), "level")?;
    let e = |s: &str, f: &str| elem(&tower, lvl, s, f);
    let curve = WeierstrassCurve::new([
        &e(&a.a1, "a1")?,
        &e(&a.a2, "a2")?,
        &e(&a.a3, "a3")?,
        &e(&a.a4, "a4")?,
        &e(&a.a6, "a6")?,
    ])
    .map_err(pre("curve"))?;
    let rep = weierstrass::analyze_type_iv(&curve, a.d).map_err(pre("type IV"))?;
    let summary = Summary {
        p: Some(tower.p()),
        d: Some(a.d as u64),
        n: Some(3),
        v_p_n: Some(1),
        status: Some(rep.status_res),
        certificate: Some(format!("v(b8)={}", rep.v_b8)),
        ..Summary::default()
    };
    Ok((serde_json::to_value(&rep).expect("serializable"), summary))
}

fn run_type_i0star(sc: &Scenario, a: &TypeI0StarAnalysis, opts: &RunOptions) -> Result<(Value, Summary), CliError> {
    let tower = build_tower(sc, opts)?;
    let lvl = level(&tower, &a.level, tower.top(), "level")?;
    let e = |s: &str, f: &str| elem(&tower, lvl, s, f);
    let al = [e(&a.alphas[0], "alphas[0]")?, e(&a.alphas[1], "alphas[1]")?, e(&a.alphas[2], "alphas[2]")?];
    let rep = weierstrass::analyze_type_i0star([&al[0], &al[1], &al[2]], &e(&a.a1, "a1")?, &e(&a.a3, "a3")?, a.d)
        .map_err(pre("type I0*"))?;
    let summary = Summary {
        p: Some(tower.p()),
        d: Some(a.d as u64),
        n: Some(4),
        v_p_n: Some(2),
        status: Some(rep.status_res),
        certificate: Some("point_arithmetic".into()),
        ..Summary::default()
    };
    Ok((serde_json::to_value(&rep).expect("serializable"), summary))
}

fn parse_ratio(s: &str, field: &str) -> Result<Ratio<i64>, CliError> {
    s.trim()
        .parse::<Ratio<i64>>()
        .map_err(|_| CliError::Schema(format!("{field}: invalid rational {s:?}")))
}

#[derive(Debug, Serialize)]
struct ConductorReport {
    p: u64,
    k: String,
    l: String,
    extension_degree: u64,
    v_kp: Option<u64>,
    v_different: u64,
    v_different_norm_torus: Option<u64>,
    delta_norm_torus: Option<u64>,
    delta_curve: u64,
    delta_restriction: u64,
    lambda: Vec<LambdaEval>,
    bk_bound: Option<u64>,
    bk_comparison: Option<BoundCheck>,
    degree_guard_overridden: bool,
    validate_elliptic: Option<Verdict>,
    validate_torus: Option<Verdict>,
}

#[derive(Debug, Serialize)]
struct LambdaEval {
    n: u64,
    value: u64,
}

fn run_conductor(sc: &Scenario, a: &ConductorAnalysis, opts: &RunOptions) -> Result<(Value, Summary), CliError> {
    let tower = build_tower(sc, opts)?;
    let p = tower.p();
    let l = level(&tower, &a.l, tower.top().min(1), "l")?;
    let k = level(&tower, &a.k, l.saturating_sub(1), "k")?;
    if l == 0 || k + 1 != l {
        return Err(CliError::Precondition("L must be the Eisenstein step directly above K".into()));
    }
    let degree = tower.degree(l) as u64;
    let v_diff = tower.different_valuation(l).map_err(|e| field_err("l", e))? as u64;
    let (mut v_diff_m, mut delta_torus) = (None, None);
    let delta_e = match (&a.delta_e, &a.norm_torus) {
        (Some(d), _) => *d,
        (None, Some(m)) => {
            let mi = tower.level_index(m).map_err(|e| field_err("norm_torus", e))?;
            if mi != l + 1 || tower.degree(mi) != 2 {
                return Err(CliError::Precondition("norm_torus must be a quadratic step directly above L".into()));
            }
            let v = tower.different_valuation(mi).map_err(|e| field_err("norm_torus", e))? as u64;
            let dt = conductor::swan_norm_torus(v);
            v_diff_m = Some(v);
            delta_torus = Some(dt);
            conductor::swan_tate_from_norm_torus(dt)
        }
        (None, None) => 0,
    };
    let unsafe_degree = a.unsafe_degree || opts.unsafe_degree;
    let delta_a = match a.v_a {
        Some(v_a) => {
            if tower.is_mixed() {
                return Err(CliError::Precondition("v_a applies in equal characteristic only".into()));
            }
            conductor::equal_char_swan_family(delta_e, p, v_a).map_err(pre("swan"))?
        }
        None if unsafe_degree => conductor::swan_weil_restriction_unchecked(delta_e, v_diff, p).map_err(pre("swan"))?,
        None => conductor::swan_weil_restriction(delta_e, v_diff, p, degree).map_err(pre("swan"))?,
    };
    let v_kp = tower.is_mixed().then(|| tower.abs_ramification(k) as u64);
    let mut lambda = Vec::new();
    let mut bk = None;
    if let (Some(d_t), Some(v)) = (a.d_t, v_kp) {
        let d_a = parse_ratio(a.d_a.as_deref().unwrap_or("0"), "d_a")?;
        let b = conductor::bk_bound_rational(p, v, d_t, d_a).map_err(pre("bk_bound"))?;
        let two_da = (d_a * 2).to_integer() as u64;
        lambda.push(LambdaEval { n: d_t, value: conductor::lambda_p(d_t, p) });
        lambda.push(LambdaEval { n: two_da, value: conductor::lambda_p(two_da, p) });
        bk = Some(b);
    }
    let bk_comparison = bk.map(|b| BoundCheck {
        name: "delta(A/K) <= bk_bound".into(),
        lhs: delta_a as i64,
        relation: "<=".into(),
        rhs: b as i64,
        holds: delta_a <= b,
    });
    let rep = ConductorReport {
        p,
        k: tower.level_name(k).into(),
        l: tower.level_name(l).into(),
        extension_degree: degree,
        v_kp,
        v_different: v_diff,
        v_different_norm_torus: v_diff_m,
        delta_norm_torus: delta_torus,
        delta_curve: delta_e,
        delta_restriction: delta_a,
        lambda,
        bk_bound: bk,
        bk_comparison,
        degree_guard_overridden: unsafe_degree && degree != p,
        validate_elliptic: a
            .validate_elliptic
            .as_ref()
            .map(|c| conductor::validate_elliptic_bounds(c.status, c.delta, c.kodaira)),
        validate_torus: a
            .validate_torus
            .as_ref()
            .map(|c| conductor::validate_quotient_torus(c.dim_s, c.delta, c.status, p, c.v_kp)),
    };
    let summary = Summary {
        p: Some(p),
        d: Some(degree),
        delta_swan: Some(delta_a),
        bk_bound: bk,
        certificate: Some("swan".into()),
        ..Summary::default()
    };
    Ok((serde_json::to_value(&rep).expect("serializable"), summary))
}

#[derive(Debug, Serialize)]
struct TameRow {
    d: u64,
    jacobian: Option<tamebase::JacobianCertificate>,
    elliptic: Option<tamebase::EllipticSplitReport>,
    elliptic_error: Option<String>,
}

fn run_tame_base(a: &TameBaseAnalysis) -> Result<(Value, Summary), CliError> {
    let datum = &a.datum;
    if datum.p < 2 {
        return Err(CliError::Schema("datum.p must be a prime".into()));
    }
    datum.validate().map_err(pre("datum"))?;
    let e = datum.effective_stabilization_index();
    let jumps = datum
        .parsed_jumps()
        .map_err(pre("jumps"))?
        .map(|js| tamebase::jumps_summary(&js, e, datum.p))
        .transpose()
        .map_err(pre("jumps"))?;
    let mut rows = Vec::new();
    for d in 1..=a.d_max.unwrap_or(0) {
        if d % datum.p == 0 {
            continue;
        }
        let jacobian = e.map(|e| tamebase::jacobian_split_certificate(e, d, datum.p).expect("tame"));
        let (mut elliptic, mut elliptic_error) = (None, None);
        if let (Some(t), Some(l), Some(delta), Some(vd)) = (datum.kodaira, datum.l_degree, datum.delta, datum.v_disc) {
            match tamebase::elliptic_split_after(t, l, delta, vd, d, datum.p) {
                Ok(r) => elliptic = Some(r),
                Err(err) => elliptic_error = Some(err.to_string()),
            }
        }
        rows.push(TameRow { d, jacobian, elliptic, elliptic_error });
    }
    let certificates = tamebase::tame_split_certificates(datum);
    let report = json!({
        "stabilization_index": e,
        "jumps": jumps,
        "certificates": certificates,
        "base_change": rows,
    });
    let status = certificates.iter().any(|c| c.applies_to == "K").then_some(SplitStatus::Split);
    let summary = Summary {
        p: Some(datum.p),
        status,
        certificate: certificates.first().map(|c| c.name.clone()),
        ..Summary::default()
    };
    Ok((report, summary))
}
