//! Weierstrass models, the group law, and the point-valuation analyses for reduction
//! types IV (`p = 3`) and `I_0^*` (`p = 2`).

use serde::Serialize;
use thiserror::Error;

use crate::kodaira::KodairaType;
use crate::localfield::{FieldElem, LocalFieldError, RingElem, Tower};
use crate::status::SplitStatus;

/// Spare relative digits required of every denominator in the group law.
pub const DEFAULT_MARGIN: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeierstrassError {
    #[error("discriminant is indistinguishable from 0")]
    Singular,
    #[error("valuation table violated: {0}")]
    TableViolation(String),
    #[error("P is a torsion point of the analysed order (b8 = 0 at precision)")]
    TorsionDegenerate,
    #[error("the residues of alpha_{0} and alpha_{1} coincide")]
    ResidueCollision(usize, usize),
    #[error("{0} has no square root over the residue field")]
    NoSquareRoot(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("closed form disagrees with point arithmetic: {0}")]
    CrossCheckFailed(String),
    #[error("Ogg's formula needs an additive type, got {0}")]
    UnknownType(String),
    #[error(transparent)]
    Field(#[from] LocalFieldError),
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over a tower level.
#[derive(Debug, Clone)]
pub struct WeierstrassCurve {
    pub a1: FieldElem,
    pub a2: FieldElem,
    pub a3: FieldElem,
    pub a4: FieldElem,
    pub a6: FieldElem,
    margin: u32,
}

#[derive(Debug, Clone)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElem, y: FieldElem },
}

impl CurvePoint {
    pub fn affine(x: FieldElem, y: FieldElem) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElem> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&FieldElem> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    /// Equality of coordinates at the common precision.
    pub fn eq_at_precision(&self, other: &CurvePoint) -> bool {
        match (self, other) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => true,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                x1.eq_at_precision(x2) && y1.eq_at_precision(y2)
            }
            _ => false,
        }
    }

    /// `v(z(P))` with `z = -x/y`.
    pub fn z_valuation(&self) -> Result<i64, WeierstrassError> {
        match self {
            CurvePoint::Infinity => Err(WeierstrassError::PrecisionExhausted(
                "z(O) = 0 has no finite valuation".into(),
            )),
            CurvePoint::Affine { x, y } => {
                let vy = y.valuation().map_err(|_| {
                    WeierstrassError::PrecisionExhausted("y(P) indistinguishable from 0".into())
                })?;
                let vx = x.valuation().map_err(|_| {
                    WeierstrassError::PrecisionExhausted("x(P) indistinguishable from 0".into())
                })?;
                Ok(vx - vy)
            }
        }
    }

    /// `P ∈ E^n(L)`, i.e. `v(z(P)) >= n` (the identity lies in every `E^n`).
    pub fn en_membership(&self, n: i64) -> Result<bool, WeierstrassError> {
        match self {
            CurvePoint::Infinity => Ok(true),
            _ => Ok(self.z_valuation()? >= n),
        }
    }
}

impl WeierstrassCurve {
    pub fn new(a: [&RingElem; 5]) -> Result<Self, WeierstrassError> {
        let f = |x: &RingElem| FieldElem::from_ring(x);
        WeierstrassCurve::from_field([f(a[0]), f(a[1]), f(a[2]), f(a[3]), f(a[4])])
    }

    pub fn from_field(a: [FieldElem; 5]) -> Result<Self, WeierstrassError> {
        let [a1, a2, a3, a4, a6] = a;
        let curve = WeierstrassCurve { a1, a2, a3, a4, a6, margin: DEFAULT_MARGIN };
        if curve.discriminant().is_zero_at_precision() {
            return Err(WeierstrassError::Singular);
        }
        Ok(curve)
    }

    pub fn with_margin(mut self, margin: u32) -> Self {
        self.margin = margin;
        self
    }

    pub fn tower(&self) -> &Tower {
        self.a1.tower()
    }

    pub fn level(&self) -> usize {
        self.a1.level()
    }

    pub fn b2(&self) -> FieldElem {
        self.a1.mul(&self.a1).add(&self.a2.scale(4))
    }

    pub fn b4(&self) -> FieldElem {
        self.a4.scale(2).add(&self.a1.mul(&self.a3))
    }

    pub fn b6(&self) -> FieldElem {
        self.a3.mul(&self.a3).add(&self.a6.scale(4))
    }

    pub fn b8(&self) -> FieldElem {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1.mul(a1)
            .mul(a6)
            .add(&a2.mul(a6).scale(4))
            .sub(&a1.mul(a3).mul(a4))
            .add(&a2.mul(a3).mul(a3))
            .sub(&a4.mul(a4))
    }

    pub fn discriminant(&self) -> FieldElem {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        b2.mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&b4.pow(3).scale(8))
            .sub(&b6.mul(&b6).scale(27))
            .add(&b2.mul(&b4).mul(&b6).scale(9))
    }

    /// `y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6` at `(x, y)`.
    pub fn equation_residual(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let lhs = y.mul(y).add(&self.a1.mul(x).mul(y)).add(&self.a3.mul(y));
        let rhs = x.pow(3).add(&self.a2.mul(&x.mul(x))).add(&self.a4.mul(x)).add(&self.a6);
        lhs.sub(&rhs)
    }

    pub fn is_on_curve(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => self.equation_residual(x, y).is_zero_at_precision(),
        }
    }

    pub fn point(&self, x: FieldElem, y: FieldElem) -> Result<CurvePoint, WeierstrassError> {
        let p = CurvePoint::affine(x, y);
        if self.is_on_curve(&p) {
            Ok(p)
        } else {
            Err(WeierstrassError::NotOnCurve)
        }
    }

    fn checked_div(&self, num: &FieldElem, den: &FieldElem, what: &str) -> Result<FieldElem, WeierstrassError> {
        if den.is_zero_at_precision() || den.rel_precision() < self.margin {
            return Err(WeierstrassError::PrecisionExhausted(format!(
                "{what}: denominator known to {} relative digits, margin {}",
                den.rel_precision(),
                self.margin
            )));
        }
        Ok(num.div(den)?)
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: y.neg().sub(&self.a1.mul(x)).sub(&self.a3),
            },
        }
    }

    /// Chord-and-tangent addition.
    pub fn add_points(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, WeierstrassError> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return Ok(q.clone()),
            (_, CurvePoint::Infinity) => return Ok(p.clone()),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1.eq_at_precision(x2) {
            let s = y1.add(y2).add(&self.a1.mul(x2)).add(&self.a3);
            if s.is_zero_at_precision() {
                return Ok(CurvePoint::Infinity);
            }
            let den = y1.scale(2).add(&self.a1.mul(x1)).add(&self.a3);
            let lnum = x1
                .mul(x1)
                .scale(3)
                .add(&self.a2.mul(x1).scale(2))
                .add(&self.a4)
                .sub(&self.a1.mul(y1));
            let nnum = x1.pow(3).neg().add(&self.a4.mul(x1)).add(&self.a6.scale(2)).sub(&self.a3.mul(y1));
            (self.checked_div(&lnum, &den, "tangent slope")?, self.checked_div(&nnum, &den, "tangent intercept")?)
        } else {
            let den = x2.sub(x1);
            (
                self.checked_div(&y2.sub(y1), &den, "chord slope")?,
                self.checked_div(&y1.mul(x2).sub(&y2.mul(x1)), &den, "chord intercept")?,
            )
        };
        let x3 = lambda.mul(&lambda).add(&self.a1.mul(&lambda)).sub(&self.a2).sub(x1).sub(x2);
        let y3 = lambda.add(&self.a1).mul(&x3).neg().sub(&nu).sub(&self.a3);
        Ok(CurvePoint::affine(x3, y3))
    }

    pub fn double(&self, p: &CurvePoint) -> Result<CurvePoint, WeierstrassError> {
        self.add_points(p, p)
    }

    /// `[n]P` by double-and-add.
    pub fn multiple(&self, p: &CurvePoint, n: u64) -> Result<CurvePoint, WeierstrassError> {
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_points(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base)?;
            }
        }
        Ok(acc)
    }

    /// `x(2P)` from the duplication formula.
    pub fn duplication_x(&self, x: &FieldElem) -> Result<FieldElem, WeierstrassError> {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        let num = x.pow(4).sub(&b4.mul(&x.mul(x))).sub(&b6.mul(x).scale(2)).sub(&b8);
        let den = x.pow(3).scale(4).add(&b2.mul(&x.mul(x))).add(&b4.mul(x).scale(2)).add(&b6);
        self.checked_div(&num, &den, "duplication")
    }
}

fn val_at_least(name: &str, a: &FieldElem, bound: i64) -> Result<(), WeierstrassError> {
    match a.valuation() {
        Ok(v) if v < bound => Err(WeierstrassError::TableViolation(format!("v({name}) = {v} < {bound}"))),
        Ok(_) => Ok(()),
        Err(_) if a.abs_precision() >= bound => Ok(()),
        Err(_) => Err(WeierstrassError::PrecisionExhausted(format!("v({name}) undetermined"))),
    }
}

fn is_zero(name: &str, a: &FieldElem) -> Result<(), WeierstrassError> {
    if a.is_zero_at_precision() {
        Ok(())
    } else {
        Err(WeierstrassError::TableViolation(format!("{name} must be 0")))
    }
}

/// Square root of `a` by Newton iteration, for `p` odd and `v(a)` even.
pub fn hensel_sqrt(a: &RingElem) -> Result<RingElem, WeierstrassError> {
    let tower = a.tower().clone();
    if tower.p() == 2 {
        return Err(WeierstrassError::NoSquareRoot("square roots need p odd".into()));
    }
    let (v, u) = a.unit_part()?;
    if v % 2 == 1 {
        return Err(WeierstrassError::NoSquareRoot(format!("element of odd valuation {v}")));
    }
    let field = tower.residue_field();
    let r = field.sqrt(&u.residue()).ok_or_else(|| WeierstrassError::NoSquareRoot(u.to_string()))?;
    let mut y = tower.lift(a.level(), &r).truncate(u.precision());
    let half = tower.from_int(a.level(), 2).inverse()?;
    for _ in 0..=2 + 32 - u.precision().leading_zeros() {
        let next = (&y + &u.checked_div(&y)?) * &half;
        if next == y {
            break;
        }
        y = next;
    }
    if !(&y * &y).eq_at_precision(&u) {
        return Err(WeierstrassError::PrecisionExhausted("Newton square root did not converge".into()));
    }
    Ok(y.mul_pi_pow(v / 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeIVReport {
    pub v_b8: u32,
    /// `m = v(b8) - 3`.
    pub m: u32,
    /// `v(z(3P))` from point arithmetic.
    pub z_valuation_3p: i64,
    pub x_valuation_3p: i64,
    pub split_e: bool,
    pub d: u32,
    pub res_split: bool,
    pub status_e: SplitStatus,
    pub status_res: SplitStatus,
    pub component_group: String,
}

/// Type IV over `p = 3` with `a1 = a3 = 0`, `v(a2) >= 1`, `v(a4) >= 2`, `v(a6) = 2`.
pub fn analyze_type_iv(e: &WeierstrassCurve, d: u32) -> Result<TypeIVReport, WeierstrassError> {
    if e.tower().p() != 3 {
        return Err(WeierstrassError::TableViolation(format!("p = {} but type IV analysis needs p = 3", e.tower().p())));
    }
    is_zero("a1", &e.a1)?;
    is_zero("a3", &e.a3)?;
    val_at_least("a2", &e.a2, 1)?;
    val_at_least("a4", &e.a4, 2)?;
    match e.a6.valuation() {
        Ok(2) => {}
        Ok(v) => return Err(WeierstrassError::TableViolation(format!("v(a6) = {v} != 2"))),
        Err(_) => return Err(WeierstrassError::TableViolation("a6 = 0".into())),
    }
    // with a1 = a3 = 0 the general b8 reduces to 4 a2 a6 - a4^2
    let b8 = e.b8();
    debug_assert!(b8.eq_at_precision(&e.a2.mul(&e.a6).scale(4).sub(&e.a4.mul(&e.a4))));
    if b8.is_zero_at_precision() {
        return Err(WeierstrassError::TorsionDegenerate);
    }
    let v_b8 = b8.valuation()? as u32;
    if v_b8 < 3 {
        return Err(WeierstrassError::TableViolation(format!("v(b8) = {v_b8} < 3")));
    }
    let m = v_b8 - 3;
    let y = hensel_sqrt(&e.a6.to_ring()?)?;
    let p = e.point(FieldElem::zero(e.tower(), e.level()), FieldElem::from_ring(&y))?;
    let p2 = e.double(&p)?;
    let p3 = e.add_points(&p2, &p)?;
    let p3b = e.add_points(&p, &p2)?;
    if p3.is_infinity() {
        return Err(WeierstrassError::TorsionDegenerate);
    }
    if !p3.eq_at_precision(&p3b) {
        return Err(WeierstrassError::CrossCheckFailed("2P + P != P + 2P".into()));
    }
    let z3 = p3.z_valuation()?;
    if z3 != m as i64 {
        return Err(WeierstrassError::CrossCheckFailed(format!("v(z(3P)) = {z3} but v(b8) - 3 = {m}")));
    }
    let x3 = p3.x().expect("affine").valuation()?;
    if x3 != 6 - 2 * v_b8 as i64 {
        return Err(WeierstrassError::CrossCheckFailed(format!("v(x(3P)) = {x3} but 6 - 2 v(b8) = {}", 6 - 2 * v_b8 as i64)));
    }
    let status = |split: bool| if split { SplitStatus::Split } else { SplitStatus::TotallyNotSplit };
    Ok(TypeIVReport {
        v_b8,
        m,
        z_valuation_3p: z3,
        x_valuation_3p: x3,
        split_e: m >= 1,
        d,
        res_split: m >= d,
        status_e: status(m >= 1),
        status_res: status(m >= d),
        component_group: "Z/3Z".into(),
    })
}

/// `m_i`, or `None` for a 2-torsion point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Finite(u32),
    Infinity,
}

impl Threshold {
    fn at_least(self, t: u32) -> bool {
        match self {
            Threshold::Finite(m) => m >= t,
            Threshold::Infinity => true,
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Threshold::Finite(m) => s.serialize_u32(*m),
            Threshold::Infinity => s.serialize_str("Infinity"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeI0StarReport {
    pub m: [Threshold; 3],
    /// `v(z(2P_i))` from point arithmetic (`None` for 2-torsion points).
    pub z_valuation_2p: [Option<i64>; 3],
    pub status_e: SplitStatus,
    pub d: u32,
    pub status_res: SplitStatus,
    pub component_group: String,
}

/// Trichotomy at threshold `t`: split iff every `m_i >= t`, totally not split iff none is.
pub fn i0star_status(m: &[Threshold; 3], t: u32) -> SplitStatus {
    if m.iter().all(|x| x.at_least(t)) {
        SplitStatus::Split
    } else if m.iter().all(|x| !x.at_least(t)) {
        SplitStatus::TotallyNotSplit
    } else {
        SplitStatus::NotSplit
    }
}

/// Builds `y^2 + a1 xy + a3 y = (x - πα_1)(x - πα_2)(x - πα_3)`.
pub fn i0star_curve(
    alphas: [&RingElem; 3],
    a1: &RingElem,
    a3: &RingElem,
) -> Result<WeierstrassCurve, WeierstrassError> {
    let tower = a1.tower();
    let level = a1.level();
    let pi = tower.uniformizer(level);
    let x: Vec<FieldElem> = alphas.iter().map(|a| FieldElem::from_ring(&(&pi * *a))).collect();
    let a2 = x[0].add(&x[1]).add(&x[2]).neg();
    let a4 = x[0].mul(&x[1]).add(&x[0].mul(&x[2])).add(&x[1].mul(&x[2]));
    let a6 = x[0].mul(&x[1]).mul(&x[2]).neg();
    WeierstrassCurve::from_field([FieldElem::from_ring(a1), a2, FieldElem::from_ring(a3), a4, a6])
}

/// Type `I_0^*` over `p = 2` for the curve built by [`i0star_curve`].
pub fn analyze_type_i0star(
    alphas: [&RingElem; 3],
    a1: &RingElem,
    a3: &RingElem,
    d: u32,
) -> Result<TypeI0StarReport, WeierstrassError> {
    let tower = a1.tower().clone();
    if tower.p() != 2 {
        return Err(WeierstrassError::TableViolation(format!("p = {} but type I0* analysis needs p = 2", tower.p())));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if alphas[i].residue() == alphas[j].residue() {
                return Err(WeierstrassError::ResidueCollision(i + 1, j + 1));
            }
        }
    }
    let e = i0star_curve(alphas, a1, a3)?;
    val_at_least("a1", &e.a1, 1)?;
    val_at_least("a3", &e.a3, 2)?;
    val_at_least("a2", &e.a2, 1)?;
    val_at_least("a4", &e.a4, 2)?;
    val_at_least("a6", &e.a6, 3)?;
    let pi = tower.uniformizer(a1.level());
    let mut m = [Threshold::Infinity; 3];
    let mut z2 = [None; 3];
    for i in 0..3 {
        let x = FieldElem::from_ring(&(&pi * alphas[i]));
        let p = e.point(x.clone(), FieldElem::zero(&tower, a1.level()))?;
        let tangent = e.a1.mul(&x).add(&e.a3);
        if tangent.is_zero_at_precision() {
            if !e.double(&p)?.is_infinity() {
                return Err(WeierstrassError::CrossCheckFailed(format!("P_{} should be 2-torsion", i + 1)));
            }
            continue;
        }
        let v = tangent.valuation()?;
        if v < 2 {
            return Err(WeierstrassError::TableViolation(format!("v(a1 x_{} + a3) = {v} < 2", i + 1)));
        }
        let mi = (v - 2) as u32;
        let q = e.double(&p)?;
        let zq = q.z_valuation()?;
        let xd = e.duplication_x(&x)?;
        if !xd.eq_at_precision(q.x().expect("affine")) {
            return Err(WeierstrassError::CrossCheckFailed(format!("duplication formula for P_{}", i + 1)));
        }
        if zq != mi as i64 {
            return Err(WeierstrassError::CrossCheckFailed(format!(
                "v(z(2P_{})) = {zq} but v(a1 x + a3) - 2 = {mi}",
                i + 1
            )));
        }
        m[i] = Threshold::Finite(mi);
        z2[i] = Some(zq);
    }
    Ok(TypeI0StarReport {
        m,
        z_valuation_2p: z2,
        status_e: i0star_status(&m, 1),
        d,
        status_res: i0star_status(&m, d),
        component_group: "Z/2Z x Z/2Z".into(),
    })
}

/// Ogg's formula `v(Δ) = 2 + δ + (components - 1)` for additive types.
pub fn ogg_discriminant(t: KodairaType, delta: u32) -> Result<u32, WeierstrassError> {
    if !t.is_additive() {
        return Err(WeierstrassError::UnknownType(t.to_string()));
    }
    Ok(2 + delta + t.components() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::{parse_element, TowerSpec};

    fn q3() -> Tower {
        TowerSpec::mixed(3, 1).base_name("L").precision(40).build().unwrap()
    }

    fn curve_iv(t: &Tower, a2: &str, a4: &str, a6: &str) -> WeierstrassCurve {
        let e = |s: &str| parse_element(s, t, 0).unwrap();
        WeierstrassCurve::new([&e("0"), &e(a2), &e("0"), &e(a4), &e(a6)]).unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let t = q3();
        let e = curve_iv(&t, "pi_L", "pi_L^2", "pi_L^2");
        let y = hensel_sqrt(&parse_element("pi_L^2", &t, 0).unwrap()).unwrap();
        let p = e.point(FieldElem::zero(&t, 0), FieldElem::from_ring(&y)).unwrap();
        assert!(e.add_points(&p, &CurvePoint::Infinity).unwrap().eq_at_precision(&p));
        assert!(e.add_points(&p, &e.negate(&p)).unwrap().is_infinity());
    }

    #[test]
    fn type_iv_examples() {
        let t = q3();
        let r = analyze_type_iv(&curve_iv(&t, "pi_L", "pi_L^2", "pi_L^2"), 2).unwrap();
        assert_eq!((r.v_b8, r.m, r.split_e), (3, 0, false));
        let r = analyze_type_iv(&curve_iv(&t, "pi_L^2", "pi_L^3", "pi_L^2"), 2).unwrap();
        assert_eq!((r.v_b8, r.m, r.split_e, r.res_split), (4, 1, true, false));
        assert_eq!(r.z_valuation_3p, 1);
        let err = analyze_type_iv(&curve_iv(&t, "0", "0", "pi_L^2"), 2).unwrap_err();
        assert_eq!(err, WeierstrassError::TorsionDegenerate);
    }

    #[test]
    fn type_iv_table_checked() {
        let t = q3();
        let err = analyze_type_iv(&curve_iv(&t, "1", "pi_L^2", "pi_L^2"), 2).unwrap_err();
        assert!(matches!(err, WeierstrassError::TableViolation(_)));
        let err = analyze_type_iv(&curve_iv(&t, "pi_L", "pi_L^2", "pi_L^3"), 2).unwrap_err();
        assert!(matches!(err, WeierstrassError::TableViolation(_)));
    }

    #[test]
    fn z_valuation_of_a_point_near_infinity() {
        let t = q3();
        let x = FieldElem::one(&t, 0).div(&FieldElem::from_ring(&t.uniformizer(0)).pow(2)).unwrap();
        let y = FieldElem::one(&t, 0).div(&FieldElem::from_ring(&t.uniformizer(0)).pow(3)).unwrap();
        let p = CurvePoint::affine(x, y);
        assert_eq!(p.z_valuation().unwrap(), 1);
        let q = CurvePoint::affine(FieldElem::one(&t, 0), FieldElem::one(&t, 0));
        assert!(!q.en_membership(1).unwrap());
    }

    #[test]
    fn i0star_f4_example() {
        let t = TowerSpec::mixed(2, 2).base_name("L").build().unwrap();
        let e = |s: &str| parse_element(s, &t, 0).unwrap();
        let r = analyze_type_i0star([&e("0"), &e("1"), &e("z")], &e("pi_L"), &e("pi_L^2"), 2).unwrap();
        // v(a1 x_i + a3) = 2 + v(α_i + 1)
        assert_eq!(r.m, [Threshold::Finite(0), Threshold::Finite(1), Threshold::Finite(0)]);
        assert_eq!(r.status_e, SplitStatus::NotSplit);
        assert_eq!(r.status_res, SplitStatus::TotallyNotSplit);
    }

    #[test]
    fn i0star_residue_collision() {
        let t = TowerSpec::mixed(2, 2).base_name("L").build().unwrap();
        let e = |s: &str| parse_element(s, &t, 0).unwrap();
        let err = analyze_type_i0star([&e("0"), &e("1"), &e("1 + pi_L")], &e("pi_L"), &e("pi_L^2"), 2)
            .unwrap_err();
        assert_eq!(err, WeierstrassError::ResidueCollision(2, 3));
    }

    #[test]
    fn ogg_values() {
        assert_eq!(ogg_discriminant(KodairaType::II, 1).unwrap(), 3);
        assert_eq!(ogg_discriminant(KodairaType::III, 1).unwrap(), 4);
        assert_eq!(ogg_discriminant(KodairaType::IIIStar, 1).unwrap(), 10);
        assert_eq!(ogg_discriminant(KodairaType::IIStar, 1).unwrap(), 11);
        assert_eq!(ogg_discriminant(KodairaType::IStar(0), 0).unwrap(), 6);
        assert!(ogg_discriminant(KodairaType::I(3), 0).is_err());
    }
}
