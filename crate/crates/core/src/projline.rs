//! Cosets of `A² ∖ {(0,0)}` under unit scaling, their canonical classes and
//! the orbit decomposition under GL₂.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_num, AlgebraKind, Hypercomplex, TAU_ALG, TAU_ZERO};
use crate::error::{Error, Result};
use crate::matrix2::{Mat2, RealMat2};

/// A point `[x : y]` of `A²/~`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint {
    pub x: Hypercomplex,
    pub y: Hypercomplex,
}

impl ProjPoint {
    pub fn new(x: Hypercomplex, y: Hypercomplex) -> Result<Self> {
        Self::new_with(x, y, TAU_ZERO)
    }

    pub fn new_with(x: Hypercomplex, y: Hypercomplex, zero_tol: f64) -> Result<Self> {
        x.checked_add(&y)?;
        if x.is_zero(zero_tol) && y.is_zero(zero_tol) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint { x, y })
    }

    /// `[z : 1]`.
    pub fn affine(z: Hypercomplex) -> Self {
        ProjPoint {
            x: z,
            y: Hypercomplex::one(z.kind),
        }
    }

    /// `[1 : 0]`.
    pub fn infinity(kind: AlgebraKind) -> Self {
        ProjPoint {
            x: Hypercomplex::one(kind),
            y: Hypercomplex::zero(kind),
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.x.kind
    }

    pub fn scale(&self, u: Hypercomplex) -> Self {
        ProjPoint {
            x: self.x * u,
            y: self.y * u,
        }
    }

    /// `[ax + by : cx + dy]`.
    pub fn apply(&self, m: &Mat2) -> Result<Self> {
        if m.kind() != self.kind() {
            return Err(Error::KindMismatch {
                left: m.kind(),
                right: self.kind(),
            });
        }
        ProjPoint::new(m.a * self.x + m.b * self.y, m.c * self.x + m.d * self.y)
    }

    pub fn admissible(&self) -> bool {
        self.admissible_with(TAU_ZERO)
    }

    /// True when `(x, y)` is the first column of an invertible matrix.
    pub fn admissible_with(&self, zero_tol: f64) -> bool {
        let z = |v: f64| v.abs() < zero_tol;
        match self.kind() {
            AlgebraKind::Complex => true,
            AlgebraKind::Dual => !(z(self.x.re) && z(self.y.re)),
            AlgebraKind::Double => {
                let (xp, xm) = self.x.components();
                let (yp, ym) = self.y.components();
                !(z(xp) && z(yp)) && !(z(xm) && z(ym))
            }
        }
    }

    pub fn canonicalize(&self) -> CanonicalClass {
        self.canonicalize_with(TAU_ZERO)
    }

    pub fn canonicalize_with(&self, zero_tol: f64) -> CanonicalClass {
        let z = |v: f64| v.abs() < zero_tol;
        let (x, y) = (self.x, self.y);
        match self.kind() {
            AlgebraKind::Complex => {
                if y.is_zero(zero_tol) {
                    CanonicalClass::Infinity
                } else {
                    CanonicalClass::Affine(x * y.invert_with(zero_tol).expect("nonzero complex"))
                }
            }
            AlgebraKind::Dual => {
                if !z(y.re) {
                    let inv = y.invert_with(zero_tol).expect("dual unit");
                    CanonicalClass::Affine(x * inv)
                } else if !z(x.re) {
                    if z(y.im) {
                        CanonicalClass::Infinity
                    } else {
                        CanonicalClass::DualOmega(y.im / x.re)
                    }
                } else {
                    CanonicalClass::Pr(RealRatio::new(x.im, y.im).expect("nonzero point"))
                }
            }
            AlgebraKind::Double => {
                let (xp, xm) = x.components();
                let (yp, ym) = y.components();
                if !z(yp) && !z(ym) {
                    return CanonicalClass::Affine(Hypercomplex::recompose(xp / yp, xm / ym));
                }
                if !z(xp) && !z(xm) {
                    return match (z(yp), z(ym)) {
                        (true, true) => CanonicalClass::Infinity,
                        (false, _) => CanonicalClass::OmegaPlus(yp / xp),
                        (true, false) => CanonicalClass::OmegaMinus(ym / xm),
                    };
                }
                match (z(xp), z(xm), z(yp), z(ym)) {
                    (false, true, true, false) => CanonicalClass::SigmaOne,
                    (true, false, false, true) => CanonicalClass::SigmaTwo,
                    (_, true, _, true) => {
                        CanonicalClass::PrPlus(RealRatio::new(xp, yp).expect("nonzero point"))
                    }
                    _ => CanonicalClass::PrMinus(RealRatio::new(xm, ym).expect("nonzero point")),
                }
            }
        }
    }

    pub fn orbit_label(&self) -> OrbitLabel {
        self.orbit_label_with(TAU_ZERO)
    }

    pub fn orbit_label_with(&self, zero_tol: f64) -> OrbitLabel {
        if self.admissible_with(zero_tol) {
            return OrbitLabel::ProjectiveLine;
        }
        match self.kind() {
            AlgebraKind::Double => {
                let (_, xm) = self.x.components();
                let (_, ym) = self.y.components();
                if xm.abs() < zero_tol && ym.abs() < zero_tol {
                    OrbitLabel::PrPlus
                } else {
                    OrbitLabel::PrMinus
                }
            }
            _ => OrbitLabel::Pr,
        }
    }

    /// Parses `[x : y]` with coordinates in the algebra number grammar.
    pub fn parse(kind: AlgebraKind, input: &str) -> Result<Self> {
        let trimmed = input.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::parse("point", input, "expected [x : y]"))?;
        let (x, y) = inner
            .split_once(':')
            .ok_or_else(|| Error::parse("point", input, "expected a ':' separator"))?;
        ProjPoint::new(Hypercomplex::parse(kind, x)?, Hypercomplex::parse(kind, y)?)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.x, self.y)
    }
}

/// Point of the real projective line, stored with unit norm and first
/// nonzero coordinate positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRatio {
    pub x: f64,
    pub y: f64,
}

impl RealRatio {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let norm = x.hypot(y);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let sign = if x > 0.0 || (x == 0.0 && y > 0.0) { 1.0 } else { -1.0 };
        Ok(RealRatio {
            x: sign * x / norm + 0.0,
            y: sign * y / norm + 0.0,
        })
    }

    pub fn infinity() -> Self {
        RealRatio { x: 1.0, y: 0.0 }
    }

    pub fn affine(x: f64) -> Self {
        RealRatio::new(x, 1.0).expect("nonzero")
    }

    pub fn apply(&self, m: &RealMat2) -> Result<Self> {
        RealRatio::new(m.a * self.x + m.b * self.y, m.c * self.x + m.d * self.y)
    }

    /// Equality as real-projective points. The sign flip covers ratios
    /// whose first coordinate is within rounding of zero.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let same = (self.x - other.x).abs() <= tol && (self.y - other.y).abs() <= tol;
        let flipped = (self.x + other.x).abs() <= tol && (self.y + other.y).abs() <= tol;
        same || flipped
    }

    /// Affine coordinate `x/y`, if finite.
    pub fn affine_value(&self, zero_tol: f64) -> Option<f64> {
        (self.y.abs() >= zero_tol).then(|| self.x / self.y)
    }

    /// `x/y`, or `∞` for the point at infinity.
    pub fn chart_label(&self, precision: Option<usize>) -> String {
        match self.affine_value(TAU_ZERO) {
            Some(v) => fmt_num(v, precision),
            None => "∞".to_string(),
        }
    }
}

impl fmt::Display for RealRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision();
        write!(f, "[{}:{}]", fmt_num(self.x, p), fmt_num(self.y, p))
    }
}

/// Canonical label of a point of `A²/~`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "value")]
pub enum CanonicalClass {
    /// `[a : 1]`.
    Affine(Hypercomplex),
    /// `[1 : 0]`.
    Infinity,
    /// `[1 : λP₊]`.
    OmegaPlus(f64),
    /// `[1 : λP₋]`.
    OmegaMinus(f64),
    /// `[P₊ : P₋]`.
    SigmaOne,
    /// `[P₋ : P₊]`.
    SigmaTwo,
    /// `[1 : ελ]`.
    DualOmega(f64),
    /// `[xP₊ : yP₊]`.
    PrPlus(RealRatio),
    /// `[xP₋ : yP₋]`.
    PrMinus(RealRatio),
    /// `[εx : εy]`.
    Pr(RealRatio),
}

impl CanonicalClass {
    pub fn tag(&self) -> &'static str {
        match self {
            CanonicalClass::Affine(_) => "Affine",
            CanonicalClass::Infinity => "Infinity",
            CanonicalClass::OmegaPlus(_) => "OmegaPlus",
            CanonicalClass::OmegaMinus(_) => "OmegaMinus",
            CanonicalClass::SigmaOne => "SigmaOne",
            CanonicalClass::SigmaTwo => "SigmaTwo",
            CanonicalClass::DualOmega(_) => "DualOmega",
            CanonicalClass::PrPlus(_) => "NonAdmissiblePRPlus",
            CanonicalClass::PrMinus(_) => "NonAdmissiblePRMinus",
            CanonicalClass::Pr(_) => "NonAdmissiblePR",
        }
    }

    pub fn is_admissible(&self) -> bool {
        !matches!(
            self,
            CanonicalClass::PrPlus(_) | CanonicalClass::PrMinus(_) | CanonicalClass::Pr(_)
        )
    }

    pub fn orbit_label(&self) -> OrbitLabel {
        match self {
            CanonicalClass::PrPlus(_) => OrbitLabel::PrPlus,
            CanonicalClass::PrMinus(_) => OrbitLabel::PrMinus,
            CanonicalClass::Pr(_) => OrbitLabel::Pr,
            _ => OrbitLabel::ProjectiveLine,
        }
    }

    /// Whether the class can occur for points over `kind`.
    pub fn belongs_to(&self, kind: AlgebraKind) -> bool {
        match self {
            CanonicalClass::Affine(a) => a.kind == kind,
            CanonicalClass::Infinity => true,
            CanonicalClass::OmegaPlus(_)
            | CanonicalClass::OmegaMinus(_)
            | CanonicalClass::SigmaOne
            | CanonicalClass::SigmaTwo
            | CanonicalClass::PrPlus(_)
            | CanonicalClass::PrMinus(_) => kind == AlgebraKind::Double,
            CanonicalClass::DualOmega(_) | CanonicalClass::Pr(_) => kind == AlgebraKind::Dual,
        }
    }

    /// The representative point the class is named after.
    pub fn representative(&self, kind: AlgebraKind) -> Result<ProjPoint> {
        if !self.belongs_to(kind) {
            return Err(Error::Unsupported(format!("class {} does not occur over {kind}", self.tag())));
        }
        let one = Hypercomplex::one(kind);
        let (pp, pm) = (Hypercomplex::p_plus(), Hypercomplex::p_minus());
        let eps = Hypercomplex::generator(AlgebraKind::Dual);
        let point = match *self {
            CanonicalClass::Affine(a) => ProjPoint::affine(a),
            CanonicalClass::Infinity => ProjPoint::infinity(kind),
            CanonicalClass::OmegaPlus(l) => ProjPoint { x: one, y: pp * l },
            CanonicalClass::OmegaMinus(l) => ProjPoint { x: one, y: pm * l },
            CanonicalClass::SigmaOne => ProjPoint { x: pp, y: pm },
            CanonicalClass::SigmaTwo => ProjPoint { x: pm, y: pp },
            CanonicalClass::DualOmega(l) => ProjPoint { x: one, y: eps * l },
            CanonicalClass::PrPlus(r) => ProjPoint { x: pp * r.x, y: pp * r.y },
            CanonicalClass::PrMinus(r) => ProjPoint { x: pm * r.x, y: pm * r.y },
            CanonicalClass::Pr(r) => ProjPoint { x: eps * r.x, y: eps * r.y },
        };
        Ok(point)
    }

    /// Payload comparison within `tol`; PR payloads compare as real-projective points.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * 1.0f64.max(a.abs()).max(b.abs());
        match (self, other) {
            (CanonicalClass::Affine(a), CanonicalClass::Affine(b)) => a.approx_eq(b, tol),
            (CanonicalClass::Infinity, CanonicalClass::Infinity)
            | (CanonicalClass::SigmaOne, CanonicalClass::SigmaOne)
            | (CanonicalClass::SigmaTwo, CanonicalClass::SigmaTwo) => true,
            (CanonicalClass::OmegaPlus(a), CanonicalClass::OmegaPlus(b))
            | (CanonicalClass::OmegaMinus(a), CanonicalClass::OmegaMinus(b))
            | (CanonicalClass::DualOmega(a), CanonicalClass::DualOmega(b)) => close(*a, *b),
            (CanonicalClass::PrPlus(a), CanonicalClass::PrPlus(b))
            | (CanonicalClass::PrMinus(a), CanonicalClass::PrMinus(b))
            | (CanonicalClass::Pr(a), CanonicalClass::Pr(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }

    /// Display label: `∞`, `σ1`, `σ2`, `(1/λ)ω1`, `(1/λ)ω2`, `(1/λ)ω`, the
    /// affine value, or the PR ratio.
    pub fn label(&self, precision: Option<usize>) -> String {
        match self {
            CanonicalClass::Affine(a) => match precision {
                Some(p) => format!("{a:.p$}"),
                None => a.to_string(),
            },
            CanonicalClass::Infinity => "∞".to_string(),
            CanonicalClass::SigmaOne => "σ1".to_string(),
            CanonicalClass::SigmaTwo => "σ2".to_string(),
            CanonicalClass::OmegaMinus(l) => format!("{}ω1", omega_coefficient(*l, precision)),
            CanonicalClass::OmegaPlus(l) => format!("{}ω2", omega_coefficient(*l, precision)),
            CanonicalClass::DualOmega(l) => format!("{}ω", omega_coefficient(*l, precision)),
            CanonicalClass::PrPlus(r) => format!("PR+{}", ratio_text(r, precision)),
            CanonicalClass::PrMinus(r) => format!("PR-{}", ratio_text(r, precision)),
            CanonicalClass::Pr(r) => format!("PR{}", ratio_text(r, precision)),
        }
    }

    /// One-line summary such as `OmegaPlus λ=0.6667, label (3/2)ω2, orbit ProjectiveLine`.
    pub fn summary(&self, precision: usize) -> String {
        let p = Some(precision);
        let payload = match self {
            CanonicalClass::Affine(a) => format!(" {a:.precision$}"),
            CanonicalClass::OmegaPlus(l) | CanonicalClass::OmegaMinus(l) | CanonicalClass::DualOmega(l) => {
                format!(" λ={}", fmt_num(*l, p))
            }
            CanonicalClass::PrPlus(r) | CanonicalClass::PrMinus(r) | CanonicalClass::Pr(r) => {
                format!(" ratio={}", ratio_text(r, p))
            }
            _ => String::new(),
        };
        format!(
            "{}{payload}, label {}, orbit {}",
            self.tag(),
            self.label(p),
            self.orbit_label()
        )
    }
}

fn ratio_text(r: &RealRatio, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{r:.p$}"),
        None => r.to_string(),
    }
}

/// Coefficient `1/λ` in front of an ω label, as a small fraction when one fits.
fn omega_coefficient(lambda: f64, precision: Option<usize>) -> String {
    let c = 1.0 / lambda;
    match small_fraction(c) {
        Some((1, 1)) => String::new(),
        Some((-1, 1)) => "-".to_string(),
        Some((n, 1)) => n.to_string(),
        Some((n, d)) => format!("({n}/{d})"),
        None => format!("({})", fmt_num(c, precision.or(Some(4)))),
    }
}

fn small_fraction(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    (1..=64i64).find_map(|d| {
        let n = (x * d as f64).round();
        ((x * d as f64 - n).abs() < 1e-9 * d as f64 && n.abs() < 1e9).then_some((n as i64, d))
    })
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label(f.precision()))
    }
}

/// GL₂-orbit of a point of `A²/~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitLabel {
    ProjectiveLine,
    PrPlus,
    PrMinus,
    Pr,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitLabel::ProjectiveLine => "ProjectiveLine",
            OrbitLabel::PrPlus => "PRPlus",
            OrbitLabel::PrMinus => "PRMinus",
            OrbitLabel::Pr => "PR",
        })
    }
}

/// A non-admissible orbit together with its copy of the real projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrFamily {
    Plus,
    Minus,
    Dual,
}

impl PrFamily {
    pub fn kind(self) -> AlgebraKind {
        match self {
            PrFamily::Dual => AlgebraKind::Dual,
            _ => AlgebraKind::Double,
        }
    }

    /// The nilpotent or idempotent factor multiplying both coordinates.
    fn factor(self) -> Hypercomplex {
        match self {
            PrFamily::Plus => Hypercomplex::p_plus(),
            PrFamily::Minus => Hypercomplex::p_minus(),
            PrFamily::Dual => Hypercomplex::generator(AlgebraKind::Dual),
        }
    }

    /// `[P₊ : 0]`, `[P₋ : 0]` or `[ε : 0]`.
    pub fn base_point(self) -> ProjPoint {
        self.embed(&RealRatio::infinity())
    }

    /// `f[x : y]`: `[xP± : yP±]` or `[εx : εy]`.
    pub fn embed(self, r: &RealRatio) -> ProjPoint {
        let k = self.factor();
        ProjPoint {
            x: k * r.x,
            y: k * r.y,
        }
    }

    pub fn class(self, r: RealRatio) -> CanonicalClass {
        match self {
            PrFamily::Plus => CanonicalClass::PrPlus(r),
            PrFamily::Minus => CanonicalClass::PrMinus(r),
            PrFamily::Dual => CanonicalClass::Pr(r),
        }
    }

    pub fn of_class(class: &CanonicalClass) -> Option<(PrFamily, RealRatio)> {
        match *class {
            CanonicalClass::PrPlus(r) => Some((PrFamily::Plus, r)),
            CanonicalClass::PrMinus(r) => Some((PrFamily::Minus, r)),
            CanonicalClass::Pr(r) => Some((PrFamily::Dual, r)),
            _ => None,
        }
    }
}

/// Equality of points of `A²/~`.
pub fn equivalent(p: &ProjPoint, q: &ProjPoint) -> Result<bool> {
    if p.kind() != q.kind() {
        return Err(Error::KindMismatch {
            left: p.kind(),
            right: q.kind(),
        });
    }
    Ok(p.canonicalize().approx_eq(&q.canonicalize(), TAU_ALG))
}

/// A matrix in GL₂ sending `[1 : 0]` to the admissible point `p`.
///
/// Uses `[[x, −y], [y, x]]`. Over ℂ that matrix is singular on the isotropic
/// points `[1 : ±i]`, where a triangular matrix is used instead.
pub fn transporter_to(p: &ProjPoint) -> Result<Mat2> {
    if !p.admissible() {
        return Err(Error::NotAdmissible);
    }
    let (x, y) = (p.x, p.y);
    let m = Mat2::new(x, -y, y, x)?;
    if m.det().is_unit() {
        return Ok(m);
    }
    let one = Hypercomplex::one(p.kind());
    let zero = Hypercomplex::zero(p.kind());
    if x.is_unit() {
        Mat2::new(x, zero, y, one)
    } else {
        Mat2::new(x, -one, y, zero)
    }
}

/// A matrix in GL₂ sending the family's base point to `[λ·k : μ·k]`, where
/// `k` is `P₊`, `P₋` or `ε`.
pub fn transporter_pr(family: PrFamily, lambda: f64, mu: f64) -> Result<Mat2> {
    if lambda == 0.0 && mu == 0.0 {
        return Err(Error::ZeroVector);
    }
    match family {
        PrFamily::Dual => {
            let h = |re, im| Hypercomplex::new(AlgebraKind::Dual, re, im);
            Mat2::new(h(lambda, 1.0), h(-mu, 0.0), h(mu, 1.0), h(lambda, 0.0))
        }
        PrFamily::Plus | PrFamily::Minus => {
            let (k, other) = match family {
                PrFamily::Plus => (Hypercomplex::p_plus(), Hypercomplex::p_minus()),
                _ => (Hypercomplex::p_minus(), Hypercomplex::p_plus()),
            };
            if lambda.abs() >= TAU_ZERO {
                Mat2::new(k * lambda, other, k * mu + other, k)
            } else {
                Mat2::new(k * lambda + other, k, k * mu, other)
            }
        }
    }
}

/// [`transporter_pr`] for a canonical PR class.
pub fn transporter_nonadmissible(kind: AlgebraKind, target: &CanonicalClass) -> Result<Mat2> {
    let (family, r) =
        PrFamily::of_class(target).ok_or_else(|| Error::NotNonAdmissible(target.tag().to_string()))?;
    if family.kind() != kind {
        return Err(Error::NotNonAdmissible(format!("{} over {kind}", target.tag())));
    }
    transporter_pr(family, r.x, r.y)
}

/// Image of an SL₂ matrix in SL₂(ℝ): both idempotent components for double
/// matrices, the real part for dual ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SlProjection {
    Double { plus: RealMat2, minus: RealMat2 },
    Dual(RealMat2),
}

impl SlProjection {
    /// The real matrix acting on the given family.
    pub fn for_family(&self, family: PrFamily) -> Result<RealMat2> {
        match (self, family) {
            (SlProjection::Double { plus, .. }, PrFamily::Plus) => Ok(*plus),
            (SlProjection::Double { minus, .. }, PrFamily::Minus) => Ok(*minus),
            (SlProjection::Dual(g), PrFamily::Dual) => Ok(*g),
            _ => Err(Error::Unsupported("family does not match the projection".into())),
        }
    }
}

pub fn project_sl(g: &Mat2) -> Result<SlProjection> {
    let membership = g.membership();
    if !membership.in_sl {
        return Err(Error::NotInSl(membership.det.to_string()));
    }
    match g.kind() {
        AlgebraKind::Double => {
            let (plus, minus) = g.components_unchecked();
            Ok(SlProjection::Double { plus, minus })
        }
        AlgebraKind::Dual => Ok(SlProjection::Dual(g.parts().0)),
        AlgebraKind::Complex => Err(Error::Unsupported(
            "complex matrices have no projection to SL2(R)".into(),
        )),
    }
}

/// `f`: the bijection from the real projective line onto a PR family.
pub fn bijection_f(family: PrFamily, r: &RealRatio) -> ProjPoint {
    family.embed(r)
}
