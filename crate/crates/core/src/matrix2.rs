//! 2×2 matrices over ℝ and over the hypercomplex algebras.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_num, AlgebraKind, Hypercomplex, Tolerances, TAU_ALG, TAU_ZERO};
use crate::error::{Error, Result};

/// Real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealMat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealMat2 {
    pub const IDENTITY: RealMat2 = RealMat2::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: RealMat2 = RealMat2::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        RealMat2 { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Adjugate `[[d, −b], [−c, a]]`.
    pub fn hat(&self) -> Self {
        RealMat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn scale(&self, k: f64) -> Self {
        RealMat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() < TAU_ZERO {
            return Err(Error::Singular {
                class: crate::algebra::ElementClass::Zero,
            });
        }
        Ok(self.hat().scale(1.0 / det))
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// True if the matrix is `λ·I` for some real λ.
    pub fn is_scalar(&self, tol: f64) -> bool {
        let scale = 1.0f64.max(self.max_abs());
        self.b.abs() <= tol * scale && self.c.abs() <= tol * scale && (self.a - self.d).abs() <= tol * scale
    }

    pub fn exp(&self, t: f64) -> Self {
        scaled_taylor_exp(self, t)
    }
}

impl Add for RealMat2 {
    type Output = RealMat2;

    fn add(self, r: Self) -> Self {
        RealMat2::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for RealMat2 {
    type Output = RealMat2;

    fn sub(self, r: Self) -> Self {
        RealMat2::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Neg for RealMat2 {
    type Output = RealMat2;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for RealMat2 {
    type Output = RealMat2;

    fn mul(self, r: Self) -> Self {
        RealMat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl fmt::Display for RealMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision();
        write!(
            f,
            "[[{},{}],[{},{}]]",
            fmt_num(self.a, p),
            fmt_num(self.b, p),
            fmt_num(self.c, p),
            fmt_num(self.d, p)
        )
    }
}

/// Membership of a matrix in GL₂ and SL₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupMembership {
    pub in_gl: bool,
    pub in_sl: bool,
    pub det: Hypercomplex,
}

/// 2×2 matrix `[[a, b], [c, d]]` with entries in one algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Hypercomplex,
    pub b: Hypercomplex,
    pub c: Hypercomplex,
    pub d: Hypercomplex,
}

impl Mat2 {
    pub fn new(a: Hypercomplex, b: Hypercomplex, c: Hypercomplex, d: Hypercomplex) -> Result<Self> {
        for e in [b, c, d] {
            if e.kind != a.kind {
                return Err(Error::KindMismatch {
                    left: a.kind,
                    right: e.kind,
                });
            }
        }
        Ok(Mat2 { a, b, c, d })
    }

    fn from_entries_unchecked(a: Hypercomplex, b: Hypercomplex, c: Hypercomplex, d: Hypercomplex) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.a.kind
    }

    pub fn identity(kind: AlgebraKind) -> Self {
        Self::scalar(Hypercomplex::one(kind))
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        Self::scalar(Hypercomplex::zero(kind))
    }

    /// `u·I`.
    pub fn scalar(u: Hypercomplex) -> Self {
        let z = Hypercomplex::zero(u.kind);
        Self::from_entries_unchecked(u, z, z, u)
    }

    /// Real matrix embedded with zero generator parts.
    pub fn from_real(kind: AlgebraKind, m: &RealMat2) -> Self {
        let r = |v| Hypercomplex::real(kind, v);
        Self::from_entries_unchecked(r(m.a), r(m.b), r(m.c), r(m.d))
    }

    /// `A₁ + u·A₂` from its two real parts.
    pub fn from_parts(kind: AlgebraKind, re: &RealMat2, im: &RealMat2) -> Self {
        let h = |x, y| Hypercomplex::new(kind, x, y);
        Self::from_entries_unchecked(h(re.a, im.a), h(re.b, im.b), h(re.c, im.c), h(re.d, im.d))
    }

    /// The real parts `(A₁, A₂)` with `self = A₁ + u·A₂`.
    pub fn parts(&self) -> (RealMat2, RealMat2) {
        (
            RealMat2::new(self.a.re, self.b.re, self.c.re, self.d.re),
            RealMat2::new(self.a.im, self.b.im, self.c.im, self.d.im),
        )
    }

    /// `A₁ + εA₂`.
    pub fn from_dual_parts(a1: &RealMat2, a2: &RealMat2) -> Self {
        Self::from_parts(AlgebraKind::Dual, a1, a2)
    }

    /// `A₊P₊ + A₋P₋`.
    pub fn from_double_components(plus: &RealMat2, minus: &RealMat2) -> Self {
        let h = Hypercomplex::recompose;
        Self::from_entries_unchecked(
            h(plus.a, minus.a),
            h(plus.b, minus.b),
            h(plus.c, minus.c),
            h(plus.d, minus.d),
        )
    }

    /// The real component matrices `(A₊, A₋)` of a double matrix.
    pub fn double_components(&self) -> Result<(RealMat2, RealMat2)> {
        self.a.expect_kind(AlgebraKind::Double)?;
        Ok(self.components_unchecked())
    }

    pub(crate) fn components_unchecked(&self) -> (RealMat2, RealMat2) {
        let (a, b, c, d) = (
            self.a.components(),
            self.b.components(),
            self.c.components(),
            self.d.components(),
        );
        (RealMat2::new(a.0, b.0, c.0, d.0), RealMat2::new(a.1, b.1, c.1, d.1))
    }

    /// The real and ε parts of a dual matrix.
    pub fn dual_parts(&self) -> Result<(RealMat2, RealMat2)> {
        self.a.expect_kind(AlgebraKind::Dual)?;
        Ok(self.parts())
    }

    pub fn entries(&self) -> [Hypercomplex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Hypercomplex {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Hypercomplex {
        self.a + self.d
    }

    /// Adjugate `[[d, −b], [−c, a]]`; `X·hat(X) = det(X)·I`.
    pub fn hat(&self) -> Self {
        Self::from_entries_unchecked(self.d, -self.b, -self.c, self.a)
    }

    pub fn scale(&self, u: Hypercomplex) -> Self {
        Self::from_entries_unchecked(self.a * u, self.b * u, self.c * u, self.d * u)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self::from_entries_unchecked(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        Ok(*self * *other)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        Ok(*self + *other)
    }

    fn same_kind(&self, other: &Self) -> Result<()> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                left: self.kind(),
                right: other.kind(),
            })
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let inv = det.invert().map_err(|_| Error::Singular { class: det.classify() })?;
        Ok(self.hat().scale(inv))
    }

    pub fn membership(&self) -> GroupMembership {
        self.membership_with(Tolerances::default())
    }

    pub fn membership_with(&self, tol: Tolerances) -> GroupMembership {
        let det = self.det();
        let in_gl = det.is_unit_with(tol.zero);
        let in_sl = in_gl && (det.re - 1.0).abs() < tol.alg && det.im.abs() < tol.alg;
        GroupMembership { in_gl, in_sl, det }
    }

    /// Rescales by an invertible square root `u` of the determinant so the
    /// result has determinant 1. Roots with positive leading component win.
    pub fn normalize_to_sl(&self) -> Result<Self> {
        let root = preferred_unit_root(&self.det()).ok_or(Error::NotNormalizable)?;
        Ok(self.scale(root.invert()?))
    }

    /// Largest entry magnitude, each entry measured by `|re| + |im|`.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, e| m.max(e.magnitude()))
    }

    /// Largest difference over all real coordinates.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .fold(0.0, |m, (x, y)| m.max((x.re - y.re).abs()).max((x.im - y.im).abs()))
    }

    pub fn exp(&self, t: f64) -> Self {
        scaled_taylor_exp(self, t)
    }

    /// Parses `[[a,b],[c,d]]` with entries in the algebra number grammar.
    pub fn parse(kind: AlgebraKind, input: &str) -> Result<Self> {
        let err = |reason: &str| Error::parse("matrix", input, reason);
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(|| err("expected [[a,b],[c,d]]"))?;
        let (row1, row2) = inner.split_once("],[").ok_or_else(|| err("expected two rows"))?;
        let mut cells = Vec::with_capacity(4);
        for row in [row1, row2] {
            let (x, y) = row.split_once(',').ok_or_else(|| err("expected two entries per row"))?;
            if y.contains(',') {
                return Err(err("expected two entries per row"));
            }
            cells.push(Hypercomplex::parse(kind, x)?);
            cells.push(Hypercomplex::parse(kind, y)?);
        }
        Ok(Self::from_entries_unchecked(cells[0], cells[1], cells[2], cells[3]))
    }
}

/// The invertible square root of `det` that normalisation uses, if any.
pub fn preferred_unit_root(det: &Hypercomplex) -> Option<Hypercomplex> {
    let key = |r: &Hypercomplex| match r.kind {
        AlgebraKind::Double => {
            let (p, m) = r.components();
            (p > 0.0, m > 0.0)
        }
        AlgebraKind::Dual => (r.re > 0.0, r.im >= 0.0),
        AlgebraKind::Complex => (r.re > 0.0 || (r.re == 0.0 && r.im > 0.0), true),
    };
    det.sqrt_all()
        .into_iter()
        .filter(Hypercomplex::is_unit)
        .max_by_key(key)
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, r: Self) -> Self {
        Mat2::from_entries_unchecked(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, r: Self) -> Self {
        Mat2::from_entries_unchecked(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, r: Self) -> Self {
        Mat2::from_entries_unchecked(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[[{:.p$},{:.p$}],[{:.p$},{:.p$}]]", self.a, self.b, self.c, self.d),
            None => write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d),
        }
    }
}

/// Determinant of `A₊P₊ + A₋P₋` assembled from the component determinants.
pub fn det_split_double(plus: &RealMat2, minus: &RealMat2) -> Hypercomplex {
    Hypercomplex::recompose(plus.det(), minus.det())
}

/// Determinant of `A₁ + εA₂` as `det(A₁) + ε·tr(A₁·Â₂)`.
pub fn det_dual_formula(a1: &RealMat2, a2: &RealMat2) -> Hypercomplex {
    Hypercomplex::new(AlgebraKind::Dual, a1.det(), (*a1 * a2.hat()).trace())
}

/// SL₂(𝔻) membership from the real parts: `det(A₁) = 1` and `tr(A₁·Â₂) = 0`.
pub fn dual_parts_in_sl(a1: &RealMat2, a2: &RealMat2, tol: f64) -> bool {
    let det = det_dual_formula(a1, a2);
    (det.re - 1.0).abs() < tol && det.im.abs() < tol
}

/// Operations the scaled Taylor exponential needs.
pub trait MatrixAlgebra: Copy + Add<Output = Self> + Mul<Output = Self> {
    fn identity_like(&self) -> Self;
    fn scaled(&self, k: f64) -> Self;
    fn max_entry(&self) -> f64;
}

impl MatrixAlgebra for RealMat2 {
    fn identity_like(&self) -> Self {
        RealMat2::IDENTITY
    }

    fn scaled(&self, k: f64) -> Self {
        self.scale(k)
    }

    fn max_entry(&self) -> f64 {
        self.max_abs()
    }
}

impl MatrixAlgebra for Mat2 {
    fn identity_like(&self) -> Self {
        Mat2::identity(self.kind())
    }

    fn scaled(&self, k: f64) -> Self {
        self.scale_real(k)
    }

    fn max_entry(&self) -> f64 {
        self.max_abs()
    }
}

const EXP_TAYLOR_TERMS: usize = 20;
const EXP_SCALED_BOUND: f64 = 0.5;

/// `exp(B·t)`: halve until the largest entry is below 0.5, sum 20 Taylor
/// terms, then square back.
pub fn scaled_taylor_exp<M: MatrixAlgebra>(generator: &M, t: f64) -> M {
    let x = generator.scaled(t);
    let norm = x.max_entry();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) >= EXP_SCALED_BOUND {
        squarings += 1;
    }
    let x = x.scaled(1.0 / 2f64.powi(squarings as i32));
    let identity = x.identity_like();
    let mut term = identity;
    let mut sum = identity;
    for k in 1..=EXP_TAYLOR_TERMS {
        term = (term * x).scaled(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// A group element that is either a real matrix or a matrix over an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ring", content = "matrix", rename_all = "lowercase")]
pub enum Element {
    Real(RealMat2),
    Ring(Mat2),
}

impl Element {
    pub fn identity_like(&self) -> Self {
        match self {
            Element::Real(_) => Element::Real(RealMat2::IDENTITY),
            Element::Ring(m) => Element::Ring(Mat2::identity(m.kind())),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Element::Real(x), Element::Real(y)) => Ok(Element::Real(*x * *y)),
            (Element::Ring(x), Element::Ring(y)) => Ok(Element::Ring(x.checked_mul(y)?)),
            _ => Err(Error::Unsupported("cannot multiply a real matrix with a ring matrix".into())),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match self {
            Element::Real(m) => Ok(Element::Real(m.inverse()?)),
            Element::Ring(m) => Ok(Element::Ring(m.inverse()?)),
        }
    }

    /// Difference over all real coordinates; infinite for incompatible elements.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match (self, other) {
            (Element::Real(x), Element::Real(y)) => x.max_abs_diff(y),
            (Element::Ring(x), Element::Ring(y)) if x.kind() == y.kind() => x.max_abs_diff(y),
            _ => f64::INFINITY,
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Element::Real(m) => m.max_abs(),
            Element::Ring(m) => m.max_abs(),
        }
    }

    /// `(self − other)/scale`, used for finite differences.
    pub fn difference_quotient(&self, other: &Self, scale: f64) -> Result<Self> {
        match (self, other) {
            (Element::Real(x), Element::Real(y)) => Ok(Element::Real((*x - *y).scale(1.0 / scale))),
            (Element::Ring(x), Element::Ring(y)) if x.kind() == y.kind() => {
                Ok(Element::Ring((*x - *y).scale_real(1.0 / scale)))
            }
            _ => Err(Error::Unsupported("incompatible elements".into())),
        }
    }

    pub fn exp(&self, t: f64) -> Self {
        match self {
            Element::Real(m) => Element::Real(m.exp(t)),
            Element::Ring(m) => Element::Ring(m.exp(t)),
        }
    }

    pub fn as_ring(&self) -> Option<&Mat2> {
        match self {
            Element::Ring(m) => Some(m),
            Element::Real(_) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, f.precision()) {
            (Element::Real(m), Some(p)) => write!(f, "{m:.p$}"),
            (Element::Real(m), None) => write!(f, "{m}"),
            (Element::Ring(m), Some(p)) => write!(f, "{m:.p$}"),
            (Element::Ring(m), None) => write!(f, "{m}"),
        }
    }
}

/// Default tolerance for matrix identities.
pub const TAU_MATRIX: f64 = TAU_ALG;
