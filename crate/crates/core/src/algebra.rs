//! The three two-dimensional commutative real algebras, `a1 + u·a2` with
//! `u² = σ`: complex numbers (σ = −1), dual numbers (σ = 0, `u = ε`) and
//! double (split-complex) numbers (σ = +1, `u = j`).
//!
//! Double numbers are also handled through the idempotent basis
//! `P± = ½(1 ± j)`: `a = a₊P₊ + a₋P₋` with `a± = a1 ± a2`, under which
//! multiplication is componentwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute threshold below which a scalar component counts as a structural zero.
pub const TAU_ZERO: f64 = 1e-12;
/// Tolerance for numerical identities (products, inverses, roots).
pub const TAU_ALG: f64 = 1e-9;

/// Tolerance pair threaded through classification and comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero: f64,
    pub alg: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: TAU_ZERO,
            alg: TAU_ALG,
        }
    }
}

/// Sign of the generator square, also used to select the circular,
/// parabolic or hyperbolic trigonometric regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sigma {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Sigma {
    pub const ALL: [Sigma; 3] = [Sigma::Elliptic, Sigma::Parabolic, Sigma::Hyperbolic];

    pub fn value(self) -> f64 {
        match self {
            Sigma::Elliptic => -1.0,
            Sigma::Parabolic => 0.0,
            Sigma::Hyperbolic => 1.0,
        }
    }

    pub fn from_i8(sigma: i8) -> Option<Sigma> {
        match sigma {
            -1 => Some(Sigma::Elliptic),
            0 => Some(Sigma::Parabolic),
            1 => Some(Sigma::Hyperbolic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Complex,
    Dual,
    Double,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 3] = [AlgebraKind::Complex, AlgebraKind::Dual, AlgebraKind::Double];

    pub fn sigma(self) -> Sigma {
        match self {
            AlgebraKind::Complex => Sigma::Elliptic,
            AlgebraKind::Dual => Sigma::Parabolic,
            AlgebraKind::Double => Sigma::Hyperbolic,
        }
    }

    pub fn from_sigma(sigma: Sigma) -> AlgebraKind {
        match sigma {
            Sigma::Elliptic => AlgebraKind::Complex,
            Sigma::Parabolic => AlgebraKind::Dual,
            Sigma::Hyperbolic => AlgebraKind::Double,
        }
    }

    /// Symbol used for the generator in text form.
    pub fn generator_symbol(self) -> char {
        match self {
            AlgebraKind::Complex => 'i',
            AlgebraKind::Dual => 'e',
            AlgebraKind::Double => 'j',
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Complex => "complex",
            AlgebraKind::Dual => "dual",
            AlgebraKind::Double => "double",
        })
    }
}

impl std::str::FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complex" | "c" => Ok(AlgebraKind::Complex),
            "dual" | "d" => Ok(AlgebraKind::Dual),
            "double" | "split" | "split-complex" | "o" => Ok(AlgebraKind::Double),
            other => Err(Error::parse("algebra kind", other, "expected complex, dual or double")),
        }
    }
}

/// Classification of an element by its multiplicative behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElementClass {
    Unit,
    Zero,
    /// Double number of the form `a₊P₊`, `a₊ ≠ 0`.
    ZeroDivisorPlus,
    /// Double number of the form `a₋P₋`, `a₋ ≠ 0`.
    ZeroDivisorMinus,
    /// Dual number of the form `εb`, `b ≠ 0`.
    NilpotentNonzero,
}

/// A number `re + u·im` in one of the three algebras.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hypercomplex {
    pub kind: AlgebraKind,
    /// Coefficient of 1.
    pub re: f64,
    /// Coefficient of the generator (`i`, `ε` or `j`).
    pub im: f64,
}

impl Hypercomplex {
    pub const fn new(kind: AlgebraKind, re: f64, im: f64) -> Self {
        Hypercomplex { kind, re, im }
    }

    pub const fn real(kind: AlgebraKind, re: f64) -> Self {
        Hypercomplex { kind, re, im: 0.0 }
    }

    pub const fn zero(kind: AlgebraKind) -> Self {
        Self::real(kind, 0.0)
    }

    pub const fn one(kind: AlgebraKind) -> Self {
        Self::real(kind, 1.0)
    }

    /// The generator `i`, `ε` or `j`.
    pub const fn generator(kind: AlgebraKind) -> Self {
        Hypercomplex { kind, re: 0.0, im: 1.0 }
    }

    /// `P₊ = ½(1 + j)`.
    pub const fn p_plus() -> Self {
        Hypercomplex::new(AlgebraKind::Double, 0.5, 0.5)
    }

    /// `P₋ = ½(1 − j)`.
    pub const fn p_minus() -> Self {
        Hypercomplex::new(AlgebraKind::Double, 0.5, -0.5)
    }

    /// Double number `plus·P₊ + minus·P₋`.
    pub fn recompose(plus: f64, minus: f64) -> Self {
        Hypercomplex::new(AlgebraKind::Double, 0.5 * (plus + minus), 0.5 * (plus - minus))
    }

    /// Idempotent components `(a₊, a₋) = (a1 + a2, a1 − a2)` of a double number.
    pub fn decompose(&self) -> Result<(f64, f64)> {
        self.expect_kind(AlgebraKind::Double)?;
        Ok(self.components())
    }

    /// `(re + im, re − im)` regardless of kind; only meaningful for double numbers.
    pub(crate) fn components(&self) -> (f64, f64) {
        (self.re + self.im, self.re - self.im)
    }

    pub fn sigma(&self) -> Sigma {
        self.kind.sigma()
    }

    pub(crate) fn expect_kind(&self, kind: AlgebraKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongKind {
                expected: kind,
                found: self.kind,
            })
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                left: self.kind,
                right: other.kind,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(*self + *other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(*self - *other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(*self * *other)
    }

    pub fn scale(&self, k: f64) -> Self {
        Hypercomplex::new(self.kind, self.re * k, self.im * k)
    }

    /// `re − u·im`.
    pub fn conj(&self) -> Self {
        Hypercomplex::new(self.kind, self.re, -self.im)
    }

    /// `x·conj(x) = re² − σ·im²`.
    pub fn norm_sq(&self) -> f64 {
        match self.kind {
            AlgebraKind::Complex => self.re * self.re + self.im * self.im,
            AlgebraKind::Dual => self.re * self.re,
            AlgebraKind::Double => self.re * self.re - self.im * self.im,
        }
    }

    /// `|re| + |im|`; bounds the size of every representation of the number.
    pub fn magnitude(&self) -> f64 {
        self.re.abs() + self.im.abs()
    }

    /// Componentwise comparison with a tolerance that is absolute near zero
    /// and relative for large values.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.kind != other.kind {
            return false;
        }
        let scale = 1.0f64.max(self.magnitude()).max(other.magnitude());
        (self.re - other.re).abs() <= tol * scale && (self.im - other.im).abs() <= tol * scale
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.re.abs() < tol && self.im.abs() < tol
    }

    pub fn classify(&self) -> ElementClass {
        self.classify_with(TAU_ZERO)
    }

    pub fn classify_with(&self, zero_tol: f64) -> ElementClass {
        let z = |v: f64| v.abs() < zero_tol;
        match self.kind {
            AlgebraKind::Complex => {
                if z(self.re) && z(self.im) {
                    ElementClass::Zero
                } else {
                    ElementClass::Unit
                }
            }
            AlgebraKind::Dual => match (z(self.re), z(self.im)) {
                (true, true) => ElementClass::Zero,
                (true, false) => ElementClass::NilpotentNonzero,
                _ => ElementClass::Unit,
            },
            AlgebraKind::Double => {
                let (plus, minus) = self.components();
                match (z(plus), z(minus)) {
                    (true, true) => ElementClass::Zero,
                    (false, true) => ElementClass::ZeroDivisorPlus,
                    (true, false) => ElementClass::ZeroDivisorMinus,
                    (false, false) => ElementClass::Unit,
                }
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.classify() == ElementClass::Unit
    }

    pub fn is_unit_with(&self, zero_tol: f64) -> bool {
        self.classify_with(zero_tol) == ElementClass::Unit
    }

    pub fn invert(&self) -> Result<Self> {
        self.invert_with(TAU_ZERO)
    }

    pub fn invert_with(&self, zero_tol: f64) -> Result<Self> {
        let class = self.classify_with(zero_tol);
        if class != ElementClass::Unit {
            return Err(Error::NotInvertible { class });
        }
        Ok(match self.kind {
            AlgebraKind::Complex => self.conj().scale(1.0 / self.norm_sq()),
            AlgebraKind::Dual => {
                let inv = 1.0 / self.re;
                Hypercomplex::new(AlgebraKind::Dual, inv, -inv * inv * self.im)
            }
            AlgebraKind::Double => {
                let (plus, minus) = self.components();
                Hypercomplex::recompose(1.0 / plus, 1.0 / minus)
            }
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(*self * other.invert()?)
    }

    /// Every solution of `s² = self`, deduplicated. An empty list means the
    /// square root is undefined.
    pub fn sqrt_all(&self) -> Vec<Self> {
        self.sqrt_all_with(Tolerances::default())
    }

    pub fn sqrt_all_with(&self, tol: Tolerances) -> Vec<Self> {
        let snap = |v: f64| if v.abs() < tol.zero { 0.0 } else { v };
        let roots = match self.kind {
            AlgebraKind::Double => {
                let (plus, minus) = self.components();
                let (plus, minus) = (snap(plus), snap(minus));
                if plus < 0.0 || minus < 0.0 {
                    return Vec::new();
                }
                let (sp, sm) = (plus.sqrt(), minus.sqrt());
                vec![
                    Hypercomplex::recompose(sp, sm),
                    Hypercomplex::recompose(-sp, -sm),
                    Hypercomplex::recompose(sp, -sm),
                    Hypercomplex::recompose(-sp, sm),
                ]
            }
            AlgebraKind::Dual => {
                let (a1, a2) = (snap(self.re), snap(self.im));
                if a1 > 0.0 {
                    let r = a1.sqrt();
                    let root = Hypercomplex::new(AlgebraKind::Dual, r, a2 / (2.0 * r));
                    vec![root, -root]
                } else if a1 == 0.0 && a2 == 0.0 {
                    vec![Hypercomplex::zero(AlgebraKind::Dual)]
                } else {
                    Vec::new()
                }
            }
            AlgebraKind::Complex => {
                let r = self.re.hypot(self.im);
                let re = (0.5 * (r + self.re)).max(0.0).sqrt();
                let im = (0.5 * (r - self.re)).max(0.0).sqrt().copysign(self.im);
                let root = Hypercomplex::new(AlgebraKind::Complex, re, im);
                vec![root, -root]
            }
        };
        let mut unique: Vec<Hypercomplex> = Vec::with_capacity(roots.len());
        for root in roots {
            // normalise -0.0 so the text form is stable
            let root = Hypercomplex::new(root.kind, root.re + 0.0, root.im + 0.0);
            if !unique.iter().any(|u| {
                (u.re - root.re).abs() <= tol.alg && (u.im - root.im).abs() <= tol.alg
            }) {
                unique.push(root);
            }
        }
        unique
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        let sq = *self * *self;
        (sq.re - self.re).abs() < tol && (sq.im - self.im).abs() < tol
    }

    /// Parses `a1`, `a1+a2j`, `a1-a2e`, `2P+`, `1+3P-`, or the component
    /// form `(a₊|a₋)` for double numbers.
    pub fn parse(kind: AlgebraKind, input: &str) -> Result<Self> {
        parse_number(kind, input)
    }

    /// Component form `(a₊|a₋)`; only meaningful for double numbers.
    pub fn component_string(&self) -> String {
        let (plus, minus) = self.components();
        format!("({}|{})", fmt_num(plus, None), fmt_num(minus, None))
    }
}

impl Add for Hypercomplex {
    type Output = Hypercomplex;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "adding numbers from different algebras");
        Hypercomplex::new(self.kind, self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Hypercomplex {
    type Output = Hypercomplex;

    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "subtracting numbers from different algebras");
        Hypercomplex::new(self.kind, self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Hypercomplex {
    type Output = Hypercomplex;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "multiplying numbers from different algebras");
        let cross = self.re * rhs.im + self.im * rhs.re;
        let re = match self.kind {
            AlgebraKind::Complex => self.re * rhs.re - self.im * rhs.im,
            AlgebraKind::Dual => self.re * rhs.re,
            AlgebraKind::Double => self.re * rhs.re + self.im * rhs.im,
        };
        Hypercomplex::new(self.kind, re, cross)
    }
}

impl Mul<f64> for Hypercomplex {
    type Output = Hypercomplex;

    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Neg for Hypercomplex {
    type Output = Hypercomplex;

    fn neg(self) -> Self {
        Hypercomplex::new(self.kind, -self.re, -self.im)
    }
}

pub(crate) fn fmt_num(x: f64, precision: Option<usize>) -> String {
    let x = x + 0.0;
    match precision {
        Some(p) => {
            let s = format!("{x:.p$}");
            // "-0.0000" reads badly
            if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
                s[1..].to_string()
            } else {
                s
            }
        }
        None => format!("{x}"),
    }
}

impl fmt::Display for Hypercomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = fmt_num(self.re, f.precision());
        let im = fmt_num(self.im.abs(), f.precision());
        let sign = if self.im < 0.0 && im.chars().any(|c| c.is_ascii_digit() && c != '0') {
            '-'
        } else {
            '+'
        };
        write!(f, "{re}{sign}{im}{}", self.kind.generator_symbol())
    }
}

fn parse_number(kind: AlgebraKind, input: &str) -> Result<Hypercomplex> {
    let cleaned: String = input
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    let err = |reason: &str| Error::parse("number", input, reason);
    if cleaned.is_empty() {
        return Err(err("empty input"));
    }

    if let Some(inner) = cleaned.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        if kind != AlgebraKind::Double {
            return Err(err("component form (a+|a-) is only defined for double numbers"));
        }
        let (plus, minus) = inner.split_once('|').ok_or_else(|| err("expected (a+|a-)"))?;
        let plus = parse_decimal(plus).ok_or_else(|| err("bad plus component"))?;
        let minus = parse_decimal(minus).ok_or_else(|| err("bad minus component"))?;
        return Ok(Hypercomplex::recompose(plus, minus));
    }

    let chars: Vec<char> = cleaned.chars().collect();
    let mut pos = 0;
    let mut total = Hypercomplex::zero(kind);
    let mut first = true;
    while pos < chars.len() {
        let mut sign = 1.0;
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -1.0;
                pos += 1
            }
            _ if !first => return Err(err("expected '+' or '-' between terms")),
            _ => {}
        }
        first = false;
        let start = pos;
        while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
            pos += 1;
        }
        let digits: String = chars[start..pos].iter().collect();
        let coefficient = if digits.is_empty() {
            None
        } else {
            Some(parse_decimal(&digits).ok_or_else(|| err("bad decimal literal"))?)
        };
        let unit = match chars.get(pos) {
            Some('j') | Some('e') | Some('ε') | Some('i') => {
                let c = chars[pos];
                pos += 1;
                let expected = match c {
                    'j' => AlgebraKind::Double,
                    'i' => AlgebraKind::Complex,
                    _ => AlgebraKind::Dual,
                };
                if expected != kind {
                    return Err(err(&format!("generator '{c}' does not belong to {kind} numbers")));
                }
                Hypercomplex::generator(kind)
            }
            Some('P') => {
                if kind != AlgebraKind::Double {
                    return Err(err("P+ and P- are double numbers"));
                }
                let unit = match chars.get(pos + 1) {
                    Some('+') | Some('₊') => Hypercomplex::p_plus(),
                    Some('-') | Some('₋') => Hypercomplex::p_minus(),
                    _ => return Err(err("expected P+ or P-")),
                };
                pos += 2;
                unit
            }
            _ => {
                if coefficient.is_none() {
                    return Err(err("expected a number"));
                }
                Hypercomplex::one(kind)
            }
        };
        total = total + unit.scale(sign * coefficient.unwrap_or(1.0));
    }
    Ok(total)
}

fn parse_decimal(s: &str) -> Option<f64> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let valid = !body.is_empty()
        && body.chars().all(|c| c.is_ascii_digit() || c == '.')
        && body.chars().filter(|&c| c == '.').count() <= 1
        && body.chars().any(|c| c.is_ascii_digit());
    if valid {
        s.parse().ok()
    } else {
        None
    }
}

/// Values of the σ-trigonometric functions at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTrig {
    pub cos: f64,
    pub sin: f64,
    pub tan: f64,
}

/// `cos t`, `1` or `cosh t`.
pub fn cos_sigma(sigma: Sigma, t: f64) -> f64 {
    match sigma {
        Sigma::Elliptic => t.cos(),
        Sigma::Parabolic => 1.0,
        Sigma::Hyperbolic => t.cosh(),
    }
}

/// `sin t`, `t` or `sinh t`.
pub fn sin_sigma(sigma: Sigma, t: f64) -> f64 {
    match sigma {
        Sigma::Elliptic => t.sin(),
        Sigma::Parabolic => t,
        Sigma::Hyperbolic => t.sinh(),
    }
}

pub fn tan_sigma(sigma: Sigma, t: f64) -> Result<f64> {
    match sigma {
        Sigma::Elliptic => {
            if t.cos().abs() < TAU_ALG {
                return Err(Error::Domain {
                    regime: sigma,
                    function: "tan",
                    value: t,
                });
            }
            Ok(t.tan())
        }
        Sigma::Parabolic => Ok(t),
        Sigma::Hyperbolic => Ok(t.tanh()),
    }
}

pub fn sigma_trig(sigma: Sigma, t: f64) -> Result<SigmaTrig> {
    Ok(SigmaTrig {
        cos: cos_sigma(sigma, t),
        sin: sin_sigma(sigma, t),
        tan: tan_sigma(sigma, t)?,
    })
}

/// Principal inverse of [`tan_sigma`]: `atan`, identity, or `atanh` on `(−1, 1)`.
pub fn arctan_sigma(sigma: Sigma, x: f64) -> Result<f64> {
    match sigma {
        Sigma::Elliptic => Ok(x.atan()),
        Sigma::Parabolic => Ok(x),
        Sigma::Hyperbolic => {
            if x.abs() >= 1.0 || x.is_nan() {
                return Err(Error::Domain {
                    regime: sigma,
                    function: "arctan",
                    value: x,
                });
            }
            Ok(x.atanh())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const D: AlgebraKind = AlgebraKind::Double;
    const E: AlgebraKind = AlgebraKind::Dual;

    fn h(kind: AlgebraKind, re: f64, im: f64) -> Hypercomplex {
        Hypercomplex::new(kind, re, im)
    }

    #[test]
    fn products() {
        assert_eq!(h(D, 1.0, 1.0) * h(D, 1.0, -1.0), h(D, 0.0, 0.0));
        assert_eq!(h(E, 2.0, 3.0) * h(E, 4.0, 5.0), h(E, 8.0, 22.0));
        for kind in AlgebraKind::ALL {
            let a = h(kind, 2.5, -1.25);
            assert_eq!(a * Hypercomplex::one(kind), a);
        }
    }

    #[test]
    fn generator_squares() {
        let sq = |k| Hypercomplex::generator(k) * Hypercomplex::generator(k);
        assert_eq!(sq(AlgebraKind::Double), h(D, 1.0, 0.0));
        assert_eq!(sq(AlgebraKind::Dual), h(E, 0.0, 0.0));
        assert_eq!(sq(AlgebraKind::Complex), h(AlgebraKind::Complex, -1.0, 0.0));
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let err = h(D, 1.0, 0.0).checked_mul(&h(E, 1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::KindMismatch { .. }));
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(h(D, 5.0, 3.0).decompose().unwrap(), (8.0, 2.0));
        assert_eq!(Hypercomplex::one(D).decompose().unwrap(), (1.0, 1.0));
        assert_eq!(Hypercomplex::p_plus().decompose().unwrap(), (1.0, 0.0));
        assert_eq!(Hypercomplex::recompose(8.0, 2.0), h(D, 5.0, 3.0));
        assert!(h(E, 1.0, 0.0).decompose().is_err());
    }

    #[test]
    fn inverse_examples() {
        let inv = h(D, 3.0, 1.0).invert().unwrap();
        assert_abs_diff_eq!(inv.re, 3.0 / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inv.im, -1.0 / 8.0, epsilon = 1e-15);
        assert_eq!(h(E, 2.0, 3.0).invert().unwrap(), h(E, 0.5, -0.75));
        assert_eq!(
            Hypercomplex::p_plus().invert().unwrap_err(),
            Error::NotInvertible {
                class: ElementClass::ZeroDivisorPlus
            }
        );
        let c = h(AlgebraKind::Complex, 3.0, 4.0);
        let one = c * c.invert().unwrap();
        assert_abs_diff_eq!(one.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(one.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sqrt_double_four_roots() {
        let x = h(D, 5.0, 3.0);
        let roots = x.sqrt_all();
        assert_eq!(roots.len(), 4);
        let s2 = 2f64.sqrt();
        let expected = [
            (1.5 * s2, 0.5 * s2),
            (-1.5 * s2, -0.5 * s2),
            (0.5 * s2, 1.5 * s2),
            (-0.5 * s2, -1.5 * s2),
        ];
        for (re, im) in expected {
            assert!(roots.iter().any(|r| (r.re - re).abs() < 1e-12 && (r.im - im).abs() < 1e-12));
        }
        for r in &roots {
            let sq = *r * *r;
            assert!((sq.re - 5.0).abs() < 1e-12 && (sq.im - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sqrt_case_table() {
        assert_eq!(Hypercomplex::p_plus().sqrt_all().len(), 2);
        assert_eq!(Hypercomplex::zero(D).sqrt_all(), vec![Hypercomplex::zero(D)]);
        assert!(h(D, -1.0, 0.0).sqrt_all().is_empty());
        assert_eq!(h(E, 4.0, 4.0).sqrt_all(), vec![h(E, 2.0, 1.0), h(E, -2.0, -1.0)]);
        assert_eq!(Hypercomplex::zero(E).sqrt_all(), vec![Hypercomplex::zero(E)]);
        assert!(h(E, 0.0, 1.0).sqrt_all().is_empty());
        assert!(h(E, -4.0, 1.0).sqrt_all().is_empty());
    }

    #[test]
    fn element_classes() {
        assert_eq!(Hypercomplex::p_plus().scale(2.0).classify(), ElementClass::ZeroDivisorPlus);
        assert_eq!(Hypercomplex::p_minus().classify(), ElementClass::ZeroDivisorMinus);
        assert_eq!(h(E, 0.0, 5.0).classify(), ElementClass::NilpotentNonzero);
        for kind in AlgebraKind::ALL {
            assert_eq!(Hypercomplex::one(kind).classify(), ElementClass::Unit);
            assert_eq!(Hypercomplex::zero(kind).classify(), ElementClass::Zero);
        }
        // below the structural-zero threshold
        assert_eq!(h(D, 1.0, 1.0 - 1e-14).classify(), ElementClass::ZeroDivisorPlus);
    }

    #[test]
    fn idempotents_of_double_numbers() {
        let mut found = Vec::new();
        for i in -8..=8 {
            for k in -8..=8 {
                let x = h(D, i as f64 * 0.25, k as f64 * 0.25);
                if x.is_idempotent(TAU_ZERO) {
                    found.push((x.re, x.im));
                }
            }
        }
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(found, vec![(0.0, 0.0), (0.5, -0.5), (0.5, 0.5), (1.0, 0.0)]);
    }

    #[test]
    fn sigma_trig_table() {
        let p = sigma_trig(Sigma::Parabolic, 2.5).unwrap();
        assert_eq!((p.cos, p.sin, p.tan), (1.0, 2.5, 2.5));
        let hy = sigma_trig(Sigma::Hyperbolic, 0.0).unwrap();
        assert_eq!((hy.cos, hy.sin, hy.tan), (1.0, 0.0, 0.0));
        assert_abs_diff_eq!(arctan_sigma(Sigma::Elliptic, 1.0).unwrap(), std::f64::consts::FRAC_PI_4);
        assert!(matches!(
            arctan_sigma(Sigma::Hyperbolic, 1.0),
            Err(Error::Domain { regime: Sigma::Hyperbolic, .. })
        ));
        assert!(tan_sigma(Sigma::Elliptic, std::f64::consts::FRAC_PI_2).is_err());
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(h(D, 5.0, 3.0).to_string(), "5+3j");
        assert_eq!(h(E, 0.5, -0.75).to_string(), "0.5-0.75e");
        assert_eq!(h(D, 5.0, 3.0).component_string(), "(8|2)");
        assert_eq!(Hypercomplex::parse(D, "5+3j").unwrap(), h(D, 5.0, 3.0));
        assert_eq!(Hypercomplex::parse(D, "(8|2)").unwrap(), h(D, 5.0, 3.0));
        assert_eq!(Hypercomplex::parse(D, "2P+").unwrap(), h(D, 1.0, 1.0));
        assert_eq!(Hypercomplex::parse(D, "−1 − 2j").unwrap(), h(D, -1.0, -2.0));
        assert_eq!(Hypercomplex::parse(E, "0.5-0.75e").unwrap(), h(E, 0.5, -0.75));
        assert_eq!(Hypercomplex::parse(E, "3ε").unwrap(), h(E, 0.0, 3.0));
        assert!(Hypercomplex::parse(E, "1+2j").is_err());
        assert!(Hypercomplex::parse(D, "1+").is_err());
        assert!(Hypercomplex::parse(D, "").is_err());
    }
}
