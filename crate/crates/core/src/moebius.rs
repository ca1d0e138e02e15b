//! Möbius maps `[x : y] ↦ [ax + by : cx + dy]`: action, composition,
//! equality modulo units, kernel of the projection from SL₂, trace-squared
//! classification and fixed points.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, Hypercomplex, TAU_ALG, TAU_ZERO};
use crate::error::{Error, Result};
use crate::matrix2::{Element, Mat2, RealMat2};
use crate::projline::{CanonicalClass, PrFamily, ProjPoint, RealRatio};

/// Width of the band around `tr² = 4` reported as parabolic.
pub const TAU_CLASS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    rep: Mat2,
}

impl MoebiusMap {
    pub fn new(rep: Mat2) -> Result<Self> {
        let det = rep.det();
        if !det.is_unit() {
            return Err(Error::Singular { class: det.classify() });
        }
        Ok(MoebiusMap { rep })
    }

    pub fn rep(&self) -> &Mat2 {
        &self.rep
    }

    pub fn kind(&self) -> AlgebraKind {
        self.rep.kind()
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        p.apply(&self.rep)
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<CanonicalClass> {
        Ok(self.apply_point(p)?.canonicalize())
    }

    /// Image of a class, acting on its representative point.
    pub fn apply_class(&self, class: &CanonicalClass) -> Result<CanonicalClass> {
        self.apply(&class.representative(self.kind())?)
    }

    pub fn compose(&self, other: &MoebiusMap) -> Result<MoebiusMap> {
        MoebiusMap::new(self.rep.checked_mul(&other.rep)?)
    }

    /// True if `self.rep = u·other.rep` for some unit `u`.
    pub fn mob_equal(&self, other: &MoebiusMap) -> Result<bool> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch {
                left: self.kind(),
                right: other.kind(),
            });
        }
        let Some(u) = unit_ratio(&self.rep, &other.rep) else {
            return Ok(false);
        };
        Ok(u.is_unit() && self.rep.max_abs_diff(&other.rep.scale(u)) <= TAU_ALG * self.rep.max_abs().max(1.0))
    }

    /// True if the map is the identity, i.e. the representative is a unit multiple of I.
    pub fn is_identity(&self) -> bool {
        self.mob_equal(&MoebiusMap {
            rep: Mat2::identity(self.kind()),
        })
        .unwrap_or(false)
    }

    /// `tr²` of the representative normalised to SL₂.
    pub fn tr_squared(&self) -> Result<Hypercomplex> {
        let g = self.rep.normalize_to_sl()?;
        let tr = g.trace();
        Ok(tr * tr)
    }

    pub fn classify(&self) -> Result<MapClass> {
        if self.is_identity() {
            return Ok(MapClass::Identity);
        }
        let g = self.rep.normalize_to_sl()?;
        Ok(match self.kind() {
            AlgebraKind::Complex => MapClass::Field(complex_map_type(&g)),
            AlgebraKind::Double => {
                let (plus, minus) = g.components_unchecked();
                MapClass::Double {
                    plus: classify_sl_real(&plus),
                    minus: classify_sl_real(&minus),
                }
            }
            AlgebraKind::Dual => MapClass::Dual {
                projected: classify_sl_real(&g.parts().0),
            },
        })
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        if self.is_identity() {
            return Err(Error::FixesEverything);
        }
        match self.kind() {
            AlgebraKind::Complex => Ok(FixedPoints {
                points: complex_fixed_points(&self.rep),
                families: Vec::new(),
            }),
            AlgebraKind::Double => double_fixed_points(&self.rep),
            AlgebraKind::Dual => dual_fixed_points(&self.rep),
        }
    }

    pub fn report(&self) -> Result<MapReport> {
        let fixed = match self.fixed_points() {
            Ok(f) => Some(f),
            Err(Error::FixesEverything) => None,
            Err(e) => return Err(e),
        };
        let g = self.rep.normalize_to_sl()?;
        let tr_squared = match self.kind() {
            AlgebraKind::Double => {
                let (p, m) = g.components_unchecked();
                vec![p.trace().powi(2), m.trace().powi(2)]
            }
            AlgebraKind::Dual => vec![g.parts().0.trace().powi(2)],
            AlgebraKind::Complex => {
                let t = self.tr_squared()?;
                vec![t.re, t.im]
            }
        };
        Ok(MapReport {
            kind: self.kind().to_string(),
            tr_squared,
            class: self.classify()?,
            fixed_points: fixed,
        })
    }
}

/// Scalar `u` with `m1 ≈ u·m2`, solved from the largest entries of `m2`.
fn unit_ratio(m1: &Mat2, m2: &Mat2) -> Option<Hypercomplex> {
    let pairs: Vec<(Hypercomplex, Hypercomplex)> =
        m1.entries().into_iter().zip(m2.entries()).collect();
    match m2.kind() {
        AlgebraKind::Double => {
            let pick = |sel: fn(&Hypercomplex) -> f64| {
                let (x, y) = pairs
                    .iter()
                    .max_by(|a, b| sel(&a.1).abs().total_cmp(&sel(&b.1).abs()))
                    .copied()?;
                (sel(&y).abs() > TAU_ZERO).then(|| sel(&x) / sel(&y))
            };
            let plus = pick(|h| h.components().0)?;
            let minus = pick(|h| h.components().1)?;
            Some(Hypercomplex::recompose(plus, minus))
        }
        AlgebraKind::Dual => {
            let (x, y) = pairs.iter().max_by(|a, b| a.1.re.abs().total_cmp(&b.1.re.abs())).copied()?;
            (y.re.abs() > TAU_ZERO).then(|| x * y.invert().expect("unit"))
        }
        AlgebraKind::Complex => {
            let (x, y) = pairs.iter().max_by(|a, b| a.1.norm_sq().total_cmp(&b.1.norm_sq())).copied()?;
            y.invert().ok().map(|inv| x * inv)
        }
    }
}

/// Class of a Möbius map over ℝ or ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapType {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    StrictlyLoxodromic,
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Classification of a map. Double maps carry one real class per idempotent
/// component, dual maps the class of their real part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapClass {
    Identity,
    Field(MapType),
    Double { plus: MapType, minus: MapType },
    Dual { projected: MapType },
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapClass::Identity => f.write_str("Identity"),
            MapClass::Field(t) => write!(f, "{t}"),
            MapClass::Double { plus, minus } => write!(f, "({plus}, {minus}) by components"),
            MapClass::Dual { projected } => write!(f, "{projected} on the real part"),
        }
    }
}

fn type_from_tr_squared(tr2: f64) -> MapType {
    if (tr2 - 4.0).abs() < TAU_CLASS {
        MapType::Parabolic
    } else if tr2 < 4.0 {
        MapType::Elliptic
    } else {
        MapType::Hyperbolic
    }
}

fn classify_sl_real(g: &RealMat2) -> MapType {
    if g.is_scalar(TAU_ALG) {
        MapType::Identity
    } else {
        type_from_tr_squared(g.trace().powi(2))
    }
}

fn complex_map_type(g: &Mat2) -> MapType {
    let tr = g.trace();
    let tr2 = tr * tr;
    if tr2.im.abs() >= TAU_CLASS || tr2.re < -TAU_CLASS {
        MapType::StrictlyLoxodromic
    } else {
        type_from_tr_squared(tr2.re)
    }
}

/// Class of a real map; fails for negative determinant, which has no real
/// normalisation to SL₂.
pub fn classify_real(m: &RealMat2) -> Result<MapType> {
    let det = m.det();
    if det.abs() < TAU_ZERO {
        return Err(Error::Singular {
            class: crate::algebra::ElementClass::Zero,
        });
    }
    if det < 0.0 {
        return Err(Error::NotNormalizable);
    }
    Ok(classify_sl_real(&m.scale(1.0 / det.sqrt())))
}

/// `tr²` of a real map with positive determinant, normalised to SL₂.
pub fn tr_squared_real(m: &RealMat2) -> Result<f64> {
    let det = m.det();
    if det <= 0.0 {
        return Err(Error::NotNormalizable);
    }
    Ok(m.trace().powi(2) / det)
}

/// Fixed points of a real map on the real projective line.
pub fn fixed_points_real(m: &RealMat2) -> Result<Vec<RealRatio>> {
    if m.is_scalar(TAU_ALG) {
        return Err(Error::FixesEverything);
    }
    Ok(real_fixed_points(m))
}

fn real_fixed_points(m: &RealMat2) -> Vec<RealRatio> {
    let scale = m.max_abs().max(1.0);
    let mut out = Vec::new();
    if m.c.abs() <= TAU_ALG * scale {
        out.push(RealRatio::infinity());
        let slope = m.d - m.a;
        if slope.abs() > TAU_ALG * scale {
            out.push(RealRatio::affine(m.b / slope));
        }
        return out;
    }
    // c x² + (d − a) x − b = 0
    let (qa, qb, qc) = (m.c, m.d - m.a, -m.b);
    let disc = qb * qb - 4.0 * qa * qc;
    let band = TAU_ALG * scale * scale;
    if disc > band {
        let root = disc.sqrt();
        // stable pair of roots
        let q = -0.5 * (qb + root.copysign(qb));
        let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / qa, qc / q) };
        out.push(RealRatio::affine(r1));
        out.push(RealRatio::affine(r2));
    } else if disc >= -band {
        out.push(RealRatio::affine(-qb / (2.0 * qa)));
    }
    out
}

fn complex_fixed_points(m: &Mat2) -> Vec<CanonicalClass> {
    let kind = AlgebraKind::Complex;
    let scale = m.max_abs().max(1.0);
    let mut out = Vec::new();
    let slope = m.d - m.a;
    if m.c.norm_sq().sqrt() <= TAU_ALG * scale {
        out.push(CanonicalClass::Infinity);
        if let Ok(inv) = slope.invert() {
            if slope.norm_sq().sqrt() > TAU_ALG * scale {
                out.push(CanonicalClass::Affine(m.b * inv));
            }
        }
        return out;
    }
    let four = Hypercomplex::real(kind, 4.0);
    let disc = slope * slope + four * m.b * m.c;
    let root = disc.sqrt_all()[0];
    let inv_2c = (m.c * 2.0).invert().expect("nonzero c");
    let z1 = (-slope + root) * inv_2c;
    let z2 = (-slope - root) * inv_2c;
    out.push(CanonicalClass::Affine(z1));
    if !z1.approx_eq(&z2, TAU_ALG) {
        out.push(CanonicalClass::Affine(z2));
    }
    out
}

/// A one-parameter set of fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FixedFamily {
    /// Points whose plus component is arbitrary and whose minus component
    /// is the given ratio, or zero when absent (then the whole PR₊ family).
    PlusFree { minus: Option<RealRatio> },
    /// Mirror image of `PlusFree`.
    MinusFree { plus: Option<RealRatio> },
    /// `[base + εb : 1]` for every real `b`.
    DualFiber { base: f64 },
    /// Every `[1 : ελ]`.
    DualOmegaAll,
    /// Every `[εx : εy]`.
    PrAll,
}

impl FixedFamily {
    /// A member of the family picked by the real parameter `s`.
    pub fn member(&self, s: f64) -> ProjPoint {
        let free = RealRatio::new(s.cos(), s.sin()).expect("unit circle");
        let dual = |re, im| Hypercomplex::new(AlgebraKind::Dual, re, im);
        match *self {
            FixedFamily::PlusFree { minus } => component_point(Some(free), minus),
            FixedFamily::MinusFree { plus } => component_point(plus, Some(free)),
            FixedFamily::DualFiber { base } => ProjPoint::affine(dual(base, s)),
            FixedFamily::DualOmegaAll => ProjPoint {
                x: dual(1.0, 0.0),
                y: dual(0.0, if s == 0.0 { 1.0 } else { s }),
            },
            FixedFamily::PrAll => PrFamily::Dual.embed(&free),
        }
    }
}

impl fmt::Display for FixedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedFamily::PlusFree { minus: Some(r) } => write!(f, "any plus component, minus component {r}"),
            FixedFamily::PlusFree { minus: None } => f.write_str("all of PR+"),
            FixedFamily::MinusFree { plus: Some(r) } => write!(f, "any minus component, plus component {r}"),
            FixedFamily::MinusFree { plus: None } => f.write_str("all of PR-"),
            FixedFamily::DualFiber { base } => write!(f, "[{base}+be : 1] for every real b"),
            FixedFamily::DualOmegaAll => f.write_str("every (1/λ)ω"),
            FixedFamily::PrAll => f.write_str("all of PR"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FixedPoints {
    pub points: Vec<CanonicalClass>,
    pub families: Vec<FixedFamily>,
}

fn double_fixed_points(m: &Mat2) -> Result<FixedPoints> {
    let (plus, minus) = m.components_unchecked();
    let fixed = |g: &RealMat2| (!g.is_scalar(TAU_ALG)).then(|| real_fixed_points(g));
    let (fp, fm) = (fixed(&plus), fixed(&minus));
    let mut out = FixedPoints::default();
    let with_zero = |set: &Vec<RealRatio>| {
        set.iter().copied().map(Some).chain(std::iter::once(None)).collect::<Vec<_>>()
    };
    match (&fp, &fm) {
        (Some(fp), Some(fm)) => {
            for p in with_zero(fp) {
                for q in with_zero(fm) {
                    let point = match (p, q) {
                        (None, None) => continue,
                        (p, q) => component_point(p, q),
                    };
                    out.points.push(point.canonicalize());
                }
            }
        }
        (None, Some(fm)) => {
            for q in with_zero(fm) {
                out.families.push(FixedFamily::PlusFree { minus: q });
            }
            for q in fm {
                out.points.push(CanonicalClass::PrMinus(*q));
            }
        }
        (Some(fp), None) => {
            for p in with_zero(fp) {
                out.families.push(FixedFamily::MinusFree { plus: p });
            }
            for p in fp {
                out.points.push(CanonicalClass::PrPlus(*p));
            }
        }
        (None, None) => return Err(Error::FixesEverything),
    }
    Ok(out)
}

fn component_point(plus: Option<RealRatio>, minus: Option<RealRatio>) -> ProjPoint {
    let (px, py) = plus.map_or((0.0, 0.0), |r| (r.x, r.y));
    let (mx, my) = minus.map_or((0.0, 0.0), |r| (r.x, r.y));
    ProjPoint {
        x: Hypercomplex::recompose(px, mx),
        y: Hypercomplex::recompose(py, my),
    }
}

/// Real roots of `qa x² + qb x + qc`, or `None` when the polynomial vanishes.
fn real_roots(qa: f64, qb: f64, qc: f64, tol: f64) -> Option<Vec<f64>> {
    if qa.abs() <= tol {
        if qb.abs() <= tol {
            return if qc.abs() <= tol { None } else { Some(Vec::new()) };
        }
        return Some(vec![-qc / qb]);
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc > tol {
        let root = disc.sqrt();
        let q = -0.5 * (qb + root.copysign(qb));
        Some(if q == 0.0 { vec![0.0] } else { vec![q / qa, qc / q] })
    } else if disc >= -tol {
        Some(vec![-qb / (2.0 * qa)])
    } else {
        Some(Vec::new())
    }
}

fn dual_fixed_points(m: &Mat2) -> Result<FixedPoints> {
    let (a1, a2) = m.parts();
    let scale = m.max_abs().max(1.0);
    let tol = TAU_ALG * scale;
    let mut out = FixedPoints::default();

    // [x : 1] is fixed iff c x² + (d − a) x − b = 0 in the dual numbers:
    // real part q₁(x₁) = 0, ε part q₁'(x₁)·x₂ + q₂(x₁) = 0.
    let q1 = |x: f64| a1.c * x * x + (a1.d - a1.a) * x - a1.b;
    let dq1 = |x: f64| 2.0 * a1.c * x + (a1.d - a1.a);
    let q2 = |x: f64| a2.c * x * x + (a2.d - a2.a) * x - a2.b;
    match real_roots(a1.c, a1.d - a1.a, -a1.b, tol) {
        Some(roots) => {
            for x1 in roots {
                debug_assert!(q1(x1).abs() < 1e-6 * scale);
                let slope = dq1(x1);
                if slope.abs() > tol {
                    let x2 = -q2(x1) / slope;
                    out.points.push(CanonicalClass::Affine(Hypercomplex::new(AlgebraKind::Dual, x1, x2)));
                } else if q2(x1).abs() <= tol {
                    out.families.push(FixedFamily::DualFiber { base: x1 });
                }
            }
        }
        None => match real_roots(a2.c, a2.d - a2.a, -a2.b, tol) {
            Some(roots) => {
                for x1 in roots {
                    out.families.push(FixedFamily::DualFiber { base: x1 });
                }
            }
            None => return Err(Error::FixesEverything),
        },
    }

    if m.c.is_zero(tol) {
        out.points.push(CanonicalClass::Infinity);
    }

    // [1 : ελ] is fixed iff c₁ = 0 and c₂ = λ(a₁ − d₁).
    if a1.c.abs() <= tol {
        let gap = a1.a - a1.d;
        if gap.abs() > tol {
            let lambda = a2.c / gap;
            if lambda.abs() > TAU_ZERO {
                out.points.push(CanonicalClass::DualOmega(lambda));
            }
        } else if a2.c.abs() <= tol {
            out.families.push(FixedFamily::DualOmegaAll);
        }
    }

    // [εx : εy] moves by the real part alone.
    if a1.is_scalar(TAU_ALG) {
        out.families.push(FixedFamily::PrAll);
    } else {
        for r in real_fixed_points(&a1) {
            out.points.push(CanonicalClass::Pr(r));
        }
    }
    Ok(out)
}

/// Structured classification record for one map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapReport {
    pub kind: String,
    /// `tr²` per component for double maps; of the real part for dual maps;
    /// real and imaginary parts for complex maps.
    pub tr_squared: Vec<f64>,
    pub class: MapClass,
    /// Absent when the map fixes every point.
    pub fixed_points: Option<FixedPoints>,
}

/// Ring in which the kernel of the projection SL₂ → Möbius maps is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelRing {
    Real,
    Algebra(AlgebraKind),
}

impl std::str::FromStr for KernelRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("real") {
            Ok(KernelRing::Real)
        } else {
            Ok(KernelRing::Algebra(s.parse()?))
        }
    }
}

pub const KERNEL_PROBES: usize = 100;

/// Scalar matrices `u·I` of determinant 1 that act trivially on a set of
/// random probe points (admissible and not), `u` scanned over the grid
/// `{−2, −1.5, …, 2}²` of coordinates.
pub fn kernel_check(ring: KernelRing, seed: u64) -> Vec<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<f64> = (-4..=4).map(|i| i as f64 * 0.5).collect();
    let mut out = Vec::new();
    match ring {
        KernelRing::Real => {
            let probes: Vec<RealRatio> = (0..KERNEL_PROBES)
                .map(|_| RealRatio::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)).expect("nonzero"))
                .collect();
            for &u in &grid {
                let m = RealMat2::IDENTITY.scale(u);
                if (m.det() - 1.0).abs() >= TAU_ALG {
                    continue;
                }
                let trivial = probes
                    .iter()
                    .all(|p| p.apply(&m).map(|q| q.approx_eq(p, TAU_ALG)).unwrap_or(false));
                if trivial {
                    out.push(Element::Real(m));
                }
            }
        }
        KernelRing::Algebra(kind) => {
            let probes: Vec<ProjPoint> = (0..KERNEL_PROBES).map(|i| probe_point(kind, i, &mut rng)).collect();
            for &re in &grid {
                for &im in &grid {
                    let m = Mat2::scalar(Hypercomplex::new(kind, re, im));
                    let det = m.det();
                    if (det.re - 1.0).abs() >= TAU_ALG || det.im.abs() >= TAU_ALG {
                        continue;
                    }
                    let trivial = probes.iter().all(|p| {
                        p.apply(&m)
                            .map(|q| q.canonicalize().approx_eq(&p.canonicalize(), TAU_ALG))
                            .unwrap_or(false)
                    });
                    if trivial {
                        out.push(Element::Ring(m));
                    }
                }
            }
        }
    }
    out
}

/// Every fourth probe is non-admissible where the ring has such points.
fn probe_point(kind: AlgebraKind, i: usize, rng: &mut ChaCha8Rng) -> ProjPoint {
    let mut r = || rng.gen_range(-3.0..3.0);
    let (x, y) = (r(), r());
    let r = RealRatio::new(x, y).unwrap_or(RealRatio::infinity());
    match (kind, i % 4) {
        (AlgebraKind::Double, 1) => PrFamily::Plus.embed(&r),
        (AlgebraKind::Double, 3) => PrFamily::Minus.embed(&r),
        (AlgebraKind::Dual, 1) | (AlgebraKind::Dual, 3) => PrFamily::Dual.embed(&r),
        _ => {
            let mut r = || rng.gen_range(-3.0..3.0);
            ProjPoint::new(Hypercomplex::new(kind, r(), r()), Hypercomplex::new(kind, r(), r()))
                .unwrap_or(ProjPoint::infinity(kind))
        }
    }
}

/// Text such as `±I, ±jI` for a kernel listing.
pub fn kernel_label(elements: &[Element]) -> String {
    let mut scalars: Vec<(f64, f64, char)> = elements
        .iter()
        .map(|e| match e {
            Element::Real(m) => (m.a, 0.0, ' '),
            Element::Ring(m) => (m.a.re, m.a.im, m.kind().generator_symbol()),
        })
        .collect();
    scalars.sort_by(|a, b| (a.1.abs(), a.0.abs()).partial_cmp(&(b.1.abs(), b.0.abs())).unwrap());
    let mut parts: Vec<String> = Vec::new();
    let mut seen = Vec::new();
    for &(re, im, sym) in &scalars {
        let key = (re.abs(), im.abs());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let paired = scalars.iter().any(|&(r, i, _)| r == -re && i == -im);
        let base = match (re != 0.0, im != 0.0) {
            (true, false) => "I".to_string(),
            (false, true) => format!("{sym}I"),
            _ => format!("({re}+{im}{sym})I"),
        };
        let sign = if paired { "±" } else if re < 0.0 || im < 0.0 { "-" } else { "" };
        parts.push(format!("{sign}{base}"));
    }
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: AlgebraKind = AlgebraKind::Double;
    const E: AlgebraKind = AlgebraKind::Dual;

    fn h(kind: AlgebraKind, re: f64, im: f64) -> Hypercomplex {
        Hypercomplex::new(kind, re, im)
    }

    fn map(kind: AlgebraKind, entries: [(f64, f64); 4]) -> MoebiusMap {
        let e = entries.map(|(re, im)| h(kind, re, im));
        MoebiusMap::new(Mat2::new(e[0], e[1], e[2], e[3]).unwrap()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let p = ProjPoint::affine(h(D, 0.3, -1.2));
        let id = MoebiusMap::new(Mat2::identity(D)).unwrap();
        assert_eq!(id.apply(&p).unwrap(), p.canonicalize());
        let m = MoebiusMap::new(
            Mat2::new(Hypercomplex::one(D), Hypercomplex::p_plus() * 0.7, Hypercomplex::zero(D), Hypercomplex::one(D))
                .unwrap(),
        )
        .unwrap();
        assert_eq!(m.apply(&ProjPoint::infinity(D)).unwrap(), CanonicalClass::Infinity);
        let t = 0.4;
        let n = map(E, [(1.0, 0.0), (0.0, 0.0), (t, 0.0), (1.0, 0.0)]);
        let x = h(E, 1.5, 0.25);
        let expect = x * (x * t + Hypercomplex::one(E)).invert().unwrap();
        assert!(n.apply(&ProjPoint::affine(x)).unwrap().approx_eq(&CanonicalClass::Affine(expect), 1e-12));
    }

    #[test]
    fn equality_modulo_units() {
        let a = map(D, [(1.0, 0.5), (2.0, 0.0), (0.0, 1.0), (3.0, -1.0)]);
        let ja = MoebiusMap::new(a.rep().scale(Hypercomplex::generator(D))).unwrap();
        assert!(a.mob_equal(&ja).unwrap());
        let b = map(E, [(1.0, 0.5), (2.0, 0.0), (0.0, 1.0), (3.0, -1.0)]);
        let b2 = MoebiusMap::new(b.rep().scale_real(2.0)).unwrap();
        assert!(b.mob_equal(&b2).unwrap());
        let shear = map(D, [(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(!shear.mob_equal(&MoebiusMap::new(Mat2::identity(D)).unwrap()).unwrap());
        assert!(a.mob_equal(&b).is_err());
    }

    #[test]
    fn kernels() {
        let double = kernel_check(KernelRing::Algebra(D), 7);
        assert_eq!(double.len(), 4);
        assert_eq!(kernel_label(&double), "±I, ±jI");
        let dual = kernel_check(KernelRing::Algebra(E), 7);
        assert_eq!(kernel_label(&dual), "±I");
        let real = kernel_check(KernelRing::Real, 7);
        assert_eq!(real, vec![Element::Real(RealMat2::IDENTITY.scale(-1.0)), Element::Real(RealMat2::IDENTITY)]);
        assert_eq!(kernel_label(&kernel_check(KernelRing::Algebra(AlgebraKind::Complex), 7)), "±I");
    }

    #[test]
    fn real_classification() {
        let shear = RealMat2::new(1.0, 1.0, 0.0, 1.0);
        assert_eq!(classify_real(&shear).unwrap(), MapType::Parabolic);
        assert_eq!(tr_squared_real(&shear).unwrap(), 4.0);
        let diag = RealMat2::new(2.0, 0.0, 0.0, 0.5);
        assert_eq!(classify_real(&diag).unwrap(), MapType::Hyperbolic);
        assert_eq!(tr_squared_real(&diag).unwrap(), 6.25);
        let rot = RealMat2::new(0.0, -1.0, 1.0, 0.0);
        assert_eq!(classify_real(&rot).unwrap(), MapType::Elliptic);
        assert_eq!(classify_real(&RealMat2::IDENTITY).unwrap(), MapType::Identity);
    }

    #[test]
    fn componentwise_classification() {
        let k = RealMat2::new(1f64.cos(), -1f64.sin(), 1f64.sin(), 1f64.cos());
        let a = RealMat2::new(1f64.cosh(), 1f64.sinh(), 1f64.sinh(), 1f64.cosh());
        let m = MoebiusMap::new(Mat2::from_double_components(&k, &a)).unwrap();
        assert_eq!(
            m.classify().unwrap(),
            MapClass::Double {
                plus: MapType::Elliptic,
                minus: MapType::Hyperbolic
            }
        );
        let j = MoebiusMap::new(Mat2::scalar(Hypercomplex::generator(D))).unwrap();
        assert_eq!(j.classify().unwrap(), MapClass::Identity);
        let lox = map(AlgebraKind::Complex, [(2.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.4, -0.2)]);
        assert_eq!(lox.classify().unwrap(), MapClass::Field(MapType::StrictlyLoxodromic));
    }

    #[test]
    fn real_fixed_point_examples() {
        let shear = RealMat2::new(1.0, 1.0, 0.0, 1.0);
        assert_eq!(fixed_points_real(&shear).unwrap(), vec![RealRatio::infinity()]);
        let diag = RealMat2::new(2.0, 0.0, 0.0, 0.5);
        assert_eq!(fixed_points_real(&diag).unwrap(), vec![RealRatio::infinity(), RealRatio::affine(0.0)]);
        let rot = RealMat2::new(0.0, -1.0, 1.0, 0.0);
        assert!(fixed_points_real(&rot).unwrap().is_empty());
        assert_eq!(fixed_points_real(&RealMat2::IDENTITY.scale(3.0)), Err(Error::FixesEverything));
    }

    #[test]
    fn dual_nilpotent_fixed_family() {
        let m = map(E, [(1.0, 0.0), (0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]);
        let fixed = m.fixed_points().unwrap();
        assert!(fixed.families.contains(&FixedFamily::DualFiber { base: 0.0 }));
        for s in [-2.0, 0.5, 3.0] {
            let p = FixedFamily::DualFiber { base: 0.0 }.member(s);
            assert!(m.apply(&p).unwrap().approx_eq(&p.canonicalize(), 1e-12));
        }
        // x/(εx + 1) = x − εx² moves every real x ≠ 0
        let p = ProjPoint::affine(Hypercomplex::real(E, 2.0));
        assert!(!m.apply(&p).unwrap().approx_eq(&p.canonicalize(), 1e-6));
    }

    #[test]
    fn fixed_points_are_fixed() {
        let maps = [
            map(D, [(2.0, 0.5), (1.0, 0.0), (0.5, -0.5), (1.0, 0.2)]),
            map(E, [(2.0, 0.5), (1.0, 0.3), (0.5, -0.5), (1.0, 0.2)]),
            map(E, [(2.0, 0.5), (0.0, 0.3), (0.0, -0.5), (1.0, 0.2)]),
            map(AlgebraKind::Complex, [(2.0, 0.5), (1.0, 0.0), (0.5, -0.5), (1.0, 0.2)]),
            MoebiusMap::new(Mat2::from_double_components(&RealMat2::IDENTITY.scale(2.0), &RealMat2::new(1.0, 1.0, 0.0, 1.0)))
                .unwrap(),
        ];
        for m in maps {
            let fixed = m.fixed_points().unwrap();
            assert!(!fixed.points.is_empty() || !fixed.families.is_empty());
            for class in &fixed.points {
                assert!(m.apply_class(class).unwrap().approx_eq(class, 1e-9), "{class:?} under {m:?}");
            }
            for fam in &fixed.families {
                for s in [-1.3, 0.2, 2.0] {
                    let p = fam.member(s);
                    assert!(m.apply(&p).unwrap().approx_eq(&p.canonicalize(), 1e-9), "{fam:?}");
                }
            }
        }
        let id = MoebiusMap::new(Mat2::scalar(h(D, 0.5, 0.1))).unwrap();
        assert_eq!(id.fixed_points(), Err(Error::FixesEverything));
    }
}
