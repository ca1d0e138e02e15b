//! Orbits of one-parameter subgroups on the double and dual projective
//! lines. [`orbit_sample`] applies the group directly and is the reference;
//! the closed-form orbit equations are only evaluated against its rows.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};

use crate::algebra::{arctan_sigma, cos_sigma, sin_sigma, AlgebraKind, Hypercomplex, Sigma, TAU_ZERO};
use crate::error::{Error, Result};
use crate::matrix2::Element;
use crate::projline::{CanonicalClass, ProjPoint};
use crate::subgroups::{SigmaKind, SubgroupSpec};

/// Starting point in the affine chart: `[y₊P₊ + y₋P₋ : 1]` or `[a + εb : 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "lowercase")]
pub enum StartPoint {
    Double { y_plus: f64, y_minus: f64 },
    Dual { a: f64, b: f64 },
}

impl StartPoint {
    pub fn kind(&self) -> AlgebraKind {
        match self {
            StartPoint::Double { .. } => AlgebraKind::Double,
            StartPoint::Dual { .. } => AlgebraKind::Dual,
        }
    }

    pub fn value(&self) -> Hypercomplex {
        match *self {
            StartPoint::Double { y_plus, y_minus } => Hypercomplex::recompose(y_plus, y_minus),
            StartPoint::Dual { a, b } => Hypercomplex::new(AlgebraKind::Dual, a, b),
        }
    }

    pub fn point(&self) -> ProjPoint {
        ProjPoint::affine(self.value())
    }

    /// `(u, v)` of the start itself.
    pub fn uv(&self) -> (f64, f64) {
        let z = self.value();
        (z.re, z.im)
    }

    /// Parses `"y₊,y₋"` (double) or `"a,b"` (dual).
    pub fn parse(kind: AlgebraKind, input: &str) -> Result<Self> {
        let err = |reason: &str| Error::parse("start point", input, reason);
        let nums: Vec<f64> = input
            .split(',')
            .map(|s| s.trim().replace('−', "-").parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("expected two comma-separated numbers"))?;
        let [x, y] = nums[..] else {
            return Err(err("expected two comma-separated numbers"));
        };
        if !x.is_finite() || !y.is_finite() {
            return Err(err("coordinates must be finite"));
        }
        match kind {
            AlgebraKind::Double => Ok(StartPoint::Double { y_plus: x, y_minus: y }),
            AlgebraKind::Dual => Ok(StartPoint::Dual { a: x, b: y }),
            AlgebraKind::Complex => Err(err("orbits are sampled on the double and dual lines only")),
        }
    }
}

impl fmt::Display for StartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StartPoint::Double { y_plus, y_minus } => write!(f, "[{y_plus}P₊ + {y_minus}P₋ : 1]"),
            StartPoint::Dual { a, b } => write!(f, "[{a} + {b}ε : 1]"),
        }
    }
}

/// Closed-form orbit equations evaluated on sampled rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitEquation {
    /// `tan⁻¹_{σ₊}(…) = (1/a)·tan⁻¹_{σ₋}(…)` for `H_{σ₊}(t)P₊ + H_{σ₋}(at)P₋`.
    ArctanRelation,
    /// The quadric `u² − v² + αu − βv = 0` for `N(t)P₊ + N(at)P₋`.
    Quadric,
    /// `2v·y₋ = u² − v² − y₋(u − v)` for `H_σ(t)P₊ + IP₋`.
    LineCorrected,
    /// `2v = u² − v² − y₋(u − v)`, as printed.
    LinePrinted,
    /// The displayed dual SL orbit expression, transcribed literally.
    DualSl,
}

impl OrbitEquation {
    pub fn name(self) -> &'static str {
        match self {
            OrbitEquation::ArctanRelation => "arctan-relation",
            OrbitEquation::Quadric => "quadric",
            OrbitEquation::LineCorrected => "line-corrected",
            OrbitEquation::LinePrinted => "line-printed",
            OrbitEquation::DualSl => "dual-sl",
        }
    }
}

impl fmt::Display for OrbitEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(primary, secondary)` equations checked for a spec.
pub fn equations_for(spec: &SubgroupSpec) -> (Option<OrbitEquation>, Option<OrbitEquation>) {
    use SigmaKind::*;
    match *spec {
        SubgroupSpec::DoubleSl {
            sigma_plus,
            sigma_minus,
            a,
        } => {
            let minus_trivial = sigma_minus == Trivial || a == 0.0;
            match (sigma_plus, minus_trivial) {
                (Trivial, _) => (None, None),
                (_, true) => (Some(OrbitEquation::LineCorrected), Some(OrbitEquation::LinePrinted)),
                (Parabolic, false) if sigma_minus == Parabolic => {
                    (Some(OrbitEquation::Quadric), Some(OrbitEquation::ArctanRelation))
                }
                _ => (Some(OrbitEquation::ArctanRelation), None),
            }
        }
        SubgroupSpec::DualSl { sigma, .. } if sigma != Trivial => (Some(OrbitEquation::DualSl), None),
        _ => (None, None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub t: f64,
    pub class: CanonicalClass,
    /// Affine coordinates `[u + jv : 1]` or `[u + εv : 1]`.
    pub uv: Option<(f64, f64)>,
    pub residual_primary: Option<f64>,
    pub residual_secondary: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub spec: SubgroupSpec,
    pub start: StartPoint,
    pub primary: Option<OrbitEquation>,
    pub secondary: Option<OrbitEquation>,
    pub rows: Vec<OrbitRow>,
}

pub const CSV_HEADER: [&str; 6] = ["t", "class", "u", "v", "residual_primary", "residual_secondary"];

impl OrbitSample {
    /// Largest |primary residual| over rows where it applies.
    pub fn max_primary(&self) -> Option<f64> {
        max_abs(self.rows.iter().filter_map(|r| r.residual_primary))
    }

    pub fn max_secondary(&self) -> Option<f64> {
        max_abs(self.rows.iter().filter_map(|r| r.residual_secondary))
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        // Debug gives the shortest round-trip form, with an exponent for tiny values
        let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
        for row in &self.rows {
            w.write_record([
                format!("{:?}", row.t),
                row.class.tag().to_string(),
                opt(row.uv.map(|p| p.0)),
                opt(row.uv.map(|p| p.1)),
                opt(row.residual_primary),
                opt(row.residual_secondary),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("orbit samples serialize")
    }
}

fn max_abs(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.map(f64::abs).fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
}

/// Applies `spec.eval(t)` to `start` for each `t` and canonicalizes the
/// image. Affine rows carry `(u, v)` and the applicable residuals.
pub fn orbit_sample(spec: &SubgroupSpec, start: &StartPoint, ts: &[f64]) -> Result<OrbitSample> {
    if spec.ring() != Some(start.kind()) {
        return Err(Error::Unsupported(format!(
            "{} does not act on the {} projective line",
            spec.name(),
            start.kind()
        )));
    }
    let (primary, secondary) = equations_for(spec);
    let p = start.point();
    let rows = ts
        .iter()
        .map(|&t| {
            let Element::Ring(m) = spec.eval(t) else {
                unreachable!("ring specs evaluate to ring matrices")
            };
            let class = p.apply(&m)?.canonicalize();
            let uv = match class {
                CanonicalClass::Affine(z) => Some((z.re, z.im)),
                _ => None,
            };
            let eval = |eq: Option<OrbitEquation>| match (eq, uv) {
                (Some(eq), Some((u, v))) => evaluate(eq, spec, start, t, u, v),
                _ => None,
            };
            Ok(OrbitRow {
                t,
                class,
                uv,
                residual_primary: eval(primary),
                residual_secondary: eval(secondary),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitSample {
        spec: *spec,
        start: *start,
        primary,
        secondary,
        rows,
    })
}

fn evaluate(eq: OrbitEquation, spec: &SubgroupSpec, start: &StartPoint, t: f64, u: f64, v: f64) -> Option<f64> {
    match (eq, *spec) {
        (
            OrbitEquation::ArctanRelation,
            SubgroupSpec::DoubleSl {
                sigma_plus,
                sigma_minus,
                a,
            },
        ) => {
            if !on_principal_branch(sigma_plus, sigma_minus, a, t) {
                return None;
            }
            residual_oslo11(sigma_plus, sigma_minus, a, start, u, v)
        }
        (OrbitEquation::Quadric, SubgroupSpec::DoubleSl { a, .. }) => residual_oslo1(a, start, u, v),
        (OrbitEquation::LineCorrected, _) => residual_oslo2(start, u, v).map(|r| r.corrected),
        (OrbitEquation::LinePrinted, _) => residual_oslo2(start, u, v).map(|r| r.printed),
        (OrbitEquation::DualSl, SubgroupSpec::DualSl { sigma, .. }) => {
            if sigma == SigmaKind::Elliptic && t.abs() >= FRAC_PI_2 {
                return None;
            }
            residual_sldorbit(spec, start, u, v)
        }
        _ => None,
    }
}

/// `tan⁻¹_σ` recovers `t` only on `|t| < π/2` in the elliptic case.
pub fn on_principal_branch(sigma_plus: SigmaKind, sigma_minus: SigmaKind, a: f64, t: f64) -> bool {
    let ok = |s: SigmaKind, t: f64| s != SigmaKind::Elliptic || t.abs() < FRAC_PI_2;
    ok(sigma_plus, t) && ok(sigma_minus, a * t)
}

fn double_start(start: &StartPoint) -> Option<(f64, f64)> {
    match *start {
        StartPoint::Double { y_plus, y_minus } => Some((y_plus, y_minus)),
        StartPoint::Dual { .. } => None,
    }
}

/// `tan⁻¹_σ((y − w)/(y·w − σ))`, the time taken to move `y` to `w`.
fn component_time(sigma: Sigma, y: f64, w: f64) -> Option<f64> {
    let den = y * w - sigma.value();
    if den.abs() < TAU_ZERO {
        return None;
    }
    arctan_sigma(sigma, (y - w) / den).ok()
}

/// `tan⁻¹_{σ₊}((y₊ − (u+v))/(y₊(u+v) − σ₊)) − (1/a)·tan⁻¹_{σ₋}((y₋ − (u−v))/(y₋(u−v) − σ₋))`.
/// `None` when a denominator vanishes, an argument leaves the domain of
/// `tan⁻¹_σ`, a regime is trivial, or `a = 0`.
pub fn residual_oslo11(
    sigma_plus: SigmaKind,
    sigma_minus: SigmaKind,
    a: f64,
    start: &StartPoint,
    u: f64,
    v: f64,
) -> Option<f64> {
    let (yp, ym) = double_start(start)?;
    if a == 0.0 {
        return None;
    }
    let lhs = component_time(sigma_plus.sigma()?, yp, u + v)?;
    let rhs = component_time(sigma_minus.sigma()?, ym, u - v)?;
    Some(lhs - rhs / a)
}

/// `u² − v² + (a−1)y₊y₋/(y₊−ay₋)·u − (a+1)y₊y₋/(y₊−ay₋)·v`; `None` if
/// `y₊ = a·y₋` or `a = 0`.
pub fn residual_oslo1(a: f64, start: &StartPoint, u: f64, v: f64) -> Option<f64> {
    let (yp, ym) = double_start(start)?;
    let den = yp - a * ym;
    if a == 0.0 || den.abs() < TAU_ZERO {
        return None;
    }
    let k = yp * ym / den;
    Some(u * u - v * v + (a - 1.0) * k * u - (a + 1.0) * k * v)
}

/// Residuals for the orbit of `[y₊P₊ + y₋P₋ : 1]` under `H_σ(t)P₊ + IP₋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineResiduals {
    /// `(u − v) − y₋`: the minus component never moves.
    pub line: f64,
    /// `2v·y₋ − (u² − v²) + y₋(u − v)`.
    pub corrected: f64,
    /// `2v − (u² − v²) + y₋(u − v)`. On the orbit it equals `2v(1 − y₋)`.
    pub printed: f64,
}

pub fn residual_oslo2(start: &StartPoint, u: f64, v: f64) -> Option<LineResiduals> {
    let (_, ym) = double_start(start)?;
    let q = u * u - v * v;
    Some(LineResiduals {
        line: (u - v) - ym,
        corrected: 2.0 * v * ym - q + ym * (u - v),
        printed: 2.0 * v - q + ym * (u - v),
    })
}

/// The displayed dual SL orbit expression at `[u + εv : 1]`, term by term.
/// `None` when `au − σ`, `a² − σ` or `u² − σ` vanishes, when the arctan
/// argument leaves its domain, or for a trivial regime.
pub fn residual_sldorbit(spec: &SubgroupSpec, start: &StartPoint, u: f64, v: f64) -> Option<f64> {
    let SubgroupSpec::DualSl {
        sigma,
        lambda,
        lambda1,
        t0,
    } = *spec
    else {
        return None;
    };
    let StartPoint::Dual { a, b } = *start else {
        return None;
    };
    let s = sigma.sigma()?;
    let sv = s.value();
    let f = a * u - sv;
    let d = a * a - sv;
    let e = u * u - sv;
    if f.abs() < TAU_ZERO || d.abs() < TAU_ZERO || e.abs() < TAU_ZERO {
        return None;
    }
    let g = a - u;
    let q = (u * u + sv) * (a * a + sv) - 4.0 * sv * a * u;
    let (c0, s0) = (cos_sigma(s, t0), sin_sigma(s, t0));
    let angle = arctan_sigma(s, g / f).ok()?;

    let term1 = (b - a) * e / d;
    let term2 = a * a * (q / (d * d) * c0 + 2.0 * sv * g * f / (d * d) * s0);
    let ed3 = e * d * d * d;
    let x = 2.0 * g * f.powi(3) / ed3 * c0 + q * f * f / ed3 * s0;
    let y = q * f * f / ed3 * c0 + 2.0 * sv * g * f.powi(3) / ed3 * s0;
    Some(v - lambda * (lambda1 * t0).exp() * angle * (term1 - term2 - sv * x * y))
}

/// Parses `"start:end:step"` into the grid `start, start+step, …`, keeping
/// `end` when it is within half a step.
pub fn parse_grid(input: &str) -> Result<Vec<f64>> {
    let err = |reason: &str| Error::parse("t grid", input, reason);
    let parts: Vec<f64> = input
        .split(':')
        .map(|s| s.trim().replace('−', "-").parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| err("expected start:end:step"))?;
    match parts[..] {
        [t] if t.is_finite() => Ok(vec![t]),
        [start, end, step] => {
            if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 {
                return Err(err("need finite bounds and a positive step"));
            }
            if end < start {
                return Err(err("end must not precede start"));
            }
            let n = ((end - start) / step + 0.5).floor() as usize;
            if n > 10_000_000 {
                return Err(err("grid too large"));
            }
            Ok((0..=n).map(|i| start + step * i as f64).collect())
        }
        _ => Err(err("expected start:end:step")),
    }
}

/// `n` evenly spaced samples from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(s: &str) -> SubgroupSpec {
        s.parse().unwrap()
    }

    const DOUBLE_12: StartPoint = StartPoint::Double {
        y_plus: 1.0,
        y_minus: 2.0,
    };

    #[test]
    fn parabolic_pair_row() {
        let s = spec("double-sl(sigma+=N, sigma-=N, a=1)");
        let sample = orbit_sample(&s, &DOUBLE_12, &[0.0, 1.0]).unwrap();
        let (u, v) = sample.rows[1].uv.unwrap();
        assert_abs_diff_eq!(u, 7.0 / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v, -1.0 / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(residual_oslo1(1.0, &DOUBLE_12, u, v).unwrap(), 0.0, epsilon = 1e-14);
        assert_eq!(sample.rows[0].uv, Some(DOUBLE_12.uv()));
        assert_eq!(sample.rows[0].residual_primary, Some(0.0));
        assert_eq!(sample.primary, Some(OrbitEquation::Quadric));
    }

    #[test]
    fn line_orbit_row() {
        let s = spec("double-sl(sigma+=N, sigma-=I)");
        let sample = orbit_sample(&s, &DOUBLE_12, &[1.0]).unwrap();
        let (u, v) = sample.rows[0].uv.unwrap();
        assert_abs_diff_eq!(u, 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(v, -0.75, epsilon = 1e-14);
        let r = residual_oslo2(&DOUBLE_12, u, v).unwrap();
        assert_abs_diff_eq!(r.line, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.corrected, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.printed, 1.5, epsilon = 1e-14);

        let one = StartPoint::Double {
            y_plus: 1.0,
            y_minus: 1.0,
        };
        let (u, v) = one.uv();
        let r = residual_oslo2(&one, u, v).unwrap();
        assert_eq!((r.corrected, r.printed), (0.0, 0.0));
    }

    #[test]
    fn elliptic_pole_leaves_chart() {
        // cos t + y sin t = 0 at t = π − atan(1/y) for y = 1
        let t = 3.0 * std::f64::consts::FRAC_PI_4;
        let s = spec("double-sl(sigma+=K, sigma-=K, a=1)");
        let start = StartPoint::Double {
            y_plus: 1.0,
            y_minus: 1.0,
        };
        let sample = orbit_sample(&s, &start, &[t]).unwrap();
        assert_eq!(sample.rows[0].class, CanonicalClass::Infinity);
        assert_eq!(sample.rows[0].uv, None);
        assert_eq!(sample.rows[0].residual_primary, None);
    }

    #[test]
    fn arctan_relation_on_orbit() {
        let start = StartPoint::Double {
            y_plus: 1.3,
            y_minus: 0.7,
        };
        for s in [
            "double-sl(sigma+=K, sigma-=A, a=0.8)",
            "double-sl(sigma+=A, sigma-=N, a=-1.5)",
            "double-sl(sigma+=N, sigma-=K, a=0.6)",
        ] {
            let sample = orbit_sample(&spec(s), &start, &linspace(-2.0, 2.0, 41)).unwrap();
            let m = sample.max_primary().unwrap();
            assert!(m < 1e-8, "{s}: {m}");
            assert!(sample.rows.iter().any(|r| r.residual_primary.is_some()));
        }
        assert!(residual_oslo11(SigmaKind::Elliptic, SigmaKind::Hyperbolic, 0.8, &start, 1.4, 0.6).unwrap().abs() > 1e-3);
        assert_eq!(residual_oslo11(SigmaKind::Elliptic, SigmaKind::Hyperbolic, 0.8, &start, 1.0, 0.3), Some(0.0));
    }

    #[test]
    fn dual_orbit_start_and_literal_expression() {
        let s = spec("dual-sl(sigma=N, lambda=1, lambda1=0, t0=0)");
        let start = StartPoint::Dual { a: 1.0, b: 0.0 };
        assert_eq!(residual_sldorbit(&s, &start, 1.0, 0.0), Some(0.0));
        let sample = orbit_sample(&s, &start, &[0.0, 0.1]).unwrap();
        assert_eq!(sample.rows[0].residual_primary, Some(0.0));
        assert!(sample.rows[1].residual_primary.is_some());
        assert!(residual_sldorbit(&s, &start, 0.9, 0.5).unwrap().abs() > 1e-3);
    }

    #[test]
    fn export_formats() {
        let s = spec("double-sl(sigma+=N, sigma-=N, a=1)");
        let sample = orbit_sample(&s, &DOUBLE_12, &[0.0, -1.0]).unwrap();
        let csv = sample.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,class,u,v,residual_primary,residual_secondary"));
        assert_eq!(lines.next(), Some("0.0,Affine,1.5,-0.5,0.0,0.0"));
        // y₊t + 1 = 0 at t = −1: only the minus component of y survives
        assert_eq!(lines.next(), Some("-1.0,OmegaMinus,,,,"));
        let back: OrbitSample = serde_json::from_str(&sample.to_json()).unwrap();
        assert_eq!(back, sample);
    }

    #[test]
    fn grids() {
        let g = parse_grid("-2:2:0.1").unwrap();
        assert_eq!(g.len(), 41);
        assert_abs_diff_eq!(*g.last().unwrap(), 2.0, epsilon = 1e-12);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_grid("0.5").unwrap(), vec![0.5]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:b").is_err());
        assert_eq!(linspace(-2.0, 2.0, 41)[20], 0.0);
    }

    #[test]
    fn mismatched_ring() {
        let s = spec("dual-sl(sigma=K, lambda=1)");
        assert!(orbit_sample(&s, &DOUBLE_12, &[0.0]).is_err());
        assert!(StartPoint::parse(AlgebraKind::Complex, "1,2").is_err());
        assert_eq!(StartPoint::parse(AlgebraKind::Dual, "1, -2").unwrap(), StartPoint::Dual { a: 1.0, b: -2.0 });
    }
}
