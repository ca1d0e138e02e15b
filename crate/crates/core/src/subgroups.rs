//! Continuous one-parameter subgroups of GL₂ and SL₂ over ℝ, the double
//! numbers and the dual numbers, built from the σ-rotations
//! `H_σ(t) = [[cos_σ t, σ sin_σ t], [sin_σ t, cos_σ t]]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{arctan_sigma, cos_sigma, fmt_num, sin_sigma, AlgebraKind, Hypercomplex, Sigma};
use crate::error::{Error, Result};
use crate::matrix2::{Element, Mat2, RealMat2};

/// A σ-regime, or the trivial subgroup `H_r = I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SigmaKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Trivial,
}

impl SigmaKind {
    pub const ALL: [SigmaKind; 4] = [
        SigmaKind::Elliptic,
        SigmaKind::Parabolic,
        SigmaKind::Hyperbolic,
        SigmaKind::Trivial,
    ];

    pub fn sigma(self) -> Option<Sigma> {
        match self {
            SigmaKind::Elliptic => Some(Sigma::Elliptic),
            SigmaKind::Parabolic => Some(Sigma::Parabolic),
            SigmaKind::Hyperbolic => Some(Sigma::Hyperbolic),
            SigmaKind::Trivial => None,
        }
    }

    /// `K`, `N`, `A` or `I`.
    pub fn letter(self) -> char {
        match self {
            SigmaKind::Elliptic => 'K',
            SigmaKind::Parabolic => 'N',
            SigmaKind::Hyperbolic => 'A',
            SigmaKind::Trivial => 'I',
        }
    }

    /// Order used to put double specs in canonical form; trivial last.
    fn rank(self) -> u8 {
        match self {
            SigmaKind::Elliptic => 0,
            SigmaKind::Parabolic => 1,
            SigmaKind::Hyperbolic => 2,
            SigmaKind::Trivial => 3,
        }
    }

    /// `cos_σ`, with the trivial regime reading as 1.
    pub fn cos(self, t: f64) -> f64 {
        self.sigma().map_or(1.0, |s| cos_sigma(s, t))
    }
}

impl fmt::Display for SigmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for SigmaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "K" | "k" | "-1" | "−1" => Ok(SigmaKind::Elliptic),
            "N" | "n" | "0" => Ok(SigmaKind::Parabolic),
            "A" | "a" | "1" | "+1" => Ok(SigmaKind::Hyperbolic),
            "I" | "i" | "r" => Ok(SigmaKind::Trivial),
            other => Err(Error::parse("sigma", other, "expected K, N, A, I or -1, 0, 1, r")),
        }
    }
}

/// `H_σ(t)`; the identity for the trivial regime.
pub fn h_sigma(sigma: SigmaKind, t: f64) -> RealMat2 {
    match sigma.sigma() {
        None => RealMat2::IDENTITY,
        Some(s) => {
            let (c, sn) = (cos_sigma(s, t), sin_sigma(s, t));
            RealMat2::new(c, s.value() * sn, sn, c)
        }
    }
}

/// `H′_σ(t) = e^{λt}·H_σ(t)`.
pub fn h_sigma_prime(sigma: SigmaKind, lambda: f64, t: f64) -> RealMat2 {
    h_sigma(sigma, t).scale((lambda * t).exp())
}

/// Parametric description of a one-parameter subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SubgroupSpec {
    /// `e^{λt}·H_σ(t)` in GL₂(ℝ).
    RealGl { sigma: SigmaKind, lambda: f64 },
    /// `H_{σ₊}(t)P₊ + H_{σ₋}(at)P₋`.
    DoubleSl {
        sigma_plus: SigmaKind,
        sigma_minus: SigmaKind,
        a: f64,
    },
    /// `H′_{σ₊}(t)P₊ + H′_{σ₋}(at)P₋` with `H′_σ(s) = e^{λs}H_σ(s)`.
    DoubleGl {
        sigma_plus: SigmaKind,
        lambda_plus: f64,
        sigma_minus: SigmaKind,
        lambda_minus: f64,
        a: f64,
    },
    /// `H′(t) + ελ·t·H′(t + t₀)` with `H′(s) = e^{λ₁s}H_σ(s)`.
    DualGl {
        sigma: SigmaKind,
        lambda1: f64,
        lambda: f64,
        t0: f64,
    },
    /// `H_σ(t) + ελ·t·e^{λ₁t₀}·(H_σ(t + t₀) − cos_σ(t₀)·H_σ(t))`.
    DualSl {
        sigma: SigmaKind,
        lambda: f64,
        lambda1: f64,
        t0: f64,
    },
}

impl SubgroupSpec {
    pub fn ring(&self) -> Option<AlgebraKind> {
        match self {
            SubgroupSpec::RealGl { .. } => None,
            SubgroupSpec::DoubleSl { .. } | SubgroupSpec::DoubleGl { .. } => Some(AlgebraKind::Double),
            SubgroupSpec::DualGl { .. } | SubgroupSpec::DualSl { .. } => Some(AlgebraKind::Dual),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubgroupSpec::RealGl { .. } => "real-gl",
            SubgroupSpec::DoubleSl { .. } => "double-sl",
            SubgroupSpec::DoubleGl { .. } => "double-gl",
            SubgroupSpec::DualGl { .. } => "dual-gl",
            SubgroupSpec::DualSl { .. } => "dual-sl",
        }
    }

    /// Checks the parameter constraints: finite values and `λ ≠ 0` for dual specs.
    pub fn validate(&self) -> Result<()> {
        let values: Vec<f64> = match *self {
            SubgroupSpec::RealGl { lambda, .. } => vec![lambda],
            SubgroupSpec::DoubleSl { a, .. } => vec![a],
            SubgroupSpec::DoubleGl {
                lambda_plus,
                lambda_minus,
                a,
                ..
            } => vec![lambda_plus, lambda_minus, a],
            SubgroupSpec::DualGl { lambda1, lambda, t0, .. } | SubgroupSpec::DualSl { lambda, lambda1, t0, .. } => {
                if lambda == 0.0 {
                    return Err(Error::parse("subgroup", &self.to_string(), "lambda must be nonzero"));
                }
                vec![lambda1, lambda, t0]
            }
        };
        if values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::parse("subgroup", &self.to_string(), "parameters must be finite"))
        }
    }

    /// The real matrices making up `eval(t)`: the matrix itself for real
    /// specs, `(B₊, B₋)` for double specs, `(B₁, B₂)` with `B = B₁ + εB₂`
    /// for dual specs.
    pub fn parts(&self, t: f64) -> (RealMat2, RealMat2) {
        match *self {
            SubgroupSpec::RealGl { sigma, lambda } => (h_sigma_prime(sigma, lambda, t), RealMat2::ZERO),
            SubgroupSpec::DoubleSl {
                sigma_plus,
                sigma_minus,
                a,
            } => (h_sigma(sigma_plus, t), h_sigma(sigma_minus, a * t)),
            SubgroupSpec::DoubleGl {
                sigma_plus,
                lambda_plus,
                sigma_minus,
                lambda_minus,
                a,
            } => (
                h_sigma_prime(sigma_plus, lambda_plus, t),
                h_sigma_prime(sigma_minus, lambda_minus, a * t),
            ),
            SubgroupSpec::DualGl {
                sigma,
                lambda1,
                lambda,
                t0,
            } => (
                h_sigma_prime(sigma, lambda1, t),
                h_sigma_prime(sigma, lambda1, t + t0).scale(lambda * t),
            ),
            SubgroupSpec::DualSl {
                sigma,
                lambda,
                lambda1,
                t0,
            } => {
                let h = h_sigma(sigma, t);
                let shifted = h_sigma(sigma, t + t0) - h.scale(sigma.cos(t0));
                (h, shifted.scale(lambda * t * (lambda1 * t0).exp()))
            }
        }
    }

    pub fn eval(&self, t: f64) -> Element {
        let (p, q) = self.parts(t);
        match self.ring() {
            None => Element::Real(p),
            Some(AlgebraKind::Double) => Element::Ring(Mat2::from_double_components(&p, &q)),
            Some(_) => Element::Ring(Mat2::from_dual_parts(&p, &q)),
        }
    }

    /// The same subgroup read through `f(X₊P₊ + X₋P₋) = X₋P₊ + X₊P₋`, as a
    /// spec `s` and time factor `c` with `s.eval(c·t) = f(self.eval(t))`.
    /// `None` unless `self` is a double spec with `a ≠ 0`.
    pub fn swapped(&self) -> Option<(SubgroupSpec, f64)> {
        match *self {
            SubgroupSpec::DoubleSl {
                sigma_plus,
                sigma_minus,
                a,
            } if a != 0.0 => Some((
                SubgroupSpec::DoubleSl {
                    sigma_plus: sigma_minus,
                    sigma_minus: sigma_plus,
                    a: 1.0 / a,
                },
                a,
            )),
            SubgroupSpec::DoubleGl {
                sigma_plus,
                lambda_plus,
                sigma_minus,
                lambda_minus,
                a,
            } if a != 0.0 => Some((
                SubgroupSpec::DoubleGl {
                    sigma_plus: sigma_minus,
                    lambda_plus: lambda_minus,
                    sigma_minus: sigma_plus,
                    lambda_minus: lambda_plus,
                    a: 1.0 / a,
                },
                a,
            )),
            _ => None,
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::RealGl { sigma, lambda } => write!(f, "real-gl(sigma={sigma}, lambda={lambda})"),
            SubgroupSpec::DoubleSl {
                sigma_plus,
                sigma_minus,
                a,
            } => write!(f, "double-sl(sigma+={sigma_plus}, sigma-={sigma_minus}, a={a})"),
            SubgroupSpec::DoubleGl {
                sigma_plus,
                lambda_plus,
                sigma_minus,
                lambda_minus,
                a,
            } => write!(
                f,
                "double-gl(sigma+={sigma_plus}, lambda+={lambda_plus}, sigma-={sigma_minus}, lambda-={lambda_minus}, a={a})"
            ),
            SubgroupSpec::DualGl {
                sigma,
                lambda1,
                lambda,
                t0,
            } => write!(f, "dual-gl(sigma={sigma}, lambda1={lambda1}, lambda={lambda}, t0={t0})"),
            SubgroupSpec::DualSl {
                sigma,
                lambda,
                lambda1,
                t0,
            } => write!(f, "dual-sl(sigma={sigma}, lambda={lambda}, lambda1={lambda1}, t0={t0})"),
        }
    }
}

impl FromStr for SubgroupSpec {
    type Err = Error;

    /// Parses forms such as `double-sl(sigma+=K, sigma-=A, a=2.0)`. Omitted
    /// `lambda`, `lambda1`, `lambda±` and `t0` default to 0 and `a` to 1.
    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: String| Error::parse("subgroup", input, reason);
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, rest) = compact
            .split_once('(')
            .ok_or_else(|| err("expected name(key=value, ...)".into()))?;
        let body = rest.strip_suffix(')').ok_or_else(|| err("missing ')'".into()))?;
        let mut args: Vec<(String, String)> = Vec::new();
        for item in body.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| err(format!("expected key=value, got {item:?}")))?;
            args.push((k.to_ascii_lowercase(), v.to_string()));
        }
        let allowed: &[&str] = match name.to_ascii_lowercase().as_str() {
            "real-gl" => &["sigma", "lambda"],
            "double-sl" => &["sigma+", "sigma-", "a"],
            "double-gl" => &["sigma+", "lambda+", "sigma-", "lambda-", "a"],
            "dual-gl" | "dual-sl" => &["sigma", "lambda", "lambda1", "t0"],
            other => return Err(err(format!("unknown subgroup family {other:?}"))),
        };
        for (k, _) in &args {
            if !allowed.contains(&k.as_str()) {
                return Err(err(format!("unknown parameter {k:?}")));
            }
        }
        let get = |key: &str| args.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let sigma = |key: &str| -> Result<SigmaKind> {
            get(key).ok_or_else(|| err(format!("missing {key}")))?.parse()
        };
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match get(key) {
                Some(v) => v
                    .replace('−', "-")
                    .parse::<f64>()
                    .map_err(|_| err(format!("{key} is not a number: {v:?}"))),
                None => default.ok_or_else(|| err(format!("missing {key}"))),
            }
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "real-gl" => SubgroupSpec::RealGl {
                sigma: sigma("sigma")?,
                lambda: num("lambda", Some(0.0))?,
            },
            "double-sl" => SubgroupSpec::DoubleSl {
                sigma_plus: sigma("sigma+")?,
                sigma_minus: sigma("sigma-")?,
                a: num("a", Some(1.0))?,
            },
            "double-gl" => SubgroupSpec::DoubleGl {
                sigma_plus: sigma("sigma+")?,
                lambda_plus: num("lambda+", Some(0.0))?,
                sigma_minus: sigma("sigma-")?,
                lambda_minus: num("lambda-", Some(0.0))?,
                a: num("a", Some(1.0))?,
            },
            "dual-gl" => SubgroupSpec::DualGl {
                sigma: sigma("sigma")?,
                lambda1: num("lambda1", Some(0.0))?,
                lambda: num("lambda", None)?,
                t0: num("t0", Some(0.0))?,
            },
            _ => SubgroupSpec::DualSl {
                sigma: sigma("sigma")?,
                lambda: num("lambda", None)?,
                lambda1: num("lambda1", Some(0.0))?,
                t0: num("t0", Some(0.0))?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Anything that can be evaluated as a curve `t ↦ B(t)` in a matrix group.
pub trait OneParameter {
    fn at(&self, t: f64) -> Result<Element>;
}

impl OneParameter for SubgroupSpec {
    fn at(&self, t: f64) -> Result<Element> {
        Ok(self.eval(t))
    }
}

/// `t ↦ K·B(t)·K⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugated {
    pub spec: SubgroupSpec,
    k: Element,
    k_inv: Element,
}

impl Conjugated {
    pub fn new(spec: SubgroupSpec, k: Element) -> Result<Self> {
        let compatible = match (&k, spec.ring()) {
            (Element::Real(_), None) => true,
            (Element::Ring(m), Some(kind)) => m.kind() == kind,
            _ => false,
        };
        if !compatible {
            return Err(Error::Unsupported(format!(
                "conjugating matrix does not match the ring of {spec}"
            )));
        }
        Ok(Conjugated {
            spec,
            k,
            k_inv: k.inverse()?,
        })
    }

    /// Conjugation of a double spec by `K₊P₊ + K₋P₋`.
    pub fn by_components(spec: SubgroupSpec, k_plus: &RealMat2, k_minus: &RealMat2) -> Result<Self> {
        Conjugated::new(spec, Element::Ring(Mat2::from_double_components(k_plus, k_minus)))
    }
}

impl OneParameter for Conjugated {
    fn at(&self, t: f64) -> Result<Element> {
        self.k.checked_mul(&self.spec.eval(t))?.checked_mul(&self.k_inv)
    }
}

/// `max |B(t₁ + t₂) − B(t₁)·B(t₂)|` over all real coordinates.
pub fn group_law_residual<S: OneParameter + ?Sized>(s: &S, t1: f64, t2: f64) -> Result<f64> {
    let product = s.at(t1)?.checked_mul(&s.at(t2)?)?;
    Ok(s.at(t1 + t2)?.max_abs_diff(&product))
}

/// `max_t |A(t) − B(t)|` over the sample times.
pub fn similarity_residual<A, B>(a: &A, b: &B, ts: &[f64]) -> Result<f64>
where
    A: OneParameter + ?Sized,
    B: OneParameter + ?Sized,
{
    ts.iter().try_fold(0.0f64, |m, &t| Ok(m.max(a.at(t)?.max_abs_diff(&b.at(t)?))))
}

/// Determinant of `eval(t)` for specs over an algebra.
pub fn sl_membership_check(spec: &SubgroupSpec, t: f64) -> Result<Hypercomplex> {
    match spec.eval(t) {
        Element::Ring(m) => Ok(m.det()),
        Element::Real(_) => Err(Error::Unsupported(
            "determinant check applies to double and dual subgroups".into(),
        )),
    }
}

fn dual_gl_fields(spec: &SubgroupSpec) -> Result<(SigmaKind, f64, f64, f64)> {
    match *spec {
        SubgroupSpec::DualGl {
            sigma,
            lambda1,
            lambda,
            t0,
        } => Ok((sigma, lambda1, lambda, t0)),
        _ => Err(Error::Unsupported(format!("{} is not a dual-gl subgroup", spec.name()))),
    }
}

/// Closed-form determinant of a dual GL subgroup:
/// `e^{2λ₁t} + ε·2λt·e^{λ₁(2t+t₀)}·cos_σ(t₀)`.
pub fn dual_gl_det_formula(spec: &SubgroupSpec, t: f64) -> Result<Hypercomplex> {
    let (sigma, l1, l, t0) = dual_gl_fields(spec)?;
    Ok(Hypercomplex::new(
        AlgebraKind::Dual,
        (2.0 * l1 * t).exp(),
        2.0 * l * t * (l1 * (2.0 * t + t0)).exp() * sigma.cos(t0),
    ))
}

/// The variant with `cos_σ(2t + t₀)` in place of `cos_σ(t₀)`. Differs from
/// the true determinant unless `σ = 0` or `t = 0`.
pub fn dual_gl_det_printed(spec: &SubgroupSpec, t: f64) -> Result<Hypercomplex> {
    let (sigma, l1, l, t0) = dual_gl_fields(spec)?;
    Ok(Hypercomplex::new(
        AlgebraKind::Dual,
        (2.0 * l1 * t).exp(),
        2.0 * l * t * (l1 * (2.0 * t + t0)).exp() * sigma.cos(2.0 * t + t0),
    ))
}

/// The dual SL curve with the printed factor `cos_σ(2t + t₀)`. It is a
/// one-parameter subgroup in SL₂ only when `σ = 0`.
pub fn dual_sl_printed(spec: &SubgroupSpec, t: f64) -> Result<Mat2> {
    match *spec {
        SubgroupSpec::DualSl {
            sigma,
            lambda,
            lambda1,
            t0,
        } => {
            let h = h_sigma(sigma, t);
            let eps = (h_sigma(sigma, t + t0) - h.scale(sigma.cos(2.0 * t + t0)))
                .scale(lambda * t * (lambda1 * t0).exp());
            Ok(Mat2::from_dual_parts(&h, &eps))
        }
        _ => Err(Error::Unsupported(format!("{} is not a dual-sl subgroup", spec.name()))),
    }
}

/// Wraps [`dual_sl_printed`] as a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedDualSl(pub SubgroupSpec);

impl OneParameter for PrintedDualSl {
    fn at(&self, t: f64) -> Result<Element> {
        Ok(Element::Ring(dual_sl_printed(&self.0, t)?))
    }
}

/// Step of the central difference used to recover the generator.
pub const EXP_CHECK_STEP: f64 = 1e-5;

/// Sample times `−2, −1.9, …, 2`.
pub fn exp_check_grid() -> Vec<f64> {
    (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect()
}

/// Recovers `B = B′(0)` by a central difference and returns
/// `max_t |exp(B·t) − B(t)|` over [`exp_check_grid`].
pub fn exp_cross_check<S: OneParameter + ?Sized>(s: &S) -> Result<f64> {
    let h = EXP_CHECK_STEP;
    let generator = s.at(h)?.difference_quotient(&s.at(-h)?, 2.0 * h)?;
    exp_check_grid()
        .into_iter()
        .try_fold(0.0f64, |m, t| Ok(m.max(generator.exp(t).max_abs_diff(&s.at(t)?))))
}

/// Solution of `B·H_σ(s) = H_σ(s)·B` for a real `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CentralizerSolution {
    /// `B = λ·H_σ(s₀)`.
    Scaled { lambda: f64, s0: f64 },
    /// `B = λ·H_σ(s₀)·[[0, 1], [1, 0]]`; hyperbolic only, when `|c| > |a|`.
    ScaledSwap { lambda: f64, s0: f64 },
    /// `B = diagonal·I + off_diagonal·[[0, σ], [1, 0]]` with `det B = 0`.
    Singular { diagonal: f64, off_diagonal: f64 },
}

impl CentralizerSolution {
    pub fn matrix(&self, sigma: Sigma) -> RealMat2 {
        let kind = match sigma {
            Sigma::Elliptic => SigmaKind::Elliptic,
            Sigma::Parabolic => SigmaKind::Parabolic,
            Sigma::Hyperbolic => SigmaKind::Hyperbolic,
        };
        match *self {
            CentralizerSolution::Scaled { lambda, s0 } => h_sigma(kind, s0).scale(lambda),
            CentralizerSolution::ScaledSwap { lambda, s0 } => {
                h_sigma(kind, s0).scale(lambda) * RealMat2::new(0.0, 1.0, 1.0, 0.0)
            }
            CentralizerSolution::Singular {
                diagonal,
                off_diagonal,
            } => RealMat2::new(diagonal, sigma.value() * off_diagonal, off_diagonal, diagonal),
        }
    }
}

/// Writes `B = [[a, b], [c, d]]` commuting with every `H_σ(s)` as a scaled
/// σ-rotation. Succeeds exactly when `a = d` and `b = σc`.
pub fn centralizer_solve(sigma: SigmaKind, b: &RealMat2, tol: f64) -> Result<CentralizerSolution> {
    let s = sigma
        .sigma()
        .ok_or_else(|| Error::Unsupported("every matrix commutes with the trivial subgroup".into()))?;
    let scale = b.max_abs().max(1.0);
    if (b.a - b.d).abs() > tol * scale || (b.b - s.value() * b.c).abs() > tol * scale {
        return Err(Error::NotInCentralizer);
    }
    let (p, r) = (0.5 * (b.a + b.d), b.c);
    let singular = CentralizerSolution::Singular {
        diagonal: p,
        off_diagonal: r,
    };
    let zero = |v: f64| v.abs() <= tol * scale;
    Ok(match s {
        Sigma::Elliptic => {
            if zero(p) && zero(r) {
                singular
            } else if zero(p) {
                CentralizerSolution::Scaled {
                    lambda: r,
                    s0: std::f64::consts::FRAC_PI_2,
                }
            } else {
                let s0 = arctan_sigma(s, r / p)?;
                CentralizerSolution::Scaled {
                    lambda: p / s0.cos(),
                    s0,
                }
            }
        }
        Sigma::Parabolic => {
            if zero(p) {
                singular
            } else {
                CentralizerSolution::Scaled { lambda: p, s0: r / p }
            }
        }
        Sigma::Hyperbolic => {
            if zero(p.abs() - r.abs()) {
                singular
            } else if p.abs() > r.abs() {
                let s0 = arctan_sigma(s, r / p)?;
                CentralizerSolution::Scaled {
                    lambda: p / s0.cosh(),
                    s0,
                }
            } else {
                let s0 = arctan_sigma(s, p / r)?;
                CentralizerSolution::ScaledSwap {
                    lambda: r / s0.cosh(),
                    s0,
                }
            }
        }
    })
}

/// `|B·H_σ(s) − H_σ(s)·B|`.
pub fn commutator_residual(sigma: SigmaKind, b: &RealMat2, s: f64) -> f64 {
    let h = h_sigma(sigma, s);
    (*b * h).max_abs_diff(&(h * *b))
}

/// Canonical type of a subgroup up to similarity, rescaling and the
/// component swap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SubgroupType {
    Identity,
    Real {
        sigma: SigmaKind,
        lambda: f64,
    },
    Double {
        sigma_plus: SigmaKind,
        sigma_minus: SigmaKind,
        /// `|a|`; zero when the minus component is trivial.
        a: f64,
        a_negative: bool,
        swapped: bool,
        /// `(λ₊, λ₋)` for GL specs.
        lambdas: Option<(f64, f64)>,
    },
    Dual {
        sigma: SigmaKind,
        lambda: f64,
        lambda1: f64,
        t0: f64,
        special_linear: bool,
    },
}

pub fn classify_spec(spec: &SubgroupSpec) -> SubgroupType {
    match *spec {
        SubgroupSpec::RealGl { sigma, lambda } => {
            if sigma == SigmaKind::Trivial && lambda == 0.0 {
                SubgroupType::Identity
            } else {
                SubgroupType::Real { sigma, lambda }
            }
        }
        SubgroupSpec::DoubleSl {
            sigma_plus,
            sigma_minus,
            a,
        } => classify_double(sigma_plus, 0.0, sigma_minus, 0.0, a, false),
        SubgroupSpec::DoubleGl {
            sigma_plus,
            lambda_plus,
            sigma_minus,
            lambda_minus,
            a,
        } => classify_double(sigma_plus, lambda_plus, sigma_minus, lambda_minus, a, true),
        SubgroupSpec::DualGl {
            sigma,
            lambda1,
            lambda,
            t0,
        } => SubgroupType::Dual {
            sigma,
            lambda,
            lambda1,
            t0,
            special_linear: false,
        },
        SubgroupSpec::DualSl {
            sigma,
            lambda,
            lambda1,
            t0,
        } => {
            // the ε-part H(t + t₀) − cos_σ(t₀)H(t) vanishes
            if sigma == SigmaKind::Trivial {
                return SubgroupType::Identity;
            }
            SubgroupType::Dual {
                sigma,
                lambda,
                lambda1,
                t0,
                special_linear: true,
            }
        }
    }
}

fn classify_double(sp: SigmaKind, lp: f64, sm: SigmaKind, lm: f64, a: f64, general: bool) -> SubgroupType {
    let trivial = |s: SigmaKind, l: f64| s == SigmaKind::Trivial && l == 0.0;
    // a = 0 freezes the minus component at H(0) = I
    let (sm, lm) = if a == 0.0 { (SigmaKind::Trivial, 0.0) } else { (sm, lm) };
    if trivial(sp, lp) && trivial(sm, lm) {
        return SubgroupType::Identity;
    }
    let (mut sp, mut lp, mut sm, mut lm, mut a) = (sp, lp, sm, lm, a);
    let mut swapped = false;
    if trivial(sp, lp) || (sp.rank() > sm.rank() && !trivial(sm, lm)) {
        std::mem::swap(&mut sp, &mut sm);
        std::mem::swap(&mut lp, &mut lm);
        a = if a == 0.0 { 0.0 } else { 1.0 / a };
        swapped = true;
    }
    if trivial(sm, lm) {
        a = 0.0;
    }
    SubgroupType::Double {
        sigma_plus: sp,
        sigma_minus: sm,
        a: a.abs(),
        a_negative: a < 0.0,
        swapped,
        lambdas: general.then_some((lp, lm)),
    }
}

impl fmt::Display for SubgroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = |general: bool| if general { "′" } else { "" };
        match *self {
            SubgroupType::Identity => f.write_str("identity subgroup"),
            SubgroupType::Real { sigma, lambda } => {
                if lambda == 0.0 {
                    write!(f, "{}(t)", sigma.letter())
                } else {
                    write!(f, "{}′(t), λ={}", sigma.letter(), fmt_num(lambda, None))
                }
            }
            SubgroupType::Double {
                sigma_plus,
                sigma_minus,
                a,
                a_negative,
                lambdas,
                ..
            } => {
                let p = prime(lambdas.is_some());
                if a == 0.0 && sigma_minus == SigmaKind::Trivial && lambdas.is_none_or(|l| l.1 == 0.0) {
                    write!(f, "{}{p}(t)P₊ + IP₋, a = 0", sigma_plus.letter())?;
                } else {
                    let sign = if a_negative { "-" } else { "" };
                    write!(
                        f,
                        "{}{p}(t)P₊ + {}{p}({sign}{}t)P₋",
                        sigma_plus.letter(),
                        sigma_minus.letter(),
                        fmt_num(a, None)
                    )?;
                }
                if let Some((lp, lm)) = lambdas {
                    write!(f, ", λ₊={}, λ₋={}", fmt_num(lp, None), fmt_num(lm, None))?;
                }
                Ok(())
            }
            SubgroupType::Dual {
                sigma,
                lambda,
                lambda1,
                t0,
                special_linear,
            } => {
                let head = if special_linear {
                    format!("{} + ε-deformation in SL", sigma.letter())
                } else {
                    format!("{}′ + ε-deformation", sigma.letter())
                };
                write!(
                    f,
                    "{head} (λ={}, λ₁={}, t₀={})",
                    fmt_num(lambda, None),
                    fmt_num(lambda1, None),
                    fmt_num(t0, None)
                )
            }
        }
    }
}

/// `f(X₊P₊ + X₋P₋) = X₋P₊ + X₊P₋` on double matrices.
pub fn swap_components(m: &Mat2) -> Result<Mat2> {
    let (plus, minus) = m.double_components()?;
    Ok(Mat2::from_double_components(&minus, &plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(s: &str) -> SubgroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let n = spec("real-gl(sigma=N, lambda=0)");
        assert_eq!(n.eval(1.5), Element::Real(RealMat2::new(1.0, 0.0, 1.5, 1.0)));
        let t = 0.8;
        let d = spec("double-sl(sigma+=A, sigma-=I)").eval(t);
        let a = RealMat2::new(t.cosh(), t.sinh(), t.sinh(), t.cosh());
        assert_eq!(d, Element::Ring(Mat2::from_double_components(&a, &RealMat2::IDENTITY)));
        for s in [
            "real-gl(sigma=K, lambda=0.3)",
            "double-gl(sigma+=K, lambda+=1, sigma-=N, lambda-=-1, a=2)",
            "dual-gl(sigma=A, lambda1=0.5, lambda=2, t0=0.3)",
            "dual-sl(sigma=K, lambda=1, lambda1=0.5, t0=0.3)",
        ] {
            let e = spec(s).eval(0.0);
            assert!(e.max_abs_diff(&e.identity_like()) < 1e-15, "{s}");
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "double-sl(sigma+=K, sigma-=A, a=2)",
            "dual-sl(sigma=N, lambda=1, lambda1=0.5, t0=0.3)",
            "real-gl(sigma=A, lambda=0.5)",
            "dual-gl(sigma=I, lambda1=0, lambda=1, t0=0)",
            "double-gl(sigma+=N, lambda+=0.25, sigma-=K, lambda-=-1, a=-0.5)",
        ] {
            assert_eq!(spec(s).to_string(), s);
        }
        assert_eq!(
            spec("double-sl(sigma+=-1,sigma-=1,a=2.0)"),
            SubgroupSpec::DoubleSl {
                sigma_plus: SigmaKind::Elliptic,
                sigma_minus: SigmaKind::Hyperbolic,
                a: 2.0
            }
        );
        assert!("dual-sl(sigma=N, lambda=0)".parse::<SubgroupSpec>().is_err());
        assert!("double-sl(sigma+=K, sigma-=X)".parse::<SubgroupSpec>().is_err());
        assert!("double-sl(sigma+=K, sigma-=K, b=1)".parse::<SubgroupSpec>().is_err());
        assert!("triple(sigma=K)".parse::<SubgroupSpec>().is_err());
    }

    #[test]
    fn group_law_examples() {
        let s = spec("dual-gl(sigma=N, lambda1=0, lambda=1, t0=0)");
        assert_eq!(group_law_residual(&s, 0.0, 0.0).unwrap(), 0.0);
        assert!(group_law_residual(&s, 1.0, 2.0).unwrap() < 1e-10);
        let d = spec("double-sl(sigma+=K, sigma-=A, a=2)");
        for (t1, t2) in [(0.3, -1.1), (1.7, 0.4), (-2.5, 2.9)] {
            assert!(group_law_residual(&d, t1, t2).unwrap() < 1e-10);
        }
        let sl = spec("dual-sl(sigma=K, lambda=1.3, lambda1=0.5, t0=0.7)");
        assert!(group_law_residual(&sl, 0.9, -1.6).unwrap() < 1e-12);
    }

    #[test]
    fn printed_dual_sl_is_not_a_subgroup() {
        for sigma in ["K", "A"] {
            let s = spec(&format!("dual-sl(sigma={sigma}, lambda=1, lambda1=0.5, t0=0.3)"));
            assert!(group_law_residual(&PrintedDualSl(s), 0.7, 0.5).unwrap() > 1e-3);
            assert!(dual_sl_printed(&s, 0.7).unwrap().det().im.abs() > 1e-3);
        }
        let n = spec("dual-sl(sigma=N, lambda=1, lambda1=0.5, t0=0.3)");
        assert!(group_law_residual(&PrintedDualSl(n), 0.7, 0.5).unwrap() < 1e-12);
    }

    #[test]
    fn determinants() {
        let d = spec("double-sl(sigma+=K, sigma-=A, a=2)");
        assert!(sl_membership_check(&d, 1.3).unwrap().approx_eq(&Hypercomplex::one(AlgebraKind::Double), 1e-12));
        let s = spec("dual-sl(sigma=A, lambda=1, lambda1=0.5, t0=0.3)");
        let det = sl_membership_check(&s, 0.7).unwrap();
        assert_abs_diff_eq!(det.re, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(det.im, 0.0, epsilon = 1e-9);

        let g = spec("dual-gl(sigma=K, lambda1=1, lambda=2, t0=0)");
        let e = std::f64::consts::E;
        let det = sl_membership_check(&g, 0.5).unwrap();
        let formula = dual_gl_det_formula(&g, 0.5).unwrap();
        assert!(det.approx_eq(&formula, 1e-12));
        assert_abs_diff_eq!(formula.re, e, epsilon = 1e-12);
        assert_abs_diff_eq!(formula.im, 2.0 * e, epsilon = 1e-12);
        let printed = dual_gl_det_printed(&g, 0.5).unwrap();
        assert_abs_diff_eq!(printed.im, 2.0 * e * 1f64.cos(), epsilon = 1e-12);
        assert!(sl_membership_check(&spec("real-gl(sigma=K)"), 1.0).is_err());
    }

    #[test]
    fn centralizer_examples() {
        let b = RealMat2::new(3.0, -4.0, 4.0, 3.0);
        let sol = centralizer_solve(SigmaKind::Elliptic, &b, 1e-9).unwrap();
        match sol {
            CentralizerSolution::Scaled { lambda, s0 } => {
                assert_abs_diff_eq!(lambda, 5.0, epsilon = 1e-12);
                assert_abs_diff_eq!(s0, (4.0f64 / 3.0).atan(), epsilon = 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(sol.matrix(Sigma::Elliptic).max_abs_diff(&b) < 1e-12);
        assert_eq!(
            centralizer_solve(SigmaKind::Elliptic, &RealMat2::new(1.0, 1.0, 0.0, 1.0), 1e-9),
            Err(Error::NotInCentralizer)
        );
        for sigma in [SigmaKind::Elliptic, SigmaKind::Parabolic, SigmaKind::Hyperbolic] {
            assert_eq!(
                centralizer_solve(sigma, &RealMat2::IDENTITY, 1e-9).unwrap(),
                CentralizerSolution::Scaled { lambda: 1.0, s0: 0.0 }
            );
        }
        let swap = RealMat2::new(1.0, 2.0, 2.0, 1.0);
        let sol = centralizer_solve(SigmaKind::Hyperbolic, &swap, 1e-9).unwrap();
        assert!(matches!(sol, CentralizerSolution::ScaledSwap { .. }));
        assert!(sol.matrix(Sigma::Hyperbolic).max_abs_diff(&swap) < 1e-12);
        assert!(commutator_residual(SigmaKind::Hyperbolic, &swap, 0.7) < 1e-12);
    }

    #[test]
    fn conjugation() {
        let n = spec("real-gl(sigma=N)");
        let same = Conjugated::new(n, Element::Real(RealMat2::IDENTITY)).unwrap();
        assert_eq!(similarity_residual(&same, &n, &exp_check_grid()).unwrap(), 0.0);

        let k = RealMat2::new(1.0, 1.0, 0.0, 1.0);
        let c = Conjugated::new(n, Element::Real(k)).unwrap();
        assert_eq!(c.at(0.5).unwrap(), Element::Real(RealMat2::new(1.5, -0.5, 0.5, 0.5)));
        assert!(group_law_residual(&c, 0.4, -1.3).unwrap() < 1e-10);

        let d = spec("double-sl(sigma+=K, sigma-=A, a=2)");
        let (kp, km) = (RealMat2::new(2.0, 1.0, 1.0, 1.0), RealMat2::new(1.0, 0.0, 3.0, 1.0));
        let c = Conjugated::by_components(d, &kp, &km).unwrap();
        for t in [-1.0, 0.3, 1.7] {
            let (bp, bm) = d.parts(t);
            let expect = Mat2::from_double_components(
                &(kp * bp * kp.inverse().unwrap()),
                &(km * bm * km.inverse().unwrap()),
            );
            assert!(c.at(t).unwrap().max_abs_diff(&Element::Ring(expect)) < 1e-12);
        }
        assert!(Conjugated::new(n, Element::Real(RealMat2::ZERO)).is_err());
        assert!(Conjugated::new(d, Element::Real(k)).is_err());
    }

    #[test]
    fn classification() {
        let t = classify_spec(&spec("double-sl(sigma+=N, sigma-=I)"));
        assert_eq!(t.to_string(), "N(t)P₊ + IP₋, a = 0");
        let t = classify_spec(&spec("double-sl(sigma+=I, sigma-=K, a=3)"));
        assert_eq!(t.to_string(), "K(t)P₊ + IP₋, a = 0");
        let t = classify_spec(&spec("double-sl(sigma+=A, sigma-=K, a=-2)"));
        assert_eq!(t.to_string(), "K(t)P₊ + A(-0.5t)P₋");
        let t = classify_spec(&spec("dual-gl(sigma=K, lambda1=0.1, lambda=1, t0=0)"));
        assert!(t.to_string().starts_with("K′ + ε-deformation"));
        assert_eq!(classify_spec(&spec("real-gl(sigma=I)")), SubgroupType::Identity);
        assert_eq!(classify_spec(&spec("double-sl(sigma+=I, sigma-=I)")), SubgroupType::Identity);
        assert_eq!(classify_spec(&spec("dual-sl(sigma=I, lambda=2)")), SubgroupType::Identity);
    }

    #[test]
    fn exponential_oracle() {
        let a = spec("real-gl(sigma=A)");
        assert!(exp_cross_check(&a).unwrap() < 1e-6);
        let d = spec("dual-gl(sigma=N, lambda1=0, lambda=1, t0=0)");
        assert!(exp_cross_check(&d).unwrap() < 1e-5);
        assert_eq!(exp_cross_check(&spec("real-gl(sigma=I)")).unwrap(), 0.0);
    }

    #[test]
    fn component_swap() {
        let s = spec("double-gl(sigma+=K, lambda+=0.3, sigma-=A, lambda-=-0.2, a=1.7)");
        let (sw, c) = s.swapped().unwrap();
        for t in [-1.2, 0.4, 2.2] {
            let lhs = sw.eval(c * t);
            let rhs = swap_components(s.eval(t).as_ring().unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&Element::Ring(rhs)) < 1e-12);
        }
        assert!(spec("double-sl(sigma+=K, sigma-=A, a=0)").swapped().is_none());
    }
}
