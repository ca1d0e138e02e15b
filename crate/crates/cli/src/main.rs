use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypermobius::orbits::{orbit_sample, parse_grid, StartPoint};
use hypermobius::subgroups::classify_spec;
use hypermobius::verify::run_all;
use hypermobius::{
    AlgebraKind, Element, Error, Hypercomplex, KernelRing, Mat2, MoebiusMap, ProjPoint, SubgroupSpec, Tolerances,
    VerifyConfig,
};

const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_IO: u8 = 74;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "hypermobius",
    version,
    about = "Double and dual numbers, their projective lines, Möbius maps and one-parameter subgroups",
    after_help = "Exit codes: 0 ok, 2 domain error, 3 verification failure, 64 usage, 65 parse error, 74 I/O error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Number system: complex, dual or double (kernel also accepts real).
    #[arg(long, global = true, value_enum)]
    algebra: Option<Ring>,

    /// Absolute threshold below which a coordinate counts as zero.
    #[arg(long, global = true, default_value_t = hypermobius::TAU_ZERO)]
    tol_zero: f64,

    /// Tolerance for algebraic identities.
    #[arg(long, global = true, default_value_t = hypermobius::TAU_ALG)]
    tol_alg: f64,

    /// Seed for randomized suites and probes.
    #[arg(long, global = true, env = "HM_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    output: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unit, zero divisor or nilpotent; with inverse and square roots.
    ClassifyElement {
        /// e.g. "5+3j", "2P+", "1-2e".
        value: String,
    },
    /// Canonical class and orbit of a point "[x : y]".
    ClassifyPoint { point: String },
    /// Type and fixed points of the map of "[[a,b],[c,d]]".
    ClassifyMap { matrix: String },
    /// Evaluate a one-parameter subgroup.
    SubgroupEval {
        #[arg(long)]
        spec: String,
        /// A single time or a grid "start:end:step".
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        t: String,
    },
    /// Sample an orbit and evaluate the closed-form orbit relations on it.
    Orbit {
        #[arg(long)]
        spec: String,
        /// "y+,y-" for double specs, "a,b" for dual specs.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value = "-2:2:0.1", allow_hyphen_values = true)]
        t: String,
    },
    /// Run every seeded property suite.
    Verify,
    /// Scalar matrices of determinant 1 acting trivially on the projective line.
    Kernel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Ring {
    Real,
    Complex,
    Dual,
    Double,
}

impl Ring {
    fn algebra(self) -> Option<AlgebraKind> {
        match self {
            Ring::Real => None,
            Ring::Complex => Some(AlgebraKind::Complex),
            Ring::Dual => Some(AlgebraKind::Dual),
            Ring::Double => Some(AlgebraKind::Double),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(Error::Parse { .. }) => EXIT_PARSE,
            Failure::Core(_) => EXIT_DOMAIN,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

struct Outcome {
    text: String,
    verify_failed: bool,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome {
            text,
            verify_failed: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&cli).and_then(|out| emit(&cli, out)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}\n\nFor more information, try '--help'."),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn emit(cli: &Cli, out: Outcome) -> Result<u8, Failure> {
    let mut text = out.text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out_file {
        Some(path) => fs::write(path, text).map_err(Failure::Io)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(Failure::Io)?;
        }
    }
    Ok(if out.verify_failed { EXIT_VERIFY } else { 0 })
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Failure> {
    for (name, v) in [("--tol-zero", cli.tol_zero), ("--tol-alg", cli.tol_alg)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Failure::Usage(format!("{name} must be a positive number, got {v}")));
        }
    }
    Ok(Tolerances {
        zero: cli.tol_zero,
        alg: cli.tol_alg,
    })
}

fn algebra(cli: &Cli) -> Result<AlgebraKind, Failure> {
    match cli.algebra {
        None => Err(Failure::Usage("--algebra is required (complex, dual or double)".into())),
        Some(ring) => ring
            .algebra()
            .ok_or_else(|| Failure::Usage("--algebra real is only accepted by kernel".into())),
    }
}

fn no_csv(cli: &Cli) -> Result<(), Failure> {
    if cli.output == Format::Csv {
        return Err(Failure::Usage("--output csv is only available for orbit".into()));
    }
    Ok(())
}

fn spec_ring_matches(cli: &Cli, spec: &SubgroupSpec) -> Result<(), Failure> {
    if let Some(ring) = cli.algebra {
        if ring.algebra() != spec.ring() {
            return Err(Failure::Usage(format!("--algebra {ring:?} does not match {}", spec.name()).to_lowercase()));
        }
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::ClassifyElement { value } => {
            no_csv(cli)?;
            classify_element(cli, algebra(cli)?, tol, value).map(Outcome::from)
        }
        Command::ClassifyPoint { point } => {
            no_csv(cli)?;
            classify_point(cli, algebra(cli)?, tol, point).map(Outcome::from)
        }
        Command::ClassifyMap { matrix } => {
            no_csv(cli)?;
            classify_map(cli, algebra(cli)?, matrix).map(Outcome::from)
        }
        Command::SubgroupEval { spec, t } => {
            no_csv(cli)?;
            subgroup_eval(cli, spec, t).map(Outcome::from)
        }
        Command::Orbit { spec, start, t } => orbit(cli, spec, start, t).map(Outcome::from),
        Command::Verify => {
            no_csv(cli)?;
            let report = run_all(VerifyConfig { seed: cli.seed, tol });
            let text = match cli.output {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
                _ => report.render(),
            };
            Ok(Outcome {
                text,
                verify_failed: !report.all_passed(),
            })
        }
        Command::Kernel => {
            no_csv(cli)?;
            kernel(cli).map(Outcome::from)
        }
    }
}

fn classify_element(cli: &Cli, kind: AlgebraKind, tol: Tolerances, input: &str) -> Result<String, Failure> {
    let x = Hypercomplex::parse(kind, input)?;
    let class = x.classify_with(tol.zero);
    let inverse = x.invert_with(tol.zero).ok();
    let roots = x.sqrt_all_with(tol);
    Ok(match cli.output {
        Format::Json => pretty(&json!({
            "value": x,
            "class": class,
            "components": (kind == AlgebraKind::Double).then(|| x.decompose().ok()).flatten(),
            "inverse": inverse,
            "square_roots": roots,
        })),
        _ => {
            let mut out = format!("{x}: {class:?}\n");
            if kind == AlgebraKind::Double {
                out.push_str(&format!("components: {}\n", x.component_string()));
            }
            match inverse {
                Some(inv) => out.push_str(&format!("inverse: {inv}\n")),
                None => out.push_str("inverse: none\n"),
            }
            let list: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
            out.push_str(&format!("square roots ({}): {}\n", roots.len(), list.join(", ")));
            out
        }
    })
}

fn classify_point(cli: &Cli, kind: AlgebraKind, tol: Tolerances, input: &str) -> Result<String, Failure> {
    let p = ProjPoint::parse(kind, input)?;
    let class = p.canonicalize_with(tol.zero);
    Ok(match cli.output {
        Format::Json => pretty(&json!({
            "point": input,
            "class": class,
            "tag": class.tag(),
            "label": class.label(None),
            "orbit": class.orbit_label().to_string(),
            "admissible": p.admissible_with(tol.zero),
        })),
        _ => class.summary(4),
    })
}

fn classify_map(cli: &Cli, kind: AlgebraKind, input: &str) -> Result<String, Failure> {
    let map = MoebiusMap::new(Mat2::parse(kind, input)?)?;
    let report = map.report()?;
    Ok(match cli.output {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        _ => {
            let tr: Vec<String> = report.tr_squared.iter().map(|v| format!("{v:.6}")).collect();
            let mut out = format!("map: {}\nkind: {}\ntr²: {}\nclass: {}\n", map.rep(), report.kind, tr.join(", "), report.class);
            match &report.fixed_points {
                None => out.push_str("fixed points: every point\n"),
                Some(f) => {
                    let pts: Vec<String> = f.points.iter().map(|c| c.label(Some(4))).collect();
                    out.push_str(&format!(
                        "fixed points: {}\n",
                        if pts.is_empty() { "none".to_string() } else { pts.join(", ") }
                    ));
                    for fam in &f.families {
                        out.push_str(&format!("fixed family: {fam}\n"));
                    }
                }
            }
            out
        }
    })
}

fn subgroup_eval(cli: &Cli, spec: &str, t: &str) -> Result<String, Failure> {
    let spec: SubgroupSpec = spec.parse()?;
    spec_ring_matches(cli, &spec)?;
    let ts = parse_grid(t)?;
    let kind = classify_spec(&spec);
    let det = |e: &Element| match e {
        Element::Real(m) => json!(m.det()),
        Element::Ring(m) => json!(m.det()),
    };
    Ok(match cli.output {
        Format::Json => {
            let samples: Vec<_> = ts
                .iter()
                .map(|&t| {
                    let e = spec.eval(t);
                    json!({ "t": t, "matrix": e, "det": det(&e) })
                })
                .collect();
            pretty(&json!({
                "spec": spec,
                "type": kind,
                "type_label": kind.to_string(),
                "samples": samples,
            }))
        }
        _ => {
            let mut out = format!("spec: {spec}\ntype: {kind}\n");
            for &t in &ts {
                let e = spec.eval(t);
                let d = match &e {
                    Element::Real(m) => format!("{:.6}", m.det()),
                    Element::Ring(m) => format!("{:.6}", m.det()),
                };
                out.push_str(&format!("t={t}: {e:.6}  det={d}\n"));
            }
            out
        }
    })
}

fn orbit(cli: &Cli, spec: &str, start: &str, t: &str) -> Result<String, Failure> {
    let spec: SubgroupSpec = spec.parse()?;
    spec_ring_matches(cli, &spec)?;
    let kind = spec.ring().ok_or_else(|| {
        Failure::Core(Error::Unsupported(
            "orbits are sampled for double and dual subgroups".into(),
        ))
    })?;
    let start = StartPoint::parse(kind, start)?;
    let ts = parse_grid(t)?;
    let sample = orbit_sample(&spec, &start, &ts)?;
    Ok(match cli.output {
        Format::Csv => sample.to_csv_string(),
        Format::Json => sample.to_json(),
        Format::Text => {
            let name = |e: Option<hypermobius::OrbitEquation>| e.map_or("none".to_string(), |e| e.to_string());
            let mut out = format!(
                "spec: {spec}\nstart: {start}\nprimary relation: {}\nsecondary relation: {}\n",
                name(sample.primary),
                name(sample.secondary)
            );
            let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3e}"));
            for row in &sample.rows {
                let uv = row.uv.map_or("-".to_string(), |(u, v)| format!("({u:.6}, {v:.6})"));
                out.push_str(&format!(
                    "t={:<8} {:<12} {:<28} {:>11} {:>11}\n",
                    format!("{:.4}", row.t),
                    row.class.tag(),
                    uv,
                    opt(row.residual_primary),
                    opt(row.residual_secondary)
                ));
            }
            out
        }
    })
}

fn kernel(cli: &Cli) -> Result<String, Failure> {
    let ring = match cli.algebra {
        None => return Err(Failure::Usage("--algebra is required (real, complex, dual or double)".into())),
        Some(r) => r.algebra().map_or(KernelRing::Real, KernelRing::Algebra),
    };
    let elements = hypermobius::moebius::kernel_check(ring, cli.seed);
    let label = hypermobius::moebius::kernel_label(&elements);
    Ok(match cli.output {
        Format::Json => pretty(&json!({ "label": label, "elements": elements })),
        _ => label,
    })
}
