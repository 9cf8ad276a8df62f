//! Argument definitions and subcommand dispatch.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use bisiegel::domain::constants::{block_q, symplectic_j};
use bisiegel::sampling::{sample_hpoint, sample_motion, seeded_rng};
use bisiegel::*;

use crate::output::{csv_row, g15, to_json};
use crate::verify::run_suite;

#[derive(Debug, Parser)]
#[command(name = "bisiegel", version, about = "Geometry of the bi-symmetric Siegel upper half space")]
pub struct Cli {
    /// Absolute tolerance for identities and residual checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub abs_eps: f64,
    /// Strict-inequality margin for domain membership.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub dom_eps: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report domain or group membership of a point or matrix.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        /// JSON document, `-` for standard input.
        file: PathBuf,
    },
    /// Apply a motion to a point of the half space.
    Act {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Cayley transform between the half space and the bounded model.
    Cayley {
        #[arg(long, value_enum)]
        to: Model,
        #[arg(long)]
        point: PathBuf,
    },
    /// Split a motion into its two SL₂ factors.
    Split {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Assemble a motion from two SL₂ factors and a sign.
    Assemble {
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        eps: Sign,
    },
    /// Reduce a pair of points to `(iI, iΛ)`.
    Reduce {
        #[arg(long)]
        z1: PathBuf,
        #[arg(long)]
        z: PathBuf,
    },
    /// Distance between two points.
    Distance {
        #[arg(long)]
        z1: PathBuf,
        #[arg(long)]
        z2: PathBuf,
    },
    /// Sample the geodesic between two points as CSV.
    Geodesic {
        #[arg(long)]
        z1: PathBuf,
        #[arg(long)]
        z2: PathBuf,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Invariant volume density at a point.
    Volume {
        #[arg(long)]
        point: PathBuf,
    },
    /// Stabilizer of the base point with unit parameters `ξ₁, ξ₂`.
    Stabilizer {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        xi1: Complex,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        xi2: Complex,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        eps: Sign,
        #[arg(long, value_enum, default_value_t = Model::Halfspace)]
        model: Model,
    },
    /// Deterministic random samples as JSON Lines.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Run the randomized invariant suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Hyperbolic-plane invariants of two points of the upper half plane.
    Oracle {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z1: Complex,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z2: Complex,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Point,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Disc,
    Halfspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Point,
    Motion,
}

fn parse_complex(s: &str) -> std::result::Result<Complex, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(c64(parse(re)?, parse(im)?))
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    match s.trim() {
        "1" | "+1" => Ok(Sign::Plus),
        "-1" => Ok(Sign::Minus),
        other => Err(format!("expected 1 or -1 but got {other:?}")),
    }
}

/// Text for standard output and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    let name = path.display().to_string();
    let mut text = String::new();
    let res = if name == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|source| CliError::Io { path: name, source })?;
    Ok(text)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.display().to_string(), source })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    tau: Complex,
    z: Complex,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscPointDoc {
    z1: Complex,
    z2: Complex,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyPointDoc {
    Half(PointDoc),
    Disc(DiscPointDoc),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    m: Mat4R,
    #[serde(default)]
    eps: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sl2Doc {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

fn read_hpoint(path: &Path, tol: &Tolerance) -> CliResult<HPoint> {
    let doc: PointDoc = read_json(path)?;
    Ok(HPoint::new(doc.tau, doc.z, tol)?)
}

fn read_epoint(path: &Path, tol: &Tolerance) -> CliResult<EPoint> {
    let doc: DiscPointDoc = read_json(path)?;
    Ok(EPoint::new(doc.z1, doc.z2, tol)?)
}

fn read_motion(path: &Path, tol: &Tolerance) -> CliResult<MotionMatrix> {
    let doc: MatrixDoc = read_json(path)?;
    let m = classify(&doc.m, tol)?;
    if let Some(e) = doc.eps {
        let declared = Sign::try_from(e).map_err(|msg| CliError::Invalid(format!("{}: {msg}", path.display())))?;
        if declared != m.eps() {
            return Err(CliError::Invalid(format!(
                "{}: declared eps = {declared} but the matrix has eps = {}",
                path.display(),
                m.eps()
            )));
        }
    }
    Ok(m)
}

fn read_sl2(path: &Path, tol: &Tolerance) -> CliResult<Sl2Matrix> {
    let doc: Sl2Doc = read_json(path)?;
    Ok(Sl2Matrix::new(doc.a, doc.b, doc.c, doc.d, tol)?)
}

#[derive(Serialize)]
struct PointReport {
    model: &'static str,
    member: bool,
    /// `Im τ − |Im z|` or `1 − max(|z₁ + z₂|, |z₁ − z₂|)`.
    margin: f64,
}

#[derive(Serialize)]
struct MatrixReport {
    symplectic: bool,
    symplectic_residual: f64,
    commute_residual: f64,
    anticommute_residual: f64,
    motion: bool,
    eps: Option<i64>,
}

fn check_point(path: &Path, tol: &Tolerance) -> CliResult<String> {
    let report = match read_json::<AnyPointDoc>(path)? {
        AnyPointDoc::Half(p) => {
            PointReport { model: "halfspace", member: h_contains(p.tau, p.z, tol), margin: p.tau.im - p.z.im.abs() }
        }
        AnyPointDoc::Disc(p) => PointReport {
            model: "disc",
            member: e_contains(p.z1, p.z2, tol),
            margin: 1.0 - (p.z1 + p.z2).norm().max((p.z1 - p.z2).norm()),
        },
    };
    Ok(to_json(&report))
}

fn check_matrix(path: &Path, tol: &Tolerance) -> CliResult<String> {
    let doc: MatrixDoc = read_json(path)?;
    let (m, j, q) = (doc.m, symplectic_j(), block_q());
    let symp = (m.transpose() * j * m - j).max_abs();
    let commute = (m * q - q * m).max_abs();
    let anticommute = (m * q + q * m).max_abs();
    let eps = match classify(&m, tol) {
        Ok(c) => Some(i64::from(c.eps())),
        Err(e) if e.is_numerical() => return Err(e.into()),
        Err(_) => None,
    };
    let report = MatrixReport {
        symplectic: symp <= tol.abs_eps,
        symplectic_residual: symp,
        commute_residual: commute,
        anticommute_residual: anticommute,
        motion: eps.is_some(),
        eps,
    };
    Ok(to_json(&report))
}

fn geodesic_csv(z1: &HPoint, z2: &HPoint, samples: usize, tol: &Tolerance) -> CliResult<String> {
    if samples < 2 {
        return Err(CliError::Invalid(format!("--samples must be at least 2, got {samples}")));
    }
    let spec = GeodesicSpec::new(z1, z2, tol)?;
    let s0 = spec.s0();
    let mut out = String::from("s,tau_re,tau_im,z_re,z_im\n");
    for k in 0..samples {
        let s = if k + 1 == samples { s0 } else { s0 * k as f64 / (samples - 1) as f64 };
        let p = spec.point_at(s, tol)?;
        out.push_str(&csv_row(&[s, p.tau().re, p.tau().im, p.z().re, p.z().im]));
        out.push('\n');
    }
    Ok(out)
}

fn verify_table(seed: u64, trials: usize, tol: &Tolerance) -> Output {
    let outcomes = run_suite(seed, trials, tol);
    let mut text = format!("{:<24} {:>7} {:>22} {:>10}  status\n", "check", "trials", "max_residual", "tolerance");
    for c in &outcomes {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let _ = write!(
            text,
            "{:<24} {:>7} {:>22} {:>10}  {status}",
            c.name,
            c.trials,
            g15(c.max_residual),
            g15(c.tolerance)
        );
        if let Some(e) = &c.error {
            let _ = write!(text, " ({e})");
        }
        text.push('\n');
    }
    let failed = outcomes.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(text, "{} checks, {failed} failed", outcomes.len());
    Output { text, code: if failed == 0 { 0 } else { 1 } }
}

fn line(json: String) -> String {
    json + "\n"
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> CliResult<Output> {
    let tol = Tolerance::new(cli.abs_eps, cli.dom_eps)?;
    let tol = &tol;
    let text = match &cli.command {
        Command::Check { kind: CheckKind::Point, file } => line(check_point(file, tol)?),
        Command::Check { kind: CheckKind::Matrix, file } => line(check_matrix(file, tol)?),
        Command::Act { matrix, point } => {
            let m = read_motion(matrix, tol)?;
            let z = read_hpoint(point, tol)?;
            line(to_json(&apply(&m, &z, tol)?))
        }
        Command::Cayley { to: Model::Disc, point } => line(to_json(&cayley_to_disc(&read_hpoint(point, tol)?, tol)?)),
        Command::Cayley { to: Model::Halfspace, point } => {
            line(to_json(&cayley_to_halfspace(&read_epoint(point, tol)?, tol)?))
        }
        Command::Split { matrix } => {
            #[derive(Serialize)]
            struct Factors {
                m1: Sl2Matrix,
                m2: Sl2Matrix,
            }
            let (m1, m2) = split(&read_motion(matrix, tol)?, tol)?;
            line(to_json(&Factors { m1, m2 }))
        }
        Command::Assemble { m1, m2, eps } => line(to_json(&assemble(&read_sl2(m1, tol)?, &read_sl2(m2, tol)?, *eps))),
        Command::Reduce { z1, z } => line(to_json(&reduce_pair(&read_hpoint(z1, tol)?, &read_hpoint(z, tol)?, tol)?)),
        Command::Distance { z1, z2 } => line(to_json(&distance(&read_hpoint(z1, tol)?, &read_hpoint(z2, tol)?, tol))),
        Command::Geodesic { z1, z2, samples } => {
            geodesic_csv(&read_hpoint(z1, tol)?, &read_hpoint(z2, tol)?, *samples, tol)?
        }
        Command::Volume { point } => {
            #[derive(Serialize)]
            struct Density {
                density: f64,
            }
            line(to_json(&Density { density: volume_density(&read_hpoint(point, tol)?) }))
        }
        Command::Stabilizer { xi1, xi2, eps, model } => {
            let p = StabilizerParams::new(*xi1, *xi2, *eps, tol)?;
            match model {
                Model::Disc => line(to_json(&stabilizer_of_center(&p))),
                Model::Halfspace => line(to_json(&stabilizer_of_ii(&p, tol)?)),
            }
        }
        Command::Random { kind, seed, count } => {
            let mut rng = seeded_rng(*seed);
            let mut out = String::new();
            for _ in 0..*count {
                let json = match kind {
                    RandomKind::Point => to_json(&sample_hpoint(&mut rng)),
                    RandomKind::Motion => to_json(&sample_motion(&mut rng)),
                };
                out.push_str(&line(json));
            }
            out
        }
        Command::Verify { seed, trials } => return Ok(verify_table(*seed, *trials, tol)),
        Command::Oracle { z1, z2 } => {
            #[derive(Serialize)]
            struct OracleOut {
                lambda: f64,
                distance: f64,
            }
            let (a, b) = (HalfPlanePoint::from_complex(*z1, tol)?, HalfPlanePoint::from_complex(*z2, tol)?);
            line(to_json(&OracleOut { lambda: pair_lambda(&a, &b), distance: hyp_distance(&a, &b) }))
        }
    };
    Ok(Output::ok(text))
}
