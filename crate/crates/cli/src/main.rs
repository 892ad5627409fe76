//! `ellgen`: elliptic genera, Witten bundles and identity checks from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 malformed input,
//! 3 a domain error (wrong dimension, exponent out of range, ...).

mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ellgen::bundles::{expand_witten, index_bundle, signature_index_bundle, WittenTwist};
use ellgen::genera::{genus, hypersurface_pont};
use ellgen::series::{fmt_rat, DEFAULT_UORDER};
use ellgen::sobolev::{sobolev_solve, DEFAULT_TOL};
use ellgen::{GenusKind, Hypersurface, Manifold, USeries};
use serde_json::{json, Value};

use verify::Check;

#[derive(Parser, Debug)]
#[command(name = "ellgen", version, about = "Exact elliptic genera and Witten genus from Pontryagin numbers")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Number of u = q^(1/2) coefficients to keep.
    #[arg(long, env = "GENUS_DEFAULT_UORDER", default_value_t = DEFAULT_UORDER as u64, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    uorder: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Twist {
    /// Θ(T)⊗Θ1(T) with coefficients A_k of q^k.
    Theta1,
    /// Θ(T)⊗Θ2(T) with coefficients B_k of q^(k/2).
    Theta2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus of a manifold given by its Pontryagin numbers.
    Genus {
        /// Manifold JSON file.
        #[arg(long)]
        manifold: PathBuf,
        /// ahat, lhat, ell1, ell2 or witten.
        #[arg(long, value_parser = parse_genus)]
        genus: GenusKind,
    },
    /// Expansion of the Witten bundles into symmetric and exterior powers.
    Bundles {
        /// Quarter dimension of the manifold.
        #[arg(long, required_unless_present = "manifold")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Twist::Theta2)]
        twist: Twist,
        /// Also report the twisted index of every coefficient on this manifold
        /// (signature operator for theta1, Dirac operator for theta2).
        #[arg(long)]
        manifold: Option<PathBuf>,
    },
    /// Run one of the identity checks.
    Verify {
        #[arg(long, value_enum)]
        check: Check,
        /// Quarter dimension for the manifold-based checks.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Random inputs per check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point in the upper half plane, e.g. "i", "2i", "0.3+1.1i".
        #[arg(long, default_value = "i")]
        tau: String,
    },
    /// Pontryagin numbers and headline genera of a smooth hypersurface in CP^N.
    Hypersurface {
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        degree: u64,
    },
    /// Poincaré–Sobolev constant C(b) and the radius R = diam/(b·C(b)).
    Sobolev {
        /// Dimension m ≥ 2.
        #[arg(long)]
        m: u32,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        diam: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// A failure mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    CheckFailed,
    Malformed(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::CheckFailed => 1,
            Failure::Malformed(_) => 2,
            Failure::Domain(_) => 3,
        }
    }
}

impl From<ellgen::Error> for Failure {
    fn from(e: ellgen::Error) -> Self {
        match e {
            ellgen::Error::Parse(_) => Failure::Malformed(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

fn parse_genus(s: &str) -> Result<GenusKind, String> {
    s.parse().map_err(|e: ellgen::Error| e.to_string())
}

fn read_manifold(path: &Path) -> Result<Manifold, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    let m = Manifold::from_json(&value).map_err(|e| match e {
        ellgen::Error::Parse(msg) => Failure::Malformed(format!("{}: {msg}", path.display())),
        other => Failure::from(other),
    })?;
    for k in m.missing_numbers() {
        eprintln!("warning: {}: no Pontryagin number {k}; using 0", path.display());
    }
    Ok(m)
}

fn series_out(s: &USeries, format: Format) -> String {
    match format {
        Format::Text => s.to_q_string(),
        Format::Json => s.to_json().to_string(),
    }
}

fn cmd_genus(path: &Path, kind: GenusKind, uorder: usize, format: Format) -> Result<String, Failure> {
    let m = read_manifold(path)?;
    Ok(series_out(&genus(&m, kind, uorder)?, format))
}

fn cmd_bundles(n: Option<usize>, twist: Twist, manifold: Option<&Path>, uorder: usize, format: Format) -> Result<String, Failure> {
    let m = manifold.map(read_manifold).transpose()?;
    let n = match (n, &m) {
        (Some(n), Some(m)) if n != m.n() => {
            return Err(Failure::Domain(format!("--n {n} does not match the manifold's dimension {}", m.dim())));
        }
        (_, Some(m)) => m.n(),
        (Some(n), None) => n,
        (None, None) => return Err(Failure::Malformed("either --n or --manifold is required".into())),
    };
    if n == 0 {
        return Err(Failure::Domain("n must be at least 1".into()));
    }
    // A_k pairs with the signature operator, B_k with the Dirac operator
    let (which, letter, step, index_of): (_, _, _, fn(&Manifold, &_) -> ellgen::Result<_>) = match twist {
        Twist::Theta1 => (WittenTwist::Theta1Twist, "A", 2, signature_index_bundle),
        Twist::Theta2 => (WittenTwist::Theta2Twist, "B", 1, index_bundle),
    };
    let series = expand_witten(which, n, uorder)?;
    let mut rows = Vec::new();
    for u in (0..uorder).step_by(step) {
        let v = series.coeff(u);
        let index = m.as_ref().map(|m| index_of(m, &v)).transpose()?;
        rows.push((format!("{letter}{}", u / step), u, v, index));
    }
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            for (label, _, v, index) in &rows {
                let _ = write!(out, "{label} = {v}");
                if let Some(i) = index {
                    let _ = write!(out, "    index {}", fmt_rat(i));
                }
                out.push('\n');
            }
            out.trim_end().to_string()
        }
        Format::Json => {
            let coefficients: Vec<Value> = rows
                .iter()
                .map(|(label, u, v, index)| {
                    let terms: Vec<Value> = v
                        .terms()
                        .map(|(mono, c)| json!({"sym": mono.sym_powers(), "ext": mono.ext_powers(), "coeff": c.to_string()}))
                        .collect();
                    let mut row = json!({"label": label, "u": u, "bundle": v.to_string(), "rank": v.rank().to_string(), "terms": terms});
                    if let Some(i) = index {
                        row["index"] = Value::String(fmt_rat(i));
                    }
                    row
                })
                .collect();
            let twist = match twist {
                Twist::Theta1 => "theta1",
                Twist::Theta2 => "theta2",
            };
            json!({"twist": twist, "n": n, "uorder": uorder, "coefficients": coefficients}).to_string()
        }
    })
}

fn cmd_hypersurface(ambient: usize, degree: u64, uorder: usize, format: Format) -> Result<String, Failure> {
    let h = Hypersurface::new(ambient, degree)?;
    let m = hypersurface_pont(&h)?;
    let sigma = genus(&m, GenusKind::LHat, 1)?.coeff(0);
    let ahat = genus(&m, GenusKind::AHat, 1)?.coeff(0);
    let ell2 = genus(&m, GenusKind::Ell2, uorder)?;
    Ok(match format {
        Format::Text => {
            let mut out = format!("X({ambient};{degree}), real dimension {}\n", m.dim());
            for (k, v) in m.pontryagin_numbers() {
                let _ = writeln!(out, "p{k} = {}", fmt_rat(v));
            }
            let _ = writeln!(out, "signature = {}", fmt_rat(&sigma));
            let _ = writeln!(out, "ahat = {}", fmt_rat(&ahat));
            let _ = write!(out, "Ell2 = {}", ell2.to_q_string());
            out
        }
        Format::Json => json!({
            "hypersurface": h.to_json(),
            "manifold": m.to_json(),
            "signature": fmt_rat(&sigma),
            "ahat": fmt_rat(&ahat),
            "ell2": ell2.to_json(),
        })
        .to_string(),
    })
}

fn cmd_sobolev(m: u32, b: f64, diam: f64, tol: f64, format: Format) -> Result<String, Failure> {
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(Failure::Domain(format!("diam must be positive and finite, got {diam}")));
    }
    let (c, residual) = sobolev_solve(m, b, tol)?;
    let r = diam / (b * c);
    Ok(match format {
        Format::Text => format!("C(b) = {c:.15e}\nR = {r:.15e}\nresidual = {residual:.3e}"),
        Format::Json => json!({"m": m, "b": b, "diam": diam, "C_b": c, "R": r, "residual": residual}).to_string(),
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    let uorder = cli.uorder as usize;
    match cli.command {
        Command::Genus { manifold, genus } => cmd_genus(&manifold, genus, uorder, cli.format),
        Command::Bundles { n, twist, manifold } => cmd_bundles(n, twist, manifold.as_deref(), uorder, cli.format),
        Command::Verify { check, n, samples, seed, tau } => {
            let report = verify::run(check, n as usize, uorder, samples, seed, &tau)?;
            let text = match cli.format {
                Format::Text => report.text(),
                Format::Json => report.json().to_string(),
            };
            if report.pass {
                Ok(text)
            } else {
                println!("{text}");
                Err(Failure::CheckFailed)
            }
        }
        Command::Hypersurface { ambient, degree } => cmd_hypersurface(ambient, degree, uorder, cli.format),
        Command::Sobolev { m, b, diam, tol } => cmd_sobolev(m, b, diam, tol, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::CheckFailed => eprintln!("check failed"),
                Failure::Malformed(msg) => eprintln!("error: {msg}"),
                Failure::Domain(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
