//! Command-line front end: graph enumeration, operator construction and the
//! exact and numerical verification suites, with deterministic seeds and
//! machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (report still written),
//! 2 usage or configuration error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::ToPrimitive;

use g2v_core::graphs::{census, enumerate_graphs};
use g2v_core::modular::{
    evaluate_psi, run_check, CheckConfig, CheckKind, ModelGeometry, SiegelPoint,
};
use g2v_core::ward::{
    build_operator, render_operator, verify_schwarzian, verify_symmetry, verify_ward,
    RenderFormat,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "g2v", version, about = "Genus-two correlation operator toolkit")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Sexpr,
    Latex,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List every graph of one order with its cycle/chain decomposition.
    Graphs {
        #[arg(long)]
        n: usize,
    },
    /// Tabulate graph counts by cycle count and chain-edge count.
    Census {
        #[arg(long)]
        n: usize,
    },
    /// Print the order-n operator in canonical form.
    Op {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Sexpr)]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Evaluate the (2,-1)-form on a seeded random model at fixed points.
    Psi {
        #[arg(long, env = "G2V_SEED", default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Exact agreement of the recursion rebuild with graph enumeration.
    Ward {
        #[arg(long)]
        n: usize,
    },
    /// Exact invariance under label transpositions.
    Symmetry {
        #[arg(long)]
        n: usize,
    },
    /// Exact connection-shift law at every insertion point.
    Schwarzian {
        #[arg(long)]
        n: usize,
    },
    /// Randomized numerical checks of the period transformation laws.
    Modular {
        /// Check name; all checks when omitted.
        #[arg(long, env = "G2V_CHECK")]
        check: Option<String>,
        #[arg(long, env = "G2V_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, env = "G2V_TRIALS")]
        trials: Option<usize>,
        #[arg(long, env = "G2V_TOL")]
        tol: Option<f64>,
        #[arg(long = "word-length", env = "G2V_WORD_LENGTH", default_value_t = 8)]
        word_length: usize,
        /// Central charge as an exact rational, e.g. "-22/5"; overrides the
        /// default {0, 2, -22/5} sweep of the covariance checks.
        #[arg(long, env = "G2V_C")]
        c: Option<String>,
    },
}

/// Outcome of a subcommand: the rendered report and whether every check in
/// it passed.
struct Run {
    output: String,
    all_pass: bool,
}

fn json_line(value: &impl serde::Serialize) -> String {
    serde_json::to_string(value).expect("reports are serializable")
}

fn run_graphs(n: usize) -> Result<Run> {
    let mut out = String::new();
    for g in enumerate_graphs(n)? {
        let d = g.classify();
        let line = serde_json::json!({
            "n": g.n,
            "edges": g.edges,
            "cycles": d.cycles,
            "chains": d.chains,
        });
        writeln!(out, "{line}")?;
    }
    Ok(Run { output: out, all_pass: true })
}

fn run_census(n: usize) -> Result<Run> {
    let c = census(n)?;
    let rows: Vec<_> = c
        .table
        .iter()
        .map(|(&(cycles, chains), &count)| {
            serde_json::json!({
                "cycles": cycles,
                "chains": chains,
                "count": count,
            })
        })
        .collect();
    let line = serde_json::json!({ "n": n, "total": c.total(), "table": rows });
    Ok(Run { output: format!("{line}\n"), all_pass: true })
}

fn run_op(n: usize, format: Format) -> Result<Run> {
    let op = build_operator(n)?;
    let rendered = render_operator(
        &op,
        match format {
            Format::Sexpr => RenderFormat::Sexpr,
            Format::Latex => RenderFormat::Latex,
            Format::Json => RenderFormat::Json,
        },
    );
    Ok(Run { output: format!("{rendered}\n"), all_pass: true })
}

fn run_ward(n: usize) -> Result<Run> {
    let mut out = String::new();
    let mut all_pass = true;
    for report in verify_ward(n)? {
        all_pass &= report.pass;
        writeln!(out, "{}", json_line(&report))?;
    }
    Ok(Run { output: out, all_pass })
}

fn run_symmetry(n: usize) -> Result<Run> {
    let report = verify_symmetry(n)?;
    Ok(Run { output: format!("{}\n", json_line(&report)), all_pass: report.pass })
}

fn run_schwarzian(n: usize) -> Result<Run> {
    let mut out = String::new();
    let mut all_pass = true;
    for i in 1..=n as u8 {
        let report = verify_schwarzian(n, i)?;
        all_pass &= report.pass;
        writeln!(out, "{}", json_line(&report))?;
    }
    Ok(Run { output: out, all_pass })
}

fn parse_rational(text: &str) -> Result<f64> {
    let q = BigRational::from_str(text)
        .with_context(|| format!("central charge {text:?} is not a rational number"))?;
    q.to_f64()
        .with_context(|| format!("central charge {text:?} out of range"))
}

#[allow(clippy::too_many_arguments)]
fn run_modular(
    check: Option<String>,
    seed: u64,
    trials: Option<usize>,
    tol: Option<f64>,
    word_length: usize,
    c: Option<String>,
) -> Result<Run> {
    if let Some(t) = tol {
        if t <= 0.0 {
            bail!("tolerance must be positive");
        }
    }
    let c_values = match c {
        Some(text) => vec![parse_rational(&text)?],
        None => vec![0.0, 2.0, -22.0 / 5.0],
    };
    let kinds: Vec<CheckKind> = match check.as_deref() {
        None | Some("all") => CheckKind::ALL.to_vec(),
        Some(name) => match CheckKind::from_name(name) {
            Some(kind) => vec![kind],
            None => {
                let known: Vec<_> = CheckKind::ALL.iter().map(|k| k.name()).collect();
                bail!("unknown check {name:?}; known checks: {}", known.join(", "));
            }
        },
    };
    let mut out = String::new();
    let mut all_pass = true;
    for kind in kinds {
        let mut cfg = CheckConfig::for_kind(kind);
        cfg.seed = seed;
        cfg.word_length = word_length;
        cfg.c_values = c_values.clone();
        if let Some(t) = trials {
            cfg.trials = t;
        }
        if let Some(t) = tol {
            cfg.tolerance = t;
        }
        let report = run_check(kind, &cfg);
        all_pass &= report.pass;
        writeln!(out, "{}", json_line(&report))?;
    }
    Ok(Run { output: out, all_pass })
}

fn run_psi(seed: u64) -> Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let geom = ModelGeometry::random(&mut rng, true);
    let omega = SiegelPoint::random(&mut rng);
    let x = num::complex::Complex64::new(0.9, 0.2);
    let y = num::complex::Complex64::new(-0.6, 0.5);
    let value = evaluate_psi(&geom, &omega, x, y)?;
    let line = serde_json::json!({
        "check": "psi_value",
        "seed": seed,
        "omega": omega,
        "x": [x.re, x.im],
        "y": [y.re, y.im],
        "value": [value.re, value.im],
    });
    Ok(Run { output: format!("{line}\n"), all_pass: true })
}

fn dispatch(cli: Cli) -> Result<Run> {
    let run = match cli.command {
        Command::Graphs { n } => run_graphs(n)?,
        Command::Census { n } => run_census(n)?,
        Command::Op { n, format } => run_op(n, format)?,
        Command::Verify { suite } => match suite {
            Suite::Ward { n } => run_ward(n)?,
            Suite::Symmetry { n } => run_symmetry(n)?,
            Suite::Schwarzian { n } => run_schwarzian(n)?,
            Suite::Modular {
                check,
                seed,
                trials,
                tol,
                word_length,
                c,
            } => run_modular(check, seed, trials, tol, word_length, c)?,
        },
        Command::Psi { seed } => run_psi(seed)?,
    };
    if let Some(path) = cli.out {
        std::fs::write(&path, &run.output)
            .with_context(|| format!("writing report to {}", path.display()))?;
        Ok(Run { output: String::new(), all_pass: run.all_pass })
    } else {
        Ok(run)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(run) => {
            print!("{}", run.output);
            if run.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
