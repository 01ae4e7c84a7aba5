//! `qsc`: Fisher-Shannon complexity over rotated quadratures from the command line.
//!
//! Exit codes: 0 success, 1 reproduction or selftest breach, 2 usage or state-literal error,
//! 3 numerical failure, 4 I/O failure.

mod output;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsc_core::catalog::{
    box_cfs_momentum, box_cfs_position, box_state, BoxSpec, KLowerLimit, KQuad, DEFAULT_BOX_NORM_TOL,
    DEFAULT_BOX_TRUNCATION,
};
use qsc_core::frft::selftest;
use qsc_core::literal::{parse_literal, StateLiteral};
use qsc_core::reference::{reproduction_ledger, ReferenceRow, Tolerance, EIGENSTATE_TABLE};
use qsc_core::theta::{analyze_model, global_fs_model, min_fs_model, sweep_model};
use qsc_core::{FockEvaluator, FockState, Numerics, QuadratureModel};
use serde::Serialize;

use crate::output::{fmt_g, sweep_csv, sweep_svg};

#[derive(Parser)]
#[command(name = "qsc", version, about = "Fisher-Shannon complexity of 1D quantum states over rotated quadratures")]
struct Cli {
    #[command(flatten)]
    numerics: NumericsArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct NumericsArgs {
    /// Samples per density grid.
    #[arg(long, global = true, default_value_t = 4096)]
    grid_points: usize,
    /// Decay units added beyond the outermost turning point.
    #[arg(long, global = true, default_value_t = 6.0)]
    grid_margin: f64,
    /// Relative density below which the Fisher integrand uses the node limit.
    #[arg(long, global = true, default_value_t = 1e-13)]
    node_eps: f64,
    /// Default number of angles in a sweep.
    #[arg(long, global = true, default_value_t = 64)]
    theta_samples: usize,
    /// Relative change that ends lattice doubling for the global measure.
    #[arg(long, global = true, default_value_t = 1e-5)]
    gfs_rel_tol: f64,
    /// Bracket width that ends the minimum search.
    #[arg(long, global = true, default_value_t = 1e-6)]
    mfs_theta_tol: f64,
}

impl NumericsArgs {
    fn to_numerics(&self) -> Numerics {
        Numerics {
            grid_points: self.grid_points,
            grid_margin: self.grid_margin,
            node_eps: self.node_eps,
            theta_samples: self.theta_samples,
            gfs_rel_tol: self.gfs_rel_tol,
            mfs_theta_tol: self.mfs_theta_tol,
            ..Numerics::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// All functionals at one angle, as JSON.
    Measure {
        state: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Functionals on the lattice k pi / n, as CSV.
    Sweep {
        state: String,
        /// Number of angles (defaults to --theta-samples).
        #[arg(long)]
        n_theta: Option<usize>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a polyline plot of C_FS against theta.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Angle-averaged complexity, as JSON.
    Gfs { state: String },
    /// Minimum complexity over angles and its location, as JSON.
    Mfs { state: String },
    /// Complexity of the first ten oscillator eigenstates.
    Table1,
    /// Particle-in-a-box states against the closed forms.
    Box {
        /// Largest quantum number.
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Oscillator truncation level.
        #[arg(long, default_value_t = DEFAULT_BOX_TRUNCATION)]
        truncation: usize,
    },
    /// Every published value against the computed one.
    Reproduce {
        #[arg(long)]
        json: bool,
    },
    /// Kernel-integral rotation against the Fock phase rule on seeded random states.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Numerics(qsc_core::Error),
    Io { path: String, source: io::Error },
    Breach(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Numerics(e) => write!(f, "{e}"),
            Self::Io { path, source } => write!(f, "{path}: {source}"),
            Self::Breach(m) => write!(f, "{m}"),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Breach(_) => 1,
            Self::Usage(_) => 2,
            Self::Numerics(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

impl From<qsc_core::Error> for Failure {
    fn from(e: qsc_core::Error) -> Self {
        match e {
            qsc_core::Error::Parse { .. } => Self::Usage(e.to_string()),
            other => Self::Numerics(other),
        }
    }
}

type Outcome = Result<(), Failure>;

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|source| Failure::Io { path: path.display().to_string(), source })
}

fn print(text: &str) -> Outcome {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| Failure::Io { path: "<stdout>".into(), source })
}

fn json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    print(&format!("{text}\n"))
}

/// Evaluator for a state literal. Truncated expansions (box, squeezed vacuum) report
/// their tail weight on stderr; explicit amplitudes are taken as complete.
fn load(literal: &str, numerics: &Numerics) -> Result<Box<dyn QuadratureModel>, Failure> {
    let parsed: StateLiteral = parse_literal(literal)?;
    if matches!(parsed, StateLiteral::Box(_) | StateLiteral::Gaussian { .. }) {
        if let Some(w) = parsed.fock_state()?.and_then(|s| s.truncation_warning()) {
            eprintln!("warning: {w}");
        }
    }
    Ok(parsed.model(numerics)?)
}

#[derive(Serialize)]
struct MeasureOut {
    theta: f64,
    fisher: f64,
    entropy: f64,
    entropy_power: f64,
    cfs: f64,
    lmc: Option<f64>,
    cr: Option<f64>,
    /// Marks `lmc` and `cr` as measures beyond the Fisher-Shannon set.
    extension_measures_flag: &'static str,
}

fn measure(literal: &str, theta: f64, numerics: &Numerics) -> Outcome {
    let model = load(literal, numerics)?;
    let r = model.report(theta)?;
    if r.edge_dominated {
        eprintln!("warning: density is edge-dominated on this grid; derivative functionals are resolution-limited");
    }
    json(&MeasureOut {
        theta: r.theta,
        fisher: r.fisher,
        entropy: r.entropy,
        entropy_power: r.entropy_power,
        cfs: r.cfs,
        lmc: r.lmc,
        cr: r.cr,
        extension_measures_flag: "extension",
    })
}

fn sweep(literal: &str, n_theta: usize, out: Option<&Path>, svg: Option<&Path>, numerics: &Numerics) -> Outcome {
    let model = load(literal, numerics)?;
    let reports = sweep_model(model.as_ref(), n_theta)?;
    let csv = sweep_csv(&reports);
    match out {
        Some(path) => write_file(path, &csv)?,
        None => print(&csv)?,
    }
    if let Some(path) = svg {
        write_file(path, &sweep_svg(&reports, literal))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GfsOut {
    gfs: f64,
    converged: bool,
    resolution: usize,
}

fn gfs(literal: &str, numerics: &Numerics) -> Outcome {
    let model = load(literal, numerics)?;
    let g = global_fs_model(model.as_ref(), numerics)?;
    if !g.converged {
        eprintln!("warning: global measure did not settle within {} angles", g.resolution);
    }
    json(&GfsOut { gfs: g.value, converged: g.converged, resolution: g.resolution })
}

#[derive(Serialize)]
struct MfsOut {
    mfs: f64,
    theta: f64,
}

fn mfs(literal: &str, numerics: &Numerics) -> Outcome {
    let model = load(literal, numerics)?;
    let m = min_fs_model(model.as_ref(), numerics)?;
    json(&MfsOut { mfs: m.value, theta: m.theta })
}

fn table1(numerics: &Numerics) -> Outcome {
    let mut text = String::from("state   C_FS computed   published\n");
    for n in 1..=10 {
        let r = FockEvaluator::new(&FockState::number(n), numerics)?.report(0.0)?;
        let label = format!("|{n}>");
        text.push_str(&format!("{label:<7} {:<15} {}\n", fmt_g(r.cfs, 8), fmt_g(EIGENSTATE_TABLE[n - 1], 3)));
    }
    print(&text)
}

fn box_report(n_max: usize, truncation: usize, numerics: &Numerics) -> Outcome {
    if n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let printed = KQuad { lower: KLowerLimit::AsPrinted, ..KQuad::default() };
    let mut text = String::from(
        "n  pos pipeline  pos formula   mom pipeline  mom formula   mom formula (K as typeset)  GFS        MFS\n",
    );
    for n in 1..=n_max {
        let state = box_state(BoxSpec::new(n, truncation)?, DEFAULT_BOX_NORM_TOL)?;
        let eval = FockEvaluator::new(&state, numerics)?;
        let a = analyze_model(&eval, numerics)?;
        text.push_str(&format!(
            "{n:<2} {:<13} {:<13} {:<13} {:<13} {:<27} {:<10} {}\n",
            fmt_g(eval.report(0.0)?.cfs, 8),
            fmt_g(box_cfs_position(n), 8),
            fmt_g(eval.report(FRAC_PI_2)?.cfs, 8),
            fmt_g(box_cfs_momentum(n, &KQuad::default())?, 8),
            fmt_g(box_cfs_momentum(n, &printed)?, 8),
            fmt_g(a.gfs, 6),
            fmt_g(a.mfs, 6),
        ));
    }
    text.push_str(
        "K(n) uses the lower limit -pi n / 2 (p = 0); the typeset +pi n / 2 column is shown for comparison.\n",
    );
    print(&text)
}

fn tolerance_text(t: &Tolerance) -> String {
    match *t {
        Tolerance::Absolute(v) => format!("abs {}", fmt_g(v, 3)),
        Tolerance::Relative(v) => format!("rel {}", fmt_g(v, 3)),
    }
}

fn reproduce(as_json: bool, numerics: &Numerics) -> Outcome {
    let rows: Vec<ReferenceRow> = reproduction_ledger(numerics)?;
    if as_json {
        json(&rows)?;
    } else {
        let mut text = format!(
            "{:<28} {:>12} {:>14} {:>10}  {:<10} {}\n",
            "quantity", "published", "computed", "|rel d|", "tolerance", "status"
        );
        for r in &rows {
            text.push_str(&format!(
                "{:<28} {:>12} {:>14} {:>10}  {:<10} {}\n",
                r.label,
                fmt_g(r.reference, 8),
                fmt_g(r.computed, 8),
                format!("{:.2e}", r.rel_delta),
                tolerance_text(&r.tolerance),
                if r.pass { "ok" } else { "FAIL" }
            ));
        }
        print(&text)?;
    }
    let failing: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.label.as_str()).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Breach(format!("{} of {} rows outside tolerance: {}", failing.len(), rows.len(), failing.join("; "))))
    }
}

fn run_selftest(seed: u64) -> Outcome {
    let report = selftest(seed)?;
    print(&format!(
        "seed {seed}: {} cases, max density L1 {:.3e} (tol 1e-5), max norm drift {:.3e} (tol 1e-6), composition L1 {:.3e} (tol 1e-4)\n",
        report.cases.len(),
        report.max_l1,
        report.max_norm_drift,
        report.composition_l1
    ))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Breach("kernel route disagrees with the phase rule".into()))
    }
}

fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var("QSC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("QSC_THREADS must be a non-negative integer, got `{raw}`")))?;
    if threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    let numerics = cli.numerics.to_numerics();
    match cli.command {
        Command::Measure { state, theta } => measure(&state, theta, &numerics),
        Command::Sweep { state, n_theta, out, svg } => sweep(
            &state,
            n_theta.unwrap_or(numerics.theta_samples),
            out.as_deref(),
            svg.as_deref(),
            &numerics,
        ),
        Command::Gfs { state } => gfs(&state, &numerics),
        Command::Mfs { state } => mfs(&state, &numerics),
        Command::Table1 => table1(&numerics),
        Command::Box { n_max, truncation } => box_report(n_max, truncation, &numerics),
        Command::Reproduce { json } => reproduce(json, &numerics),
        Command::Selftest { seed } => run_selftest(seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
