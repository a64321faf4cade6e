//! `spectraltie`: eigenvalues of the tie-shaped spectra by three routes
//! (closed-form asymptotics, characteristic-determinant roots, matrix
//! oracle), limit-curve tables, counting reports, and cross-validation.

mod emit;
mod rows;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectraltie_core::{theta_floor, ProblemParams};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spectraltie", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table over a window, by any of the three routes
    Spectrum(SpectrumArgs),
    /// The two limit curves bracketing a tie segment
    Curves(CurvesArgs),
    /// Predicted vs actual eigenvalue counts per tie component
    Count(CountArgs),
    /// Cross-validate the routes; exit 0 only when every tolerance holds
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Model,
    Os,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    Det,
    Asym,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    All,
    Ray,
    Segment,
}

#[derive(Args)]
struct ParamArgs {
    /// Problem family
    #[arg(long, value_enum)]
    problem: Problem,
    /// Small parameter; excludes --reynolds/--alpha
    #[arg(long, conflicts_with_all = ["reynolds", "alpha"])]
    epsilon: Option<f64>,
    /// Reynolds number (with --alpha; epsilon = 1/(alpha R))
    #[arg(long, requires = "alpha")]
    reynolds: Option<f64>,
    /// Wavenumber (with --reynolds)
    #[arg(long, requires = "reynolds")]
    alpha: Option<f64>,
    /// Node-cutoff exponent
    #[arg(long, default_value_t = 0.3)]
    theta: f64,
    /// Oracle grid size / determinant scan resolution / curve sample count
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = -1.1, allow_negative_numbers = true)]
    re_min: f64,
    #[arg(long, default_value_t = 1.1, allow_negative_numbers = true)]
    re_max: f64,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    im_min: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    im_max: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CurvesArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Regime::All)]
    regime: Regime,
}

/// A usage error exits 2, a numerical failure 3; tolerance verdicts use the
/// command's own exit value.
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }
}

fn build_params(a: &ParamArgs) -> Result<ProblemParams, CliError> {
    if !(a.theta > theta_floor()) {
        return Err(CliError::usage(format!(
            "--theta must exceed {:.6}, got {}",
            theta_floor(),
            a.theta
        )));
    }
    match (a.epsilon, a.reynolds, a.alpha) {
        (Some(eps), None, None) => {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(CliError::usage(format!("--epsilon must be in (0, 1), got {eps}")));
            }
            Ok(ProblemParams::new(eps, 1.0, a.theta))
        }
        (None, Some(r), Some(al)) => {
            if !(r > 0.0 && al > 0.0 && al * r > 1.0) {
                return Err(CliError::usage(format!(
                    "--reynolds {r} with --alpha {al} does not give a small parameter"
                )));
            }
            Ok(ProblemParams::from_reynolds(al, r, a.theta))
        }
        _ => Err(CliError::usage(
            "supply exactly one of --epsilon or the pair --reynolds/--alpha",
        )),
    }
}

fn check_window(w: &WindowArgs) -> Result<(), CliError> {
    if w.re_min >= w.re_max || w.im_min >= w.im_max {
        return Err(CliError::usage(format!(
            "empty window: re [{}, {}], im [{}, {}]",
            w.re_min, w.re_max, w.im_min, w.im_max
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(s) = std::env::var("SPECTRALTIE_THREADS") {
        if let Ok(k) = s.parse::<usize>() {
            if k >= 1 {
                rayon::ThreadPoolBuilder::new().num_threads(k).build_global().ok();
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Curves(a) => cmd_curves(a),
        Command::Count(a) => cmd_count(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<u8, CliError> {
    let p = build_params(&a.params)?;
    check_window(&a.window)?;
    let window = ((a.window.re_min, a.window.re_max), (a.window.im_min, a.window.im_max));
    let mut all = Vec::new();
    let mut failures = Vec::new();
    let methods: &[MethodArg] = match a.method {
        MethodArg::All => &[MethodArg::Asym, MethodArg::Det, MethodArg::Oracle],
        MethodArg::Asym => &[MethodArg::Asym],
        MethodArg::Det => &[MethodArg::Det],
        MethodArg::Oracle => &[MethodArg::Oracle],
    };
    for m in methods {
        let got = match (a.params.problem, m) {
            (Problem::Model, MethodArg::Asym) => Ok(rows::model_asym(&p, window)),
            (Problem::Model, MethodArg::Det) => {
                Ok(rows::model_det_roots(&p, window, a.params.n.unwrap_or(320)))
            }
            (Problem::Model, MethodArg::Oracle) => {
                rows::model_oracle(&p, window, a.params.n.unwrap_or(2000))
            }
            (Problem::Os, MethodArg::Asym) => Ok(rows::os_asym(&p, window)),
            (Problem::Os, MethodArg::Det) => {
                Ok(rows::os_det_roots(&p, window, a.params.n.unwrap_or(256)))
            }
            (Problem::Os, MethodArg::Oracle) => {
                rows::os_oracle(&p, window, a.params.n.unwrap_or(256))
            }
            (_, MethodArg::All) => unreachable!(),
        };
        match got {
            Ok(mut rows) => all.append(&mut rows),
            Err(e) => failures.push(e),
        }
    }
    rows::sort_eigen_rows(&mut all);
    let text = match a.out.format {
        Format::Csv => emit::eigen_csv(&all),
        Format::Json => emit::json_output(&p, &a.params, &all, &[]),
        Format::Svg => emit::eigen_svg(&all, window),
    };
    emit::write_out(&a.out.output, &text)?;
    if failures.is_empty() {
        Ok(0)
    } else {
        for f in &failures {
            eprintln!("failed: {f}");
        }
        Err(CliError::Numerical(format!("{} route(s) failed; partial output written", failures.len())))
    }
}

fn cmd_curves(a: CurvesArgs) -> Result<u8, CliError> {
    if a.params.problem == Problem::Model {
        return Err(CliError::usage("limit curves belong to the os problem; pass --problem os"));
    }
    let p = build_params(&a.params)?;
    let samples = rows::curve_rows(&p, a.params.n.unwrap_or(200));
    if samples.is_empty() {
        eprintln!("warning: the admissible window is empty at epsilon {}", p.eps);
    }
    let text = match a.out.format {
        Format::Csv => emit::curve_csv(&samples),
        Format::Json => emit::json_output(&p, &a.params, &[], &samples),
        Format::Svg => emit::curve_svg(&samples),
    };
    emit::write_out(&a.out.output, &text)?;
    Ok(0)
}

fn cmd_count(a: CountArgs) -> Result<u8, CliError> {
    if a.params.problem == Problem::Os {
        return Err(CliError::usage(
            "the counting report is defined on the model problem; pass --problem model",
        ));
    }
    let p = build_params(&a.params)?;
    let report = rows::count_report(&p, a.params.n.unwrap_or(320));
    emit::write_out(&a.out.output, &report)?;
    if a.out.output.is_some() {
        print!("{report}");
    }
    Ok(0)
}

fn cmd_compare(a: CompareArgs) -> Result<u8, CliError> {
    let p = build_params(&a.params)?;
    let n = a.params.n.unwrap_or(match a.params.problem {
        Problem::Model => 2000,
        Problem::Os => 256,
    });
    let (report, pass) = match a.params.problem {
        Problem::Model => rows::compare_model(&p, a.regime, n),
        Problem::Os => rows::compare_os(&p, a.regime),
    };
    print!("{report}");
    Ok(if pass { 0 } else { 1 })
}
