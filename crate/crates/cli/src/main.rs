//! `qconc`: evaluate states, bounds and figure data from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse or validation error,
//! 3 self-test failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qconcurrence::convex_roof::{roof_estimate, RoofOptions};
use qconcurrence::criteria::classify;
use qconcurrence::isotropic::{envelope, fig1_csv, fig1_data, DEFAULT_GRID};
use qconcurrence::monotone::{concurrence_pure, q_concurrence_pure};
use qconcurrence::output::{csv, fmt_sig, round_json};
use qconcurrence::selftest::{self, Suite};
use qconcurrence::states::{State, StateFile};
use qconcurrence::superposition::{figure_csv, figure_data, report, Figure, SuperpositionInput};
use qconcurrence::{Execution, QExponent, QcError, C64};

const DIGITS: usize = 9;

#[derive(Parser, Debug)]
#[command(
    name = "qconc",
    version,
    about = "q-concurrence of bipartite quantum states"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Exponent q of the monotone.
    #[arg(long, global = true, default_value_t = 2.0)]
    q: f64,
    /// Tolerance for verdicts and property checks.
    #[arg(long, global = true, env = "QC_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Output format; defaults to json for reports and csv for figure data.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma1,
    Criteria,
    Isotropic,
    Superposition,
    Roof,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-concurrence, Schmidt coefficients and concurrence of a pure state.
    EvalPure { state: PathBuf },
    /// PPT and realignment norms, verdicts and the lower bound.
    Bound { state: PathBuf },
    /// Convex-roof upper estimate for a mixed state.
    Roof {
        state: PathBuf,
        /// Decomposition size; defaults to twice the rank.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
    },
    /// Exact isotropic-state curve (convex envelope) for dimension d.
    Isotropic {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Data behind figure 1, 2, 3 or 4.
    Fig {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        n: u8,
        /// Grid points per axis.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Superposition report for alpha |phi> + beta |psi>.
    Superpose {
        phi: PathBuf,
        psi: PathBuf,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        alpha: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        beta: C64,
    },
    /// Run the randomized property suites.
    Selftest {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re` or `re,im`, got `{s}`")),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(z)
}

enum Failure {
    Invalid(String),
}

impl From<QcError> for Failure {
    fn from(e: QcError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct Rendered {
    text: String,
    suite_failed: bool,
}

fn load(path: &Path) -> Result<State, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    StateFile::from_json(&text)
        .and_then(StateFile::into_state)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_pure(path: &Path) -> Result<qconcurrence::PureState, Failure> {
    match load(path)? {
        State::Pure(p) => Ok(p),
        State::Mixed(_) => Err(Failure::Invalid(format!(
            "{}: expected a pure state (\"kind\": \"pure\")",
            path.display()
        ))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    round_json(&mut v, DIGITS);
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n
            .as_f64()
            .map(|x| fmt_sig(x, DIGITS))
            .unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// One header row and one value row from a flat JSON object.
fn object_csv<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let map = v.as_object().expect("reports are objects");
    let header = map.keys().cloned().collect::<Vec<_>>().join(",");
    csv(&header, [map.values().map(cell).collect()])
}

fn render<T: Serialize>(value: &T, format: Format) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Csv => object_csv(value),
    }
}

fn run(cli: Cli) -> Result<Rendered, Failure> {
    let g = &cli.global;
    let q = QExponent::new(g.q)?;
    if !g.tol.is_finite() || g.tol < 0.0 {
        return Err(Failure::Invalid(format!(
            "tolerance must be a finite nonnegative number, got {}",
            g.tol
        )));
    }
    let exec = Execution::default();
    let report_format = g.format.unwrap_or(Format::Json);
    let data_format = g.format.unwrap_or(Format::Csv);
    let text = match &cli.command {
        Command::EvalPure { state } => {
            let psi = load_pure(state)?;
            let value = json!({
                "shape": [psi.shape().dim_a(), psi.shape().dim_b()],
                "q": q.value(),
                "c_q": q_concurrence_pure(&psi, q),
                "schmidt_coefficients": psi.schmidt_coefficients(),
                "concurrence": concurrence_pure(&psi),
            });
            render(&value, report_format)
        }
        Command::Bound { state } => {
            let rho = load(state)?.into_density();
            let rep = classify(&rho, q, g.tol)?;
            render(&rep, report_format)
        }
        Command::Roof {
            state,
            k,
            iterations,
            restarts,
        } => {
            let rho = load(state)?.into_density();
            let opts = RoofOptions {
                decomposition_size: *k,
                iterations: *iterations,
                restarts: *restarts,
                seed: g.seed,
            };
            let est = roof_estimate(&rho, q, &opts, exec)?;
            render(&est, report_format)
        }
        Command::Isotropic { d, grid } => {
            let curve = envelope(q, *d, *grid, exec)?;
            match data_format {
                Format::Json => to_json(&curve),
                Format::Csv => curve.to_csv(DIGITS),
            }
        }
        Command::Fig { n, resolution } => fig(*n, *resolution, data_format, exec)?,
        Command::Superpose {
            phi,
            psi,
            alpha,
            beta,
        } => {
            let (alpha, beta) = normalize_coefficients(*alpha, *beta)?;
            let input = SuperpositionInput::new(load_pure(phi)?, load_pure(psi)?, alpha, beta)?;
            render(&report(&input, q, g.tol)?, report_format)
        }
        Command::Selftest { suite } => {
            let suites: Vec<Suite> = match suite {
                SuiteArg::Lemma1 => vec![Suite::Lemma1],
                SuiteArg::Criteria => vec![Suite::Criteria],
                SuiteArg::Isotropic => vec![Suite::Isotropic],
                SuiteArg::Superposition => vec![Suite::Superposition],
                SuiteArg::Roof => vec![Suite::Roof],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let results = suites
                .iter()
                .map(|&s| selftest::run(s, g.seed, g.tol, exec))
                .collect::<Result<Vec<_>, _>>()?;
            let failed = results.iter().any(|r| !r.passed());
            let text = match report_format {
                Format::Json => to_json(&results),
                Format::Csv => csv(
                    "suite,checked,failures",
                    results.iter().map(|r| {
                        vec![
                            r.name.clone(),
                            r.checked.to_string(),
                            r.failures.len().to_string(),
                        ]
                    }),
                ),
            };
            return Ok(Rendered {
                text,
                suite_failed: failed,
            });
        }
    };
    Ok(Rendered {
        text,
        suite_failed: false,
    })
}

fn fig(
    n: u8,
    resolution: Option<usize>,
    format: Format,
    exec: Execution,
) -> Result<String, Failure> {
    if n == 1 {
        let rows = fig1_data(3..=10, resolution.unwrap_or(101), exec)?;
        return Ok(match format {
            Format::Csv => fig1_csv(&rows),
            Format::Json => to_json(&rows),
        });
    }
    let figure = match n {
        2 => Figure::BiOrthogonal,
        3 => Figure::OneSided,
        _ => Figure::BoundSweep,
    };
    let rows = figure_data(figure, resolution.unwrap_or(41), exec)?;
    Ok(match format {
        Format::Csv => figure_csv(figure, &rows, DIGITS),
        Format::Json => to_json(&rows),
    })
}

/// Accepts `|alpha|^2 + |beta|^2` within `1e-6` of one, rescaling with a
/// warning when it is off by more than `1e-9`.
fn normalize_coefficients(alpha: C64, beta: C64) -> Result<(C64, C64), Failure> {
    let total = alpha.norm_sqr() + beta.norm_sqr();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Failure::Invalid(format!(
            "|alpha|^2 + |beta|^2 = {total}, must be 1 within 1e-6"
        )));
    }
    if (total - 1.0).abs() > 1e-9 {
        eprintln!("warning: |alpha|^2 + |beta|^2 = {total}; renormalizing");
    }
    let s = total.sqrt();
    Ok((alpha / s, beta / s))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(rendered) => {
            let written = match &output {
                Some(path) => {
                    fs::write(path, &rendered.text).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    print!("{}", rendered.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if rendered.suite_failed {
                eprintln!("error: self-test failures");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
