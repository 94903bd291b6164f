//! `nrep` — dual-cone analysis of fermionic one-body operators.
//!
//! Subcommands: `analyze` (membership + canonical decomposition +
//! cross-checks), `spectrum` (many-body level table), `model` (collective
//! model builders with level diagrams), `state` (occupation measures and
//! classification), `check` (seeded cross-validation suites).
//!
//! Exit codes: 0 success, 1 input or validation error, 2 spectrum is not a
//! dual-cone member (`analyze`), 3 model gap condition violated (`model`).

mod checks;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nrep_core::schema::{self, diagram_report};
use nrep_core::{
    analysis, models, Error, NumericMode, NumericPolicy, Result,
};

#[derive(Parser)]
#[command(name = "nrep", version, about = "Dual-cone analysis of fermionic one-body operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Numeric mode override (file settings used when omitted).
    #[arg(long, global = true, value_enum)]
    numeric: Option<NumericArg>,

    /// Relative comparison tolerance; required with --numeric float.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Seed for every pseudo-random choice (check suites, generic
    /// combinations).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on the number of determinant basis states.
    #[arg(long, global = true, default_value_t = nrep_core::DEFAULT_STATE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum NumericArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Type1,
    Type2,
    Thm74,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Membership,
    Threeway,
    Thm74,
    Lemma31,
}

#[derive(Subcommand)]
enum Command {
    /// Membership test, canonical decomposition, and cross-checks.
    Analyze {
        /// Spectrum file (JSON).
        spectrum: PathBuf,
        /// Particle count; overrides the file's "N".
        #[arg(long)]
        n_particles: Option<usize>,
    },
    /// Many-body level table of a spectrum.
    Spectrum {
        spectrum: PathBuf,
        #[arg(long)]
        n_particles: Option<usize>,
    },
    /// Build a model Hamiltonian and print its level diagram.
    Model {
        kind: ModelKind,
        /// Parameter file (JSON).
        params: PathBuf,
    },
    /// Occupation measures, expectation identities, and factor space of a
    /// state against a spectrum.
    State {
        /// State file (JSON).
        state: PathBuf,
        /// Spectrum file (JSON).
        spectrum: PathBuf,
        #[arg(long)]
        n_particles: Option<usize>,
    },
    /// Run the seeded cross-validation suites.
    Check {
        /// Run a single suite instead of all of them.
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Largest orbital count used by the suites.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

fn policy_override(cli: &Cli) -> Result<Option<NumericPolicy>> {
    match cli.numeric {
        None => Ok(None),
        Some(NumericArg::Rational) => Ok(Some(NumericPolicy::rational())),
        Some(NumericArg::Float) => {
            let tol = cli.tolerance.ok_or(Error::BadTolerance)?;
            Ok(Some(NumericPolicy::float(tol)?))
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn particle_count(flag: Option<usize>, from_file: Option<usize>) -> Result<usize> {
    flag.or(from_file).ok_or_else(|| {
        Error::Malformed("particle count missing: set \"N\" in the file or pass --n-particles".into())
    })
}

fn run(cli: &Cli) -> Result<u8> {
    let policy = policy_override(cli)?;
    let json_output = cli.format == FormatArg::Json;
    match &cli.command {
        Command::Analyze {
            spectrum,
            n_particles,
        } => {
            let input = schema::parse_spectrum(&read_file(spectrum)?, policy)?;
            let n_particles = particle_count(*n_particles, input.n_particles)?;
            let report = analysis::analyze(&input.spectrum, n_particles, cli.budget)?;
            if json_output {
                let value = analysis::analysis_report_json(&report, &input.spectrum);
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                print!("{}", render::analysis_text(&report, &input.spectrum));
            }
            Ok(if report.verdict.member { 0 } else { 2 })
        }
        Command::Spectrum {
            spectrum,
            n_particles,
        } => {
            let input = schema::parse_spectrum(&read_file(spectrum)?, policy)?;
            let n_particles = particle_count(*n_particles, input.n_particles)?;
            let basis = nrep_core::FockBasis::new(input.spectrum.n(), n_particles, cli.budget)?;
            let many_body = nrep_core::full_spectrum(&input.spectrum, &basis)?;
            let mode = input.spectrum.policy().mode();
            if json_output {
                let rows: Vec<_> = many_body
                    .levels()
                    .iter()
                    .map(|l| {
                        json!({
                            "value": schema::scalar_to_json(&l.value, mode),
                            "degeneracy": l.degeneracy,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "n": input.spectrum.n(),
                        "N": n_particles,
                        "states": basis.dimension(),
                        "levels": rows,
                    }))
                    .unwrap()
                );
            } else {
                print!(
                    "{}",
                    render::spectrum_text(&input.spectrum, n_particles, &many_body, cli)?
                );
            }
            Ok(0)
        }
        Command::Model { kind, params } => {
            let text = read_file(params)?;
            let (kind_name, analysis): (&str, models::ModelAnalysis) = match kind {
                ModelKind::Type1 => {
                    let p = schema::parse_type_one(&text, policy)?;
                    ("type1", models::type_one(&p, cli.budget, cli.seed)?)
                }
                ModelKind::Type2 => {
                    let p = schema::parse_type_two(&text, policy)?;
                    ("type2", models::type_two(&p, cli.budget, cli.seed)?)
                }
                ModelKind::Thm74 => {
                    let p = schema::parse_model74(&text, policy)?;
                    let (spectrum, decomposition) = models::build_model(&p)?;
                    let diagram = models::analyze_levels(
                        &spectrum,
                        p.n_particles,
                        &decomposition,
                        cli.budget,
                        cli.seed,
                    )?;
                    (
                        "thm74",
                        models::ModelAnalysis {
                            spectrum,
                            decomposition,
                            diagram,
                        },
                    )
                }
            };
            let mode = analysis.spectrum.policy().mode();
            if json_output {
                let value = json!({
                    "kind": kind_name,
                    "n": analysis.spectrum.n(),
                    "N": analysis.diagram.n_particles,
                    "eigenvalues": analysis
                        .spectrum
                        .values_in_input_order()
                        .iter()
                        .map(|v| schema::scalar_to_json(v, mode))
                        .collect::<Vec<_>>(),
                    "decomposition": schema::decomposition_report(
                        &analysis.decomposition,
                        true,
                        mode
                    ),
                    "diagram": diagram_report(&analysis.diagram, mode),
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                print!("{}", render::model_text(kind_name, &analysis));
            }
            Ok(0)
        }
        Command::State {
            state,
            spectrum,
            n_particles,
        } => {
            let spectrum_input = schema::parse_spectrum(&read_file(spectrum)?, policy.clone())?;
            let state = schema::parse_state(&read_file(state)?, policy)?;
            let n_particles = particle_count(*n_particles, spectrum_input.n_particles)
                .unwrap_or(state.n_particles());
            if n_particles != state.n_particles() {
                return Err(Error::DimensionMismatch(format!(
                    "state has {} particles but N = {n_particles} requested",
                    state.n_particles()
                )));
            }
            if state.n_orbitals() != spectrum_input.spectrum.n() {
                return Err(Error::DimensionMismatch(format!(
                    "state over {} orbitals but spectrum over {}",
                    state.n_orbitals(),
                    spectrum_input.spectrum.n()
                )));
            }
            let report =
                render::state_report(&state, &spectrum_input.spectrum, n_particles, cli.budget)?;
            if json_output {
                println!("{}", serde_json::to_string_pretty(&report.json).unwrap());
            } else {
                print!("{}", report.text);
            }
            Ok(0)
        }
        Command::Check {
            suite,
            trials,
            max_n,
        } => {
            let selected = match suite {
                None => checks::Suite::all(),
                Some(SuiteArg::Membership) => vec![checks::Suite::Membership],
                Some(SuiteArg::Threeway) => vec![checks::Suite::ThreeWay],
                Some(SuiteArg::Thm74) => vec![checks::Suite::ModelKernel],
                Some(SuiteArg::Lemma31) => vec![checks::Suite::Partition],
            };
            let outcome = checks::run_suites(&selected, *trials, *max_n, cli.seed, cli.budget)?;
            print!("{}", outcome.report);
            Ok(if outcome.all_passed { 0 } else { 1 })
        }
    }
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::GapViolation(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}

// Used by render for mode-aware scalar formatting.
pub(crate) fn format_scalar(value: &nrep_core::Scalar, mode: NumericMode) -> String {
    match mode {
        NumericMode::Rational => value.to_string(),
        NumericMode::Float => format!("{}", value.to_f64()),
    }
}
