//! `qperc` command-line interface.
//!
//! Exit codes: 0 success, 1 usage, 2 validation or consistency failure,
//! 3 numerical failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::baselines::{iterative_quantum_train, IterativeConfig, WeightInit};
use crate::error::Error;
use crate::fixtures::{run_all, run_fixture_with_tol, FixtureReport, FIXTURE_TOL};
use crate::gates::{generate_training_set, named_gate, SetMode};
use crate::io::{
    parse_model, parse_state_literal, parse_training_set, parse_training_set_file, serialize_matrix,
    serialize_model, serialize_state, serialize_training_set, Metadata,
};
use crate::linalg::{format_complex, is_unitary, StateVector};
use crate::perceptron::{consistency_check, predict, train, TrainOptions, CONSISTENCY_TOL};
use crate::svd::DEFAULT_RANK_TOL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable overriding the fixture validation tolerance.
pub const TOL_ENV: &str = "QPERC_TOL";

#[derive(Debug, Parser)]
#[command(name = "qperc", version, about = "One-shot unitary-weight quantum perceptron")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train on a training-set file and write the model.
    Train {
        set_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rank_tol: f64,
        /// Train even if no unitary maps every input to its target.
        #[arg(long)]
        force: bool,
    },
    /// Apply a trained model to a state.
    Predict {
        model_file: PathBuf,
        /// JSON list of [re, im] pairs, or a file containing one.
        #[arg(long)]
        state: String,
        /// Rescale the state to unit norm first.
        #[arg(long)]
        normalize: bool,
    },
    /// Run the built-in worked examples.
    Validate {
        #[arg(long, conflicts_with = "all")]
        example: Option<u8>,
        #[arg(long)]
        all: bool,
        /// Emit reports as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Emit a gate matrix.
    Gate {
        name: String,
        /// Human-readable rows instead of JSON.
        #[arg(long)]
        print: bool,
    },
    /// Generate a training set from a gate.
    GenSet {
        name: String,
        #[arg(long, value_parser = parse_mode)]
        mode: SetMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the iterative delta-rule learner for comparison.
    Baseline {
        set_file: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-3)]
        stop_tol: f64,
        /// zero | identity:<scale> | seed:<n>
        #[arg(long, default_value = "zero", value_parser = parse_init)]
        init: WeightInit,
    },
    /// Print LessComplete, Complete or OverComplete.
    Classify { set_file: PathBuf },
}

fn parse_mode(s: &str) -> Result<SetMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_init(s: &str) -> Result<WeightInit, String> {
    match s.split_once(':') {
        None if s == "zero" => Ok(WeightInit::Zero),
        Some(("identity", k)) => k.parse().map(WeightInit::ScaledIdentity).map_err(|e| format!("{e}")),
        Some(("seed", n)) => n.parse().map(WeightInit::Seeded).map_err(|e| format!("{e}")),
        _ => Err(format!("unknown init `{s}`")),
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
    /// Already reported; just exit with this code.
    Silent(i32),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericalFailure(_) | Error::DivergenceDetected { .. } => EXIT_NUMERICAL,
        Error::UnknownGate(_) | Error::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let _ = writeln!(out, "{text}");
            Ok(())
        }
    }
}

fn fixture_tol() -> Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0)
            .ok_or_else(|| Failure::Usage(format!("{TOL_ENV}={v} is not a non-negative number"))),
        Err(_) => Ok(FIXTURE_TOL),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn cli_main<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match run(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Silent(code)) => code,
    }
}

fn run(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Train {
            set_file,
            out: model_out,
            rank_tol,
            force,
        } => {
            let set = parse_training_set(&read(&set_file)?)?;
            let report = consistency_check(&set, CONSISTENCY_TOL);
            if !report.ok && force {
                let _ = writeln!(err, "warning: {report}; returning the closest unitary");
            }
            let opts = TrainOptions { rank_tol, force };
            let model = train(&set, &opts)?;
            write_or_print(model_out.as_deref(), &serialize_model(&model), out)?;
            if model_out.is_some() {
                let _ = writeln!(
                    out,
                    "trained {} on {} pairs: rank {}/{}, sigma {:?}",
                    set.completeness(),
                    set.len(),
                    model.rank,
                    model.dim,
                    model.sigma
                );
            }
            if !model.is_full_rank() {
                let _ = writeln!(
                    err,
                    "note: rank {} < {}; predictions outside the training span are convention-dependent",
                    model.rank, model.dim
                );
            }
            Ok(())
        }
        Command::Predict {
            model_file,
            state,
            normalize,
        } => {
            let model = parse_model(&read(&model_file)?)?;
            let literal = if Path::new(&state).is_file() {
                read(Path::new(&state))?
            } else {
                state
            };
            let amps = parse_state_literal(&literal)?;
            let x = if normalize {
                StateVector::normalize(amps)?
            } else {
                StateVector::new(amps)?
            };
            let y = predict(&model, &x)?;
            let _ = writeln!(out, "{}", serialize_state(y.amplitudes()));
            let rendered: Vec<String> = y.amplitudes().iter().map(|z| format_complex(*z)).collect();
            let _ = writeln!(err, "({})", rendered.join(", "));
            Ok(())
        }
        Command::Validate { example, all: _, json } => {
            let tol = fixture_tol()?;
            let reports: Vec<FixtureReport> = match example {
                Some(id) => vec![run_fixture_with_tol(id, tol).map_err(|e| Failure::Usage(e.to_string()))?],
                None => run_all(tol),
            };
            let passed = reports.iter().filter(|r| r.pass).count();
            if json {
                let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
                let _ = writeln!(out, "{text}");
            } else {
                let _ = writeln!(out, "  #  gate      label         classified    rank      checks   max diff     result");
                for r in &reports {
                    let _ = writeln!(out, "{r}");
                }
                for r in reports.iter().filter(|r| r.note.is_some()) {
                    let _ = writeln!(out, "note {}: {}", r.id, r.note.unwrap_or_default());
                }
                let _ = writeln!(out, "{passed}/{} passed (tol {tol:e})", reports.len());
            }
            if passed == reports.len() {
                Ok(())
            } else {
                Err(Failure::Silent(EXIT_VALIDATION))
            }
        }
        Command::Gate { name, print } => {
            let g = named_gate(&name)?;
            if print {
                let _ = write!(out, "{}", g.matrix);
            } else {
                let _ = writeln!(out, "{}", serialize_matrix(&g.matrix));
            }
            Ok(())
        }
        Command::GenSet {
            name,
            mode,
            seed,
            out: set_out,
        } => {
            let g = named_gate(&name)?;
            let set = generate_training_set(&g, mode, seed)?;
            let meta = Metadata {
                name: Some(format!("{name}-{mode:?}-{seed}").to_lowercase()),
                source: Some("qperc gen-set".to_string()),
            };
            write_or_print(set_out.as_deref(), &serialize_training_set(&set, Some(meta)), out)
        }
        Command::Baseline {
            set_file,
            eta,
            iters,
            stop_tol,
            init,
        } => {
            let set = parse_training_set(&read(&set_file)?)?;
            let cfg = IterativeConfig {
                eta,
                max_iters: iters,
                init,
                stop_tol,
            };
            let outcome = iterative_quantum_train(&set, &cfg)?;
            let unitary = is_unitary(&outcome.weight, 1e-6)?;
            let _ = writeln!(out, "iterations: {}", outcome.iterations);
            let _ = writeln!(out, "initial mean error: {:.6e}", outcome.errors[0]);
            let _ = writeln!(out, "final mean error: {:.6e}", outcome.final_error);
            let _ = writeln!(out, "final weight unitary (1e-6): {unitary}");
            let one_shot = train(&set, &TrainOptions::default())?;
            let one_shot_err = crate::baselines::mean_error(&one_shot.unitary, &set);
            let _ = writeln!(out, "one-shot mean error (1 SVD): {one_shot_err:.6e}");
            Ok(())
        }
        Command::Classify { set_file } => {
            let text = read(&set_file)?;
            // Surface parse errors before validation ones.
            parse_training_set_file(&text)?;
            let set = parse_training_set(&text)?;
            let _ = writeln!(out, "{}", set.completeness());
            Ok(())
        }
    }
}
