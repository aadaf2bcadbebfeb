//! Command-line front end for the `derham` library.
//!
//! One binary, subcommand per operation: symbolic form algebra (`forms`),
//! topology bookkeeping (`betti`, `mv`, `kunneth`, `duality`, `zigzag`),
//! numerical periods (`integrate`, `stokes`, `periods`), and a `reproduce`
//! subcommand that re-runs the worked computations shipped with the crate
//! against golden outputs.
//!
//! Conventions shared by every subcommand:
//!
//! * Arguments that name an input accept either a built-in name, a file
//!   path, or inline JSON (anything starting with `{` or `[`).
//! * `--json` switches the report to machine-readable JSON; the default
//!   output uses the canonical expression printer, so diffs are stable.
//! * All randomness (the probabilistic zero test behind closedness
//!   checks) is seeded; `--seed` changes it, the default is 0.
//! * Exit codes: 0 on success, 2 on validation errors (unreadable or
//!   malformed input, shape mismatches), 3 when a verdict comes back
//!   undecided (for example a closedness check that neither certified nor
//!   refuted).

mod inputs;
mod render;
mod reproduce;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use derham::forms::FormError;
use derham::io::{Document, FormDoc, IoError};
use derham::periods::{integrate_chain, period_matrix, PeriodError};
use derham::spaces::{mayer_vietoris, SpaceError};
use derham::{QuadratureSpec, ZeroTest};

#[derive(Parser)]
#[command(
    name = "derham",
    version,
    about = "Differential forms, cohomology, and periods at desk scale",
    propagate_version = true
)]
struct Cli {
    /// Seed for the probabilistic zero test behind closedness checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit machine-readable JSON instead of the human report.
    #[arg(long, global = true)]
    json: bool,

    /// Tolerance for numerical integration (default 1e-9).
    #[arg(long, global = true, env = "DERHAM_TOL")]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic operations on differential forms.
    #[command(subcommand)]
    Forms(FormsCommand),

    /// Betti numbers of a simplicial complex.
    Betti {
        /// Built-in space name or a space document.
        #[arg(long = "in")]
        input: String,
    },

    /// Solve a two-piece cover description for the Betti numbers of the
    /// union.
    Mv {
        /// Cover document: Betti numbers of the pieces and intersection,
        /// component incidence, optional comparison ranks.
        #[arg(long = "in")]
        input: String,
    },

    /// Betti numbers of a product space, by convolution of the factors.
    Kunneth {
        /// First factor: built-in name, profile document, or space
        /// document.
        #[arg(long)]
        a: String,
        /// Second factor, same formats.
        #[arg(long)]
        b: String,
    },

    /// Check the top-versus-bottom symmetry of a Betti profile.
    Duality {
        /// Built-in name, profile document, or space document.
        #[arg(long = "in")]
        input: String,
        /// Dimension to check against; defaults to the length of the
        /// profile minus one.
        #[arg(long)]
        dimension: Option<usize>,
    },

    /// Long exact sequence of a two-piece cover of a simplicial complex.
    Zigzag {
        /// The covered complex: built-in name or space document.
        #[arg(long)]
        space: String,
        /// Maximal simplices of the first piece, e.g. '[[0,1],[1,2]]'.
        #[arg(long)]
        u: String,
        /// Maximal simplices of the second piece.
        #[arg(long)]
        v: String,
    },

    /// Integrate a k-form over a k-chain.
    Integrate {
        /// Form document or `omega0` for the angular form.
        #[arg(long)]
        form: String,
        /// Chain document or `winding-K` for the unit circle traversed K
        /// times.
        #[arg(long)]
        chain: String,
    },

    /// Integrate a form over a chain's boundary and its derivative over
    /// the chain, and report the difference.
    Stokes {
        /// (k-1)-form document.
        #[arg(long)]
        form: String,
        /// k-chain document.
        #[arg(long)]
        chain: String,
    },

    /// Period matrix of closed forms against cycles, with its numerical
    /// rank.
    Periods {
        /// Closed forms, comma separated or repeated.
        #[arg(long = "forms", required = true, value_delimiter = ',', num_args = 1..)]
        forms: Vec<String>,
        /// Cycles, comma separated or repeated.
        #[arg(long = "cycles", required = true, value_delimiter = ',', num_args = 1..)]
        cycles: Vec<String>,
    },

    /// Re-run the bundled worked computations and compare against golden
    /// outputs; exits 0 only if every item matches.
    Reproduce {
        /// Read golden outputs from this directory instead of the copies
        /// compiled into the binary.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FormsCommand {
    /// Exterior derivative.
    D {
        /// Form document or `omega0`.
        #[arg(long = "in")]
        input: String,
    },
    /// Wedge product of two forms over the same coordinates.
    Wedge {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Pull a form on the map's target back to the map's source.
    Pullback {
        /// Map document with source, target, and component expressions.
        #[arg(long)]
        map: String,
        /// Form document over the map's target coordinates.
        #[arg(long = "in")]
        input: String,
    },
    /// Decide whether d of the form vanishes: yes, no, or unknown.
    IsClosed {
        #[arg(long = "in")]
        input: String,
    },
}

/// Failure modes with their exit codes: bad input is 2, an undecided
/// verdict is 3.
pub enum CliError {
    Validation(String),
    Undecided(String),
}

impl CliError {
    pub fn validation(msg: impl Display) -> CliError {
        CliError::Validation(msg.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PeriodError> for CliError {
    fn from(e: PeriodError) -> Self {
        match e {
            PeriodError::ClosednessUnknown { form } => CliError::Undecided(format!(
                "closedness of form {form} could not be decided; try another --seed"
            )),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// What a subcommand hands back: the text to print and the exit code.
pub struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, code: 0 }
    }
}

/// Flag-derived configuration threaded through the handlers.
pub struct Session {
    pub json: bool,
    pub zero_test: ZeroTest,
    pub quad: QuadratureSpec,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let session = Session {
        json: cli.json,
        zero_test: ZeroTest::with_seed(cli.seed),
        quad: match cli.tol {
            Some(tol) => QuadratureSpec::default().with_tolerance(tol),
            None => QuadratureSpec::default(),
        },
    };
    match run(cli.command, &session) {
        Ok(outcome) => {
            if !outcome.text.is_empty() {
                println!("{}", outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Undecided(msg)) => {
            eprintln!("undecided: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, session: &Session) -> Result<Outcome, CliError> {
    match command {
        Command::Forms(cmd) => run_forms(cmd, session),
        Command::Betti { input } => {
            let complex = inputs::load_complex(&input)?;
            let betti = complex.betti();
            Ok(Outcome::ok(if session.json {
                render::json(&serde_json::json!({ "betti": betti }))
            } else {
                render::betti_line(&betti)
            }))
        }
        Command::Mv { input } => {
            let cover = inputs::load_cover(&input)?;
            let solution = cover.solve();
            Ok(Outcome::ok(if session.json {
                render::json(&serde_json::json!({
                    "betti": solution.betti,
                    "j_ranks": solution.j_ranks,
                    "delta_ranks": solution.delta_ranks,
                    "missing_j_ranks": solution.missing_j_ranks,
                }))
            } else {
                render::mv_text(&solution)
            }))
        }
        Command::Kunneth { a, b } => {
            let product = inputs::load_profile(&a)?.kunneth(&inputs::load_profile(&b)?);
            Ok(Outcome::ok(if session.json {
                render::json(&serde_json::json!({ "betti": product.numbers() }))
            } else {
                render::betti_line(product.numbers())
            }))
        }
        Command::Duality { input, dimension } => {
            let profile = inputs::load_profile(&input)?;
            let dimension = dimension.unwrap_or(profile.numbers().len().saturating_sub(1));
            let outcome = profile.poincare_duality(dimension);
            Ok(Outcome::ok(if session.json {
                render::duality_json(&outcome)
            } else {
                render::duality_text(&outcome)
            }))
        }
        Command::Zigzag { space, u, v } => {
            let complex = inputs::load_complex(&space)?;
            let u = inputs::parse_maximal(&u)?;
            let v = inputs::parse_maximal(&v)?;
            let cover = mayer_vietoris(&complex, &u, &v)?;
            let report = cover.zigzag();
            Ok(Outcome::ok(if session.json {
                render::zigzag_json(&cover, &report)
            } else {
                render::zigzag_text(&cover, &report)
            }))
        }
        Command::Integrate { form, chain } => {
            let form = inputs::load_form(&form)?;
            let chain = inputs::load_chain(&chain)?;
            let value = integrate_chain(&form, &chain, &session.quad)?;
            Ok(Outcome::ok(if session.json {
                render::json(&serde_json::json!({ "value": value }))
            } else {
                render::num9(value)
            }))
        }
        Command::Stokes { form, chain } => {
            let form = inputs::load_form(&form)?;
            let chain = inputs::load_chain(&chain)?;
            if chain.degree() == 0 {
                return Err(CliError::validation("a 0-chain has no boundary"));
            }
            let boundary_side = integrate_chain(&form, &chain.boundary()?, &session.quad)?;
            let derivative_side = integrate_chain(&form.d(), &chain, &session.quad)?;
            Ok(Outcome::ok(if session.json {
                render::json(&serde_json::json!({
                    "boundary_side": boundary_side,
                    "derivative_side": derivative_side,
                    "residual": (boundary_side - derivative_side).abs(),
                }))
            } else {
                render::stokes_block(boundary_side, derivative_side)
            }))
        }
        Command::Periods { forms, cycles } => {
            let forms = forms
                .iter()
                .map(|arg| inputs::load_form(arg))
                .collect::<Result<Vec<_>, _>>()?;
            let cycles = cycles
                .iter()
                .map(|arg| inputs::load_chain(arg))
                .collect::<Result<Vec<_>, _>>()?;
            let matrix = period_matrix(&forms, &cycles, &session.quad, &session.zero_test)?;
            Ok(Outcome::ok(if session.json {
                render::json(&serde_json::json!({
                    "entries": matrix.entries,
                    "singular_values": matrix.singular_values,
                    "rank": matrix.rank,
                }))
            } else {
                render::period_block(&matrix)
            }))
        }
        Command::Reproduce { golden } => reproduce::run(golden.as_deref(), session.json),
    }
}

fn run_forms(command: FormsCommand, session: &Session) -> Result<Outcome, CliError> {
    match command {
        FormsCommand::D { input } => {
            let result = inputs::load_form(&input)?.d();
            Ok(Outcome::ok(form_output(&result, session)))
        }
        FormsCommand::Wedge { a, b } => {
            let result = inputs::load_form(&a)?.wedge(&inputs::load_form(&b)?)?;
            Ok(Outcome::ok(form_output(&result, session)))
        }
        FormsCommand::Pullback { map, input } => {
            let map = inputs::load_map(&map)?;
            let result = map.pullback(&inputs::load_form(&input)?)?;
            Ok(Outcome::ok(form_output(&result, session)))
        }
        FormsCommand::IsClosed { input } => {
            let verdict = inputs::load_form(&input)?.is_closed_with(&session.zero_test);
            let word = render::verdict_word(verdict);
            let text = if session.json {
                render::json(&serde_json::json!({ "closed": word }))
            } else {
                format!("closed: {word}")
            };
            Ok(Outcome {
                text,
                code: if word == "unknown" { 3 } else { 0 },
            })
        }
    }
}

fn form_output(form: &derham::DifferentialForm, session: &Session) -> String {
    if session.json {
        FormDoc::of(form).to_json()
    } else {
        render::form_text(form)
    }
}
