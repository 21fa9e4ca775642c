//! `canpencil`: JSON front end to the canonical-pencil toolkit.
//!
//! Every report goes to stdout as JSON with numbers rendered as decimal
//! strings. Equation files written by `generate` are the exception: they are
//! an input format and keep `p_g`/`theta` as integers so they parse back
//! unchanged. Failures go to stderr as `{"error": ...}` with a nonzero exit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use canpencil_core::census::{singular_report, DEFAULT_NODE_PRIME, DEFAULT_SWEEP_PRIME};
use canpencil_core::chow::{invariants_report, surface_invariants};
use canpencil_core::exactpoly::FieldSpec;
use canpencil_core::family::{
    bidouble_branch_data, bidouble_invariants, degree_table, family_dimension, generate_member, genus_feasibility,
    FamilyParams, MemberOptions, SurfaceEquations,
};
use canpencil_core::gring::{BundleData, EquationFile};
use canpencil_core::ledger::{run_ledger, CheckGroup, LedgerConfig};
use canpencil_core::relcan::{example_verify, ExampleCase};

#[derive(Parser, Debug)]
#[command(name = "canpencil", version, about = "Genus-2 canonical pencils in a weighted P(1,1,2,3)-bundle over P^1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct Params {
    #[arg(long = "pg")]
    p_g: i64,
    #[arg(long)]
    theta: i64,
}

impl Params {
    fn bundle(self) -> Result<BundleData, String> {
        BundleData::new(self.p_g, self.theta).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// K^2, chi, q and the canonical classes.
    Invariants {
        #[command(flatten)]
        params: Params,
    },
    /// Prescribed degrees of every coefficient of Q and G, and the parameter count.
    Degrees {
        #[command(flatten)]
        params: Params,
    },
    /// A random member of the family, as an equation file.
    Generate {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "qq")]
        field: FieldSpec,
        #[arg(long)]
        seed: u64,
        /// Force q_y to split into distinct linear factors over the field.
        #[arg(long)]
        split_qy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nodes, branch disjointness and the quasi-smoothness sweep over F_p.
    Census {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to 11, or 101 with --skip-sweep.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        skip_sweep: bool,
    },
    /// Runs the identity ledger; exits 0 iff every check passes.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value = "qq")]
        field: FieldSpec,
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Branch data of the bidouble model and its invariants.
    Bidouble {
        #[command(flatten)]
        params: Params,
    },
    /// Which fibre genera are compatible with (K^2, chi, q).
    Feasibility {
        #[arg(long, allow_negative_numbers = true)]
        k2: i64,
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, default_value_t = 0)]
        q: i64,
    },
    /// Checks one worked example, or all three.
    Example {
        /// `1,1,15,5`, `(1,2,12,4)`, `alpha2-theta2`, ...; all cases if omitted.
        #[arg(long)]
        case: Option<ExampleCase>,
        #[arg(long, default_value = "qq")]
        field: FieldSpec,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Sigma2,
    Lifting,
    S6,
    Examples,
    Bidouble,
    Invariants,
}

impl Suite {
    fn groups(self) -> Vec<CheckGroup> {
        match self {
            Suite::All => Vec::new(),
            Suite::Sigma2 => vec![CheckGroup::Sigma2],
            Suite::Lifting => vec![CheckGroup::Lifting],
            Suite::S6 => vec![CheckGroup::S6],
            Suite::Examples => vec![CheckGroup::Examples],
            Suite::Bidouble => vec![CheckGroup::Bidouble],
            Suite::Invariants => vec![CheckGroup::Invariants],
        }
    }
}

/// What a subcommand produced: a JSON document and whether it counts as success.
struct Outcome {
    body: Value,
    ok: bool,
}

impl Outcome {
    fn report<T: Serialize>(value: &T) -> Result<Self, String> {
        Ok(Outcome { body: stringify_numbers(to_value(value)?), ok: true })
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value, String> {
    serde_json::to_value(value).map_err(|e| e.to_string())
}

/// Replaces every JSON number by its decimal string.
fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn read_equations(path: &Path) -> Result<SurfaceEquations, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: EquationFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: malformed equation file: {e}", path.display()))?;
    SurfaceEquations::from_file(&file).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Invariants { params } => {
            Outcome::report(&invariants_report(params.p_g, params.theta).map_err(|e| e.to_string())?)
        }
        Command::Degrees { params } => {
            let bundle = params.bundle()?;
            let dimension = match family_dimension(bundle) {
                Ok(d) => to_value(&d)?,
                Err(e) => json!({ "unavailable": e.to_string() }),
            };
            Outcome::report(&json!({
                "p_g": bundle.p_g(),
                "theta": bundle.theta(),
                "twists": bundle.twists(),
                "quadric_twist": bundle.quadric_twist(),
                "sextic_twist": bundle.sextic_twist(),
                "slots": degree_table(bundle),
                "family_dimension": dimension,
            }))
        }
        Command::Generate { params, field, seed, split_qy, out } => {
            let bundle = params.bundle()?;
            let member = generate_member(&FamilyParams { bundle, field, seed }, MemberOptions { split_q_y: split_qy })
                .map_err(|e| e.to_string())?;
            for w in &member.warnings {
                eprintln!("{}", json!({ "warning": w }));
            }
            let file = to_value(&member.equations.to_file())?;
            match out {
                Some(path) => {
                    let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
                    fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
                    Outcome::report(&json!({ "written": path.display().to_string(), "seed": seed.to_string() }))
                }
                None => Ok(Outcome { body: file, ok: true }),
            }
        }
        Command::Census { input, prime, skip_sweep } => {
            let eqs = read_equations(&input)?;
            let p = prime.unwrap_or(if skip_sweep { DEFAULT_NODE_PRIME } else { DEFAULT_SWEEP_PRIME });
            Outcome::report(&singular_report(&eqs, p, !skip_sweep).map_err(|e| e.to_string())?)
        }
        Command::Verify { suite, field, trials, seed } => {
            let ledger =
                run_ledger(&LedgerConfig { field, trials, seed, groups: suite.groups() }).map_err(|e| e.to_string())?;
            let ok = ledger.passed;
            Ok(Outcome { ok, ..Outcome::report(&ledger)? })
        }
        Command::Bidouble { params } => {
            let bundle = params.bundle()?;
            let data = bidouble_branch_data(bundle.theta(), bundle.p_g()).map_err(|e| e.to_string())?;
            let (k2, chi) = bidouble_invariants(&data).map_err(|e| e.to_string())?;
            let inv = surface_invariants(params.p_g, params.theta).map_err(|e| e.to_string())?;
            let agrees = (k2, chi) == (inv.k2, inv.chi);
            Ok(Outcome {
                ok: agrees,
                ..Outcome::report(&json!({
                    "p_g": bundle.p_g(),
                    "theta": bundle.theta(),
                    "branch_data": data,
                    "K2": k2,
                    "chi": chi,
                    "matches_intersection_theory": agrees,
                }))?
            })
        }
        Command::Feasibility { k2, chi, q } => {
            Outcome::report(&genus_feasibility(k2, chi, q).map_err(|e| e.to_string())?)
        }
        Command::Example { case, field } => {
            let cases = case.map_or_else(|| ExampleCase::ALL.to_vec(), |c| vec![c]);
            let reports = cases
                .into_iter()
                .map(|c| example_verify(c, field).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let ok = reports.iter().all(|r| r.passed);
            Ok(Outcome { ok, ..Outcome::report(&json!({ "passed": ok, "cases": reports }))? })
        }
    }
}

fn fail(message: impl Into<String>) -> ExitCode {
    eprintln!("{}", json!({ "error": message.into() }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind().to_string(), "detail": e.render().to_string() }));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(outcome) => match serde_json::to_string_pretty(&outcome.body) {
            Ok(text) => {
                // A closed pipe (`| head`) is not an error of ours.
                let _ = writeln!(std::io::stdout().lock(), "{text}");
                if outcome.ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => fail(e.to_string()),
        },
        Err(e) => fail(e),
    }
}
