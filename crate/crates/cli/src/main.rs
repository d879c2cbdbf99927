use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use papal_core::checker::validity::run_suite;
use papal_core::model::fixture_names;
use papal_core::qbf::{self, DEFAULT_QBF_CAP};
use papal_core::relations::{max_refinement_traced, n_bisimilar, quotient, DEFAULT_STATE_CAP};
use papal_core::synthesis::{epistemic_defining_formula, positive_defining_formula};
use papal_core::{
    evaluate, fixture, max_bisimulation, CheckConfig, EpistemicModel, Error, Formula, ModelDescription,
    PointedModel, Strategy, Witness,
};

/// Stdout writes that end the process quietly once the reader has gone
/// away (`papal props | head`), instead of panicking.
fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

#[derive(Parser)]
#[command(name = "papal", version, about = "Model checker for public announcement logic with positive arbitrary announcements")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Caps {
    /// Largest model on which quantifiers are evaluated.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Largest accepted quantifier nesting.
    #[arg(long, default_value_t = 16)]
    nesting_cap: usize,
    /// Reject formulas with `box`/`dia`.
    #[arg(long)]
    no_apal: bool,
    /// Disable memoization.
    #[arg(long)]
    no_memo: bool,
    /// Enumerate all subsets and filter, instead of walking closed sets.
    #[arg(long)]
    naive: bool,
}

impl Caps {
    fn config(&self) -> CheckConfig {
        CheckConfig {
            state_cap: self.state_cap,
            nesting_cap: self.nesting_cap,
            apal_enabled: !self.no_apal,
            memo_enabled: !self.no_memo,
            strategy: if self.naive { Strategy::Naive } else { Strategy::Dag },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state.
    Check {
        model: PathBuf,
        /// Formula text, or `@path` to read it from a file.
        formula: String,
        /// Evaluation state (default: the model's point, else its first state).
        #[arg(short, long)]
        state: Option<String>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Print the bisimulation quotient.
    Minimize { model: PathBuf },
    /// Print the maximal refinement, one `x -> y` pair per line (y refines x).
    Refine { model: PathBuf },
    /// Print the maximal bisimulation, or compare two pointed models.
    Bisim {
        model: PathBuf,
        /// Second model to compare against.
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(short, long)]
        state: Option<String>,
        /// State of the second model.
        #[arg(short = 't', long)]
        other_state: Option<String>,
        /// Compare up to this depth only.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Synthesize an epistemic formula true exactly at the given states.
    Distinguish {
        model: PathBuf,
        #[arg(required = true)]
        states: Vec<String>,
    },
    /// Synthesize a positive formula true exactly at the given states.
    DefinePositive {
        model: PathBuf,
        #[arg(required = true)]
        states: Vec<String>,
    },
    /// Decide a QBF through its model-checking encoding (exit 10 = SAT, 20 = UNSAT).
    Qbf {
        file: PathBuf,
        /// Write the encoding to `<PREFIX>.epml` and `<PREFIX>.formula`.
        #[arg(long, value_name = "PREFIX")]
        dump_encoding: Option<PathBuf>,
        /// Largest number of variables accepted.
        #[arg(long, default_value_t = DEFAULT_QBF_CAP)]
        cap: usize,
    },
    /// Print a built-in model, e.g. `compose9` or `two_leg_chain(4,6)`.
    Gen {
        name: Option<String>,
        /// List the available names.
        #[arg(long)]
        list: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the validity and invariant suite on seeded random models.
    Props {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        caps: Caps,
    },
    /// Check a model file and list every problem found.
    Validate { model: PathBuf },
}

/// Failures with their exit code: 1 for usage and syntax, 2 for semantics.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::ModelSyntax { .. } | Error::QbfSyntax { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 1, message }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path, state: Option<&str>) -> Result<PointedModel, Failure> {
    let desc = ModelDescription::parse_any(&read(path)?)?;
    let mut pm = desc.build_pointed()?;
    if let Some(s) = state {
        pm.point = pm.model.require_state(s)?;
    }
    Ok(pm)
}

fn formula_arg(arg: &str) -> Result<Formula, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => arg.to_string(),
    };
    Ok(text.trim().parse::<Formula>().map_err(Error::from)?)
}

fn state_set(m: &EpistemicModel, names: &[String]) -> Result<papal_core::StateSet, Failure> {
    Ok(m.state_set(names)?)
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn witness_json(chain: &[&Witness]) -> Value {
    chain
        .iter()
        .map(|w| json!({ "states": w.states, "formula": w.formula.to_string() }))
        .collect()
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Check {
            model,
            formula,
            state,
            caps,
        } => {
            let pm = load(&model, state.as_deref())?;
            let f = formula_arg(&formula)?;
            let r = evaluate(&pm, &f, &caps.config())?;
            let chain = r.witness.as_ref().map(Witness::chain).unwrap_or_default();
            if json {
                let first = chain.first();
                print_json(&json!({
                    "verdict": r.verdict,
                    "witness_states": first.map(|w| &w.states),
                    "witness_formula": first.map(|w| w.formula.to_string()),
                    "witness_chain": witness_json(&chain),
                    "stats": r.stats,
                }));
            } else {
                outln!("{}", r.verdict);
                for (i, w) in chain.iter().enumerate() {
                    let label = if i == 0 { "witness" } else { "then" };
                    outln!("{label}: {{{}}} announced by {}", w.states.join(", "), w.formula);
                }
            }
            Ok(0)
        }
        Command::Minimize { model } => {
            let pm = load(&model, None)?;
            let q = quotient(&pm.model);
            let point = q.map[pm.point];
            let out = PointedModel {
                model: q.model,
                point,
            };
            if json {
                print_json(&serde_json::from_str(&out.describe().to_json()).expect("model json"));
            } else {
                out!("{}", out.to_text());
            }
            Ok(0)
        }
        Command::Refine { model } => {
            let pm = load(&model, None)?;
            let r = max_refinement_traced(&pm.model);
            if json {
                print_json(&json!({
                    "pairs": r.relation.named_pairs(&pm.model),
                    "iterations": r.iterations,
                }));
            } else {
                out!("{}", r.relation.dump(&pm.model));
            }
            Ok(0)
        }
        Command::Bisim {
            model,
            against,
            state,
            other_state,
            depth,
        } => match against {
            None => {
                let pm = load(&model, None)?;
                let r = max_bisimulation(&pm.model);
                if json {
                    print_json(&json!({ "pairs": r.named_pairs(&pm.model) }));
                } else {
                    out!("{}", r.dump(&pm.model));
                }
                Ok(0)
            }
            Some(other) => {
                let left = load(&model, state.as_deref())?;
                let right = load(&other, other_state.as_deref())?;
                let verdict = match depth {
                    Some(n) => n_bisimilar(&left, &right, n),
                    None => papal_core::relations::bisimilar(&left, &right),
                };
                if json {
                    print_json(&json!({ "bisimilar": verdict, "depth": depth }));
                } else {
                    outln!("{verdict}");
                }
                Ok(0)
            }
        },
        Command::Distinguish { model, states } => {
            let pm = load(&model, None)?;
            let t = state_set(&pm.model, &states)?;
            let r = epistemic_defining_formula(&pm.model, &t)?;
            synthesis_output(json, &pm.model, &r.formula, &t, r.verified);
            Ok(0)
        }
        Command::DefinePositive { model, states } => {
            let pm = load(&model, None)?;
            let t = state_set(&pm.model, &states)?;
            let r = positive_defining_formula(&pm.model, &t)?;
            synthesis_output(json, &pm.model, &r.formula, &t, r.verified);
            Ok(0)
        }
        Command::Qbf {
            file,
            dump_encoding,
            cap,
        } => {
            let q = qbf::parse_qbf(&read(&file)?)?;
            if let Some(prefix) = dump_encoding {
                let (pm, f) = qbf::encode(&q);
                write(&prefix.with_extension("epml"), &pm.to_text())?;
                write(&prefix.with_extension("formula"), &format!("{f}\n"))?;
            }
            let sat = qbf::solve(&q, cap)?;
            if json {
                print_json(&json!({ "sat": sat, "variables": q.len() }));
            } else {
                outln!("{}", if sat { "SAT" } else { "UNSAT" });
            }
            Ok(if sat { 10 } else { 20 })
        }
        Command::Gen { name, list, output } => {
            if list {
                for n in fixture_names() {
                    outln!("{n}");
                }
                return Ok(0);
            }
            let name = name.ok_or_else(|| usage("gen needs a fixture name (see --list)".into()))?;
            let pm = fixture(&name)?;
            let text = if json {
                pm.describe().to_json()
            } else {
                pm.to_text()
            };
            match output {
                Some(path) => write(&path, &text)?,
                None => out!("{text}"),
            }
            Ok(0)
        }
        Command::Props { trials, seed, caps } => {
            let reports = run_suite(seed, trials, &caps.config())?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if json {
                print_json(&json!({ "seed": seed, "trials": trials, "reports": reports }));
            } else {
                for r in &reports {
                    let verdict = if r.passed() { "ok" } else { "FAILED" };
                    outln!(
                        "{verdict:6} {:55} {:4} models {:5} instances {} violations",
                        r.schema,
                        r.models,
                        r.instances,
                        r.violations.len()
                    );
                    if let Some(v) = r.violations.first() {
                        outln!("       first violation at {}: {}\n{}", v.state, v.instance, v.model);
                    }
                }
            }
            Ok(if failed == 0 { 0 } else { 2 })
        }
        Command::Validate { model } => {
            let desc = ModelDescription::parse_any(&read(&model)?)?;
            let diags = desc.validate();
            if json {
                let list: Vec<String> = diags.iter().map(ToString::to_string).collect();
                print_json(&json!({ "valid": diags.is_empty(), "diagnostics": list }));
            } else if diags.is_empty() {
                outln!("ok");
            }
            if diags.is_empty() {
                Ok(0)
            } else {
                for d in &diags {
                    eprintln!("error: {d}");
                }
                Ok(2)
            }
        }
    }
}

fn synthesis_output(json: bool, m: &EpistemicModel, f: &Formula, t: &papal_core::StateSet, verified: bool) {
    if json {
        print_json(&json!({
            "formula": f.to_string(),
            "states": m.names(t),
            "verified": verified,
        }));
    } else {
        outln!("{f}");
    }
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
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
