//! `lamlab`: one-shot commands over the term kernel and the claim registry.
//!
//! Exit codes: 0 success, 1 a check failed (or `equiv` found the terms
//! distinct), 2 bad input, 3 `reduce` ran out of fuel, 4 `equiv` ran out of
//! fuel.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lamlab_core::defs::{check_definitions, parse_definitions, Definitions};
use lamlab_core::reduce::reduce;
use lamlab_core::registry::{run_suite, Params, SUITES};
use lamlab_core::syntax::{
    parse_term_in, parse_type_in, parse_typed_in, print_term_folded, Folding, Scope,
};
use lamlab_core::zoo::{Zoo, ZOO_LAM, ZOO_TLAM};
use lamlab_core::{check, Context, EquivVerdict, Status, Strategy, TraceStatus};

/// `println!` that stops quietly when the reader goes away.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "lamlab",
    version,
    about = "Untyped and System F λ-terms, numeral systems and storage operators"
)]
struct Cli {
    /// Reduction step budget.
    #[arg(long, global = true, env = "LAMLAB_FUEL", default_value_t = lamlab_core::DEFAULT_FUEL)]
    fuel: u64,
    /// Largest numeral index examined by `verify`.
    #[arg(long, global = true, default_value_t = 10)]
    max_n: usize,
    /// Use the successor and predecessors exactly as typeset.
    #[arg(long, global = true)]
    as_printed: bool,
    /// One JSON record per line.
    #[arg(long, global = true)]
    json: bool,
    /// Extra definitions, layered over the shipped zoo.
    #[arg(long, global = true, value_name = "FILE")]
    prelude: Option<PathBuf>,
    /// Do not abbreviate known subterms by name when printing.
    #[arg(long, global = true)]
    raw: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Head,
    Normal,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term (or with --typed, a typed term) and print it back.
    Parse {
        expr: String,
        #[arg(long)]
        typed: bool,
    },
    /// Reduce a term, printing every step.
    Reduce {
        expr: String,
        #[arg(long, value_enum, default_value = "normal")]
        strategy: StrategyArg,
    },
    /// Decide β-equivalence within the fuel.
    Equiv { left: String, right: String },
    /// Check every `tdef` of a definition file.
    Check { file: PathBuf },
    /// Print the double-negation translation of a type.
    Star { ty: String },
    /// Inspect the shipped term zoo.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    /// Run a suite of claims.
    Verify {
        #[arg(value_name = "SUITE")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum ZooAction {
    List,
    Show {
        name: String,
        /// Also print the System F witness.
        #[arg(long)]
        typed: bool,
    },
    /// Write the shipped definition files into DIR.
    Emit {
        dir: PathBuf,
    },
}

struct Env {
    scope: Scope,
    folding: Folding,
    fuel: u64,
    json: bool,
}

impl Env {
    fn show(&self, t: &lamlab_core::Term) -> String {
        print_term_folded(t, &self.folding)
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn load_prelude(cli: &Cli, zoo: &Zoo) -> Result<(Scope, Folding), String> {
    let mut folding = if cli.raw {
        Folding::new()
    } else {
        zoo.folding()
    };
    let Some(path) = &cli.prelude else {
        return Ok((zoo.prelude().clone(), folding));
    };
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let defs = parse_definitions(&text, Some(zoo.prelude()))
        .map_err(|e| format!("{}:{e}", path.display()))?;
    if !cli.raw {
        for (name, t) in defs.defs() {
            folding.add(name, t);
        }
    }
    Ok((defs.scope, folding))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let zoo = Zoo::get(cli.as_printed);
    let (scope, folding) = match load_prelude(&cli, zoo) {
        Ok(p) => p,
        Err(e) => return input_error(e),
    };
    let env = Env {
        scope,
        folding,
        fuel: cli.fuel,
        json: cli.json,
    };
    match &cli.command {
        Command::Parse { expr, typed } => cmd_parse(&env, expr, *typed),
        Command::Reduce { expr, strategy } => cmd_reduce(&env, expr, *strategy),
        Command::Equiv { left, right } => cmd_equiv(&env, left, right),
        Command::Check { file } => cmd_check(&env, file),
        Command::Star { ty } => cmd_star(&env, ty),
        Command::Zoo { action } => cmd_zoo(&env, zoo, action),
        Command::Verify { suite } => {
            let params = Params {
                max_n: cli.max_n,
                fuel: cli.fuel,
                as_printed: cli.as_printed,
                ..Params::default()
            };
            cmd_verify(&env, suite, &params)
        }
    }
}

fn cmd_parse(env: &Env, expr: &str, typed: bool) -> ExitCode {
    if typed {
        let t = match parse_typed_in(expr, &env.scope) {
            Ok(t) => t,
            Err(e) => return input_error(e),
        };
        let ty = check(&Context::new(), &t);
        if env.json {
            let ty = ty
                .as_ref()
                .map(|t| t.to_string())
                .map_err(|e| e.to_string());
            out!(
                "{}",
                json!({"typed": t.to_string(), "type": ty.ok(), "erasure": env.show(&t.erase())})
            );
        } else {
            out!("{t}");
            match ty {
                Ok(ty) => out!(": {ty}"),
                Err(e) => out!(": ill-typed ({e})"),
            }
        }
        return ExitCode::SUCCESS;
    }
    match parse_term_in(expr, &env.scope) {
        Ok(t) => {
            if env.json {
                out!(
                    "{}",
                    json!({"term": env.show(&t), "size": t.size(), "closed": t.is_closed()})
                );
            } else {
                out!("{}", env.show(&t));
            }
            ExitCode::SUCCESS
        }
        Err(e) => input_error(e),
    }
}

fn cmd_reduce(env: &Env, expr: &str, strategy: StrategyArg) -> ExitCode {
    let t = match parse_term_in(expr, &env.scope) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let strategy = match strategy {
        StrategyArg::Head => Strategy::Head,
        StrategyArg::Normal => Strategy::Normal,
    };
    let trace = reduce(&t, strategy, env.fuel);
    if env.json {
        let steps: Vec<String> = trace.terms().map(|s| env.show(s)).collect();
        out!(
            "{}",
            json!({"steps": steps, "status": trace.status.to_string(), "fuel_used": trace.fuel_used})
        );
    } else {
        for (i, s) in trace.terms().enumerate() {
            out!("{i:>4}  {}", env.show(s));
        }
        out!("{} after {} steps", trace.status, trace.fuel_used);
    }
    if trace.status == TraceStatus::FuelExhausted {
        ExitCode::from(EXIT_FUEL)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_equiv(env: &Env, left: &str, right: &str) -> ExitCode {
    let (a, b) = match (
        parse_term_in(left, &env.scope),
        parse_term_in(right, &env.scope),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return input_error(e),
    };
    let verdict = lamlab_core::beta_equiv(&a, &b, env.fuel);
    if env.json {
        let (name, spent) = match verdict {
            EquivVerdict::Equal => ("Equal", None),
            EquivVerdict::Distinct => ("Distinct", None),
            EquivVerdict::Unknown(k) => ("Unknown", Some(k)),
        };
        out!("{}", json!({"verdict": name, "fuel_used": spent}));
    } else {
        out!("{verdict}");
    }
    match verdict {
        EquivVerdict::Equal => ExitCode::SUCCESS,
        EquivVerdict::Distinct => ExitCode::from(EXIT_FAIL),
        EquivVerdict::Unknown(_) => ExitCode::from(EXIT_UNKNOWN),
    }
}

fn cmd_check(env: &Env, file: &Path) -> ExitCode {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", file.display())),
    };
    let defs: Definitions = match parse_definitions(&text, Some(&env.scope)) {
        Ok(d) => d,
        Err(e) => return input_error(format!("{}:{e}", file.display())),
    };
    let results = check_definitions(&defs, Some(&env.scope));
    let mut failed = false;
    for r in &results {
        failed |= !r.ok();
        if env.json {
            out!(
                "{}",
                json!({
                    "name": r.name.to_string(),
                    "claimed": r.claimed.to_string(),
                    "synthesized": r.synthesized.as_ref().map(|t| t.to_string()),
                    "erasure_matches": r.erasure_matches,
                    "error": r.error,
                    "ok": r.ok(),
                })
            );
        } else {
            out!("{}", r.line());
        }
    }
    if !env.json {
        let bad = results.iter().filter(|r| !r.ok()).count();
        out!("{} tdefs, {bad} failed", results.len());
    }
    if failed {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_star(env: &Env, ty: &str) -> ExitCode {
    match parse_type_in(ty, &env.scope) {
        Ok(t) => {
            let s = t.godel_star();
            if env.json {
                out!("{}", json!({"type": t.to_string(), "star": s.to_string()}));
            } else {
                out!("{s}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => input_error(e),
    }
}

fn cmd_zoo(env: &Env, zoo: &Zoo, action: &ZooAction) -> ExitCode {
    match action {
        ZooAction::List => {
            for e in zoo.entries() {
                let ty = e.claimed_type.as_ref().map(|t| t.to_string());
                if env.json {
                    out!("{}", json!({"name": e.name, "type": ty, "about": e.anchor}));
                } else {
                    let ty = ty.map(|t| format!(" : {t}")).unwrap_or_default();
                    out!("{}{ty}  # {}", e.name, e.anchor);
                }
            }
            ExitCode::SUCCESS
        }
        ZooAction::Show { name, typed } => {
            let Some(e) = zoo.entry(name) else {
                return input_error(format!("no zoo entry named {name}"));
            };
            let body = lamlab_core::print_term(&e.term);
            let witness = e.witness.as_ref().filter(|_| *typed);
            if env.json {
                out!(
                    "{}",
                    json!({
                        "name": e.name,
                        "term": body,
                        "type": e.claimed_type.as_ref().map(|t| t.to_string()),
                        "witness": witness.map(|w| w.to_string()),
                        "about": e.anchor,
                    })
                );
            } else {
                out!("# {}", e.anchor);
                out!("def {} = {body}", e.name);
                if let Some(ty) = &e.claimed_type {
                    match witness {
                        Some(w) => out!("tdef {} : {ty} = {w}", e.name),
                        None => out!("# {} : {ty}", e.name),
                    }
                }
            }
            ExitCode::SUCCESS
        }
        ZooAction::Emit { dir } => {
            let write = |name: &str, text: &str| fs::write(dir.join(name), text);
            let res = fs::create_dir_all(dir)
                .and_then(|_| write("zoo.lam", ZOO_LAM))
                .and_then(|_| write("zoo.tlam", ZOO_TLAM));
            match res {
                Ok(()) => {
                    out!("wrote {}", dir.display());
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(format!("{}: {e}", dir.display())),
            }
        }
    }
}

fn cmd_verify(env: &Env, suite: &str, params: &Params) -> ExitCode {
    let Some(reports) = run_suite(suite, params) else {
        return input_error(format!(
            "unknown suite {suite}; expected one of {}",
            SUITES.join(", ")
        ));
    };
    for r in &reports {
        if env.json {
            out!("{}", serde_json::to_string(r).expect("reports serialize"));
        } else {
            out!("{r}");
        }
    }
    let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
    if !env.json {
        out!("{passed}/{} claims passed", reports.len());
    }
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
