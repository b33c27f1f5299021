//! Command-line front end: parse a workspace file, run a construction or
//! check, print a terse summary and optionally a JSON report.
//!
//! Exit codes: 0 pass, 1 property failure, 2 usage or parse error,
//! 3 budget exhausted or search inconclusive.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::category::validate_category;
use crate::concrete::{concrete_mono_gap, faithfulness_gap_u, is_coherent, is_transportable, ConcreteCategory, Universe};
use crate::dsl::{self, Workspace};
use crate::error::Error;
use crate::functor::{validate_functor, validate_nat, Functor};
use crate::harness::suites::{self, Checked, Suite, SuiteReport};
use crate::harness::search29;
use crate::limits::{equifier, inserter, product, pseudopullback, pullback_with_legs};
use crate::signature::{classify_aec, enumerate_sigma, sigma_basis};
use crate::verdict::{VerdictReport, Violation};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the default `search29` budget, in seconds.
pub const BUDGET_ENV: &str = "PIEWB_BUDGET";
const DEFAULT_BUDGET_SECS: u64 = 600;

#[derive(Parser, Debug)]
#[command(name = "piewb", version, about = "Finite concrete categories, PIE-limits and structure-category checks")]
pub struct Cli {
    /// Workspace file to load.
    #[arg(short = 'w', long, global = true, value_name = "FILE")]
    pub workspace: Option<PathBuf>,
    /// Also write a JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Category laws, and for concrete categories faithfulness, concrete
    /// monos, coherence and transportability.
    Check {
        name: String,
        /// Fresh elements added to the transportability universe.
        #[arg(long, default_value_t = 0)]
        fresh: usize,
    },
    /// Build a limit and print the extended workspace.
    Limit {
        #[command(subcommand)]
        kind: LimitKind,
        /// Name of the constructed category.
        #[arg(long, global = true)]
        name: Option<String>,
        /// Write the workspace here instead of standard output.
        #[arg(long, global = true, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Interpretable symbols of a concrete category.
    Sigma {
        name: String,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// Emit only the tuple-class basis instead of every symbol.
        #[arg(long)]
        basis: bool,
        /// Largest number of symbols to enumerate.
        #[arg(long, default_value_t = 1 << 16)]
        budget: u64,
    },
    /// The structure-category ladder plus transportability.
    Classify {
        name: String,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long, default_value_t = 0)]
        fresh: usize,
    },
    /// Run a closure suite on seeded random instances.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for failure certificates.
        #[arg(long, value_name = "DIR")]
        certs: Option<PathBuf>,
    },
    /// Search for inserters that are not iso-full, within a time budget.
    Search29 {
        /// Wall-clock budget in seconds.
        #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET_SECS)]
        budget: u64,
        /// Largest number of instances.
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        certs: Option<PathBuf>,
    },
    /// Re-run a suite's checks on a certificate workspace.
    Recheck { suite: String },
    /// Print the workspace in canonical form.
    Print,
}

#[derive(Subcommand, Debug)]
pub enum LimitKind {
    /// Product of concrete categories.
    Product { names: Vec<String> },
    /// Inserter of two parallel functors.
    Inserter { f: String, g: String },
    /// Equifier of two parallel natural transformations.
    Equifier { phi: String, psi: String },
    /// Strict pullback of two concrete categories over sets.
    Pullback { k1: String, k2: String },
    /// Pseudopullback of two concrete categories over sets.
    Pseudopullback { k1: String, k2: String },
}

#[derive(Serialize)]
struct CommandReport<'a> {
    schema_version: u32,
    command: &'a str,
    target: Option<&'a str>,
    exit_code: i32,
    checks: &'a [VerdictReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<&'a str>,
}

struct Outcome {
    code: i32,
    checks: Vec<VerdictReport>,
    output: Option<String>,
    suite: Option<SuiteReport>,
}

impl Outcome {
    fn checks(checks: Vec<VerdictReport>) -> Self {
        let code = if checks.iter().all(VerdictReport::passed) { EXIT_PASS } else { EXIT_FAIL };
        Outcome { code, checks, output: None, suite: None }
    }
}

/// Failure that ends the command with a message.
struct Abort(i32, String);

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Abort(EXIT_BUDGET, e.to_string()),
            _ => Abort(EXIT_USAGE, e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Abort {
    Abort(EXIT_USAGE, msg.into())
}

/// Parse `args` (program name first) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(o) => {
            if let Some(path) = &cli.report {
                if let Err(e) = write_report(path, &cli, &o) {
                    let _ = writeln!(err, "error: cannot write report: {e}");
                    return EXIT_USAGE;
                }
            }
            o.code
        }
        Err(Abort(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn write_report(path: &Path, cli: &Cli, o: &Outcome) -> std::io::Result<()> {
    let json = match &o.suite {
        Some(s) => serde_json::to_string_pretty(s),
        None => {
            let (command, target) = command_label(&cli.command);
            serde_json::to_string_pretty(&CommandReport {
                schema_version: suites::SCHEMA_VERSION,
                command,
                target,
                exit_code: o.code,
                checks: &o.checks,
                output: o.output.as_deref(),
            })
        }
    }?;
    fs::write(path, json + "\n")
}

fn command_label(c: &Command) -> (&'static str, Option<&str>) {
    match c {
        Command::Check { name, .. } => ("check", Some(name)),
        Command::Limit { kind, .. } => (
            match kind {
                LimitKind::Product { .. } => "limit product",
                LimitKind::Inserter { .. } => "limit inserter",
                LimitKind::Equifier { .. } => "limit equifier",
                LimitKind::Pullback { .. } => "limit pullback",
                LimitKind::Pseudopullback { .. } => "limit pseudopullback",
            },
            None,
        ),
        Command::Sigma { name, .. } => ("sigma", Some(name)),
        Command::Classify { name, .. } => ("classify", Some(name)),
        Command::Verify { suite, .. } => ("verify", Some(suite)),
        Command::Search29 { .. } => ("search29", None),
        Command::Recheck { suite } => ("recheck", Some(suite)),
        Command::Print => ("print", None),
    }
}

fn load(cli: &Cli) -> Result<Workspace, Abort> {
    let path = cli
        .workspace
        .as_ref()
        .ok_or_else(|| usage("this command needs a workspace file (-w FILE)"))?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    dsl::parse(&text).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn parse_suite(s: &str) -> Result<Suite, Abort> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn print_checks(out: &mut dyn Write, checks: &[VerdictReport]) {
    for c in checks {
        let _ = writeln!(out, "{c}");
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, Abort> {
    match &cli.command {
        Command::Check { name, fresh } => {
            let ws = load(cli)?;
            let checks = check(&ws, name, *fresh)?;
            print_checks(out, &checks);
            Ok(Outcome::checks(checks))
        }
        Command::Limit { kind, name, out: path } => {
            let mut ws = load(cli)?;
            limit(&mut ws, kind, name.as_deref())?;
            let text = dsl::print(&ws);
            match path {
                Some(p) => fs::write(p, &text).map_err(|e| usage(format!("{}: {e}", p.display())))?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            Ok(Outcome {
                code: EXIT_PASS,
                checks: vec![],
                output: Some(text),
                suite: None,
            })
        }
        Command::Sigma { name, max_arity, basis, budget } => {
            let mut ws = load(cli)?;
            let k = concrete(&ws, name)?.clone();
            let sigma = if *basis {
                sigma_basis(&k, *max_arity)
            } else {
                enumerate_sigma(&k, *max_arity, *budget as u128)?
            };
            let _ = writeln!(out, "# {} symbols", sigma.len());
            ws.add_signature(&format!("Sigma_{name}"), name, sigma)?;
            let text = dsl::print(&ws);
            let _ = out.write_all(text.as_bytes());
            Ok(Outcome {
                code: EXIT_PASS,
                checks: vec![],
                output: Some(text),
                suite: None,
            })
        }
        Command::Classify { name, max_arity, fresh } => {
            let ws = load(cli)?;
            let k = concrete(&ws, name)?;
            let universe = Universe::with_fresh(k, *fresh);
            let ladder = classify_aec(k, *max_arity, &universe)?;
            let mut checks = ladder.rungs.clone();
            checks.push(is_transportable(k, &universe)?);
            let _ = writeln!(out, "{}", k.name());
            print_checks(out, &checks);
            for n in &ladder.notes {
                let _ = writeln!(out, "note: {n}");
            }
            Ok(Outcome::checks(checks))
        }
        Command::Verify { suite, n, seed, certs } => {
            let suite = parse_suite(suite)?;
            let report = suites::run_suite(suite, *n, *seed);
            finish_suite(out, report, certs.as_deref())
        }
        Command::Search29 { budget, n, seed, certs } => {
            let report = search29::run(*n, *seed, Some(Duration::from_secs(*budget)));
            finish_suite(out, report, certs.as_deref())
        }
        Command::Recheck { suite } => {
            let suite = parse_suite(suite)?;
            let ws = load(cli)?;
            match suites::recheck(suite, &ws)? {
                Checked::Done(checks) => {
                    print_checks(out, &checks);
                    Ok(Outcome::checks(checks))
                }
                Checked::Skipped(why) => {
                    let _ = writeln!(out, "inconclusive: {why}");
                    let v = VerdictReport::unknown("recheck", why);
                    Ok(Outcome {
                        code: EXIT_BUDGET,
                        checks: vec![v],
                        output: None,
                        suite: None,
                    })
                }
            }
        }
        Command::Print => {
            let ws = load(cli)?;
            let text = dsl::print(&ws);
            let _ = out.write_all(text.as_bytes());
            Ok(Outcome {
                code: EXIT_PASS,
                checks: vec![],
                output: Some(text),
                suite: None,
            })
        }
    }
}

fn finish_suite(out: &mut dyn Write, report: SuiteReport, certs: Option<&Path>) -> Result<Outcome, Abort> {
    let _ = writeln!(
        out,
        "{}: attempted {} passed {} failed {} skipped {} ({} ms){}",
        report.suite,
        report.attempted,
        report.passed,
        report.failed,
        report.skipped,
        report.wall_time_ms,
        if report.complete { "" } else { ", budget exhausted" }
    );
    for (check, count) in report.failing_checks() {
        let _ = writeln!(out, "  {count} failing `{check}`");
    }
    for n in &report.notes {
        let _ = writeln!(out, "note: {n}");
    }
    if let Some(dir) = certs {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
        for r in report.failures() {
            if let (Some(name), Some(text)) = (&r.certificate_ref, &r.certificate) {
                fs::write(dir.join(name), text).map_err(|e| usage(e.to_string()))?;
            }
        }
    }
    let code = if report.failed > 0 {
        EXIT_FAIL
    } else if !report.success {
        EXIT_BUDGET
    } else {
        EXIT_PASS
    };
    Ok(Outcome {
        code,
        checks: vec![],
        output: None,
        suite: Some(report),
    })
}

fn concrete<'a>(ws: &'a Workspace, name: &str) -> Result<&'a ConcreteCategory, Abort> {
    ws.concrete(name)
        .ok_or_else(|| usage(format!("no concrete category named `{name}`")))
}

fn check(ws: &Workspace, name: &str, fresh: usize) -> Result<Vec<VerdictReport>, Abort> {
    if let Some(k) = ws.concrete(name) {
        let faithful = match faithfulness_gap_u(k) {
            None => VerdictReport::pass("faithful-u"),
            Some((u, v)) => VerdictReport::fail(
                "faithful-u",
                Violation::new(
                    "faithful",
                    vec![k.cat().morphism_name(u).into(), k.cat().morphism_name(v).into()],
                    "parallel morphisms with the same function",
                ),
            ),
        };
        let monos = match concrete_mono_gap(k) {
            None => VerdictReport::pass("concrete-monos"),
            Some(f) => VerdictReport::fail(
                "concrete-monos",
                Violation::new("mono", vec![k.cat().morphism_name(f).into()], "not a mono with injective function"),
            ),
        };
        let transportable = is_transportable(k, &Universe::with_fresh(k, fresh))?;
        return Ok(vec![validate_category(k.cat()), faithful, monos, is_coherent(k), transportable]);
    }
    if let Some(c) = ws.category(name) {
        return Ok(vec![validate_category(c)]);
    }
    if let Some(f) = ws.functor(name) {
        return Ok(vec![validate_functor(f)]);
    }
    if let Some(d) = ws.nat(name) {
        return Ok(vec![validate_nat(&d.nat)]);
    }
    Err(usage(format!("nothing named `{name}` in the workspace")))
}

fn retarget(f: &Functor, source: &Arc<crate::category::FinCategory>) -> Result<Functor, Abort> {
    Ok(f.retarget(source.clone(), f.target().clone())?)
}

fn limit(ws: &mut Workspace, kind: &LimitKind, name: Option<&str>) -> Result<(), Abort> {
    match kind {
        LimitKind::Product { names } => {
            let ks: Vec<ConcreteCategory> = names
                .iter()
                .map(|n| concrete(ws, n).cloned())
                .collect::<Result<_, _>>()?;
            let p = product(&ks)?;
            let prod = p.prod.renamed(name.unwrap_or("Prod"));
            ws.add_concrete(prod.clone())?;
            for (i, pi) in p.projections.iter().enumerate() {
                ws.add_functor(&format!("pi{i}"), retarget(pi, prod.cat())?)?;
            }
        }
        LimitKind::Inserter { f, g } => {
            let (ff, gg) = (functor_named(ws, f)?, functor_named(ws, g)?);
            let ins = inserter(&ff, &gg)?;
            let cat = Arc::new((*ins.ins).clone().with_name(name.unwrap_or("Ins")));
            let proj = retarget(&ins.projection, &cat)?;
            match ws.concrete(ff.source().name()).cloned() {
                Some(k) => ws.add_concrete(k.along(&proj)?)?,
                None => {
                    ws.add_category(cat)?;
                }
            }
            ws.add_functor("P", proj)?;
        }
        LimitKind::Equifier { phi, psi } => {
            let (a, b) = (nat_named(ws, phi)?, nat_named(ws, psi)?);
            let eq = equifier(&a, &b)?;
            let cat = Arc::new((*eq.eq).clone().with_name(name.unwrap_or("Eq")));
            let incl = retarget(&eq.inclusion, &cat)?;
            match ws.concrete(incl.target().name()).cloned() {
                Some(k) => ws.add_concrete(k.along(&incl)?)?,
                None => {
                    ws.add_category(cat)?;
                }
            }
            ws.add_functor("J", incl)?;
        }
        LimitKind::Pullback { k1, k2 } => {
            let pb = pullback_with_legs(concrete(ws, k1)?, concrete(ws, k2)?)?;
            let cat = pb.cat.renamed(name.unwrap_or("PB"));
            ws.add_concrete(cat.clone())?;
            ws.add_functor("P1", retarget(&pb.legs.0, cat.cat())?)?;
            ws.add_functor("P2", retarget(&pb.legs.1, cat.cat())?)?;
        }
        LimitKind::Pseudopullback { k1, k2 } => {
            let psb = pseudopullback(concrete(ws, k1)?, concrete(ws, k2)?)?;
            let cat = psb.cat.renamed(name.unwrap_or("PSB"));
            ws.add_concrete(cat.clone())?;
            ws.add_functor("Q1", retarget(&psb.legs.0, cat.cat())?)?;
            ws.add_functor("Q2", retarget(&psb.legs.1, cat.cat())?)?;
        }
    }
    Ok(())
}

fn functor_named(ws: &Workspace, name: &str) -> Result<Functor, Abort> {
    ws.functor(name)
        .cloned()
        .ok_or_else(|| usage(format!("no functor named `{name}`")))
}

fn nat_named(ws: &Workspace, name: &str) -> Result<crate::functor::NatTrans, Abort> {
    ws.nat(name)
        .map(|d| d.nat.clone())
        .ok_or_else(|| usage(format!("no transformation named `{name}`")))
}
