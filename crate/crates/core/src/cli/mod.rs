//! The `normform` command line tool.
//!
//! Exit codes: 0 ok, 2 input error, 3 not a solution, 4 precision failure,
//! 5 verification failure. Reports go to stdout (or `--output`), error names
//! to stderr.

pub mod expr;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::module_order::verify_rank;
use crate::norm_form::{enumerate_solutions, norm_form_poly, partition_classes, ZetaMode};
use crate::places_heights::{archimedean_log_vector, weil_height};
use crate::reduction::{balancing_trials, cm_height_identity, reduce_solution, rounding_trials};
pub use problem::{ElementSpec, Instance, ProblemFile};

pub const ROUNDING_TRIALS: usize = 500;
pub const BALANCING_TRIALS: usize = 200;
pub const DEFAULT_COEFF_BOUND: u64 = 10;
const TRIAL_SEED: u64 = 0x6e6f_726d;

#[derive(Debug, Parser)]
#[command(name = "normform", version, about = "Norm form equations over number field towers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Working precision for embeddings, overriding the problem file.
    #[arg(long, global = true)]
    pub precision_bits: Option<usize>,
    /// Coordinate bound for `solve`.
    #[arg(long, global = true)]
    pub coeff_bound: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub zeta_mode: Option<ZetaArg>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaArg {
    Any,
    One,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weil height and archimedean log vector of an element of l.
    Height { problem: PathBuf, element: String },
    /// Reduce `mu` to a small representative of its class.
    Reduce { problem: PathBuf },
    /// Enumerate solutions in a coordinate box and split them into classes.
    Solve { problem: PathBuf },
    /// Relative units, rank triple and coefficient ring.
    Units { problem: PathBuf },
    /// Run the invariant checks on the problem.
    Verify { problem: PathBuf },
}

/// Runs the tool on `args` and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let (report, code) = match dispatch(&cli) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut report = report;
    report["elapsed_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
    let text = serde_json::to_string_pretty(&report).expect("reports always serialize");
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            use std::io::Write;
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    code
}

fn load(cli: &Cli, path: &Path) -> Result<Instance> {
    ProblemFile::load(path)?.build(cli.precision_bits)
}

fn zeta_mode(cli: &Cli, inst: &Instance) -> ZetaMode {
    match cli.zeta_mode {
        Some(ZetaArg::Any) => ZetaMode::AnyTorsion,
        Some(ZetaArg::One) => ZetaMode::One,
        None => inst.zeta_mode(),
    }
}

fn header(command: &str, inst: &Instance) -> Value {
    json!({
        "command": command,
        "problem": serde_json::to_value(&inst.problem).expect("problem files always serialize"),
        "precision_bits": inst.precision_bits,
        "tower": report::tower(&inst.tower),
    })
}

fn dispatch(cli: &Cli) -> Result<(Value, i32)> {
    match &cli.command {
        Command::Height { problem, element } => {
            let inst = load(cli, problem)?;
            Ok((cmd_height(&inst, element)?, 0))
        }
        Command::Reduce { problem } => Ok((cmd_reduce(&load(cli, problem)?)?, 0)),
        Command::Solve { problem } => {
            let inst = load(cli, problem)?;
            let bound = cli.coeff_bound.unwrap_or(DEFAULT_COEFF_BOUND);
            Ok((cmd_solve(&inst, bound, zeta_mode(cli, &inst))?, 0))
        }
        Command::Units { problem } => Ok((cmd_units(&load(cli, problem)?)?, 0)),
        Command::Verify { problem } => {
            // malformed files are input errors; everything after parsing is a check
            let file = ProblemFile::load(problem)?;
            let (report, ok) = cmd_verify(&file, cli.precision_bits);
            Ok((report, if ok { 0 } else { 5 }))
        }
    }
}

pub fn cmd_height(inst: &Instance, element: &str) -> Result<Value> {
    let a = inst.l_element(&ElementSpec::Expr(element.to_string()))?;
    if a.is_zero() {
        return Err(Error::LogOfZero);
    }
    let t = &inst.tower;
    let mut out = header("height", inst);
    out["element"] = report::element(t, &a);
    out["height"] = report::real(weil_height(t, &a)?);
    out["log_vector"] = report::reals(&archimedean_log_vector(t, &a)?);
    Ok(out)
}

pub fn cmd_reduce(inst: &Instance) -> Result<Value> {
    let mu = inst.mu()?;
    let beta = inst.beta()?;
    let sys = inst.unit_system()?;
    let r = reduce_solution(&mu, &beta, &sys)?;
    let mut out = header("reduce", inst);
    out["units"] = report::units(&sys);
    out["result"] = report::reduction(&sys, &r);
    Ok(out)
}

pub fn cmd_solve(inst: &Instance, coeff_bound: u64, mode: ZetaMode) -> Result<Value> {
    let beta = inst.beta()?;
    let sys = inst.unit_system()?;
    let f = norm_form_poly(&inst.module)?;
    let set = partition_classes(enumerate_solutions(&inst.module, &beta, coeff_bound, mode)?, &sys)?;
    let mut out = header("solve", inst);
    out["units"] = report::units(&sys);
    out["norm_form"] = report::norm_form(&inst.tower, &f);
    out["result"] = report::solutions(&sys, &set);
    Ok(out)
}

pub fn cmd_units(inst: &Instance) -> Result<Value> {
    let sys = inst.unit_system()?;
    let mut out = header("units", inst);
    out["units"] = report::units(&sys);
    out["rank_certificate"] = json!(verify_rank(&sys)?);
    Ok(out)
}

struct Checks(Vec<Value>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: Value) -> bool {
        self.0.push(json!({ "name": name, "passed": passed, "detail": detail }));
        passed
    }

    fn fail(&mut self, name: &str, e: &Error) -> bool {
        self.push(name, false, json!(e.to_string()))
    }

    fn first_failure(&self) -> Option<&Value> {
        self.0.iter().find(|c| c["passed"] == false)
    }
}

/// Runs every invariant check that applies. Returns the report and whether
/// all checks passed.
pub fn cmd_verify(file: &ProblemFile, precision: Option<usize>) -> (Value, bool) {
    let mut checks = Checks(Vec::new());
    let mut out = json!({ "command": "verify", "problem": serde_json::to_value(file).expect("problem files always serialize") });
    verify_into(file, precision, &mut checks, &mut out);
    let failed = checks.first_failure().map(|c| c["name"].as_str().unwrap_or_default().to_string());
    if let Some(c) = checks.first_failure() {
        match c["detail"].as_str() {
            Some(why) => eprintln!("error: verification failed: {}: {why}", c["name"].as_str().unwrap_or_default()),
            None => eprintln!("error: verification failed: {}", c["name"].as_str().unwrap_or_default()),
        }
    }
    out["checks"] = Value::Array(checks.0);
    out["first_failure"] = json!(failed);
    (out, failed.is_none())
}

fn verify_into(file: &ProblemFile, precision: Option<usize>, checks: &mut Checks, out: &mut Value) {
    let inst = match file.build(precision) {
        Ok(i) => i,
        Err(e) => {
            checks.fail("tower_and_module", &e);
            return;
        }
    };
    out["precision_bits"] = json!(inst.precision_bits);
    out["tower"] = report::tower(&inst.tower);
    let sys = match inst.unit_system() {
        Ok(s) => s,
        Err(e) => {
            checks.fail("unit_system", &e);
            return;
        }
    };
    out["units"] = report::units(&sys);
    match verify_rank(&sys) {
        Ok(r) => checks.push("rank_certificate", true, json!(r)),
        Err(e) => checks.fail("rank_certificate", &e),
    };
    let worst_fiber_sum = (0..sys.rank())
        .flat_map(|j| sys.fibers().iter().map(move |f| (j, f)))
        .map(|(j, f)| f.members.iter().map(|w| sys.log_matrix()[w.index][j]).sum::<f64>().abs())
        .fold(0.0, f64::max);
    checks.push("fiber_sums", worst_fiber_sum <= 1e-9, report::real(worst_fiber_sum));

    if sys.rank() > 0 {
        match rounding_trials(&sys, ROUNDING_TRIALS, TRIAL_SEED) {
            Ok(s) => checks.push("rounding_inequality", s.failures == 0, report::trials(&s)),
            Err(e) => checks.fail("rounding_inequality", &e),
        };
        match balancing_trials(&sys, BALANCING_TRIALS, 50, TRIAL_SEED + 1) {
            Ok(s) => checks.push("balancing_inequality", s.failures == 0, report::trials(&s)),
            Err(e) => checks.fail("balancing_inequality", &e),
        };
    }
    if file.mu.is_none() {
        return;
    }
    let pair = inst.mu().and_then(|mu| Ok((mu, inst.beta()?)));
    let (mu, beta) = match pair {
        Ok(p) => p,
        Err(e) => {
            checks.fail("problem_elements", &e);
            return;
        }
    };
    if sys.rank() == 0 {
        match cm_height_identity(&mu, &beta, &sys) {
            Ok(c) => checks.push("cm_height_identity", c.equal, report::cm_identity(&c)),
            Err(e) => checks.fail("cm_height_identity", &e),
        };
    } else {
        match reduce_solution(&mu, &beta, &sys) {
            Ok(r) => checks.push("reduction_bound", r.bound_satisfied, report::reduction(&sys, &r)),
            Err(e) => checks.fail("reduction_bound", &e),
        };
    }
}
