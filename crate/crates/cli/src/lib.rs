//! Command-line front end for `deodhar-core`.
//!
//! Every subcommand produces one report with the keys `group`, `command`,
//! `inputs`, `result`, `checks` and `elapsed_ms`, printed either as JSON or
//! as an aligned plain-text table. Exit codes: 0 success, 1 failed check,
//! 2 usage or input error, 3 resource cap.

pub mod cache;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deodhar_core::bottsamelson::{build_bs, cll_degree, BsModule};
use deodhar_core::coxeter::Limits;
use deodhar_core::deodhar::{
    classify, decorate, enumerate_subexpr, format_decorations, gdim_d, identity_sweep, subset_solutions,
    verify_lemma_hom,
};
use deodhar_core::{
    BigInt, BigRational, BigUint, CoxeterSystem, Error, Expression, Hecke, LaurentPoly, Side,
};
use serde_json::{json, Value};
use thiserror::Error;

pub use cache::CacheError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "deodhar-lab", version, about = "Exact Kazhdan-Lusztig and Deodhar defect computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// KL table cache, loaded before and written after the command.
    #[arg(long, env = "DEODHAR_LAB_CACHE", global = true)]
    pub cache: Option<PathBuf>,
    /// Re-check bar invariance and degree bounds of every cached entry.
    #[arg(long, global = true)]
    pub verify_cache: bool,
    /// Longest expression whose subexpressions are enumerated.
    #[arg(long, default_value_t = 24, global = true)]
    pub max_subexpr_len: usize,
    /// Longest expression for which a Bott-Samelson bimodule is built.
    #[arg(long, default_value_t = 10, global = true)]
    pub max_bs_len: usize,
    /// Largest --max-len accepted by the sweep subcommands.
    #[arg(long, default_value_t = 12, global = true)]
    pub max_sweep_len: usize,
    /// Cap on the number of group elements enumerated.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub max_elements: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// KL polynomial h_{x,y}, its classical form p and the mu-coefficient.
    Klpoly {
        #[arg(long)]
        group: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Subexpressions of a word expressing x, with defects and the subset census.
    Deodhar {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        x: String,
    },
    /// Checks the defect formula for every expression up to a length.
    IdentityCheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Checks the three one-dimensional hom spaces for all x < xs.
    LemmaHom {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Counts rationally smooth pairs x <= y.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Graded rank, multiplication chain and light leaf degrees of a word.
    Bs {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Klpoly { .. } => "klpoly",
            Command::Deodhar { .. } => "deodhar",
            Command::IdentityCheck { .. } => "identity-check",
            Command::LemmaHom { .. } => "lemma-hom",
            Command::Classify { .. } => "classify",
            Command::Bs { .. } => "bs",
        }
    }

    fn group(&self) -> &str {
        match self {
            Command::Klpoly { group, .. }
            | Command::Deodhar { group, .. }
            | Command::IdentityCheck { group, .. }
            | Command::LemmaHom { group, .. }
            | Command::Classify { group, .. }
            | Command::Bs { group, .. } => group,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("--max-len {requested} exceeds --max-sweep-len {limit}")]
    SweepCap { requested: usize, limit: usize },
    #[error("{0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ResourceLimit { .. }) | CliError::SweepCap { .. } => EXIT_RESOURCE,
            CliError::Core(Error::Internal(_) | Error::Infeasible { .. }) => EXIT_CHECK_FAILED,
            CliError::Core(_) | CliError::Cache(_) => EXIT_USAGE,
            CliError::Output(_) => EXIT_CHECK_FAILED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

fn check(name: &str, passed: bool) -> Check {
    Check {
        name: name.to_string(),
        passed,
    }
}

/// Outcome of one subcommand, before formatting.
#[derive(Debug, Clone)]
pub struct Report {
    pub group: String,
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self, elapsed_ms: u64) -> Value {
        json!({
            "group": self.group,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed})).collect::<Vec<_>>(),
            "elapsed_ms": elapsed_ms,
        })
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let limits = Limits {
        max_elements: cli.opts.max_elements,
        ..Limits::default()
    };
    let sys = CoxeterSystem::parse(cli.command.group())?.with_limits(limits);
    let alg = Hecke::new(Arc::new(sys));
    if let Some(path) = &cli.opts.cache {
        let n = cache::load(path, &alg, cli.opts.verify_cache)?;
        writeln!(err, "loaded {n} cached elements from {}", path.display())?;
    }
    let report = dispatch(&cli.command, &cli.opts, &alg)?;
    if let Some(path) = &cli.opts.cache {
        cache::save(path, &alg)?;
    }
    let elapsed = start.elapsed().as_millis() as u64;
    match cli.opts.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json(elapsed)).unwrap())?,
        Format::Table => write!(out, "{}", render_table(&report, elapsed))?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Runs a command against an existing algebra.
pub fn dispatch(command: &Command, opts: &Options, alg: &Hecke) -> Result<Report, CliError> {
    let sys = alg.system();
    let sweep_len = |max_len: usize| {
        if max_len > opts.max_sweep_len {
            Err(CliError::SweepCap {
                requested: max_len,
                limit: opts.max_sweep_len,
            })
        } else {
            Ok(max_len)
        }
    };
    let (inputs, result, checks) = match command {
        Command::Klpoly { x, y, .. } => {
            let (xe, ye) = (sys.parse_element(x)?, sys.parse_element(y)?);
            let kl = alg.kl_poly(&xe, &ye)?;
            let by = alg.kl_basis(&ye)?;
            let result = json!({
                "x": sys.format_element(&xe),
                "y": sys.format_element(&ye),
                "bruhat_leq": sys.bruhat_leq(&xe, &ye),
                "h": kl.h.to_text(),
                "p": kl.p.to_text(),
                "mu": int(&kl.mu),
            });
            let checks = vec![
                check("b_y is bar-invariant", alg.bar(&by) == *by),
                check("h has non-negative coefficients", kl.h.has_nonneg_coeffs()),
            ];
            (json!({"x": x, "y": y}), result, checks)
        }
        Command::Deodhar { word, x, .. } => {
            let ybar = Expression::parse(sys, word)?;
            let xe = sys.parse_element(x)?;
            let rows: Vec<Value> = enumerate_subexpr(sys, &ybar, Some(&xe), opts.max_subexpr_len)?
                .map(|e| {
                    json!({
                        "bits": e.bits.to_string(),
                        "decorations": format_decorations(&e.decorations),
                        "expressed": sys.format_element(&e.expressed),
                        "defect": e.defect,
                    })
                })
                .collect();
            let gdim = gdim_d(alg, &xe, &ybar, opts.max_subexpr_len)?;
            let mut result = json!({
                "word": ybar.to_string(),
                "x": sys.format_element(&xe),
                "reduced": ybar.is_reduced(),
                "subexpressions": rows,
                "gdim": gdim.to_text(),
            });
            let mut checks = vec![check("gdim equals the character coefficient", true)];
            if ybar.is_reduced() {
                let h = alg.kl_poly(&xe, ybar.product())?.h;
                let census = subset_solutions(alg, &xe, &ybar, opts.max_subexpr_len)?;
                let table: Vec<Value> = census
                    .table
                    .iter()
                    .map(|(d, c)| json!({"degree": d, "available": c.available, "required": c.required}))
                    .collect();
                let extra = json!({
                    "h": h.to_text(),
                    "table": table,
                    "count": natural(&census.count),
                    "forced": census.forced,
                    "witness": census.witness.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                });
                merge(&mut result, extra);
                checks.push(check("h is dominated by gdim", (gdim - h).has_nonneg_coeffs()));
            } else {
                merge(&mut result, json!({"h": null, "table": null, "count": null, "forced": null, "witness": null}));
            }
            (json!({"word": word, "x": x}), result, checks)
        }
        Command::IdentityCheck { max_len, .. } => {
            let max_len = sweep_len(*max_len)?;
            if max_len > opts.max_subexpr_len {
                return Err(Error::ResourceLimit {
                    what: "expression length for subexpression enumeration",
                    limit: opts.max_subexpr_len,
                }
                .into());
            }
            let sweep = identity_sweep(alg, max_len)?;
            let failures: Vec<Value> = sweep
                .failures
                .iter()
                .map(|r| {
                    json!({
                        "word": r.expression.to_string(),
                        "discrepancies": r.discrepancies.iter().map(|d| json!({
                            "element": sys.format_element(&d.element),
                            "character": d.character.to_text(),
                            "defect_sum": d.defect_sum.to_text(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let result = json!({
                "max_len": max_len,
                "expressions_checked": sweep.expressions_checked,
                "failures": failures,
            });
            let checks = vec![check("defect formula", sweep.failures.is_empty())];
            (json!({"max_len": max_len}), result, checks)
        }
        Command::LemmaHom { max_len, .. } => {
            let max_len = sweep_len(*max_len)?;
            let mut pairs = 0usize;
            let mut failures = Vec::new();
            for xe in sys.elements_up_to(max_len)? {
                for s in sys.generators() {
                    if sys.is_descent(&xe, s, Side::Right) {
                        continue;
                    }
                    pairs += 1;
                    let r = verify_lemma_hom(alg, &xe, s)?;
                    if !r.holds() {
                        failures.push(json!({
                            "x": sys.format_element(&xe),
                            "s": s + 1,
                            "dims": r.dims.iter().map(int).collect::<Vec<_>>(),
                        }));
                    }
                }
            }
            let checks = vec![check("all three hom spaces one-dimensional", failures.is_empty())];
            let result = json!({"max_len": max_len, "pairs_checked": pairs, "failures": failures});
            (json!({"max_len": max_len}), result, checks)
        }
        Command::Classify { max_len, .. } => {
            let max_len = sweep_len(*max_len)?;
            let elements = sys.elements_up_to(max_len)?;
            let (mut pairs, mut smooth, mut nonneg) = (0usize, 0usize, true);
            let mut singular = Vec::new();
            for ye in &elements {
                for xe in elements.iter().take_while(|x| x.length() <= ye.length()) {
                    if !sys.bruhat_leq(xe, ye) {
                        continue;
                    }
                    pairs += 1;
                    let c = classify(alg, xe, ye)?;
                    if c.rationally_smooth {
                        smooth += 1;
                    } else {
                        let h = alg.kl_poly(xe, ye)?.h;
                        nonneg &= h.has_nonneg_coeffs();
                        singular.push(json!({
                            "x": sys.format_element(xe),
                            "y": sys.format_element(ye),
                            "h": h.to_text(),
                        }));
                    }
                }
            }
            let result = json!({
                "max_len": max_len,
                "pairs": pairs,
                "rationally_smooth": smooth,
                "dihedral": sys.is_dihedral(),
                "universal": sys.is_universal(),
                "singular": singular,
            });
            let checks = vec![check("h has non-negative coefficients", nonneg)];
            (json!({"max_len": max_len}), result, checks)
        }
        Command::Bs { word, .. } => {
            let ybar = Expression::parse(sys, word)?;
            let (module, grk): (BsModule<BigRational>, LaurentPoly) = build_bs(sys, &ybar, opts.max_bs_len)?;
            let c_bot = module.c_bot();
            let image = module.m_chain_eval(&c_bot);
            let mut cll = Vec::new();
            let mut degrees_agree = true;
            for e in module.basis() {
                let dec = decorate(sys, &ybar, e)?;
                let degree = cll_degree(sys, &ybar, e)?;
                degrees_agree &= degree == dec.defect;
                cll.push(json!({
                    "bits": e.to_string(),
                    "decorations": format_decorations(&dec.decorations),
                    "expressed": sys.format_element(&dec.expressed),
                    "defect": dec.defect,
                    "cll_degree": degree,
                }));
            }
            let vv: LaurentPoly = "-1:1,0,1".parse()?;
            let expected = (0..ybar.len()).fold(LaurentPoly::one(), |acc, _| acc * vv.clone());
            let result = json!({
                "word": ybar.to_string(),
                "grk": grk.to_text(),
                "c_bot_degree": -(ybar.len() as i64),
                "m_chain_c_bot": image.to_string(),
                "cll": cll,
            });
            let checks = vec![
                check("grk is (v + v^-1)^m", grk == expected),
                check("m-chain maps c_bot to 1", image == module.ring().one()),
                check("cll degree equals defect", degrees_agree),
            ];
            (json!({"word": word}), result, checks)
        }
    };
    Ok(Report {
        group: sys.label().to_string(),
        command: command.name(),
        inputs,
        result,
        checks,
    })
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

fn int(c: &BigInt) -> Value {
    use deodhar_core::BigInt as B;
    match i64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(B::to_string(c)),
    }
}

fn natural(c: &BigUint) -> Value {
    match u64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

/// Plain-text rendering of a report; carries the same data as the JSON form.
pub fn render_table(report: &Report, elapsed_ms: u64) -> String {
    let mut out = String::new();
    out.push_str(&format!("group: {}\ncommand: {}\n", report.group, report.command));
    render_value("inputs", &report.inputs, 0, &mut out);
    render_value("result", &report.result, 0, &mut out);
    out.push_str("checks:\n");
    for c in &report.checks {
        out.push_str(&format!("  [{}] {}\n", if c.passed { "ok" } else { "FAIL" }, c.name));
    }
    out.push_str(&format!("elapsed_ms: {elapsed_ms}\n"));
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

fn render_value(key: &str, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, val) in map {
                render_value(k, val, indent + 2, out);
            }
        }
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            out.push_str(&format!("{pad}{key}: {} rows\n", items.len()));
            let cols: Vec<&String> = items[0].as_object().unwrap().keys().collect();
            let cells: Vec<Vec<String>> = items
                .iter()
                .map(|row| cols.iter().map(|c| scalar(&row[c.as_str()])).collect())
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap())
                .collect();
            let line = |fields: Vec<&str>| {
                let parts: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
                format!("{pad}  {}\n", parts.join("  ").trim_end())
            };
            out.push_str(&line(cols.iter().map(|c| c.as_str()).collect()));
            for row in &cells {
                out.push_str(&line(row.iter().map(String::as_str).collect()));
            }
        }
        Value::Array(items) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", joined.join(", ")));
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}
