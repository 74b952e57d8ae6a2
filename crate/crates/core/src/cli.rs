//! Command-line front end. Every command builds a [`Report`], which is
//! rendered as text or JSON; the exit status is derived from it.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{simplify, BoundExpr, SimplifyMode};
use crate::checker::{CheckReport, CheckStatus, Checker, DEFAULT_GRID};
use crate::emulation::{
    compile_loop, compile_tm, decode_tm_config, enumerate_inhabitants, parse_loop_program,
    parse_tm, run_loop_direct, run_tm_direct, search_for_bottom, EmulationError, DEFAULT_CAPACITY,
};
use crate::encoder::{quote_term, DeBruijnMap};
use crate::evaluator::{normalize, verify_bounds, EvalError, DEFAULT_FUEL};
use crate::syntax::{parse_file, parse_type, Directive, Item, SourceFile, Term};

#[derive(Parser, Debug)]
#[command(
    name = "cufl",
    version,
    about = "Proof checker and cost-accounted interpreter for CUFL"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Treat inequalities that could not be decided as errors.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Largest value tried per size variable when sampling inequalities.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: u64,
    /// Maximum number of reduction steps.
    #[arg(long, global = true, env = "CUFL_FUEL", default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
    /// Print every reduction step.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the definitions named by `#check` (all of them if there is none).
    Check { file: PathBuf },
    /// Normalise the definitions named by `#run` and compare with their bounds.
    Run { file: PathBuf },
    /// Print the quotation of the definitions named by `#quote`.
    Quote { file: PathBuf },
    /// Compile a Turing machine or loop program, run it and compare with
    /// direct execution.
    Emulate {
        #[arg(value_enum)]
        kind: EmulateKind,
        file: PathBuf,
        /// The input word (tm) or the arguments (loop).
        inputs: Vec<String>,
        /// Steps to simulate; defaults to the input length plus one.
        #[arg(long)]
        steps: Option<u64>,
        /// Numeral capacity for loop programs.
        #[arg(long, default_value_t = DEFAULT_CAPACITY)]
        capacity: u64,
    },
    /// List the closed values of a first-order type.
    Enumerate {
        #[arg(value_name = "TYPE")]
        ty: String,
        #[arg(long, default_value_t = 3)]
        depth: u64,
    },
    /// Search all closed terms up to a size for a proof of Bottom.
    Consistency {
        #[arg(long, default_value_t = 7)]
        max_size: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmulateKind {
    Tm,
    Loop,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub results: Vec<ResultRow>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub status: String,
    pub cost: Option<u64>,
    pub depth: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: Option<usize>,
    pub col: Option<usize>,
}

impl Report {
    fn new(command: String) -> Self {
        Report {
            command,
            ..Report::default()
        }
    }

    fn diag(&mut self, severity: Severity, message: impl Into<String>, at: Option<(usize, usize)>) {
        self.diagnostics.push(Diagnostic {
            severity,
            message: message.into(),
            line: at.map(|p| p.0),
            col: at.map(|p| p.1),
        });
    }

    fn error(&mut self, message: impl Into<String>, at: Option<(usize, usize)>) {
        self.diag(Severity::Error, message, at);
    }

    pub fn exit_code(&self) -> i32 {
        let invalid = self.results.iter().any(|r| r.status == "Invalid");
        let errors = self
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error);
        i32::from(invalid || errors)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                serde_json::to_string_pretty(self).expect("report serializes") + "\n"
            }
            ReportFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&r.name);
            if let Some(ty) = &r.ty {
                out.push_str(&format!(" : {ty}"));
            }
            if let (Some(a), Some(b)) = (&r.alpha, &r.beta) {
                out.push_str(&format!("  [alpha = {a}; beta = {b}]"));
            }
            out.push_str(&format!("  {}", r.status));
            if let (Some(c), Some(d)) = (r.cost, r.depth) {
                out.push_str(&format!("  cost {c}, depth {d}"));
            }
            out.push('\n');
            if let Some(o) = &r.output {
                out.push_str(&format!("  {o}\n"));
            }
            for line in r.trace.iter().flatten() {
                out.push_str(&format!("  {line}\n"));
            }
        }
        for d in &self.diagnostics {
            let sev = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
                Severity::Note => "note",
            };
            match (d.line, d.col) {
                (Some(l), Some(c)) => out.push_str(&format!("{l}:{c}: {sev}: {}\n", d.message)),
                _ => out.push_str(&format!("{sev}: {}\n", d.message)),
            }
        }
        out
    }
}

fn show_bound(e: &BoundExpr) -> String {
    simplify(e, SimplifyMode::Exact)
        .unwrap_or_else(|_| e.clone())
        .to_string()
}

/// Parses the arguments, runs the command and returns the rendered report
/// with the exit status.
pub fn run_cli<I, T>(args: I) -> Result<(String, i32), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args)?;
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let report = execute(&cli.command, &cli.flags, echo);
    Ok((report.render(cli.flags.report), report.exit_code()))
}

pub fn execute(command: &Command, flags: &Flags, echo: String) -> Report {
    let mut report = Report::new(echo);
    match command {
        Command::Check { file } => cmd_check(file, flags, &mut report),
        Command::Run { file } => cmd_run(file, flags, &mut report),
        Command::Quote { file } => cmd_quote(file, flags, &mut report),
        Command::Emulate {
            kind,
            file,
            inputs,
            steps,
            capacity,
        } => cmd_emulate(*kind, file, inputs, *steps, *capacity, flags, &mut report),
        Command::Enumerate { ty, depth } => cmd_enumerate(ty, *depth, &mut report),
        Command::Consistency { max_size } => cmd_consistency(*max_size, &mut report),
    }
    report
}

fn read(path: &Path, report: &mut Report) -> Option<String> {
    match std::fs::read_to_string(path) {
        Ok(s) => Some(s),
        Err(e) => {
            report.error(format!("cannot read {}: {e}", path.display()), None);
            None
        }
    }
}

/// A parsed source file with every definition checked in order.
struct Loaded {
    source: SourceFile,
    checker: Checker,
    reports: Vec<(String, Option<CheckReport>, (usize, usize))>,
}

impl Loaded {
    fn directives(&self, kind: Directive) -> Vec<(String, (usize, usize))> {
        self.source
            .items
            .iter()
            .filter_map(|i| match i {
                Item::Directive {
                    kind: k,
                    name,
                    line,
                    col,
                } if *k == kind => Some((name.clone(), (*line, *col))),
                _ => None,
            })
            .collect()
    }
}

fn load(path: &Path, flags: &Flags, report: &mut Report) -> Option<Loaded> {
    let text = read(path, report)?;
    let source = match parse_file(&text) {
        Ok(s) => s,
        Err(e) => {
            report.error(e.message, Some((e.line, e.col)));
            return None;
        }
    };
    let mut checker = Checker::with_grid(flags.grid);
    let mut reports = Vec::new();
    for item in &source.items {
        if let Item::Def {
            name,
            ty,
            term,
            line,
            col,
        } = item
        {
            let r = match checker.add_def(name, ty, term) {
                Ok(r) => Some(r),
                Err(e) => {
                    report.error(format!("`{name}`: {e}"), Some((*line, *col)));
                    None
                }
            };
            reports.push((name.clone(), r, (*line, *col)));
        }
    }
    Some(Loaded {
        source,
        checker,
        reports,
    })
}

fn check_row(name: &str, r: &CheckReport) -> ResultRow {
    ResultRow {
        name: name.to_string(),
        ty: Some(r.ty().to_string()),
        alpha: Some(show_bound(r.alpha())),
        beta: Some(show_bound(r.beta())),
        status: r.status.label().to_string(),
        ..ResultRow::default()
    }
}

fn note_status(
    name: &str,
    r: &CheckReport,
    at: (usize, usize),
    flags: &Flags,
    report: &mut Report,
) {
    match &r.status {
        CheckStatus::Invalid(e) => report.error(format!("`{name}`: {e}"), Some(at)),
        CheckStatus::ValidWithUnknownLeq => {
            let sev = if flags.strict {
                Severity::Error
            } else {
                Severity::Warning
            };
            report.diag(
                sev,
                format!("`{name}`: an inequality could not be decided on the sampling grid"),
                Some(at),
            );
        }
        CheckStatus::Valid => {}
    }
}

/// The check report of `name` and the position of its definition.
fn lookup<'a>(
    loaded: &'a Loaded,
    name: &str,
    at: (usize, usize),
    report: &mut Report,
) -> Option<(&'a CheckReport, (usize, usize))> {
    let Some(def) = loaded.reports.iter().rev().find(|r| r.0 == name) else {
        report.error(format!("no definition named `{name}`"), Some(at));
        return None;
    };
    def.1.as_ref().map(|r| (r, def.2))
}

fn cmd_check(path: &Path, flags: &Flags, report: &mut Report) {
    let Some(loaded) = load(path, flags, report) else {
        return;
    };
    let mut targets = loaded.directives(Directive::Check);
    if targets.is_empty() {
        targets = loaded.reports.iter().map(|r| (r.0.clone(), r.2)).collect();
    }
    for (name, at) in targets {
        if let Some((r, at)) = lookup(&loaded, &name, at, report) {
            report.results.push(check_row(&name, r));
            note_status(&name, r, at, flags, report);
        }
    }
}

fn cmd_run(path: &Path, flags: &Flags, report: &mut Report) {
    let Some(loaded) = load(path, flags, report) else {
        return;
    };
    for (name, at) in loaded.directives(Directive::Run) {
        let Some((r, at)) = lookup(&loaded, &name, at, report) else {
            continue;
        };
        let term = loaded
            .checker
            .def(&name)
            .expect("checked definition")
            .term
            .clone();
        let mut row = check_row(&name, r);
        note_status(&name, r, at, flags, report);
        match normalize(&term, flags.fuel) {
            Ok(trace) => {
                row.cost = Some(trace.total_cost);
                row.depth = Some(trace.normal_depth);
                row.output = Some(trace.normal_form.to_string());
                if flags.trace {
                    row.trace = Some(trace.to_string().lines().map(String::from).collect());
                }
                match verify_bounds(&term, r, flags.fuel) {
                    Ok(v) if v.ok => {}
                    Ok(v) => {
                        row.status = "Invalid".into();
                        report.error(
                            format!(
                                "`{name}`: measured cost {} and depth {} exceed the bounds {} and {}",
                                v.measured_cost, v.measured_depth, v.alpha_bound, v.beta_bound
                            ),
                            Some(at),
                        );
                    }
                    Err(e) => report.diag(
                        Severity::Warning,
                        format!("`{name}`: bounds not verified: {e}"),
                        Some(at),
                    ),
                }
            }
            Err(EvalError::FuelExhausted(trace)) => {
                row.cost = Some(trace.total_cost);
                report.error(
                    format!("`{name}`: fuel exhausted after {} steps", trace.steps.len()),
                    Some(at),
                );
            }
            Err(e) => report.error(format!("`{name}`: {e}"), Some(at)),
        }
        report.results.push(row);
    }
}

fn cmd_quote(path: &Path, flags: &Flags, report: &mut Report) {
    let Some(loaded) = load(path, flags, report) else {
        return;
    };
    for (name, at) in loaded.directives(Directive::Quote) {
        let Some((r, at)) = lookup(&loaded, &name, at, report) else {
            continue;
        };
        let term = &loaded.checker.def(&name).expect("checked definition").term;
        let mut row = check_row(&name, r);
        match quote_term(term, &DeBruijnMap::new()) {
            Ok(q) => row.output = Some(q.to_string()),
            Err(e) => report.error(format!("`{name}`: {e}"), Some(at)),
        }
        report.results.push(row);
    }
}

fn emulation_error(report: &mut Report, e: EmulationError) {
    match e {
        EmulationError::Parse { line, col, message } => report.error(message, Some((line, col))),
        other => report.error(other.to_string(), None),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_emulate(
    kind: EmulateKind,
    path: &Path,
    inputs: &[String],
    steps: Option<u64>,
    capacity: u64,
    flags: &Flags,
    report: &mut Report,
) {
    let Some(text) = read(path, report) else {
        return;
    };
    let result = match kind {
        EmulateKind::Tm => emulate_tm(&text, inputs, steps, flags),
        EmulateKind::Loop => emulate_loop(&text, inputs, capacity, flags),
    };
    match result {
        Ok(row) => {
            if row.status == "Invalid" {
                report.error(
                    format!(
                        "compiled term disagrees with direct execution: {}",
                        row.output.as_deref().unwrap_or("")
                    ),
                    None,
                );
            }
            report.results.push(row);
        }
        Err(e) => emulation_error(report, e),
    }
}

fn emulate_tm(
    text: &str,
    inputs: &[String],
    steps: Option<u64>,
    flags: &Flags,
) -> Result<ResultRow, EmulationError> {
    let tm = parse_tm(text)?;
    let word = inputs.concat();
    let input = tm.input_from_str(&word);
    let step_bound = steps.unwrap_or(input.len() as u64 + 1);
    let compiled = compile_tm(&tm, &input, step_bound)?;
    let trace = normalize(&compiled.term, flags.fuel)?;
    let got = decode_tm_config(&tm, &compiled, &trace.normal_form)?;
    let verified = verify_bounds(&compiled.term, &compiled.report, flags.fuel)
        .map(|v| v.ok)
        .unwrap_or(false);
    let (status, output) = match run_tm_direct(&tm, &input, step_bound) {
        Ok((want, _)) if want == got && verified => (
            "Valid",
            format!("state {}, tape {}", got.state, got.tape().concat()),
        ),
        Ok((want, _)) => (
            "Invalid",
            format!(
                "compiled state {} tape {}, direct state {} tape {}",
                got.state,
                got.tape().concat(),
                want.state,
                want.tape().concat()
            ),
        ),
        Err(e) => ("Invalid", e.to_string()),
    };
    Ok(ResultRow {
        name: format!("tm {word:?}"),
        ty: Some(compiled.report.ty().to_string()),
        alpha: Some(show_bound(&compiled.alpha)),
        beta: Some(show_bound(&compiled.beta)),
        status: status.into(),
        cost: Some(trace.total_cost),
        depth: Some(trace.normal_depth),
        output: Some(output),
        trace: flags
            .trace
            .then(|| trace.to_string().lines().map(String::from).collect()),
    })
}

fn emulate_loop(
    text: &str,
    inputs: &[String],
    capacity: u64,
    flags: &Flags,
) -> Result<ResultRow, EmulationError> {
    let prog = parse_loop_program(text)?;
    let args = inputs
        .iter()
        .map(|s| {
            s.parse::<u64>().map_err(|_| {
                EmulationError::Decode(format!("argument `{s}` is not a natural number"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let want = run_loop_direct(&prog, &args)?;
    let compiled = compile_loop(&prog, capacity)?;
    let applied = compiled.apply(&args)?;
    let report = Checker::new().infer(&crate::syntax::Context::new(), &applied)?;
    let trace = normalize(&applied, flags.fuel)?;
    let got = compiled.decode(&trace.normal_form);
    let verified = verify_bounds(&applied, &report, flags.fuel)
        .map(|v| v.ok)
        .unwrap_or(false);
    let (status, output) = match got {
        Ok(n) if n == want && verified => (
            "Valid",
            format!("{}({}) = {n}", prog.name, inputs.join(", ")),
        ),
        Ok(n) => ("Invalid", format!("compiled {n}, direct {want}")),
        Err(e) => ("Invalid", format!("{e}; direct {want}")),
    };
    Ok(ResultRow {
        name: prog.name.clone(),
        ty: Some(compiled.report.ty().to_string()),
        alpha: Some(show_bound(&compiled.alpha)),
        beta: Some(show_bound(&compiled.beta)),
        status: status.into(),
        cost: Some(trace.total_cost),
        depth: Some(trace.normal_depth),
        output: Some(output),
        trace: flags
            .trace
            .then(|| trace.to_string().lines().map(String::from).collect()),
    })
}

fn cmd_enumerate(ty: &str, depth: u64, report: &mut Report) {
    let ty = match parse_type(ty) {
        Ok(t) => t,
        Err(e) => return report.error(e.message, Some((e.line, e.col))),
    };
    match enumerate_inhabitants(&ty, depth) {
        Ok(values) => {
            for v in values {
                report.results.push(value_row(v, &ty.to_string()));
            }
        }
        Err(e) => emulation_error(report, e),
    }
}

fn value_row(v: Term, ty: &str) -> ResultRow {
    ResultRow {
        name: v.to_string(),
        ty: Some(ty.to_string()),
        status: "Valid".into(),
        depth: Some(v.depth()),
        ..ResultRow::default()
    }
}

fn cmd_consistency(max_size: usize, report: &mut Report) {
    let (found, tried) = search_for_bottom(max_size);
    let (status, output) = match &found {
        None => (
            "Valid",
            format!("no inhabitant of Bot found among {tried} closed terms of size <= {max_size}"),
        ),
        Some(t) => ("Invalid", format!("inhabitant of Bot: {t}")),
    };
    report.results.push(ResultRow {
        name: "consistency".into(),
        ty: Some("Bot".into()),
        status: status.into(),
        output: Some(output),
        ..ResultRow::default()
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags {
            report: ReportFormat::Json,
            strict: false,
            grid: DEFAULT_GRID,
            fuel: DEFAULT_FUEL,
            trace: false,
        }
    }

    #[test]
    fn exit_code_follows_results_and_errors() {
        let mut r = Report::new(String::new());
        assert_eq!(r.exit_code(), 0);
        r.diag(Severity::Warning, "w", None);
        assert_eq!(r.exit_code(), 0);
        r.results.push(ResultRow {
            status: "Invalid".into(),
            ..ResultRow::default()
        });
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn missing_file_is_a_diagnostic() {
        let cmd = Command::Check {
            file: PathBuf::from("/nonexistent/file.cufl"),
        };
        let r = execute(&cmd, &flags(), "check".into());
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.diagnostics[0].severity, Severity::Error);
    }

    #[test]
    fn enumerate_lists_values() {
        let cmd = Command::Enumerate {
            ty: "Unit + Unit".into(),
            depth: 2,
        };
        let r = execute(&cmd, &flags(), String::new());
        let names: Vec<&str> = r.results.iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["inl unit", "inr unit"]);
    }

    #[test]
    fn json_has_documented_keys() {
        let mut r = Report::new("check f".into());
        r.results.push(ResultRow {
            name: "u".into(),
            status: "Valid".into(),
            ..ResultRow::default()
        });
        let v: serde_json::Value = serde_json::from_str(&r.render(ReportFormat::Json)).unwrap();
        for key in ["name", "type", "alpha", "beta", "status", "cost", "depth"] {
            assert!(v["results"][0].get(key).is_some(), "{key}");
        }
        assert_eq!(v["command"], "check f");
    }
}
