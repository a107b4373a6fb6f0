//! The `hypersum` command line: `sum`, `table`, `compare` and `diagnose`.
//!
//! [`run`] is the whole program minus process plumbing; it returns the exit
//! code and the text meant for stdout and stderr, which keeps it testable.

use std::fmt::Write as _;

use clap::{Parser, Subcommand};

use crate::classic::{classic_cells, ClassicMethod, LevinVariant};
use crate::diagnostics::{
    acceleration_ratios, assess, asymptotic_coeffs, ratio_probe, AccuracyReport,
};
use crate::error::{Error, Result};
use crate::numerics::{format_number, parse_number, HPComplex, PrecisionConfig, DEFAULT_DIGITS};
use crate::presets::Preset;
use crate::qtransform::{q_table, Path};
use crate::report::{self, Content, Format, Meta, SeriesMeta};
use crate::series::{classify, partial_sums, to_unit_form, SeriesDef};

/// Partial sums used when neither `--budget` nor `--max-m` is given.
pub const DEFAULT_BUDGET: usize = 15;

#[derive(Parser, Debug)]
#[command(
    name = "hypersum",
    version,
    about = "Accelerated summation of p+1Fp hypergeometric series"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArg,
}

#[derive(Subcommand, Debug)]
enum CommandArg {
    /// Print the best available cell, with acc when the limit is known.
    Sum(Opts),
    /// Print the triangular table of one method.
    Table(Opts),
    /// Print one table per method over the same partial sums.
    Compare(Opts),
    /// Print convergence class, asymptotic coefficients, remainder ratios
    /// and acceleration-condition values.
    Diagnose(Opts),
}

#[derive(clap::Args, Debug, Clone)]
struct Opts {
    /// Upper parameters, comma separated (p or p+1 of them).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Lower parameters, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Argument of the series.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Number of partial sums s_1..s_budget available to every method.
    #[arg(long)]
    budget: Option<usize>,
    /// Largest transformation order.
    #[arg(long = "max-m")]
    max_m: Option<usize>,
    /// q, epsilon, levin-t, levin-u, levin-d, levin-v, aitken.
    #[arg(long)]
    methods: Option<String>,
    /// Reference value of the sum.
    #[arg(long, allow_hyphen_values = true)]
    limit: Option<String>,
    /// Significant decimal digits.
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: u32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value = "value")]
    content: Content,
    #[arg(long, value_enum, default_value = "direct")]
    path: Path,
    /// Exit with status 1 when any cell is degenerate.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Sum,
    Table,
    Compare,
    Diagnose,
}

/// A transformation selectable with `--methods`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Q,
    Classic(ClassicMethod),
}

impl Method {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "q" => Method::Q,
            "epsilon" => Method::Classic(ClassicMethod::Epsilon),
            "aitken" => Method::Classic(ClassicMethod::Aitken),
            "levin-t" => Method::Classic(ClassicMethod::Levin(LevinVariant::T)),
            "levin-u" => Method::Classic(ClassicMethod::Levin(LevinVariant::U)),
            "levin-d" => Method::Classic(ClassicMethod::Levin(LevinVariant::D)),
            "levin-v" => Method::Classic(ClassicMethod::Levin(LevinVariant::V)),
            other => {
                return Err(Error::Usage(format!(
                    "unknown method `{other}` (expected q, epsilon, levin-t, levin-u, levin-d, levin-v or aitken)"
                )))
            }
        })
    }

    pub fn name(self) -> String {
        match self {
            Method::Q => "q".into(),
            Method::Classic(ClassicMethod::Epsilon) => "epsilon".into(),
            Method::Classic(ClassicMethod::Aitken) => "aitken".into(),
            Method::Classic(ClassicMethod::Levin(v)) => format!("levin-{v}"),
        }
    }
}

/// A fully validated invocation.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: CommandKind,
    pub series: SeriesDef,
    /// The parameters as written, for report headers.
    pub literals: SeriesMeta,
    pub budget: usize,
    pub max_m: usize,
    pub methods: Vec<Method>,
    pub limit: Option<HPComplex>,
    pub format: Format,
    pub content: Content,
    pub precision: PrecisionConfig,
    pub path: Path,
    pub strict: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn usage(e: Error) -> Error {
    match e {
        Error::Usage(_) | Error::Help(_) => e,
        other => Error::Usage(other.to_string()),
    }
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

/// Parses `argv` (program name first) into a [`RunSpec`].
pub fn parse_args<I, T>(argv: I) -> Result<RunSpec>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            Error::Help(e.to_string())
        }
        _ => Error::Usage(e.to_string()),
    })?;
    let (command, opts) = match cli.command {
        CommandArg::Sum(o) => (CommandKind::Sum, o),
        CommandArg::Table(o) => (CommandKind::Table, o),
        CommandArg::Compare(o) => (CommandKind::Compare, o),
        CommandArg::Diagnose(o) => (CommandKind::Diagnose, o),
    };
    build_spec(command, opts)
}

fn build_spec(command: CommandKind, opts: Opts) -> Result<RunSpec> {
    let precision = PrecisionConfig::new(opts.digits).map_err(usage)?;
    let preset_literals = opts.preset.map(|p| p.literals());
    let alpha = match (&opts.alpha, preset_literals) {
        (Some(a), _) => split_list(a),
        (None, Some((a, _, _))) => a.iter().map(|s| s.to_string()).collect(),
        (None, None) => {
            return Err(Error::Usage(
                "no series given: use --preset or --alpha, --beta and --x".into(),
            ))
        }
    };
    let beta = match (&opts.beta, preset_literals) {
        (Some(b), _) => split_list(b),
        (None, Some((_, b, _))) => b.iter().map(|s| s.to_string()).collect(),
        (None, None) => return Err(Error::Usage("missing --beta".into())),
    };
    let x = match (&opts.x, preset_literals) {
        (Some(x), _) => x.trim().to_string(),
        (None, Some((_, _, x))) => x.to_string(),
        (None, None) => return Err(Error::Usage("missing --x".into())),
    };
    let overridden = opts.alpha.is_some() || opts.beta.is_some() || opts.x.is_some();

    let parse = |s: &str| parse_number(s, &precision).map_err(usage);
    let upper = alpha.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
    let lower = beta.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
    let xv = parse(&x)?;
    let series = if upper.len() == lower.len() + 1 {
        to_unit_form(upper, lower, xv, precision)
    } else {
        SeriesDef::new(upper, lower, xv, precision)
    }
    .map_err(usage)?;
    let p = series.p();

    let (budget, max_m) = match (opts.budget, opts.max_m) {
        (Some(b), Some(m)) => (b, m),
        (Some(b), None) => (b, b.saturating_sub(1) / p),
        (None, Some(m)) => (1 + p * m, m),
        (None, None) => (DEFAULT_BUDGET, (DEFAULT_BUDGET - 1) / p),
    };
    if budget < 1 {
        return Err(Error::Usage("--budget must be at least 1".into()));
    }

    let methods = match &opts.methods {
        Some(list) => {
            let mut out = Vec::new();
            for name in split_list(list) {
                let m = Method::parse(&name)?;
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            out
        }
        None => vec![Method::Q],
    };
    if methods.contains(&Method::Q) && budget < 1 + p * max_m {
        return Err(Error::Usage(format!(
            "--budget {budget} is too small for --max-m {max_m} at p = {p}: need at least {}",
            1 + p * max_m
        )));
    }
    if opts.path == Path::Recursion3F2 && p != 2 {
        return Err(Error::Usage(format!(
            "--path recursion3f2 needs p = 2, this series has p = {p}"
        )));
    }

    let limit = match (&opts.limit, opts.preset) {
        (Some(l), _) => Some(parse(l)?),
        (None, Some(preset)) if !overridden => Some(preset.limit(precision)),
        _ => None,
    };
    if limit.is_none() && (opts.content.needs_limit() || command == CommandKind::Diagnose) {
        return Err(Error::Usage(
            "a reference limit is required for acc, ratio, condition and diagnose (use --limit)"
                .into(),
        ));
    }

    let format = opts.format.unwrap_or(match command {
        CommandKind::Table | CommandKind::Compare => Format::Csv,
        CommandKind::Sum | CommandKind::Diagnose => Format::Text,
    });

    Ok(RunSpec {
        command,
        series,
        literals: SeriesMeta {
            alpha,
            beta,
            x,
            preset: opts
                .preset
                .filter(|_| !overridden)
                .map(|p| p.name().to_string()),
        },
        budget,
        max_m,
        methods,
        limit,
        format,
        content: opts.content,
        precision,
        path: opts.path,
        strict: opts.strict,
    })
}

impl RunSpec {
    fn meta(&self, method: Method) -> Meta {
        Meta {
            series: self.literals.clone(),
            digits: self.precision.digits,
            method: method.name(),
            path: (method == Method::Q).then(|| self.path.name().to_string()),
        }
    }

    fn digits(&self) -> u32 {
        self.precision.digits
    }
}

/// The grid of one method over `s_1 .. s_budget`.
pub fn method_report(spec: &RunSpec, method: Method) -> Result<AccuracyReport> {
    match method {
        Method::Q => {
            let table = q_table(&spec.series, spec.budget, spec.max_m, spec.path)?;
            Ok(match &spec.limit {
                Some(s) => acceleration_ratios(&table, s),
                None => assess(table.cells(), table.sums(), None, spec.precision),
            })
        }
        Method::Classic(c) => {
            // Levin estimates read one term past the last sum they use.
            let sums = partial_sums(&spec.series, spec.budget)?;
            let cells = classic_cells(&sums, c, spec.budget, spec.max_m)?;
            Ok(assess(&cells, &sums, spec.limit.as_ref(), spec.precision))
        }
    }
}

fn has_failures(report: &AccuracyReport) -> bool {
    report.cells.values().any(|c| c.value.is_err())
}

fn render(spec: &RunSpec, report: &AccuracyReport, method: Method) -> String {
    match spec.format {
        Format::Csv => report::to_csv(report, spec.content, spec.digits()),
        Format::Text => report::to_text(report, spec.content, spec.digits()),
        Format::Json => report::to_json(report, &spec.meta(method)),
    }
}

fn series_line(spec: &RunSpec) -> String {
    let l = &spec.literals;
    format!(
        "alpha=({}) beta=({}) x={}",
        l.alpha.join(", "),
        l.beta.join(", "),
        l.x
    )
}

/// Runs a validated spec. The exit code is 0, or 1 when `--strict` is set
/// and some cell is degenerate.
pub fn execute(spec: &RunSpec) -> Result<Outcome> {
    let mut failed = false;
    let stdout = match spec.command {
        CommandKind::Sum => {
            let mut rows = Vec::new();
            for &method in &spec.methods {
                let report = method_report(spec, method)?;
                // Largest m at the smallest n.
                let best = report
                    .cells
                    .iter()
                    .filter(|(k, _)| k.0 == 1)
                    .max_by_key(|(k, _)| k.1)
                    .map(|(k, c)| (*k, c.clone()));
                let Some((key, cell)) = best else { continue };
                failed |= cell.value.is_err();
                rows.push((method, key, cell, report));
            }
            let digits = spec.digits();
            match spec.format {
                Format::Text => {
                    let mut out = format!("series {}\n", series_line(spec));
                    for (method, (n, m), cell, _) in &rows {
                        let value = match &cell.value {
                            Ok(v) => format_number(v, digits),
                            Err(e) => e.to_string(),
                        };
                        let _ = write!(out, "{:<8} n={n} m={m}  {value}", method.name());
                        if let Some(a) = cell.acc {
                            let _ = write!(out, "  acc={a:.1}");
                        }
                        out.push('\n');
                    }
                    out
                }
                Format::Csv => {
                    let mut out = String::from("method,n,m,value,acc\n");
                    for (method, (n, m), cell, _) in &rows {
                        let value = cell
                            .value
                            .as_ref()
                            .map(|v| format_number(v, digits))
                            .unwrap_or_else(|_| "NaN".into());
                        let acc = cell.acc.map(|a| format!("{a:.1}")).unwrap_or_default();
                        let _ = writeln!(out, "{},{n},{m},{value},{acc}", method.name());
                    }
                    out
                }
                Format::Json => {
                    let singles: Vec<(AccuracyReport, Meta)> = rows
                        .iter()
                        .map(|(method, key, cell, report)| {
                            let mut one = report.clone();
                            one.cells.retain(|k, _| k == key);
                            one.cells.insert(*key, cell.clone());
                            (one, spec.meta(*method))
                        })
                        .collect();
                    let refs: Vec<(&AccuracyReport, Meta)> =
                        singles.iter().map(|(r, m)| (r, m.clone())).collect();
                    report::to_json_list(&refs)
                }
            }
        }
        CommandKind::Table => {
            let method = spec.methods[0];
            let report = method_report(spec, method)?;
            failed |= has_failures(&report);
            render(spec, &report, method)
        }
        CommandKind::Compare => {
            let mut reports = Vec::new();
            for &method in &spec.methods {
                let report = method_report(spec, method)?;
                failed |= has_failures(&report);
                reports.push((method, report));
            }
            match spec.format {
                Format::Json => {
                    let refs: Vec<(&AccuracyReport, Meta)> =
                        reports.iter().map(|(m, r)| (r, spec.meta(*m))).collect();
                    report::to_json_list(&refs)
                }
                _ => {
                    let blocks: Vec<String> = reports
                        .iter()
                        .map(|(m, r)| format!("# {}\n{}", m.name(), render(spec, r, *m)))
                        .collect();
                    blocks.join("\n")
                }
            }
        }
        CommandKind::Diagnose => {
            let (text, any_failed) = diagnose(spec)?;
            failed |= any_failed;
            text
        }
    };
    Ok(Outcome {
        code: if failed && spec.strict { 1 } else { 0 },
        stdout,
        stderr: String::new(),
    })
}

fn diagnose(spec: &RunSpec) -> Result<(String, bool)> {
    let limit = spec
        .limit
        .as_ref()
        .ok_or_else(|| Error::Usage("diagnose needs a reference limit".into()))?;
    let series = &spec.series;
    let table = q_table(series, spec.budget, spec.max_m, spec.path)?;
    let mut report = acceleration_ratios(&table, limit);
    report.cells.retain(|k, _| k.1 >= 1);
    let failed = has_failures(&report);
    let digits = spec.digits();

    match spec.format {
        Format::Csv => return Ok((report::to_csv(&report, Content::Condition, digits), failed)),
        Format::Json => return Ok((report::to_json(&report, &spec.meta(Method::Q)), failed)),
        Format::Text => {}
    }

    let show = |z: &HPComplex| format_number(z, 12);
    let mut out = format!("series {}\n", series_line(spec));
    let class = classify(series);
    let _ = writeln!(
        out,
        "convergence {}  sigma={}  ratio limit x={}",
        serde_json::to_value(class.kind)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        show(&class.sigma),
        show(&class.ratio_hint)
    );
    let c = asymptotic_coeffs(series);
    let _ = writeln!(
        out,
        "asymptotic b1={}  b2={}  d1={}  d2={}",
        show(&c.b1),
        show(&c.b2),
        show(&c.d1),
        c.d2.as_ref()
            .map(show)
            .unwrap_or_else(|| "undefined (b1 = 0)".into())
    );

    let window = 8;
    let points = [spec.budget, 10 * spec.budget];
    let sums = partial_sums(series, points[1] + window)?;
    out.push_str("remainder ratio r(n+1)/r(n)\n");
    for n in points {
        match ratio_probe(series, limit, &sums, n, window) {
            Ok(probe) => {
                let _ = writeln!(
                    out,
                    "  n={n:<5} {}  fitted limit {}",
                    show(&probe.ratio),
                    show(&probe.fitted_limit)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "  n={n:<5} {e}");
            }
        }
    }

    out.push_str("acceleration condition\n");
    out.push_str(&report::to_text(&report, Content::Condition, 12));
    out.push_str("|condition - 1|\n");
    out.push_str(&report::text_table(&report, |cell| {
        match cell.condition.as_ref()? {
            Ok(v) => Some(format!(
                "{:.3e}",
                (v - &HPComplex::one(v.digits())).abs_f64()
            )),
            Err(_) => Some("NaN".into()),
        }
    }));
    Ok((out, failed))
}

/// Parses and executes; never panics on bad input.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let fail = |code, msg: String| Outcome {
        code,
        stdout: String::new(),
        stderr: if msg.ends_with('\n') { msg } else { msg + "\n" },
    };
    match parse_args(argv) {
        Err(Error::Help(text)) => Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => fail(2, e.to_string()),
        Ok(spec) => match execute(&spec) {
            Ok(outcome) => outcome,
            Err(e @ Error::Usage(_)) => fail(2, e.to_string()),
            Err(e) => fail(1, format!("error: {e}")),
        },
    }
}
