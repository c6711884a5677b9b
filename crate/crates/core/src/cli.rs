//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and renders a JSON (or CSV) document plus an exit code; the
//! binary only prints what it returns.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::growth::{lower_bound, ltv_scan, verify_lemma, LtvSample, Target};
use crate::modular::{classify_hypothesis, dedekind_sum, enumerate_b};
use crate::quantum::{Color, RootContext};
use crate::rt::{rt_closed_with, rt_double_simplified, Parallelism};
use crate::seifert::SeifertSymbol;
use crate::triangulation::Triangulation;
use crate::tv::{
    statesum_value, tv_bounded_with, tv_closed_with, tv_statesum_with, FaceWeighting,
    StateSumOptions,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "seifert-tv",
    version,
    about = "WRT and Turaev-Viro invariants of Seifert fibered 3-manifolds",
    after_help = "Every command prints one JSON document:\n  \
        {\"schema\": 1, \"command\": ..., \"status\": \"ok\"|\"error\", \"payload\"|\"error\": ..., \
        \"diagnostics\": [...], \"timing_ms\": null|number}\n\
        Symbols are JSON such as {\"epsilon\":\"o\",\"genus\":1,\"fibers\":[[3,1],[5,1]],\"boundary\":true}, \
        given inline or as @path."
)]
pub struct Cli {
    /// Output format; csv is available for `scan` and `bound`.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the inner sums (results do not depend on this).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Omit wall-clock timing so identical invocations print identical bytes.
    #[arg(
        long,
        global = true,
        default_value_t = true,
        num_args = 0..=1,
        default_missing_value = "true",
        action = clap::ArgAction::Set
    )]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct SymbolArg {
    /// Seifert symbol as inline JSON or `@file`.
    #[arg(long)]
    pub symbol: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RtMethod {
    /// Term-by-term triple sum; needs a closed symbol.
    Direct,
    /// Closed form for the double of a bounded symbol; needs A | r.
    Simplified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TvMethod {
    Bridge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    M,
    Dm,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::M => Target::M,
            TargetArg::Dm => Target::DM,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Absorbed,
    Divided,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// RT_r(M) at q = e^{iπ/r}.
    #[command(
        after_help = "payload: {symbol, manifold: \"M\"|\"D(M)\", r, method, value: {re, im}, \
        term_magnitude_sum, term_count, vanishing, degenerate}\n\
        With --method simplified the symbol must have boundary and the value is RT_r(D(M))."
    )]
    Rt {
        #[command(flatten)]
        symbol: SymbolArg,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = RtMethod::Direct)]
        method: RtMethod,
    },
    /// TV_r from a symbol (via RT) or from a closed triangulation (6j state sum).
    #[command(
        after_help = "payload: {source, r, method, value, imaginary_residue, term_count, \
        term_magnitude_sum}; with --tri also vertices, edges, faces, tetrahedra, weighting.\n\
        Closed symbols give |RT_r|^2; bounded ones give Re RT_r(D(M))."
    )]
    Tv {
        /// Seifert symbol as inline JSON or `@file`.
        #[arg(long, conflicts_with = "tri", required_unless_present = "tri")]
        symbol: Option<String>,
        /// Triangulation file.
        #[arg(long)]
        tri: Option<String>,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = TvMethod::Bridge, conflicts_with = "tri")]
        method: TvMethod,
        /// Face weighting for the state sum.
        #[arg(long, value_enum, default_value_t = WeightingArg::Absorbed, requires = "tri")]
        weighting: WeightingArg,
    },
    /// The double D(M) of a bounded symbol.
    #[command(after_help = "payload: {input, symbol, text, euler_number}")]
    Double {
        #[command(flatten)]
        symbol: SymbolArg,
    },
    /// Normal form of a symbol.
    #[command(after_help = "payload: {input, symbol, text, euler_number}")]
    Normalize {
        #[command(flatten)]
        symbol: SymbolArg,
    },
    /// Congruence hypothesis, its certificate and the sufficient-condition case.
    #[command(
        after_help = "payload: {symbol, satisfied, case, label, certificate: null | \
        {gamma, mu, modulus, set_B, cardinality_B}}\ndiagnostics: warnings such as an even A."
    )]
    Certify {
        #[command(flatten)]
        symbol: SymbolArg,
    },
    /// Dedekind sum s(b, a) as an exact fraction.
    #[command(
        allow_negative_numbers = true,
        after_help = "payload: {b, a, value: \"p/q\", num, den, float}"
    )]
    Dedekind { b: i64, a: i64 },
    /// Quantum 6j symbol with rows (i j k) over (l m n).
    #[command(after_help = "payload: {colors: [i,j,k,l,m,n], r, value: {re, im}}")]
    Sixj {
        #[arg(num_args = 6, value_names = ["I", "J", "K", "L", "M", "N"])]
        colors: Vec<Color>,
        #[arg(long)]
        r: u32,
    },
    /// Growth sequence (2π/r) log|TV_r| over a list of levels.
    #[command(
        after_help = "Levels come from --rs, or from --k as r = kA for a certified bounded symbol.\n\
        Lists are comma separated; `a..b` expands to the odd integers in [a, b].\n\
        json payload: {symbol, target, samples: [{r, tv_abs, ltv_term, bound, bound_satisfied}], fit: \
        {slope, intercept}, expected_exponent, log_r_over_r_constant, trend, certificate}\n\
        csv columns: r,tv_abs,ltv_term,bound,bound_satisfied"
    )]
    Scan {
        #[command(flatten)]
        symbol: SymbolArg,
        #[arg(long, conflicts_with = "rs", required_unless_present = "rs")]
        k: Option<String>,
        #[arg(long)]
        rs: Option<String>,
        #[arg(long, value_enum, default_value_t = TargetArg::M)]
        target: TargetArg,
    },
    /// Lower bounds for |TV_{kA}(M)| and |TV_{kA}(D(M))|.
    #[command(
        after_help = "json payload: {symbol, modulus, cardinality_B, rows: [{k, r, bound_m, bound_dm}]}; \
        with --verify each row also has tv_m, tv_dm, satisfied_m, satisfied_dm, both_exceed_one, \
        and the payload has smallest_k_both_exceed_one.\n\
        csv columns: k,r,bound_m,bound_dm[,tv_m,tv_dm,satisfied_m,satisfied_dm]"
    )]
    Bound {
        #[command(flatten)]
        symbol: SymbolArg,
        #[arg(long)]
        k: String,
        /// Also evaluate TV at each level and compare.
        #[arg(long)]
        verify: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rt { .. } => "rt",
            Command::Tv { .. } => "tv",
            Command::Double { .. } => "double",
            Command::Normalize { .. } => "normalize",
            Command::Certify { .. } => "certify",
            Command::Dedekind { .. } => "dedekind",
            Command::Sixj { .. } => "sixj",
            Command::Scan { .. } => "scan",
            Command::Bound { .. } => "bound",
        }
    }
}

/// Failures of a CLI invocation.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.code(),
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 9,
            CliError::Core(e) => match e {
                Error::InvalidSymbol(_)
                | Error::InvalidFiber { .. }
                | Error::NotInvertible { .. } => 3,
                Error::TriangulationParse { .. } | Error::InvalidTriangulation(_) => 4,
                Error::Precondition(_)
                | Error::Domain(_)
                | Error::ColorOutOfRange { .. }
                | Error::NotAdmissible(_) => 5,
                Error::Hypothesis(_) | Error::Degenerate(_) => 6,
                Error::Numeric(_) => 7,
                Error::Unsupported(_) => 8,
            },
        }
    }
}

/// What the binary prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Success {
    payload: Value,
    diagnostics: Vec<String>,
    csv: Option<String>,
}

impl Success {
    fn json(payload: Value) -> Self {
        Success {
            payload,
            diagnostics: Vec::new(),
            csv: None,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    exit_code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                };
            }
            let err = CliError::Usage(rendered.lines().next().unwrap_or("usage error").to_string());
            return Outcome {
                exit_code: err.exit_code(),
                stdout: render_error(None, &err, None),
                stderr: rendered,
            };
        }
    };
    let start = Instant::now();
    let name = cli.command.name();
    let result = execute(&cli);
    let timing = (!cli.deterministic).then(|| start.elapsed().as_secs_f64() * 1e3);
    match result {
        Ok(success) => {
            let stdout = match (cli.format, success.csv) {
                (Format::Csv, Some(csv)) => csv,
                _ => {
                    let doc = json!({
                        "schema": SCHEMA_VERSION,
                        "command": name,
                        "status": "ok",
                        "payload": success.payload,
                        "diagnostics": success.diagnostics,
                        "timing_ms": timing,
                    });
                    pretty(&doc)
                }
            };
            Outcome {
                exit_code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(err) => Outcome {
            exit_code: err.exit_code(),
            stdout: render_error(Some(name), &err, timing),
            stderr: format!("error: {}\n", err.message()),
        },
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn render_error(command: Option<&str>, err: &CliError, timing: Option<f64>) -> String {
    pretty(&json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "status": "error",
        "error": { "code": err.code(), "message": err.message() },
        "diagnostics": [],
        "timing_ms": timing,
    }))
}

fn execute(cli: &Cli) -> Result<Success, CliError> {
    if cli.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let tabular = matches!(cli.command, Command::Scan { .. } | Command::Bound { .. });
    if cli.format == Format::Csv && !tabular {
        return Err(CliError::Usage(format!(
            "csv output is not available for `{}`",
            cli.command.name()
        )));
    }
    if cli.threads == 1 {
        return dispatch(&cli.command, Parallelism::Sequential);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command, Parallelism::Parallel))
}

fn read_symbol(arg: &str) -> Result<SeifertSymbol, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
        }
        None => arg.to_string(),
    };
    Ok(SeifertSymbol::from_json(&text)?)
}

/// Comma-separated integers; `a..b` expands to the odd integers in `[a, b]`.
pub fn parse_list(text: &str) -> Result<Vec<u32>, CliError> {
    let bad = |item: &str| CliError::Usage(format!("bad list item `{item}` in `{text}`"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| bad(item))?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad(item))?;
                out.extend((lo..=hi).filter(|x| x % 2 == 1));
            }
            None => out.push(item.parse().map_err(|_| bad(item))?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("empty list `{text}`")));
    }
    Ok(out)
}

fn symbol_payload(input: &SeifertSymbol, out: &SeifertSymbol) -> Result<Value, CliError> {
    Ok(json!({
        "input": input,
        "symbol": out,
        "text": out.to_string(),
        "euler_number": out.euler_number().ok().map(|e| e.to_string()),
    }))
}

fn dispatch(command: &Command, mode: Parallelism) -> Result<Success, CliError> {
    match command {
        Command::Rt { symbol, r, method } => {
            let s = read_symbol(&symbol.symbol)?;
            let (value, manifold) = match method {
                RtMethod::Direct => (rt_closed_with(&s, *r, mode)?, "M"),
                RtMethod::Simplified => (rt_double_simplified(&s, *r)?, "D(M)"),
            };
            let mut out = Success::json(json!({
                "symbol": s,
                "manifold": manifold,
                "r": r,
                "method": value.method,
                "value": { "re": value.value.re, "im": value.value.im },
                "term_magnitude_sum": value.term_magnitude_sum,
                "term_count": value.term_count,
                "vanishing": value.is_vanishing(),
                "degenerate": value.degenerate,
            }));
            if value.degenerate {
                out.diagnostics.push("no exceptional fibers: the simplified sum does not apply and 0 is a placeholder".into());
            }
            Ok(out)
        }
        Command::Tv {
            symbol,
            tri,
            r,
            weighting,
            ..
        } => match (symbol, tri) {
            (Some(sym), _) => {
                let s = read_symbol(sym)?;
                let tv = if s.has_boundary() {
                    tv_bounded_with(&s, *r, mode)?
                } else {
                    tv_closed_with(&s, *r, mode)?
                };
                Ok(Success::json(json!({
                    "source": "symbol",
                    "symbol": s,
                    "r": r,
                    "method": tv.method,
                    "value": tv.value,
                    "imaginary_residue": tv.imaginary_residue,
                    "term_count": tv.term_count,
                    "term_magnitude_sum": tv.term_magnitude_sum,
                })))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                let t = Triangulation::parse(&text)?;
                let ctx = RootContext::new(*r)?;
                let weighting = match weighting {
                    WeightingArg::Absorbed => FaceWeighting::Absorbed,
                    WeightingArg::Divided => FaceWeighting::Divided,
                };
                let options = StateSumOptions {
                    weighting,
                    edge_order: None,
                    parallelism: mode,
                };
                let mut diagnostics = Vec::new();
                let (re, im, count, mag) = match weighting {
                    FaceWeighting::Absorbed => {
                        let v = tv_statesum_with(&t, &ctx, &options)?;
                        (
                            v.value,
                            v.imaginary_residue,
                            v.term_count,
                            v.term_magnitude_sum,
                        )
                    }
                    FaceWeighting::Divided => {
                        let v = statesum_value(&t, &ctx, &options)?;
                        diagnostics.push("divided face weighting: value is reported as computed, possibly complex".into());
                        (v.value.re, v.value.im, v.term_count, v.term_magnitude_sum)
                    }
                };
                Ok(Success {
                    payload: json!({
                        "source": "triangulation",
                        "r": r,
                        "method": "statesum",
                        "weighting": weighting,
                        "value": re,
                        "imaginary_residue": im,
                        "term_count": count,
                        "term_magnitude_sum": mag,
                        "vertices": t.num_vertices(),
                        "edges": t.num_edges(),
                        "faces": t.num_faces(),
                        "tetrahedra": t.num_tetrahedra(),
                    }),
                    diagnostics,
                    csv: None,
                })
            }
            (None, None) => Err(CliError::Usage("tv needs --symbol or --tri".into())),
        },
        Command::Double { symbol } => {
            let s = read_symbol(&symbol.symbol)?;
            Ok(Success::json(symbol_payload(&s, &s.double()?)?))
        }
        Command::Normalize { symbol } => {
            let s = read_symbol(&symbol.symbol)?;
            Ok(Success::json(symbol_payload(&s, &s.normalize())?))
        }
        Command::Certify { symbol } => {
            let s = read_symbol(&symbol.symbol)?;
            s.require_positive_fibers()?;
            let c = classify_hypothesis(&s)?;
            Ok(Success {
                payload: json!({
                    "symbol": s,
                    "satisfied": c.certificate.as_ref().is_some_and(|cert| !cert.is_empty()),
                    "case": c.case,
                    "label": c.label,
                    "certificate": c.certificate,
                }),
                diagnostics: c.warnings,
                csv: None,
            })
        }
        Command::Dedekind { b, a } => {
            let s = dedekind_sum(*b, *a)?;
            Ok(Success::json(json!({
                "b": b,
                "a": a,
                "value": s.to_string(),
                "num": s.numerator() as i64,
                "den": s.denominator() as i64,
                "float": s.to_f64(),
            })))
        }
        Command::Sixj { colors, r } => {
            let ctx = RootContext::new(*r)?;
            let c: [Color; 6] = colors
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage("sixj takes exactly six colours".into()))?;
            let v = ctx.six_j(c)?;
            Ok(Success::json(
                json!({ "colors": c, "r": r, "value": { "re": v.re, "im": v.im } }),
            ))
        }
        Command::Scan {
            symbol,
            k,
            rs,
            target,
        } => {
            let s = read_symbol(&symbol.symbol)?;
            let levels = match (k, rs) {
                (_, Some(list)) => parse_list(list)?,
                (Some(list), None) => {
                    let a = certified_modulus(&s)?;
                    parse_list(list)?
                        .into_iter()
                        .map(|k| level(k, a))
                        .collect::<Result<Vec<_>, _>>()?
                }
                (None, None) => return Err(CliError::Usage("scan needs --k or --rs".into())),
            };
            let report = ltv_scan(&s, &levels, (*target).into(), mode)?;
            let certificate = if s.has_boundary() {
                enumerate_b(s.fibers())?
            } else {
                None
            };
            let mut csv = String::from("r,tv_abs,ltv_term,bound,bound_satisfied\n");
            for sample in &report.samples {
                csv_row(&mut csv, sample);
            }
            let mut payload = serde_json::to_value(&report).expect("report serializes");
            payload["certificate"] =
                serde_json::to_value(&certificate).expect("certificate serializes");
            Ok(Success {
                payload,
                diagnostics: Vec::new(),
                csv: Some(csv),
            })
        }
        Command::Bound { symbol, k, verify } => {
            let s = read_symbol(&symbol.symbol)?;
            let ks = parse_list(k)?;
            let a = certified_modulus(&s)?;
            let cert = enumerate_b(s.fibers())?.expect("certified above");
            let mut diagnostics = Vec::new();
            if a % 2 == 0 {
                diagnostics.push(format!("A = {a} is even, so r = kA is never an odd level"));
            }
            let mut rows = Vec::new();
            let mut csv = String::from(if *verify {
                "k,r,bound_m,bound_dm,tv_m,tv_dm,satisfied_m,satisfied_dm\n"
            } else {
                "k,r,bound_m,bound_dm\n"
            });
            let lemma = if *verify {
                Some(verify_lemma(&s, &ks)?)
            } else {
                None
            };
            for (idx, &k) in ks.iter().enumerate() {
                let bm = lower_bound(&s, k, &cert, Target::M)?;
                let bdm = lower_bound(&s, k, &cert, Target::DM)?;
                let r = k as i64 * a;
                let mut row = json!({ "k": k, "r": r, "bound_m": bm, "bound_dm": bdm });
                let _ = write!(csv, "{k},{r},{bm},{bdm}");
                if let Some(report) = &lemma {
                    let lr = &report.rows[idx];
                    row["tv_m"] = json!(lr.m.tv_abs);
                    row["tv_dm"] = json!(lr.dm.tv_abs);
                    row["satisfied_m"] = json!(lr.m.bound_satisfied);
                    row["satisfied_dm"] = json!(lr.dm.bound_satisfied);
                    row["both_exceed_one"] = json!(lr.both_exceed_one);
                    let _ = write!(
                        csv,
                        ",{},{},{},{}",
                        lr.m.tv_abs,
                        lr.dm.tv_abs,
                        lr.m.bound_satisfied.unwrap_or(false),
                        lr.dm.bound_satisfied.unwrap_or(false)
                    );
                }
                csv.push('\n');
                rows.push(row);
            }
            let mut payload = json!({
                "symbol": s,
                "modulus": a,
                "cardinality_B": cert.cardinality_b,
                "rows": rows,
            });
            if let Some(report) = &lemma {
                payload["smallest_k_both_exceed_one"] = json!(report.smallest_k_both_exceed_one);
            }
            Ok(Success {
                payload,
                diagnostics,
                csv: Some(csv),
            })
        }
    }
}

fn certified_modulus(s: &SeifertSymbol) -> Result<i64, CliError> {
    if !s.has_boundary() {
        return Err(
            Error::Domain(format!("{s} is closed; levels r = kA need M with boundary")).into(),
        );
    }
    s.require_positive_fibers()?;
    if s.fibers().is_empty() {
        return Err(Error::Degenerate("no exceptional fibers: A = 1 and B is empty".into()).into());
    }
    match enumerate_b(s.fibers())? {
        Some(cert) => Ok(cert.modulus_a),
        None => Err(Error::Hypothesis(format!("congruence system of {s} has no solution")).into()),
    }
}

fn level(k: u32, a: i64) -> Result<u32, CliError> {
    u32::try_from(k as i64 * a)
        .map_err(|_| Error::Precondition(format!("level {k}·{a} is too large")).into())
}

fn csv_row(out: &mut String, s: &LtvSample) {
    let opt = |x: Option<String>| x.unwrap_or_default();
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        s.r,
        s.tv_abs,
        s.ltv_term,
        opt(s.bound.map(|b| b.to_string())),
        opt(s.bound_satisfied.map(|b| b.to_string()))
    );
}
