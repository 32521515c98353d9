//! Command-line front end.
//!
//! Exit codes: 0 success / hypothesis satisfied, 1 mathematical failure,
//! 2 input error, 3 precision error.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::analysis::{
    divergence_check, hypothesis_boundary, render_table, term_valuation_profile, LinearMapProfile,
    Rational,
};
use crate::error::Error;
use crate::mahler::{
    check_hypothesis, eval_flow, eval_flow_symbolic, interpolate_with, stabilize, FlowValue,
    InterpolatedFlow, InterpolationOptions, DEFAULT_POWER_BUDGET,
};
use crate::orbit::{orbit, solve_hit, OrbitQuery};
use crate::padic::{parse_padic, parse_rational, PAdicInt, PrimeContext};
use crate::series::AnalyticMap;
use crate::wire::{to_canonical_json, FlowJson, MapJson, PAdicJson, QueryJson, ReportJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "padic-iter", version, about = "p-adic interpolation of iterates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the contraction level c and test c > 1/(p-1).
    Check {
        /// Map file, `-` for stdin, or inline JSON.
        map: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Interpolate the iterates of a map modulo p^M.
    Interpolate {
        map: String,
        #[arg(long)]
        prec: u32,
        #[arg(long)]
        degree_cap: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate f^n(x0) for integer, rational or p-adic n.
    Eval {
        /// Map file or flow file.
        input: String,
        /// Comma-separated coordinates (integers or a/b).
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Time: integer, a/b with b prime to p, or a residue.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        /// Output precision (defaults to the flow's precision for flow files).
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Find s and r such that f^(s p^r) satisfies the hypothesis.
    Powerup {
        map: String,
        /// Precision used for the composition (at least the map's own).
        #[arg(long)]
        prec: Option<u32>,
        /// Largest r tried.
        #[arg(long, default_value_t = DEFAULT_POWER_BUDGET)]
        budget: u32,
        /// Write the iterate as a map file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Term-valuation table and verdict for f(x) = λx with v(λ-1) = valuation.
    Analyze {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        valuation: String,
        #[arg(long, default_value_t = 16)]
        mmax: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Solve an orbit-hitting query.
    Solve {
        query: String,
        /// Override the query's precision M.
        #[arg(long)]
        prec: Option<u32>,
        /// Override the query's direct-search bound B.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print x0, f(x0), .., f^K(x0).
    Orbit {
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Reduce the orbit modulo p^prec.
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisFailed { .. }
        | Error::BudgetExceeded(_)
        | Error::NotLinearModP(_)
        | Error::NotInvertible
        | Error::CertificateViolation { .. } => EXIT_MATH,
        Error::PrecisionUnderflow(_)
        | Error::DegreeCapExceeded { .. }
        | Error::ValuationError(_) => EXIT_PRECISION,
        Error::NotPrime(_)
        | Error::InvalidPrecision(_)
        | Error::InvalidInput(_)
        | Error::ContextMismatch(_)
        | Error::DimensionMismatch { .. } => EXIT_INPUT,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut message = e.to_string();
        if matches!(e, Error::HypothesisFailed { .. }) {
            message.push_str("\nhint: run `padic-iter powerup` to find an iterate f^(s p^r) that satisfies it");
        }
        Failure {
            code: exit_code(&e),
            message,
        }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: msg.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read_source(src: &str) -> std::result::Result<String, Failure> {
    let t = src.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(src).map_err(|e| input_error(format!("reading {src}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> std::result::Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| input_error(format!("malformed {what} JSON: {e}")))
}

/// Accept a bare map or any object carrying it under `"map"` (such as the
/// output of `powerup`).
fn load_map(src: &str) -> std::result::Result<AnalyticMap, Failure> {
    let text = read_source(src)?;
    let value: serde_json::Value = parse_json(&text, "map")?;
    let value = match value.get("map") {
        Some(inner) if value.get("components").is_none() => inner.clone(),
        _ => value,
    };
    let j: MapJson = serde_json::from_value(value)
        .map_err(|e| input_error(format!("malformed map JSON: {e}")))?;
    Ok(AnalyticMap::try_from(&j)?)
}

fn parse_point(ctx: &PrimeContext, s: &str) -> std::result::Result<Vec<PAdicInt>, Failure> {
    s.split(',')
        .map(|t| parse_padic(ctx, t.trim()).map_err(Failure::from))
        .collect()
}

fn emit(
    out: &mut dyn Write,
    path: Option<&PathBuf>,
    text: &str,
) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("writing {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| input_error(format!("writing output: {e}"))),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    to_canonical_json(v)
}

/// Run a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check { map, format } => cmd_check(map, *format, out),
        Command::Interpolate {
            map,
            prec,
            degree_cap,
            out: path,
        } => cmd_interpolate(map, *prec, *degree_cap, path.as_ref(), out),
        Command::Eval {
            input,
            x0,
            n,
            prec,
            format,
        } => cmd_eval(input, x0, n, *prec, *format, out),
        Command::Powerup {
            map,
            prec,
            budget,
            out: path,
            format,
        } => cmd_powerup(map, *prec, *budget, path.as_ref(), *format, out, err),
        Command::Analyze {
            p,
            valuation,
            mmax,
            format,
        } => cmd_analyze(*p, valuation, *mmax, *format, out),
        Command::Solve {
            query,
            prec,
            bound,
            format,
            out: path,
        } => cmd_solve(query, *prec, *bound, *format, path.as_ref(), out, err),
        Command::Orbit {
            map,
            x0,
            steps,
            prec,
            format,
        } => cmd_orbit(map, x0, *steps, *prec, *format, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}

#[derive(Serialize)]
struct CheckJson {
    p: u64,
    c: String,
    threshold: String,
    satisfied: bool,
}

fn cmd_check(src: &str, format: Option<Format>, out: &mut dyn Write) -> CmdResult {
    let f = load_map(src)?;
    let h = check_hypothesis(&f);
    let p = f.ctx().p();
    let threshold = hypothesis_boundary(p);
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&CheckJson {
            p,
            c: h.c.to_string(),
            threshold: threshold.to_string(),
            satisfied: h.satisfied,
        }),
        _ => {
            if h.satisfied {
                format!("c={} > {threshold}: PASS\n", h.c)
            } else {
                format!("c={} ≤ {threshold}: FAIL\n", h.c)
            }
        }
    };
    emit(out, None, &text)?;
    Ok(if h.satisfied { EXIT_OK } else { EXIT_MATH })
}

fn cmd_interpolate(
    src: &str,
    prec: u32,
    degree_cap: Option<u32>,
    path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> CmdResult {
    let f = load_map(src)?;
    let flow = interpolate_with(&f, prec, InterpolationOptions { degree_cap })?;
    emit(out, path, &json(&FlowJson::from(&flow)))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EvalJson {
    p: u64,
    guaranteed_precision: u32,
    point: Vec<PAdicJson>,
}

fn render_value(v: &FlowValue, p: u64, format: Format) -> String {
    match format {
        Format::Json => json(&EvalJson {
            p,
            guaranteed_precision: v.guaranteed_precision,
            point: v.point.iter().map(PAdicJson::from).collect(),
        }),
        _ => {
            let coords: Vec<String> = v.point.iter().map(|x| x.residue().to_string()).collect();
            format!(
                "[{}] mod {}^{} (guaranteed precision {})\n",
                coords.join(", "),
                p,
                v.guaranteed_precision,
                v.guaranteed_precision
            )
        }
    }
}

fn cmd_eval(
    src: &str,
    x0: &str,
    n: &str,
    prec: Option<u32>,
    format: Option<Format>,
    out: &mut dyn Write,
) -> CmdResult {
    let text = read_source(src)?;
    let value: serde_json::Value = parse_json(&text, "input")?;
    let format = format.unwrap_or(Format::Text);
    if value.get("coefficients").is_some() {
        let j: FlowJson = serde_json::from_value(value)
            .map_err(|e| input_error(format!("malformed flow JSON: {e}")))?;
        let flow = InterpolatedFlow::try_from(&j)?;
        let ctx = flow.ctx().clone();
        let ctx = match prec {
            Some(m) => ctx.with_precision(m.min(ctx.precision()))?,
            None => ctx,
        };
        let point = parse_point(&ctx, x0)?;
        let a = parse_padic(&ctx, n)?;
        let v = eval_flow_symbolic(&flow, &point, &a)?;
        emit(out, None, &render_value(&v, ctx.p(), format))?;
        return Ok(EXIT_OK);
    }
    let f = load_map(&text)?;
    let m = prec.ok_or_else(|| input_error("--prec is required when evaluating a map"))?;
    let ctx = f.ctx().with_precision(m)?;
    let point = parse_point(&ctx, x0)?;
    let a = parse_padic(&ctx, n)?;
    let v = eval_flow(&f, &point, &a, m)?;
    emit(out, None, &render_value(&v, ctx.p(), format))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PowerupJson {
    s: u64,
    r: u32,
    /// `s p^r` as a decimal string.
    iterate: String,
    map: MapJson,
}

#[allow(clippy::too_many_arguments)]
fn cmd_powerup(
    src: &str,
    prec: Option<u32>,
    budget: u32,
    path: Option<&PathBuf>,
    format: Option<Format>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let f = load_map(src)?;
    let n = prec.unwrap_or(0).max(f.ctx().precision());
    let f = f.rebase(&f.ctx().with_precision(n)?)?;
    let st = stabilize(&f, budget)?;
    let iterate = BigInt::from(st.s) * BigInt::from(st.map.ctx().p()).pow(st.r);
    let map_json = MapJson::from(&st.map);
    if let Some(p) = path {
        emit(out, Some(p), &json(&map_json))?;
    }
    let summary = format!("s={} r={} iterate=f^{}\n", st.s, st.r, iterate);
    match format.unwrap_or(if path.is_some() { Format::Text } else { Format::Json }) {
        Format::Json => emit(
            out,
            None,
            &json(&PowerupJson {
                s: st.s,
                r: st.r,
                iterate: iterate.to_string(),
                map: map_json,
            }),
        )?,
        _ => emit(out, None, &summary)?,
    }
    let _ = err.write_all(summary.as_bytes());
    Ok(EXIT_OK)
}

fn cmd_analyze(
    p: u64,
    valuation: &str,
    mmax: u64,
    format: Option<Format>,
    out: &mut dyn Write,
) -> CmdResult {
    let (num, den) = parse_rational(valuation)?;
    let to_i64 = |x: &BigInt| -> std::result::Result<i64, Failure> {
        i64::try_from(x).map_err(|_| input_error(format!("valuation {valuation} out of range")))
    };
    let v = Rational::new(to_i64(&num)?, to_i64(&den)?);
    let profile = LinearMapProfile::new(p, v)?;
    let series = term_valuation_profile(&profile, mmax)?;
    let verdict = divergence_check(&profile);
    let csv = matches!(format, Some(Format::Csv));
    emit(out, None, &render_table(&series, &verdict, csv))?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    src: &str,
    prec: Option<u32>,
    bound: Option<u64>,
    format: Option<Format>,
    path: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let text = read_source(src)?;
    let mut j: QueryJson = parse_json(&text, "query")?;
    if let Some(m) = prec {
        j.precision = m;
    }
    if let Some(b) = bound {
        j.search_bound = b;
    }
    let query = OrbitQuery::try_from(&j)?;
    let report = solve_hit(&query)?;
    let summary = report.summary();
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            emit(out, path, &json(&ReportJson::from(&report)))?;
            let _ = err.write_all(summary.as_bytes());
        }
        _ => emit(out, path, &summary)?,
    }
    Ok(EXIT_OK)
}

fn cmd_orbit(
    src: &str,
    x0: &str,
    steps: usize,
    prec: Option<u32>,
    format: Option<Format>,
    out: &mut dyn Write,
) -> CmdResult {
    let f = load_map(src)?;
    let f = match prec {
        Some(m) => f.rebase(&f.ctx().with_precision(m)?)?,
        None => f,
    };
    let point = parse_point(f.ctx(), x0)?;
    let points = orbit(&f, &point, steps)?;
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|pt| pt.iter().map(|x| x.residue().to_string()).collect())
                .collect();
            json(&serde_json::json!({
                "p": f.ctx().p(),
                "precision": f.ctx().precision(),
                "orbit": rows,
            }))
        }
        _ => points
            .iter()
            .enumerate()
            .map(|(k, pt)| {
                let coords: Vec<String> = pt.iter().map(|x| x.residue().to_string()).collect();
                format!("{k}: [{}]\n", coords.join(", "))
            })
            .collect(),
    };
    emit(out, None, &text)?;
    Ok(EXIT_OK)
}
