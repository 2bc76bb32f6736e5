//! Batch front-end: one datum per input line, one report per datum.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::builder::TypedValueParser as _;
use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bform::{
    holomorphic_basis, pairing_matrices, BFormReport, LiftedQuadratic, QuadratureOptions, SuperellipticCurve,
};
use crate::coverings::{
    cyclic_to_pillow, is_determinant_locus, locus_metadata, BoundVerdict, CoverReport, CyclicCoverSpec, LocusSpec,
    SphereDifferential,
};
use crate::cylinders::ekz_for_pillow;
use crate::error::{Error, Result};
use crate::lyapunov::{
    certify_degenerate, trace_csv, CertifyInput, CertifyOptions, CocycleWalk, Verdict, DEFAULT_BLOCKS,
    DEFAULT_EPSILON, DEFAULT_REORTHO, DEFAULT_SEEDS, DEFAULT_STEPS,
};
use crate::orbit::{enumerate_orbit, DeckSurface, DEFAULT_ORBIT_CAP};
use crate::permsurf::{Origami, PillowCover};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Cover report: degree, genus, stratum, poles.
    Construct,
    /// Degeneracy certificate from the Monte-Carlo and exact channels.
    Certify,
    /// Dump of the SL(2,Z)-orbit of the double cover.
    Orbit,
    /// Exact Lyapunov sum.
    Ekz,
    /// Monte-Carlo Lyapunov exponents.
    Lyapunov,
    /// Numerical B-form and θ-spectrum.
    Bform,
    /// Pole-count, degree and unbranched-pole bounds.
    Bounds,
    /// Dimension and target stratum of a locus.
    Locus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Run configuration, parsed from the command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "pillowtile", version, about = "Pillow-tiled surfaces, cyclic covers and degenerate Lyapunov spectra")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Input file, one datum per line; `-` reads standard input.
    pub input: PathBuf,
    /// Continued-fraction digits per Monte-Carlo run.
    #[arg(long, default_value_t = DEFAULT_STEPS, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub steps: usize,
    /// Number of seeds; seeds are 1, 2, ..., K.
    #[arg(long, default_value_t = DEFAULT_SEEDS, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub seeds: usize,
    /// Blocks per run for standard errors.
    #[arg(long, default_value_t = DEFAULT_BLOCKS, value_parser = clap::value_parser!(u64).range(10..).map(|v| v as usize))]
    pub blocks: usize,
    /// Degeneracy threshold, in (0, 0.1).
    #[arg(long, default_value_t = DEFAULT_EPSILON, value_parser = parse_epsilon)]
    pub epsilon: f64,
    #[arg(long = "orbit-cap", default_value_t = DEFAULT_ORBIT_CAP, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub orbit_cap: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// CSV file for per-block partial exponents (`lyapunov`).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Position of the fourth branch value for cyclic `bform` lines; repeatable.
    #[arg(long = "t", value_parser = parse_complex, default_values_t = [Complex64::new(0.3, 0.0), Complex64::new(0.2, 0.7)])]
    pub t: Vec<Complex64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "PILLOWTILE_THREADS")]
    pub threads: Option<usize>,
}

fn parse_epsilon(s: &str) -> std::result::Result<f64, String> {
    let e: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if e > 0.0 && e < 0.1 {
        Ok(e)
    } else {
        Err(format!("epsilon must lie in (0, 0.1), got {e}"))
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    s.parse::<Complex64>().map_err(|_| format!("`{s}` is not a complex number"))
}

/// A parsed input line.
#[derive(Debug, Clone)]
pub enum Datum {
    Cyclic(CyclicCoverSpec),
    Pillow(PillowCover),
    Origami(Origami),
    Locus(LocusSpec),
    Hyperelliptic(Vec<Complex64>),
    /// `curve N z1:a1 z2:a2 ... [| s [p1:k1 ...]]`
    Curve(SuperellipticCurve, LiftedQuadratic),
}

impl Datum {
    fn label(&self, raw: &str) -> String {
        match self {
            Datum::Cyclic(s) => s.to_string(),
            _ => raw.trim().to_string(),
        }
    }

    fn pillow(&self) -> Result<PillowCover> {
        match self {
            Datum::Cyclic(s) => Ok(cyclic_to_pillow(s).0),
            Datum::Pillow(p) => Ok(p.clone()),
            _ => Err(Error::Parse("expected `N a1 a2 a3 a4` or `d; g0; g1; g2; g3`".into())),
        }
    }
}

fn parse_pair(tok: &str) -> Result<(Complex64, i64)> {
    let (z, k) = tok.rsplit_once(':').ok_or_else(|| Error::Parse(format!("expected `point:exponent`, got `{tok}`")))?;
    let z = parse_complex(z).map_err(Error::Parse)?;
    let k = k.parse().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
    Ok((z, k))
}

fn parse_curve(rest: &str) -> Result<Datum> {
    let (curve_part, q_part) = match rest.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    let mut toks = curve_part.split_whitespace();
    let n: u32 = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("`curve` needs N first".into()))?;
    let pairs: Vec<(Complex64, i64)> = toks.map(parse_pair).collect::<Result<_>>()?;
    let exps = pairs
        .iter()
        .map(|p| u32::try_from(p.1).map_err(|_| Error::Parse(format!("negative exponent {}", p.1))))
        .collect::<Result<Vec<_>>>()?;
    let curve = SuperellipticCurve::new(n, pairs.iter().map(|p| p.0).collect(), exps)?;
    let q = match q_part {
        None => {
            let poles = curve.points.iter().map(|&p| (p, -1)).collect();
            LiftedQuadratic::pullback(SphereDifferential::new(Complex64::new(1.0, 0.0), poles)?)
        }
        Some(qs) => {
            let mut toks = qs.split_whitespace();
            let s: i32 = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse("q part needs the power of w first".into()))?;
            let factors = toks.map(parse_pair).collect::<Result<_>>()?;
            LiftedQuadratic { base: SphereDifferential::new(Complex64::new(1.0, 0.0), factors)?, w_power: s }
        }
    };
    Ok(Datum::Curve(curve, q))
}

/// Parses one line for the given command.
pub fn parse_line(command: Command, line: &str) -> Result<Datum> {
    let line = line.trim();
    if command == Command::Locus {
        return Ok(Datum::Locus(line.parse()?));
    }
    if command == Command::Bform {
        if let Some(rest) = line.strip_prefix("hyper") {
            let pts = rest
                .split_whitespace()
                .map(|t| parse_complex(t).map_err(Error::Parse))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Datum::Hyperelliptic(pts));
        }
        if let Some(rest) = line.strip_prefix("curve") {
            return parse_curve(rest);
        }
        return Ok(Datum::Cyclic(line.parse()?));
    }
    match line.matches(';').count() {
        0 => Ok(Datum::Cyclic(line.parse()?)),
        2 if command == Command::Orbit => Ok(Datum::Origami(line.parse()?)),
        4 => Ok(Datum::Pillow(line.parse()?)),
        _ => Err(Error::Parse(format!("unrecognized line `{line}`"))),
    }
}

/// Exit status of a whole run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CONTRADICTION: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Datum(_)
        | Error::Monodromy(_)
        | Error::Locus(_)
        | Error::Connectivity(_)
        | Error::Geometry(_)
        | Error::Precondition(_) => EXIT_PARSE,
        Error::OrbitCap { .. } => EXIT_CAP,
        Error::Consistency(_) | Error::Calibration(_) => EXIT_CONTRADICTION,
        _ => EXIT_FAILED,
    }
}

/// Result of one line: JSON record, CSV rows, trace rows and exit status.
struct LineResult {
    record: Value,
    csv: Vec<Vec<String>>,
    trace: Option<String>,
    status: i32,
}

impl LineResult {
    fn plain(record: Value, csv: Vec<Vec<String>>) -> Self {
        LineResult { record, csv, trace: None, status: EXIT_OK }
    }
}

fn csv_header(command: Command) -> &'static str {
    match command {
        Command::Construct => "input,degree,genus,stratum,n,branch_count,galois",
        Command::Certify => "input,verdict,max_exponent,exact_sum,criterion",
        Command::Orbit => "input,size,squares,orientable",
        Command::Ekz => "input,stratum,n,kappa_term,pole_term,sv_term,lyap_sum",
        Command::Lyapunov => "input,seed,lambda_plus,lambda_minus,converged",
        Command::Bform => "input,t,genus,theta,quad_error",
        Command::Bounds => "input,check,status,lhs,rhs",
        Command::Locus => "input,n,dim,target_stratum,genus",
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ")
}

fn bform_one(label: &str, t: Option<Complex64>, curve: &SuperellipticCurve, q: &LiftedQuadratic) -> Result<(Value, Vec<String>)> {
    let basis = holomorphic_basis(curve)?;
    let report: BFormReport = pairing_matrices(curve, q, &basis, &QuadratureOptions::default())?;
    let mut v = serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
    v["input"] = json!(label);
    if let Some(t) = t {
        v["t"] = json!([t.re, t.im]);
    }
    let row = vec![
        label.to_string(),
        t.map_or(String::new(), |t| t.to_string()),
        report.curve.genus.to_string(),
        join(&report.theta),
        format!("{:.3e}", report.quad_error),
    ];
    Ok((v, row))
}

fn run_line(cfg: &RunConfig, datum: &Datum, label: &str) -> Result<LineResult> {
    let seeds: Vec<u64> = (1..=cfg.seeds as u64).collect();
    match cfg.command {
        Command::Construct => {
            let r = match datum {
                Datum::Cyclic(s) => CoverReport::from_cyclic(s),
                _ => CoverReport::from_pillow(&datum.pillow()?),
            };
            let row = vec![
                label.into(),
                r.degree.to_string(),
                r.genus.to_string(),
                r.stratum.to_string(),
                r.n.to_string(),
                r.branch_count.to_string(),
                r.galois.to_string(),
            ];
            let mut v = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
            v["input"] = json!(label);
            v["stratum_label"] = json!(r.stratum.to_string());
            Ok(LineResult::plain(v, vec![row]))
        }
        Command::Certify => {
            let input = match datum {
                Datum::Cyclic(s) => CertifyInput::Cyclic(*s),
                _ => CertifyInput::Pillow(datum.pillow()?),
            };
            let opts = CertifyOptions {
                epsilon: cfg.epsilon,
                steps: cfg.steps,
                seeds,
                blocks: cfg.blocks,
                orbit_cap: cfg.orbit_cap,
            };
            let c = certify_degenerate(&input, &opts)?;
            let status = if c.verdict == Verdict::Contradiction { EXIT_CONTRADICTION } else { EXIT_OK };
            let row = vec![
                label.into(),
                format!("{:?}", c.verdict).to_uppercase(),
                format!("{:.6}", c.max_exponent),
                c.exact_sum.clone().unwrap_or_default(),
                c.criterion.as_ref().map_or(String::new(), |k| k.degenerate.to_string()),
            ];
            let v = serde_json::to_value(&c).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(LineResult { record: v, csv: vec![row], trace: None, status })
        }
        Command::Orbit => {
            let seed = match datum {
                Datum::Origami(o) => DeckSurface::plain(o.clone()),
                _ => DeckSurface::from_pillow(&datum.pillow()?),
            };
            let g = enumerate_orbit(&seed, cfg.orbit_cap)?;
            let orientable = g.vertices[g.base].involution.is_none();
            let row = vec![label.into(), g.size().to_string(), g.vertices[0].squares().to_string(), orientable.to_string()];
            let v = json!({
                "input": label,
                "size": g.size(),
                "base": g.base,
                "vertices": g.vertices.iter().map(|s| json!({
                    "origami": s.origami.to_string(),
                    "involution": s.involution.as_ref().map(|i| i.to_string()),
                })).collect::<Vec<_>>(),
                "edges": g.edges.iter().map(|e| json!([e.from, e.gen.to_string(), e.to])).collect::<Vec<_>>(),
            });
            Ok(LineResult::plain(v, vec![row]))
        }
        Command::Ekz => {
            let (g, r) = ekz_for_pillow(&datum.pillow()?, cfg.orbit_cap)?;
            let row = vec![
                label.into(),
                r.stratum.clone(),
                r.n.to_string(),
                crate::rational::to_text(&r.kappa_term),
                crate::rational::to_text(&r.pole_term),
                crate::rational::to_text(&r.sv_term),
                crate::rational::to_text(&r.lyap_sum),
            ];
            let mut v = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
            v["input"] = json!(label);
            v["orbit_size"] = json!(g.size());
            Ok(LineResult::plain(v, vec![row]))
        }
        Command::Lyapunov => {
            let walk = CocycleWalk::new(&datum.pillow()?, cfg.orbit_cap)?;
            let est = walk.run_seeds(cfg.steps, &seeds, cfg.blocks, DEFAULT_REORTHO)?;
            let rows = est
                .iter()
                .map(|e| {
                    vec![
                        label.into(),
                        e.seed.to_string(),
                        join(&e.lambda_plus),
                        join(&e.lambda_minus),
                        e.converged.to_string(),
                    ]
                })
                .collect();
            let v = json!({
                "input": label,
                "orbit_size": walk.graph.size(),
                "rank": walk.cocycle.rank(),
                "orientable": walk.is_orientable(),
                "estimates": est,
            });
            let mut trace = String::new();
            let _ = writeln!(trace, "# {label}");
            trace.push_str(&trace_csv(&est));
            Ok(LineResult { record: v, csv: rows, trace: Some(trace), status: EXIT_OK })
        }
        Command::Bform => {
            let mut records = Vec::new();
            let mut rows = Vec::new();
            match datum {
                Datum::Cyclic(s) => {
                    for &t in &cfg.t {
                        let curve = SuperellipticCurve::from_cyclic(s, t)?;
                        let q = LiftedQuadratic::pullback(SphereDifferential::standard(t)?);
                        let (v, row) = bform_one(label, Some(t), &curve, &q)?;
                        records.push(v);
                        rows.push(row);
                    }
                }
                Datum::Hyperelliptic(pts) => {
                    let curve = SuperellipticCurve::hyperelliptic(pts.clone())?;
                    let (v, row) = bform_one(label, None, &curve, &LiftedQuadratic::anti_invariant())?;
                    records.push(v);
                    rows.push(row);
                }
                Datum::Curve(curve, q) => {
                    let (v, row) = bform_one(label, None, curve, q)?;
                    records.push(v);
                    rows.push(row);
                }
                _ => return Err(Error::Parse("unsupported bform line".into())),
            }
            let record = if records.len() == 1 { records.pop().expect("one record") } else { Value::Array(records) };
            Ok(LineResult::plain(record, rows))
        }
        Command::Bounds => {
            let (report, degenerate) = match datum {
                Datum::Cyclic(s) => (CoverReport::from_cyclic(s), is_determinant_locus(s)?.degenerate),
                _ => {
                    let p = datum.pillow()?;
                    let (_, ekz) = ekz_for_pillow(&p, cfg.orbit_cap)?;
                    (CoverReport::from_pillow(&p), ekz.is_degenerate())
                }
            };
            let verdict = BoundVerdict::new(label.to_string(), &report, degenerate);
            let rows = verdict
                .checks
                .iter()
                .map(|c| {
                    vec![
                        label.into(),
                        c.name.clone(),
                        format!("{:?}", c.status).to_lowercase(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                    ]
                })
                .collect();
            let status = if verdict.ok() { EXIT_OK } else { EXIT_FAILED };
            let v = serde_json::to_value(&verdict).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(LineResult { record: v, csv: rows, trace: None, status })
        }
        Command::Locus => {
            let Datum::Locus(l) = datum else {
                return Err(Error::Parse("expected a locus line".into()));
            };
            let m = locus_metadata(l)?;
            let row = vec![label.into(), m.n.to_string(), m.dim.to_string(), m.target_stratum.to_string(), m.genus.to_string()];
            let mut v = serde_json::to_value(&m).map_err(|e| Error::Internal(e.to_string()))?;
            v["input"] = json!(label);
            Ok(LineResult::plain(v, vec![row]))
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Everything a run produces, before it is written anywhere.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub status: i32,
    pub report: String,
    pub trace: Option<String>,
    /// One message per failed line.
    pub errors: Vec<String>,
}

/// Parses every line, runs the command on each (in parallel, reported in
/// input order) and renders the report. Parse errors abort before any work
/// with exit status 2; otherwise the status is that of the first failing
/// line, or the worst verdict.
pub fn run_text(cfg: &RunConfig, text: &str) -> RunOutput {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut parsed = Vec::with_capacity(lines.len());
    let mut errors = Vec::new();
    for &(no, line) in &lines {
        match parse_line(cfg.command, line) {
            Ok(d) => parsed.push((no, line, d)),
            Err(e) => errors.push(format!("line {no}: {e}")),
        }
    }
    if !errors.is_empty() {
        return RunOutput { status: EXIT_PARSE, report: String::new(), trace: None, errors };
    }

    let results: Vec<(usize, String, Result<LineResult>)> = parsed
        .par_iter()
        .map(|(no, line, d)| {
            let label = d.label(line);
            let r = run_line(cfg, d, &label);
            (*no, label, r)
        })
        .collect();

    let mut status = EXIT_OK;
    let mut first_error: Option<i32> = None;
    let mut records = Vec::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut trace = String::new();
    for (no, label, r) in results {
        match r {
            Ok(lr) => {
                status = status.max(lr.status);
                records.push(lr.record);
                rows.extend(lr.csv);
                if let Some(t) = lr.trace {
                    trace.push_str(&t);
                }
            }
            Err(e) => {
                first_error.get_or_insert(exit_code(&e));
                errors.push(format!("line {no}: {e}"));
                records.push(json!({ "input": label, "error": e.to_string() }));
            }
        }
    }
    let report = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&Value::Array(records)).expect("JSON values serialize") + "\n",
        Format::Csv => {
            let mut s = String::from(csv_header(cfg.command));
            s.push('\n');
            for row in rows {
                s.push_str(&row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
    };
    RunOutput {
        status: first_error.unwrap_or(status),
        report,
        trace: (cfg.command == Command::Lyapunov && cfg.trace.is_some()).then_some(trace),
        errors,
    }
}

/// Reads the input, runs, writes the report and trace; returns the exit
/// status.
pub fn run(cfg: &RunConfig) -> i32 {
    if let Some(n) = cfg.threads {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let text = if cfg.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&cfg.input)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cfg.input.display());
            return EXIT_PARSE;
        }
    };
    let out = run_text(cfg, &text);
    for e in &out.errors {
        eprintln!("error: {e}");
    }
    if out.status == EXIT_PARSE && out.report.is_empty() {
        return out.status;
    }
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &out.report),
        None => {
            print!("{}", out.report);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_FAILED;
    }
    if let (Some(path), Some(trace)) = (&cfg.trace, &out.trace) {
        if let Err(e) = std::fs::write(path, trace) {
            eprintln!("error: cannot write trace: {e}");
            return EXIT_FAILED;
        }
    }
    out.status
}
