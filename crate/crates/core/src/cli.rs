//! Command-line front end. Every report is available as text or as JSON
//! carrying `"schema": "1"`.
//!
//! Exit codes: 0 success, 1 a checked claim failed, 2 usage or input error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{classify, has_approximate_literals, parse_structure, StructureTensor};
use crate::catalog::{builtin_catalog, load_catalog, verify_catalog};
use crate::curvature::{
    b_forms, holonomy_span, mn_criterion, ricci_general, ricci_index_oracle, ricci_killing_zero, RicciData,
    DEFAULT_HOLONOMY_ORDER,
};
use crate::derivations::{derivation_space, diagonal_derivation_solve};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::metric::{parse_metric, signature, Metric};
use crate::moment::{gauge_derivative, jacobi_tangent_critical, moment, q_map, ricci_via_moment, scalar_functional, GaugeDirection};
use crate::nice::{all_sign_patterns, diagonal_einstein_search, diagonal_ricci, nice_basis_check, SearchOptions};
use crate::scalar::{set_float_tolerance, Float, Rational, Scalar};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "ricci-moment", version, about = "Curvature of left-invariant metrics on Lie groups")]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(long, global = true, env = "RICCI_BACKEND", value_enum)]
    pub backend: Option<BackendArg>,
    /// Relative tolerance of the float backend.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct StructureArg {
    /// Tuple notation, JSON, a file containing either, or `-` for stdin.
    #[arg(long)]
    pub structure: String,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub structure: StructureArg,
    /// `diag(...)`, a sum like `e1.e4 + 2*e2.e2`, JSON, or a file.
    #[arg(long)]
    pub metric: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    General,
    KillingZero,
    Moment,
    Oracle,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jacobi, unimodularity, nilpotency, Killing form, centre.
    Classify(StructureArg),
    /// Ricci tensor, operator and scalar curvature.
    Ricci {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "general")]
        route: Route,
    },
    /// The six invariant bilinear forms.
    Bforms(PairArgs),
    /// Einstein diagnosis.
    Einstein(PairArgs),
    /// Null-space criterion for nilpotent algebras.
    Mn(PairArgs),
    /// Span of curvature operators and their covariant derivatives.
    Holonomy {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_HOLONOMY_ORDER)]
        max_order: usize,
    },
    /// q(a, S), the contractions c1, c2 and the moment map.
    Moment(PairArgs),
    /// Scalar curvature via the moment-map formula.
    Scalar(PairArgs),
    /// Derivative of the scalar curvature along X in gl(n).
    GaugeDerivative {
        #[command(flatten)]
        pair: PairArgs,
        /// JSON array of rows, or `id`.
        #[arg(long)]
        x: String,
    },
    /// Whether (a, S) is critical along the tangent space of Lie brackets.
    Critical(PairArgs),
    /// Derivation algebra, trace witness and diagonal derivations.
    Derivations(StructureArg),
    /// Nice-basis check, and the diagonal Ricci tensor if `--diag` is given.
    Nice {
        #[command(flatten)]
        structure: StructureArg,
        /// Comma-separated diagonal metric entries.
        #[arg(long)]
        diag: Option<String>,
    },
    /// Search for diagonal Einstein metrics on a nice basis.
    EinsteinSearch {
        #[command(flatten)]
        structure: StructureArg,
        /// `all`, or patterns such as `++++--++` separated by commas.
        #[arg(long, default_value = "all")]
        patterns: String,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 100)]
        max_iterations: usize,
    },
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Verify every claim of every entry.
    Verify {
        /// JSON-lines file; the built-in catalog if omitted.
        #[arg(long)]
        file: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Only entries whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, code: 0 }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(report) => {
            let _ = if cli.json {
                let mut body = json!({ "schema": SCHEMA_VERSION, "command": command_name(&cli.command) });
                if let (Value::Object(dst), Value::Object(src)) = (&mut body, report.json) {
                    dst.extend(src);
                }
                writeln!(out, "{}", serde_json::to_string_pretty(&body).unwrap_or_default())
            } else {
                write!(out, "{}", report.text)
            };
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Ricci { .. } => "ricci",
        Command::Bforms(_) => "bforms",
        Command::Einstein(_) => "einstein",
        Command::Mn(_) => "mn",
        Command::Holonomy { .. } => "holonomy",
        Command::Moment(_) => "moment",
        Command::Scalar(_) => "scalar",
        Command::GaugeDerivative { .. } => "gauge-derivative",
        Command::Critical(_) => "critical",
        Command::Derivations(_) => "derivations",
        Command::Nice { .. } => "nice",
        Command::EinsteinSearch { .. } => "einstein-search",
        Command::Catalog { .. } => "catalog verify",
    }
}

/// Literal text, or the contents of the named file, or stdin for `-`.
fn read_input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('(') && path.is_file() {
        return Ok(std::fs::read_to_string(path)?);
    }
    Ok(arg.to_string())
}

fn structure_from<S: Scalar>(text: &str) -> Result<StructureTensor<S>> {
    let t = text.trim();
    if t.starts_with('{') {
        StructureTensor::from_json(&serde_json::from_str(t)?)
    } else {
        parse_structure(t)
    }
}

fn execute(cli: &Cli, err: &mut dyn Write) -> Result<Report> {
    if let Some(tol) = cli.tolerance {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::parse(0, format!("tolerance must be positive, got {tol}")));
        }
        set_float_tolerance(tol);
    }
    if let Command::Catalog { action: CatalogAction::Verify { file, jobs, filter } } = &cli.command {
        return catalog_verify(file.as_deref(), *jobs, filter.as_deref());
    }
    let (structure, metric) = match &cli.command {
        Command::Classify(s) | Command::Derivations(s) => (read_input(&s.structure)?, None),
        Command::Nice { structure, .. } | Command::EinsteinSearch { structure, .. } => {
            (read_input(&structure.structure)?, None)
        }
        Command::Ricci { pair, .. }
        | Command::Holonomy { pair, .. }
        | Command::GaugeDerivative { pair, .. }
        | Command::Bforms(pair)
        | Command::Einstein(pair)
        | Command::Mn(pair)
        | Command::Moment(pair)
        | Command::Scalar(pair)
        | Command::Critical(pair) => (read_input(&pair.structure.structure)?, Some(read_input(&pair.metric)?)),
        Command::Catalog { .. } => unreachable!("handled above"),
    };
    let approximate = has_approximate_literals(&structure) || metric.as_deref().is_some_and(has_approximate_literals);
    let mut backend = cli.backend.unwrap_or(BackendArg::Exact);
    if approximate && backend == BackendArg::Exact {
        let _ = writeln!(err, "warning: input has truncated decimals; using the float backend");
        backend = BackendArg::Float;
    }
    match backend {
        BackendArg::Exact => dispatch::<Rational>(cli, &structure, metric.as_deref()),
        BackendArg::Float => dispatch::<Float>(cli, &structure, metric.as_deref()),
    }
}

fn dispatch<S: Scalar>(cli: &Cli, structure: &str, metric_text: Option<&str>) -> Result<Report> {
    let a = structure_from::<S>(structure)?;
    let metric = metric_text.map(|t| parse_metric::<S>(t, a.dim())).transpose()?;
    let g = || metric.as_ref().expect("command takes a metric");
    match &cli.command {
        Command::Classify(_) => {
            let c = classify(&a);
            let opt = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
            let mut text = format!("dimension: {}\nis_lie: {}\n", a.dim(), c.is_lie);
            text += &format!("unimodular: {}\nnilpotent: {}\n", opt(c.unimodular), opt(c.nilpotent));
            if let Some(s) = c.step {
                text += &format!("step: {s}\n");
            }
            if let Some(d) = c.lcs_dims() {
                text += &format!("lower central series: {d:?}\n");
            }
            text += &format!("killing_zero: {}\ncentre_in_derived: {}\n", opt(c.killing_zero), opt(c.centre_in_derived));
            text += &format!("nice basis: {}\n", nice_basis_check(&a).is_nice);
            Ok(Report::ok(text, json!({ "dim": a.dim(), "classification": c.to_json(), "nice_basis": nice_basis_check(&a).is_nice })))
        }
        Command::Ricci { route, .. } => {
            let routes: Vec<(&str, Result<RicciData<S>>)> = match route {
                Route::General => vec![("general", ricci_general(&a, g()))],
                Route::KillingZero => vec![("killing-zero", ricci_killing_zero(&a, g()))],
                Route::Moment => vec![("moment", ricci_via_moment(&a, g()))],
                Route::Oracle => vec![("oracle", ricci_index_oracle(&a, g()).map(|r| from_float::<S>(&r)))],
                Route::All => vec![
                    ("general", ricci_general(&a, g())),
                    ("killing-zero", ricci_killing_zero(&a, g())),
                    ("moment", ricci_via_moment(&a, g())),
                    ("oracle", ricci_index_oracle(&a, g()).map(|r| from_float::<S>(&r))),
                ],
            };
            let mut text = String::new();
            let mut js = serde_json::Map::new();
            for (name, r) in routes {
                let r = r?;
                if *route == Route::All {
                    text += &format!("[{name}]\n");
                }
                text += &format!("ric = {}\ns = {}\n", render(&r.ric_op), r.scalar);
                js.insert(name.into(), r.to_json());
            }
            Ok(Report::ok(text, json!({ "ricci": js })))
        }
        Command::Bforms(_) => {
            let b = b_forms(&a, g())?;
            let mut text = String::new();
            for k in 1..=6 {
                text += &format!("B{k} = {}\n", render(b.get(k)));
            }
            text += &format!("Tr B2 = {}, Tr B3 = {}, Tr B4 = {}\n", b.trace_b2, b.trace_b3, b.trace_b4);
            Ok(Report::ok(text, json!({ "bforms": b.to_json() })))
        }
        Command::Einstein(_) => {
            let r = ricci_any(&a, g())?;
            let text = match &r.einstein {
                Some(l) if l.is_zero() => "Ricci-flat\n".to_string(),
                Some(l) => format!("Einstein, λ = {l}, s = {}\n", r.scalar),
                None => format!("not Einstein: ric = {}\n", render(&r.ric_op)),
            };
            Ok(Report::ok(
                text,
                json!({
                    "einstein": r.einstein.is_some(),
                    "lambda": r.einstein.as_ref().map(Scalar::to_json),
                    "scalar": r.scalar.to_json(),
                    "signature": signature(g()).map(|s| vec![s.p, s.q]).ok(),
                }),
            ))
        }
        Command::Mn(_) => {
            let m = mn_criterion(&a, g())?;
            let text = format!(
                "dim M = {}, dim N = {}, dim Z = {}, dim g1 = {}\nexcluded: {}\n",
                m.dim_m, m.dim_n, m.dim_centre, m.dim_derived, m.excluded
            );
            Ok(Report::ok(
                text,
                json!({"dim_m": m.dim_m, "dim_n": m.dim_n, "dim_centre": m.dim_centre, "dim_derived": m.dim_derived, "excluded": m.excluded}),
            ))
        }
        Command::Holonomy { max_order, .. } => {
            let h = holonomy_span(&a, g(), *max_order)?;
            let text = format!(
                "span dimension: {} (by order {:?})\nfull: {}\nlocally symmetric: {}\n",
                h.span_dim, h.dims_by_order, h.full, h.locally_symmetric
            );
            Ok(Report::ok(
                text,
                json!({"span_dim": h.span_dim, "dims_by_order": h.dims_by_order, "full": h.full, "locally_symmetric": h.locally_symmetric}),
            ))
        }
        Command::Moment(_) => {
            let b = q_map(&a, g())?;
            let m = moment(&a, &b)?;
            let text = format!(
                "q = {}\nc1 = {}\nc2 = {}\nmu = {}\n<a, q> = {}\n",
                b.to_tensor_string(),
                render(&m.c1),
                render(&m.c2),
                render(&m.mu),
                m.pairing
            );
            Ok(Report::ok(text, json!({ "q": b.to_json(), "moment": m.to_json() })))
        }
        Command::Scalar(_) => {
            let s = scalar_functional(&a, g())?;
            Ok(Report::ok(format!("s = {s}\n"), json!({ "scalar": s.to_json() })))
        }
        Command::GaugeDerivative { x, .. } => {
            let x = parse_gauge::<S>(x, a.dim())?;
            let d = gauge_derivative(&a, g(), &GaugeDirection::new(x))?;
            let text = format!(
                "X+ s = {}\n<ric, X> = {}\n1/4 <Xa, q> = {}\nidentities hold: {}\n",
                d.x_plus_s, d.ric_pairing, d.moment_pairing, d.identities_hold
            );
            Ok(Report::ok(
                text,
                json!({
                    "x_plus_s": d.x_plus_s.to_json(),
                    "ric_pairing": d.ric_pairing.to_json(),
                    "moment_pairing": d.moment_pairing.to_json(),
                    "identities_hold": d.identities_hold,
                }),
            ))
        }
        Command::Critical(_) => {
            let c = jacobi_tangent_critical(&a, g())?;
            let text = format!(
                "tangent dimension: {}, critical: {}\nwith Killing constraint: {}, critical: {}\n",
                c.tangent_dim, c.critical, c.tangent_dim_killing, c.critical_killing
            );
            Ok(Report::ok(
                text,
                json!({"tangent_dim": c.tangent_dim, "critical": c.critical, "tangent_dim_killing": c.tangent_dim_killing, "critical_killing": c.critical_killing}),
            ))
        }
        Command::Derivations(_) => {
            let d = derivation_space(&a)?;
            let diag = diagonal_derivation_solve(&a);
            let mut text = format!("dim Der = {}\n", d.dim());
            match &d.trace_witness {
                Some(w) => text += &format!("witness with trace {}: {}\n", w.trace(), render(w)),
                None => text += "all derivations are traceless\n",
            }
            text += &format!("diagonal derivations: {}\n", if diag.relations.is_empty() { "all".to_string() } else { diag.to_relation_string() });
            Ok(Report::ok(
                text,
                json!({
                    "dim": d.dim(),
                    "basis": d.basis.iter().map(Matrix::to_json).collect::<Vec<_>>(),
                    "witness": d.trace_witness.as_ref().map(Matrix::to_json),
                    "witness_trace": d.trace_witness.as_ref().map(|w| w.trace().to_json()),
                    "der_in_sl": !d.has_nonzero_trace(),
                    "diagonal_relations": diag.to_relation_string(),
                    "diagonal_trace_nonzero": diag.trace_can_be_nonzero(),
                }),
            ))
        }
        Command::Nice { diag, .. } => {
            let r = nice_basis_check(&a);
            let mut text = format!("nice: {}\n", r.is_nice);
            for v in &r.violations {
                text += &format!("  {v:?}\n");
            }
            let mut js = json!({ "is_nice": r.is_nice, "violations": r.violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>() });
            if let Some(d) = diag {
                let entries: Vec<S> = d
                    .split(',')
                    .map(|t| S::parse_literal(t.trim()).ok_or_else(|| Error::parse(0, format!("bad diagonal entry '{t}'"))))
                    .collect::<Result<_>>()?;
                let dr = diagonal_ricci(&a, &entries)?;
                text += &format!("ric = diag({})\n", join(&dr.entries));
                js["ricci_diag"] = dr.entries.iter().map(Scalar::to_json).collect();
                js["off_diagonal_max"] = json!(dr.off_diagonal_max);
            }
            Ok(Report::ok(text, js))
        }
        Command::EinsteinSearch { patterns, restarts, max_iterations, .. } => {
            let pats = parse_patterns(patterns, a.dim())?;
            let opts = SearchOptions { restarts: *restarts, max_iterations: *max_iterations, seed: cli.seed, ..Default::default() };
            let found = diagonal_einstein_search(&a, Some(&pats), &opts)?;
            let mut text = format!("{} metric(s) found\n", found.len());
            for e in &found {
                text += &format!(
                    "g = diag({}), λ = {}, s = {}{}\n",
                    join(&e.diag),
                    e.lambda,
                    e.scalar,
                    if e.exact { " (exact)" } else { " (float)" }
                );
            }
            Ok(Report::ok(text, json!({ "metrics": found.iter().map(|e| e.to_json()).collect::<Vec<_>>() })))
        }
        Command::Catalog { .. } => unreachable!("handled before dispatch"),
    }
}

fn ricci_any<S: Scalar>(a: &StructureTensor<S>, g: &Metric<S>) -> Result<RicciData<S>> {
    ricci_killing_zero(a, g).or_else(|_| ricci_general(a, g))
}

fn from_float<S: Scalar>(r: &RicciData<Float>) -> RicciData<S> {
    let m = |x: &Matrix<Float>| x.map(|v| S::from_f64(v.0));
    RicciData {
        ric_form: m(&r.ric_form),
        ric_op: m(&r.ric_op),
        scalar: S::from_f64(r.scalar.0),
        einstein: r.einstein.map(|l| S::from_f64(l.0)),
    }
}

fn parse_gauge<S: Scalar>(text: &str, n: usize) -> Result<Matrix<S>> {
    let t = read_input(text)?;
    if t.trim() == "id" {
        return Ok(Matrix::identity(n));
    }
    let v: Value = serde_json::from_str(t.trim())?;
    let rows = v.as_array().ok_or_else(|| Error::parse(0, "X must be a JSON array of rows"))?;
    let parsed: Vec<Vec<S>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::parse(0, "X row must be an array"))?
                .iter()
                .map(|x| crate::algebra::json_scalar::<S>(x).ok_or_else(|| Error::parse(0, format!("bad entry {x}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if parsed.len() != n || parsed.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("X must be {n} x {n}")));
    }
    Ok(Matrix::from_rows(parsed))
}

fn parse_patterns(text: &str, n: usize) -> Result<Vec<Vec<i8>>> {
    if text.trim() == "all" {
        return Ok(all_sign_patterns(n));
    }
    text.split(',')
        .map(|p| {
            let p = p.trim();
            let v: Vec<i8> = p
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(Error::parse(0, format!("bad sign '{c}' in pattern '{p}'"))),
                })
                .collect::<Result<_>>()?;
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!("pattern '{p}' has length {}, expected {n}", v.len())));
            }
            Ok(v)
        })
        .collect()
}

fn catalog_verify(file: Option<&str>, jobs: Option<usize>, filter: Option<&str>) -> Result<Report> {
    let mut entries = match file {
        Some(f) => load_catalog(f)?,
        None => builtin_catalog(),
    };
    if let Some(f) = filter {
        entries.retain(|e| e.name.contains(f));
    }
    let reports = verify_catalog(&entries, jobs);
    let mut text = String::new();
    let mut failed = 0;
    for r in &reports {
        let n = r.results.len();
        if r.passed() {
            text += &format!("PASS {} ({n} claims)\n", r.name);
        } else {
            failed += 1;
            text += &format!("FAIL {} (line {})\n", r.name, r.line);
            for f in r.failures() {
                let at = f.metric.map_or(String::new(), |m| format!(" [metric {}]", m + 1));
                text += &format!("  {}{at}: expected {}, computed {}\n", f.claim, f.expected, f.computed);
            }
        }
    }
    text += &format!("{} entries, {failed} failed\n", reports.len());
    Ok(Report {
        text,
        json: json!({ "entries": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(), "failed": failed }),
        code: if failed == 0 { 0 } else { 1 },
    })
}

fn join<S: Scalar>(v: &[S]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn render<S: Scalar>(m: &Matrix<S>) -> String {
    m.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["ricci-moment"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ricci_heisenberg() {
        let (code, out, _) = call(&["ricci", "--structure", "(0,0,12)", "--metric", "diag(1,1,1)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "ric = diag(-1/2, -1/2, 1/2)\ns = -1/2\n");
    }

    #[test]
    fn einstein_eight() {
        let (code, out, _) = call(&[
            "einstein",
            "--structure",
            "(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)",
            "--metric",
            "diag(1,1,1,1,-7/3,-7/3,98/15,98/15)",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "Einstein, λ = 7/15, s = 56/15\n");
    }

    #[test]
    fn derivation_witness() {
        let (code, out, _) = call(&["derivations", "--structure", "(0,0,12,13,23)"]);
        assert_eq!(code, 0);
        assert!(out.contains("witness with trace"), "{out}");
        let (_, js, _) = call(&["--json", "derivations", "--structure", "(0,0,12,13,23)"]);
        let v: Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["schema"], "1");
        assert_eq!(v["der_in_sl"], false);
    }

    #[test]
    fn errors_exit_two() {
        assert_eq!(call(&["ricci", "--structure", "(0,0,12", "--metric", "diag(1,1,1)"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        let (code, _, err) = call(&["ricci", "--route", "killing-zero", "--structure", "(0,12,-13)", "--metric", "diag(1,1,1)"]);
        assert_eq!(code, 2);
        assert!(err.contains("Killing"), "{err}");
    }

    #[test]
    fn approximate_input_forces_float() {
        let (code, out, err) = call(&["ricci", "--structure", "(0,0,1.4142135623730951*12)", "--metric", "diag(1,1,1)"]);
        assert_eq!(code, 0);
        assert!(err.contains("float backend"));
        assert!(out.starts_with("ric = diag(-1"), "{out}");
    }

    #[test]
    fn catalog_filter() {
        let (code, out, _) = call(&["catalog", "verify", "--filter", "ricci-flat"]);
        assert_eq!(code, 0);
        assert!(out.contains("PASS ricci-flat-6"));
    }

    #[test]
    fn json_is_deterministic() {
        let args = ["--json", "einstein-search", "--structure", "(0,0,12)", "--restarts", "8"];
        assert_eq!(call(&args).1, call(&args).1);
    }
}
