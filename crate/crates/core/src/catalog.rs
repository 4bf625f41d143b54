//! A catalog of named Lie algebras and metrics with claimed properties, and
//! a verifier that checks each claim.
//!
//! The catalog is JSON lines, one algebra per line:
//!
//! ```text
//! {"name": "...", "dim": 7, "structure": "(0,0,12,...)",
//!  "group": "...", "family": "a", "samples": ["2", "-1"], "backend": "float",
//!  "claims": {...}, "metrics": [{"metric": "diag(...)", "claims": {...}}]}
//! ```
//!
//! Entries with `samples` are one-parameter families: every `{expr}` in the
//! line, with `expr` affine in `L` (`{L}`, `{1-L}`, `{2*L}`), is replaced by
//! its value for each sample.

use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::algebra::{classify, has_approximate_literals, parse_structure, StructureTensor};
use crate::curvature::{holonomy_span, mn_criterion, ricci_general, ricci_killing_zero, RicciData, DEFAULT_HOLONOMY_ORDER};
use crate::derivations::{derivation_space, diagonal_derivation_solve, parse_relations};
use crate::error::{Error, Result};
use crate::metric::{parse_metric, signature, Metric};
use crate::moment::{contractions, jacobi_tangent_critical, q_map};
use crate::nice::nice_basis_check;
use crate::scalar::{parse_rational, Float, Rational, Scalar};

pub const BUILTIN_CATALOG: &str = include_str!("../data/catalog.jsonl");

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraClaims {
    pub is_lie: Option<bool>,
    pub nilpotent: Option<bool>,
    pub step: Option<usize>,
    pub unimodular: Option<bool>,
    pub killing_zero: Option<bool>,
    pub nice_basis: Option<bool>,
    pub der_in_sl: Option<bool>,
    pub der_strictly_lower: Option<bool>,
    pub centre_in_derived: Option<bool>,
    pub lcs_dims: Option<Vec<usize>>,
    pub diagonal_relations: Option<String>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QComponent {
    pub k: usize,
    pub j: usize,
    pub l: usize,
    pub c: String,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MetricClaims {
    pub einstein_lambda: Option<String>,
    pub ricci_flat: Option<bool>,
    pub signature: Option<[usize; 2]>,
    pub scalar: Option<String>,
    pub ricci_op_diag: Option<Vec<String>>,
    pub holonomy_full: Option<bool>,
    pub locally_symmetric: Option<bool>,
    pub mn_excluded: Option<bool>,
    pub critical: Option<bool>,
    pub q_components: Option<Vec<QComponent>>,
    pub c1_diag: Option<Vec<String>>,
    pub c2_diag: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MetricEntry {
    pub metric: String,
    #[serde(default)]
    pub claims: MetricClaims,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    dim: usize,
    structure: String,
    group: Option<String>,
    family: Option<String>,
    samples: Option<Vec<String>>,
    backend: Option<Backend>,
    #[serde(default)]
    claims: AlgebraClaims,
    #[serde(default)]
    metrics: Vec<MetricEntry>,
}

/// One catalog line, instantiated at a single parameter value.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub line: usize,
    pub dim: usize,
    pub structure: String,
    pub group: Option<String>,
    pub family: Option<String>,
    pub sample: Option<String>,
    pub backend: Backend,
    pub claims: AlgebraClaims,
    pub metrics: Vec<MetricEntry>,
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>> {
    parse_catalog(&std::fs::read_to_string(path)?)
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN_CATALOG).expect("built-in catalog is well formed")
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        if raw_line.trim().is_empty() {
            continue;
        }
        let schema = |msg: String| Error::Schema { line, msg };
        let probe: RawEntry = serde_json::from_str(raw_line).map_err(|e| schema(e.to_string()))?;
        let instances: Vec<(Option<String>, String)> = match &probe.samples {
            None => {
                if raw_line.contains("{L") || raw_line.contains("{1-L") || raw_line.contains("{-L") {
                    return Err(schema("parameter placeholder without samples".into()));
                }
                vec![(None, raw_line.to_string())]
            }
            Some(samples) if samples.is_empty() => return Err(schema("empty sample list".into())),
            Some(samples) => samples
                .iter()
                .map(|s| {
                    let value = parse_rational(s).ok_or_else(|| schema(format!("bad sample '{s}'")))?;
                    Ok((Some(s.clone()), substitute(raw_line, &value).map_err(schema)?))
                })
                .collect::<Result<_>>()?,
        };
        for (sample, text) in instances {
            let raw: RawEntry = serde_json::from_str(&text).map_err(|e| schema(e.to_string()))?;
            let backend = raw.backend.unwrap_or(if has_approximate_literals(&raw.structure) {
                Backend::Float
            } else {
                Backend::Exact
            });
            let dim = match backend {
                Backend::Exact => parse_structure::<Rational>(&raw.structure).map(|a| a.dim()),
                Backend::Float => parse_structure::<Float>(&raw.structure).map(|a| a.dim()),
            }
            .map_err(|e| schema(format!("structure: {e}")))?;
            if dim != raw.dim {
                return Err(schema(format!("dim {} but structure has dimension {dim}", raw.dim)));
            }
            for m in &raw.metrics {
                parse_metric::<Float>(&m.metric, dim).map_err(|e| schema(format!("metric '{}': {e}", m.metric)))?;
            }
            let name = match &sample {
                Some(s) => format!("{}[L={s}]", raw.name),
                None => raw.name,
            };
            out.push(CatalogEntry {
                name,
                line,
                dim,
                structure: raw.structure,
                group: raw.group,
                family: raw.family,
                sample,
                backend,
                claims: raw.claims,
                metrics: raw.metrics,
            });
        }
    }
    Ok(out)
}

/// Replaces each `{expr}` by the value of the affine expression at `L`.
fn substitute(line: &str, value: &Rational) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(line.len());
    let mut rest = line;
    while let Some(open) = rest.find('{') {
        let close = rest[open..].find('}').ok_or("unclosed placeholder")? + open;
        let expr = &rest[open + 1..close];
        if expr.starts_with('"') {
            // a JSON object, not a placeholder
            out.push_str(&rest[..=open]);
            rest = &rest[open + 1..];
            continue;
        }
        out.push_str(&rest[..open]);
        out.push_str(&eval_affine(expr, value)?.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn eval_affine(expr: &str, value: &Rational) -> std::result::Result<Rational, String> {
    let mut total = Rational::zero();
    let mut sign = Rational::one();
    let mut buf = String::new();
    let flush = |buf: &mut String, sign: &Rational, total: &mut Rational| -> std::result::Result<(), String> {
        let t = buf.trim().to_string();
        buf.clear();
        if t.is_empty() {
            return Ok(());
        }
        let term = match t.strip_suffix('L') {
            Some(c) => {
                let c = c.trim().trim_end_matches('*').trim();
                let coeff = if c.is_empty() { Rational::one() } else { parse_rational(c).ok_or(format!("bad term '{t}'"))? };
                coeff * value.clone()
            }
            None => parse_rational(&t).ok_or(format!("bad term '{t}'"))?,
        };
        *total = total.clone() + sign.clone() * term;
        Ok(())
    };
    for ch in expr.chars() {
        if ch == '+' || ch == '-' {
            flush(&mut buf, &sign, &mut total)?;
            sign = if ch == '-' { -Rational::one() } else { Rational::one() };
        } else {
            buf.push(ch);
        }
    }
    flush(&mut buf, &sign, &mut total)?;
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClaimResult {
    pub claim: String,
    /// Index into the entry's metric list for metric claims.
    pub metric: Option<usize>,
    pub pass: bool,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryReport {
    pub name: String,
    pub line: usize,
    pub results: Vec<ClaimResult>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.results.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "line": self.line,
            "pass": self.passed(),
            "claims": self.results.iter().map(|r| serde_json::json!({
                "claim": r.claim,
                "metric": r.metric,
                "pass": r.pass,
                "expected": r.expected,
                "computed": r.computed,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn verify_entry(entry: &CatalogEntry) -> EntryReport {
    let results = match entry.backend {
        Backend::Exact => verify_with::<Rational>(entry),
        Backend::Float => verify_with::<Float>(entry),
    };
    EntryReport { name: entry.name.clone(), line: entry.line, results }
}

/// Verifies entries on `jobs` threads (all cores if `None`); the report order
/// follows the input.
pub fn verify_catalog(entries: &[CatalogEntry], jobs: Option<usize>) -> Vec<EntryReport> {
    let run = || entries.par_iter().map(verify_entry).collect();
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => entries.iter().map(verify_entry).collect(),
        },
        None => run(),
    }
}

struct Recorder {
    results: Vec<ClaimResult>,
    metric: Option<usize>,
}

impl Recorder {
    fn check<T: std::fmt::Debug + PartialEq>(&mut self, claim: &str, expected: &T, computed: Result<T>) {
        let (pass, computed) = match computed {
            Ok(v) => (v == *expected, format!("{v:?}")),
            Err(e) => (false, format!("error: {e}")),
        };
        self.results.push(ClaimResult {
            claim: claim.into(),
            metric: self.metric,
            pass,
            expected: format!("{expected:?}"),
            computed,
        });
    }

    fn check_scalar<S: Scalar>(&mut self, claim: &str, expected: &str, computed: Result<S>) {
        let want = S::parse_literal(expected);
        let (pass, computed) = match (computed, want) {
            (Ok(v), Some(w)) => (v == w, v.to_string()),
            (Ok(v), None) => (false, v.to_string()),
            (Err(e), _) => (false, format!("error: {e}")),
        };
        self.results.push(ClaimResult { claim: claim.into(), metric: self.metric, pass, expected: expected.into(), computed });
    }

    fn check_scalars<S: Scalar>(&mut self, claim: &str, expected: &[String], computed: Result<Vec<S>>) {
        let want: Option<Vec<S>> = expected.iter().map(|s| S::parse_literal(s)).collect();
        let (pass, computed) = match (computed, want) {
            (Ok(v), Some(w)) => (v == w, fmt_list(&v)),
            (Ok(v), None) => (false, fmt_list(&v)),
            (Err(e), _) => (false, format!("error: {e}")),
        };
        self.results.push(ClaimResult {
            claim: claim.into(),
            metric: self.metric,
            pass,
            expected: format!("[{}]", expected.join(", ")),
            computed,
        });
    }
}

fn fmt_list<S: Scalar>(v: &[S]) -> String {
    format!("[{}]", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn ricci_any<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<RicciData<S>> {
    ricci_killing_zero(a, metric).or_else(|_| ricci_general(a, metric))
}

fn verify_with<S: Scalar>(entry: &CatalogEntry) -> Vec<ClaimResult> {
    let mut rec = Recorder { results: Vec::new(), metric: None };
    let a = match parse_structure::<S>(&entry.structure) {
        Ok(a) => a,
        Err(e) => {
            rec.check("structure", &true, Err::<bool, _>(e));
            return rec.results;
        }
    };
    let c = &entry.claims;
    let needs_class = c.is_lie.is_some()
        || c.nilpotent.is_some()
        || c.step.is_some()
        || c.unimodular.is_some()
        || c.killing_zero.is_some()
        || c.centre_in_derived.is_some()
        || c.lcs_dims.is_some();
    if needs_class {
        let cls = classify(&a);
        let missing = || Error::precondition("classify", "bracket is not a Lie algebra");
        if let Some(v) = c.is_lie {
            rec.check("is_lie", &v, Ok(cls.is_lie));
        }
        if let Some(v) = c.nilpotent {
            rec.check("nilpotent", &v, cls.nilpotent.ok_or_else(missing));
        }
        if let Some(v) = c.step {
            rec.check("step", &Some(v), Ok(cls.step));
        }
        if let Some(v) = c.unimodular {
            rec.check("unimodular", &v, cls.unimodular.ok_or_else(missing));
        }
        if let Some(v) = c.killing_zero {
            rec.check("killing_zero", &v, cls.killing_zero.ok_or_else(missing));
        }
        if let Some(v) = c.centre_in_derived {
            rec.check("centre_in_derived", &v, cls.centre_in_derived.ok_or_else(missing));
        }
        if let Some(v) = &c.lcs_dims {
            rec.check("lcs_dims", v, cls.lcs_dims().ok_or_else(missing));
        }
    }
    if let Some(v) = c.nice_basis {
        rec.check("nice_basis", &v, Ok(nice_basis_check(&a).is_nice));
    }
    if c.der_in_sl.is_some() || c.der_strictly_lower.is_some() {
        let space = derivation_space(&a);
        if let Some(v) = c.der_in_sl {
            rec.check("der_in_sl", &v, space.as_ref().map(|d| !d.has_nonzero_trace()).map_err(clone_err));
        }
        if let Some(v) = c.der_strictly_lower {
            let lower = space.as_ref().map_err(clone_err).map(|d| {
                d.basis.iter().all(|m| (0..a.dim()).all(|r| (r..a.dim()).all(|col| m[(r, col)].is_zero())))
            });
            rec.check("der_strictly_lower", &v, lower);
        }
    }
    if let Some(text) = &c.diagonal_relations {
        let computed = diagonal_derivation_solve(&a);
        match parse_relations::<S>(text, a.dim()) {
            Ok(want) => {
                let pass = computed.relations == want;
                rec.results.push(ClaimResult {
                    claim: "diagonal_relations".into(),
                    metric: None,
                    pass,
                    expected: text.clone(),
                    computed: computed.to_relation_string(),
                });
            }
            Err(e) => rec.check("diagonal_relations", &true, Err::<bool, _>(e)),
        }
    }

    for (idx, m) in entry.metrics.iter().enumerate() {
        rec.metric = Some(idx);
        let metric = match parse_metric::<S>(&m.metric, a.dim()) {
            Ok(g) => g,
            Err(e) => {
                rec.check("metric", &true, Err::<bool, _>(e));
                continue;
            }
        };
        verify_metric(&mut rec, &a, &metric, &m.claims);
    }
    rec.results
}

fn verify_metric<S: Scalar>(rec: &mut Recorder, a: &StructureTensor<S>, metric: &Metric<S>, c: &MetricClaims) {
    let needs_ricci =
        c.einstein_lambda.is_some() || c.ricci_flat.is_some() || c.scalar.is_some() || c.ricci_op_diag.is_some();
    if needs_ricci {
        let ric = ricci_any(a, metric);
        if let Some(v) = &c.einstein_lambda {
            let lambda = ric.as_ref().map_err(clone_err).and_then(|r| {
                r.einstein.clone().ok_or_else(|| Error::precondition("einstein", "Ricci operator is not a multiple of the identity"))
            });
            rec.check_scalar("einstein_lambda", v, lambda);
        }
        if let Some(v) = c.ricci_flat {
            rec.check("ricci_flat", &v, ric.as_ref().map(RicciData::is_ricci_flat).map_err(clone_err));
        }
        if let Some(v) = &c.scalar {
            rec.check_scalar("scalar", v, ric.as_ref().map(|r| r.scalar.clone()).map_err(clone_err));
        }
        if let Some(v) = &c.ricci_op_diag {
            let diag = ric.as_ref().map_err(clone_err).map(|r| (0..a.dim()).map(|i| r.ric_op[(i, i)].clone()).collect());
            rec.check_scalars("ricci_op_diag", v, diag);
        }
    }
    if let Some([p, q]) = c.signature {
        rec.check("signature", &(p, q), signature(metric).map(|s| (s.p, s.q)));
    }
    if c.holonomy_full.is_some() || c.locally_symmetric.is_some() {
        let hol = holonomy_span(a, metric, DEFAULT_HOLONOMY_ORDER);
        if let Some(v) = c.holonomy_full {
            rec.check("holonomy_full", &v, hol.as_ref().map(|h| h.full).map_err(clone_err));
        }
        if let Some(v) = c.locally_symmetric {
            rec.check("locally_symmetric", &v, hol.as_ref().map(|h| h.locally_symmetric).map_err(clone_err));
        }
    }
    if let Some(v) = c.mn_excluded {
        rec.check("mn_excluded", &v, mn_criterion(a, metric).map(|r| r.excluded));
    }
    if let Some(v) = c.critical {
        rec.check("critical", &v, jacobi_tangent_critical(a, metric).map(|r| r.critical));
    }
    if let Some(want) = &c.q_components {
        let b = q_map(a, metric);
        let computed = b.map(|b| {
            b.nonzero_terms()
                .into_iter()
                .filter(|(k, j, _, _)| k < j)
                .map(|(k, j, l, c)| (k + 1, j + 1, l + 1, c.to_string()))
                .collect::<Vec<_>>()
        });
        let mut expected: Vec<(usize, usize, usize, String)> = Vec::new();
        let mut malformed = false;
        for q in want {
            match S::parse_literal(&q.c) {
                Some(c) => expected.push((q.k, q.j, q.l, c.to_string())),
                None => malformed = true,
            }
        }
        expected.sort();
        if malformed {
            rec.check("q_components", &true, Err::<bool, _>(Error::parse(0, "malformed coefficient")));
        } else {
            rec.check("q_components", &expected, computed);
        }
    }
    if c.c1_diag.is_some() || c.c2_diag.is_some() {
        let cs = q_map(a, metric).and_then(|b| contractions(a, &b));
        let diag_of = |m: &crate::linalg::Matrix<S>| -> Result<Vec<S>> {
            let n = m.rows();
            let off = (0..n).any(|r| (0..n).any(|c| r != c && !m[(r, c)].is_zero()));
            if off {
                return Err(Error::precondition("contractions", "result is not diagonal"));
            }
            Ok((0..n).map(|i| m[(i, i)].clone()).collect())
        };
        if let Some(v) = &c.c1_diag {
            rec.check_scalars("c1_diag", v, cs.as_ref().map_err(clone_err).and_then(|(c1, _)| diag_of(c1)));
        }
        if let Some(v) = &c.c2_diag {
            rec.check_scalars("c2_diag", v, cs.as_ref().map_err(clone_err).and_then(|(_, c2)| diag_of(c2)));
        }
    }
}

fn clone_err(e: &Error) -> Error {
    Error::precondition("verify", e.to_string())
}
