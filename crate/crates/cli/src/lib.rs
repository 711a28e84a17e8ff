//! Job dispatch for the `hyperhodge` binary. A job is a command name, a JSON
//! payload and an optional bound; running it yields an exit code and a JSON
//! report with sorted keys.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use hyperhodge::gkz::{build_check_m, build_m, build_n, build_z_check_n, family_matrix, GkzData};
use hyperhodge::hodge::{
    connection_matrices, homogeneity_check, irr_hodge, q_basis, regular_hodge,
};
use hyperhodge::hyper::{
    arc_separated, epsilon_raw, gkz_reduction_pipeline, hyp_operator, irreducible, kummer_twist,
    thm_presentation, HypParams,
};
use hyperhodge::lattice::{
    admissible_region, check_full_lattice, check_saturation_bounded, cone_facets, in_shifted_admissible,
    kernel_basis, lemma_raute_membership, IntMatrix,
};
use hyperhodge::ore::{
    fourier_laplace, fourier_laplace_named, presentation_equiv_bounded, z_shift, Presentation,
};
use hyperhodge::rational::{fmt_q, parse_q, Q};
use hyperhodge::{Error, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_ADMISSIBILITY: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub const DEFAULT_PIPELINE_BOUND: u32 = 4;
pub const DEFAULT_BOX_BOUND: u32 = 2;
pub const DEFAULT_SATURATION_RADIUS: i64 = 4;
pub const DEFAULT_GRID_DENOMINATOR: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (json, csv, text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

pub const COMMANDS: &[&str] = &[
    "facets",
    "admissible",
    "gkz-emit",
    "fl",
    "reduce",
    "irr-hodge",
    "regular-hodge",
    "connection",
    "verify",
    "hyp-operator",
    "hyp-check",
];

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: String,
    pub params: Value,
    pub bound: Option<u32>,
    pub format: Format,
    pub output: Option<String>,
}

impl JobSpec {
    pub fn new(command: &str, params: Value) -> Self {
        JobSpec {
            command: command.to_string(),
            params,
            bound: None,
            format: Format::Json,
            output: None,
        }
    }

    /// Batch entries: `{"command", "params", "bound"?, "format"?, "output"?}`.
    pub fn from_value(v: &Value) -> Result<Self, JobError> {
        let obj = v
            .as_object()
            .ok_or_else(|| JobError::validation("job must be an object"))?;
        let command = obj
            .get("command")
            .and_then(Value::as_str)
            .ok_or_else(|| JobError::validation("job needs a string `command`"))?;
        let params = obj.get("params").cloned().unwrap_or_else(|| json!({}));
        let bound = match obj.get("bound") {
            None | Some(Value::Null) => None,
            Some(b) => Some(
                b.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| JobError::validation("`bound` must be a small nonnegative integer"))?,
            ),
        };
        let format = match obj.get("format").and_then(Value::as_str) {
            None => Format::Json,
            Some(f) => f.parse().map_err(JobError::validation)?,
        };
        let output = obj.get("output").and_then(Value::as_str).map(str::to_string);
        Ok(JobSpec {
            command: canonical_command(command).to_string(),
            params,
            bound,
            format,
            output,
        })
    }
}

/// Accepts the spaced aliases (`gkz emit`, `hyp reduce`, ...).
pub fn canonical_command(c: &str) -> &str {
    match c {
        "gkz emit" | "gkz-emit" => "gkz-emit",
        "hyp reduce" | "hyp-reduce" => "reduce",
        "hyp operator" => "hyp-operator",
        "hyp check" => "hyp-check",
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl JobError {
    pub fn validation(msg: impl Into<String>) -> Self {
        JobError {
            code: EXIT_VALIDATION,
            kind: "validation".into(),
            message: msg.into(),
        }
    }

    fn internal(msg: impl Into<String>) -> Self {
        JobError {
            code: EXIT_INTERNAL,
            kind: "internal".into(),
            message: msg.into(),
        }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Admissibility(_) => (EXIT_ADMISSIBILITY, "admissibility"),
            Error::Inconclusive { .. } => (EXIT_INCONCLUSIVE, "inconclusive"),
            Error::Shape(_) => (EXIT_INTERNAL, "shape"),
            Error::Overflow(_) => (EXIT_INTERNAL, "overflow"),
            Error::Hypothesis(_) => (EXIT_VALIDATION, "hypothesis"),
            _ => (EXIT_VALIDATION, "validation"),
        };
        JobError {
            code,
            kind: kind.into(),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// Outcome of one job: exit code plus the full report document.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

struct Done {
    code: i32,
    bounds: Map<String, Value>,
    result: Value,
}

fn done(result: Value) -> Done {
    Done {
        code: EXIT_OK,
        bounds: Map::new(),
        result,
    }
}

pub fn run(job: &JobSpec) -> Outcome {
    let command = canonical_command(&job.command).to_string();
    let mut report = Map::new();
    report.insert("command".into(), json!(command));
    report.insert("version".into(), json!(VERSION));
    match dispatch(&command, &job.params, job.bound) {
        Ok(d) => {
            report.insert("bounds".into(), Value::Object(d.bounds));
            report.insert("result".into(), d.result);
            report.insert("exit_code".into(), json!(d.code));
            Outcome {
                code: d.code,
                report: Value::Object(report),
            }
        }
        Err(e) => {
            report.insert("bounds".into(), bounds_of(&command, job.bound));
            report.insert("error".into(), json!({"kind": e.kind, "message": e.message}));
            report.insert("exit_code".into(), json!(e.code));
            Outcome {
                code: e.code,
                report: Value::Object(report),
            }
        }
    }
}

fn bounds_of(command: &str, bound: Option<u32>) -> Value {
    let mut m = Map::new();
    match command {
        "reduce" => {
            m.insert("elimination".into(), json!(bound.unwrap_or(DEFAULT_PIPELINE_BOUND)));
        }
        "gkz-emit" => {
            m.insert("box".into(), json!(bound.unwrap_or(DEFAULT_BOX_BOUND)));
        }
        "facets" => {
            m.insert("saturation_radius".into(), json!(bound.map(i64::from).unwrap_or(DEFAULT_SATURATION_RADIUS)));
        }
        _ => {
            if let Some(b) = bound {
                m.insert("bound".into(), json!(b));
            }
        }
    }
    Value::Object(m)
}

fn dispatch(command: &str, p: &Value, bound: Option<u32>) -> Result<Done, JobError> {
    match command {
        "facets" => cmd_facets(p, bound),
        "admissible" => cmd_admissible(p),
        "gkz-emit" => cmd_gkz_emit(p, bound),
        "fl" => cmd_fl(p),
        "reduce" => cmd_reduce(p, bound),
        "irr-hodge" => cmd_irr_hodge(p),
        "regular-hodge" => cmd_regular_hodge(p),
        "connection" => cmd_connection(p),
        "verify" => cmd_verify(p, bound),
        "hyp-operator" => cmd_hyp_operator(p),
        "hyp-check" => cmd_hyp_check(p),
        other => Err(JobError::validation(format!(
            "unknown command `{other}`; expected one of {}",
            COMMANDS.join(", ")
        ))),
    }
}

// ---------- payload parsing ----------

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, JobError> {
    serde_json::to_value(v).map_err(|e| JobError::internal(e.to_string()))
}

pub fn parse_rational(v: &Value) -> Result<Q, JobError> {
    match v {
        Value::String(s) => parse_q(s).map_err(JobError::from),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Q::from_integer(i.into()))
            .ok_or_else(|| JobError::validation(format!("{n} is not exact; write rationals as \"p/q\""))),
        other => Err(JobError::validation(format!("expected a rational, got {other}"))),
    }
}

fn rationals(p: &Value, key: &str) -> Result<Vec<Q>, JobError> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(a)) => a.iter().map(parse_rational).collect(),
        Some(single) => Ok(vec![parse_rational(single)?]),
    }
}

fn required_rationals(p: &Value, key: &str) -> Result<Vec<Q>, JobError> {
    if p.get(key).is_none() {
        return Err(JobError::validation(format!("missing `{key}`")));
    }
    rationals(p, key)
}

fn usize_field(p: &Value, key: &str) -> Result<Option<usize>, JobError> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| JobError::validation(format!("`{key}` must be a nonnegative integer"))),
    }
}

/// `{"A": [[..]]}` (rows), `{"family": [n, m]}` or `{"n": .., "m": ..}`.
fn matrix(p: &Value) -> Result<IntMatrix, JobError> {
    if let Some(Value::String(s)) = p.get("A") {
        let inner = s
            .trim()
            .strip_prefix("family(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| JobError::validation(format!("`A` string must be family(n,m), got `{s}`")))?;
        let nm: Vec<usize> = inner
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| JobError::validation(format!("bad family spec `{s}`")))?;
        if nm.len() != 2 {
            return Err(JobError::validation("family needs two entries"));
        }
        return Ok(family_matrix(nm[0], nm[1])?);
    }
    if let Some(a) = p.get("A") {
        let rows: Vec<Vec<i64>> = serde_json::from_value(a.clone())
            .map_err(|e| JobError::validation(format!("`A` must be integer rows: {e}")))?;
        return Ok(IntMatrix::from_rows(rows)?);
    }
    if let Some(f) = p.get("family") {
        let nm: Vec<usize> = serde_json::from_value(f.clone())
            .map_err(|_| JobError::validation("`family` must be [n, m]"))?;
        if nm.len() != 2 {
            return Err(JobError::validation("`family` must be [n, m]"));
        }
        return Ok(family_matrix(nm[0], nm[1])?);
    }
    match (usize_field(p, "n")?, usize_field(p, "m")?) {
        (Some(n), Some(m)) => Ok(family_matrix(n, m)?),
        _ => Err(JobError::validation("need `A`, `family` or `n`/`m`")),
    }
}

fn hyp_params(p: &Value) -> Result<HypParams, JobError> {
    let alpha = required_rationals(p, "alpha")?;
    let beta = rationals(p, "beta")?;
    if let Some(n) = usize_field(p, "n")? {
        if n != alpha.len() {
            return Err(JobError::validation(format!("n = {n} but {} alphas given", alpha.len())));
        }
    }
    if let Some(m) = usize_field(p, "m")? {
        if m != beta.len() {
            return Err(JobError::validation(format!("m = {m} but {} betas given", beta.len())));
        }
    }
    Ok(HypParams::new(alpha, beta)?)
}

fn qvec(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| json!(fmt_q(x))).collect())
}

fn presentation_value(pres: &Presentation) -> Value {
    let mut v = pres.to_json_value();
    if let Value::Object(m) = &mut v {
        let text: Vec<Value> = pres.generators().iter().map(|g| json!(g.to_string())).collect();
        m.insert("text".into(), Value::Array(text));
    }
    v
}

fn presentation_arg(p: &Value) -> Result<Presentation, JobError> {
    let doc = p.get("presentation").unwrap_or(p);
    Ok(Presentation::from_json_value(doc)?)
}

// ---------- commands ----------

fn cmd_facets(p: &Value, bound: Option<u32>) -> Result<Done, JobError> {
    let a = matrix(p)?;
    let mut facets = cone_facets(&a)?;
    facets.sort_by(|x, y| x.normal.cmp(&y.normal));
    let radius = bound.map(i64::from).unwrap_or(DEFAULT_SATURATION_RADIUS);
    let mut d = done(json!({
        "A": a.to_rows(),
        "facets": to_json(&facets)?,
        "kernel_basis": kernel_basis(&a)?,
        "full_lattice": check_full_lattice(&a),
        "saturation": to_json(&check_saturation_bounded(&a, radius)?)?,
    }));
    d.bounds.insert("saturation_radius".into(), json!(radius));
    Ok(d)
}

fn cmd_admissible(p: &Value) -> Result<Done, JobError> {
    let a = matrix(p)?;
    let beta = required_rationals(p, "beta")?;
    if beta.len() != a.nrows() {
        return Err(JobError::validation(format!(
            "beta has length {}, A has {} rows",
            beta.len(),
            a.nrows()
        )));
    }
    let region = admissible_region(&a)?;
    let violation = region.violation(&beta).map(|v| {
        json!({"normal": v.facet.normal, "weight": v.facet.weight, "value": fmt_q(&v.value)})
    });
    let shift = in_shifted_admissible(&a, &beta)?;
    Ok(done(json!({
        "beta": qvec(&beta),
        "member": shift.is_some(),
        "in_region": violation.is_none(),
        "violation": violation,
        "shift": shift,
        "facets": to_json(&region.facets)?,
    })))
}

fn cmd_gkz_emit(p: &Value, bound: Option<u32>) -> Result<Done, JobError> {
    let a = matrix(p)?;
    let beta = required_rationals(p, "beta")?;
    let data = GkzData::new(a, beta)?;
    let box_bound = bound.unwrap_or(DEFAULT_BOX_BOUND);
    let which = p.get("which").and_then(Value::as_str).unwrap_or("N");
    let pres = match which {
        "M" => build_m(&data, Some(box_bound))?,
        "check_M" | "checkM" => build_check_m(&data, Some(box_bound))?,
        "z_check_N" | "zcheckN" => build_z_check_n(&data, Some(box_bound))?,
        "N" => build_n(&data, Some(box_bound))?,
        other => {
            return Err(JobError::validation(format!(
                "unknown system `{other}` (M, check_M, z_check_N, N)"
            )))
        }
    };
    let mut d = done(json!({"system": which, "presentation": presentation_value(&pres)}));
    d.bounds.insert("box".into(), json!(box_bound));
    Ok(d)
}

fn cmd_fl(p: &Value) -> Result<Done, JobError> {
    let pres = presentation_arg(p)?;
    let out = match p.get("dual") {
        Some(names) => {
            let names: Vec<String> = serde_json::from_value(names.clone())
                .map_err(|_| JobError::validation("`dual` must be a list of names"))?;
            fourier_laplace_named(&pres, &names)?
        }
        None => fourier_laplace(&pres)?,
    };
    Ok(done(json!({"presentation": presentation_value(&out)})))
}

fn cmd_reduce(p: &Value, bound: Option<u32>) -> Result<Done, JobError> {
    let params = hyp_params(p)?;
    let b = bound.unwrap_or(DEFAULT_PIPELINE_BOUND);
    let report = gkz_reduction_pipeline(&params, b)?;
    let thm = thm_presentation(&params)?;
    let code = match report.outcome.as_str() {
        "Equal" => EXIT_OK,
        "Inconclusive" => EXIT_INCONCLUSIVE,
        _ => EXIT_INTERNAL,
    };
    let mut d = done(json!({
        "report": to_json(&report)?,
        "presentation": presentation_value(&report.presentation),
        "expected": presentation_value(&thm),
    }));
    d.code = code;
    d.bounds.insert("elimination".into(), json!(b));
    d.bounds.insert("elimination_used".into(), json!(report.elimination_bound));
    d.bounds.insert("equivalence".into(), json!(report.equivalence_bound));
    Ok(d)
}

fn cmd_irr_hodge(p: &Value) -> Result<Done, JobError> {
    let params = hyp_params(p)?;
    Ok(done(to_json(&irr_hodge(&params)?)?))
}

fn cmd_regular_hodge(p: &Value) -> Result<Done, JobError> {
    let params = hyp_params(p)?;
    Ok(done(to_json(&regular_hodge(&params)?)?))
}

fn cmd_connection(p: &Value) -> Result<Done, JobError> {
    let params = hyp_params(p)?;
    let basis = q_basis(&params)?;
    let m = connection_matrices(&params)?;
    Ok(done(json!({"basis": to_json(&basis)?, "matrices": to_json(&m)?})))
}

fn cmd_hyp_operator(p: &Value) -> Result<Done, JobError> {
    let params = hyp_params(p)?;
    let op = hyp_operator(&params)?;
    Ok(done(json!({
        "n": params.n(),
        "m": params.m(),
        "alpha": qvec(params.alpha()),
        "beta": qvec(params.beta()),
        "operator": op.to_string(),
    })))
}

fn cmd_hyp_check(p: &Value) -> Result<Done, JobError> {
    let params = hyp_params(p)?;
    let irr = irreducible(&params);
    let arcs = if irr { Some(arc_separated(&params)?) } else { None };
    let mut out = json!({
        "n": params.n(),
        "m": params.m(),
        "alpha": qvec(params.alpha()),
        "beta": qvec(params.beta()),
        "epsilon": fmt_q(&params.epsilon()),
        "irreducible": irr,
        "arc_separated": arcs,
    });
    if let Some(eta) = p.get("eta") {
        let eta = parse_rational(eta)?;
        let (twisted, witness) = kummer_twist(&params, &eta)?;
        out["kummer"] = json!({
            "alpha": qvec(twisted.alpha()),
            "beta": qvec(twisted.beta()),
            "witness": to_json(&witness)?,
            "epsilon_unreduced": fmt_q(&epsilon_raw(&witness.shifted_alpha, &witness.shifted_beta)),
        });
    }
    if irr {
        let thm = thm_presentation(&params)?;
        out["homogeneous"] = json!(homogeneity_check(&thm));
        out["presentation"] = presentation_value(&thm);
    }
    Ok(done(out))
}

// ---------- verify ----------

/// Parameter sets used by the `pipeline-*` verification cases.
pub fn pipeline_case(name: &str) -> Option<HypParams> {
    let f = |n: i64, d: i64| Q::new(n.into(), d.into());
    let (a, b) = match name {
        "pipeline-1-1" => (vec![f(0, 1)], vec![f(1, 3)]),
        "pipeline-2-1" => (vec![f(0, 1), f(1, 2)], vec![f(1, 4)]),
        "pipeline-3-1" => (vec![f(0, 1), f(1, 3), f(2, 3)], vec![f(1, 2)]),
        "pipeline-2-2" => (vec![f(0, 1), f(1, 10)], vec![f(1, 5), f(3, 5)]),
        "pipeline-4-1" => (vec![f(0, 1), f(1, 5), f(2, 5), f(3, 5)], vec![f(1, 7)]),
        _ => return None,
    };
    HypParams::new(a, b).ok()
}

fn parse_family_case(name: &str, prefix: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix(prefix)?;
    let (n, m) = rest.split_once('-')?;
    Some((n.parse().ok()?, m.parse().ok()?))
}

/// Facet list of the family matrix in closed form: `u_j` for `j < m` and
/// `u_j - u_(m+i-1)` for `j < m`, `2 <= i <= n`; every weight is 2.
pub fn family_facets_closed_form(n: usize, m: usize) -> Vec<Vec<i64>> {
    let d = n + m - 1;
    let mut out = Vec::new();
    for j in 0..m {
        let mut u = vec![0; d];
        u[j] = 1;
        out.push(u.clone());
        for i in 2..=n {
            let mut v = u.clone();
            v[m + i - 2] = -1;
            out.push(v);
        }
    }
    out.sort();
    out
}

fn grid(den: u32, len: usize) -> Vec<Vec<Q>> {
    let pts: Vec<Q> = (0..den as i64)
        .map(|k| Q::new(k.into(), (den as i64).into()))
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            for x in &pts {
                let mut w = v.clone();
                w.push(x.clone());
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn cmd_verify(p: &Value, bound: Option<u32>) -> Result<Done, JobError> {
    let case = p
        .get("case")
        .and_then(Value::as_str)
        .ok_or_else(|| JobError::validation("verify needs a string `case`"))?;
    if case.starts_with("pipeline-") {
        let params = if p.get("alpha").is_some() {
            hyp_params(p)?
        } else {
            pipeline_case(case).ok_or_else(|| JobError::validation(format!("unknown case `{case}`")))?
        };
        let mut d = cmd_reduce(&json!({"alpha": qvec(params.alpha()), "beta": qvec(params.beta())}), bound)?;
        let outcome = d.result["report"]["outcome"].clone();
        d.result = json!({"case": case, "outcome": outcome, "details": d.result});
        return Ok(d);
    }
    if let Some((n, m)) = parse_family_case(case, "facets-") {
        let a = family_matrix(n, m)?;
        let facets = cone_facets(&a)?;
        let mut got: Vec<Vec<i64>> = facets.iter().map(|f| f.normal.clone()).collect();
        got.sort();
        let want = family_facets_closed_form(n, m);
        let colsum: Vec<i64> = a.columns().iter().fold(vec![0; a.nrows()], |acc, c| {
            acc.iter().zip(c).map(|(x, y)| x + y).collect()
        });
        let mut want_c = vec![0; a.nrows()];
        want_c[..m].iter_mut().for_each(|x| *x = 2);
        let ok = got == want && facets.iter().all(|f| f.weight == 2) && colsum == want_c;
        let mut d = done(json!({"case": case, "outcome": if ok {"pass"} else {"fail"}, "facets": got, "column_sum": colsum}));
        if !ok {
            d.code = EXIT_INTERNAL;
        }
        return Ok(d);
    }
    if let Some((n, m)) = parse_family_case(case, "lemma-") {
        let den = bound.unwrap_or(DEFAULT_GRID_DENOMINATOR);
        let a = family_matrix(n, m)?;
        let mut total = 0usize;
        let mut mismatches = Vec::new();
        for v in grid(den, n + m - 1) {
            let (pp, qq) = v.split_at(m);
            let lemma = lemma_raute_membership(m, n, pp, qq)?;
            let oracle = in_shifted_admissible(&a, &v)?.is_some();
            total += 1;
            if lemma != oracle && mismatches.len() < 10 {
                mismatches.push(qvec(&v));
            }
        }
        let ok = mismatches.is_empty();
        let mut d = done(json!({"case": case, "outcome": if ok {"pass"} else {"fail"}, "points": total, "mismatches": mismatches}));
        d.bounds.insert("denominator".into(), json!(den));
        if !ok {
            d.code = EXIT_INTERNAL;
        }
        return Ok(d);
    }
    if let Some((n, m)) = parse_family_case(case, "fl-gkz-") {
        let a = family_matrix(n, m)?;
        let beta: Vec<Q> = match p.get("beta") {
            Some(_) => rationals(p, "beta")?,
            None => (0..a.nrows()).map(|i| Q::new(1.into(), (i as i64 + 2).into())).collect(),
        };
        let data = GkzData::new(a, beta.clone())?;
        let box_bound = Some(bound.unwrap_or(DEFAULT_BOX_BOUND));
        let lhs = fourier_laplace(&build_z_check_n(&data, box_bound)?)?;
        let rhs = z_shift(&build_n(&data, box_bound)?, 1)?;
        let outcome = presentation_equiv_bounded(&lhs, &rhs, 1)?;
        let mut d = done(json!({"case": case, "beta": qvec(&beta), "outcome": outcome.label()}));
        if !outcome.is_equal() {
            d.code = EXIT_INTERNAL;
        }
        d.bounds.insert("box".into(), json!(box_bound));
        d.bounds.insert("equivalence".into(), json!(1));
        return Ok(d);
    }
    Err(JobError::validation(format!(
        "unknown case `{case}` (pipeline-N-M, facets-N-M, lemma-N-M, fl-gkz-N-M)"
    )))
}

// ---------- rendering ----------

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV: `jump,multiplicity` for `irr-hodge`, `p,h` for `regular-hodge`,
/// otherwise `key,value` over the flattened report.
pub fn render_csv(command: &str, report: &Value) -> String {
    let result = &report["result"];
    let mut out = String::new();
    match command {
        "irr-hodge" if result.is_object() => {
            out.push_str("jump,multiplicity\n");
            if let Some(m) = result["hodge_numbers"].as_object() {
                let mut rows: Vec<(Q, String)> = m
                    .iter()
                    .filter_map(|(k, v)| parse_q(k).ok().map(|q| (q, scalar(v))))
                    .collect();
                rows.sort();
                for (k, v) in rows {
                    out.push_str(&format!("{},{}\n", fmt_q(&k), v));
                }
            }
        }
        "regular-hodge" if result.is_object() => {
            out.push_str("p,h\n");
            if let Some(h) = result["hodge_numbers"].as_array() {
                for (p, v) in h.iter().enumerate() {
                    out.push_str(&format!("{p},{}\n", scalar(v)));
                }
            }
        }
        _ => {
            out.push_str("key,value\n");
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            for (k, v) in rows {
                out.push_str(&format!("{},{}\n", csv_escape(&k), csv_escape(&v)));
            }
        }
    }
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Indented `key: value` lines.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    text_into(report, 0, &mut out);
    out
}

fn text_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_into(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_into(x, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array() || is_flat_array(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn is_flat_array(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

pub fn render(command: &str, report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).unwrap_or_else(|_| "{}".into());
            s.push('\n');
            s
        }
        Format::Csv => render_csv(command, report),
        Format::Text => render_text(report),
    }
}

/// Runs the jobs of a batch concurrently (one thread per job, each job
/// single-threaded); results keep the input order.
pub fn run_batch(jobs: &[JobSpec]) -> Vec<Outcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|j| s.spawn(move || run(j))).collect();
        handles
            .into_iter()
            .map(|h| {
                h.join().unwrap_or_else(|_| Outcome {
                    code: EXIT_INTERNAL,
                    report: json!({"error": {"kind": "internal", "message": "job panicked"}}),
                })
            })
            .collect()
    })
}

/// Batch file: a list of jobs or `{"jobs": [...]}`.
pub fn parse_batch(doc: &Value) -> Result<Vec<JobSpec>, JobError> {
    let list = match doc {
        Value::Array(a) => a,
        Value::Object(m) => m
            .get("jobs")
            .and_then(Value::as_array)
            .ok_or_else(|| JobError::validation("batch object needs a `jobs` list"))?,
        _ => return Err(JobError::validation("batch file must be a list of jobs")),
    };
    list.iter().map(JobSpec::from_value).collect()
}
