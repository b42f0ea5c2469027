//! JSON instance documents and report rendering.
//!
//! Instance document:
//!
//! ```json
//! {
//!   "name": "example",
//!   "dim": 2,
//!   "theta": "identity",
//!   "lambda": [{"matrix": [[1, 0], [0, 1]]}],
//!   "omega":  [{"matrix": [[1, 0], [0, [0, 1]]]}],
//!   "local_f": [{"vectors": [[1, 0], [0, 1]]}],
//!   "local_g": [{"vectors": [[0, 1], [1, 0]]}]
//! }
//! ```
//!
//! A matrix is a list of rows; an entry is a real number or `[re, im]`.
//! `theta` is either `"identity"` or a `dim × dim` matrix. `seed` is an
//! optional unsigned integer.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::frames::{FrameBounds, OperatorTheta, VectorFrame};
use crate::gframes::{GFrame, IndexedFamily, LocalFrameSet};
use crate::linalg::{Matrix, Vector};
use crate::theorems::{GapSearch, Instance, TheoremReport};
use crate::weaving::{Selection, WeavingReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("schema error at {path}: expected {expected}, found {found}")]
    Schema {
        path: String,
        expected: String,
        found: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
}

const KEYS: [&str; 8] = [
    "name", "seed", "dim", "theta", "lambda", "omega", "local_f", "local_g",
];

fn kind(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(_) => "boolean".into(),
        Value::Number(_) => "number".into(),
        Value::String(s) => format!("string {s:?}"),
        Value::Array(a) => format!("list of length {}", a.len()),
        Value::Object(_) => "object".into(),
    }
}

fn schema(path: &str, expected: impl Into<String>, found: &Value) -> ParseError {
    ParseError::Schema {
        path: path.to_string(),
        expected: expected.into(),
        found: kind(found),
    }
}

fn as_array<'a>(v: &'a Value, path: &str, expected: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| schema(path, expected, v))
}

fn parse_real(v: &Value, path: &str) -> Result<f64, ParseError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(path, "finite number", v))
}

fn parse_entry(v: &Value, path: &str) -> Result<Complex64, ParseError> {
    match v {
        Value::Number(_) => Ok(Complex64::new(parse_real(v, path)?, 0.0)),
        Value::Array(a) if a.len() == 2 => Ok(Complex64::new(
            parse_real(&a[0], &format!("{path}[0]"))?,
            parse_real(&a[1], &format!("{path}[1]"))?,
        )),
        _ => Err(schema(path, "number or [re, im]", v)),
    }
}

fn parse_vector(v: &Value, path: &str) -> Result<Vector, ParseError> {
    let items = as_array(v, path, "list of entries")?;
    if items.is_empty() {
        return Err(schema(path, "non-empty list of entries", v));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, e)| parse_entry(e, &format!("{path}[{i}]")))
        .collect()
}

/// `cols = None` accepts any common row length.
fn parse_matrix(v: &Value, path: &str, cols: Option<usize>) -> Result<Matrix, ParseError> {
    let rows = as_array(v, path, "list of rows")?;
    if rows.is_empty() {
        return Err(schema(path, "non-empty list of rows", v));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(r, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let width = cols.unwrap_or(parsed[0].len());
    if let Some(i) = parsed.iter().position(|r| r.len() != width) {
        return Err(ParseError::Schema {
            path: path.to_string(),
            expected: format!("rows of {width} columns"),
            found: format!("row {i} with {} columns", parsed[i].len()),
        });
    }
    Matrix::from_rows(parsed).map_err(|e| ParseError::Semantic(format!("{path}: {e}")))
}

fn parse_operators(
    root: &Map<String, Value>,
    key: &str,
    dim: usize,
) -> Result<Vec<Matrix>, ParseError> {
    let blocks = as_array(field(root, key)?, key, "list of operator blocks")?;
    if blocks.is_empty() {
        return Err(schema(
            key,
            "non-empty list of operator blocks",
            &Value::Array(Vec::new()),
        ));
    }
    blocks
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let path = format!("{key}[{j}]");
            let obj = b
                .as_object()
                .ok_or_else(|| schema(&path, "object with key \"matrix\"", b))?;
            let m = obj
                .get("matrix")
                .ok_or_else(|| schema(&format!("{path}.matrix"), "matrix", &Value::Null))?;
            parse_matrix(m, &format!("{path}.matrix"), Some(dim))
        })
        .collect()
}

fn parse_frames(root: &Map<String, Value>, key: &str) -> Result<Vec<Vec<Vector>>, ParseError> {
    let blocks = as_array(field(root, key)?, key, "list of frame blocks")?;
    blocks
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let path = format!("{key}[{j}]");
            let obj = b
                .as_object()
                .ok_or_else(|| schema(&path, "object with key \"vectors\"", b))?;
            let vpath = format!("{path}.vectors");
            let vs = obj
                .get("vectors")
                .ok_or_else(|| schema(&vpath, "list of vectors", &Value::Null))?;
            let items = as_array(vs, &vpath, "list of vectors")?;
            if items.is_empty() {
                return Err(schema(&vpath, "non-empty list of vectors", vs));
            }
            items
                .iter()
                .enumerate()
                .map(|(k, v)| parse_vector(v, &format!("{vpath}[{k}]")))
                .collect()
        })
        .collect()
}

fn field<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ParseError> {
    root.get(key).ok_or_else(|| ParseError::Schema {
        path: key.to_string(),
        expected: "required key".into(),
        found: "nothing".into(),
    })
}

fn local_set(
    key: &str,
    ops_key: &str,
    frames: Vec<Vec<Vector>>,
    ops: &[Matrix],
) -> Result<LocalFrameSet, ParseError> {
    if frames.len() != ops.len() {
        return Err(ParseError::Semantic(format!(
            "{key} has {} frame blocks but {ops_key} has {} operators",
            frames.len(),
            ops.len()
        )));
    }
    let built = frames
        .into_iter()
        .zip(ops)
        .enumerate()
        .map(|(j, (vectors, op))| {
            if let Some(k) = vectors.iter().position(|v| v.len() != op.rows()) {
                return Err(ParseError::Semantic(format!(
                    "{key}[{j}].vectors[{k}] has length {} but {ops_key}[{j}] has {} rows (j={j}, k={k})",
                    vectors[k].len(),
                    op.rows()
                )));
            }
            VectorFrame::new(op.rows(), vectors).map_err(|e| ParseError::Semantic(format!("{key}[{j}]: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    LocalFrameSet::new(built).map_err(|e| ParseError::Semantic(format!("{key}: {e}")))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        col: e.column(),
        message: e.to_string(),
    })?;
    let root = doc.as_object().ok_or_else(|| schema("$", "object", &doc))?;
    if let Some(k) = root.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(ParseError::Schema {
            path: k.clone(),
            expected: format!("one of {}", KEYS.join(", ")),
            found: "unknown key".into(),
        });
    }
    let dim_v = field(root, "dim")?;
    let dim = dim_v
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| schema("dim", "positive integer", dim_v))? as usize;

    let theta_v = field(root, "theta")?;
    let theta = match theta_v {
        Value::String(s) if s == "identity" => OperatorTheta::identity(dim),
        Value::String(_) => return Err(schema("theta", "\"identity\" or a matrix", theta_v)),
        _ => {
            let m = parse_matrix(theta_v, "theta", Some(dim))?;
            if m.rows() != dim {
                return Err(ParseError::Schema {
                    path: "theta".into(),
                    expected: format!("{dim} rows"),
                    found: format!("{} rows", m.rows()),
                });
            }
            if m.is_zero() {
                return Err(ParseError::Semantic(
                    "theta: the zero operator admits no lower bound".into(),
                ));
            }
            OperatorTheta::new(m).map_err(|e| ParseError::Semantic(format!("theta: {e}")))?
        }
    };

    let lambda_ops = parse_operators(root, "lambda", dim)?;
    let omega_ops = parse_operators(root, "omega", dim)?;
    if lambda_ops.len() != omega_ops.len() {
        return Err(ParseError::Semantic(format!(
            "lambda has {} operators but omega has {}",
            lambda_ops.len(),
            omega_ops.len()
        )));
    }
    let local_f = local_set(
        "local_f",
        "lambda",
        parse_frames(root, "local_f")?,
        &lambda_ops,
    )?;
    let local_g = local_set(
        "local_g",
        "omega",
        parse_frames(root, "local_g")?,
        &omega_ops,
    )?;
    let sem = |e: crate::Error| ParseError::Semantic(e.to_string());
    let lambda = GFrame::new(dim, lambda_ops).map_err(sem)?;
    let omega = GFrame::new(dim, omega_ops).map_err(sem)?;
    let mut inst = Instance::new(theta, lambda, omega, local_f, local_g).map_err(sem)?;

    if let Some(v) = root.get("name") {
        inst.name = Some(
            v.as_str()
                .ok_or_else(|| schema("name", "string", v))?
                .to_string(),
        );
    }
    if let Some(v) = root.get("seed") {
        inst.seed = Some(
            v.as_u64()
                .ok_or_else(|| schema("seed", "unsigned integer", v))?,
        );
    }
    Ok(inst)
}

fn entry_value(z: Complex64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

fn vector_value(v: &[Complex64]) -> Value {
    Value::Array(v.iter().copied().map(entry_value).collect())
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_value(m.row(i))).collect())
}

/// A frame block `{"vectors": [...]}`.
pub fn frame_block(vectors: &[Vector]) -> Value {
    json!({ "vectors": vectors.iter().map(|v| vector_value(v)).collect::<Vec<_>>() })
}

pub fn instance_value(inst: &Instance) -> Value {
    let mut root = Map::new();
    if let Some(name) = &inst.name {
        root.insert("name".into(), json!(name));
    }
    if let Some(seed) = inst.seed {
        root.insert("seed".into(), json!(seed));
    }
    root.insert("dim".into(), json!(inst.dim()));
    let theta = if inst.theta().is_identity() {
        json!("identity")
    } else {
        matrix_value(inst.theta().matrix())
    };
    root.insert("theta".into(), theta);
    for (key, g) in [("lambda", inst.lambda()), ("omega", inst.omega())] {
        let ops = g
            .operators()
            .iter()
            .map(|m| json!({ "matrix": matrix_value(m) }))
            .collect();
        root.insert(key.into(), Value::Array(ops));
    }
    for (key, local) in [("local_f", inst.local_f()), ("local_g", inst.local_g())] {
        let frames = local
            .frames()
            .iter()
            .map(|f| frame_block(f.vectors()))
            .collect();
        root.insert(key.into(), Value::Array(frames));
    }
    Value::Object(root)
}

pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string_pretty(&instance_value(inst)).expect("JSON values serialize")
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn number(x: f64) -> Value {
    let r = round12(x);
    if r.is_finite() {
        json!(r)
    } else {
        json!(format!("{r}"))
    }
}

/// Text form of a rounded bound; identical digits to the JSON form.
pub fn fmt12(x: f64) -> String {
    number(x).to_string().trim_matches('"').to_string()
}

fn selection_value(sel: &Selection) -> Value {
    json!({ "selection": sel.to_string(), "bitstring": sel.bitstring() })
}

pub fn weaving_report_value(r: &WeavingReport) -> Value {
    let mut v = json!({
        "mode": r.mode.name(),
        "woven": r.woven,
        "approximate": r.approximate,
        "selections_checked": r.selections_checked,
        "universal_lower": number(r.universal_lower),
        "universal_upper": number(r.universal_upper),
        "witness": {
            "selection": r.witness.to_string(),
            "bitstring": r.witness.bitstring(),
            "lower": number(r.witness_lower),
        },
    });
    if let Some(rows) = &r.per_selection {
        v["per_selection"] = rows
            .iter()
            .map(|row| {
                let mut s = selection_value(&row.selection);
                s["lower"] = number(row.lower);
                s["upper"] = number(row.upper);
                s
            })
            .collect();
    }
    v
}

pub fn weaving_report_text(r: &WeavingReport) -> String {
    let verdict = match (r.woven, r.approximate) {
        (true, false) => "woven",
        (true, true) => "woven (sampled: no counterexample found)",
        (false, _) => "not woven",
    };
    let mut s = format!(
        "mode: {}\nverdict: {verdict}\nselections checked: {}\nuniversal bounds: {} {}\nwitness: {} [{}] lower {}\n",
        r.mode,
        r.selections_checked,
        fmt12(r.universal_lower),
        fmt12(r.universal_upper),
        r.witness,
        r.witness.bitstring(),
        fmt12(r.witness_lower),
    );
    if let Some(rows) = &r.per_selection {
        s.push_str("selections:\n");
        for row in rows {
            s.push_str(&format!(
                "  {} [{}] {} {}\n",
                row.selection,
                row.selection.bitstring(),
                fmt12(row.lower),
                fmt12(row.upper)
            ));
        }
    }
    s
}

fn verdict_value(v: Option<bool>) -> Value {
    v.map_or(Value::Null, Value::Bool)
}

pub fn theorem_report_value(r: &TheoremReport) -> Value {
    json!({
        "claim": r.claim.name(),
        "status": r.status.name(),
        "hypotheses": r.hypotheses.iter().map(|h| json!({
            "name": h.name, "passed": h.passed, "value": number(h.value),
        })).collect::<Vec<_>>(),
        "left_verdict": verdict_value(r.left_verdict),
        "right_verdict": verdict_value(r.right_verdict),
        "equivalence_holds": r.equivalence_holds,
        "inequalities": r.inequalities.iter().map(|c| json!({
            "name": c.name, "lhs": number(c.lhs), "rhs": number(c.rhs),
            "slack": number(c.slack), "passed": c.passed,
        })).collect::<Vec<_>>(),
        "margin_flag": r.margin_flag,
        "witness": r.witness,
        "reports": r.reports.iter().map(|l| json!({
            "label": l.label, "report": weaving_report_value(&l.report),
        })).collect::<Vec<_>>(),
    })
}

fn verdict_text(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "woven",
        Some(false) => "not woven",
        None => "not computed",
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn theorem_report_text(r: &TheoremReport) -> String {
    let mut s = format!("claim: {}\nstatus: {}\n", r.claim.name(), r.status.name());
    if !r.hypotheses.is_empty() {
        s.push_str("hypotheses:\n");
        for h in &r.hypotheses {
            s.push_str(&format!(
                "  [{}] {} (lower {})\n",
                pass(h.passed),
                h.name,
                fmt12(h.value)
            ));
        }
    }
    let labels: Vec<&str> = r.reports.iter().map(|l| l.label.as_str()).collect();
    s.push_str(&format!(
        "left verdict ({}): {}\nright verdict ({}): {}\nequivalence holds: {}\n",
        labels.first().unwrap_or(&"-"),
        verdict_text(r.left_verdict),
        labels.get(1).unwrap_or(&"-"),
        verdict_text(r.right_verdict),
        r.equivalence_holds
    ));
    if !r.inequalities.is_empty() {
        s.push_str("inequalities:\n");
        for c in &r.inequalities {
            s.push_str(&format!(
                "  [{}] {}: {} <= {} + {}\n",
                pass(c.passed),
                c.name,
                fmt12(c.lhs),
                fmt12(c.rhs),
                fmt12(c.slack)
            ));
        }
    }
    s.push_str(&format!("margin flag: {}\n", r.margin_flag));
    if let Some(w) = &r.witness {
        s.push_str(&format!("witness: {w}\n"));
    }
    for l in &r.reports {
        s.push_str(&format!(
            "\n[{}]\n{}",
            l.label,
            weaving_report_text(&l.report)
        ));
    }
    s
}

pub fn bounds_value(label: &str, b: &FrameBounds) -> Value {
    json!({
        "family": label,
        "lower": number(b.lower),
        "upper": number(b.upper),
        "is_frame": b.is_frame,
    })
}

pub fn bounds_text(label: &str, b: &FrameBounds) -> String {
    format!(
        "family: {label}\nlower {} upper {}\nframe: {}\n",
        fmt12(b.lower),
        fmt12(b.upper),
        b.is_frame
    )
}

pub fn family_block(family: &IndexedFamily) -> Value {
    frame_block(family.to_frame().vectors())
}

fn vector_text(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|&z| entry_value(z).to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn family_text(label: &str, family: &IndexedFamily) -> String {
    let mut s = format!("{label}:\n");
    for e in family.elements() {
        s.push_str(&format!(
            "  j:{} k:{} {}\n",
            e.outer + 1,
            e.inner + 1,
            vector_text(e.vector)
        ));
    }
    s
}

pub fn gap_search_value(g: &GapSearch) -> Value {
    json!({
        "dim": g.params.dim,
        "n": g.params.n,
        "inner_sizes": g.params.inner_sizes,
        "trials": g.params.trials,
        "seed": g.params.seed,
        "skipped": g.skipped,
        "found": g.hits.len(),
        "hits": g.hits.iter().map(|h| json!({
            "trial": h.trial,
            "instance": instance_value(&h.instance),
            "def1": weaving_report_value(&h.def1),
            "def3": weaving_report_value(&h.def3),
        })).collect::<Vec<_>>(),
    })
}

pub fn gap_search_text(g: &GapSearch) -> String {
    let mut s = format!(
        "trials: {}\nskipped: {}\nfound: {}\n",
        g.params.trials,
        g.skipped,
        g.hits.len()
    );
    for h in &g.hits {
        s.push_str(&format!(
            "  trial {}: def1 woven ({} {}), def3 witness {} lower {}\n",
            h.trial,
            fmt12(h.def1.universal_lower),
            fmt12(h.def1.universal_upper),
            h.def3.witness,
            fmt12(h.def3.witness_lower)
        ));
    }
    s
}
