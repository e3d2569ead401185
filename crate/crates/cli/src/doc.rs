//! JSON documents for bodies, spaces, certificates, frames, and groups.
//!
//! Reading goes through serde_json for syntax (with line/column
//! diagnostics) and then through extractors that track the JSON path of
//! every field they touch, so a bad value is reported as e.g.
//! "pairs[3].y: expected an array of numbers". Writing is hand-rolled:
//! floats are printed with `{:.16e}` (17 significant digits, enough to
//! round-trip every f64 exactly), keys appear in a fixed order, and the
//! same data always serializes to the same bytes.

use std::fmt;

use enlarge_core::body::Body;
use enlarge_core::certificate::{Certificate, Pair};
use enlarge_core::group::OrthogonalGroupAction;
use enlarge_core::linalg::Matrix;
use enlarge_core::space::NormedSpace;
use enlarge_core::tol::TolerancePolicy;
use serde_json::Value;

/// A document error with the JSON path it occurred at.
#[derive(Debug)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl DocError {
    fn new(path: &str, message: impl Into<String>) -> Self {
        Self {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for DocError {}

pub type DocResult<T> = std::result::Result<T, DocError>;

fn core_err(path: &str, err: enlarge_core::Error) -> DocError {
    DocError::new(path, err.to_string())
}

/// Parses JSON text, reporting the line and column on syntax errors.
pub fn parse_text(text: &str) -> DocResult<Value> {
    serde_json::from_str(text).map_err(|e| {
        DocError::new(
            "",
            format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()),
        )
    })
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn get<'v>(v: &'v Value, path: &str, key: &str) -> DocResult<&'v Value> {
    v.get(key)
        .ok_or_else(|| DocError::new(path, format!("missing field \"{key}\"")))
}

fn as_f64(v: &Value, path: &str) -> DocResult<f64> {
    v.as_f64()
        .ok_or_else(|| DocError::new(path, "expected a number"))
}

fn as_usize(v: &Value, path: &str) -> DocResult<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| DocError::new(path, "expected a nonnegative integer"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> DocResult<&'v str> {
    v.as_str()
        .ok_or_else(|| DocError::new(path, "expected a string"))
}

fn number_vec(v: &Value, path: &str) -> DocResult<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| DocError::new(path, "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_f64(x, &format!("{path}[{i}]")))
        .collect()
}

fn number_rows(v: &Value, path: &str) -> DocResult<Vec<Vec<f64>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| DocError::new(path, "expected an array of coordinate arrays"))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| number_vec(row, &format!("{path}[{i}]")))
        .collect()
}

fn body_terms(v: &Value, path: &str) -> DocResult<Vec<Body>> {
    let key = join(path, "terms");
    let arr = get(v, path, "terms")?
        .as_array()
        .ok_or_else(|| DocError::new(&key, "expected an array of body documents"))?;
    if arr.len() < 2 {
        return Err(DocError::new(&key, "expected at least two bodies"));
    }
    arr.iter()
        .enumerate()
        .map(|(i, t)| body_from_value(t, &format!("{key}[{i}]")))
        .collect()
}

/// Reads a body document: an object with a "kind" of "hpolytope",
/// "vpolytope", "zonotope", "ball2", "polar", "scaled", "sum", or
/// "intersection".
pub fn body_from_value(v: &Value, path: &str) -> DocResult<Body> {
    if !v.is_object() {
        return Err(DocError::new(path, "expected a body object"));
    }
    let kind = as_str(get(v, path, "kind")?, &join(path, "kind"))?;
    match kind {
        "hpolytope" => {
            let normals = number_rows(get(v, path, "normals")?, &join(path, "normals"))?;
            let offsets = number_vec(get(v, path, "offsets")?, &join(path, "offsets"))?;
            Body::hpolytope(normals, offsets).map_err(|e| core_err(path, e))
        }
        "vpolytope" => {
            let verts = number_rows(get(v, path, "vertices")?, &join(path, "vertices"))?;
            Body::vpolytope(verts).map_err(|e| core_err(path, e))
        }
        "zonotope" => {
            let gens = number_rows(get(v, path, "generators")?, &join(path, "generators"))?;
            let dim = match v.get("dim") {
                Some(d) => as_usize(d, &join(path, "dim"))?,
                None => gens
                    .first()
                    .map(|g| g.len())
                    .ok_or_else(|| {
                        DocError::new(
                            &join(path, "generators"),
                            "a zonotope without generators needs an explicit \"dim\"",
                        )
                    })?,
            };
            Body::zonotope(dim, gens).map_err(|e| core_err(path, e))
        }
        "ball2" => {
            let dim = as_usize(get(v, path, "dim")?, &join(path, "dim"))?;
            let radius = match v.get("radius") {
                Some(r) => as_f64(r, &join(path, "radius"))?,
                None => 1.0,
            };
            Body::ball(dim, radius).map_err(|e| core_err(path, e))
        }
        "polar" => {
            let inner = body_from_value(get(v, path, "of")?, &join(path, "of"))?;
            Ok(inner.polar())
        }
        "scaled" => {
            let factor = as_f64(get(v, path, "factor")?, &join(path, "factor"))?;
            let inner = body_from_value(get(v, path, "of")?, &join(path, "of"))?;
            inner.scale(factor).map_err(|e| core_err(path, e))
        }
        "sum" => {
            let terms = body_terms(v, path)?;
            let mut it = terms.into_iter();
            let mut acc = it.next().expect("at least two terms");
            for t in it {
                acc = Body::minkowski_sum(acc, t).map_err(|e| core_err(path, e))?;
            }
            Ok(acc)
        }
        "intersection" => {
            let terms = body_terms(v, path)?;
            let mut it = terms.into_iter();
            let mut acc = it.next().expect("at least two terms");
            for t in it {
                acc = Body::intersection(acc, t).map_err(|e| core_err(path, e))?;
            }
            Ok(acc)
        }
        other => Err(DocError::new(
            &join(path, "kind"),
            format!(
                "unknown body kind \"{other}\" (expected hpolytope, vpolytope, zonotope, \
                 ball2, polar, scaled, sum, or intersection)"
            ),
        )),
    }
}

/// Reads a space document: the shorthand {"norm": "l1"|"l2"|"linf",
/// "dim": n}, an object {"ball": body}, or a bare body document whose
/// unit ball defines the norm.
pub fn space_from_value(v: &Value, path: &str) -> DocResult<NormedSpace> {
    if let Some(norm) = v.get("norm") {
        let name = as_str(norm, &join(path, "norm"))?;
        let dim = as_usize(get(v, path, "dim")?, &join(path, "dim"))?;
        if dim == 0 {
            return Err(DocError::new(&join(path, "dim"), "dimension must be positive"));
        }
        return match name {
            "l1" => Ok(NormedSpace::l1(dim)),
            "l2" => Ok(NormedSpace::euclidean(dim)),
            "linf" => Ok(NormedSpace::linf(dim)),
            other => Err(DocError::new(
                &join(path, "norm"),
                format!("unknown norm \"{other}\" (expected l1, l2, or linf)"),
            )),
        };
    }
    let ball = if let Some(b) = v.get("ball") {
        body_from_value(b, &join(path, "ball"))?
    } else {
        body_from_value(v, path)?
    };
    NormedSpace::from_ball(ball).map_err(|e| core_err(path, e))
}

/// Reads a certificate document: {"space": ..., "enlargement": ...,
/// "pairs": [{"f": [...], "y": [...]}, ...]}.
pub fn certificate_from_value(v: &Value) -> DocResult<Certificate> {
    if !v.is_object() {
        return Err(DocError::new("", "expected a certificate object"));
    }
    let space = space_from_value(get(v, "", "space")?, "space")?;
    let enlargement = body_from_value(get(v, "", "enlargement")?, "enlargement")?;
    let pairs_val = get(v, "", "pairs")?
        .as_array()
        .ok_or_else(|| DocError::new("pairs", "expected an array of pair objects"))?;
    let mut pairs = Vec::with_capacity(pairs_val.len());
    for (i, p) in pairs_val.iter().enumerate() {
        let path = format!("pairs[{i}]");
        let f = number_vec(get(p, &path, "f")?, &format!("{path}.f"))?;
        let y = number_vec(get(p, &path, "y")?, &format!("{path}.y"))?;
        pairs.push(Pair {
            functional: f,
            vector: y,
        });
    }
    Certificate::new(space, pairs, enlargement).map_err(|e| core_err("", e))
}

/// Reads a frame document: {"functionals": [[...]], "points": [[...]]},
/// the points optional.
pub fn frame_from_value(v: &Value) -> DocResult<(Vec<Vec<f64>>, Option<Vec<Vec<f64>>>)> {
    let functionals = number_rows(get(v, "", "functionals")?, "functionals")?;
    let points = match v.get("points") {
        Some(p) => Some(number_rows(p, "points")?),
        None => None,
    };
    Ok((functionals, points))
}

/// Reads a group document: {"matrices": [[[...], ...], ...]}.
pub fn group_from_value(v: &Value, pol: &TolerancePolicy) -> DocResult<OrthogonalGroupAction> {
    let mats_val = get(v, "", "matrices")?
        .as_array()
        .ok_or_else(|| DocError::new("matrices", "expected an array of matrices"))?;
    if mats_val.is_empty() {
        return Err(DocError::new("matrices", "expected at least one matrix"));
    }
    let mut elements = Vec::with_capacity(mats_val.len());
    for (i, m) in mats_val.iter().enumerate() {
        let path = format!("matrices[{i}]");
        let rows = number_rows(m, &path)?;
        elements.push(Matrix::from_rows(&rows).map_err(|e| core_err(&path, e))?);
    }
    let dim = elements[0].rows;
    OrthogonalGroupAction::new(dim, elements, pol).map_err(|e| core_err("matrices", e))
}

/// A JSON value assembled for deterministic output. `Num` renders with
/// `{:.16e}`; `Int` renders as a plain integer.
pub enum JVal {
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<JVal>),
    /// Array rendered on one line regardless of nesting depth.
    InlineArr(Vec<JVal>),
    Obj(Vec<(&'static str, JVal)>),
    Null,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn render_inline(v: &JVal, out: &mut String) {
    match v {
        JVal::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        JVal::Int(i) => out.push_str(&i.to_string()),
        JVal::Num(x) => out.push_str(&fmt_f64(*x)),
        JVal::Str(s) => {
            out.push('"');
            out.push_str(&escape(s));
            out.push('"');
        }
        JVal::Null => out.push_str("null"),
        JVal::Arr(items) | JVal::InlineArr(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_inline(item, out);
            }
            out.push(']');
        }
        JVal::Obj(fields) => {
            out.push('{');
            for (i, (k, val)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push('"');
                out.push_str(k);
                out.push_str("\": ");
                render_inline(val, out);
            }
            out.push('}');
        }
    }
}

fn render_at(v: &JVal, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let inner_pad = "  ".repeat(depth + 1);
    match v {
        JVal::Arr(items) if !items.is_empty() => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&inner_pad);
                render_at(item, depth + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(']');
        }
        JVal::Obj(fields) if !fields.is_empty() => {
            out.push_str("{\n");
            for (i, (k, val)) in fields.iter().enumerate() {
                out.push_str(&inner_pad);
                out.push('"');
                out.push_str(k);
                out.push_str("\": ");
                render_at(val, depth + 1, out);
                if i + 1 < fields.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
        other => render_inline(other, out),
    }
}

/// Renders a JSON value with two-space indentation and a trailing
/// newline. The same value always renders to the same bytes.
pub fn render_json(v: &JVal) -> String {
    let mut out = String::new();
    render_at(v, 0, &mut out);
    out.push('\n');
    out
}

pub fn coords_jval(x: &[f64]) -> JVal {
    JVal::InlineArr(x.iter().map(|&v| JVal::Num(v)).collect())
}

pub fn rows_jval(rows: &[Vec<f64>]) -> JVal {
    JVal::Arr(rows.iter().map(|r| coords_jval(r)).collect())
}

/// Body document for a body, mirroring `body_from_value`.
pub fn body_to_jval(body: &Body) -> JVal {
    match body {
        Body::HPolytope {
            normals, offsets, ..
        } => JVal::Obj(vec![
            ("kind", JVal::Str("hpolytope".into())),
            ("normals", rows_jval(normals)),
            ("offsets", coords_jval(offsets)),
        ]),
        Body::VPolytope { vertices, .. } => JVal::Obj(vec![
            ("kind", JVal::Str("vpolytope".into())),
            ("vertices", rows_jval(vertices)),
        ]),
        Body::Zonotope { dim, generators } => JVal::Obj(vec![
            ("kind", JVal::Str("zonotope".into())),
            ("dim", JVal::Int(*dim as i64)),
            ("generators", rows_jval(generators)),
        ]),
        Body::EuclideanBall { dim, radius } => JVal::Obj(vec![
            ("kind", JVal::Str("ball2".into())),
            ("dim", JVal::Int(*dim as i64)),
            ("radius", JVal::Num(*radius)),
        ]),
        Body::Polar(inner) => JVal::Obj(vec![
            ("kind", JVal::Str("polar".into())),
            ("of", body_to_jval(inner)),
        ]),
        Body::Scaled { factor, inner } => JVal::Obj(vec![
            ("kind", JVal::Str("scaled".into())),
            ("factor", JVal::Num(*factor)),
            ("of", body_to_jval(inner)),
        ]),
        Body::MinkowskiSum(a, b) => JVal::Obj(vec![
            ("kind", JVal::Str("sum".into())),
            ("terms", JVal::Arr(vec![body_to_jval(a), body_to_jval(b)])),
        ]),
        Body::Intersection(a, b) => JVal::Obj(vec![
            ("kind", JVal::Str("intersection".into())),
            ("terms", JVal::Arr(vec![body_to_jval(a), body_to_jval(b)])),
        ]),
    }
}

pub fn space_to_jval(space: &NormedSpace) -> JVal {
    JVal::Obj(vec![("ball", body_to_jval(space.unit_ball()))])
}

/// Certificate document, mirroring `certificate_from_value`.
pub fn certificate_to_jval(cert: &Certificate) -> JVal {
    JVal::Obj(vec![
        ("space", space_to_jval(cert.space())),
        ("enlargement", body_to_jval(cert.enlargement())),
        (
            "pairs",
            JVal::Arr(
                cert.pairs()
                    .iter()
                    .map(|p| {
                        JVal::Obj(vec![
                            ("f", coords_jval(&p.functional)),
                            ("y", coords_jval(&p.vector)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

pub fn certificate_to_string(cert: &Certificate) -> String {
    render_json(&certificate_to_jval(cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_exactly() {
        for &x in &[
            1.0,
            -1.0 / 3.0,
            std::f64::consts::PI,
            1e-300,
            2.0_f64.sqrt(),
            0.1 + 0.2,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn body_documents_round_trip() {
        let bodies = vec![
            Body::cube(2, 1.5),
            Body::ball(3, 2.0).unwrap(),
            Body::zonotope(2, vec![vec![1.0, 0.25], vec![0.0, 1.0]]).unwrap(),
            Body::vpolytope(vec![vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap(),
        ];
        for body in bodies {
            let text = render_json(&body_to_jval(&body));
            let parsed = body_from_value(&parse_text(&text).unwrap(), "").unwrap();
            assert_eq!(parsed, body);
            let text2 = render_json(&body_to_jval(&parsed));
            assert_eq!(text, text2);
        }
    }

    #[test]
    fn errors_carry_json_paths() {
        let v = parse_text(r#"{"kind": "hpolytope", "normals": [[1, "x"]], "offsets": [1]}"#)
            .unwrap();
        let err = body_from_value(&v, "").unwrap_err();
        assert_eq!(err.path, "normals[0][1]");
        let v = parse_text(r#"{"space": {"norm": "l7", "dim": 2}}"#).unwrap();
        let err = certificate_from_value(&v).unwrap_err();
        assert_eq!(err.path, "space.norm");
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_text("{\n  \"kind\": oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
