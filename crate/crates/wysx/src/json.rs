//! JSON encoding of values and traces.
//!
//! Scalars map to JSON scalars, lists to arrays and unit to `null`. Everything
//! else is a single-key object:
//!
//! ```text
//! {"sealed": {"ps": ["a"], "v": ...}}   "v" may be omitted or "opaque"
//! {"opaque": null}
//! {"prin": "a"}            {"prins": ["a", "b"]}
//! {"tuple": [...]}         {"map": {"a": ...}}
//! {"share": {"ps": ["a", "b"], "words": {"a": 17}}}
//! ```
//!
//! Closures are written as `{"closure": "<fun x>"}` and cannot be read back.
//! Object keys come out sorted, so equal values give identical text.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value as Json};
use wysx_core::gmw::ShareHandle;
use wysx_core::lang::{PrinSet, Principal, Trace, TraceElt, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// The JSON has no value counterpart.
    Unsupported(String),
    /// A tagged object is missing a field or has one of the wrong kind.
    BadField { tag: &'static str, field: &'static str },
    NotAnObject(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Unsupported(j) => write!(f, "no value is written as {j}"),
            FormatError::BadField { tag, field } => write!(f, "`{tag}` needs a well-formed `{field}`"),
            FormatError::NotAnObject(j) => write!(f, "expected a JSON object, found {j}"),
        }
    }
}

impl std::error::Error for FormatError {}

pub fn to_json(v: &Value) -> Json {
    match v {
        Value::Unit => Json::Null,
        Value::Bool(b) => json!(b),
        Value::Int(n) => json!(n),
        Value::Str(s) => json!(s),
        Value::List(vs) => Json::Array(vs.iter().map(to_json).collect()),
        Value::Tuple(vs) => json!({ "tuple": vs.iter().map(to_json).collect::<Vec<_>>() }),
        Value::Prin(p) => json!({ "prin": p.name() }),
        Value::Prins(s) => json!({ "prins": prins_json(s) }),
        Value::Sealed(s, inner) => json!({ "sealed": { "ps": prins_json(s), "v": to_json(inner) } }),
        Value::Map(m) => {
            let m: Map<String, Json> = m.iter().map(|(p, v)| (p.name().to_string(), to_json(v))).collect();
            json!({ "map": m })
        }
        Value::Share(sh) => {
            let words: Map<String, Json> = sh.words.iter().map(|(p, w)| (p.name().to_string(), json!(w))).collect();
            json!({ "share": { "ps": prins_json(&sh.parties), "words": words } })
        }
        Value::Opaque => json!({ "opaque": null }),
        Value::Clos(_) | Value::FixClos(_) => json!({ "closure": v.to_string() }),
    }
}

fn prins_json(s: &PrinSet) -> Json {
    Json::Array(s.iter().map(|p| json!(p.name())).collect())
}

pub fn trace_to_json(t: &Trace) -> Json {
    Json::Array(
        t.iter()
            .map(|e| match e {
                TraceElt::Msg(v) => json!({ "TMsg": to_json(v) }),
                TraceElt::Scope(s, t) => json!({ "TScope": { "ps": prins_json(s), "t": trace_to_json(t) } }),
            })
            .collect(),
    )
}

pub fn from_json(j: &Json) -> Result<Value, FormatError> {
    match j {
        Json::Null => Ok(Value::Unit),
        Json::Bool(b) => Ok(Value::Bool(*b)),
        Json::Number(n) => n.as_i64().map(Value::Int).ok_or_else(|| FormatError::Unsupported(j.to_string())),
        Json::String(s) => Ok(Value::Str(s.clone())),
        Json::Array(xs) => xs.iter().map(from_json).collect::<Result<_, _>>().map(Value::List),
        Json::Object(o) => {
            let mut it = o.iter();
            let (Some((tag, body)), None) = (it.next(), it.next()) else {
                return Err(FormatError::Unsupported(j.to_string()));
            };
            tagged(tag, body).ok_or_else(|| FormatError::Unsupported(j.to_string()))?
        }
    }
}

fn tagged(tag: &str, body: &Json) -> Option<Result<Value, FormatError>> {
    Some(match tag {
        "opaque" => Ok(Value::Opaque),
        "prin" => body
            .as_str()
            .map(|s| Value::Prin(Principal::new(s)))
            .ok_or(FormatError::BadField { tag: "prin", field: "name" }),
        "prins" => prins(body, "prins", "names").map(Value::Prins),
        "tuple" => match body {
            Json::Array(xs) => xs.iter().map(from_json).collect::<Result<_, _>>().map(Value::Tuple),
            _ => Err(FormatError::BadField { tag: "tuple", field: "items" }),
        },
        "map" => match body {
            Json::Object(o) => o
                .iter()
                .map(|(p, v)| Ok((Principal::new(p.as_str()), from_json(v)?)))
                .collect::<Result<_, _>>()
                .map(Value::Map),
            _ => Err(FormatError::BadField { tag: "map", field: "entries" }),
        },
        "sealed" => sealed(body),
        "share" => share(body),
        _ => return None,
    })
}

fn prins(j: &Json, tag: &'static str, field: &'static str) -> Result<PrinSet, FormatError> {
    let bad = FormatError::BadField { tag, field };
    let xs = j.as_array().ok_or_else(|| bad.clone())?;
    xs.iter()
        .map(|x| x.as_str().filter(|s| !s.is_empty()).map(Principal::new).ok_or_else(|| bad.clone()))
        .collect()
}

fn sealed(body: &Json) -> Result<Value, FormatError> {
    let ps = prins(body.get("ps").unwrap_or(&Json::Null), "sealed", "ps")?;
    let v = match body.get("v") {
        None => Value::Opaque,
        Some(Json::String(s)) if s == "opaque" => Value::Opaque,
        Some(v) => from_json(v)?,
    };
    Ok(Value::sealed(ps, v))
}

fn share(body: &Json) -> Result<Value, FormatError> {
    let parties = prins(body.get("ps").unwrap_or(&Json::Null), "share", "ps")?;
    let bad = FormatError::BadField { tag: "share", field: "words" };
    let words = match body.get("words") {
        None => BTreeMap::new(),
        Some(Json::Object(o)) => o
            .iter()
            .map(|(p, w)| w.as_u64().map(|w| (Principal::new(p.as_str()), w)).ok_or_else(|| bad.clone()))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(bad),
    };
    Ok(Value::Share(ShareHandle { parties, words }))
}
