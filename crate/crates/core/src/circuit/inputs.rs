//! Erasing secrets before compilation, and reading each owner's input bits
//! back out of its own view.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{fits, Circuit, CircuitError, InputSource, Path, PathStep};
use crate::gmw::share::{ShareStream, ShareStreams};
use crate::lang::{slice_env, Closure, Env, FixClosure, Principal, Value};

/// Replaces everything secret in `v` by a placeholder of the same shape:
/// contents of seals are zeroed and share words dropped.
pub fn erase_value(v: &Value) -> Value {
    erase(v, false)
}

pub fn erase_env(env: &Env) -> Env {
    env.map_values(|v| erase(v, false))
}

fn erase(v: &Value, secret: bool) -> Value {
    match v {
        Value::Int(_) if secret => Value::Int(0),
        Value::Bool(_) if secret => Value::Bool(false),
        Value::Str(_) if secret => Value::Str(Default::default()),
        Value::Sealed(s, inner) => Value::sealed(s.clone(), erase(inner, true)),
        Value::Tuple(vs) => Value::Tuple(vs.iter().map(|x| erase(x, secret)).collect()),
        Value::List(vs) => Value::List(vs.iter().map(|x| erase(x, secret)).collect()),
        Value::Map(m) => Value::Map(m.iter().map(|(p, x)| (p.clone(), erase(x, secret))).collect()),
        Value::Clos(c) => Value::Clos(Closure {
            env: c.env.map_values(|x| erase(x, secret)),
            param: c.param.clone(),
            body: c.body.clone(),
        }),
        Value::FixClos(c) => Value::FixClos(FixClosure {
            env: c.env.map_values(|x| erase(x, secret)),
            name: c.name.clone(),
            param: c.param.clone(),
            body: c.body.clone(),
        }),
        Value::Share(sh) => Value::Share(crate::gmw::ShareHandle {
            parties: sh.parties.clone(),
            words: BTreeMap::new(),
        }),
        other => other.clone(),
    }
}

fn missing(path: &Path) -> CircuitError {
    CircuitError::MissingInput(format!("{path}"))
}

/// The value at `path` in `env`.
pub(crate) fn resolve<'a>(env: &'a Env, path: &Path) -> Result<&'a Value, CircuitError> {
    let mut v = env.get(&path.var).ok_or_else(|| missing(path))?;
    for step in &path.steps {
        v = match (step, v) {
            (PathStep::Sealed, Value::Sealed(_, inner)) => inner,
            (PathStep::Index(i), Value::Tuple(vs) | Value::List(vs)) => vs.get(*i).ok_or_else(|| missing(path))?,
            (PathStep::ClosEnv(x), Value::Clos(c)) => c.env.get(x).ok_or_else(|| missing(path))?,
            (PathStep::ClosEnv(x), Value::FixClos(c)) => c.env.get(x).ok_or_else(|| missing(path))?,
            (PathStep::MapKey(p), Value::Map(m)) => m.get(p).ok_or_else(|| missing(path))?,
            _ => return Err(missing(path)),
        };
    }
    Ok(v)
}

/// Party `p`'s input bits for `c`, read from its own environment and share
/// stream.
pub fn assign_inputs(
    c: &Circuit,
    p: &Principal,
    env: &Env,
    stream: &ShareStream,
) -> Result<Vec<bool>, CircuitError> {
    let Some(wires) = c.inputs.get(p) else {
        return Ok(Vec::new());
    };
    let mut bits = Vec::with_capacity(wires.len());
    for iw in wires {
        let b = match &iw.source {
            InputSource::Value { path, bit } => match resolve(env, path)? {
                Value::Int(n) => {
                    if !fits(*n, c.width) {
                        return Err(CircuitError::WidthOverflow(*n));
                    }
                    (n >> (*bit).min(63)) & 1 == 1
                }
                Value::Bool(b) => *b,
                _ => return Err(missing(path)),
            },
            InputSource::ShareWord { path, bit } => match resolve(env, path)? {
                Value::Share(sh) => {
                    let w = sh.words.get(p).ok_or_else(|| missing(path))?;
                    (w >> bit) & 1 == 1
                }
                _ => return Err(missing(path)),
            },
            InputSource::ShareMask { index, bit } => (stream.peek(*index) >> bit) & 1 == 1,
        };
        bits.push(b);
    }
    Ok(bits)
}

/// Every party's input bits for `c`, each read from its own slice of `env`.
pub fn party_inputs(
    c: &Circuit,
    env: &Env,
    streams: &ShareStreams,
) -> Result<BTreeMap<Principal, Vec<bool>>, CircuitError> {
    c.parties
        .iter()
        .map(|p| Ok((p.clone(), assign_inputs(c, p, &slice_env(p, env), &streams.get(p))?)))
        .collect()
}
