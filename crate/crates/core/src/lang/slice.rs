//! Projections between the joint view of a value and each party's view.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{
    Closure, Config, Control, Env, EvalCtx, FixClosure, Frame, LangError, Mode, PrinSet, Principal,
    Protocol, Trace, TraceElt, Value,
};
use crate::gmw::ShareHandle;

/// What principal `p` can see of `v`: contents of seals not naming `p` become
/// `●`, maps keep only `p`'s entry, shares keep only `p`'s words.
pub fn slice_v(p: &Principal, v: &Value) -> Value {
    match v {
        Value::Sealed(s, inner) => {
            if s.contains(p) {
                Value::sealed(s.clone(), slice_v(p, inner))
            } else {
                Value::sealed(s.clone(), Value::Opaque)
            }
        }
        Value::Map(m) => Value::Map(
            m.get(p)
                .map(|x| (p.clone(), slice_v(p, x)))
                .into_iter()
                .collect(),
        ),
        Value::Tuple(vs) => Value::Tuple(vs.iter().map(|x| slice_v(p, x)).collect()),
        Value::List(vs) => Value::List(vs.iter().map(|x| slice_v(p, x)).collect()),
        Value::Clos(c) => Value::Clos(Closure {
            env: slice_env(p, &c.env),
            param: c.param.clone(),
            body: c.body.clone(),
        }),
        Value::FixClos(c) => Value::FixClos(FixClosure {
            env: slice_env(p, &c.env),
            name: c.name.clone(),
            param: c.param.clone(),
            body: c.body.clone(),
        }),
        Value::Share(sh) => Value::Share(sh.slice(p)),
        Value::Prin(_)
        | Value::Prins(_)
        | Value::Unit
        | Value::Bool(_)
        | Value::Int(_)
        | Value::Str(_)
        | Value::Opaque => v.clone(),
    }
}

pub fn slice_env(p: &Principal, env: &Env) -> Env {
    env.map_values(|v| slice_v(p, v))
}

/// The flat list of messages `p` observes.
pub fn slice_tr(p: &Principal, t: &[TraceElt]) -> Trace {
    let mut out = Trace::new();
    slice_tr_into(p, t, &mut out);
    out
}

fn slice_tr_into(p: &Principal, t: &[TraceElt], out: &mut Trace) {
    for e in t {
        match e {
            TraceElt::Msg(v) => out.push(TraceElt::Msg(slice_v(p, v))),
            TraceElt::Scope(s, inner) if s.contains(p) => slice_tr_into(p, inner, out),
            TraceElt::Scope(..) => {}
        }
    }
}

fn slice_ctx(p: &Principal, ctx: &EvalCtx) -> EvalCtx {
    let sv = |v: &Value| slice_v(p, v);
    match ctx {
        EvalCtx::AsParThunk(v) => EvalCtx::AsParThunk(sv(v)),
        EvalCtx::AsSecThunk(v) => EvalCtx::AsSecThunk(sv(v)),
        EvalCtx::SealArg(v) => EvalCtx::SealArg(sv(v)),
        EvalCtx::MkMapArg(v) => EvalCtx::MkMapArg(sv(v)),
        EvalCtx::ProjectMap(v) => EvalCtx::ProjectMap(sv(v)),
        EvalCtx::ConcatRight(v) => EvalCtx::ConcatRight(sv(v)),
        EvalCtx::AppArg(v) => EvalCtx::AppArg(sv(v)),
        EvalCtx::Ffi { name, done, rest } => EvalCtx::Ffi {
            name: name.clone(),
            done: done.iter().map(sv).collect(),
            rest: rest.clone(),
        },
        other => other.clone(),
    }
}

fn slice_frame(p: &Principal, f: &Frame) -> Frame {
    Frame {
        mode: Mode::par(PrinSet::singleton(p.clone())),
        env: slice_env(p, &f.env),
        ctx: slice_ctx(p, &f.ctx),
        trace: slice_tr(p, &f.trace),
    }
}

/// The protocol corresponding to a single-threaded configuration in mode
/// `Par s`: one sliced configuration per member of `s` and no secure
/// computations in flight. Exact for configurations with an empty stack.
pub fn slice_cfg(s: &PrinSet, c: &Config) -> Result<Protocol, LangError> {
    if !c.mode.is_par() || c.mode.ps != *s {
        return Err(LangError::ModeError {
            expected: Mode::par(s.clone()),
            found: c.mode.clone(),
        });
    }
    let par = s
        .iter()
        .map(|p| (p.clone(), slice_party(p, c)))
        .collect();
    Ok(Protocol {
        par,
        sec: BTreeMap::new(),
    })
}

/// One party's slice of a configuration.
pub fn slice_party(p: &Principal, c: &Config) -> Config {
    Config {
        mode: Mode::par(PrinSet::singleton(p.clone())),
        stack: c.stack.iter().map(|f| slice_frame(p, f)).collect(),
        env: slice_env(p, &c.env),
        trace: slice_tr(p, &c.trace),
        control: match &c.control {
            Control::Expr(e) => Control::Expr(e.clone()),
            Control::Value(v) => Control::Value(slice_v(p, v)),
        },
        shares: c.shares.restrict(&PrinSet::singleton(p.clone())),
    }
}

/// Merges two parties' views of one logical value.
pub fn combine_v(v1: &Value, v2: &Value) -> Result<Value, LangError> {
    let conflict = || LangError::CombineConflict {
        left: v1.clone(),
        right: v2.clone(),
    };
    match (v1, v2) {
        (Value::Opaque, v) | (v, Value::Opaque) => Ok(v.clone()),
        (Value::Sealed(s1, a), Value::Sealed(s2, b)) => {
            if s1 != s2 {
                return Err(conflict());
            }
            Ok(Value::sealed(s1.clone(), combine_v(a, b)?))
        }
        (Value::Map(m1), Value::Map(m2)) => {
            let mut out = m1.clone();
            for (p, b) in m2 {
                let merged = match m1.get(p) {
                    Some(a) => combine_v(a, b)?,
                    None => b.clone(),
                };
                out.insert(p.clone(), merged);
            }
            Ok(Value::Map(out))
        }
        (Value::Tuple(a), Value::Tuple(b)) if a.len() == b.len() => {
            Ok(Value::Tuple(combine_seq(a, b)?))
        }
        (Value::List(a), Value::List(b)) if a.len() == b.len() => {
            Ok(Value::List(combine_seq(a, b)?))
        }
        (Value::Clos(a), Value::Clos(b)) => {
            if a.param != b.param || a.body != b.body {
                return Err(conflict());
            }
            Ok(Value::Clos(Closure {
                env: combine_pair(&a.env, &b.env)?,
                param: a.param.clone(),
                body: a.body.clone(),
            }))
        }
        (Value::FixClos(a), Value::FixClos(b)) => {
            if a.name != b.name || a.param != b.param || a.body != b.body {
                return Err(conflict());
            }
            Ok(Value::FixClos(FixClosure {
                env: combine_pair(&a.env, &b.env)?,
                name: a.name.clone(),
                param: a.param.clone(),
                body: a.body.clone(),
            }))
        }
        (Value::Share(a), Value::Share(b)) => {
            ShareHandle::combine(a, b).map(Value::Share).ok_or_else(conflict)
        }
        (a, b) if a == b => Ok(a.clone()),
        _ => Err(conflict()),
    }
}

fn combine_seq(a: &[Value], b: &[Value]) -> Result<Vec<Value>, LangError> {
    a.iter().zip(b).map(|(x, y)| combine_v(x, y)).collect()
}

fn combine_pair(a: &Env, b: &Env) -> Result<Env, LangError> {
    if a.len() != b.len() || a.iter().zip(b.iter()).any(|((x, _), (y, _))| x != y) {
        return Err(LangError::DomainMismatch);
    }
    a.iter()
        .zip(b.iter())
        .map(|((x, u), (_, w))| Ok((x.clone(), combine_v(u, w)?)))
        .collect()
}

/// Pointwise [`combine_v`] over environments binding the same variables.
pub fn combine_env(envs: &[Env]) -> Result<Env, LangError> {
    let (first, rest) = envs.split_first().ok_or(LangError::DomainMismatch)?;
    rest.iter().try_fold(first.clone(), |acc, e| combine_pair(&acc, e))
}

/// Folds [`combine_v`] over a non-empty list of views.
pub fn combine_all(views: &[Value]) -> Result<Value, LangError> {
    let (first, rest) = views.split_first().ok_or(LangError::DomainMismatch)?;
    rest.iter().try_fold(first.clone(), |acc, v| combine_v(&acc, v))
}
