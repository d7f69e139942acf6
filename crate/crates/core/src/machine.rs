//! The stepper shared by the single-threaded semantics and each party's local
//! semantics. The two differ only at the mode-sensitive rules, selected by
//! [`Flavor`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::mem;

use crate::gmw::share;
use crate::lang::ffi::{self, COMB_SH, MK_SH};
use crate::lang::{Config, Control, Env, EvalCtx, Expr, Frame, PrinSet, Principal, TraceElt, Value};

/// A failed side condition: the rule that could not fire and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stuck {
    pub rule: &'static str,
    pub reason: String,
}

impl Stuck {
    pub fn new(rule: &'static str, reason: impl Into<String>) -> Stuck {
        Stuck {
            rule,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Stuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stuck at {}: {}", self.rule, self.reason)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flavor<'a> {
    Single,
    Local(&'a Principal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    Rule(&'static str),
    /// A value with an empty stack.
    Terminal,
    /// A local configuration blocked at `as_sec ps thunk`.
    NeedsSec { ps: PrinSet, thunk: Value },
}

fn stuck<T>(rule: &'static str, reason: impl Into<String>) -> Result<T, Stuck> {
    Err(Stuck::new(rule, reason))
}

/// The `as_sec` redex a local configuration is blocked on, if any.
pub(crate) fn waiting_sec(cfg: &Config) -> Option<(PrinSet, &Value)> {
    let thunk = cfg.control.value()?;
    match &cfg.stack.last()?.ctx {
        EvalCtx::AsSecThunk(ps) => Some((ps.as_prins()?, thunk)),
        _ => None,
    }
}

fn prins_of(rule: &'static str, v: &Value) -> Result<PrinSet, Stuck> {
    match v.as_prins() {
        Some(s) if !s.is_empty() => Ok(s),
        _ => stuck(rule, format!("expected a non-empty principal set, got {v}")),
    }
}

/// Binds the argument of a closure, returning the body's environment and
/// the body.
pub(crate) fn enter(f: &Value, arg: Value) -> Option<(Env, Arc<Expr>)> {
    match f {
        Value::Clos(c) => Some((c.env.extend(c.param.clone(), arg), c.body.clone())),
        Value::FixClos(c) => {
            let env = c
                .env
                .extend(c.name.clone(), f.clone())
                .extend(c.param.clone(), arg);
            Some((env, c.body.clone()))
        }
        _ => None,
    }
}

fn closure_env(v: &Value) -> Option<&Env> {
    match v {
        Value::Clos(c) => Some(&c.env),
        Value::FixClos(c) => Some(&c.env),
        _ => None,
    }
}

/// Sealability of `as_par` results: no share handle over a different party
/// set, and no closure capturing a value sealed away from every member of `s`.
pub fn can_seal(s: &PrinSet, v: &Value) -> bool {
    fn captured(s: &PrinSet, v: &Value) -> bool {
        match v {
            Value::Sealed(s2, inner) => s2.intersects(s) && captured(s, inner),
            Value::Tuple(vs) | Value::List(vs) => vs.iter().all(|x| captured(s, x)),
            Value::Map(m) => m.values().all(|x| captured(s, x)),
            _ => can_seal(s, v),
        }
    }
    if let Some(env) = closure_env(v) {
        return env.iter().all(|(_, x)| captured(s, x));
    }
    match v {
        Value::Share(sh) => sh.parties == *s,
        Value::Sealed(_, inner) => can_seal(s, inner),
        Value::Tuple(vs) | Value::List(vs) => vs.iter().all(|x| can_seal(s, x)),
        Value::Map(m) => m.values().all(|x| can_seal(s, x)),
        _ => true,
    }
}

impl<'a> Flavor<'a> {
    fn name(self, single: &'static str, local: &'static str) -> &'static str {
        match self {
            Flavor::Single => single,
            Flavor::Local(_) => local,
        }
    }
}

/// Advances `cfg` by one rule.
pub(crate) fn step(cfg: &mut Config, flavor: Flavor<'_>) -> Result<Step, Stuck> {
    match &cfg.control {
        Control::Expr(e) => {
            let e = e.clone();
            step_expr(cfg, &e, flavor)
        }
        Control::Value(_) => {
            if cfg.stack.is_empty() {
                return Ok(Step::Terminal);
            }
            if let Flavor::Local(_) = flavor {
                if let Some((ps, thunk)) = waiting_sec(cfg) {
                    return Ok(Step::NeedsSec {
                        ps,
                        thunk: thunk.clone(),
                    });
                }
            }
            let v = match mem::replace(&mut cfg.control, Control::Value(Value::Unit)) {
                Control::Value(v) => v,
                Control::Expr(_) => unreachable!(),
            };
            let frame = cfg.stack.pop().expect("non-empty stack");
            pop(cfg, frame, v, flavor)
        }
    }
}

fn push(cfg: &mut Config, ctx: EvalCtx, next: &Arc<Expr>) {
    cfg.stack.push(Frame {
        mode: cfg.mode.clone(),
        env: cfg.env.clone(),
        ctx,
        trace: Vec::new(),
    });
    cfg.control = Control::Expr(next.clone());
}

fn step_expr(cfg: &mut Config, e: &Expr, flavor: Flavor<'_>) -> Result<Step, Stuck> {
    let rule = match e {
        Expr::Const(v) => {
            cfg.control = Control::Value(v.clone());
            "const"
        }
        Expr::Var(x) => match cfg.env.get(x) {
            Some(v) => {
                cfg.control = Control::Value(v.clone());
                "var"
            }
            None => return stuck("var", format!("unbound variable `{x}`")),
        },
        Expr::Lam(x, body) => {
            cfg.control = Control::Value(Value::Clos(crate::lang::Closure {
                env: cfg.env.clone(),
                param: x.clone(),
                body: body.clone(),
            }));
            "lam"
        }
        Expr::Fix(f, x, body) => {
            cfg.control = Control::Value(Value::FixClos(crate::lang::FixClosure {
                env: cfg.env.clone(),
                name: f.clone(),
                param: x.clone(),
                body: body.clone(),
            }));
            "fix"
        }
        Expr::AsPar(a, b) => {
            push(cfg, EvalCtx::AsParPrins(b.clone()), a);
            "ctx"
        }
        Expr::AsSec(a, b) => {
            push(cfg, EvalCtx::AsSecPrins(b.clone()), a);
            "ctx"
        }
        Expr::Seal(a, b) => {
            push(cfg, EvalCtx::SealPrins(b.clone()), a);
            "ctx"
        }
        Expr::Reveal(a) => {
            push(cfg, EvalCtx::Reveal, a);
            "ctx"
        }
        Expr::MkMap(a, b) => {
            push(cfg, EvalCtx::MkMapPrins(b.clone()), a);
            "ctx"
        }
        Expr::Project(a, b) => {
            push(cfg, EvalCtx::ProjectPrin(b.clone()), a);
            "ctx"
        }
        Expr::Concat(a, b) => {
            push(cfg, EvalCtx::ConcatLeft(b.clone()), a);
            "ctx"
        }
        Expr::Let(x, a, b) => {
            push(cfg, EvalCtx::Let(x.clone(), b.clone()), a);
            "ctx"
        }
        Expr::App(a, b) => {
            push(cfg, EvalCtx::AppFn(b.clone()), a);
            "ctx"
        }
        Expr::If(c, t, f) => {
            push(cfg, EvalCtx::If(t.clone(), f.clone()), c);
            "ctx"
        }
        Expr::Ffi(name, args) => match args.split_first() {
            None => {
                let v = call_ffi(cfg, name, Vec::new(), flavor)?;
                cfg.control = Control::Value(v);
                flavor.name("S-ffi", "L-ffi")
            }
            Some((first, rest)) => {
                let ctx = EvalCtx::Ffi {
                    name: name.clone(),
                    done: Vec::new(),
                    rest: rest.to_vec(),
                };
                push(cfg, ctx, first);
                "ctx"
            }
        },
    };
    Ok(Step::Rule(rule))
}

fn call_ffi(
    cfg: &mut Config,
    name: &str,
    args: Vec<Value>,
    flavor: Flavor<'_>,
) -> Result<Value, Stuck> {
    let rule = flavor.name("S-ffi", "L-ffi");
    if name == MK_SH || name == COMB_SH {
        if flavor != Flavor::Single || !cfg.mode.is_sec() {
            return stuck(rule, format!("`{name}` outside a secure block"));
        }
        if args.len() != 1 {
            return stuck(rule, format!("`{name}` expects 1 argument"));
        }
        let r = if name == MK_SH {
            share::mk_sh(&args[0], &cfg.mode.ps, &mut cfg.shares).map(Value::Share)
        } else {
            match &args[0] {
                Value::Share(sh) => share::comb_sh(sh, &cfg.mode.ps).map(Value::Int),
                other => return stuck(rule, format!("`comb_sh` of non-share {other}")),
            }
        };
        return r.map_err(|e| Stuck::new(rule, format!("{e}")));
    }
    ffi::exec_ffi(name, &args).map_err(|e| Stuck::new(rule, format!("{e}")))
}

fn pop(cfg: &mut Config, frame: Frame, v: Value, flavor: Flavor<'_>) -> Result<Step, Stuck> {
    let Frame {
        mode,
        env,
        ctx,
        trace,
    } = frame;
    cfg.mode = mode;
    cfg.env = env;
    let rule = match ctx {
        EvalCtx::AsParPrins(next) => {
            push(cfg, EvalCtx::AsParThunk(v), &next);
            "ctx"
        }
        EvalCtx::AsSecPrins(next) => {
            push(cfg, EvalCtx::AsSecThunk(v), &next);
            "ctx"
        }
        EvalCtx::SealPrins(next) => {
            push(cfg, EvalCtx::SealArg(v), &next);
            "ctx"
        }
        EvalCtx::MkMapPrins(next) => {
            push(cfg, EvalCtx::MkMapArg(v), &next);
            "ctx"
        }
        EvalCtx::ProjectPrin(next) => {
            push(cfg, EvalCtx::ProjectMap(v), &next);
            "ctx"
        }
        EvalCtx::ConcatLeft(next) => {
            push(cfg, EvalCtx::ConcatRight(v), &next);
            "ctx"
        }
        EvalCtx::AppFn(next) => {
            push(cfg, EvalCtx::AppArg(v), &next);
            "ctx"
        }
        EvalCtx::Let(x, body) => {
            cfg.env = cfg.env.extend(x, v);
            cfg.control = Control::Expr(body);
            "let"
        }
        EvalCtx::If(t, f) => {
            match v {
                Value::Bool(true) => cfg.control = Control::Expr(t),
                Value::Bool(false) => cfg.control = Control::Expr(f),
                other => return stuck("if", format!("condition {other} is not a boolean")),
            }
            "if"
        }
        EvalCtx::AppArg(f) => {
            let Some((env, body)) = enter(&f, v) else {
                return stuck("app", format!("applying non-function {f}"));
            };
            cfg.env = env;
            cfg.control = Control::Expr(body);
            "app"
        }
        EvalCtx::Ffi {
            name,
            mut done,
            mut rest,
        } => {
            done.push(v);
            if rest.is_empty() {
                let r = call_ffi(cfg, &name, done, flavor)?;
                cfg.control = Control::Value(r);
                flavor.name("S-ffi", "L-ffi")
            } else {
                let next = rest.remove(0);
                push(cfg, EvalCtx::Ffi { name, done, rest }, &next);
                "ctx"
            }
        }
        EvalCtx::AsParThunk(psv) => return as_par(cfg, &psv, v, trace, flavor),
        EvalCtx::AsParBody(s) => {
            let body = mem::replace(&mut cfg.trace, trace);
            match flavor {
                Flavor::Single => {
                    if !can_seal(&s, &v) {
                        return stuck("S-parret", format!("cannot seal {v} to {s}"));
                    }
                    cfg.trace.push(TraceElt::Scope(s.clone(), body));
                }
                Flavor::Local(_) => cfg.trace.extend(body),
            }
            cfg.control = Control::Value(Value::sealed(s, v));
            flavor.name("S-parret", "L-parret")
        }
        EvalCtx::AsSecThunk(psv) => {
            if flavor != Flavor::Single {
                return stuck("L-assec", format!("as_sec with malformed principals {psv}"));
            }
            let s = prins_of("S-assec", &psv)?;
            if !cfg.mode.is_par() || cfg.mode.ps != s {
                return stuck("S-assec", format!("as_sec {s} in mode {}", cfg.mode));
            }
            let Some((env, body)) = enter(&v, Value::Unit) else {
                return stuck("S-assec", format!("as_sec of non-function {v}"));
            };
            let saved = mem::take(&mut cfg.trace);
            cfg.stack.push(Frame {
                mode: cfg.mode.clone(),
                env: cfg.env.clone(),
                ctx: EvalCtx::AsSecBody,
                trace: saved,
            });
            cfg.mode = crate::lang::Mode::sec(s);
            cfg.env = env;
            cfg.control = Control::Expr(body);
            "S-assec"
        }
        EvalCtx::AsSecBody => {
            if !cfg.trace.is_empty() {
                return stuck("S-secret", "secure block produced a trace");
            }
            cfg.trace = trace;
            cfg.trace.push(TraceElt::Msg(v.clone()));
            cfg.control = Control::Value(v);
            "S-secret"
        }
        EvalCtx::SealArg(psv) => {
            let s = prins_of(flavor.name("S-seal", "L-seal"), &psv)?;
            let sealed = match flavor {
                Flavor::Single => {
                    if !s.is_subset(&cfg.mode.ps) {
                        return stuck("S-seal", format!("seal {s} in mode {}", cfg.mode));
                    }
                    Value::sealed(s, v)
                }
                Flavor::Local(p) if s.contains(p) => Value::sealed(s, v),
                Flavor::Local(_) => Value::sealed(s, Value::Opaque),
            };
            cfg.control = Control::Value(sealed);
            flavor.name("S-seal", "L-seal")
        }
        EvalCtx::Reveal => {
            let rule = flavor.name("S-reveal", "L-reveal");
            let Value::Sealed(s, inner) = v else {
                return stuck(rule, format!("reveal of unsealed {v}"));
            };
            let ok = match flavor {
                Flavor::Single if cfg.mode.is_par() => cfg.mode.ps.is_subset(&s),
                Flavor::Single => cfg.mode.ps.intersects(&s),
                Flavor::Local(p) => s.contains(p),
            };
            if !ok {
                return stuck(rule, format!("reveal of a {s} value in mode {}", cfg.mode));
            }
            cfg.control = Control::Value(*inner);
            rule
        }
        EvalCtx::MkMapArg(psv) => {
            let rule = flavor.name("S-mkmap", "L-mkmap");
            let s = prins_of(rule, &psv)?;
            let map = mkmap(cfg, &s, v, flavor)?;
            cfg.control = Control::Value(Value::Map(map));
            rule
        }
        EvalCtx::ProjectMap(pv) => {
            let rule = flavor.name("S-proj", "L-proj");
            let Value::Prin(p) = pv else {
                return stuck(rule, format!("project of non-principal {pv}"));
            };
            let Value::Map(mut m) = v else {
                return stuck(rule, format!("project from non-map {v}"));
            };
            let ok = match flavor {
                Flavor::Single if cfg.mode.is_par() => {
                    cfg.mode.ps.len() == 1 && cfg.mode.ps.contains(&p)
                }
                Flavor::Single => cfg.mode.ps.contains(&p),
                Flavor::Local(me) => *me == p && m.len() == 1,
            };
            if !ok {
                return stuck(rule, format!("project {p} in mode {}", cfg.mode));
            }
            let Some(x) = m.remove(&p) else {
                return stuck(rule, format!("{p} not in map"));
            };
            cfg.control = Control::Value(x);
            rule
        }
        EvalCtx::ConcatRight(left) => {
            let rule = flavor.name("S-concat", "L-concat");
            let (Value::Map(mut m1), Value::Map(m2)) = (left, v) else {
                return stuck(rule, "concat of non-maps");
            };
            for (p, x) in m2 {
                if m1.contains_key(&p) {
                    return stuck(rule, format!("{p} in both maps"));
                }
                m1.insert(p, x);
            }
            cfg.control = Control::Value(Value::Map(m1));
            rule
        }
    };
    Ok(Step::Rule(rule))
}

fn as_par(
    cfg: &mut Config,
    psv: &Value,
    thunk: Value,
    _saved: Vec<TraceElt>,
    flavor: Flavor<'_>,
) -> Result<Step, Stuck> {
    let rule = flavor.name("S-aspar", "L-aspar1");
    let s = prins_of(rule, psv)?;
    match flavor {
        Flavor::Single => {
            if !cfg.mode.is_par() {
                return stuck(rule, format!("as_par {s} in mode {}", cfg.mode));
            }
            if !s.is_subset(&cfg.mode.ps) {
                return stuck(rule, format!("as_par {s} in mode {}", cfg.mode));
            }
        }
        Flavor::Local(p) => {
            if !s.contains(p) {
                cfg.control = Control::Value(Value::sealed(s, Value::Opaque));
                return Ok(Step::Rule("L-aspar2"));
            }
        }
    }
    let Some((env, body)) = enter(&thunk, Value::Unit) else {
        return stuck(rule, format!("as_par of non-function {thunk}"));
    };
    let saved = mem::take(&mut cfg.trace);
    cfg.stack.push(Frame {
        mode: cfg.mode.clone(),
        env: cfg.env.clone(),
        ctx: EvalCtx::AsParBody(s.clone()),
        trace: saved,
    });
    if flavor == Flavor::Single {
        cfg.mode = crate::lang::Mode::par(s);
    }
    cfg.env = env;
    cfg.control = Control::Expr(body);
    Ok(Step::Rule(rule))
}

fn mkmap(
    cfg: &Config,
    s: &PrinSet,
    v: Value,
    flavor: Flavor<'_>,
) -> Result<BTreeMap<Principal, Value>, Stuck> {
    let rule = flavor.name("S-mkmap", "L-mkmap");
    match flavor {
        Flavor::Single if cfg.mode.is_sec() => {
            if !s.is_subset(&cfg.mode.ps) {
                return stuck(rule, format!("mkmap {s} in mode {}", cfg.mode));
            }
            Ok(s.iter().map(|p| (p.clone(), v.clone())).collect())
        }
        Flavor::Single => {
            let Value::Sealed(s2, inner) = v else {
                return stuck(rule, format!("mkmap of unsealed {v}"));
            };
            if !s.is_subset(&cfg.mode.ps) || !s.is_subset(&s2) {
                return stuck(rule, format!("mkmap {s} of a {s2} value in mode {}", cfg.mode));
            }
            Ok(s.iter().map(|p| (p.clone(), (*inner).clone())).collect())
        }
        Flavor::Local(p) => {
            let Value::Sealed(_, inner) = v else {
                return stuck(rule, format!("mkmap of unsealed {v}"));
            };
            if s.contains(p) {
                Ok(BTreeMap::from([(p.clone(), *inner)]))
            } else {
                Ok(BTreeMap::new())
            }
        }
    }
}
