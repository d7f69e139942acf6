//! Host functions callable through `ffi f args`.
//!
//! Host functions are first-order, monomorphic and pure. Each one optionally
//! names the circuit primitive it lowers to inside secure blocks.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FfiError {
    UnknownFfi(String),
    ArityError {
        name: String,
        expected: usize,
        found: usize,
    },
    FfiTypeError {
        name: String,
        reason: String,
    },
    /// An argument contained `●`: the program touched data its executing
    /// party may not see.
    OpaqueArg(String),
}

impl fmt::Display for FfiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FfiError::UnknownFfi(n) => write!(f, "unknown host function `{n}`"),
            FfiError::ArityError {
                name,
                expected,
                found,
            } => write!(f, "`{name}` expects {expected} arguments, got {found}"),
            FfiError::FfiTypeError { name, reason } => write!(f, "`{name}`: {reason}"),
            FfiError::OpaqueArg(n) => write!(f, "`{n}` applied to an opaque argument"),
        }
    }
}

/// How a host function treats its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HostKind {
    /// Reads leaf values; any `●` in an argument is an error.
    Inspecting,
    /// Only rearranges containers, so elements may be sealed or opaque.
    Structural,
    /// Secret-share primitives; evaluated by the interpreter in `Sec` mode.
    Share,
}

/// Circuit primitive a host function lowers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lowering {
    Add,
    Sub,
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    Neq,
    And,
    Or,
    Not,
    Fst,
    Snd,
    Pair,
    Nil,
    Cons,
    Hd,
    Tl,
    IsNil,
    Length,
    Nth,
    Mem,
    ListIntersect,
    MkSh,
    CombSh,
}

pub struct HostFn {
    pub name: &'static str,
    pub arity: usize,
    pub kind: HostKind,
    pub lowering: Option<Lowering>,
    apply: fn(&[Value]) -> Result<Value, String>,
}

impl fmt::Debug for HostFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HostFn")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("kind", &self.kind)
            .finish()
    }
}

pub const MK_SH: &str = "mk_sh";
pub const COMB_SH: &str = "comb_sh";

macro_rules! host {
    ($name:literal, $arity:literal, $kind:ident, $low:expr, $f:expr) => {
        HostFn {
            name: $name,
            arity: $arity,
            kind: HostKind::$kind,
            lowering: $low,
            apply: $f,
        }
    };
}

static BUILTINS: &[HostFn] = &[
    host!("add", 2, Inspecting, Some(Lowering::Add), |a| int2(a, |x, y| Value::Int(x.wrapping_add(y)))),
    host!("sub", 2, Inspecting, Some(Lowering::Sub), |a| int2(a, |x, y| Value::Int(x.wrapping_sub(y)))),
    host!("mul", 2, Inspecting, None, |a| int2(a, |x, y| Value::Int(x.wrapping_mul(y)))),
    host!("gt", 2, Inspecting, Some(Lowering::Gt), |a| int2(a, |x, y| Value::Bool(x > y))),
    host!("ge", 2, Inspecting, Some(Lowering::Ge), |a| int2(a, |x, y| Value::Bool(x >= y))),
    host!("lt", 2, Inspecting, Some(Lowering::Lt), |a| int2(a, |x, y| Value::Bool(x < y))),
    host!("le", 2, Inspecting, Some(Lowering::Le), |a| int2(a, |x, y| Value::Bool(x <= y))),
    host!("eq", 2, Inspecting, Some(Lowering::Eq), |a| Ok(Value::Bool(a[0] == a[1]))),
    host!("neq", 2, Inspecting, Some(Lowering::Neq), |a| Ok(Value::Bool(a[0] != a[1]))),
    host!("and", 2, Inspecting, Some(Lowering::And), |a| bool2(a, |x, y| x && y)),
    host!("or", 2, Inspecting, Some(Lowering::Or), |a| bool2(a, |x, y| x || y)),
    host!("not", 1, Inspecting, Some(Lowering::Not), |a| match &a[0] {
        Value::Bool(b) => Ok(Value::Bool(!b)),
        _ => Err("expected a boolean".into()),
    }),
    host!("fst", 1, Structural, Some(Lowering::Fst), |a| pair_part(&a[0], 0)),
    host!("snd", 1, Structural, Some(Lowering::Snd), |a| pair_part(&a[0], 1)),
    host!("pair", 2, Structural, Some(Lowering::Pair), |a| Ok(Value::pair(a[0].clone(), a[1].clone()))),
    host!("nil", 0, Structural, Some(Lowering::Nil), |_| Ok(Value::List(Vec::new()))),
    host!("cons", 2, Structural, Some(Lowering::Cons), |a| {
        let mut l = alloc::vec![a[0].clone()];
        l.extend(list(&a[1])?.iter().cloned());
        Ok(Value::List(l))
    }),
    host!("hd", 1, Structural, Some(Lowering::Hd), |a| {
        list(&a[0])?.first().cloned().ok_or_else(|| "hd of empty list".into())
    }),
    host!("tl", 1, Structural, Some(Lowering::Tl), |a| {
        let l = list(&a[0])?;
        if l.is_empty() {
            return Err("tl of empty list".into());
        }
        Ok(Value::List(l[1..].to_vec()))
    }),
    host!("is_nil", 1, Structural, Some(Lowering::IsNil), |a| Ok(Value::Bool(list(&a[0])?.is_empty()))),
    host!("length", 1, Structural, Some(Lowering::Length), |a| Ok(Value::Int(list(&a[0])?.len() as i64))),
    host!("nth", 2, Structural, Some(Lowering::Nth), |a| {
        let l = list(&a[0])?;
        let i = a[1].as_int().ok_or("index must be an integer")?;
        usize::try_from(i)
            .ok()
            .and_then(|i| l.get(i))
            .cloned()
            .ok_or_else(|| format!("index {i} out of bounds"))
    }),
    host!("enumerate", 1, Structural, None, |a| {
        Ok(Value::List(
            list(&a[0])?
                .iter()
                .enumerate()
                .map(|(i, v)| Value::pair(Value::Int(i as i64), v.clone()))
                .collect(),
        ))
    }),
    host!("mem", 2, Inspecting, Some(Lowering::Mem), |a| Ok(Value::Bool(list(&a[1])?.contains(&a[0])))),
    host!("list_intersect", 2, Inspecting, Some(Lowering::ListIntersect), |a| {
        let lb = list(&a[1])?;
        Ok(Value::List(list(&a[0])?.iter().filter(|x| lb.contains(x)).cloned().collect()))
    }),
    host!("mk_sh", 1, Share, Some(Lowering::MkSh), |_| Err("only available in a secure block".into())),
    host!("comb_sh", 1, Share, Some(Lowering::CombSh), |_| Err("only available in a secure block".into())),
];

fn int2(a: &[Value], f: impl Fn(i64, i64) -> Value) -> Result<Value, String> {
    match (&a[0], &a[1]) {
        (Value::Int(x), Value::Int(y)) => Ok(f(*x, *y)),
        _ => Err("expected two integers".into()),
    }
}

fn bool2(a: &[Value], f: impl Fn(bool, bool) -> bool) -> Result<Value, String> {
    match (&a[0], &a[1]) {
        (Value::Bool(x), Value::Bool(y)) => Ok(Value::Bool(f(*x, *y))),
        _ => Err("expected two booleans".into()),
    }
}

fn pair_part(v: &Value, i: usize) -> Result<Value, String> {
    match v {
        Value::Tuple(vs) if vs.len() == 2 => Ok(vs[i].clone()),
        _ => Err("expected a pair".into()),
    }
}

fn list(v: &Value) -> Result<&[Value], String> {
    match v {
        Value::List(l) => Ok(l),
        _ => Err("expected a list".to_string()),
    }
}

pub fn lookup(name: &str) -> Option<&'static HostFn> {
    BUILTINS.iter().find(|h| h.name == name)
}

pub fn builtins() -> &'static [HostFn] {
    BUILTINS
}

/// Runs host function `name` on `args`.
pub fn exec_ffi(name: &str, args: &[Value]) -> Result<Value, FfiError> {
    let host = lookup(name).ok_or_else(|| FfiError::UnknownFfi(name.into()))?;
    if host.arity != args.len() {
        return Err(FfiError::ArityError {
            name: name.into(),
            expected: host.arity,
            found: args.len(),
        });
    }
    match host.kind {
        HostKind::Inspecting if args.iter().any(Value::contains_opaque) => {
            return Err(FfiError::OpaqueArg(name.into()))
        }
        HostKind::Structural if args.iter().any(Value::is_opaque) => {
            return Err(FfiError::OpaqueArg(name.into()))
        }
        _ => {}
    }
    (host.apply)(args).map_err(|reason| FfiError::FfiTypeError {
        name: name.into(),
        reason,
    })
}
