use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::{Env, Expr, PrinSet, Principal, Var};
use crate::gmw::ShareHandle;

/// Runtime values.
///
/// `Int`, `Str`, `Tuple` and `List` are the host (FFI) value universe; the
/// remaining variants are the DSL's own values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Prin(Principal),
    Prins(PrinSet),
    Unit,
    Bool(bool),
    Int(i64),
    Str(String),
    Tuple(Vec<Value>),
    List(Vec<Value>),
    /// A value only the listed principals may reveal.
    Sealed(PrinSet, Box<Value>),
    /// Principal-indexed map, as built by `mkmap`/`concat`.
    Map(BTreeMap<Principal, Value>),
    Clos(Closure),
    FixClos(FixClosure),
    /// The placeholder a party holds for data it may not observe.
    Opaque,
    Share(ShareHandle),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub env: Env,
    pub param: Var,
    pub body: Arc<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixClosure {
    pub env: Env,
    pub name: Var,
    pub param: Var,
    pub body: Arc<Expr>,
}

impl Value {
    pub fn sealed(ps: PrinSet, v: Value) -> Value {
        Value::Sealed(ps, Box::new(v))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Tuple(alloc::vec![a, b])
    }

    pub fn int_list(xs: &[i64]) -> Value {
        Value::List(xs.iter().map(|&x| Value::Int(x)).collect())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    /// Principal sets, with a single principal read as its singleton.
    pub fn as_prins(&self) -> Option<PrinSet> {
        match self {
            Value::Prins(s) => Some(s.clone()),
            Value::Prin(p) => Some(PrinSet::singleton(p.clone())),
            _ => None,
        }
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self, Value::Opaque)
    }

    /// True if `●` occurs anywhere, including inside closures' environments.
    pub fn contains_opaque(&self) -> bool {
        match self {
            Value::Opaque => true,
            Value::Sealed(_, v) => v.contains_opaque(),
            Value::Tuple(vs) | Value::List(vs) => vs.iter().any(Value::contains_opaque),
            Value::Map(m) => m.values().any(Value::contains_opaque),
            Value::Clos(c) => c.env.iter().any(|(_, v)| v.contains_opaque()),
            Value::FixClos(c) => c.env.iter().any(|(_, v)| v.contains_opaque()),
            _ => false,
        }
    }

    /// True if a sealed value occurs anywhere.
    pub fn contains_sealed(&self) -> bool {
        match self {
            Value::Sealed(..) => true,
            Value::Tuple(vs) | Value::List(vs) => vs.iter().any(Value::contains_sealed),
            Value::Map(m) => m.values().any(Value::contains_sealed),
            Value::Clos(c) => c.env.iter().any(|(_, v)| v.contains_sealed()),
            Value::FixClos(c) => c.env.iter().any(|(_, v)| v.contains_sealed()),
            _ => false,
        }
    }

    /// Literal forms that may appear as a source-level constant.
    pub fn is_literal(&self) -> bool {
        match self {
            Value::Prin(_)
            | Value::Prins(_)
            | Value::Unit
            | Value::Bool(_)
            | Value::Int(_)
            | Value::Str(_) => true,
            Value::Tuple(vs) | Value::List(vs) => vs.iter().all(Value::is_literal),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq(f: &mut fmt::Formatter<'_>, open: &str, vs: &[Value], close: &str) -> fmt::Result {
            f.write_str(open)?;
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(close)
        }
        match self {
            Value::Prin(p) => write!(f, "{p}"),
            Value::Prins(s) => write!(f, "{s}"),
            Value::Unit => f.write_str("()"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Tuple(vs) => seq(f, "(", vs, ")"),
            Value::List(vs) => seq(f, "[", vs, "]"),
            Value::Sealed(s, v) => write!(f, "sealed {s} {v}"),
            Value::Map(m) => {
                f.write_str("[")?;
                for (i, (p, v)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p} -> {v}")?;
                }
                f.write_str("]")
            }
            Value::Clos(c) => write!(f, "<fun {}>", c.param),
            Value::FixClos(c) => write!(f, "<fix {} {}>", c.name, c.param),
            Value::Opaque => f.write_str("●"),
            Value::Share(sh) => write!(f, "<share {}>", sh.parties),
        }
    }
}
