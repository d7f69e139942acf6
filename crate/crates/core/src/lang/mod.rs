//! Syntax, runtime values, machine configurations and the slice/combine
//! functions shared by both semantics.

mod config;
mod env;
mod expr;
pub mod ffi;
mod principal;
mod slice;
mod trace;
mod value;

use core::fmt;

pub use config::{Config, Control, EvalCtx, Frame, Mode, ModeTag, Protocol, SecEntry};
pub use env::Env;
pub use expr::{Expr, Var};
pub use principal::{PrinSet, Principal};
pub use slice::{
    combine_all, combine_env, combine_v, slice_cfg, slice_env, slice_party, slice_tr, slice_v,
};
pub use trace::{is_flat, messages, Trace, TraceElt};
pub use value::{Closure, FixClosure, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LangError {
    /// Two non-opaque views of one value disagree.
    CombineConflict { left: Value, right: Value },
    /// Environments to combine bind different variables.
    DomainMismatch,
    ModeError { expected: Mode, found: Mode },
}

impl fmt::Display for LangError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LangError::CombineConflict { left, right } => {
                write!(f, "cannot combine {left} with {right}")
            }
            LangError::DomainMismatch => f.write_str("environments bind different variables"),
            LangError::ModeError { expected, found } => {
                write!(f, "expected mode {expected}, found {found}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;

    fn p(n: &str) -> Principal {
        Principal::new(n)
    }

    fn sealed(names: &[&str], v: Value) -> Value {
        Value::sealed(PrinSet::of(names), v)
    }

    #[test]
    fn combine_opaque_absorbs() {
        let v = sealed(&["a"], Value::Int(5));
        assert_eq!(combine_v(&Value::Opaque, &v), Ok(v.clone()));
        assert_eq!(combine_v(&Value::Opaque, &Value::Opaque), Ok(Value::Opaque));
        assert_eq!(combine_v(&v, &sealed(&["a"], Value::Opaque)), Ok(v));
    }

    #[test]
    fn combine_conflicts() {
        assert!(matches!(
            combine_v(&Value::Int(1), &Value::Int(2)),
            Err(LangError::CombineConflict { .. })
        ));
        assert!(matches!(
            combine_v(&sealed(&["a"], Value::Int(1)), &sealed(&["b"], Value::Int(1))),
            Err(LangError::CombineConflict { .. })
        ));
    }

    #[test]
    fn combine_env_examples() {
        let e1: Env = [("x".into(), Value::Opaque)].into_iter().collect();
        let e2: Env = [("x".into(), Value::Int(3))].into_iter().collect();
        assert_eq!(
            combine_env(&[e1, e2]).unwrap().get("x"),
            Some(&Value::Int(3))
        );

        let l1: Env = [
            ("x".into(), sealed(&["a"], Value::Int(1))),
            ("y".into(), Value::Opaque),
        ]
        .into_iter()
        .collect();
        let l2: Env = [
            ("x".into(), sealed(&["a"], Value::Opaque)),
            ("y".into(), Value::Int(2)),
        ]
        .into_iter()
        .collect();
        let c = combine_env(&[l1, l2]).unwrap();
        assert_eq!(c.get("x"), Some(&sealed(&["a"], Value::Int(1))));
        assert_eq!(c.get("y"), Some(&Value::Int(2)));

        let k1: Env = [("x".into(), Value::Int(1))].into_iter().collect();
        let k2: Env = [("x".into(), Value::Int(2))].into_iter().collect();
        assert!(matches!(
            combine_env(&[k1.clone(), k2]),
            Err(LangError::CombineConflict { .. })
        ));
        let k3: Env = [("z".into(), Value::Int(1))].into_iter().collect();
        assert_eq!(combine_env(&[k1, k3]), Err(LangError::DomainMismatch));
    }

    #[test]
    fn slice_examples() {
        assert_eq!(
            slice_v(&p("a"), &sealed(&["b"], Value::Int(7))),
            sealed(&["b"], Value::Opaque)
        );
        assert_eq!(
            slice_v(&p("a"), &sealed(&["a", "b"], Value::Int(7))),
            sealed(&["a", "b"], Value::Int(7))
        );
        assert_eq!(slice_v(&p("a"), &Value::Int(42)), Value::Int(42));
        let m = Value::Map(
            [(p("a"), Value::Int(1)), (p("b"), Value::Int(2))]
                .into_iter()
                .collect(),
        );
        assert_eq!(
            slice_v(&p("a"), &m),
            Value::Map([(p("a"), Value::Int(1))].into_iter().collect())
        );
    }

    #[test]
    fn slice_tr_examples() {
        let t = vec![TraceElt::Scope(PrinSet::of(&["b"]), vec![TraceElt::Msg(Value::Int(1))])];
        assert_eq!(slice_tr(&p("a"), &t), vec![]);
        let t = vec![TraceElt::Msg(sealed(&["b"], Value::Int(1)))];
        assert_eq!(
            slice_tr(&p("a"), &t),
            vec![TraceElt::Msg(sealed(&["b"], Value::Opaque))]
        );
        let t = vec![TraceElt::Scope(PrinSet::of(&["a"]), vec![TraceElt::Msg(Value::Int(2))])];
        assert_eq!(slice_tr(&p("a"), &t), vec![TraceElt::Msg(Value::Int(2))]);
    }

    #[test]
    fn slice_cfg_examples() {
        let ab = PrinSet::of(&["a", "b"]);
        let env: Env = [("x".into(), sealed(&["a"], Value::Int(1)))].into_iter().collect();
        let mut c = Config::initial(ab.clone(), env, Expr::var("x"));
        c.trace = vec![TraceElt::Scope(PrinSet::of(&["a"]), vec![TraceElt::Msg(Value::Int(1))])];
        let pi = slice_cfg(&ab, &c).unwrap();
        assert!(pi.sec.is_empty());
        assert_eq!(pi.par[&p("a")].env.get("x"), Some(&sealed(&["a"], Value::Int(1))));
        assert_eq!(pi.par[&p("b")].env.get("x"), Some(&sealed(&["a"], Value::Opaque)));
        assert_eq!(pi.par[&p("a")].trace, vec![TraceElt::Msg(Value::Int(1))]);
        assert_eq!(pi.par[&p("b")].trace, vec![]);
        assert_eq!(pi.par[&p("a")].mode, Mode::par(PrinSet::of(&["a"])));

        let a = PrinSet::of(&["a"]);
        let mut t = Config::initial(a.clone(), Env::new(), Expr::int(5));
        t.control = Control::Value(Value::Int(5));
        let pi = slice_cfg(&a, &t).unwrap();
        assert!(pi.is_terminal());
        assert_eq!(pi.par[&p("a")].value(), Some(&Value::Int(5)));

        assert!(matches!(slice_cfg(&ab, &t), Err(LangError::ModeError { .. })));
    }
}
