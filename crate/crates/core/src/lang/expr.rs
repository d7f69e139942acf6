use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::Value;

/// Variable names.
pub type Var = String;

/// Abstract syntax of the DSL.
///
/// Children are reference counted so that evaluation contexts can hold on to
/// pending subterms without copying them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// `as_par ps thunk`: run `thunk` locally at every member of `ps`.
    AsPar(Arc<Expr>, Arc<Expr>),
    /// `as_sec ps thunk`: run `thunk` jointly and securely among `ps`.
    AsSec(Arc<Expr>, Arc<Expr>),
    Seal(Arc<Expr>, Arc<Expr>),
    Reveal(Arc<Expr>),
    /// Call of a registered host function.
    Ffi(String, Vec<Arc<Expr>>),
    MkMap(Arc<Expr>, Arc<Expr>),
    /// `project p m`: the entry of principal `p` in map `m`.
    Project(Arc<Expr>, Arc<Expr>),
    Concat(Arc<Expr>, Arc<Expr>),
    /// Literal constant. Source programs only carry principals, principal
    /// sets, unit, booleans and host literals here.
    Const(Value),
    Var(Var),
    Let(Var, Arc<Expr>, Arc<Expr>),
    Lam(Var, Arc<Expr>),
    App(Arc<Expr>, Arc<Expr>),
    /// `fix f. λx. e`
    Fix(Var, Var, Arc<Expr>),
    If(Arc<Expr>, Arc<Expr>, Arc<Expr>),
}

/// Shorthand constructors, mostly for tests and generated programs.
impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(Value::Int(n))
    }

    pub fn bool(b: bool) -> Expr {
        Expr::Const(Value::Bool(b))
    }

    pub fn var(x: &str) -> Expr {
        Expr::Var(x.into())
    }

    pub fn prins(names: &[&str]) -> Expr {
        Expr::Const(Value::Prins(super::PrinSet::of(names)))
    }

    pub fn as_par(ps: Expr, thunk: Expr) -> Expr {
        Expr::AsPar(Arc::new(ps), Arc::new(thunk))
    }

    pub fn as_sec(ps: Expr, thunk: Expr) -> Expr {
        Expr::AsSec(Arc::new(ps), Arc::new(thunk))
    }

    pub fn seal(ps: Expr, e: Expr) -> Expr {
        Expr::Seal(Arc::new(ps), Arc::new(e))
    }

    pub fn reveal(e: Expr) -> Expr {
        Expr::Reveal(Arc::new(e))
    }

    pub fn ffi(name: &str, args: Vec<Expr>) -> Expr {
        Expr::Ffi(name.into(), args.into_iter().map(Arc::new).collect())
    }

    pub fn mkmap(ps: Expr, e: Expr) -> Expr {
        Expr::MkMap(Arc::new(ps), Arc::new(e))
    }

    pub fn project(p: Expr, m: Expr) -> Expr {
        Expr::Project(Arc::new(p), Arc::new(m))
    }

    pub fn concat(m1: Expr, m2: Expr) -> Expr {
        Expr::Concat(Arc::new(m1), Arc::new(m2))
    }

    pub fn let_(x: &str, e1: Expr, e2: Expr) -> Expr {
        Expr::Let(x.into(), Arc::new(e1), Arc::new(e2))
    }

    pub fn lam(x: &str, body: Expr) -> Expr {
        Expr::Lam(x.into(), Arc::new(body))
    }

    /// A thunk `λ_. body`.
    pub fn thunk(body: Expr) -> Expr {
        Expr::lam("_", body)
    }

    pub fn app(f: Expr, arg: Expr) -> Expr {
        Expr::App(Arc::new(f), Arc::new(arg))
    }

    pub fn fix(f: &str, x: &str, body: Expr) -> Expr {
        Expr::Fix(f.into(), x.into(), Arc::new(body))
    }

    pub fn if_(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::If(Arc::new(c), Arc::new(t), Arc::new(e))
    }

    /// Structural size, used to bound generated programs.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Reveal(e) | Expr::Lam(_, e) | Expr::Fix(_, _, e) => 1 + e.size(),
            Expr::AsPar(a, b)
            | Expr::AsSec(a, b)
            | Expr::Seal(a, b)
            | Expr::MkMap(a, b)
            | Expr::Project(a, b)
            | Expr::Concat(a, b)
            | Expr::Let(_, a, b)
            | Expr::App(a, b) => 1 + a.size() + b.size(),
            Expr::If(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Expr::Ffi(_, args) => 1 + args.iter().map(|a| a.size()).sum::<usize>(),
        }
    }
}
