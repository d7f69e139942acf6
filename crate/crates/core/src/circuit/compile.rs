//! Symbolic evaluation of a secure block's body into gates.
//!
//! Public data is evaluated at compile time. Data read through `reveal`
//! becomes input wires owned by one member of the block that can see it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::inputs::erase_env;
use super::{fits, Builder, Circuit, CircuitError, InputSource, InputWire, Path, PathStep, Template, Wire};
use crate::lang::ffi::{self, Lowering, COMB_SH, MK_SH};
use crate::lang::{slice_v, Env, Expr, PrinSet, Principal, Value, Var};

const BUDGET: u64 = 1_000_000;
const WORD: usize = 64;

/// A value during compilation.
#[derive(Clone, Debug)]
enum CVal {
    /// Evaluated at compile time. When read from the block's environment,
    /// `path` locates it so secret parts can be turned into inputs later.
    Known(Value, Option<Path>),
    Int(Vec<Wire>),
    Bool(Wire),
    Tuple(Vec<CVal>),
    List(Vec<CVal>),
    OptList(Vec<(Wire, CVal)>),
    Sealed(PrinSet, Arc<CVal>),
    Map(BTreeMap<Principal, CVal>),
    Share {
        parties: PrinSet,
        words: BTreeMap<Principal, Vec<Wire>>,
    },
    Clos {
        env: CEnv,
        param: Var,
        body: Arc<Expr>,
    },
}

#[derive(Debug)]
enum Base {
    Root(Env),
    Closure(Env, Option<Path>),
}

#[derive(Debug)]
struct Node {
    var: Var,
    val: CVal,
    next: Option<Arc<Node>>,
}

#[derive(Clone, Debug)]
struct CEnv {
    base: Arc<Base>,
    binds: Option<Arc<Node>>,
}

impl CEnv {
    fn bind(&self, var: &str, val: CVal) -> CEnv {
        CEnv {
            base: self.base.clone(),
            binds: Some(Arc::new(Node {
                var: var.into(),
                val,
                next: self.binds.clone(),
            })),
        }
    }

    fn get(&self, x: &str) -> Option<CVal> {
        let mut n = self.binds.as_deref();
        while let Some(node) = n {
            if node.var == x {
                return Some(node.val.clone());
            }
            n = node.next.as_deref();
        }
        match &*self.base {
            Base::Root(env) => env.get(x).map(|v| CVal::Known(v.clone(), Some(Path::var(x)))),
            Base::Closure(env, path) => env.get(x).map(|v| {
                CVal::Known(v.clone(), path.as_ref().map(|p| p.then(PathStep::ClosEnv(x.into()))))
            }),
        }
    }
}

fn not_circuitable<T>(what: impl Into<String>) -> Result<T, CircuitError> {
    Err(CircuitError::NotCircuitable(what.into()))
}

fn stuck<T>(what: impl Into<String>) -> Result<T, CircuitError> {
    Err(CircuitError::Stuck(what.into()))
}

/// No sealed data, shares or `●` anywhere inside.
fn is_public(v: &Value) -> bool {
    match v {
        Value::Sealed(..) | Value::Share(_) | Value::Opaque => false,
        Value::Tuple(vs) | Value::List(vs) => vs.iter().all(is_public),
        Value::Map(m) => m.values().all(is_public),
        Value::Clos(c) => c.env.iter().all(|(_, x)| is_public(x)),
        Value::FixClos(c) => c.env.iter().all(|(_, x)| is_public(x)),
        _ => true,
    }
}

fn public(cv: &CVal) -> Option<&Value> {
    match cv {
        CVal::Known(v, _) if is_public(v) => Some(v),
        _ => None,
    }
}

struct Compiler {
    b: Builder,
    width: u32,
    parties: PrinSet,
    inputs: BTreeMap<Principal, Vec<InputWire>>,
    lifted: BTreeMap<Path, Vec<Wire>>,
    share_words: BTreeMap<(Path, Principal), Vec<Wire>>,
    mk_sh: u64,
    budget: u64,
}

/// Compiles the body of a secure block among `parties`, run over `env`, to a
/// circuit with `width`-bit integers. Secret contents of `env` are never
/// read; only their shapes matter.
pub fn compile_sec_thunk(env: &Env, body: &Expr, parties: &PrinSet, width: u32) -> Result<Circuit, CircuitError> {
    if !(2..=64).contains(&width) {
        return Err(CircuitError::BadWidth(width));
    }
    if parties.is_empty() {
        return stuck("secure block without parties");
    }
    let mut c = Compiler {
        b: Builder::new(),
        width,
        parties: parties.clone(),
        inputs: BTreeMap::new(),
        lifted: BTreeMap::new(),
        share_words: BTreeMap::new(),
        mk_sh: 0,
        budget: BUDGET,
    };
    let cenv = CEnv {
        base: Arc::new(Base::Root(erase_env(env))),
        binds: None,
    };
    let result = c.eval(body, &cenv)?;
    let mut outputs = BTreeMap::new();
    for p in parties {
        outputs.insert(p.clone(), c.template(p, &result)?);
    }
    Ok(Circuit {
        width,
        parties: parties.clone(),
        num_wires: c.b.next,
        gates: c.b.gates,
        inputs: c.inputs,
        outputs,
        mk_sh_count: c.mk_sh,
    })
}

impl Compiler {
    fn input(&mut self, owner: &Principal, source: InputSource) -> Wire {
        let wire = self.b.fresh();
        self.inputs
            .entry(owner.clone())
            .or_default()
            .push(InputWire { wire, source });
        wire
    }

    fn owner(&self, visible: &PrinSet) -> Option<Principal> {
        visible.intersection(&self.parties).first().cloned()
    }

    /// Turns the secret `v` found at `path`, visible to `visible`, into wires.
    fn lift(&mut self, v: &Value, path: Option<Path>, visible: &PrinSet) -> Result<CVal, CircuitError> {
        let Some(path) = path else {
            return Ok(CVal::Known(v.clone(), None));
        };
        if let Value::Share(sh) = v {
            return Ok(self.share(&sh.parties, &path));
        }
        let Some(owner) = self.owner(visible) else {
            return Ok(CVal::Known(Value::Opaque, None));
        };
        Ok(match v {
            Value::Int(_) | Value::Bool(_) => {
                let ws = match self.lifted.get(&path) {
                    Some(ws) => ws.clone(),
                    None => {
                        let n = if matches!(v, Value::Int(_)) { self.width } else { 1 };
                        let ws: Vec<Wire> = (0..n)
                            .map(|bit| self.input(&owner, InputSource::Value { path: path.clone(), bit }))
                            .collect();
                        self.lifted.insert(path, ws.clone());
                        ws
                    }
                };
                if matches!(v, Value::Int(_)) {
                    CVal::Int(ws)
                } else {
                    CVal::Bool(ws[0])
                }
            }
            Value::Tuple(vs) | Value::List(vs) => {
                let items = vs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.lift(x, Some(path.then(PathStep::Index(i))), visible))
                    .collect::<Result<Vec<_>, _>>()?;
                if matches!(v, Value::Tuple(_)) {
                    CVal::Tuple(items)
                } else {
                    CVal::List(items)
                }
            }
            Value::Sealed(s2, inner) => {
                let vis = visible.intersection(s2);
                let c = self.lift(inner, Some(path.then(PathStep::Sealed)), &vis)?;
                CVal::Sealed(s2.clone(), Arc::new(c))
            }
            Value::Map(m) => CVal::Map(
                m.iter()
                    .map(|(p, x)| Ok((p.clone(), self.lift(x, Some(path.then(PathStep::MapKey(p.clone()))), visible)?)))
                    .collect::<Result<_, CircuitError>>()?,
            ),
            Value::Unit | Value::Prin(_) | Value::Prins(_) | Value::Opaque => CVal::Known(v.clone(), None),
            Value::Str(_) => return not_circuitable("secret string"),
            Value::Clos(_) | Value::FixClos(_) => return not_circuitable("sealed closure"),
            Value::Share(_) => unreachable!(),
        })
    }

    /// Each party's word of the share at `path`, as wires it owns.
    fn share(&mut self, parties: &PrinSet, path: &Path) -> CVal {
        let mut words = BTreeMap::new();
        for p in parties {
            let key = (path.clone(), p.clone());
            let ws = match self.share_words.get(&key) {
                Some(ws) => ws.clone(),
                None => {
                    let ws: Vec<Wire> = (0..WORD as u32)
                        .map(|bit| self.input(p, InputSource::ShareWord { path: path.clone(), bit }))
                        .collect();
                    self.share_words.insert(key, ws.clone());
                    ws
                }
            };
            words.insert(p.clone(), ws);
        }
        CVal::Share {
            parties: parties.clone(),
            words,
        }
    }

    /// Exposes one level of structure of a compile-time value.
    fn expand(&mut self, cv: CVal) -> Result<CVal, CircuitError> {
        let CVal::Known(v, path) = cv else {
            return Ok(cv);
        };
        let child = |step: PathStep| path.as_ref().map(|p| p.then(step));
        Ok(match v {
            Value::Tuple(vs) => CVal::Tuple(
                vs.into_iter()
                    .enumerate()
                    .map(|(i, x)| CVal::Known(x, child(PathStep::Index(i))))
                    .collect(),
            ),
            Value::List(vs) => CVal::List(
                vs.into_iter()
                    .enumerate()
                    .map(|(i, x)| CVal::Known(x, child(PathStep::Index(i))))
                    .collect(),
            ),
            Value::Map(m) => CVal::Map(
                m.into_iter()
                    .map(|(p, x)| {
                        let c = CVal::Known(x, child(PathStep::MapKey(p.clone())));
                        (p, c)
                    })
                    .collect(),
            ),
            Value::Sealed(s, inner) => {
                let c = self.lift(&inner, child(PathStep::Sealed), &s)?;
                CVal::Sealed(s, Arc::new(c))
            }
            Value::Share(sh) => match path {
                Some(p) => self.share(&sh.parties, &p),
                None => return not_circuitable("share constant"),
            },
            other => CVal::Known(other, path),
        })
    }

    fn int(&mut self, cv: &CVal) -> Result<Vec<Wire>, CircuitError> {
        match cv {
            CVal::Int(ws) => Ok(ws.clone()),
            CVal::Known(Value::Int(n), _) => {
                if !fits(*n, self.width) {
                    return Err(CircuitError::WidthOverflow(*n));
                }
                Ok(self.b.konst_int(*n, self.width))
            }
            _ => stuck("expected an integer"),
        }
    }

    fn bit(&mut self, cv: &CVal) -> Result<Wire, CircuitError> {
        match cv {
            CVal::Bool(w) => Ok(*w),
            CVal::Known(Value::Bool(b), _) => Ok(self.b.konst(*b)),
            _ => stuck("expected a boolean"),
        }
    }

    fn prins(&self, cv: &CVal) -> Result<PrinSet, CircuitError> {
        match public(cv).and_then(Value::as_prins) {
            Some(s) if !s.is_empty() => Ok(s),
            _ => stuck("expected a public principal set"),
        }
    }

    fn eval(&mut self, e: &Expr, env: &CEnv) -> Result<CVal, CircuitError> {
        if self.budget == 0 {
            return not_circuitable("evaluation does not terminate within budget");
        }
        self.budget -= 1;
        match e {
            Expr::Const(v) => Ok(CVal::Known(v.clone(), None)),
            Expr::Var(x) => env.get(x).map_or_else(|| stuck(format!("unbound variable `{x}`")), Ok),
            Expr::Lam(x, body) => Ok(CVal::Clos {
                env: env.clone(),
                param: x.clone(),
                body: body.clone(),
            }),
            Expr::Fix(..) => not_circuitable("fix"),
            Expr::Let(x, e1, e2) => {
                let v = self.eval(e1, env)?;
                self.eval(e2, &env.bind(x, v))
            }
            Expr::App(f, a) => {
                let f = self.eval(f, env)?;
                let a = self.eval(a, env)?;
                self.apply(f, a)
            }
            Expr::If(c, t, f) => {
                let c = self.eval(c, env)?;
                match c {
                    CVal::Known(Value::Bool(b), _) => self.eval(if b { t } else { f }, env),
                    CVal::Bool(w) => {
                        let before = self.mk_sh;
                        let tv = self.eval(t, env)?;
                        let fv = self.eval(f, env)?;
                        if self.mk_sh != before {
                            return not_circuitable("mk_sh under a secret condition");
                        }
                        self.mux(w, tv, fv)
                    }
                    _ => stuck("if condition is not a boolean"),
                }
            }
            Expr::AsPar(..) => stuck("as_par in a secure block"),
            Expr::AsSec(..) => stuck("as_sec in a secure block"),
            Expr::Reveal(x) => {
                let v = self.eval(x, env)?;
                let v = self.expand(v)?;
                match v {
                    CVal::Sealed(s, inner) => {
                        if !s.intersects(&self.parties) {
                            return stuck(format!("reveal of a {s} value in Sec {}", self.parties));
                        }
                        Ok((*inner).clone())
                    }
                    _ => stuck("reveal of an unsealed value"),
                }
            }
            Expr::Seal(ps, x) => {
                let s = self.eval(ps, env)?;
                let s = self.prins(&s)?;
                let v = self.eval(x, env)?;
                if !s.is_subset(&self.parties) {
                    return stuck(format!("seal {s} in Sec {}", self.parties));
                }
                Ok(CVal::Sealed(s, Arc::new(v)))
            }
            Expr::MkMap(ps, x) => {
                let s = self.eval(ps, env)?;
                let s = self.prins(&s)?;
                let v = self.eval(x, env)?;
                if !s.is_subset(&self.parties) {
                    return stuck(format!("mkmap {s} in Sec {}", self.parties));
                }
                Ok(CVal::Map(s.iter().map(|p| (p.clone(), v.clone())).collect()))
            }
            Expr::Project(p, m) => {
                let p = self.eval(p, env)?;
                let Some(Value::Prin(p)) = public(&p).cloned() else {
                    return stuck("project of a non-principal");
                };
                let m = self.eval(m, env)?;
                if !self.parties.contains(&p) {
                    return stuck(format!("project {p} in Sec {}", self.parties));
                }
                match self.expand(m)? {
                    CVal::Map(mut m) => m.remove(&p).map_or_else(|| stuck(format!("{p} not in map")), Ok),
                    _ => stuck("project from a non-map"),
                }
            }
            Expr::Concat(a, b) => {
                let a = self.eval(a, env)?;
                let b = self.eval(b, env)?;
                match (self.expand(a)?, self.expand(b)?) {
                    (CVal::Map(mut m1), CVal::Map(m2)) => {
                        for (p, x) in m2 {
                            if m1.insert(p.clone(), x).is_some() {
                                return stuck(format!("{p} in both maps"));
                            }
                        }
                        Ok(CVal::Map(m1))
                    }
                    _ => stuck("concat of non-maps"),
                }
            }
            Expr::Ffi(name, args) => {
                let args = args.iter().map(|a| self.eval(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.ffi(name, args)
            }
        }
    }

    fn apply(&mut self, f: CVal, a: CVal) -> Result<CVal, CircuitError> {
        match f {
            CVal::Clos { env, param, body } => self.eval(&body, &env.bind(&param, a)),
            CVal::Known(Value::Clos(c), path) => {
                let env = CEnv {
                    base: Arc::new(Base::Closure(c.env.clone(), path)),
                    binds: None,
                };
                self.eval(&c.body, &env.bind(&c.param, a))
            }
            CVal::Known(Value::FixClos(_), _) => not_circuitable("recursive function"),
            _ => stuck("applying a non-function"),
        }
    }

    fn mux(&mut self, c: Wire, t: CVal, f: CVal) -> Result<CVal, CircuitError> {
        if let (Some(a), Some(b)) = (public(&t), public(&f)) {
            if a == b {
                return Ok(t);
            }
        }
        let int_like = |v: &CVal| matches!(v, CVal::Int(_) | CVal::Known(Value::Int(_), _));
        let bool_like = |v: &CVal| matches!(v, CVal::Bool(_) | CVal::Known(Value::Bool(_), _));
        if int_like(&t) && int_like(&f) {
            let (a, b) = (self.int(&t)?, self.int(&f)?);
            return Ok(CVal::Int(self.b.mux_vec(c, &a, &b)));
        }
        if bool_like(&t) && bool_like(&f) {
            let (a, b) = (self.bit(&t)?, self.bit(&f)?);
            return Ok(CVal::Bool(self.b.mux(c, a, b)));
        }
        let t = self.expand(t)?;
        let f = self.expand(f)?;
        match (t, f) {
            (CVal::Tuple(a), CVal::Tuple(b)) if a.len() == b.len() => Ok(CVal::Tuple(self.mux_all(c, a, b)?)),
            (CVal::List(a), CVal::List(b)) if a.len() == b.len() => Ok(CVal::List(self.mux_all(c, a, b)?)),
            (a @ (CVal::List(_) | CVal::OptList(_)), b @ (CVal::List(_) | CVal::OptList(_))) => {
                let (a, b) = (self.opt_list(a), self.opt_list(b));
                if a.len() != b.len() {
                    return not_circuitable("if over lists of different lengths");
                }
                let mut out = Vec::new();
                for ((pa, xa), (pb, xb)) in a.into_iter().zip(b) {
                    let p = self.b.mux(c, pa, pb);
                    out.push((p, self.mux(c, xa, xb)?));
                }
                Ok(CVal::OptList(out))
            }
            (CVal::Sealed(s1, a), CVal::Sealed(s2, b)) if s1 == s2 => {
                let v = self.mux(c, (*a).clone(), (*b).clone())?;
                Ok(CVal::Sealed(s1, Arc::new(v)))
            }
            (CVal::Map(a), CVal::Map(b)) if a.keys().eq(b.keys()) => {
                let mut out = BTreeMap::new();
                for ((p, x), (_, y)) in a.into_iter().zip(b) {
                    out.insert(p, self.mux(c, x, y)?);
                }
                Ok(CVal::Map(out))
            }
            (
                CVal::Share { parties: p1, words: w1 },
                CVal::Share { parties: p2, words: w2 },
            ) if p1 == p2 => {
                let words = w1
                    .iter()
                    .map(|(p, a)| (p.clone(), self.b.mux_vec(c, a, &w2[p])))
                    .collect();
                Ok(CVal::Share { parties: p1, words })
            }
            _ => not_circuitable("if branches of different shapes"),
        }
    }

    fn mux_all(&mut self, c: Wire, a: Vec<CVal>, b: Vec<CVal>) -> Result<Vec<CVal>, CircuitError> {
        a.into_iter().zip(b).map(|(x, y)| self.mux(c, x, y)).collect()
    }

    fn opt_list(&mut self, l: CVal) -> Vec<(Wire, CVal)> {
        match l {
            CVal::OptList(es) => es,
            CVal::List(xs) => xs
                .into_iter()
                .map(|x| {
                    let one = self.b.konst(true);
                    (one, x)
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    fn eq(&mut self, a: CVal, b: CVal) -> Result<Wire, CircuitError> {
        if let (Some(x), Some(y)) = (public(&a), public(&b)) {
            let same = x == y;
            return Ok(self.b.konst(same));
        }
        let int_like = |v: &CVal| matches!(v, CVal::Int(_) | CVal::Known(Value::Int(_), _));
        let bool_like = |v: &CVal| matches!(v, CVal::Bool(_) | CVal::Known(Value::Bool(_), _));
        if int_like(&a) && int_like(&b) {
            let (x, y) = (self.int(&a)?, self.int(&b)?);
            return Ok(self.b.eq(&x, &y));
        }
        if bool_like(&a) && bool_like(&b) {
            let (x, y) = (self.bit(&a)?, self.bit(&b)?);
            let d = self.b.xor(x, y);
            return Ok(self.b.not(d));
        }
        match (self.expand(a)?, self.expand(b)?) {
            (CVal::Tuple(xs), CVal::Tuple(ys)) | (CVal::List(xs), CVal::List(ys)) => {
                if xs.len() != ys.len() {
                    return Ok(self.b.konst(false));
                }
                let mut ws = Vec::new();
                for (x, y) in xs.into_iter().zip(ys) {
                    ws.push(self.eq(x, y)?);
                }
                Ok(self.b.all(&ws))
            }
            _ => not_circuitable("equality on these values"),
        }
    }

    fn list(&mut self, cv: CVal) -> Result<Vec<CVal>, CircuitError> {
        match self.expand(cv)? {
            CVal::List(xs) => Ok(xs),
            CVal::OptList(_) => not_circuitable("list of secret length"),
            _ => stuck("expected a list"),
        }
    }

    fn ffi(&mut self, name: &str, mut args: Vec<CVal>) -> Result<CVal, CircuitError> {
        let host = ffi::lookup(name).ok_or_else(|| CircuitError::Stuck(format!("unknown host function `{name}`")))?;
        if args.len() != host.arity {
            return stuck(format!("`{name}` expects {} arguments", host.arity));
        }
        if name != MK_SH && name != COMB_SH {
            let vals: Option<Vec<Value>> = args.iter().map(|a| public(a).cloned()).collect();
            if let Some(vals) = vals {
                return ffi::exec_ffi(name, &vals)
                    .map(|v| CVal::Known(v, None))
                    .map_err(|e| CircuitError::Stuck(format!("{e}")));
            }
        }
        if name == "enumerate" {
            let xs = self.list(args.remove(0))?;
            return Ok(CVal::List(
                xs.into_iter()
                    .enumerate()
                    .map(|(i, x)| CVal::Tuple(vec![CVal::Known(Value::Int(i as i64), None), x]))
                    .collect(),
            ));
        }
        let Some(low) = host.lowering else {
            return not_circuitable(format!("`{name}` on secret data"));
        };
        let b = args.pop();
        let a = args.pop();
        let (a, b) = (a.unwrap_or(CVal::Known(Value::Unit, None)), b.unwrap_or(CVal::Known(Value::Unit, None)));
        // Unary functions see their argument in `b`.
        Ok(match low {
            Lowering::Add | Lowering::Sub => {
                let (x, y) = (self.int(&a)?, self.int(&b)?);
                CVal::Int(if low == Lowering::Add { self.b.add(&x, &y) } else { self.b.sub(&x, &y) })
            }
            Lowering::Lt | Lowering::Gt | Lowering::Le | Lowering::Ge => {
                let (x, y) = (self.int(&a)?, self.int(&b)?);
                CVal::Bool(match low {
                    Lowering::Lt => self.b.lt(&x, &y),
                    Lowering::Gt => self.b.lt(&y, &x),
                    Lowering::Le => {
                        let g = self.b.lt(&y, &x);
                        self.b.not(g)
                    }
                    _ => {
                        let l = self.b.lt(&x, &y);
                        self.b.not(l)
                    }
                })
            }
            Lowering::Eq => CVal::Bool(self.eq(a, b)?),
            Lowering::Neq => {
                let e = self.eq(a, b)?;
                CVal::Bool(self.b.not(e))
            }
            Lowering::And | Lowering::Or => {
                let (x, y) = (self.bit(&a)?, self.bit(&b)?);
                CVal::Bool(if low == Lowering::And { self.b.and(x, y) } else { self.b.or(x, y) })
            }
            Lowering::Not => {
                let x = self.bit(&b)?;
                CVal::Bool(self.b.not(x))
            }
            Lowering::Fst | Lowering::Snd => match self.expand(b)? {
                CVal::Tuple(mut xs) if xs.len() == 2 => xs.swap_remove(if low == Lowering::Fst { 0 } else { 1 }),
                _ => return stuck(format!("`{name}` of a non-pair")),
            },
            Lowering::Pair => CVal::Tuple(vec![a, b]),
            Lowering::Nil => CVal::Known(Value::List(Vec::new()), None),
            Lowering::Cons => match self.expand(b)? {
                CVal::List(mut xs) => {
                    xs.insert(0, a);
                    CVal::List(xs)
                }
                l @ CVal::OptList(_) => {
                    let mut es = self.opt_list(l);
                    let one = self.b.konst(true);
                    es.insert(0, (one, a));
                    CVal::OptList(es)
                }
                _ => return stuck("cons onto a non-list"),
            },
            Lowering::Hd | Lowering::Tl | Lowering::IsNil | Lowering::Length => {
                let mut xs = self.list(b)?;
                match low {
                    Lowering::IsNil => CVal::Known(Value::Bool(xs.is_empty()), None),
                    Lowering::Length => CVal::Known(Value::Int(xs.len() as i64), None),
                    _ if xs.is_empty() => return stuck(format!("`{name}` of an empty list")),
                    Lowering::Hd => xs.swap_remove(0),
                    _ => {
                        xs.remove(0);
                        CVal::List(xs)
                    }
                }
            }
            Lowering::Nth => {
                let xs = self.list(a)?;
                match public(&b) {
                    Some(Value::Int(i)) => match usize::try_from(*i).ok().and_then(|i| xs.get(i)) {
                        Some(x) => x.clone(),
                        None => return stuck(format!("index {i} out of bounds")),
                    },
                    _ => {
                        let i = self.int(&b)?;
                        let mut it = xs.into_iter().enumerate();
                        let Some((_, mut acc)) = it.next() else {
                            return stuck("nth of an empty list");
                        };
                        for (j, x) in it {
                            let jw = self.b.konst_int(j as i64, self.width);
                            let hit = self.b.eq(&i, &jw);
                            acc = self.mux(hit, x, acc)?;
                        }
                        acc
                    }
                }
            }
            Lowering::Mem => {
                let es = match self.expand(b)? {
                    l @ (CVal::List(_) | CVal::OptList(_)) => self.opt_list(l),
                    _ => return stuck("mem in a non-list"),
                };
                let mut hits = Vec::new();
                for (present, y) in es {
                    let e = self.eq(a.clone(), y)?;
                    hits.push(self.b.and(present, e));
                }
                CVal::Bool(self.b.any(&hits))
            }
            Lowering::ListIntersect => {
                let xs = self.list(a)?;
                let ys = match self.expand(b)? {
                    l @ (CVal::List(_) | CVal::OptList(_)) => self.opt_list(l),
                    _ => return stuck("list_intersect of a non-list"),
                };
                let mut out = Vec::new();
                for x in xs {
                    let mut hits = Vec::new();
                    for (present, y) in &ys {
                        let e = self.eq(x.clone(), y.clone())?;
                        hits.push(self.b.and(*present, e));
                    }
                    let p = self.b.any(&hits);
                    out.push((p, x));
                }
                CVal::OptList(out)
            }
            Lowering::MkSh => {
                let v = self.int(&b)?;
                let index = self.mk_sh;
                self.mk_sh += 1;
                let parties = self.parties.clone();
                let last = parties.last().cloned().expect("non-empty");
                let mut acc = self.b.resize(&v, WORD);
                let mut words = BTreeMap::new();
                for p in parties.iter().filter(|p| **p != last) {
                    let mask: Vec<Wire> = (0..WORD as u32)
                        .map(|bit| self.input(p, InputSource::ShareMask { index, bit }))
                        .collect();
                    acc = acc.iter().zip(&mask).map(|(&x, &m)| self.b.xor(x, m)).collect();
                    words.insert(p.clone(), mask);
                }
                words.insert(last, acc);
                CVal::Share { parties, words }
            }
            Lowering::CombSh => match self.expand(b)? {
                CVal::Share { parties, words } => {
                    if parties != self.parties {
                        return stuck(format!("share among {parties} combined in Sec {}", self.parties));
                    }
                    let mut acc: Option<Vec<Wire>> = None;
                    for ws in words.values() {
                        acc = Some(match acc {
                            None => ws.clone(),
                            Some(a) => a.iter().zip(ws).map(|(&x, &y)| self.b.xor(x, y)).collect(),
                        });
                    }
                    let acc = acc.unwrap_or_default();
                    CVal::Int(acc[..self.width as usize].to_vec())
                }
                _ => return stuck("comb_sh of a non-share"),
            },
        })
    }

    /// Party `p`'s view of the block's result.
    fn template(&mut self, p: &Principal, cv: &CVal) -> Result<Template, CircuitError> {
        if let Some(v) = public(cv) {
            return Ok(Template::Const(slice_v(p, v)));
        }
        Ok(match cv {
            CVal::Known(Value::Clos(_) | Value::FixClos(_), _) | CVal::Clos { .. } => {
                return not_circuitable("closure returned from a secure block")
            }
            CVal::Known(Value::Sealed(s, _), _) if !s.contains(p) => Template::Const(Value::sealed(s.clone(), Value::Opaque)),
            CVal::Known(..) => {
                let e = self.expand(cv.clone())?;
                if matches!(e, CVal::Known(..)) {
                    return not_circuitable("secret value with no known location");
                }
                self.template(p, &e)?
            }
            CVal::Int(ws) => Template::Int(ws.clone()),
            CVal::Bool(w) => Template::Bool(*w),
            CVal::Tuple(xs) => Template::Tuple(xs.iter().map(|x| self.template(p, x)).collect::<Result<_, _>>()?),
            CVal::List(xs) => Template::List(xs.iter().map(|x| self.template(p, x)).collect::<Result<_, _>>()?),
            CVal::OptList(es) => Template::OptList(
                es.iter()
                    .map(|(w, x)| Ok((*w, self.template(p, x)?)))
                    .collect::<Result<_, CircuitError>>()?,
            ),
            CVal::Sealed(s, x) => {
                if s.contains(p) {
                    Template::Sealed(s.clone(), alloc::boxed::Box::new(self.template(p, x)?))
                } else {
                    Template::Const(Value::sealed(s.clone(), Value::Opaque))
                }
            }
            CVal::Map(m) => {
                let mut out = BTreeMap::new();
                if let Some(x) = m.get(p) {
                    out.insert(p.clone(), self.template(p, x)?);
                }
                Template::Map(out)
            }
            CVal::Share { parties, words } => Template::Share {
                parties: parties.clone(),
                words: words.get(p).map(|ws| (p.clone(), ws.clone())).into_iter().collect(),
            },
        })
    }
}
