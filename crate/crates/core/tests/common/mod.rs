//! Random well-formed programs and values for property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wysx_core::gmw::ShareHandle;
use wysx_core::lang::{Env, Expr, PrinSet, Principal, Value};

const NAMES: [&str; 3] = ["a", "b", "c"];

#[derive(Clone, Debug, PartialEq)]
enum Ty {
    Int,
    Bool,
    /// An int sealed to these parties.
    Sealed(Vec<&'static str>),
}

#[derive(Clone)]
struct Ctx {
    sec: bool,
    ps: Vec<&'static str>,
    vars: Vec<(String, Ty)>,
}

impl Ctx {
    fn with(&self, x: &str, t: Ty) -> Ctx {
        let mut c = self.clone();
        c.vars.push((x.to_string(), t));
        c
    }

    fn enter(&self, sec: bool, ps: Vec<&'static str>) -> Ctx {
        Ctx {
            sec,
            ps,
            vars: self.vars.clone(),
        }
    }

    /// Sealed variables this context may reveal.
    fn revealable(&self) -> Vec<String> {
        self.vars
            .iter()
            .filter(|(_, t)| match t {
                Ty::Sealed(s) if self.sec => s.iter().any(|p| self.ps.contains(p)),
                Ty::Sealed(s) => self.ps.iter().all(|p| s.contains(p)),
                _ => false,
            })
            .map(|(x, _)| x.clone())
            .collect()
    }

    fn vars_of(&self, t: &Ty) -> Vec<String> {
        self.vars.iter().filter(|(_, u)| u == t).map(|(x, _)| x.clone()).collect()
    }
}

struct Gen {
    rng: ChaCha8Rng,
    fresh: usize,
}

fn prins(s: &[&str]) -> Expr {
    Expr::prins(s)
}

impl Gen {
    fn name(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn subset(&mut self, of: &[&'static str]) -> Vec<&'static str> {
        loop {
            let s: Vec<&'static str> = of.iter().copied().filter(|_| self.rng.random_bool(0.5)).collect();
            if !s.is_empty() {
                return s;
            }
        }
    }

    fn ty(&mut self, ctx: &Ctx) -> Ty {
        match self.rng.random_range(0..3) {
            0 => Ty::Int,
            1 => Ty::Bool,
            _ => Ty::Sealed(self.subset(&ctx.ps)),
        }
    }

    fn leaf(&mut self, t: &Ty, ctx: &Ctx) -> Expr {
        let vars = ctx.vars_of(t);
        if !vars.is_empty() && self.rng.random_bool(0.6) {
            return Expr::var(vars.choose(&mut self.rng).unwrap());
        }
        match t {
            Ty::Int => {
                let rv = ctx.revealable();
                if !rv.is_empty() && self.rng.random_bool(0.6) {
                    Expr::reveal(Expr::var(rv.choose(&mut self.rng).unwrap()))
                } else {
                    Expr::int(self.rng.random_range(-9..10))
                }
            }
            Ty::Bool => Expr::bool(self.rng.random()),
            Ty::Sealed(s) => {
                let n = Expr::int(self.rng.random_range(-9..10));
                Expr::seal(prins(s), n)
            }
        }
    }

    fn expr(&mut self, t: &Ty, depth: u32, ctx: &Ctx) -> Expr {
        if depth == 0 || self.rng.random_bool(0.2) {
            return self.leaf(t, ctx);
        }
        let d = depth - 1;
        let k = self.rng.random_range(0..10);
        // Forms that fit any type.
        match k {
            0 => {
                let c = self.expr(&Ty::Bool, d, ctx);
                return Expr::if_(c, self.expr(t, d, ctx), self.expr(t, d, ctx));
            }
            1 => {
                let x = self.name();
                let u = self.ty(ctx);
                let e1 = self.expr(&u, d, ctx);
                return Expr::let_(&x, e1, self.expr(t, d, &ctx.with(&x, u)));
            }
            2 => {
                let x = self.name();
                let u = self.ty(ctx);
                let body = self.expr(t, d, &ctx.with(&x, u.clone()));
                return Expr::app(Expr::lam(&x, body), self.expr(&u, d, ctx));
            }
            _ => {}
        }
        match t {
            Ty::Int => match k {
                3 | 4 => {
                    let op = if k == 3 { "add" } else { "sub" };
                    Expr::ffi(op, vec![self.expr(&Ty::Int, d, ctx), self.expr(&Ty::Int, d, ctx)])
                }
                5 if !ctx.sec => {
                    let body = self.expr(&Ty::Int, d, &ctx.enter(true, ctx.ps.clone()));
                    Expr::as_sec(prins(&ctx.ps), Expr::thunk(body))
                }
                6 if !ctx.sec => {
                    let body = self.expr(&Ty::Int, d, &ctx.enter(false, ctx.ps.clone()));
                    Expr::reveal(Expr::as_par(prins(&ctx.ps), Expr::thunk(body)))
                }
                7 if ctx.sec || ctx.ps.len() == 1 => {
                    let s = if ctx.sec { self.subset(&ctx.ps) } else { ctx.ps.clone() };
                    let p = *s.choose(&mut self.rng).unwrap();
                    // Outside secure blocks the mapped value comes sealed.
                    let arg_ty = if ctx.sec { Ty::Int } else { Ty::Sealed(s.clone()) };
                    let m = Expr::mkmap(prins(&s), self.expr(&arg_ty, d, ctx));
                    Expr::project(Expr::Const(Value::Prin(Principal::new(p))), m)
                }
                8 if ctx.sec && ctx.ps.len() > 1 => {
                    let (s1, s2) = ctx.ps.split_at(1);
                    let p = *ctx.ps.choose(&mut self.rng).unwrap();
                    let m1 = Expr::mkmap(prins(s1), self.expr(&Ty::Int, d, ctx));
                    let m2 = Expr::mkmap(prins(s2), self.expr(&Ty::Int, d, ctx));
                    Expr::project(Expr::Const(Value::Prin(Principal::new(p))), Expr::concat(m1, m2))
                }
                _ => self.leaf(t, ctx),
            },
            Ty::Bool => match k {
                3..=5 => {
                    let op = ["gt", "eq", "le"][k - 3];
                    Expr::ffi(op, vec![self.expr(&Ty::Int, d, ctx), self.expr(&Ty::Int, d, ctx)])
                }
                6 => Expr::ffi("and", vec![self.expr(&Ty::Bool, d, ctx), self.expr(&Ty::Bool, d, ctx)]),
                7 => Expr::ffi("not", vec![self.expr(&Ty::Bool, d, ctx)]),
                8 if !ctx.sec => {
                    let body = self.expr(&Ty::Bool, d, &ctx.enter(true, ctx.ps.clone()));
                    Expr::as_sec(prins(&ctx.ps), Expr::thunk(body))
                }
                _ => self.leaf(t, ctx),
            },
            Ty::Sealed(s) => match k {
                3..=5 if !ctx.sec => {
                    let body = self.expr(&Ty::Int, d, &ctx.enter(false, s.clone()));
                    Expr::as_par(prins(s), Expr::thunk(body))
                }
                6 | 7 => Expr::seal(prins(s), self.expr(&Ty::Int, d, ctx)),
                _ => self.leaf(t, ctx),
            },
        }
    }
}

/// A random well-typed program of depth at most 5 without recursion, over
/// two or three parties, with its inputs.
pub fn random_program(seed: u64) -> (Expr, Env, PrinSet) {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        fresh: 0,
    };
    let ps: Vec<&'static str> = NAMES[..g.rng.random_range(2..=3)].to_vec();
    let mut env = Vec::new();
    let mut vars = Vec::new();
    for p in &ps {
        let x = format!("x_{p}");
        env.push((x.clone(), Value::sealed(PrinSet::of(&[p]), Value::Int(g.rng.random_range(-9..10)))));
        vars.push((x, Ty::Sealed(vec![p])));
    }
    env.push(("n".to_string(), Value::Int(g.rng.random_range(-9..10))));
    vars.push(("n".to_string(), Ty::Int));
    let shared = vec![ps[0], ps[1]];
    env.push(("y".to_string(), Value::sealed(PrinSet::of(&shared), Value::Int(g.rng.random_range(-9..10)))));
    vars.push(("y".to_string(), Ty::Sealed(shared)));
    let ctx = Ctx {
        sec: false,
        ps: ps.clone(),
        vars,
    };
    let t = g.ty(&ctx);
    let e = g.expr(&t, 5, &ctx);
    (e, env.into_iter().collect(), PrinSet::of(&ps))
}

fn prin_set() -> impl Strategy<Value = PrinSet> {
    proptest::sample::subsequence(NAMES.to_vec(), 1..=3).prop_map(|v| PrinSet::of(&v))
}

fn leaf() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<i64>().prop_map(Value::Int),
        any::<bool>().prop_map(Value::Bool),
        Just(Value::Unit),
        Just(Value::Opaque),
        "[a-z]{0,3}".prop_map(Value::Str),
        prin_set().prop_map(Value::Prins),
        (prin_set(), proptest::collection::vec(any::<u64>(), 3)).prop_map(|(s, ws)| {
            Value::Share(ShareHandle {
                words: s.iter().cloned().zip(ws).collect(),
                parties: s,
            })
        }),
    ]
}

/// Values of depth at most 3 over principals `a`, `b`, `c`.
pub fn value() -> impl Strategy<Value = Value> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..3).prop_map(Value::Tuple),
            proptest::collection::vec(inner.clone(), 0..3).prop_map(Value::List),
            (prin_set(), inner.clone()).prop_map(|(s, v)| Value::sealed(s, v)),
            (prin_set(), inner).prop_map(|(s, v)| Value::Map(s.iter().map(|p| (p.clone(), v.clone())).collect())),
        ]
    })
}

/// Every position of `v` is visible to some member of `vis`, and maps and
/// shares only involve parties that can see them.
pub fn round_trippable(v: &Value, vis: &PrinSet) -> bool {
    match v {
        Value::Sealed(s, inner) => {
            let seen = vis.intersection(s);
            !seen.is_empty() && round_trippable(inner, &seen)
        }
        Value::Map(m) => m
            .iter()
            .all(|(p, x)| vis.contains(p) && round_trippable(x, &PrinSet::singleton(p.clone()))),
        Value::Share(h) => h.parties.is_subset(vis),
        Value::Tuple(vs) | Value::List(vs) => vs.iter().all(|x| round_trippable(x, vis)),
        _ => true,
    }
}
