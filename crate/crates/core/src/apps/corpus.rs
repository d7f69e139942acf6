//! Sample instances of every bundled program.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::cards::{share_of, streams};
use super::median::median_env;
use super::psi::{lists_env, sets_env};
use super::Program;
use crate::lang::{Env, PrinSet, Principal, Value};

#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub program: Program,
    pub env: Env,
    pub parties: PrinSet,
}

fn case(program: Program, what: String, env: Env) -> Case {
    Case {
        name: format!("{} {what}", program.name()),
        program,
        env,
        parties: program.parties(),
    }
}

fn rands(xs: [i64; 3]) -> Value {
    Value::Map(
        ["a", "b", "c"]
            .into_iter()
            .zip(xs)
            .map(|(p, n)| (Principal::new(p), Value::Int(n)))
            .collect::<BTreeMap<_, _>>(),
    )
}

/// A few instances of each program, including edge cases.
pub fn corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for (a, b) in [((1, 3), (2, 4)), ((5, 8), (2, 7)), ((1, 2), (3, 4))] {
        for p in [Program::Median, Program::MedianOpt] {
            out.push(case(p, format!("{a:?} {b:?}"), median_env(a, b)));
        }
    }
    let sets: [(&[i64], &[i64]); 4] = [(&[1, 2, 3], &[2, 3, 5]), (&[], &[1]), (&[4], &[4]), (&[1, 2], &[3, 4])];
    for (la, lb) in sets {
        out.push(case(Program::Psi, format!("{la:?} {lb:?}"), sets_env(la, lb)));
        for p in [Program::PsiInterim, Program::PsiOpt] {
            out.push(case(p, format!("{la:?} {lb:?}"), lists_env(la, lb)));
        }
    }
    let mut st = streams(7);
    let l: Vec<Value> = [3, 7].into_iter().map(|v| share_of(v, &mut st)).collect();
    for s in [7, 5] {
        let env: Env = [("l".into(), Value::List(l.clone())), ("s".into(), share_of(s, &mut st))]
            .into_iter()
            .collect();
        out.push(case(Program::CheckFresh, format!("[3, 7] {s}"), env));
    }
    let env: Env = [("l".into(), Value::List(Vec::new())), ("s".into(), share_of(1, &mut st))]
        .into_iter()
        .collect();
    out.push(case(Program::CheckFresh, "[] 1".into(), env));
    let history = Value::List([10, 20].into_iter().map(|v| share_of(v, &mut st)).collect());
    for r in [[17, 40, 30], [51, 0, 0], [40, 50, 34], [3, 3, 4]] {
        let env: Env = [("shares".into(), history.clone()), ("rands".into(), rands(r))]
            .into_iter()
            .collect();
        out.push(case(Program::Deal, format!("{r:?}"), env));
    }
    out
}
