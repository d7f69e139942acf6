//! Private set intersection.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::oracle::{
    distinct_lists, intersection, intersection_set, is_permutation, psi_loop_trace, refine, trace_psi, trace_psi_opt,
};
use super::{run, AppError, Program};
use crate::ds::Verdict;
use crate::lang::{Config, Env, PrinSet, Principal, Value};
use crate::st::{run_config_with, DEFAULT_FUEL};

fn sealed_ints(owner: &str, xs: &[i64]) -> Value {
    let s = PrinSet::of(&[owner]);
    Value::List(xs.iter().map(|&x| Value::sealed(s.clone(), Value::Int(x))).collect())
}

/// Inputs of the single-block intersection: one sealed list per party.
pub fn sets_env(la: &[i64], lb: &[i64]) -> Env {
    [
        ("in_a".into(), Value::sealed(PrinSet::of(&["a"]), Value::int_list(la))),
        ("in_b".into(), Value::sealed(PrinSet::of(&["b"]), Value::int_list(lb))),
    ]
    .into_iter()
    .collect()
}

/// Inputs of the loop versions: lists of individually sealed elements.
pub fn lists_env(la: &[i64], lb: &[i64]) -> Env {
    [("la".into(), sealed_ints("a", la)), ("lb".into(), sealed_ints("b", lb))]
        .into_iter()
        .collect()
}

/// The per-party result of the loop versions.
pub fn loop_result(la: &[i64], lb: &[i64]) -> Value {
    let mut m = BTreeMap::new();
    m.insert(Principal::new("a"), Value::int_list(&intersection(la, lb)));
    m.insert(Principal::new("b"), Value::int_list(&intersection(lb, la)));
    Value::sealed(PrinSet::of(&["a", "b"]), Value::Map(m))
}

/// Secure comparisons executed by the all-pairs loop and the optimised loop.
pub fn psi_comparison_count(la: &[i64], lb: &[i64]) -> Result<(u64, u64), AppError> {
    let env = lists_env(la, lb);
    let mut counts = [0u64; 2];
    for (i, p) in [Program::PsiInterim, Program::PsiOpt].into_iter().enumerate() {
        let cfg = Config::initial(p.parties(), env.clone(), p.expr());
        run_config_with(cfg, DEFAULT_FUEL, |rule, _| {
            if rule == "S-assec" {
                counts[i] += 1;
            }
        })?;
    }
    Ok((counts[0], counts[1]))
}

/// Checks all three intersections against the oracles on `la`, `lb`.
pub fn check_instance(la: &[i64], lb: &[i64]) -> Verdict {
    let want = Value::int_list(&intersection(la, lb));
    match run(Program::Psi, &sets_env(la, lb)) {
        Ok((v, _)) if v == want => {}
        Ok((v, _)) => return Verdict::Fail(format!("psi {la:?} {lb:?} gave {v}, want {want}")),
        Err(e) => return Verdict::Fail(format!("psi {la:?} {lb:?}: {e}")),
    }
    let env = lists_env(la, lb);
    let result = loop_result(la, lb);
    for (p, bits) in [(Program::PsiInterim, trace_psi(la, lb)), (Program::PsiOpt, trace_psi_opt(la, lb))] {
        match run(p, &env) {
            Ok((v, t)) => {
                if v != result {
                    return Verdict::Fail(format!("{} {la:?} {lb:?} gave {v}, want {result}", p.name()));
                }
                let want = psi_loop_trace(&bits);
                if t != want {
                    return Verdict::Fail(format!("{} {la:?} {lb:?}: trace {t:?}, want {want:?}", p.name()));
                }
            }
            Err(e) => return Verdict::Fail(format!("{} {la:?} {lb:?}: {e}", p.name())),
        }
    }
    Verdict::Pass
}

/// Over all duplicate-free lists up to `max_len` drawn from `domain`:
/// program traces match the oracles, the all-pairs trace depends only on the
/// lengths and the intersection up to permutation, and the optimised trace
/// is a function of the lengths and the all-pairs trace.
pub fn check_psi_security(max_len: usize, domain: &[i64]) -> Verdict {
    check_psi_security_with(max_len, domain, true)
}

/// Like [`check_psi_security`]; `run_programs` can skip executing the
/// programs and check only the oracle-level properties.
pub fn check_psi_security_with(max_len: usize, domain: &[i64], run_programs: bool) -> Verdict {
    let lists = distinct_lists(max_len, domain);
    type Key = (usize, usize, BTreeSet<i64>);
    type Rep = (Vec<i64>, Vec<i64>, Vec<bool>);
    let mut reps: BTreeMap<Key, Rep> = BTreeMap::new();
    for la in &lists {
        for lb in &lists {
            if run_programs {
                let v = check_instance(la, lb);
                if !v.is_pass() {
                    return v;
                }
            }
            let full = trace_psi(la, lb);
            let opt = trace_psi_opt(la, lb);
            if refine(la.len(), lb.len(), &full) != opt {
                return Verdict::Fail(format!("optimised trace of {la:?} {lb:?} not recovered from the full trace"));
            }
            let key = (la.len(), lb.len(), intersection_set(la, lb));
            match reps.get(&key) {
                None => {
                    reps.insert(key, (la.clone(), lb.clone(), full));
                }
                Some((ra, rb, rt)) => {
                    if !is_permutation(rt, &full) {
                        return Verdict::Fail(format!(
                            "traces of {ra:?} {rb:?} and {la:?} {lb:?} are not permutations of each other"
                        ));
                    }
                }
            }
        }
    }
    Verdict::Pass
}
