//! Joint median of two sorted pairs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use super::oracle::{median_of, median_pre, median_trace, opt_trace};
use super::{run, Program};
use crate::ds::Verdict;
use crate::lang::{Env, PrinSet, Trace, TraceElt, Value};

pub fn median_env(a: (i64, i64), b: (i64, i64)) -> Env {
    let pair = |(x, y): (i64, i64)| Value::pair(Value::Int(x), Value::Int(y));
    [
        ("in_a".into(), Value::sealed(PrinSet::of(&["a"]), pair(a))),
        ("in_b".into(), Value::sealed(PrinSet::of(&["b"]), pair(b))),
    ]
    .into_iter()
    .collect()
}

/// Ascending pairs over `domain`.
pub fn pairs(domain: RangeInclusive<i64>) -> Vec<(i64, i64)> {
    let xs: Vec<i64> = domain.collect();
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            out.push((x, y));
        }
    }
    out
}

/// Runs both median programs on every input pair satisfying the
/// precondition and checks values and traces against the oracles.
pub fn check_median_correctness(domain: RangeInclusive<i64>) -> Verdict {
    let ps = pairs(domain);
    for &a in &ps {
        for &b in &ps {
            if !median_pre(a, b) {
                continue;
            }
            let m = median_of(a, b);
            let env = median_env(a, b);
            for (p, want) in [(Program::Median, median_trace(m)), (Program::MedianOpt, opt_trace(a, b, m))] {
                match run(p, &env) {
                    Ok((v, t)) => {
                        if v != Value::Int(m) {
                            return Verdict::Fail(format!("{} on {a:?} {b:?} gave {v}, want {m}", p.name()));
                        }
                        if t != want {
                            return Verdict::Fail(format!("{} on {a:?} {b:?}: trace {t:?}, want {want:?}", p.name()));
                        }
                    }
                    Err(e) => return Verdict::Fail(format!("{} on {a:?} {b:?}: {e}", p.name())),
                }
            }
        }
    }
    Verdict::Pass
}

/// Trace description used by the security check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOracle {
    Faithful,
    /// Leaves out the local scopes; disagrees with the program.
    DropScopes,
    /// Reports Alice's first number instead of the comparison.
    LeakAlice,
}

impl TraceOracle {
    fn trace(self, a: (i64, i64), b: (i64, i64), m: i64) -> Trace {
        let mut t = opt_trace(a, b, m);
        match self {
            TraceOracle::Faithful => {}
            TraceOracle::DropScopes => t.retain(|e| !matches!(e, TraceElt::Scope(..))),
            TraceOracle::LeakAlice => t[0] = TraceElt::Msg(Value::Int(a.0)),
        }
        t
    }
}

type Pair = (i64, i64);

/// Delimited release for `median_opt`: with one party's input and the
/// median fixed, the oracle's trace does not depend on the other party's
/// input, and every program trace equals the oracle's.
pub fn check_median_security(domain: RangeInclusive<i64>, oracle: TraceOracle) -> Verdict {
    let ps = pairs(domain);
    let mut traces: BTreeMap<(Pair, Pair), Trace> = BTreeMap::new();
    for &a in &ps {
        for &b in &ps {
            if median_pre(a, b) {
                traces.insert((a, b), oracle.trace(a, b, median_of(a, b)));
            }
        }
    }
    for (who, fixed_first) in [("alice", false), ("bob", true)] {
        // Group runs by the fixed party's input and the median.
        let mut groups: BTreeMap<(Pair, i64), Vec<(Pair, &Trace)>> = BTreeMap::new();
        for (&(a, b), t) in &traces {
            let (fixed, varied) = if fixed_first { (a, b) } else { (b, a) };
            groups.entry((fixed, median_of(a, b))).or_default().push((varied, t));
        }
        for ((fixed, m), runs) in groups {
            let (v0, t0) = runs[0];
            if let Some((v1, _)) = runs.iter().find(|(_, t)| *t != t0) {
                let what: String = format!(
                    "secure for {who} fails: inputs {v0:?} and {v1:?} against {fixed:?} share median {m} but not traces"
                );
                return Verdict::Fail(what);
            }
        }
    }
    for (&(a, b), want) in &traces {
        let t = match run(Program::MedianOpt, &median_env(a, b)) {
            Ok((_, t)) => t,
            Err(e) => return Verdict::Fail(format!("median_opt on {a:?} {b:?}: {e}")),
        };
        if t != *want {
            return Verdict::Fail(format!("on {a:?} {b:?} the trace {t:?} is not the oracle's {want:?}"));
        }
    }
    Verdict::Pass
}
