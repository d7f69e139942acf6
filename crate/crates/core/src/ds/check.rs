//! Executable checks of the correspondence between the two semantics.

use alloc::format;
use alloc::string::String;
use core::fmt;

use super::{ds_run, sliced_inputs, DsError, Schedule, SecBackend};
use crate::lang::{slice_cfg, Config, Env, Expr, PrinSet, Protocol};
use crate::st::{self, RunError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// The first divergence found.
    Fail(String),
    /// A run did not finish, so nothing was checked.
    Inconclusive(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail(why) => write!(f, "FAIL: {why}"),
            Verdict::Inconclusive(why) => write!(f, "INCONCLUSIVE: {why}"),
        }
    }
}

/// The distributed run (round robin, ideal backend) ends in the slice of the
/// single-threaded run's terminal configuration.
pub fn check_simulation(e: &Expr, env: &Env, ps: &PrinSet, fuel: u64) -> Verdict {
    check_simulation_with(e, env, ps, &SecBackend::Ideal, Schedule::RoundRobin, fuel)
}

pub fn check_simulation_with(
    e: &Expr,
    env: &Env,
    ps: &PrinSet,
    backend: &SecBackend,
    schedule: Schedule,
    fuel: u64,
) -> Verdict {
    let terminal = match st::run_config(Config::initial(ps.clone(), env.clone(), e.clone()), fuel) {
        Ok(c) => c,
        Err(RunError::OutOfFuel) => return Verdict::Inconclusive("single-threaded run out of fuel".into()),
        Err(RunError::Stuck(s)) => return Verdict::Inconclusive(format!("single-threaded run {s}")),
    };
    let expected = match slice_cfg(ps, &terminal) {
        Ok(pi) => pi,
        Err(e) => return Verdict::Inconclusive(format!("{e}")),
    };
    let dfuel = fuel.saturating_mul(ps.len() as u64 + 1);
    let run = match ds_run(e, &sliced_inputs(env, ps), schedule, backend, dfuel) {
        Ok(r) => r,
        Err(DsError::OutOfFuel) => return Verdict::Inconclusive("distributed run out of fuel".into()),
        Err(err) => return Verdict::Fail(format!("distributed run failed: {err}")),
    };
    match first_difference(&expected, &run.protocol) {
        None => Verdict::Pass,
        Some(d) => Verdict::Fail(d),
    }
}

/// Where two protocols differ, if anywhere.
pub(crate) fn first_difference(want: &Protocol, got: &Protocol) -> Option<String> {
    if want.par.len() != got.par.len() {
        return Some("different party sets".into());
    }
    if !got.sec.is_empty() || !want.sec.is_empty() {
        return Some("secure block still in flight".into());
    }
    for ((p, a), (q, b)) in want.par.iter().zip(&got.par) {
        if p != q {
            return Some(format!("party {p} vs {q}"));
        }
        if a.control != b.control {
            return Some(format!("party {p}: value {:?} vs {:?}", a.control, b.control));
        }
        if a.trace != b.trace {
            return Some(format!("party {p}: trace {:?} vs {:?}", a.trace, b.trace));
        }
        if a.env != b.env {
            return Some(format!("party {p}: environments differ"));
        }
        if a.shares != b.shares {
            return Some(format!("party {p}: share streams differ"));
        }
        if a.mode != b.mode || a.stack != b.stack {
            return Some(format!("party {p}: mode or stack differ"));
        }
    }
    None
}

/// Every schedule (round robin and one per seed) reaches the same terminal
/// protocol.
pub fn check_confluence(
    e: &Expr,
    env: &Env,
    ps: &PrinSet,
    seeds: &[u64],
    backend: &SecBackend,
    fuel: u64,
) -> Verdict {
    let inputs = sliced_inputs(env, ps);
    let run = |s: Schedule| match ds_run(e, &inputs, s, backend, fuel) {
        Ok(r) => Ok(r.protocol),
        Err(DsError::OutOfFuel) => Err(Verdict::Inconclusive(format!("{s:?} out of fuel"))),
        Err(err) => Err(Verdict::Fail(format!("{s:?}: {err}"))),
    };
    let base = match run(Schedule::RoundRobin) {
        Ok(pi) => pi,
        Err(v) => return v,
    };
    for &seed in seeds {
        let pi = match run(Schedule::SeededRandom(seed)) {
            Ok(pi) => pi,
            Err(v) => return v,
        };
        if let Some(d) = first_difference(&base, &pi) {
            return Verdict::Fail(format!("seed {seed}: {d}"));
        }
    }
    Verdict::Pass
}
