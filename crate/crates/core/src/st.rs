//! Single-threaded semantics: one machine steps on behalf of every party.

use core::fmt;

use crate::lang::{Config, Env, Expr, PrinSet, Trace, Value};
use crate::machine::{self, Flavor, Step};

pub use crate::machine::{can_seal, Stuck};

/// Default step budget.
pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Next(Config),
    Done(Value, Trace),
    Stuck(Stuck),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunError {
    Stuck(Stuck),
    OutOfFuel,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Stuck(s) => write!(f, "{s}"),
            RunError::OutOfFuel => f.write_str("out of fuel"),
        }
    }
}

impl From<Stuck> for RunError {
    fn from(s: Stuck) -> Self {
        RunError::Stuck(s)
    }
}

/// One step of the single-threaded semantics.
pub fn st_step(c: &Config) -> StepOutcome {
    let mut next = c.clone();
    match machine::step(&mut next, Flavor::Single) {
        Ok(Step::Rule(_)) => StepOutcome::Next(next),
        Ok(Step::Terminal) if c.is_terminal() => {
            StepOutcome::Done(next.control.value().cloned().unwrap_or(Value::Unit), next.trace)
        }
        Ok(Step::Terminal) => StepOutcome::Stuck(Stuck::new("S-secret", "secure block left without a frame")),
        Ok(Step::NeedsSec { .. }) => unreachable!("single-threaded stepping never waits"),
        Err(s) => StepOutcome::Stuck(s),
    }
}

/// Like [`st_step`] in place, reporting the name of the rule that fired.
/// Returns `Ok(None)` once `cfg` has no further step.
pub fn st_step_mut(cfg: &mut Config) -> Result<Option<&'static str>, Stuck> {
    match machine::step(cfg, Flavor::Single)? {
        Step::Rule(r) => Ok(Some(r)),
        _ => Ok(None),
    }
}

/// Steps `cfg` until it has no further step, calling `observe` after every
/// rule. Returns the final configuration (terminal, or a finished secure
/// block when started in `Sec` mode).
pub fn run_config_with(
    mut cfg: Config,
    fuel: u64,
    mut observe: impl FnMut(&'static str, &Config),
) -> Result<Config, RunError> {
    for _ in 0..fuel {
        match st_step_mut(&mut cfg)? {
            Some(rule) => observe(rule, &cfg),
            None => return Ok(cfg),
        }
    }
    match machine::step(&mut cfg.clone(), Flavor::Single)? {
        Step::Terminal => Ok(cfg),
        _ => Err(RunError::OutOfFuel),
    }
}

pub fn run_config(cfg: Config, fuel: u64) -> Result<Config, RunError> {
    run_config_with(cfg, fuel, |_, _| {})
}

/// Runs `e` from `Par ps; ·; env; ·` and returns the final value and the
/// top-level trace.
pub fn st_run(e: &Expr, env: &Env, ps: &PrinSet, fuel: u64) -> Result<(Value, Trace), RunError> {
    let cfg = run_config(Config::initial(ps.clone(), env.clone(), e.clone()), fuel)?;
    if !cfg.is_terminal() {
        return Err(RunError::Stuck(Stuck::new("S-secret", "ended in a secure block")));
    }
    let v = cfg.value().cloned().unwrap_or(Value::Unit);
    Ok((v, cfg.trace))
}
