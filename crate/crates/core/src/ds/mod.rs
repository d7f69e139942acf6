//! Distributed semantics: every party steps its own configuration and the
//! parties meet only to run secure blocks.

mod check;
mod secure;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gmw::ShareStreams;
use crate::lang::{
    combine_all, slice_env, slice_v, Config, Control, Env, Expr, LangError, Mode, PrinSet,
    Principal, Protocol, SecEntry, Trace, TraceElt, Value,
};
use crate::machine::{self, Flavor, Step, Stuck};

pub use check::{check_confluence, check_simulation, check_simulation_with, Verdict};
pub use secure::GmwConfig;

/// How the parties' secure blocks are executed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecBackend {
    /// The joint configuration is stepped in the clear.
    Ideal,
    /// The block is compiled to a circuit and evaluated under GMW.
    Gmw(GmwConfig),
}

/// Order in which enabled protocol actions fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Secure blocks first, then parties in canonical order, one step each.
    RoundRobin,
    /// Uniform choice among enabled actions.
    SeededRandom(u64),
}

#[derive(Clone, Debug)]
pub struct Scheduler {
    pub kind: Schedule,
    cursor: usize,
    rng: ChaCha8Rng,
}

impl Scheduler {
    pub fn new(kind: Schedule) -> Self {
        let seed = match kind {
            Schedule::RoundRobin => 0,
            Schedule::SeededRandom(s) => s,
        };
        Scheduler {
            kind,
            cursor: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn choose(&mut self, enabled: &[Action], parties: &[Principal]) -> Action {
        match self.kind {
            Schedule::SeededRandom(_) => enabled[self.rng.random_range(0..enabled.len())].clone(),
            Schedule::RoundRobin => {
                for rank in 0..3 {
                    if let Some(a) = enabled.iter().find(|a| a.rank() == rank) {
                        return a.clone();
                    }
                }
                let n = parties.len();
                for k in 0..n {
                    let p = &parties[(self.cursor + k) % n];
                    if enabled.iter().any(|a| matches!(a, Action::Par(q) if q == p)) {
                        self.cursor = (self.cursor + k + 1) % n;
                        return Action::Par(p.clone());
                    }
                }
                unreachable!("no enabled action")
            }
        }
    }
}

/// One protocol transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Par(Principal),
    Enter(PrinSet),
    Sec(PrinSet),
    Exit(PrinSet),
}

impl Action {
    fn rank(&self) -> u8 {
        match self {
            Action::Exit(_) => 0,
            Action::Sec(_) => 1,
            Action::Enter(_) => 2,
            Action::Par(_) => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DsError {
    Stuck { at: String, stuck: Stuck },
    /// Parties reached `as_sec s` with different bodies.
    BodyMismatch(PrinSet),
    Combine(LangError),
    /// Not terminal, yet no action is enabled.
    Deadlock,
    OutOfFuel,
    Backend(String),
}

impl fmt::Display for DsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DsError::Stuck { at, stuck } => write!(f, "{at}: {stuck}"),
            DsError::BodyMismatch(s) => write!(f, "parties of {s} entered different secure blocks"),
            DsError::Combine(e) => write!(f, "{e}"),
            DsError::Deadlock => f.write_str("deadlock"),
            DsError::OutOfFuel => f.write_str("out of fuel"),
            DsError::Backend(e) => write!(f, "secure backend: {e}"),
        }
    }
}

impl From<LangError> for DsError {
    fn from(e: LangError) -> Self {
        DsError::Combine(e)
    }
}

/// Count of each kind of protocol transition taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub par: u64,
    pub enter: u64,
    pub sec: u64,
    pub exit: u64,
}

/// Result of one local step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalOutcome {
    Next(Config),
    /// Blocked at `as_sec s (env, λx.body)`.
    NeedsSec { ps: PrinSet, env: Env, body: Expr },
    Terminal,
    Stuck(Stuck),
}

/// One step of party `p`'s local semantics.
pub fn local_step(p: &Principal, c: &Config) -> LocalOutcome {
    let mut next = c.clone();
    match machine::step(&mut next, Flavor::Local(p)) {
        Ok(Step::Rule(_)) => LocalOutcome::Next(next),
        Ok(Step::Terminal) => LocalOutcome::Terminal,
        Ok(Step::NeedsSec { ps, thunk }) => match thunk_parts(&thunk) {
            Some((env, body)) => LocalOutcome::NeedsSec { ps, env, body },
            None => LocalOutcome::Stuck(Stuck::new("P-enter", format!("as_sec of non-function {thunk}"))),
        },
        Err(s) => LocalOutcome::Stuck(s),
    }
}

fn thunk_parts(v: &Value) -> Option<(Env, Expr)> {
    machine::enter(v, Value::Unit).map(|(env, body)| (env, (*body).clone()))
}

/// The starting protocol: party `p` runs `e` over `inputs[p]` with its own
/// share stream.
pub fn initial_protocol(
    e: &Expr,
    inputs: &BTreeMap<Principal, Env>,
    shares: &ShareStreams,
) -> Protocol {
    let par = inputs
        .iter()
        .map(|(p, env)| {
            let me = PrinSet::singleton(p.clone());
            let cfg = Config::initial(me.clone(), env.clone(), e.clone()).with_shares(shares.restrict(&me));
            (p.clone(), cfg)
        })
        .collect();
    Protocol {
        par,
        sec: BTreeMap::new(),
    }
}

/// Each party's slice of a common environment.
pub fn sliced_inputs(env: &Env, ps: &PrinSet) -> BTreeMap<Principal, Env> {
    ps.iter().map(|p| (p.clone(), slice_env(p, env))).collect()
}

/// Actions that may fire in `pi`.
pub fn enabled(pi: &Protocol) -> Vec<Action> {
    let mut out = Vec::new();
    for (s, entry) in &pi.sec {
        out.push(if entry.is_finished() {
            Action::Exit(s.clone())
        } else {
            Action::Sec(s.clone())
        });
    }
    let mut waiting: BTreeMap<PrinSet, usize> = BTreeMap::new();
    for cfg in pi.par.values() {
        if let Some((s, _)) = machine::waiting_sec(cfg) {
            *waiting.entry(s).or_default() += 1;
        }
    }
    for (s, n) in waiting {
        if !pi.sec.contains_key(&s)
            && n == s.len()
            && s.iter().all(|p| {
                pi.par
                    .get(p)
                    .and_then(machine::waiting_sec)
                    .is_some_and(|(t, _)| t == s)
            })
        {
            out.push(Action::Enter(s));
        }
    }
    for (p, cfg) in &pi.par {
        if machine::waiting_sec(cfg).is_none() && !cfg.is_terminal() {
            out.push(Action::Par(p.clone()));
        }
    }
    out
}

/// Fires one action chosen by `sched`.
pub fn protocol_step(
    pi: &mut Protocol,
    sched: &mut Scheduler,
    backend: &SecBackend,
    stats: &mut Stats,
) -> Result<Action, DsError> {
    let acts = enabled(pi);
    if acts.is_empty() {
        return Err(DsError::Deadlock);
    }
    let parties: Vec<Principal> = pi.par.keys().cloned().collect();
    let a = sched.choose(&acts, &parties);
    apply(pi, &a, backend, stats)?;
    Ok(a)
}

/// Fires `a`, which must be enabled.
pub fn apply(
    pi: &mut Protocol,
    a: &Action,
    backend: &SecBackend,
    stats: &mut Stats,
) -> Result<(), DsError> {
    match a {
        Action::Par(p) => {
            stats.par += 1;
            let cfg = pi.par.get_mut(p).expect("known party");
            match machine::step(cfg, Flavor::Local(p)) {
                Ok(_) => Ok(()),
                Err(stuck) => Err(DsError::Stuck {
                    at: format!("party {p}"),
                    stuck,
                }),
            }
        }
        Action::Enter(s) => {
            stats.enter += 1;
            let entry = enter(pi, s)?;
            pi.sec.insert(s.clone(), entry);
            Ok(())
        }
        Action::Sec(s) => {
            stats.sec += 1;
            let entry = pi.sec.get_mut(s).expect("known block");
            match backend {
                SecBackend::Ideal => machine::step(&mut entry.config, Flavor::Single)
                    .map(|_| ())
                    .map_err(|stuck| DsError::Stuck {
                        at: format!("secure block {s}"),
                        stuck,
                    }),
                SecBackend::Gmw(cfg) => secure::run_gmw(entry, s, cfg),
            }
        }
        Action::Exit(s) => {
            stats.exit += 1;
            let entry = pi.sec.remove(s).expect("known block");
            for p in s {
                let v = match &entry.outputs {
                    Some(out) => out.get(p).cloned().unwrap_or(Value::Opaque),
                    None => slice_v(p, entry.config.value().expect("finished block")),
                };
                let cfg = pi.par.get_mut(p).expect("known party");
                let frame = cfg.stack.pop().expect("waiting party has a frame");
                cfg.mode = frame.mode;
                cfg.env = frame.env;
                cfg.trace.push(TraceElt::Msg(v.clone()));
                cfg.control = Control::Value(v);
                cfg.shares = entry.config.shares.restrict(&PrinSet::singleton(p.clone()));
            }
            Ok(())
        }
    }
}

fn enter(pi: &Protocol, s: &PrinSet) -> Result<SecEntry, DsError> {
    let mut thunks = Vec::new();
    let mut locals = BTreeMap::new();
    let mut shares = ShareStreams::default();
    for p in s {
        let cfg = &pi.par[p];
        let (_, thunk) = machine::waiting_sec(cfg).expect("waiting party");
        let (env, _) = machine::enter(thunk, Value::Unit).ok_or_else(|| DsError::Stuck {
            at: format!("party {p}"),
            stuck: Stuck::new("P-enter", format!("as_sec of non-function {thunk}")),
        })?;
        if let Some((_, first)) = thunks.first() {
            if !same_code(first, thunk) {
                return Err(DsError::BodyMismatch(s.clone()));
            }
        }
        locals.insert(p.clone(), env);
        thunks.push((p.clone(), thunk.clone()));
        shares.merge(&cfg.shares);
    }
    let views: Vec<Value> = thunks.into_iter().map(|(_, t)| t).collect();
    let joint = combine_all(&views)?;
    let (env, body) = machine::enter(&joint, Value::Unit).expect("combined closure");
    Ok(SecEntry {
        config: Config {
            mode: Mode::sec(s.clone()),
            stack: Vec::new(),
            env,
            trace: Trace::new(),
            control: Control::Expr(body),
            shares,
        },
        locals,
        outputs: None,
    })
}

fn same_code(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Clos(x), Value::Clos(y)) => x.param == y.param && x.body == y.body,
        (Value::FixClos(x), Value::FixClos(y)) => {
            x.name == y.name && x.param == y.param && x.body == y.body
        }
        _ => false,
    }
}

/// Terminal protocol of a distributed run plus transition counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsRun {
    pub protocol: Protocol,
    pub stats: Stats,
}

impl DsRun {
    /// Each party's final value and trace.
    pub fn results(&self) -> BTreeMap<Principal, (Value, Trace)> {
        self.protocol
            .par
            .iter()
            .map(|(p, c)| {
                let v = c.value().cloned().unwrap_or(Value::Unit);
                (p.clone(), (v, c.trace.clone()))
            })
            .collect()
    }
}

/// Runs a protocol to termination.
pub fn ds_run_protocol(
    mut pi: Protocol,
    schedule: Schedule,
    backend: &SecBackend,
    fuel: u64,
) -> Result<DsRun, DsError> {
    let mut sched = Scheduler::new(schedule);
    let mut stats = Stats::default();
    for _ in 0..fuel {
        if pi.is_terminal() {
            return Ok(DsRun {
                protocol: pi,
                stats,
            });
        }
        protocol_step(&mut pi, &mut sched, backend, &mut stats)?;
    }
    if pi.is_terminal() {
        return Ok(DsRun {
            protocol: pi,
            stats,
        });
    }
    Err(DsError::OutOfFuel)
}

/// Runs `e` at every party of `ps`; `inputs[p]` is party `p`'s view of the
/// input environment.
pub fn ds_run(
    e: &Expr,
    inputs: &BTreeMap<Principal, Env>,
    schedule: Schedule,
    backend: &SecBackend,
    fuel: u64,
) -> Result<DsRun, DsError> {
    let ps: PrinSet = inputs.keys().cloned().collect();
    let pi = initial_protocol(e, inputs, &ShareStreams::for_parties(&ps));
    ds_run_protocol(pi, schedule, backend, fuel)
}
