use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::{Env, Expr, PrinSet, Principal, Trace, Value, Var};
use crate::gmw::ShareStreams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeTag {
    Par,
    Sec,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub tag: ModeTag,
    pub ps: PrinSet,
}

impl Mode {
    pub fn par(ps: PrinSet) -> Mode {
        Mode { tag: ModeTag::Par, ps }
    }

    pub fn sec(ps: PrinSet) -> Mode {
        Mode { tag: ModeTag::Sec, ps }
    }

    pub fn is_par(&self) -> bool {
        self.tag == ModeTag::Par
    }

    pub fn is_sec(&self) -> bool {
        self.tag == ModeTag::Sec
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            ModeTag::Par => write!(f, "Par {}", self.ps),
            ModeTag::Sec => write!(f, "Sec {}", self.ps),
        }
    }
}

/// A single-layer evaluation context. Evaluation is left to right, call by
/// value; each variant names the position of the hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalCtx {
    /// `as_par ⟨⟩ e`
    AsParPrins(Arc<Expr>),
    /// `as_par v ⟨⟩`
    AsParThunk(Value),
    /// `seal s ⟨⟩` pushed on entry to an `as_par` body.
    AsParBody(PrinSet),
    AsSecPrins(Arc<Expr>),
    AsSecThunk(Value),
    /// `⟨⟩` pushed on entry to an `as_sec` body.
    AsSecBody,
    SealPrins(Arc<Expr>),
    SealArg(Value),
    Reveal,
    Ffi {
        name: String,
        done: Vec<Value>,
        rest: Vec<Arc<Expr>>,
    },
    MkMapPrins(Arc<Expr>),
    MkMapArg(Value),
    ProjectPrin(Arc<Expr>),
    ProjectMap(Value),
    ConcatLeft(Arc<Expr>),
    ConcatRight(Value),
    /// `let x = ⟨⟩ in e`
    Let(Var, Arc<Expr>),
    AppFn(Arc<Expr>),
    AppArg(Value),
    If(Arc<Expr>, Arc<Expr>),
}

/// A saved continuation: the mode, environment and trace to restore, and the
/// context to plug the returned value into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub mode: Mode,
    pub env: Env,
    pub ctx: EvalCtx,
    pub trace: Trace,
}

/// The term under evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Control {
    Expr(Arc<Expr>),
    Value(Value),
}

impl Control {
    pub fn value(&self) -> Option<&Value> {
        match self {
            Control::Value(v) => Some(v),
            Control::Expr(_) => None,
        }
    }
}

/// Machine state `M; X; L; T; e`, plus each principal's share randomness
/// stream (consumed by `mk_sh`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub mode: Mode,
    /// Top of stack is the last element.
    pub stack: Vec<Frame>,
    pub env: Env,
    pub trace: Trace,
    pub control: Control,
    pub shares: ShareStreams,
}

impl Config {
    /// `Par ps; ·; env; ·; e` with default share streams for `ps`.
    pub fn initial(ps: PrinSet, env: Env, e: Expr) -> Config {
        let shares = ShareStreams::for_parties(&ps);
        Config {
            mode: Mode::par(ps),
            stack: Vec::new(),
            env,
            trace: Trace::new(),
            control: Control::Expr(Arc::new(e)),
            shares,
        }
    }

    pub fn with_shares(mut self, shares: ShareStreams) -> Config {
        self.shares = shares;
        self
    }

    /// Par mode, empty stack, value in control.
    pub fn is_terminal(&self) -> bool {
        self.mode.is_par() && self.stack.is_empty() && matches!(self.control, Control::Value(_))
    }

    pub fn value(&self) -> Option<&Value> {
        self.control.value()
    }
}

/// A secure computation in flight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecEntry {
    /// The joint configuration `Sec s; ·; L; T; e`.
    pub config: Config,
    /// Each member's own closure environment at entry.
    pub locals: BTreeMap<Principal, Env>,
    /// Per-party outputs, for backends that deliver them directly.
    pub outputs: Option<BTreeMap<Principal, Value>>,
}

impl SecEntry {
    pub fn is_finished(&self) -> bool {
        self.outputs.is_some()
            || (self.config.mode.is_sec()
                && self.config.stack.is_empty()
                && matches!(self.config.control, Control::Value(_)))
    }
}

/// Distributed state `P; S`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Protocol {
    pub par: BTreeMap<Principal, Config>,
    pub sec: BTreeMap<PrinSet, SecEntry>,
}

impl Protocol {
    pub fn is_terminal(&self) -> bool {
        self.sec.is_empty() && self.par.values().all(Config::is_terminal)
    }

    pub fn principals(&self) -> PrinSet {
        self.par.keys().cloned().collect()
    }
}
