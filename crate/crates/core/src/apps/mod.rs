//! The example applications as DSL programs, pure oracles for them, and the
//! checks relating the two.

mod backend;
pub mod cards;
pub mod corpus;
pub mod median;
pub mod oracle;
pub mod psi;

use alloc::string::String;
use core::fmt;

use crate::lang::{Expr, PrinSet, Trace, Value};
use crate::st::{st_run, RunError, DEFAULT_FUEL};
use crate::syntax::parse_program;

pub use backend::gmw_matches_ideal;

/// The bundled programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Program {
    Median,
    MedianOpt,
    Psi,
    PsiInterim,
    PsiOpt,
    CheckFresh,
    Deal,
}

impl Program {
    pub const ALL: [Program; 7] = [
        Program::Median,
        Program::MedianOpt,
        Program::Psi,
        Program::PsiInterim,
        Program::PsiOpt,
        Program::CheckFresh,
        Program::Deal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Program::Median => "median",
            Program::MedianOpt => "median_opt",
            Program::Psi => "psi",
            Program::PsiInterim => "psi_interim",
            Program::PsiOpt => "psi_opt",
            Program::CheckFresh => "check_fresh",
            Program::Deal => "deal",
        }
    }

    pub fn from_name(name: &str) -> Option<Program> {
        Program::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn source(self) -> &'static str {
        match self {
            Program::Median => include_str!("../../programs/median.wyx"),
            Program::MedianOpt => include_str!("../../programs/median_opt.wyx"),
            Program::Psi => include_str!("../../programs/psi.wyx"),
            Program::PsiInterim => include_str!("../../programs/psi_interim.wyx"),
            Program::PsiOpt => include_str!("../../programs/psi_opt.wyx"),
            Program::CheckFresh => include_str!("../../programs/check_fresh.wyx"),
            Program::Deal => include_str!("../../programs/deal.wyx"),
        }
    }

    pub fn expr(self) -> Expr {
        parse_program(self.source()).expect("bundled programs parse")
    }

    pub fn parties(self) -> PrinSet {
        match self {
            Program::CheckFresh | Program::Deal => PrinSet::of(&["a", "b", "c"]),
            _ => PrinSet::of(&["a", "b"]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AppError {
    /// Inputs outside the oracle's precondition.
    PreViolation(String),
    Run(RunError),
    DeckExhausted,
    /// The program returned something of the wrong shape.
    Unexpected(Value),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::PreViolation(why) => write!(f, "precondition violated: {why}"),
            AppError::Run(e) => write!(f, "{e}"),
            AppError::DeckExhausted => f.write_str("all 52 cards have been dealt"),
            AppError::Unexpected(v) => write!(f, "unexpected result {v}"),
        }
    }
}

impl From<RunError> for AppError {
    fn from(e: RunError) -> Self {
        AppError::Run(e)
    }
}

/// Single-threaded run of `p` over `env`.
pub fn run(p: Program, env: &crate::lang::Env) -> Result<(Value, Trace), RunError> {
    st_run(&p.expr(), env, &p.parties(), DEFAULT_FUEL)
}

/// Test-only accessors that look through seals and shares.
pub mod ghost {
    use crate::gmw::ShareHandle;
    use crate::lang::{PrinSet, Value};

    pub fn unseal(v: &Value) -> &Value {
        match v {
            Value::Sealed(_, inner) => inner,
            other => other,
        }
    }

    pub fn v_of_sh(v: &Value) -> Option<i64> {
        match v {
            Value::Share(h) => h.reconstruct().ok(),
            _ => None,
        }
    }

    pub fn ps_of_sh(v: &Value) -> Option<&PrinSet> {
        match v {
            Value::Share(ShareHandle { parties, .. }) => Some(parties),
            _ => None,
        }
    }
}
