//! GMW evaluation of circuits among n semi-honest parties, and value-level
//! secret shares.

mod channel;
mod dealer;
mod eval;
pub mod share;

use core::fmt;

use crate::lang::Principal;

pub use channel::{Channel, Message, Network};
pub use dealer::{Dealer, Triple};
pub use eval::{gmw_eval, gmw_eval_with, GmwRun, GmwStats};
pub use share::{comb_sh, mk_sh, reconstruct_bits, share_bits, ShareError, ShareHandle, ShareStreams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GmwError {
    ChannelClosed { from: Principal, to: Principal },
    TripleExhausted,
    RoundMismatch { expected: u32, got: u32 },
    MissingInput(Principal),
}

impl fmt::Display for GmwError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GmwError::ChannelClosed { from, to } => write!(f, "channel {from} -> {to} closed"),
            GmwError::TripleExhausted => f.write_str("dealer ran out of triples"),
            GmwError::RoundMismatch { expected, got } => write!(f, "expected a round {expected} message, got round {got}"),
            GmwError::MissingInput(p) => write!(f, "missing inputs of {p}"),
        }
    }
}
