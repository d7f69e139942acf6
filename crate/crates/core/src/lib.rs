//! Mixed-mode secure multi-party computation in a small functional DSL.
//!
//! A program is written once and run by every participating principal. Local
//! computations run under `as_par`, joint computations under `as_sec`; values
//! owned by a subset of principals are `sealed` and show up as the opaque
//! placeholder at everyone else.
//!
//! The crate provides:
//!
//! * [`lang`]: syntax, runtime values, configurations, and the slice/combine
//!   projections between a joint view and per-party views.
//! * [`st`]: the single-threaded reference semantics, where every party is
//!   modelled by one machine stepping in lockstep.
//! * [`ds`]: the distributed semantics, where each party steps its own
//!   configuration and parties synchronise only to enter secure blocks.
//! * [`circuit`]: compilation of secure blocks to boolean circuits and an
//!   in-clear evaluator.
//! * [`gmw`]: an n-party GMW evaluator over XOR shares with dealer triples, and
//!   the value-level secret share API.
//! * [`syntax`]: an s-expression surface syntax.
//! * [`apps`]: joint median, private set intersection and card dealing, with
//!   pure oracles and the security checks for them.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod apps;
pub mod circuit;
pub mod ds;
pub mod gmw;
pub mod lang;
mod machine;
pub mod st;
pub mod syntax;

pub use lang::{
    combine_env, combine_v, slice_cfg, slice_tr, slice_v, Config, Env, Expr, Mode, PrinSet,
    Principal, Protocol, Trace, TraceElt, Value,
};
