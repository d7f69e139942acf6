use alloc::vec::Vec;

use super::{PrinSet, Value};

/// One observable event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceElt {
    /// The output of a secure block.
    Msg(Value),
    /// Events only the listed principals can observe.
    Scope(PrinSet, Trace),
}

pub type Trace = Vec<TraceElt>;

/// True if the trace contains no `Scope` element at any depth.
pub fn is_flat(t: &[TraceElt]) -> bool {
    t.iter().all(|e| matches!(e, TraceElt::Msg(_)))
}

/// Every message payload, in order, looking through scopes.
pub fn messages(t: &[TraceElt]) -> Vec<&Value> {
    let mut out = Vec::new();
    fn go<'a>(t: &'a [TraceElt], out: &mut Vec<&'a Value>) {
        for e in t {
            match e {
                TraceElt::Msg(v) => out.push(v),
                TraceElt::Scope(_, inner) => go(inner, out),
            }
        }
    }
    go(t, &mut out);
    out
}
