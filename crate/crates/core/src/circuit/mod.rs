//! Boolean circuits for secure blocks.
//!
//! [`compile_sec_thunk`] turns the body of an `as_sec` block into a circuit
//! over the block's environment. Secret inputs become input wires owned by a
//! party that can see them; each party's output is described by a
//! [`Template`] telling how to rebuild a [`Value`] from output wires.

mod blocks;
mod builder;
mod compile;
mod inputs;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::lang::{PrinSet, Principal, Value, Var};

pub use blocks::{sec_blocks, SecBlock};
pub use builder::Builder;
pub use compile::compile_sec_thunk;
pub use inputs::{assign_inputs, erase_env, erase_value, party_inputs};

pub type Wire = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Xor { a: Wire, b: Wire, out: Wire },
    And { a: Wire, b: Wire, out: Wire },
    Not { a: Wire, out: Wire },
    Const { bit: bool, out: Wire },
}

impl Gate {
    pub fn out(&self) -> Wire {
        match *self {
            Gate::Xor { out, .. } | Gate::And { out, .. } | Gate::Not { out, .. } | Gate::Const { out, .. } => out,
        }
    }
}

/// One step from a value to a part of it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PathStep {
    /// Contents of a sealed value.
    Sealed,
    /// Element of a tuple or list.
    Index(usize),
    /// Variable captured by a closure.
    ClosEnv(Var),
    MapKey(Principal),
}

/// Location of a value inside a party's view of the block's environment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub var: Var,
    pub steps: Vec<PathStep>,
}

impl Path {
    pub fn var(x: &str) -> Path {
        Path {
            var: x.into(),
            steps: Vec::new(),
        }
    }

    pub fn then(&self, step: PathStep) -> Path {
        let mut p = self.clone();
        p.steps.push(step);
        p
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.var)?;
        for s in &self.steps {
            match s {
                PathStep::Sealed => f.write_str(".sealed")?,
                PathStep::Index(i) => write!(f, ".{i}")?,
                PathStep::ClosEnv(x) => write!(f, ".env.{x}")?,
                PathStep::MapKey(p) => write!(f, ".[{p}]")?,
            }
        }
        Ok(())
    }
}

/// Where the owner of an input wire takes its bit from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    /// Bit `bit` of the integer or boolean at `path`.
    Value { path: Path, bit: u32 },
    /// Bit `bit` of the owner's word of the share at `path`.
    ShareWord { path: Path, bit: u32 },
    /// Bit `bit` of the owner's share mask for the `index`-th `mk_sh` of the
    /// block.
    ShareMask { index: u64, bit: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputWire {
    pub wire: Wire,
    pub source: InputSource,
}

/// How to rebuild a party's output value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    Const(Value),
    /// Two's complement, least significant bit first.
    Int(Vec<Wire>),
    Bool(Wire),
    Tuple(Vec<Template>),
    List(Vec<Template>),
    /// A list whose elements are each present iff their wire is set.
    OptList(Vec<(Wire, Template)>),
    Sealed(PrinSet, Box<Template>),
    Map(BTreeMap<Principal, Template>),
    /// 64-bit share words of the listed parties.
    Share {
        parties: PrinSet,
        words: BTreeMap<Principal, Vec<Wire>>,
    },
}

impl Template {
    fn wires(&self, out: &mut Vec<Wire>) {
        match self {
            Template::Const(_) => {}
            Template::Int(ws) => out.extend(ws),
            Template::Bool(w) => out.push(*w),
            Template::Tuple(ts) | Template::List(ts) => ts.iter().for_each(|t| t.wires(out)),
            Template::OptList(es) => {
                for (w, t) in es {
                    out.push(*w);
                    t.wires(out);
                }
            }
            Template::Sealed(_, t) => t.wires(out),
            Template::Map(m) => m.values().for_each(|t| t.wires(out)),
            Template::Share { words, .. } => words.values().for_each(|ws| out.extend(ws)),
        }
    }

    /// Rebuilds the value given the bit on each output wire.
    pub fn decode(&self, bit: &dyn Fn(Wire) -> bool) -> Value {
        match self {
            Template::Const(v) => v.clone(),
            Template::Int(ws) => Value::Int(decode_int(ws.iter().map(|&w| bit(w)))),
            Template::Bool(w) => Value::Bool(bit(*w)),
            Template::Tuple(ts) => Value::Tuple(ts.iter().map(|t| t.decode(bit)).collect()),
            Template::List(ts) => Value::List(ts.iter().map(|t| t.decode(bit)).collect()),
            Template::OptList(es) => Value::List(
                es.iter()
                    .filter(|(w, _)| bit(*w))
                    .map(|(_, t)| t.decode(bit))
                    .collect(),
            ),
            Template::Sealed(s, t) => Value::sealed(s.clone(), t.decode(bit)),
            Template::Map(m) => Value::Map(m.iter().map(|(p, t)| (p.clone(), t.decode(bit))).collect()),
            Template::Share { parties, words } => Value::Share(crate::gmw::ShareHandle {
                parties: parties.clone(),
                words: words
                    .iter()
                    .map(|(p, ws)| (p.clone(), decode_int(ws.iter().map(|&w| bit(w))) as u64))
                    .collect(),
            }),
        }
    }
}

/// Sign-extends a little-endian bit string.
pub fn decode_int(bits: impl Iterator<Item = bool>) -> i64 {
    let mut n: i64 = 0;
    let mut len = 0;
    let mut last = false;
    for b in bits {
        if b && len < 64 {
            n |= 1 << len;
        }
        last = b;
        len += 1;
    }
    if last && len < 64 {
        n |= -1i64 << len;
    }
    n
}

/// The low `w` bits of `n`, least significant first.
pub fn encode_int(n: i64, w: u32) -> Vec<bool> {
    (0..w).map(|i| (n >> i.min(63)) & 1 == 1).collect()
}

/// True if `n` is representable in `w`-bit two's complement.
pub fn fits(n: i64, w: u32) -> bool {
    w >= 64 || (-(1i64 << (w - 1))..(1i64 << (w - 1))).contains(&n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitError {
    /// A construct with no circuit lowering.
    NotCircuitable(String),
    /// A constant or input does not fit the integer width.
    WidthOverflow(i64),
    MissingInput(String),
    /// A side condition of the secure semantics failed.
    Stuck(String),
    BadWidth(u32),
}

impl fmt::Display for CircuitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitError::NotCircuitable(c) => write!(f, "not circuitable: {c}"),
            CircuitError::WidthOverflow(n) => write!(f, "{n} does not fit the integer width"),
            CircuitError::MissingInput(w) => write!(f, "missing input: {w}"),
            CircuitError::Stuck(why) => write!(f, "stuck: {why}"),
            CircuitError::BadWidth(w) => write!(f, "integer width {w} outside 2..=64"),
        }
    }
}

/// A compiled secure block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub width: u32,
    pub parties: PrinSet,
    pub num_wires: u32,
    /// Topologically ordered.
    pub gates: Vec<Gate>,
    pub inputs: BTreeMap<Principal, Vec<InputWire>>,
    pub outputs: BTreeMap<Principal, Template>,
    /// Number of `mk_sh` calls made by the block.
    pub mk_sh_count: u64,
}

impl Circuit {
    pub fn and_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::And { .. })).count()
    }

    /// The wires party `p` learns, in template order.
    pub fn output_wires(&self, p: &Principal) -> Vec<Wire> {
        let mut out = Vec::new();
        if let Some(t) = self.outputs.get(p) {
            t.wires(&mut out);
        }
        out
    }

    /// Evaluates every gate given all input bits; `inputs[p]` lists the bits
    /// of `self.inputs[p]` in order. Returns all wire values.
    pub fn eval_wires(&self, inputs: &BTreeMap<Principal, Vec<bool>>) -> Result<Vec<bool>, CircuitError> {
        let mut vals: Vec<Option<bool>> = alloc::vec![None; self.num_wires as usize];
        for (p, ws) in &self.inputs {
            let bits = inputs
                .get(p)
                .ok_or_else(|| CircuitError::MissingInput(format!("inputs of {p}")))?;
            if bits.len() != ws.len() {
                return Err(CircuitError::MissingInput(format!(
                    "{p} supplied {} of {} input bits",
                    bits.len(),
                    ws.len()
                )));
            }
            for (iw, &b) in ws.iter().zip(bits) {
                vals[iw.wire as usize] = Some(b);
            }
        }
        let get = |vals: &[Option<bool>], w: Wire| {
            vals[w as usize].ok_or_else(|| CircuitError::MissingInput(format!("wire w{w}")))
        };
        for g in &self.gates {
            let v = match *g {
                Gate::Xor { a, b, .. } => get(&vals, a)? ^ get(&vals, b)?,
                Gate::And { a, b, .. } => get(&vals, a)? & get(&vals, b)?,
                Gate::Not { a, .. } => !get(&vals, a)?,
                Gate::Const { bit, .. } => bit,
            };
            vals[g.out() as usize] = Some(v);
        }
        Ok(vals.into_iter().map(|v| v.unwrap_or(false)).collect())
    }

    /// Evaluation in the clear: each party's decoded output.
    pub fn eval(&self, inputs: &BTreeMap<Principal, Vec<bool>>) -> Result<BTreeMap<Principal, Value>, CircuitError> {
        let vals = self.eval_wires(inputs)?;
        Ok(self
            .outputs
            .iter()
            .map(|(p, t)| (p.clone(), t.decode(&|w| vals[w as usize])))
            .collect())
    }

    /// Line-oriented listing, one gate per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# parties {} width {} wires {}", self.parties, self.width, self.num_wires);
        for (p, ws) in &self.inputs {
            for iw in ws {
                let src = match &iw.source {
                    InputSource::Value { path, bit } => format!("{path}[{bit}]"),
                    InputSource::ShareWord { path, bit } => format!("share {path}[{bit}]"),
                    InputSource::ShareMask { index, bit } => format!("mask {index}[{bit}]"),
                };
                let _ = writeln!(s, "IN w{} <- {p} {src}", iw.wire);
            }
        }
        for g in &self.gates {
            let _ = match *g {
                Gate::Xor { a, b, out } => writeln!(s, "XOR w{out} <- w{a} w{b}"),
                Gate::And { a, b, out } => writeln!(s, "AND w{out} <- w{a} w{b}"),
                Gate::Not { a, out } => writeln!(s, "NOT w{out} <- w{a}"),
                Gate::Const { bit, out } => writeln!(s, "CONST w{out} <- {}", bit as u8),
            };
        }
        for p in self.outputs.keys() {
            let ws: Vec<String> = self.output_wires(p).iter().map(|w| format!("w{w}")).collect();
            let _ = writeln!(s, "OUT {p} <- {}", ws.join(" "));
        }
        s
    }
}

/// In-clear evaluation of `c`.
pub fn eval_circuit(
    c: &Circuit,
    inputs: &BTreeMap<Principal, Vec<bool>>,
) -> Result<BTreeMap<Principal, Value>, CircuitError> {
    c.eval(inputs)
}
