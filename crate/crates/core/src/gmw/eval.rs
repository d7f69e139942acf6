//! The GMW protocol: every party holds an XOR share of every wire.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::channel::{Message, Network};
use super::dealer::{Dealer, Triple};
use super::GmwError;
use crate::circuit::{Circuit, Gate, Wire};
use crate::lang::{Principal, Value};

/// Message counts of one evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GmwStats {
    pub and_gates: usize,
    /// Communication rounds, including output delivery.
    pub rounds: u32,
    /// Bits opened for AND gates, per ordered (sender, receiver) pair.
    pub opened_bits: BTreeMap<(Principal, Principal), usize>,
    /// Output shares sent, per ordered (sender, receiver) pair.
    pub output_bits: BTreeMap<(Principal, Principal), usize>,
}

#[derive(Clone, Debug)]
pub struct GmwRun {
    /// Each party's decoded output.
    pub outputs: BTreeMap<Principal, Value>,
    /// Messages each party received, with their sender, in order.
    pub transcripts: BTreeMap<Principal, Vec<(Principal, Message)>>,
    pub stats: GmwStats,
}

/// Gates grouped by the number of AND gates on their longest input path.
/// Within a layer the ANDs go first, then local gates in circuit order.
struct Plan {
    layers: Vec<(Vec<usize>, Vec<usize>)>,
}

fn plan(c: &Circuit) -> Plan {
    let mut depth = vec![0u32; c.num_wires as usize];
    let mut layers: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (i, g) in c.gates.iter().enumerate() {
        let (d, is_and) = match *g {
            Gate::Xor { a, b, .. } => (depth[a as usize].max(depth[b as usize]), false),
            Gate::And { a, b, .. } => (depth[a as usize].max(depth[b as usize]) + 1, true),
            Gate::Not { a, .. } => (depth[a as usize], false),
            Gate::Const { .. } => (0, false),
        };
        depth[g.out() as usize] = d;
        while layers.len() <= d as usize {
            layers.push((Vec::new(), Vec::new()));
        }
        if is_and {
            layers[d as usize].0.push(i);
        } else {
            layers[d as usize].1.push(i);
        }
    }
    Plan { layers }
}

/// One party's state. A worker sees only its own inputs, its own triples
/// and seeds, and what arrives on its channels.
struct Worker {
    me: Principal,
    leader: bool,
    wires: Vec<bool>,
    triples: Vec<Triple>,
    used: usize,
    pending: Vec<(usize, Triple, bool, bool)>,
    transcript: Vec<(Principal, Message)>,
}

impl Worker {
    fn set(&mut self, w: Wire, b: bool) {
        self.wires[w as usize] = b;
    }

    fn get(&self, w: Wire) -> bool {
        self.wires[w as usize]
    }

    /// Masks the inputs of this layer's ANDs with fresh triples.
    fn open(&mut self, c: &Circuit, ands: &[usize]) -> Result<Vec<bool>, GmwError> {
        self.pending.clear();
        let mut bits = Vec::with_capacity(2 * ands.len());
        for &i in ands {
            let Gate::And { a, b, .. } = c.gates[i] else { unreachable!() };
            let t = *self.triples.get(self.used).ok_or(GmwError::TripleExhausted)?;
            self.used += 1;
            let d = self.get(a) ^ t.a;
            let e = self.get(b) ^ t.b;
            bits.push(d);
            bits.push(e);
            self.pending.push((i, t, d, e));
        }
        Ok(bits)
    }

    fn close(&mut self, c: &Circuit, received: &[Vec<bool>]) {
        let pending = core::mem::take(&mut self.pending);
        for (k, (i, t, mut d, mut e)) in pending.into_iter().enumerate() {
            for bits in received {
                d ^= bits[2 * k];
                e ^= bits[2 * k + 1];
            }
            let z = t.c ^ (d & t.b) ^ (e & t.a) ^ (self.leader & d & e);
            self.set(c.gates[i].out(), z);
        }
    }

    fn local(&mut self, c: &Circuit, gates: &[usize]) {
        for &i in gates {
            let v = match c.gates[i] {
                Gate::Xor { a, b, .. } => self.get(a) ^ self.get(b),
                Gate::Not { a, .. } => self.get(a) ^ self.leader,
                Gate::Const { bit, .. } => bit & self.leader,
                Gate::And { .. } => unreachable!(),
            };
            self.set(c.gates[i].out(), v);
        }
    }
}

/// Stream of bits shared by `owner` and `other` for masking the owner's
/// inputs.
fn pair_stream(seeds: &BTreeMap<(Principal, Principal), u64>, owner: &Principal, other: &Principal) -> ChaCha8Rng {
    let (key, stream) = if owner < other {
        ((owner.clone(), other.clone()), 0)
    } else {
        ((other.clone(), owner.clone()), 1)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seeds[&key]);
    rng.set_stream(stream);
    rng
}

/// Evaluates `c` by GMW with triples from a dealer seeded by `dealer_seed`.
/// `inputs[p]` lists the bits of `c.inputs[p]` in order and is seen only
/// by `p`.
pub fn gmw_eval(c: &Circuit, inputs: &BTreeMap<Principal, Vec<bool>>, dealer_seed: u64) -> Result<GmwRun, GmwError> {
    let mut dealer = Dealer::new(dealer_seed, &c.parties, c.and_count());
    gmw_eval_with(c, inputs, &mut dealer)
}

pub fn gmw_eval_with(
    c: &Circuit,
    inputs: &BTreeMap<Principal, Vec<bool>>,
    dealer: &mut Dealer,
) -> Result<GmwRun, GmwError> {
    let parties: Vec<Principal> = c.parties.to_vec();
    for (p, ws) in &c.inputs {
        if inputs.get(p).map(Vec::len) != Some(ws.len()) {
            return Err(GmwError::MissingInput(p.clone()));
        }
    }
    let seeds = dealer.pair_seeds();
    let mut triples = dealer.triples(c.and_count())?;
    let mut workers: Vec<Worker> = parties
        .iter()
        .enumerate()
        .map(|(i, p)| Worker {
            me: p.clone(),
            leader: i == 0,
            wires: vec![false; c.num_wires as usize],
            triples: triples.remove(p).unwrap_or_default(),
            used: 0,
            pending: Vec::new(),
            transcript: Vec::new(),
        })
        .collect();

    // Inputs: the owner's counterparts draw their shares from pairwise
    // streams, and the owner takes the bit XOR all of them.
    for w in workers.iter_mut() {
        for (owner, ws) in &c.inputs {
            if *owner == w.me {
                let mut streams: Vec<ChaCha8Rng> = parties
                    .iter()
                    .filter(|q| **q != w.me)
                    .map(|q| pair_stream(&seeds, owner, q))
                    .collect();
                for (iw, &bit) in ws.iter().zip(&inputs[owner]) {
                    let mask = streams.iter_mut().fold(false, |acc, r| acc ^ r.random::<bool>());
                    w.set(iw.wire, bit ^ mask);
                }
            } else {
                let mut r = pair_stream(&seeds, owner, &w.me);
                for iw in ws {
                    let share: bool = r.random();
                    w.set(iw.wire, share);
                }
            }
        }
    }

    let mut net = Network::new(parties.iter());
    let mut stats = GmwStats {
        and_gates: c.and_count(),
        ..GmwStats::default()
    };
    let mut round = 0;
    for (ands, locals) in &plan(c).layers {
        if !ands.is_empty() {
            for w in workers.iter_mut() {
                let bits = w.open(c, ands)?;
                for q in parties.iter().filter(|q| **q != w.me) {
                    *stats.opened_bits.entry((w.me.clone(), q.clone())).or_default() += bits.len();
                    net.send(&w.me, q, Message { round, bits: bits.clone() })?;
                }
            }
            for w in workers.iter_mut() {
                let mut received = Vec::new();
                for q in parties.iter().filter(|q| **q != w.me) {
                    let m = net.recv(q, &w.me, round)?;
                    received.push(m.bits.clone());
                    w.transcript.push((q.clone(), m));
                }
                w.close(c, &received);
            }
            round += 1;
        }
        for w in workers.iter_mut() {
            w.local(c, locals);
        }
    }

    // Outputs: each party receives the others' shares of its own output
    // wires only.
    let mut outputs = BTreeMap::new();
    let wanted: BTreeMap<Principal, Vec<Wire>> = parties.iter().map(|p| (p.clone(), c.output_wires(p))).collect();
    let any_output = wanted.values().any(|ws| !ws.is_empty());
    if any_output && parties.len() > 1 {
        for w in &workers {
            for (p, ws) in &wanted {
                if *p == w.me || ws.is_empty() {
                    continue;
                }
                let bits: Vec<bool> = ws.iter().map(|&x| w.get(x)).collect();
                *stats.output_bits.entry((w.me.clone(), p.clone())).or_default() += bits.len();
                net.send(&w.me, p, Message { round, bits })?;
            }
        }
    }
    for w in workers.iter_mut() {
        let ws = &wanted[&w.me];
        let mut bits: Vec<bool> = ws.iter().map(|&x| w.get(x)).collect();
        if !ws.is_empty() {
            for q in parties.iter().filter(|q| **q != w.me) {
                let m = net.recv(q, &w.me, round)?;
                for (b, r) in bits.iter_mut().zip(&m.bits) {
                    *b ^= r;
                }
                w.transcript.push((q.clone(), m));
            }
        }
        let known: BTreeMap<Wire, bool> = ws.iter().copied().zip(bits).collect();
        if let Some(t) = c.outputs.get(&w.me) {
            outputs.insert(w.me.clone(), t.decode(&|x| known[&x]));
        }
    }
    if any_output && parties.len() > 1 {
        round += 1;
    }
    for a in &parties {
        for b in &parties {
            net.close(a, b);
        }
    }
    debug_assert!(net.is_drained());
    stats.rounds = round;
    Ok(GmwRun {
        outputs,
        transcripts: workers.into_iter().map(|w| (w.me, w.transcript)).collect(),
        stats,
    })
}
