//! XOR secret shares: bit-vector sharing for the GMW evaluator and the
//! value-level share handles behind `mk_sh`/`comb_sh`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::{PrinSet, Principal, Value};

/// Splits `bits` into one XOR share per party. All but the last party's
/// vector are drawn from `rng`.
pub fn share_bits<R: Rng + ?Sized>(
    bits: &[bool],
    parties: &PrinSet,
    rng: &mut R,
) -> BTreeMap<Principal, Vec<bool>> {
    let mut acc = bits.to_vec();
    let mut out = BTreeMap::new();
    let n = parties.len();
    for (i, p) in parties.iter().enumerate() {
        if i + 1 == n {
            out.insert(p.clone(), acc.clone());
        } else {
            let share: Vec<bool> = (0..bits.len()).map(|_| rng.random()).collect();
            for (a, s) in acc.iter_mut().zip(&share) {
                *a ^= *s;
            }
            out.insert(p.clone(), share);
        }
    }
    out
}

/// XOR of all shares.
pub fn reconstruct_bits<'a>(shares: impl IntoIterator<Item = &'a Vec<bool>>) -> Vec<bool> {
    let mut it = shares.into_iter();
    let mut acc = it.next().cloned().unwrap_or_default();
    for s in it {
        for (a, b) in acc.iter_mut().zip(s) {
            *a ^= *b;
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShareError {
    /// Only integers can be shared.
    CanShError(Value),
    /// `comb_sh` must run among exactly the parties that created the share.
    PartySetMismatch { share: PrinSet, context: PrinSet },
    MissingShare(Principal),
}

impl fmt::Display for ShareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShareError::CanShError(v) => write!(f, "cannot secret-share {v}"),
            ShareError::PartySetMismatch { share, context } => {
                write!(f, "share among {share} combined in context {context}")
            }
            ShareError::MissingShare(p) => write!(f, "missing share word of {p}"),
        }
    }
}

/// Shares of an integer held by `parties`. Each party's slice holds only its
/// own 64-bit word; the XOR of all words is the shared value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareHandle {
    pub parties: PrinSet,
    pub words: BTreeMap<Principal, u64>,
}

impl ShareHandle {
    pub fn slice(&self, p: &Principal) -> ShareHandle {
        ShareHandle {
            parties: self.parties.clone(),
            words: self
                .words
                .get(p)
                .map(|w| (p.clone(), *w))
                .into_iter()
                .collect(),
        }
    }

    /// Union of two views; `None` if they disagree.
    pub fn combine(a: &ShareHandle, b: &ShareHandle) -> Option<ShareHandle> {
        if a.parties != b.parties {
            return None;
        }
        let mut words = a.words.clone();
        for (p, w) in &b.words {
            if *words.entry(p.clone()).or_insert(*w) != *w {
                return None;
            }
        }
        Some(ShareHandle {
            parties: a.parties.clone(),
            words,
        })
    }

    /// XOR of every party's word, if all are present.
    pub fn reconstruct(&self) -> Result<i64, ShareError> {
        self.parties.iter().try_fold(0u64, |acc, p| {
            self.words
                .get(p)
                .map(|w| acc ^ w)
                .ok_or_else(|| ShareError::MissingShare(p.clone()))
        })
        .map(|w| w as i64)
    }
}

/// A party's deterministic source of share masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareStream {
    pub seed: u64,
    /// Number of masks consumed so far.
    pub counter: u64,
}

impl ShareStream {
    pub fn new(seed: u64) -> Self {
        ShareStream { seed, counter: 0 }
    }

    /// The mask `offset` positions past the current counter.
    pub fn peek(&self, offset: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter + offset);
        rng.next_u64()
    }
}

/// Per-principal share streams, carried in every configuration and sliced
/// like the rest of it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShareStreams(BTreeMap<Principal, ShareStream>);

impl ShareStreams {
    /// Streams seeded from each principal's name.
    pub fn for_parties(ps: &PrinSet) -> Self {
        ShareStreams(
            ps.iter()
                .map(|p| (p.clone(), ShareStream::new(default_seed(p))))
                .collect(),
        )
    }

    pub fn with_seed(mut self, p: Principal, seed: u64) -> Self {
        self.0.insert(p, ShareStream::new(seed));
        self
    }

    pub fn get(&self, p: &Principal) -> ShareStream {
        self.0
            .get(p)
            .cloned()
            .unwrap_or_else(|| ShareStream::new(default_seed(p)))
    }

    pub fn advance(&mut self, p: &Principal, n: u64) {
        let mut s = self.get(p);
        s.counter += n;
        self.0.insert(p.clone(), s);
    }

    pub fn restrict(&self, ps: &PrinSet) -> ShareStreams {
        ShareStreams(
            self.0
                .iter()
                .filter(|(p, _)| ps.contains(p))
                .map(|(p, s)| (p.clone(), s.clone()))
                .collect(),
        )
    }

    /// Union; entries of `other` win.
    pub fn merge(&mut self, other: &ShareStreams) {
        for (p, s) in &other.0 {
            self.0.insert(p.clone(), s.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Principal, &ShareStream)> {
        self.0.iter()
    }
}

/// FNV-1a of the principal's name.
fn default_seed(p: &Principal) -> u64 {
    p.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// `mk_sh v` in `Sec parties`: every party but the canonically last takes the
/// next mask from its own stream, the last takes `v` XOR those masks. All
/// members' counters advance by one.
pub fn mk_sh(
    v: &Value,
    parties: &PrinSet,
    streams: &mut ShareStreams,
) -> Result<ShareHandle, ShareError> {
    let n = match v {
        Value::Int(n) => *n,
        other => return Err(ShareError::CanShError(other.clone())),
    };
    let last = parties.last().cloned();
    let mut acc = n as u64;
    let mut words = BTreeMap::new();
    for p in parties {
        if Some(p) != last.as_ref() {
            let mask = streams.get(p).peek(0);
            acc ^= mask;
            words.insert(p.clone(), mask);
        }
    }
    if let Some(l) = last {
        words.insert(l, acc);
    }
    for p in parties {
        streams.advance(p, 1);
    }
    Ok(ShareHandle {
        parties: parties.clone(),
        words,
    })
}

/// `comb_sh sh` in `Sec context`.
pub fn comb_sh(sh: &ShareHandle, context: &PrinSet) -> Result<i64, ShareError> {
    if sh.parties != *context {
        return Err(ShareError::PartySetMismatch {
            share: sh.parties.clone(),
            context: context.clone(),
        });
    }
    sh.reconstruct()
}
