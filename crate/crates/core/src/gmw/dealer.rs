//! Trusted dealer handing out correlated randomness before evaluation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::share::share_bits;
use super::GmwError;
use crate::lang::{PrinSet, Principal};

/// One party's share of a multiplication triple: the XOR of all parties'
/// `c` equals the AND of the XORs of their `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

/// Seeded, non-cryptographic source of triples and pairwise seeds.
#[derive(Clone, Debug)]
pub struct Dealer {
    rng: ChaCha8Rng,
    parties: PrinSet,
    remaining: usize,
}

impl Dealer {
    /// A dealer that will hand out at most `budget` triples.
    pub fn new(seed: u64, parties: &PrinSet, budget: usize) -> Dealer {
        Dealer {
            rng: ChaCha8Rng::seed_from_u64(seed),
            parties: parties.clone(),
            remaining: budget,
        }
    }

    /// `n` triples, as one list per party.
    pub fn triples(&mut self, n: usize) -> Result<BTreeMap<Principal, Vec<Triple>>, GmwError> {
        if n > self.remaining {
            return Err(GmwError::TripleExhausted);
        }
        self.remaining -= n;
        let mut out: BTreeMap<Principal, Vec<Triple>> =
            self.parties.iter().map(|p| (p.clone(), Vec::with_capacity(n))).collect();
        for _ in 0..n {
            let a: bool = self.rng.random();
            let b: bool = self.rng.random();
            let sa = share_bits(&[a], &self.parties, &mut self.rng);
            let sb = share_bits(&[b], &self.parties, &mut self.rng);
            let sc = share_bits(&[a & b], &self.parties, &mut self.rng);
            for p in &self.parties {
                out.get_mut(p).expect("party").push(Triple {
                    a: sa[p][0],
                    b: sb[p][0],
                    c: sc[p][0],
                });
            }
        }
        Ok(out)
    }

    /// A seed known to exactly the two parties of each unordered pair.
    pub fn pair_seeds(&mut self) -> BTreeMap<(Principal, Principal), u64> {
        let mut out = BTreeMap::new();
        for a in &self.parties {
            for b in &self.parties {
                if a < b {
                    out.insert((a.clone(), b.clone()), self.rng.random());
                }
            }
        }
        out
    }
}
