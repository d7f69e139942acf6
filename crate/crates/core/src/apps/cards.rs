//! Dealing cards among three parties without anyone learning the others'
//! cards.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ghost::v_of_sh;
use super::oracle::{distinct_lists, fresh};
use super::{AppError, Program};
use crate::ds::Verdict;
use crate::gmw::{mk_sh, ShareStreams};
use crate::lang::{Config, Env, PrinSet, Principal, Value};
use crate::st::{run_config, RunError, DEFAULT_FUEL};
use crate::syntax::parse_program;

pub const DECK: usize = 52;

pub fn abc() -> PrinSet {
    PrinSet::of(&["a", "b", "c"])
}

/// A share of `v` among `a`, `b`, `c`, drawn from `streams`.
pub fn share_of(v: i64, streams: &mut ShareStreams) -> Value {
    Value::Share(mk_sh(&Value::Int(v), &abc(), streams).expect("int"))
}

/// Share streams for `a`, `b`, `c` seeded from `seed`.
pub fn streams(seed: u64) -> ShareStreams {
    abc()
        .iter()
        .enumerate()
        .fold(ShareStreams::default(), |s, (i, p)| {
            s.with_seed(p.clone(), seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64))
        })
}

fn run_with(p: Program, env: Env, streams: &mut ShareStreams) -> Result<Value, RunError> {
    let cfg = Config::initial(p.parties(), env, p.expr()).with_shares(streams.clone());
    let cfg = run_config(cfg, DEFAULT_FUEL)?;
    if !cfg.is_terminal() {
        return Err(RunError::Stuck(crate::st::Stuck::new("S-secret", "ended in a secure block")));
    }
    *streams = cfg.shares.clone();
    Ok(cfg.value().cloned().unwrap_or(Value::Unit))
}

/// Runs the freshness check of `s` against the shares in `l`.
pub fn check_fresh(l: &[Value], s: &Value) -> Result<bool, AppError> {
    let env: Env = [("l".into(), Value::List(l.to_vec())), ("s".into(), s.clone())]
        .into_iter()
        .collect();
    let mut streams = ShareStreams::for_parties(&abc());
    match run_with(Program::CheckFresh, env, &mut streams)? {
        Value::Bool(b) => Ok(b),
        other => Err(AppError::Unexpected(other)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deal {
    Card(i64),
    /// The drawn card had been dealt already.
    Retry,
}

/// Runs one deal with the given randoms. Returns the new history.
pub fn deal_with(
    history: &[Value],
    randoms: &BTreeMap<Principal, i64>,
    streams: &mut ShareStreams,
) -> Result<(Vec<Value>, Deal), AppError> {
    if history.len() >= DECK {
        return Err(AppError::DeckExhausted);
    }
    let rands = Value::Map(randoms.iter().map(|(p, r)| (p.clone(), Value::Int(*r))).collect());
    let env: Env = [("shares".into(), Value::List(history.to_vec())), ("rands".into(), rands)]
        .into_iter()
        .collect();
    let v = run_with(Program::Deal, env, streams)?;
    let Value::Tuple(parts) = &v else {
        return Err(AppError::Unexpected(v));
    };
    match (&parts[..], parts.first()) {
        ([Value::List(l), Value::Int(card)], _) => {
            if *card == DECK as i64 {
                Ok((l.clone(), Deal::Retry))
            } else {
                Ok((l.clone(), Deal::Card(*card)))
            }
        }
        _ => Err(AppError::Unexpected(v.clone())),
    }
}

/// One deal with randoms drawn from each party's own generator.
pub fn deal_card(
    history: &[Value],
    rngs: &mut BTreeMap<Principal, ChaCha8Rng>,
    streams: &mut ShareStreams,
) -> Result<(Vec<Value>, Deal), AppError> {
    let randoms = rngs
        .iter_mut()
        .map(|(p, r)| (p.clone(), r.random_range(0..DECK as i64)))
        .collect();
    deal_with(history, &randoms, streams)
}

/// Deals the whole deck, retrying until each card is fresh. Returns the
/// cards in order dealt.
pub fn deal_deck(seed: u64, max_attempts: usize) -> Result<Vec<i64>, AppError> {
    let mut rngs: BTreeMap<Principal, ChaCha8Rng> = abc()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 32))))
        .collect();
    let mut streams = streams(seed);
    let mut history = Vec::new();
    let mut cards = Vec::new();
    for _ in 0..max_attempts {
        if cards.len() == DECK {
            break;
        }
        let (next, d) = deal_card(&history, &mut rngs, &mut streams)?;
        if let Deal::Card(c) = d {
            if next.first().and_then(v_of_sh) != Some(c) {
                return Err(AppError::Unexpected(Value::Int(c)));
            }
            cards.push(c);
        }
        history = next;
    }
    Ok(cards)
}

/// `comb_sh (mk_sh n)` inside a secure block among `a`, `b`, `c`.
pub fn round_trip(n: i64, streams: &mut ShareStreams) -> Result<Value, AppError> {
    let e = parse_program("(as_sec (prins a b c) (lam _ (ffi comb_sh (ffi mk_sh n))))").expect("well formed");
    let cfg = Config::initial(abc(), [("n".into(), Value::Int(n))].into_iter().collect(), e).with_shares(streams.clone());
    let cfg = run_config(cfg, DEFAULT_FUEL)?;
    *streams = cfg.shares.clone();
    Ok(cfg.value().cloned().unwrap_or(Value::Unit))
}

/// Share round trips for every card, `check_fresh` against the oracle on
/// every duplicate-free history of length at most `max_len` over `domain`,
/// and a full deal for each seed.
pub fn check_cards(max_len: usize, domain: &[i64], seeds: &[u64]) -> Verdict {
    let mut st = streams(0);
    for n in 0..DECK as i64 {
        match round_trip(n, &mut st) {
            Ok(Value::Int(m)) if m == n => {}
            other => return Verdict::Fail(format!("comb_sh (mk_sh {n}) gave {other:?}")),
        }
    }
    for h in distinct_lists(max_len, domain) {
        let l: Vec<Value> = h.iter().map(|&v| share_of(v, &mut st)).collect();
        for &s in domain {
            let want = fresh(&h, s);
            match check_fresh(&l, &share_of(s, &mut st)) {
                Ok(got) if got == want => {}
                other => return Verdict::Fail(format!("check_fresh {h:?} {s}: {other:?}, oracle {want}")),
            }
        }
    }
    for &seed in seeds {
        let mut cards = match deal_deck(seed, 20 * DECK * DECK) {
            Ok(c) => c,
            Err(e) => return Verdict::Fail(format!("deal with seed {seed}: {e}")),
        };
        if cards.len() != DECK {
            return Verdict::Inconclusive(format!("seed {seed} dealt {} cards", cards.len()));
        }
        cards.sort_unstable();
        cards.dedup();
        if cards.len() != DECK {
            return Verdict::Fail(format!("seed {seed} dealt a card twice"));
        }
    }
    Verdict::Pass
}
