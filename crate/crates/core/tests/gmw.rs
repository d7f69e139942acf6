use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wysx_core::circuit::{compile_sec_thunk, encode_int, party_inputs, sec_blocks, Builder, Circuit, Template};
use wysx_core::gmw::{gmw_eval, gmw_eval_with, reconstruct_bits, share_bits, Dealer, GmwError};
use wysx_core::lang::{Env, PrinSet, Principal, Value};
use wysx_core::syntax::parse_program;

fn p(x: &str) -> Principal {
    Principal::new(x)
}

fn two_input(op: &str, width: u32, sample: Value) -> Circuit {
    let e = parse_program(&format!("(ffi {op} (reveal x) (reveal y))")).unwrap();
    let env: Env = [
        ("x".to_string(), Value::sealed(PrinSet::of(&["a"]), sample.clone())),
        ("y".to_string(), Value::sealed(PrinSet::of(&["b"]), sample)),
    ]
    .into_iter()
    .collect();
    compile_sec_thunk(&env, &e, &PrinSet::of(&["a", "b"]), width).unwrap()
}

fn inputs(a: Vec<bool>, b: Vec<bool>) -> BTreeMap<Principal, Vec<bool>> {
    [(p("a"), a), (p("b"), b)].into_iter().collect()
}

#[test]
fn share_bits_round_trip() {
    for parties in [PrinSet::of(&["a", "b"]), PrinSet::of(&["a", "b", "c"])] {
        for v in 0..4u8 {
            let bits = vec![v & 1 == 1, v & 2 == 2];
            for seed in 0..8 {
                let shares = share_bits(&bits, &parties, &mut ChaCha8Rng::seed_from_u64(seed));
                assert_eq!(shares.len(), parties.len());
                assert_eq!(reconstruct_bits(shares.values()), bits);
            }
        }
    }
    let bits = vec![true, false, true, true];
    let shares = share_bits(&bits, &PrinSet::of(&["a", "b"]), &mut ChaCha8Rng::seed_from_u64(3));
    assert_eq!(reconstruct_bits(shares.values()), bits);
}

#[test]
fn gt_matches_clear_evaluation() {
    let c = two_input("gt", 2, Value::Int(0));
    for x in -2..2 {
        for y in -2..2 {
            let ins = inputs(encode_int(x, 2), encode_int(y, 2));
            for seed in 0..5 {
                let run = gmw_eval(&c, &ins, seed).unwrap();
                assert_eq!(run.outputs, c.eval(&ins).unwrap(), "{x} > {y}, dealer seed {seed}");
                assert_eq!(run.outputs[&p("a")], Value::Bool(x > y));
            }
        }
    }
}

#[test]
fn single_and_truth_table() {
    let c = two_input("and", 8, Value::Bool(false));
    assert_eq!(c.and_count(), 1);
    for x in [false, true] {
        for y in [false, true] {
            for seed in 0..10 {
                let run = gmw_eval(&c, &inputs(vec![x], vec![y]), seed).unwrap();
                assert_eq!(run.outputs[&p("a")], Value::Bool(x && y));
                assert_eq!(run.outputs[&p("b")], Value::Bool(x && y));
            }
        }
    }
}

#[test]
fn output_only_for_one_party() {
    let mut c = two_input("and", 8, Value::Bool(false));
    c.outputs.remove(&p("b"));
    let run = gmw_eval(&c, &inputs(vec![true], vec![true]), 1).unwrap();
    assert_eq!(run.outputs.get(&p("a")), Some(&Value::Bool(true)));
    assert!(!run.outputs.contains_key(&p("b")));
    // b only ever sees the opened AND bits.
    assert_eq!(run.transcripts[&p("b")].len(), 1);
    assert_eq!(run.stats.output_bits.get(&(p("a"), p("b"))), None);
    assert_eq!(run.stats.output_bits[&(p("b"), p("a"))], 1);
}

#[test]
fn communication_bound() {
    let c = two_input("gt", 8, Value::Int(0));
    let run = gmw_eval(&c, &inputs(encode_int(5, 8), encode_int(-3, 8)), 7).unwrap();
    for pair in [(p("a"), p("b")), (p("b"), p("a"))] {
        assert_eq!(run.stats.opened_bits[&pair], 2 * c.and_count());
        assert_eq!(run.stats.output_bits[&pair], 1);
    }
}

#[test]
fn dealer_runs_out() {
    let c = two_input("and", 8, Value::Bool(false));
    let mut dealer = Dealer::new(0, &c.parties, 0);
    let r = gmw_eval_with(&c, &inputs(vec![true], vec![true]), &mut dealer);
    assert_eq!(r.unwrap_err(), GmwError::TripleExhausted);
}

#[test]
fn missing_input_rejected() {
    let c = two_input("and", 8, Value::Bool(false));
    let r = gmw_eval(&c, &inputs(vec![true], vec![]), 0);
    assert_eq!(r.unwrap_err(), GmwError::MissingInput(p("b")));
}

#[test]
fn three_party_and_chain() {
    let mut b = Builder::new();
    let ws: Vec<u32> = (0..3).map(|_| b.fresh()).collect();
    let x = b.and(ws[0], ws[1]);
    let y = b.and(x, ws[2]);
    let z = b.not(y);
    let parties = PrinSet::of(&["a", "b", "c"]);
    let mut c = Circuit {
        width: 8,
        parties: parties.clone(),
        num_wires: b.next,
        gates: b.gates,
        inputs: BTreeMap::new(),
        outputs: BTreeMap::new(),
        mk_sh_count: 0,
    };
    for (i, q) in parties.iter().enumerate() {
        c.inputs.insert(
            q.clone(),
            vec![wysx_core::circuit::InputWire {
                wire: ws[i],
                source: wysx_core::circuit::InputSource::ShareMask { index: 0, bit: 0 },
            }],
        );
        c.outputs.insert(q.clone(), Template::Tuple(vec![Template::Bool(y), Template::Bool(z)]));
    }
    for bits in 0..8u8 {
        let ins: BTreeMap<Principal, Vec<bool>> =
            parties.iter().enumerate().map(|(i, q)| (q.clone(), vec![bits >> i & 1 == 1])).collect();
        let run = gmw_eval(&c, &ins, bits as u64).unwrap();
        assert_eq!(run.outputs, c.eval(&ins).unwrap());
        assert_eq!(run.stats.rounds, 3);
    }
}

#[test]
fn card_blocks_under_gmw() {
    let src = include_str!("../programs/deal.wyx");
    let e = parse_program(src).unwrap();
    let abc = PrinSet::of(&["a", "b", "c"]);
    let rands = Value::Map([("a", 5), ("b", 50), ("c", 49)].into_iter().map(|(q, n)| (p(q), Value::Int(n))).collect());
    let env: Env = [("shares".to_string(), Value::List(Vec::new())), ("rands".to_string(), rands)].into_iter().collect();
    for block in sec_blocks(&e, &env, &abc, 100_000).unwrap() {
        let c = compile_sec_thunk(&block.env, &block.body, &block.parties, 32).unwrap();
        let ins = party_inputs(&c, &block.env, &block.shares).unwrap();
        for seed in 0..5 {
            assert_eq!(gmw_eval(&c, &ins, seed).unwrap().outputs, c.eval(&ins).unwrap());
        }
    }
}

/// Frequency of a one in each position of `b`'s received bits.
fn view_frequencies(c: &Circuit, ins: &BTreeMap<Principal, Vec<bool>>, seeds: std::ops::Range<u64>) -> Vec<f64> {
    let n = seeds.end - seeds.start;
    let mut counts: Vec<u32> = Vec::new();
    for seed in seeds {
        let run = gmw_eval(c, ins, seed).unwrap();
        let bits: Vec<bool> = run.transcripts[&p("b")].iter().flat_map(|(_, m)| m.bits.clone()).collect();
        counts.resize(bits.len(), 0);
        for (n, b) in counts.iter_mut().zip(bits) {
            *n += b as u32;
        }
    }
    counts.into_iter().map(|k| k as f64 / n as f64).collect()
}

// Independent seed ranges per input, 4000 runs each: the 5% bound is then
// several standard errors wide.
const RUNS: u64 = 4000;

#[test]
fn view_independent_of_other_input() {
    let c = two_input("and", 8, Value::Bool(false));
    let f0 = view_frequencies(&c, &inputs(vec![false], vec![false]), 0..RUNS);
    let f1 = view_frequencies(&c, &inputs(vec![true], vec![false]), RUNS..2 * RUNS);
    for (x, y) in f0.iter().zip(&f1) {
        assert!((x - y).abs() < 0.05, "{f0:?} vs {f1:?}");
    }
    let c = two_input("gt", 2, Value::Int(0));
    let f0 = view_frequencies(&c, &inputs(encode_int(-1, 2), encode_int(-2, 2)), 0..RUNS);
    let f1 = view_frequencies(&c, &inputs(encode_int(1, 2), encode_int(-2, 2)), RUNS..2 * RUNS);
    for (x, y) in f0.iter().zip(&f1) {
        assert!((x - y).abs() < 0.05, "{f0:?} vs {f1:?}");
    }
}
