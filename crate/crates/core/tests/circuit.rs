use std::collections::BTreeMap;

use wysx_core::circuit::{
    compile_sec_thunk, decode_int, encode_int, fits, party_inputs, sec_blocks, Circuit, CircuitError, Gate,
};
use wysx_core::gmw::ShareStreams;
use wysx_core::lang::{slice_v, Env, PrinSet, Principal, Value};
use wysx_core::syntax::parse_program;

fn prins(xs: &[&str]) -> PrinSet {
    PrinSet::of(xs)
}

fn sealed(s: &[&str], v: Value) -> Value {
    Value::sealed(prins(s), v)
}

fn env_of(binds: &[(&str, Value)]) -> Env {
    binds.iter().map(|(x, v)| (x.to_string(), v.clone())).collect()
}

fn wrap(n: i64, w: u32) -> i64 {
    let shift = 64 - w;
    (n << shift) >> shift
}

/// Compiles every secure block `src` reaches on `env` and checks the circuit
/// gives each party the slice of the single-threaded result.
fn blocks_agree(src: &str, env: &Env, ps: &PrinSet, width: u32) -> usize {
    let e = parse_program(src).unwrap();
    let blocks = sec_blocks(&e, env, ps, 1_000_000).unwrap();
    for b in &blocks {
        let c = compile_sec_thunk(&b.env, &b.body, &b.parties, width).unwrap();
        let inputs = party_inputs(&c, &b.env, &b.shares).unwrap();
        let out = c.eval(&inputs).unwrap();
        for p in &b.parties {
            assert_eq!(out[p], slice_v(p, &b.result), "party {p}, block result {}", b.result);
        }
    }
    blocks.len()
}

fn binary_circuit(op: &str, width: u32) -> Circuit {
    typed_circuit(op, width, Value::Int(0))
}

fn typed_circuit(op: &str, width: u32, sample: Value) -> Circuit {
    let src = format!("(as_sec (prins a b) (lam _ (ffi {op} (reveal x) (reveal y))))");
    let e = parse_program(&src).unwrap();
    let blocks = sec_blocks(
        &e,
        &env_of(&[("x", sealed(&["a"], sample.clone())), ("y", sealed(&["b"], sample))]),
        &prins(&["a", "b"]),
        1000,
    )
    .unwrap();
    compile_sec_thunk(&blocks[0].env, &blocks[0].body, &prins(&["a", "b"]), width).unwrap()
}

fn run_binary(c: &Circuit, x: i64, y: i64) -> Value {
    let inputs: BTreeMap<Principal, Vec<bool>> = [
        (Principal::new("a"), encode_int(x, c.width)),
        (Principal::new("b"), encode_int(y, c.width)),
    ]
    .into_iter()
    .collect();
    c.eval(&inputs).unwrap()[&Principal::new("a")].clone()
}

type IntOp = fn(i64, i64) -> bool;

#[test]
fn comparisons_exhaustive() {
    for w in [2, 4] {
        let lo = -(1 << (w - 1));
        let hi = 1 << (w - 1);
        let ops: [(&str, IntOp); 6] = [
            ("gt", |x, y| x > y),
            ("ge", |x, y| x >= y),
            ("lt", |x, y| x < y),
            ("le", |x, y| x <= y),
            ("eq", |x, y| x == y),
            ("neq", |x, y| x != y),
        ];
        for (op, oracle) in ops {
            let c = binary_circuit(op, w);
            for x in lo..hi {
                for y in lo..hi {
                    assert_eq!(run_binary(&c, x, y), Value::Bool(oracle(x, y)), "{op} {x} {y} at w={w}");
                }
            }
        }
    }
}

#[test]
fn arithmetic_wraps() {
    for w in [2, 4] {
        let lo = -(1 << (w - 1));
        let hi = 1 << (w - 1);
        let add = binary_circuit("add", w);
        let sub = binary_circuit("sub", w);
        for x in lo..hi {
            for y in lo..hi {
                assert_eq!(run_binary(&add, x, y), Value::Int(wrap(x + y, w)));
                assert_eq!(run_binary(&sub, x, y), Value::Int(wrap(x - y, w)));
            }
        }
    }
}

#[test]
fn and_gate_truth_table() {
    let c = typed_circuit("and", 8, Value::Bool(false));
    assert_eq!(c.and_count(), 1);
    for x in [false, true] {
        for y in [false, true] {
            let inputs = [(Principal::new("a"), vec![x]), (Principal::new("b"), vec![y])].into_iter().collect();
            assert_eq!(c.eval(&inputs).unwrap()[&Principal::new("b")], Value::Bool(x && y));
        }
    }
}

#[test]
fn int_encoding_round_trips() {
    for w in [2u32, 5, 8, 32, 64] {
        for n in [-3i64, -1, 0, 1, 7, 100, i64::MIN, i64::MAX] {
            if fits(n, w) {
                assert_eq!(decode_int(encode_int(n, w).into_iter()), n);
            }
        }
    }
}

#[test]
fn public_body_has_no_inputs() {
    let e = parse_program("(ffi add 2 3)").unwrap();
    let c = compile_sec_thunk(&Env::default(), &e, &prins(&["a", "b"]), 8).unwrap();
    assert!(c.gates.is_empty());
    assert!(c.inputs.is_empty());
    assert_eq!(c.eval(&BTreeMap::new()).unwrap()[&Principal::new("a")], Value::Int(5));
}

#[test]
fn constant_too_wide() {
    let e = parse_program("(ffi add (reveal x) 300)").unwrap();
    let env = env_of(&[("x", sealed(&["a"], Value::Int(1)))]);
    let r = compile_sec_thunk(&env, &e, &prins(&["a", "b"]), 8);
    assert_eq!(r.unwrap_err(), CircuitError::WidthOverflow(300));
}

#[test]
fn rejects_recursion_and_secret_mk_sh() {
    let ab = prins(&["a", "b"]);
    let x = env_of(&[("x", sealed(&["a"], Value::Int(1)))]);
    let e = parse_program("(app (fix f y (lam z z)) 1 2)").unwrap();
    assert!(matches!(compile_sec_thunk(&x, &e, &ab, 8), Err(CircuitError::NotCircuitable(_))));
    let e = parse_program("(if (ffi gt (reveal x) 0) (ffi mk_sh 1) (ffi mk_sh 2))").unwrap();
    assert!(matches!(compile_sec_thunk(&x, &e, &ab, 8), Err(CircuitError::NotCircuitable(_))));
    let e = parse_program("(as_par (prins a) (lam _ 1))").unwrap();
    assert!(matches!(compile_sec_thunk(&x, &e, &ab, 8), Err(CircuitError::Stuck(_))));
}

#[test]
fn secret_values_never_read() {
    let e = parse_program("(ffi gt (reveal x) (reveal y))").unwrap();
    let ab = prins(&["a", "b"]);
    let c1 = compile_sec_thunk(
        &env_of(&[("x", sealed(&["a"], Value::Int(1))), ("y", sealed(&["b"], Value::Int(9)))]),
        &e,
        &ab,
        8,
    )
    .unwrap();
    let c2 = compile_sec_thunk(
        &env_of(&[("x", sealed(&["a"], Value::Int(-4))), ("y", sealed(&["b"], Value::Int(3)))]),
        &e,
        &ab,
        8,
    )
    .unwrap();
    assert_eq!(c1, c2);
}

#[test]
fn dump_lists_gates() {
    let c = typed_circuit("and", 8, Value::Bool(false));
    let d = c.dump();
    let g = c.gates.iter().find(|g| matches!(g, Gate::And { .. })).unwrap();
    if let Gate::And { a, b, out } = *g {
        assert!(d.contains(&format!("AND w{out} <- w{a} w{b}")));
    }
    assert!(d.contains("IN w0 <- a x.sealed[0]"));
}

const MEDIAN: &str = include_str!("../programs/median.wyx");
const MEDIAN_OPT: &str = include_str!("../programs/median_opt.wyx");
const PSI: &str = include_str!("../programs/psi.wyx");
const PSI_OPT: &str = include_str!("../programs/psi_opt.wyx");
const PSI_INTERIM: &str = include_str!("../programs/psi_interim.wyx");
const DEAL: &str = include_str!("../programs/deal.wyx");

#[test]
fn median_blocks_agree() {
    let ab = prins(&["a", "b"]);
    let pair = |x, y| Value::pair(Value::Int(x), Value::Int(y));
    for (a, b) in [((1, 3), (2, 4)), ((5, 9), (-2, 0)), ((2, 2), (2, 2))] {
        let env = env_of(&[("in_a", sealed(&["a"], pair(a.0, a.1))), ("in_b", sealed(&["b"], pair(b.0, b.1)))]);
        assert_eq!(blocks_agree(MEDIAN, &env, &ab, 32), 1);
        assert!(blocks_agree(MEDIAN_OPT, &env, &ab, 32) >= 2);
    }
}

#[test]
fn psi_blocks_agree() {
    let ab = prins(&["a", "b"]);
    let list = |s: &[&str], xs: &[i64]| Value::List(xs.iter().map(|&x| sealed(s, Value::Int(x))).collect());
    let env = env_of(&[("la", list(&["a"], &[1, 2, 3, 7])), ("lb", list(&["b"], &[2, 3, 4, 7]))]);
    let whole = |s: &[&str], xs: &[i64]| sealed(s, Value::List(xs.iter().map(|&x| Value::Int(x)).collect()));
    let sets = env_of(&[("in_a", whole(&["a"], &[1, 2, 3, 7])), ("in_b", whole(&["b"], &[2, 3, 4, 7]))]);
    assert_eq!(blocks_agree(PSI, &sets, &ab, 16), 1);
    assert_eq!(blocks_agree(PSI_INTERIM, &env, &ab, 16), 16);
    assert!(blocks_agree(PSI_OPT, &env, &ab, 16) >= 1);
}

#[test]
fn deal_blocks_agree() {
    let abc = prins(&["a", "b", "c"]);
    let rands = Value::Map(
        [("a", 17), ("b", 40), ("c", 30)]
            .into_iter()
            .map(|(p, n)| (Principal::new(p), Value::Int(n)))
            .collect(),
    );
    let env = env_of(&[("shares", Value::List(Vec::new())), ("rands", rands)]);
    assert!(blocks_agree(DEAL, &env, &abc, 32) >= 5);
    let _ = ShareStreams::for_parties(&abc);
}
