//! The ten acceptance criteria, run in order with their time limits.
//! Prints one line per criterion and exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config as PtConfig, TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wysx_core::apps::cards::{check_cards, share_of, streams};
use wysx_core::apps::corpus::corpus;
use wysx_core::apps::median::{check_median_correctness, check_median_security, median_env, TraceOracle};
use wysx_core::apps::oracle::{distinct_lists, median_pre};
use wysx_core::apps::psi::{check_psi_security, lists_env, psi_comparison_count, sets_env};
use wysx_core::apps::{gmw_matches_ideal, Program};
use wysx_core::circuit::{compile_sec_thunk, encode_int, Circuit};
use wysx_core::ds::{check_confluence, check_simulation, SecBackend, Verdict};
use wysx_core::gmw::gmw_eval;
use wysx_core::lang::{combine_all, Env, PrinSet, Principal, Value};
use wysx_core::st::{st_run, DEFAULT_FUEL};
use wysx_core::syntax::parse_program;

type Outcome = Result<String, String>;
type IntOp = fn(i64, i64) -> bool;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn verdict(v: Verdict, what: &str) -> Result<(), String> {
    match v {
        Verdict::Pass => Ok(()),
        other => Err(format!("{what}: {other}")),
    }
}

fn simulation() -> Outcome {
    let cases = corpus();
    for c in &cases {
        verdict(check_simulation(&c.program.expr(), &c.env, &c.parties, DEFAULT_FUEL), &c.name)?;
    }
    for seed in 0..200 {
        let (e, env, ps) = common::random_program(seed);
        st_run(&e, &env, &ps, DEFAULT_FUEL).map_err(|err| format!("random program {seed}: {err}"))?;
        verdict(check_simulation(&e, &env, &ps, DEFAULT_FUEL), &format!("random program {seed}"))?;
    }
    Ok(format!("{} corpus cases, 200 random programs", cases.len()))
}

fn confluence() -> Outcome {
    let seeds: Vec<u64> = (0..100).collect();
    let cases = corpus();
    for c in &cases {
        verdict(check_confluence(&c.program.expr(), &c.env, &c.parties, &seeds, &SecBackend::Ideal, DEFAULT_FUEL), &c.name)?;
    }
    Ok(format!("{} corpus cases x 100 schedules", cases.len()))
}

fn median_correctness() -> Outcome {
    verdict(check_median_correctness(1..=8), "median")?;
    Ok("values 1..8".into())
}

fn delimited_release() -> Outcome {
    verdict(check_median_security(1..=8, TraceOracle::Faithful), "median_opt")?;
    match check_median_security(1..=8, TraceOracle::LeakAlice) {
        Verdict::Fail(why) if why.contains("secure for alice fails") => {}
        other => return Err(format!("negative control not caught: {other}")),
    }
    Ok("values 1..8, leaking oracle caught".into())
}

fn psi_security() -> Outcome {
    verdict(check_psi_security(3, &[1, 2, 3, 4, 5]), "psi")?;
    Ok("lengths <= 3, domain 1..5".into())
}

fn psi_counts() -> Outcome {
    let lists = distinct_lists(3, &[1, 2, 3, 4, 5]);
    for la in &lists {
        for lb in &lists {
            let (naive, opt) = psi_comparison_count(la, lb).map_err(|e| format!("{la:?} {lb:?}: {e}"))?;
            if naive != (la.len() * lb.len()) as u64 || opt > naive {
                return Err(format!("{la:?} {lb:?}: naive {naive}, optimised {opt}"));
            }
        }
    }
    for n in 0..=5 {
        let l: Vec<i64> = (1..=n).collect();
        let (naive, opt) = psi_comparison_count(&l, &l).map_err(|e| e.to_string())?;
        if naive != (n * n) as u64 || opt != n as u64 {
            return Err(format!("la = lb = {l:?}: naive {naive}, optimised {opt}"));
        }
    }
    Ok(format!("{} pairs", lists.len() * lists.len()))
}

/// Inputs of every program, enumerated over small domains that fit `width`.
fn exhaustive_cases() -> Vec<(Program, Env, u32)> {
    let mut out = Vec::new();
    let vals: Vec<i64> = (-8..8).collect();
    for &x1 in &vals {
        for &x2 in &vals {
            for &y1 in &vals {
                for &y2 in &vals {
                    let (a, b) = ((x1, x2), (y1, y2));
                    if median_pre(a, b) {
                        out.push((Program::Median, median_env(a, b), 4));
                        out.push((Program::MedianOpt, median_env(a, b), 4));
                    }
                }
            }
        }
    }
    let sets = distinct_lists(3, &[-8, -1, 0, 7]);
    for la in &sets {
        for lb in &sets {
            out.push((Program::Psi, sets_env(la, lb), 4));
            out.push((Program::PsiInterim, lists_env(la, lb), 4));
            out.push((Program::PsiOpt, lists_env(la, lb), 4));
        }
    }
    let cards: Vec<i64> = (0..8).collect();
    let mut st = streams(11);
    for h in distinct_lists(3, &cards) {
        let l = Value::List(h.iter().map(|&v| share_of(v, &mut st)).collect());
        for &s in &cards {
            let env: Env = [("l".into(), l.clone()), ("s".into(), share_of(s, &mut st))].into_iter().collect();
            out.push((Program::CheckFresh, env, 4));
        }
    }
    // The deck size does not fit in 4 bits.
    let history = Value::List([10, 20].iter().map(|&v| share_of(v, &mut st)).collect());
    for r1 in 0..8 {
        for r2 in 0..8 {
            for r3 in 0..8 {
                out.push((Program::Deal, deal_env(history.clone(), [r1, r2, r3]), 8));
            }
        }
    }
    out
}

fn deal_env(history: Value, rands: [i64; 3]) -> Env {
    let rands = Value::Map(["a", "b", "c"].into_iter().map(Principal::new).zip(rands.map(Value::Int)).collect());
    [("shares".into(), history), ("rands".into(), rands)].into_iter().collect()
}

fn distinct(rng: &mut ChaCha8Rng, pool: &[i64], max_len: usize) -> Vec<i64> {
    let n = rng.random_range(0..=max_len);
    let mut l = pool.to_vec();
    l.shuffle(rng);
    l.truncate(n);
    l
}

/// 100 random inputs per program over full-width values.
fn random_cases(seed: u64) -> Vec<(Program, Env)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let big = 1i64 << 30;
    for _ in 0..100 {
        let mut v: Vec<i64> = Vec::new();
        while v.len() < 4 {
            let x = rng.random_range(-big..big);
            if !v.contains(&x) {
                v.push(x);
            }
        }
        v.shuffle(&mut rng);
        let a = (v[0].min(v[1]), v[0].max(v[1]));
        let b = (v[2].min(v[3]), v[2].max(v[3]));
        out.push((Program::Median, median_env(a, b)));
        out.push((Program::MedianOpt, median_env(a, b)));

        let pool: Vec<i64> = (0..5).map(|_| rng.random_range(-big..big)).collect();
        let (la, lb) = (distinct(&mut rng, &pool, 3), distinct(&mut rng, &pool, 3));
        out.push((Program::Psi, sets_env(&la, &lb)));
        out.push((Program::PsiInterim, lists_env(&la, &lb)));
        out.push((Program::PsiOpt, lists_env(&la, &lb)));

        let deck: Vec<i64> = (0..52).collect();
        let mut st = streams(rng.random());
        let h = distinct(&mut rng, &deck, 4);
        let l = Value::List(h.iter().map(|&v| share_of(v, &mut st)).collect());
        let s = share_of(rng.random_range(0..52), &mut st);
        out.push((Program::CheckFresh, [("l".into(), l.clone()), ("s".into(), s)].into_iter().collect()));
        let rands = [0; 3].map(|_| rng.random_range(0..52));
        out.push((Program::Deal, deal_env(l, rands)));
    }
    out
}

fn backend_equivalence() -> Outcome {
    let dealer_seeds = |k: usize| -> Vec<u64> { (0..5).map(|i| (5 * k + i) as u64).collect() };
    let exhaustive = exhaustive_cases();
    for (k, (p, env, width)) in exhaustive.iter().enumerate() {
        verdict(gmw_matches_ideal(&p.expr(), env, &p.parties(), *width, &dealer_seeds(k)), &format!("{} at width {width} on {env:?}", p.name()))?;
    }
    let random = random_cases(2024);
    for (k, (p, env)) in random.iter().enumerate() {
        verdict(gmw_matches_ideal(&p.expr(), env, &p.parties(), 32, &dealer_seeds(k)), &format!("{} at width 32 on {env:?}", p.name()))?;
    }
    Ok(format!("{} enumerated, {} random at width 32", exhaustive.len(), random.len()))
}

fn two_input(op: &str, width: u32) -> Circuit {
    let e = parse_program(&format!("(ffi {op} (reveal x) (reveal y))")).unwrap();
    let sample = if op == "and" { Value::Bool(false) } else { Value::Int(0) };
    let env: Env = [
        ("x".to_string(), Value::sealed(PrinSet::of(&["a"]), sample.clone())),
        ("y".to_string(), Value::sealed(PrinSet::of(&["b"]), sample)),
    ]
    .into_iter()
    .collect();
    compile_sec_thunk(&env, &e, &PrinSet::of(&["a", "b"]), width).unwrap()
}

fn circuit_oracle() -> Outcome {
    let a = Principal::new("a");
    let b = Principal::new("b");
    let ops: [(&str, IntOp); 2] = [("gt", |x, y| x > y), ("eq", |x, y| x == y)];
    for (op, f) in ops {
        let c = two_input(op, 2);
        for x in -2..2 {
            for y in -2..2 {
                let ins = BTreeMap::from([(a.clone(), encode_int(x, 2)), (b.clone(), encode_int(y, 2))]);
                let got = c.eval(&ins).map_err(|e| e.to_string())?;
                if got[&a] != Value::Bool(f(x, y)) {
                    return Err(format!("{op} {x} {y} gave {}", got[&a]));
                }
            }
        }
    }
    let c = two_input("and", 8);
    for x in [false, true] {
        for y in [false, true] {
            for seed in 0..10 {
                let ins = BTreeMap::from([(a.clone(), vec![x]), (b.clone(), vec![y])]);
                let run = gmw_eval(&c, &ins, seed).map_err(|e| e.to_string())?;
                for p in [&a, &b] {
                    if run.outputs[p] != Value::Bool(x && y) {
                        return Err(format!("{x} and {y}, dealer seed {seed}: {p} got {}", run.outputs[p]));
                    }
                }
            }
        }
    }
    Ok("16 pairs x 2 ops, 4 AND inputs x 10 seeds".into())
}

fn cards() -> Outcome {
    verdict(check_cards(4, &(0..8).collect::<Vec<_>>(), &[0, 1, 2, 3, 4]), "cards")?;
    Ok("histories <= 4 over 0..7, 5 full deals".into())
}

fn slice_combine() -> Outcome {
    let abc = PrinSet::of(&["a", "b", "c"]);
    let config = PtConfig {
        cases: 10_000,
        max_global_rejects: 200_000,
        failure_persistence: None,
        ..PtConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(config.clone(), proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm));
    runner
        .run(&common::value(), |v| {
            for p in abc.iter() {
                let once = wysx_core::lang::slice_v(p, &v);
                if wysx_core::lang::slice_v(p, &once) != once {
                    return Err(TestCaseError::fail(format!("slice {p} not idempotent on {v}")));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let mut runner = TestRunner::new_with_rng(config.clone(), proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm));
    runner
        .run(&(common::value(), 1usize..=3), |(v, k)| {
            let s: PrinSet = abc.iter().take(k).cloned().collect();
            if !common::round_trippable(&v, &s) {
                return Err(TestCaseError::reject("not visible to the parties"));
            }
            let views: Vec<Value> = s.iter().map(|p| wysx_core::lang::slice_v(p, &v)).collect();
            match combine_all(&views) {
                Ok(w) if w == v => Ok(()),
                other => Err(TestCaseError::fail(format!("combine of slices of {v} gave {other:?}"))),
            }
        })
        .map_err(|e| e.to_string())?;
    Ok("10000 values per property".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("simulation", 60, simulation),
        ("confluence", 120, confluence),
        ("median correctness", 30, median_correctness),
        ("delimited release", 60, delimited_release),
        ("psi security", 120, psi_security),
        ("psi comparison counts", 10, psi_counts),
        ("backend equivalence", 120, backend_equivalence),
        ("circuit oracle", 5, circuit_oracle),
        ("card dealing", 60, cards),
        ("slice/combine algebra", 10, slice_combine),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let took = t.elapsed();
        let r = match r {
            Ok(detail) if took > Duration::from_secs(limit) => Err(format!("{detail}, over the {limit}s limit")),
            other => other,
        };
        let secs = took.as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.2}s < {limit}s; {detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.2}s; {why})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
