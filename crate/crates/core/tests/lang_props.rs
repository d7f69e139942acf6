mod common;

use proptest::prelude::*;
use wysx_core::lang::{combine_all, combine_v, slice_tr, slice_v, PrinSet, Principal, TraceElt, Value};
use wysx_core::syntax::{parse_program, print_expr};

fn abc() -> PrinSet {
    PrinSet::of(&["a", "b", "c"])
}

fn has_scope(t: &[TraceElt]) -> bool {
    t.iter().any(|e| matches!(e, TraceElt::Scope(..)))
}

fn trace() -> impl Strategy<Value = Vec<TraceElt>> {
    let msg = common::value().prop_map(TraceElt::Msg);
    let elt = msg.prop_recursive(2, 12, 3, |inner| {
        prop_oneof![
            common::value().prop_map(TraceElt::Msg),
            (proptest::sample::subsequence(vec!["a", "b", "c"], 1..=3), proptest::collection::vec(inner, 0..3))
                .prop_map(|(s, t)| TraceElt::Scope(PrinSet::of(&s), t)),
        ]
    });
    proptest::collection::vec(elt, 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, max_global_rejects: 200_000, ..ProptestConfig::default() })]

    #[test]
    fn slice_idempotent(v in common::value()) {
        for p in abc().iter() {
            let once = slice_v(p, &v);
            prop_assert_eq!(slice_v(p, &once), once);
        }
    }

    #[test]
    fn combine_of_slices_round_trips(v in common::value(), k in 1usize..=3) {
        let s: PrinSet = abc().iter().take(k).cloned().collect();
        prop_assume!(common::round_trippable(&v, &s));
        let views: Vec<Value> = s.iter().map(|p| slice_v(p, &v)).collect();
        prop_assert_eq!(combine_all(&views).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn combine_commutes_and_associates(v in common::value()) {
        let [x, y, z] = ["a", "b", "c"].map(|p| slice_v(&Principal::new(p), &v));
        prop_assert_eq!(combine_v(&x, &y), combine_v(&y, &x));
        let left = combine_v(&x, &y).and_then(|xy| combine_v(&xy, &z));
        let right = combine_v(&y, &z).and_then(|yz| combine_v(&x, &yz));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sliced_traces_are_flat(t in trace()) {
        for p in abc().iter() {
            prop_assert!(!has_scope(&slice_tr(p, &t)));
        }
    }

    #[test]
    fn print_then_parse(seed in any::<u64>()) {
        let (e, _, _) = common::random_program(seed);
        prop_assert_eq!(parse_program(&print_expr(&e)).unwrap(), e);
    }
}

#[test]
fn slice_examples() {
    let a = Principal::new("a");
    let sb = Value::sealed(PrinSet::of(&["b"]), Value::Int(7));
    assert_eq!(slice_v(&a, &sb), Value::sealed(PrinSet::of(&["b"]), Value::Opaque));
    let sab = Value::sealed(PrinSet::of(&["a", "b"]), Value::Int(7));
    assert_eq!(slice_v(&a, &sab), sab);
    assert_eq!(slice_v(&a, &Value::Int(42)), Value::Int(42));
    let t = vec![TraceElt::Scope(PrinSet::of(&["b"]), vec![TraceElt::Msg(Value::Int(1))])];
    assert!(slice_tr(&a, &t).is_empty());
    let t = vec![TraceElt::Scope(PrinSet::of(&["a"]), vec![TraceElt::Msg(Value::Int(2))])];
    assert_eq!(slice_tr(&a, &t), vec![TraceElt::Msg(Value::Int(2))]);
}

#[test]
fn combine_examples() {
    let s5 = Value::sealed(PrinSet::of(&["a"]), Value::Int(5));
    assert_eq!(combine_v(&Value::Opaque, &s5).unwrap(), s5);
    let so = Value::sealed(PrinSet::of(&["a"]), Value::Opaque);
    assert_eq!(combine_v(&s5, &so).unwrap(), s5);
    assert!(combine_v(&Value::Int(1), &Value::Int(2)).is_err());
}
