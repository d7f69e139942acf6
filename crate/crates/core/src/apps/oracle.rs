//! Reference functions for the applications, written directly over
//! integers and lists.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::lang::{PrinSet, Trace, TraceElt, Value};

/// Both pairs ascending and all four numbers distinct.
pub fn median_pre(a: (i64, i64), b: (i64, i64)) -> bool {
    let all = [a.0, a.1, b.0, b.1];
    a.0 < a.1 && b.0 < b.1 && (0..4).all(|i| (i + 1..4).all(|j| all[i] != all[j]))
}

/// Second smallest of the four numbers.
pub fn median_of(a: (i64, i64), b: (i64, i64)) -> i64 {
    let mut all = [a.0, a.1, b.0, b.1];
    all.sort_unstable();
    all[1]
}

/// Observable trace of the single-block median.
pub fn median_trace(m: i64) -> Trace {
    vec![TraceElt::Msg(Value::Int(m))]
}

/// Observable trace of the median with local culling: the first comparison,
/// the two empty local scopes, the result.
pub fn opt_trace(a: (i64, i64), b: (i64, i64), m: i64) -> Trace {
    vec![
        TraceElt::Msg(Value::Bool(a.0 > b.0)),
        TraceElt::Scope(PrinSet::of(&["a"]), Vec::new()),
        TraceElt::Scope(PrinSet::of(&["b"]), Vec::new()),
        TraceElt::Msg(Value::Int(m)),
    ]
}

/// Elements of `xs` that occur in `ys`, in `xs` order.
pub fn intersection(xs: &[i64], ys: &[i64]) -> Vec<i64> {
    xs.iter().copied().filter(|x| ys.contains(x)).collect()
}

pub fn intersection_set(xs: &[i64], ys: &[i64]) -> BTreeSet<i64> {
    intersection(xs, ys).into_iter().collect()
}

/// Comparison results of the nested loop over all pairs, Alice's elements
/// outermost.
pub fn trace_psi(la: &[i64], lb: &[i64]) -> Vec<bool> {
    la.iter().flat_map(|x| lb.iter().map(move |y| x == y)).collect()
}

/// Comparison results of the loop that stops at the first match of each of
/// Alice's elements and drops the matched element of Bob's.
pub fn trace_psi_opt(la: &[i64], lb: &[i64]) -> Vec<bool> {
    let mut rest: Vec<i64> = lb.to_vec();
    let mut out = Vec::new();
    for x in la {
        if let Some(pos) = rest.iter().position(|y| {
            out.push(x == y);
            x == y
        }) {
            rest.remove(pos);
        }
    }
    out
}

/// Rebuilds the optimised comparison sequence from the lengths and the
/// full comparison matrix.
pub fn refine(len_a: usize, len_b: usize, full: &[bool]) -> Vec<bool> {
    let mut rest: Vec<usize> = (0..len_b).collect();
    let mut out = Vec::new();
    for i in 0..len_a {
        let mut hit = None;
        for (k, &j) in rest.iter().enumerate() {
            let b = full[i * len_b + j];
            out.push(b);
            if b {
                hit = Some(k);
                break;
            }
        }
        if let Some(k) = hit {
            rest.remove(k);
        }
    }
    out
}

/// Observable trace of the nested-loop intersections given their
/// comparison results.
pub fn psi_loop_trace(bits: &[bool]) -> Trace {
    let mut inner: Trace = bits.iter().map(|&b| TraceElt::Msg(Value::Bool(b))).collect();
    inner.push(TraceElt::Scope(PrinSet::of(&["a"]), Vec::new()));
    inner.push(TraceElt::Scope(PrinSet::of(&["b"]), Vec::new()));
    vec![TraceElt::Scope(PrinSet::of(&["a", "b"]), inner)]
}

/// Same elements with the same multiplicities.
pub fn is_permutation<T: Ord + Clone>(xs: &[T], ys: &[T]) -> bool {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort();
    b.sort();
    a == b
}

/// Number of secure comparisons: all pairs, and the optimised loop.
pub fn comparison_counts(la: &[i64], lb: &[i64]) -> (u64, u64) {
    ((la.len() * lb.len()) as u64, trace_psi_opt(la, lb).len() as u64)
}

/// `s` differs from every card in `l`.
pub fn fresh(l: &[i64], s: i64) -> bool {
    l.iter().all(|&x| x != s)
}

/// Sum of the three randoms reduced by 52 up to three times.
pub fn card_of(randoms: &[i64]) -> i64 {
    let mut c: i64 = randoms.iter().sum();
    for _ in 0..3 {
        if c >= 52 {
            c -= 52;
        }
    }
    c
}

/// Duplicate-free lists of length at most `max_len` over `domain`.
pub fn distinct_lists(max_len: usize, domain: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for l in &frontier {
            for &x in domain {
                if !l.contains(&x) {
                    let mut m: Vec<i64> = l.clone();
                    m.push(x);
                    next.push(m);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
