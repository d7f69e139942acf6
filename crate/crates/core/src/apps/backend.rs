use alloc::format;

use crate::circuit::{compile_sec_thunk, party_inputs, sec_blocks};
use crate::ds::Verdict;
use crate::gmw::gmw_eval;
use crate::lang::{slice_v, Env, Expr, PrinSet};

/// Every secure block `e` reaches on `env` gives each party under GMW, at
/// `width` bits and for each dealer seed, the output the ideal execution
/// gives it.
pub fn gmw_matches_ideal(e: &Expr, env: &Env, ps: &PrinSet, width: u32, dealer_seeds: &[u64]) -> Verdict {
    let blocks = match sec_blocks(e, env, ps, crate::st::DEFAULT_FUEL) {
        Ok(b) => b,
        Err(err) => return Verdict::Inconclusive(format!("{err}")),
    };
    for (i, b) in blocks.iter().enumerate() {
        let c = match compile_sec_thunk(&b.env, &b.body, &b.parties, width) {
            Ok(c) => c,
            Err(err) => return Verdict::Fail(format!("block {i}: {err}")),
        };
        let inputs = match party_inputs(&c, &b.env, &b.shares) {
            Ok(x) => x,
            Err(err) => return Verdict::Fail(format!("block {i}: {err}")),
        };
        for &seed in dealer_seeds {
            let out = match gmw_eval(&c, &inputs, seed) {
                Ok(run) => run.outputs,
                Err(err) => return Verdict::Fail(format!("block {i}, dealer seed {seed}: {err}")),
            };
            for p in &b.parties {
                let want = slice_v(p, &b.result);
                if out.get(p) != Some(&want) {
                    return Verdict::Fail(format!(
                        "block {i}, dealer seed {seed}: {p} got {:?}, ideal {want}",
                        out.get(p)
                    ));
                }
            }
        }
    }
    Verdict::Pass
}
