//! Running a secure block under GMW.

use alloc::collections::BTreeMap;
use alloc::string::ToString;

use crate::circuit::{assign_inputs, compile_sec_thunk};
use crate::gmw::gmw_eval;
use crate::lang::{Control, PrinSet, SecEntry};

use super::DsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GmwConfig {
    /// Integer width in bits.
    pub width: u32,
    pub dealer_seed: u64,
}

impl Default for GmwConfig {
    fn default() -> Self {
        GmwConfig {
            width: 32,
            dealer_seed: 0,
        }
    }
}

/// Compiles the block's body from the shape of its environment, lets each
/// member supply its inputs from its own view, and evaluates the circuit in
/// one go.
pub(crate) fn run_gmw(entry: &mut SecEntry, s: &PrinSet, cfg: &GmwConfig) -> Result<(), DsError> {
    let backend = |e: &dyn ToString| DsError::Backend(e.to_string());
    let Control::Expr(body) = &entry.config.control else {
        return Err(DsError::Backend("block already evaluated".into()));
    };
    let c = compile_sec_thunk(&entry.config.env, body, s, cfg.width).map_err(|e| backend(&e))?;
    let mut inputs = BTreeMap::new();
    for p in s {
        let env = entry
            .locals
            .get(p)
            .ok_or_else(|| DsError::Backend(alloc::format!("no view of {p}")))?;
        let bits = assign_inputs(&c, p, env, &entry.config.shares.get(p)).map_err(|e| backend(&e))?;
        inputs.insert(p.clone(), bits);
    }
    let run = gmw_eval(&c, &inputs, cfg.dealer_seed).map_err(|e| backend(&e))?;
    for p in s {
        entry.config.shares.advance(p, c.mk_sh_count);
    }
    entry.outputs = Some(run.outputs);
    Ok(())
}
