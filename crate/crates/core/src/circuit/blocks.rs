use alloc::vec::Vec;

use crate::gmw::ShareStreams;
use crate::lang::{Config, Control, Env, Expr, PrinSet, Value};
use crate::st::{run_config_with, RunError};

/// A secure block reached by a single-threaded run, with the configuration
/// it started from and the value it produced.
#[derive(Clone, Debug)]
pub struct SecBlock {
    pub parties: PrinSet,
    pub env: Env,
    pub body: Expr,
    pub shares: ShareStreams,
    pub result: Value,
}

/// Runs `e` single-threaded and records each secure block entered.
pub fn sec_blocks(e: &Expr, env: &Env, ps: &PrinSet, fuel: u64) -> Result<Vec<SecBlock>, RunError> {
    let mut open: Option<(PrinSet, Env, Expr, ShareStreams)> = None;
    let mut done = Vec::new();
    let cfg = Config::initial(ps.clone(), env.clone(), e.clone());
    run_config_with(cfg, fuel, |rule, cfg| match rule {
        "S-assec" => {
            if let Control::Expr(body) = &cfg.control {
                open = Some((cfg.mode.ps.clone(), cfg.env.clone(), (**body).clone(), cfg.shares.clone()));
            }
        }
        "S-secret" => {
            if let (Some((parties, env, body, shares)), Some(v)) = (open.take(), cfg.value()) {
                done.push(SecBlock {
                    parties,
                    env,
                    body,
                    shares,
                    result: v.clone(),
                });
            }
        }
        _ => {}
    })?;
    Ok(done)
}
