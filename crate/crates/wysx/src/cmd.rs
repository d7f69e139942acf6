//! The subcommands, independent of argument parsing.

use std::fmt::Write;
use std::ops::RangeInclusive;

use anyhow::{bail, Result};
use serde_json::{json, Map};
use wysx_core::apps::cards::check_cards;
use wysx_core::apps::median::{check_median_correctness, check_median_security, TraceOracle};
use wysx_core::apps::psi::check_psi_security;
use wysx_core::apps::gmw_matches_ideal;
use wysx_core::circuit::{compile_sec_thunk, sec_blocks};
use wysx_core::ds::{check_confluence, check_simulation, ds_run, GmwConfig, Schedule, SecBackend, Verdict};
use wysx_core::lang::Expr;
use wysx_core::st::st_run;

use crate::bundle::Inputs;
use crate::json::{to_json, trace_to_json};

/// What a command printed and whether it succeeded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub ok: bool,
    pub text: String,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { ok: true, text }
    }

    fn failed(text: String) -> Self {
        Report { ok: false, text }
    }

    fn verdict(v: Verdict) -> Self {
        Report {
            ok: v.is_pass(),
            text: v.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    St,
    Ds,
}

pub fn parse_schedule(s: &str) -> Result<Schedule, String> {
    match s {
        "rr" => Ok(Schedule::RoundRobin),
        _ => s
            .strip_prefix("rand:")
            .and_then(|n| n.parse().ok())
            .map(Schedule::SeededRandom)
            .ok_or_else(|| format!("expected `rr` or `rand:SEED`, found `{s}`")),
    }
}

pub fn run(e: &Expr, inputs: &Inputs, mode: RunMode, sched: Schedule, backend: &SecBackend, fuel: u64) -> Report {
    match mode {
        RunMode::St => match st_run(e, &inputs.logical, &inputs.parties, fuel) {
            Ok((v, t)) => Report::ok(json!({ "value": to_json(&v), "trace": trace_to_json(&t) }).to_string()),
            Err(err) => Report::failed(format!("error: {err}")),
        },
        RunMode::Ds => match ds_run(e, &inputs.views(), sched, backend, fuel) {
            Ok(r) => {
                let out: Map<_, _> = r
                    .results()
                    .iter()
                    .map(|(p, (v, t))| (p.name().to_string(), json!({ "value": to_json(v), "trace": trace_to_json(t) })))
                    .collect();
                Report::ok(serde_json::Value::Object(out).to_string())
            }
            Err(err) => Report::failed(format!("error: {err}")),
        },
    }
}

pub fn check_sim(e: &Expr, inputs: &Inputs, fuel: u64) -> Report {
    Report::verdict(check_simulation(e, &inputs.logical, &inputs.parties, fuel))
}

pub fn check_conf(e: &Expr, inputs: &Inputs, seeds: u64, backend: &SecBackend, fuel: u64) -> Report {
    let seeds: Vec<u64> = (0..seeds).collect();
    Report::verdict(check_confluence(e, &inputs.logical, &inputs.parties, &seeds, backend, fuel))
}

pub fn check_backend(e: &Expr, inputs: &Inputs, width: u32, seeds: u64) -> Report {
    let seeds: Vec<u64> = (0..seeds).collect();
    Report::verdict(gmw_matches_ideal(e, &inputs.logical, &inputs.parties, width, &seeds))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Median,
    Psi,
    Cards,
}

/// `domain` is the largest value; median and psi draw from `1..=domain`,
/// cards from `0..domain`.
pub fn check_security(suite: Suite, domain: i64, max_len: usize, seeds: u64) -> Result<Report> {
    if domain < 1 {
        bail!("--domain must be positive");
    }
    let range: RangeInclusive<i64> = 1..=domain;
    Ok(match suite {
        Suite::Median => {
            let v = check_median_correctness(range.clone());
            if !v.is_pass() {
                return Ok(Report::verdict(v));
            }
            Report::verdict(check_median_security(range, TraceOracle::Faithful))
        }
        Suite::Psi => Report::verdict(check_psi_security(max_len, &range.collect::<Vec<_>>())),
        Suite::Cards => {
            let seeds: Vec<u64> = (0..seeds).collect();
            Report::verdict(check_cards(max_len, &(0..domain).collect::<Vec<_>>(), &seeds))
        }
    })
}

/// Compiles every secure block the program enters on these inputs.
pub fn dump_circuit(e: &Expr, inputs: &Inputs, width: u32, fuel: u64) -> Report {
    let blocks = match sec_blocks(e, &inputs.logical, &inputs.parties, fuel) {
        Ok(b) => b,
        Err(err) => return Report::failed(format!("error: {err}")),
    };
    let mut out = String::new();
    let mut ok = true;
    for (i, b) in blocks.iter().enumerate() {
        let _ = writeln!(out, "# block {i}");
        match compile_sec_thunk(&b.env, &b.body, &b.parties, width) {
            Ok(c) => out.push_str(&c.dump()),
            Err(err) => {
                ok = false;
                let _ = writeln!(out, "# error: {err}");
            }
        }
    }
    Report { ok, text: out }
}

pub fn backend(name: &str, width: u32, dealer_seed: u64) -> SecBackend {
    match name {
        "gmw" => SecBackend::Gmw(GmwConfig { width, dealer_seed }),
        _ => SecBackend::Ideal,
    }
}
