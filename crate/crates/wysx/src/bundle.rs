//! Per-party input files and the program loader.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value as Json;
use wysx_core::apps::Program;
use wysx_core::ds::sliced_inputs;
use wysx_core::lang::{combine_all, slice_v, Env, Expr, PrinSet, Principal};
use wysx_core::syntax::parse_program;

use crate::json::from_json;

/// One `p=FILE` argument; the file is optional for parties without inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputArg {
    pub party: Principal,
    pub file: Option<PathBuf>,
}

impl std::str::FromStr for InputArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (p, file) = match s.split_once('=') {
            Some((p, f)) => (p, Some(PathBuf::from(f))),
            None => (s, None),
        };
        if p.is_empty() || p.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(format!("bad principal name `{p}`"));
        }
        Ok(InputArg {
            party: Principal::new(p),
            file,
        })
    }
}

/// The joint input environment of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inputs {
    pub parties: PrinSet,
    pub logical: Env,
}

impl Inputs {
    /// What each party starts with.
    pub fn views(&self) -> BTreeMap<Principal, Env> {
        sliced_inputs(&self.logical, &self.parties)
    }
}

/// Reads a JSON object of variable bindings.
pub fn read_env(path: &Path) -> Result<Env> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_env(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_env(text: &str) -> Result<Env> {
    let j: Json = serde_json::from_str(text)?;
    let Json::Object(o) = j else {
        bail!(crate::json::FormatError::NotAnObject(j.to_string()));
    };
    o.iter()
        .map(|(x, v)| Ok((x.clone(), from_json(v).with_context(|| format!("variable `{x}`"))?)))
        .collect()
}

/// Merges the parties' files into one environment. Each file is first cut
/// down to what its party may see, so a party can only supply the contents
/// of seals naming it.
pub fn merge(files: &BTreeMap<Principal, Env>) -> Result<Env> {
    let mut views: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for (p, env) in files {
        for (x, v) in env.iter() {
            views.entry(x.clone()).or_default().push(slice_v(p, v));
        }
    }
    views
        .into_iter()
        .map(|(x, vs)| {
            let v = combine_all(&vs).map_err(|e| anyhow!("parties disagree on `{x}`: {e}"))?;
            Ok((x, v))
        })
        .collect()
}

pub fn load_inputs(args: &[InputArg]) -> Result<Inputs> {
    if args.is_empty() {
        bail!("no parties given (use --inputs p=FILE ...)");
    }
    let mut files = BTreeMap::new();
    for a in args {
        let env = match &a.file {
            Some(f) => read_env(f)?,
            None => Env::new(),
        };
        if files.insert(a.party.clone(), env).is_some() {
            bail!("party {} given twice", a.party);
        }
    }
    Ok(Inputs {
        parties: files.keys().cloned().collect(),
        logical: merge(&files)?,
    })
}

/// Reads a program from a file, falling back to the bundled programs by
/// name (`median`, `psi_opt`, ...).
pub fn load_program(arg: &str) -> Result<Expr> {
    let path = Path::new(arg);
    let text = if path.exists() {
        fs::read_to_string(path).with_context(|| format!("reading {arg}"))?
    } else if let Some(p) = Program::from_name(arg) {
        p.source().to_string()
    } else {
        bail!("no such program file `{arg}`");
    };
    parse_program(&text).map_err(|e| anyhow!("{arg}:{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wysx_core::lang::Value;

    fn env(text: &str) -> Env {
        parse_env(text).unwrap()
    }

    #[test]
    fn merging_reconstructs_the_joint_env() {
        let a = env(r#"{"in_a": {"sealed": {"ps": ["a"], "v": {"tuple": [1, 3]}}}, "n": 2}"#);
        let b = env(r#"{"in_b": {"sealed": {"ps": ["b"], "v": {"tuple": [2, 4]}}}, "n": 2}"#);
        let files = [(Principal::new("a"), a), (Principal::new("b"), b)].into_iter().collect();
        let joint = merge(&files).unwrap();
        let pair = Value::Tuple(vec![Value::Int(2), Value::Int(4)]);
        assert_eq!(joint.get("in_b"), Some(&Value::sealed(PrinSet::of(&["b"]), pair)));
        assert_eq!(joint.get("n"), Some(&Value::Int(2)));
    }

    #[test]
    fn parties_cannot_fill_in_foreign_seals() {
        let a = env(r#"{"x": {"sealed": {"ps": ["b"], "v": 5}}}"#);
        let files = [(Principal::new("a"), a)].into_iter().collect();
        assert_eq!(merge(&files).unwrap().get("x"), Some(&Value::sealed(PrinSet::of(&["b"]), Value::Opaque)));
    }

    #[test]
    fn disagreement_is_an_error() {
        let a = env(r#"{"n": 1}"#);
        let b = env(r#"{"n": 2}"#);
        let files = [(Principal::new("a"), a), (Principal::new("b"), b)].into_iter().collect();
        assert!(merge(&files).is_err());
    }

    #[test]
    fn input_args() {
        let a: InputArg = "a=x.json".parse().unwrap();
        assert_eq!(a.file.as_deref(), Some(Path::new("x.json")));
        assert_eq!("c".parse::<InputArg>().unwrap().file, None);
        assert!("=x".parse::<InputArg>().is_err());
    }
}
