use alloc::collections::btree_map::{self, BTreeMap};
use alloc::sync::Arc;

use super::{Value, Var};

/// A lexical environment. Extension produces a new environment; the old one
/// is untouched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env(Arc<BTreeMap<Var, Value>>);

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn get(&self, x: &str) -> Option<&Value> {
        self.0.get(x)
    }

    /// `L[x ↦ v]`
    pub fn extend(&self, x: impl Into<Var>, v: Value) -> Env {
        let mut map = self.0.clone();
        Arc::make_mut(&mut map).insert(x.into(), v);
        Env(map)
    }

    pub fn insert(&mut self, x: impl Into<Var>, v: Value) {
        Arc::make_mut(&mut self.0).insert(x.into(), v);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Var, Value> {
        self.0.iter()
    }

    pub fn map_values(&self, mut f: impl FnMut(&Value) -> Value) -> Env {
        Env(Arc::new(self.0.iter().map(|(k, v)| (k.clone(), f(v))).collect()))
    }
}

impl FromIterator<(Var, Value)> for Env {
    fn from_iter<I: IntoIterator<Item = (Var, Value)>>(iter: I) -> Self {
        Env(Arc::new(iter.into_iter().collect()))
    }
}
