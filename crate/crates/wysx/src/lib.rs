//! File formats and the command-line driver for `wysx-core`.

pub mod bundle;
pub mod cmd;
pub mod json;
