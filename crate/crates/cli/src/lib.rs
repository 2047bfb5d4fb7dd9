//! File formats and command implementations behind the `phfluid` binary.

pub mod commands;
pub mod hexfloat;
pub mod output;
pub mod snapshot;
