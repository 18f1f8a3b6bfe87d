//! Front-end plumbing behind the `gravem` binary: run configuration, the `simulate` driver,
//! CSV decay fits and binary snapshots.

pub mod config;
pub mod decay_fit;
pub mod simulate;
pub mod snapshot;
