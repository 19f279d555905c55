//! Library side of the drasim CLI: experiment documents, built-in presets,
//! and the command implementations. The binary in `main.rs` is a thin
//! argument-parsing shell over [`commands`].

pub mod commands;
pub mod doc;
pub mod presets;
