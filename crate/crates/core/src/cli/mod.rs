//! Batch front end: configuration files, the synthetic page generator and
//! the `segment`, `separate`, `eval` and `synth` commands.

pub mod commands;
pub mod config;
pub mod synth;

pub use commands::{
    cmd_eval, cmd_segment, cmd_separate, cmd_synth, draw_overlay, evaluate_dirs, segment_outputs,
    SegmentOutputs,
};
pub use config::{format_config, load_config, parse_config};
pub use synth::{format_synth_spec, generate, load_synth_spec, parse_synth_spec, SynthPage, SynthSpec};
