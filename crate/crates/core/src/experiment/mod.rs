//! Experiment presets and the generate / train / eval / sweep-bound
//! commands.
//!
//! Every command works on an output directory with one `seed-<s>`
//! subdirectory per seed. Generated datasets are listed with their sha256 in
//! a per-seed `manifest.json`, and every JSON or CSV output carries the
//! digest of the resolved config, so later stages can refuse stale inputs.
//! Wall-clock timings go to separate `*.timing.json` files, which are the
//! only outputs that differ between identical reruns.

mod commands;
mod config;
mod data;
mod presets;

pub use commands::{
    evaluate, generate, load_generated, load_trained, read_manifest, reproducible_files, sweep_bound,
    train, BoundSummary, EvalSummary, Manifest, Method, RunOptions, SeedBound, SeedMetrics, Stat,
    TestMetrics, TestSummary, Timing, TrainReport,
};
pub use config::{load_config, merge_json, resolve_config, BoundSpec, ExperimentConfig, FamilySpec, FuzzyPool};
pub use data::{dataset_names, generate_seed, test_names, SeedData};
pub use presets::{preset, PRESET_EXAMPLES};
