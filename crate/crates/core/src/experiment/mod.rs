//! Configuration, reproducible experiment runs, and CSV exports.

mod config;
mod export;
mod runs;

pub use config::{load_config, parse_config, ExperimentKind, GridConfig, RunConfig, SCHEMA_VERSION};
pub use export::{
    export_policy_grids, read_policy_grid, stats_header, stats_row, write_episode_logs, write_mission,
    write_stats, PolicyRow, EPISODE_HEADER, MISSION_HEADER, POLICY_HEADER,
};
pub use runs::{
    exp2_cells, run_experiment1, run_experiment2, run_simulate, run_solve, with_workers, Condition,
    Exp1Output, Exp2Cell, Exp2Output, WORKERS_ENV,
};
