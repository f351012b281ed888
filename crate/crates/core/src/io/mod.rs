//! Run configuration, binary snapshots and CSV artifacts.

mod config;
mod csv;
mod snapshot;

pub use config::{parse_config, InitialSpec, OutputSpec, RunConfig};
pub use csv::{read_energy_csv, write_decay_csv, write_energy_csv, DECAY_HEADER, ENERGY_HEADER};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_VERSION, SOLENOIDAL_TOL};
