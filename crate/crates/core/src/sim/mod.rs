//! Monte Carlo evaluation on sampled Poisson networks with explicit
//! shadowing and fading.

pub mod drop;
pub mod estimate;
pub mod record;
pub(crate) mod rng;
pub mod topology;

pub use drop::{evaluate_drop, DropResult, MitigationConfig, Scheme};
pub use estimate::{
    default_region_radius, drop_seed, estimate_coverage, estimate_mode_fraction, simulate, simulate_drop,
    summarize, SimSettings, MIN_DROPS,
};
pub use record::{format_record, parse_record, read_records, write_records, RecordError};
pub use topology::{associate, sample_topology, Association, Sbs, Topology};
