//! Seeded instance families built from TSPLIB coordinate samples.

mod family;
mod pairs;
mod rng;
mod tsplib;

pub use family::{
    generate_family, generate_instance, make_fleet, make_requests, requests_for, GenError,
    GeneratedInstance, GenerationOptions, GenerationParams, InstanceFamily, DEFAULT_AVG_VOLUME,
    TRUCK_TYPES,
};
pub use pairs::{
    expand_counts, pair_nodes, repetition_counts, sort_pairs, PairFamily, PairingError, SortMode,
    DEFAULT_MAX_RESHUFFLES,
};
pub use rng::{round_half_up, GenRng};
pub use tsplib::{parse_tsplib, TsplibError, TsplibSample};
