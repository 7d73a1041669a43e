//! Affective-polarization cascade model.
//!
//! Two parties of agents each hold a binary choice and update it by weighing
//! agreement with their own party (in-group love `alpha`) against opposition
//! to the other party (out-group hate `beta`). The crate provides the agent
//! engine on explicit networks, the deterministic mean-field limit, analytic
//! regime classification and parameter sweeps.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod graph;
pub mod meanfield;
pub mod model;
pub mod scenario;
pub mod seed;
pub mod sim;
pub mod sweep;
pub mod trajectory;

pub use error::{Error, Result};
pub use graph::{generate_complete, generate_sbm, homophily_estimate, load_network, save_network, Network, Party};
pub use meanfield::{
    find_stationary, integrate, stability_probe, sup_distance, IntegrationConfig, Stability, StationaryReport,
};
pub use model::{
    classify_regime, consensus_reachable, drift, effective_couplings, predict_limit_symmetric, tipping_boundaries,
    ModelParams, PopulationState, Regime, Topology,
};
pub use sim::{run_ensemble, InitMode, Simulation};
pub use trajectory::{Trajectory, TrajectoryMeta};
