//! Artifact histories, trustworthiness levels and identity criteria for AI
//! systems.
//!
//! A system's history is a ledger of lifecycle events (deployment, capability
//! measurements, retraining, profile changes). From it the engine derives the
//! trust profile in force and the trustworthiness level τ at any time, and
//! decides whether two system states are the same individual of a kind.

pub mod decimal;
pub mod dsl;
pub mod exec;
pub mod identity;
pub mod ledger;
pub mod model;
pub mod scenario;
pub mod tau;

#[cfg(test)]
mod testutil;

pub use decimal::Decimal;
pub use dsl::{parse_contract, parse_ladder, render_contract, render_ladder, DslError, ParseError};
pub use exec::Execution;
pub use identity::{
    check_diachronic_pointwise, check_general_identity, check_persistence_path, check_synchronic,
    partition_fleet, partition_fleet_with, persistence_segments, tolerance_relation, Exclusion,
    FleetPartition, PersistenceSegment,
};
pub use ledger::{
    append_event, load, save, LedgerError, LedgerFile, Record, RecordBody, SystemDescriptor,
};
pub use model::*;
pub use scenario::{builtin_scenarios, run_scenario, Scenario, ScenarioReport};
pub use tau::{
    capability_value_at, contract_satisfied, tau_at, tau_trajectory, TauPiece, TauTrajectory,
};
