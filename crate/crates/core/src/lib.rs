//! Deterministic floorplan compliance engine.
//!
//! Evaluates rasterized residential layouts against four residential-code
//! gates (energy use intensity, fire-egress distance, floor area, functional
//! connectivity), synthesizes and mutates plans, and repairs non-compliant
//! corpora by reward-guided resampling.

pub mod egress;
pub mod energy;
pub mod gate;
pub mod ged;
pub mod generator;
pub mod metrics;
pub mod optimizer;
pub mod pipeline;
pub mod plan;
pub mod rng;
pub mod topology;

pub use gate::ENGINE_VERSION;
pub use topology::RULES_VERSION;

/// `.fpgrid` codec version.
pub const FORMAT_VERSION: &str = "fpgrid-1";
