//! Metric vector assembly and the four-threshold compliance gate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::egress::{self, EgressError};
use crate::energy::{self, ClimateTable, EnergyError, EnergyParams, EnergyProfile, PROFILE_LEN};
use crate::plan::Floorplan;
use crate::topology::{self, ConnectivityScore, TopologyError, RULES_VERSION};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Plan(#[from] crate::plan::PlanError),
    #[error(transparent)]
    Egress(#[from] EgressError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
}

/// The 63-dim evaluated quantity vector [E(60), F, A, G] plus the derived EUI
/// scalar and the accessibility flag the fire gate needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    /// Energy profile, flattened month-major (60 entries, kWh).
    pub e: Vec<f64>,
    /// Fire-egress distance, m.
    pub f: f64,
    /// Floor area, m^2.
    pub a: f64,
    /// Connectivity score in [0,1].
    pub g: f64,
    /// Derived convenience scalar, kWh/m^2*yr; not part of the 63-vector.
    pub eui: f64,
    /// Count of walkable cells unreachable from the entrance.
    pub unreachable_cells: usize,
}

impl MetricVector {
    pub fn flatten(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(PROFILE_LEN + 3);
        v.extend_from_slice(&self.e);
        v.push(self.f);
        v.push(self.a);
        v.push(self.g);
        v
    }

    pub fn profile(&self) -> EnergyProfile {
        let mut flat = [0.0; PROFILE_LEN];
        flat.copy_from_slice(&self.e);
        EnergyProfile::from_flat(&flat)
    }
}

/// Result of one full evaluation, keeping the per-rule detail around for
/// reporting.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub metrics: MetricVector,
    pub connectivity: ConnectivityScore,
}

pub fn evaluate(
    plan: &Floorplan,
    params: &EnergyParams,
    climate: &ClimateTable,
) -> Result<Evaluation, EvalError> {
    let egress = egress::egress_distance(plan)?;
    let graph = topology::build_adjacency(plan)?;
    let connectivity = topology::check_connectivity(&graph);
    let profile = energy::simulate(plan, params, climate)?;
    let env = energy::envelope_stats(plan, params)?;
    let eui = energy::eui(&profile, env.floor_area)?;

    let metrics = MetricVector {
        e: profile.flatten().to_vec(),
        f: egress.max_distance,
        a: env.floor_area,
        g: connectivity.score,
        eui,
        unreachable_cells: egress.unreachable_cells,
    };
    Ok(Evaluation {
        metrics,
        connectivity,
    })
}

/// Compliance thresholds; all bounds inclusive on the compliant side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Max EUI, kWh/m^2*yr.
    pub eui: f64,
    /// Max egress distance, m.
    pub fire: f64,
    /// Max floor area, m^2.
    pub area: f64,
    /// Required connectivity score.
    pub connectivity: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            eui: 135.0,
            fire: 15.0,
            area: 130.0,
            connectivity: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub metrics: MetricVector,
    pub pass_energy: bool,
    pub pass_fire: bool,
    pub pass_area: bool,
    pub pass_connectivity: bool,
    pub pass_all: bool,
    pub thresholds: Thresholds,
    pub rules_version: String,
    pub engine_version: String,
}

pub fn gate(metrics: &MetricVector, thresholds: &Thresholds) -> ComplianceReport {
    let pass_energy = metrics.eui <= thresholds.eui;
    let pass_fire = metrics.f <= thresholds.fire && metrics.unreachable_cells == 0;
    let pass_area = metrics.a <= thresholds.area;
    let pass_connectivity = metrics.g >= thresholds.connectivity;
    ComplianceReport {
        metrics: metrics.clone(),
        pass_energy,
        pass_fire,
        pass_area,
        pass_connectivity,
        pass_all: pass_energy && pass_fire && pass_area && pass_connectivity,
        thresholds: *thresholds,
        rules_version: RULES_VERSION.to_string(),
        engine_version: ENGINE_VERSION.to_string(),
    }
}
