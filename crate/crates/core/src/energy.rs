//! Monthly steady-state degree-day energy model.
//!
//! Produces a 12-month x 5-end-use profile (heating, cooling, lighting,
//! equipment, hot water) flattened month-major to a 60-vector, plus the EUI
//! scalar. Pure function of the plan, parameter table and climate table.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plan::{extract_rooms, CellLabel, Floorplan, PlanError, RoomKind};

pub const MONTHS: usize = 12;
pub const END_USES: usize = 5;
pub const PROFILE_LEN: usize = MONTHS * END_USES;

pub const DAYS_IN_MONTH: [f64; 12] = [
    31.0, 28.0, 31.0, 30.0, 31.0, 30.0, 31.0, 31.0, 30.0, 31.0, 30.0, 31.0,
];

pub const END_USE_NAMES: [&str; END_USES] =
    ["heating", "cooling", "lighting", "equipment", "hot_water"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("empty plan")]
    EmptyPlan,
    #[error("floor area must be positive, got {0}")]
    BadFloorArea(f64),
    #[error("non-finite energy at month {month}, end use {end_use}")]
    NonFinite { month: usize, end_use: &'static str },
    #[error("invalid parameter: {0}")]
    BadParam(String),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonthClimate {
    /// Heating degree-days, K*day.
    pub hdd: f64,
    /// Cooling degree-days, K*day.
    pub cdd: f64,
    /// Incident solar on glazing, kWh/m^2.
    pub solar: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClimateTable {
    pub months: Vec<MonthClimate>,
}

impl ClimateTable {
    pub fn validate(&self) -> Result<(), EnergyError> {
        if self.months.len() != MONTHS {
            return Err(EnergyError::BadParam(format!(
                "climate table must have 12 months, got {}",
                self.months.len()
            )));
        }
        for (i, m) in self.months.iter().enumerate() {
            if m.hdd < 0.0 || m.cdd < 0.0 || m.solar < 0.0 {
                return Err(EnergyError::BadParam(format!(
                    "negative climate entry in month {}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn zero() -> ClimateTable {
        ClimateTable {
            months: vec![
                MonthClimate {
                    hdd: 0.0,
                    cdd: 0.0,
                    solar: 0.0
                };
                MONTHS
            ],
        }
    }
}

/// Per-room-kind power density, W/m^2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KindTable {
    #[serde(rename = "LivingRoom")]
    pub living_room: f64,
    #[serde(rename = "Bedroom")]
    pub bedroom: f64,
    #[serde(rename = "Kitchen")]
    pub kitchen: f64,
    #[serde(rename = "Bathroom")]
    pub bathroom: f64,
    #[serde(rename = "Balcony")]
    pub balcony: f64,
    #[serde(rename = "DiningRoom")]
    pub dining_room: f64,
    #[serde(rename = "Storage")]
    pub storage: f64,
    #[serde(rename = "Corridor")]
    pub corridor: f64,
}

impl KindTable {
    pub fn get(&self, kind: RoomKind) -> f64 {
        match kind {
            RoomKind::LivingRoom => self.living_room,
            RoomKind::Bedroom => self.bedroom,
            RoomKind::Kitchen => self.kitchen,
            RoomKind::Bathroom => self.bathroom,
            RoomKind::Balcony => self.balcony,
            RoomKind::DiningRoom => self.dining_room,
            RoomKind::Storage => self.storage,
            RoomKind::Corridor => self.corridor,
        }
    }

    pub fn uniform(v: f64) -> KindTable {
        KindTable {
            living_room: v,
            bedroom: v,
            kitchen: v,
            bathroom: v,
            balcony: v,
            dining_room: v,
            storage: v,
            corridor: v,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyParams {
    /// Wall conductance, W/m^2K.
    pub u_wall: f64,
    /// Window conductance, W/m^2K.
    pub u_window: f64,
    /// Solar heat gain coefficient, [0,1].
    pub shgc: f64,
    /// Glazed height of a window cell, m.
    pub window_height: f64,
    pub lighting_pd: KindTable,
    pub equipment_pd: KindTable,
    pub hours_lighting: f64,
    pub hours_equipment: f64,
    /// Hot water demand, kWh/m^2*yr over kitchen + bathroom area.
    pub hot_water: f64,
    pub cop_cooling: f64,
    pub eff_heating: f64,
    /// Internal/solar gain utilization factor, [0,1].
    pub gain_utilization: f64,
}

impl EnergyParams {
    pub fn validate(&self) -> Result<(), EnergyError> {
        let positive = [
            ("u_wall", self.u_wall),
            ("u_window", self.u_window),
            ("window_height", self.window_height),
            ("hours_lighting", self.hours_lighting),
            ("hours_equipment", self.hours_equipment),
            ("hot_water", self.hot_water),
            ("cop_cooling", self.cop_cooling),
            ("eff_heating", self.eff_heating),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(EnergyError::BadParam(format!("{name} must be positive")));
            }
        }
        if !(0.0..=1.0).contains(&self.shgc) {
            return Err(EnergyError::BadParam("shgc must be in [0,1]".into()));
        }
        if !(0.0..=1.0).contains(&self.gain_utilization) {
            return Err(EnergyError::BadParam(
                "gain_utilization must be in [0,1]".into(),
            ));
        }
        Ok(())
    }
}

/// Version tag of the bundled default parameter and climate tables.
pub const PARAMS_VERSION: &str = "default-1";

pub fn default_params() -> EnergyParams {
    serde_json::from_str(include_str!("../data/params_default.json"))
        .expect("bundled params parse")
}

pub fn default_climate() -> ClimateTable {
    serde_json::from_str(include_str!("../data/climate_default.json"))
        .expect("bundled climate parse")
}

/// 12x5 kWh matrix; flattening is month-major, end-use minor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    pub kwh: [[f64; END_USES]; MONTHS],
}

impl EnergyProfile {
    pub fn zero() -> EnergyProfile {
        EnergyProfile {
            kwh: [[0.0; END_USES]; MONTHS],
        }
    }

    pub fn flatten(&self) -> [f64; PROFILE_LEN] {
        let mut out = [0.0; PROFILE_LEN];
        for m in 0..MONTHS {
            for u in 0..END_USES {
                out[m * END_USES + u] = self.kwh[m][u];
            }
        }
        out
    }

    pub fn from_flat(v: &[f64; PROFILE_LEN]) -> EnergyProfile {
        let mut kwh = [[0.0; END_USES]; MONTHS];
        for m in 0..MONTHS {
            for u in 0..END_USES {
                kwh[m][u] = v[m * END_USES + u];
            }
        }
        EnergyProfile { kwh }
    }

    pub fn total(&self) -> f64 {
        self.kwh.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeStats {
    pub wall_area: f64,
    pub window_area: f64,
    pub floor_area: f64,
}

/// Exterior envelope geometry. A cell is exterior-facing iff 4-adjacent to an
/// Exterior cell or on the grid edge. Window area uses the glazed height from
/// the parameter table; wall area is the full-height band minus glazing.
pub fn envelope_stats(plan: &Floorplan, params: &EnergyParams) -> Result<EnvelopeStats, EnergyError> {
    let mut ext_walls = 0usize;
    let mut ext_windows = 0usize;
    let mut room_cells = 0usize;
    for y in 0..plan.height() {
        for x in 0..plan.width() {
            match plan.cell(x, y) {
                CellLabel::Wall if plan.is_exterior_facing(x, y) => ext_walls += 1,
                CellLabel::Window if plan.is_exterior_facing(x, y) => ext_windows += 1,
                CellLabel::Room { .. } => room_cells += 1,
                _ => {}
            }
        }
    }
    if room_cells == 0 {
        return Err(EnergyError::EmptyPlan);
    }
    let scale = plan.scale();
    let window_area = ext_windows as f64 * scale * params.window_height;
    let wall_area = ext_walls as f64 * scale * plan.wall_height() - window_area;
    let floor_area = room_cells as f64 * scale * scale;
    Ok(EnvelopeStats {
        wall_area,
        window_area,
        floor_area,
    })
}

pub fn simulate(
    plan: &Floorplan,
    params: &EnergyParams,
    climate: &ClimateTable,
) -> Result<EnergyProfile, EnergyError> {
    params.validate()?;
    climate.validate()?;
    let env = envelope_stats(plan, params)?;
    let rooms = extract_rooms(plan)?;

    let ua = params.u_wall * env.wall_area + params.u_window * env.window_area; // W/K

    let mut light_w = 0.0; // W while in use
    let mut equip_w = 0.0;
    let mut wet_area = 0.0; // kitchen + bathroom m^2
    for r in &rooms {
        light_w += params.lighting_pd.get(r.kind) * r.area;
        equip_w += params.equipment_pd.get(r.kind) * r.area;
        if matches!(r.kind, RoomKind::Kitchen | RoomKind::Bathroom) {
            wet_area += r.area;
        }
    }

    let eta = params.gain_utilization;
    let mut profile = EnergyProfile::zero();
    for m in 0..MONTHS {
        let days = DAYS_IN_MONTH[m];
        let cl = climate.months[m];

        let lighting = light_w * params.hours_lighting * days / 1000.0;
        let equipment = equip_w * params.hours_equipment * days / 1000.0;
        let q_int = lighting + equipment;
        let q_sol = env.window_area * cl.solar * params.shgc;

        let heating =
            (ua * cl.hdd * 24.0 / 1000.0 - eta * (q_int + q_sol)).max(0.0) / params.eff_heating;

        let season = cl.cdd + cl.hdd;
        let sol_weight = if season > 0.0 { cl.cdd / season } else { cl.cdd };
        let cooling = ((ua * cl.cdd * 24.0 / 1000.0 + (1.0 - eta) * q_int + q_sol * sol_weight)
            / params.cop_cooling)
            .max(0.0);

        let hot_water = params.hot_water * wet_area * days / 365.0;

        let row = [heating, cooling, lighting, equipment, hot_water];
        for (u, v) in row.into_iter().enumerate() {
            if !v.is_finite() {
                return Err(EnergyError::NonFinite {
                    month: m + 1,
                    end_use: END_USE_NAMES[u],
                });
            }
            profile.kwh[m][u] = v;
        }
    }
    Ok(profile)
}

/// Annual energy per unit floor area, kWh/m^2*yr.
pub fn eui(profile: &EnergyProfile, floor_area: f64) -> Result<f64, EnergyError> {
    if !(floor_area > 0.0) {
        return Err(EnergyError::BadFloorArea(floor_area));
    }
    Ok(profile.total() / floor_area)
}
