//! Pair- and corpus-level evaluation metrics: IoU, rationality, delta-EUI.
//! Graph edit distance lives in [`crate::ged`].

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::gate::ComplianceReport;
use crate::plan::{CellLabel, Floorplan, RoomKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("plan dimensions or scale mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("reference corpus has zero mean EUI")]
    ZeroReferenceMean,
    #[error(transparent)]
    Topology(#[from] crate::topology::TopologyError),
    #[error(transparent)]
    Plan(#[from] crate::plan::PlanError),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairMetrics {
    pub iou: f64,
    pub ged: f64,
    pub ged_approx: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusMetrics {
    pub rationality: f64,
    pub mean_eui: f64,
    pub delta_eui_pct: f64,
}

/// Convenience wrapper computing IoU and adjacency-graph GED for one pair.
pub fn pair_metrics(a: &Floorplan, b: &Floorplan) -> Result<PairMetrics, MetricsError> {
    let iou = iou(a, b)?;
    let ga = crate::topology::build_adjacency(a)?;
    let gb = crate::topology::build_adjacency(b)?;
    let ged = crate::ged::ged(&ga, &gb);
    Ok(PairMetrics {
        iou,
        ged: ged.cost,
        ged_approx: ged.approx,
    })
}

/// Mean over room kinds present in either plan of the per-kind mask IoU;
/// instance indices are merged per kind.
pub fn iou(a: &Floorplan, b: &Floorplan) -> Result<f64, MetricsError> {
    if a.width() != b.width() || a.height() != b.height() || a.scale() != b.scale() {
        return Err(MetricsError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let mut inter: BTreeMap<RoomKind, usize> = BTreeMap::new();
    let mut union: BTreeMap<RoomKind, usize> = BTreeMap::new();
    for i in 0..a.grid().len() {
        let ka = match a.grid()[i] {
            CellLabel::Room { kind, .. } => Some(kind),
            _ => None,
        };
        let kb = match b.grid()[i] {
            CellLabel::Room { kind, .. } => Some(kind),
            _ => None,
        };
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                *inter.entry(x).or_default() += 1;
                *union.entry(x).or_default() += 1;
            }
            (Some(x), Some(y)) => {
                *union.entry(x).or_default() += 1;
                *union.entry(y).or_default() += 1;
            }
            (Some(x), None) => *union.entry(x).or_default() += 1,
            (None, Some(y)) => *union.entry(y).or_default() += 1,
            (None, None) => {}
        }
    }
    if union.is_empty() {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    for (kind, &u) in &union {
        let i = inter.get(kind).copied().unwrap_or(0);
        sum += i as f64 / u as f64;
    }
    Ok(sum / union.len() as f64)
}

/// Fraction of reports passing the three functional gates (fire, area,
/// connectivity); the energy gate is excluded.
pub fn rationality(corpus: &[ComplianceReport]) -> Result<f64, MetricsError> {
    if corpus.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let n = corpus
        .iter()
        .filter(|r| r.pass_fire && r.pass_area && r.pass_connectivity)
        .count();
    Ok(n as f64 / corpus.len() as f64)
}

pub fn mean_eui(corpus: &[ComplianceReport]) -> Result<f64, MetricsError> {
    if corpus.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(corpus.iter().map(|r| r.metrics.eui).sum::<f64>() / corpus.len() as f64)
}

/// Signed percentage of mean EUI relative to the reference mean; negative
/// means lower energy use than the reference.
pub fn delta_eui(
    corpus: &[ComplianceReport],
    reference: &[ComplianceReport],
) -> Result<f64, MetricsError> {
    let m = mean_eui(corpus)?;
    let r = mean_eui(reference)?;
    if r == 0.0 {
        return Err(MetricsError::ZeroReferenceMean);
    }
    Ok((m - r) / r * 100.0)
}
