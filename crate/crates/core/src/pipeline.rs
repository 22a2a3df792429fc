//! Batch orchestration: corpus labeling, compliance audits and the repair
//! loop that resamples non-compliant plans until the whole corpus passes.
//!
//! Plans are independent work units processed on a rayon pool; output order
//! always follows manifest index. Every record embeds the engine version.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{ClimateTable, EnergyParams};
use crate::gate::{self, ComplianceReport, Thresholds, ENGINE_VERSION};
use crate::optimizer::{self, Demand, OptError, SearchConfig, Target, TargetKind};
use crate::plan::{parse_plan, serialize_plan, Floorplan};
use crate::rng::CounterRng;
use crate::topology::RULES_VERSION;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("duplicate plan id `{0}` in manifest")]
    DuplicateId(String),
    #[error("resample budget must be at least 1")]
    BadBudget,
    #[error("{path}: {message}")]
    BadPlan { path: PathBuf, message: String },
    #[error("audit input is empty")]
    EmptyAudit,
    #[error(transparent)]
    Opt(#[from] OptError),
}

fn read_file(path: &Path) -> Result<Vec<u8>, PipelineError> {
    fs::read(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    fs::write(path, bytes).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Path to the `.fpgrid` file, relative to the manifest location.
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub engine_version: String,
    pub rules_version: String,
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub plans: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn new(plans: Vec<ManifestEntry>, notes: Option<String>) -> CorpusManifest {
        CorpusManifest {
            engine_version: ENGINE_VERSION.to_string(),
            rules_version: RULES_VERSION.to_string(),
            format_version: crate::FORMAT_VERSION.to_string(),
            notes,
            plans,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.plans {
            if !seen.insert(&e.id) {
                return Err(PipelineError::DuplicateId(e.id.clone()));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CorpusManifest, PipelineError> {
        let bytes = read_file(path)?;
        let m: CorpusManifest =
            serde_json::from_slice(&bytes).map_err(|source| PipelineError::Json {
                path: path.to_path_buf(),
                source,
            })?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("manifest serializes");
        bytes.push(b'\n');
        write_file(path, &bytes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelStatus {
    Ok,
    Error,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelRecord {
    pub id: String,
    pub status: LabelStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ComplianceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub engine_version: String,
}

/// Evaluates every plan in the manifest; per-plan failures become
/// status=error records instead of aborting the batch. Output order follows
/// the manifest.
pub fn label(
    manifest: &CorpusManifest,
    base: &Path,
    params: &EnergyParams,
    climate: &ClimateTable,
    thresholds: &Thresholds,
) -> Vec<LabelRecord> {
    manifest
        .plans
        .par_iter()
        .map(|entry| {
            let result = (|| -> Result<ComplianceReport, String> {
                let bytes =
                    fs::read(base.join(&entry.path)).map_err(|e| format!("{}: {e}", entry.path))?;
                let plan = parse_plan(&bytes).map_err(|e| e.to_string())?;
                let eval = gate::evaluate(&plan, params, climate).map_err(|e| e.to_string())?;
                Ok(gate::gate(&eval.metrics, thresholds))
            })();
            match result {
                Ok(report) => LabelRecord {
                    id: entry.id.clone(),
                    status: LabelStatus::Ok,
                    report: Some(report),
                    error: None,
                    engine_version: ENGINE_VERSION.to_string(),
                },
                Err(error) => LabelRecord {
                    id: entry.id.clone(),
                    status: LabelStatus::Error,
                    report: None,
                    error: Some(error),
                    engine_version: ENGINE_VERSION.to_string(),
                },
            }
        })
        .collect()
}

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Histogram {
    pub min: f64,
    pub max: f64,
    pub bin_width: f64,
    pub counts: Vec<usize>,
}

fn histogram(values: &[f64]) -> Histogram {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !min.is_finite() || min == max {
        return Histogram {
            min,
            max,
            bin_width: 0.0,
            counts: vec![values.len()],
        };
    }
    let bin_width = (max - min) / HISTOGRAM_BINS as f64;
    let mut counts = vec![0usize; HISTOGRAM_BINS];
    for &v in values {
        let i = (((v - min) / bin_width) as usize).min(HISTOGRAM_BINS - 1);
        counts[i] += 1;
    }
    Histogram {
        min,
        max,
        bin_width,
        counts,
    }
}

/// Violation rates over the four constraint categories, as fractions of the
/// successfully evaluated plans.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationRates {
    pub energy: f64,
    pub fire: f64,
    pub area: f64,
    pub connectivity: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditSummary {
    pub total: usize,
    pub evaluated: usize,
    pub errors: usize,
    pub violation_rates: ViolationRates,
    pub pass_all_rate: f64,
    pub eui_histogram: Histogram,
    pub fire_histogram: Histogram,
    pub area_histogram: Histogram,
    pub engine_version: String,
}

pub fn audit(records: &[LabelRecord]) -> Result<AuditSummary, PipelineError> {
    if records.is_empty() {
        return Err(PipelineError::EmptyAudit);
    }
    let reports: Vec<&ComplianceReport> =
        records.iter().filter_map(|r| r.report.as_ref()).collect();
    if reports.is_empty() {
        return Err(PipelineError::EmptyAudit);
    }
    let n = reports.len() as f64;
    let rate =
        |f: fn(&ComplianceReport) -> bool| reports.iter().filter(|r| f(r)).count() as f64 / n;
    Ok(AuditSummary {
        total: records.len(),
        evaluated: reports.len(),
        errors: records.len() - reports.len(),
        violation_rates: ViolationRates {
            energy: rate(|r| !r.pass_energy),
            fire: rate(|r| !r.pass_fire),
            area: rate(|r| !r.pass_area),
            connectivity: rate(|r| !r.pass_connectivity),
        },
        pass_all_rate: rate(|r| r.pass_all),
        eui_histogram: histogram(&reports.iter().map(|r| r.metrics.eui).collect::<Vec<_>>()),
        fire_histogram: histogram(&reports.iter().map(|r| r.metrics.f).collect::<Vec<_>>()),
        area_histogram: histogram(&reports.iter().map(|r| r.metrics.a).collect::<Vec<_>>()),
        engine_version: ENGINE_VERSION.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ResampleStatus {
    Preserved,
    Repaired { attempts: u32 },
    Failed { budget: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResampleOutcome {
    pub id: String,
    #[serde(flatten)]
    pub status: ResampleStatus,
    /// Path of the emitted plan; absent for Failed entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    pub engine_version: String,
}

#[derive(Debug, Clone)]
pub struct RepairConfig {
    /// Optimizer runs attempted per failing plan.
    pub budget: u32,
    pub seed: u64,
    /// Annealing steps per attempt.
    pub steps_per_attempt: usize,
    pub thresholds: Thresholds,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig {
            budget: 5,
            seed: 0,
            steps_per_attempt: 400,
            thresholds: Thresholds::default(),
        }
    }
}

/// Demand pulling failing gates toward their thresholds while anchoring
/// passing metrics at their current values, so repair cannot trade a passing
/// gate away for reward.
fn repair_demand(report: &ComplianceReport, thresholds: &Thresholds) -> Demand {
    let m = &report.metrics;
    let targets = vec![
        Target {
            kind: TargetKind::Eui,
            value: if report.pass_energy { m.eui } else { thresholds.eui },
            weight: 1.0,
        },
        Target {
            kind: TargetKind::Fire,
            value: if report.pass_fire { m.f } else { thresholds.fire },
            weight: 1.0,
        },
        Target {
            kind: TargetKind::Area,
            value: if report.pass_area { m.a } else { thresholds.area },
            weight: 1.0,
        },
        Target {
            kind: TargetKind::Connectivity,
            value: if report.pass_connectivity {
                m.g
            } else {
                thresholds.connectivity
            },
            weight: 1.0,
        },
    ];
    Demand {
        targets,
        lambda_rec: 0.0,
        reference: None,
    }
}

enum PlanResult {
    Preserved(Vec<u8>),
    Repaired { plan: Floorplan, attempts: u32 },
    Failed,
}

fn repair_one(
    bytes: &[u8],
    plan: &Floorplan,
    index: usize,
    params: &EnergyParams,
    climate: &ClimateTable,
    config: &RepairConfig,
) -> Result<PlanResult, PipelineError> {
    let eval = gate::evaluate(plan, params, climate).map_err(OptError::from)?;
    let report = gate::gate(&eval.metrics, &config.thresholds);
    if report.pass_all {
        return Ok(PlanResult::Preserved(bytes.to_vec()));
    }
    let plan_rng = CounterRng::new(config.seed).split(index as u64);
    // attempts chain: each restarts the annealer from the previous best
    let mut current = plan.clone();
    let mut current_report = report;
    for attempt in 1..=config.budget {
        let demand = repair_demand(&current_report, &config.thresholds);
        let opt_seed = plan_rng.split(attempt as u64).next_u64();
        let search = SearchConfig {
            max_steps: config.steps_per_attempt,
            seed: opt_seed,
            ..SearchConfig::default()
        };
        let thresholds = config.thresholds;
        let out =
            optimizer::optimize_with_stop(&current, &demand, params, climate, &search, |_, m| {
                gate::gate(m, &thresholds).pass_all
            })?;
        if gate::gate(&out.metrics, &config.thresholds).pass_all {
            return Ok(PlanResult::Repaired {
                plan: out.plan,
                attempts: attempt,
            });
        }
        current_report = gate::gate(&out.metrics, &config.thresholds);
        current = out.plan;
    }
    Ok(PlanResult::Failed)
}

/// Repairs a corpus: gate-passing plans are copied byte-identically, failing
/// plans get up to `budget` optimizer runs each. The output manifest lists
/// only Preserved and Repaired plans, so the output corpus passes in full.
pub fn resample(
    manifest: &CorpusManifest,
    base: &Path,
    out_dir: &Path,
    params: &EnergyParams,
    climate: &ClimateTable,
    config: &RepairConfig,
) -> Result<(CorpusManifest, Vec<ResampleOutcome>), PipelineError> {
    if config.budget < 1 {
        return Err(PipelineError::BadBudget);
    }
    manifest.validate()?;
    fs::create_dir_all(out_dir).map_err(|source| PipelineError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let results: Vec<Result<(PlanResult, &ManifestEntry), PipelineError>> = manifest
        .plans
        .par_iter()
        .enumerate()
        .map(|(index, entry)| {
            let path = base.join(&entry.path);
            let bytes = read_file(&path)?;
            let plan = parse_plan(&bytes).map_err(|e| PipelineError::BadPlan {
                path: path.clone(),
                message: e.to_string(),
            })?;
            let r = repair_one(&bytes, &plan, index, params, climate, config)?;
            Ok((r, entry))
        })
        .collect();

    let mut outcomes = Vec::with_capacity(manifest.plans.len());
    let mut out_entries = Vec::new();
    for result in results {
        let (plan_result, entry) = result?;
        let file_name = Path::new(&entry.path)
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("{}.fpgrid", entry.id));
        let (status, output_path) = match plan_result {
            PlanResult::Preserved(bytes) => {
                write_file(&out_dir.join(&file_name), &bytes)?;
                (ResampleStatus::Preserved, Some(file_name.clone()))
            }
            PlanResult::Repaired { plan, attempts } => {
                write_file(&out_dir.join(&file_name), &serialize_plan(&plan))?;
                (
                    ResampleStatus::Repaired { attempts },
                    Some(file_name.clone()),
                )
            }
            PlanResult::Failed => (
                ResampleStatus::Failed {
                    budget: config.budget,
                },
                None,
            ),
        };
        if let Some(path) = &output_path {
            out_entries.push(ManifestEntry {
                id: entry.id.clone(),
                path: path.clone(),
                seed: entry.seed,
            });
        }
        outcomes.push(ResampleOutcome {
            id: entry.id.clone(),
            status,
            output_path,
            engine_version: ENGINE_VERSION.to_string(),
        });
    }

    let out_manifest = CorpusManifest::new(
        out_entries,
        Some(format!(
            "resampled with budget {} seed {}",
            config.budget, config.seed
        )),
    );
    out_manifest.save(&out_dir.join("manifest.json"))?;
    Ok((out_manifest, outcomes))
}
