//! Single binary exposing the compliance engine: plan evaluation, corpus
//! labeling/audit, guided resampling, reward-guided optimization, metrics,
//! synthesis and reporting.
//!
//! Exit codes: 0 clean, 1 fatal, 2 partial results (error or Failed records
//! present), 64 usage. In json mode stdout carries only data.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use greengate_core::energy::{
    default_climate, default_params, ClimateTable, EnergyParams, PARAMS_VERSION,
};
use greengate_core::gate::{self, ComplianceReport, Thresholds};
use greengate_core::generator::{synth, GenSpec};
use greengate_core::metrics::{delta_eui, mean_eui, pair_metrics, rationality};
use greengate_core::optimizer::{
    optimize, Demand, SearchConfig, Target, TargetKind,
};
use greengate_core::pipeline::{
    audit, label, resample, CorpusManifest, LabelRecord, LabelStatus, ManifestEntry, RepairConfig,
    ResampleStatus,
};
use greengate_core::plan::{parse_plan, serialize_plan, RoomKind};
use greengate_core::rng::CounterRng;
use greengate_core::{ENGINE_VERSION, FORMAT_VERSION, RULES_VERSION};

const EXIT_OK: i32 = 0;
const EXIT_FATAL: i32 = 1;
const EXIT_PARTIAL: i32 = 2;
const EXIT_USAGE: i32 = 64;

fn version_string() -> String {
    format!(
        "greengate {ENGINE_VERSION} (rules {RULES_VERSION}, params {PARAMS_VERSION}, format {FORMAT_VERSION})"
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Human,
}

#[derive(Parser, Debug)]
#[command(name = "greengate", disable_version_flag = true)]
struct Cli {
    /// Print version information.
    #[arg(long, short = 'V', action = clap::ArgAction::SetTrue)]
    version: bool,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (defaults to available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

/// Shared evaluation inputs: parameter/climate tables and gate thresholds.
#[derive(Args, Debug, Clone)]
struct EvalOpts {
    /// Energy parameter JSON; fields merge over the bundled defaults.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Climate table JSON; fields merge over the bundled defaults.
    #[arg(long)]
    climate: Option<PathBuf>,
    /// EUI threshold, kWh/m^2*yr.
    #[arg(long)]
    max_eui: Option<f64>,
    /// Egress distance threshold, m.
    #[arg(long)]
    max_fire: Option<f64>,
    /// Floor area threshold, m^2.
    #[arg(long)]
    max_area: Option<f64>,
    /// Required connectivity score.
    #[arg(long)]
    min_connectivity: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one plan and emit its compliance report.
    Evaluate {
        plan: PathBuf,
        #[command(flatten)]
        eval: EvalOpts,
        /// Write the egress distance field as a JSON matrix to this path.
        #[arg(long)]
        dump_distance: Option<PathBuf>,
    },
    /// Label every plan in a corpus manifest with a compliance report.
    Label {
        #[arg(long)]
        manifest: PathBuf,
        /// Output JSONL path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        eval: EvalOpts,
    },
    /// Summarize violation rates and metric histograms from label records.
    Audit { labels: PathBuf },
    /// Repair a corpus until every plan passes the gate.
    Resample {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Optimizer runs per failing plan.
        #[arg(long, default_value_t = 5)]
        budget: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Annealing steps per attempt.
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[command(flatten)]
        eval: EvalOpts,
    },
    /// Anneal a plan toward metric targets.
    Optimize {
        plan: PathBuf,
        #[arg(long)]
        target_eui: Option<f64>,
        #[arg(long)]
        target_fire: Option<f64>,
        #[arg(long)]
        target_area: Option<f64>,
        /// Demand a connectivity score of 1.0.
        #[arg(long)]
        require_connectivity: bool,
        /// Weight of the IoU bonus against the reference plan.
        #[arg(long, default_value_t = 0.0)]
        lambda_rec: f64,
        /// Reference plan for the IoU bonus; defaults to the input plan.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-step search trace as JSONL.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the optimized plan here; omitted = summary only.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        eval: EvalOpts,
    },
    /// Pair- and corpus-level metrics between two corpus manifests.
    Metrics {
        corpus: PathBuf,
        reference: PathBuf,
        #[command(flatten)]
        eval: EvalOpts,
    },
    /// Generate a synthetic corpus.
    Synth {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of injecting a rule-violating defect per plan.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 20)]
        width: usize,
        #[arg(long, default_value_t = 20)]
        height: usize,
        /// Room program as comma-separated kind letters, e.g. L,B,K,T.
        #[arg(long, default_value = "L,B,K,T")]
        rooms: String,
        #[arg(long, default_value_t = 0.25)]
        scale: f64,
    },
    /// Label + audit a corpus, with rationality and EUI deltas.
    Report {
        #[arg(long)]
        manifest: PathBuf,
        /// Reference manifest for the EUI delta.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        eval: EvalOpts,
    },
}

/// Optional settings read from the file named by GREENGATE_CONFIG; explicit
/// flags win over these.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvConfig {
    format: Option<Format>,
    jobs: Option<usize>,
    params: Option<PathBuf>,
    climate: Option<PathBuf>,
    max_eui: Option<f64>,
    max_fire: Option<f64>,
    max_area: Option<f64>,
    min_connectivity: Option<f64>,
}

fn load_env_config() -> Result<EnvConfig> {
    match std::env::var_os("GREENGATE_CONFIG") {
        None => Ok(EnvConfig::default()),
        Some(path) => {
            let path = PathBuf::from(path);
            let bytes = fs::read(&path)
                .with_context(|| format!("GREENGATE_CONFIG: {}", path.display()))?;
            serde_json::from_slice(&bytes)
                .with_context(|| format!("GREENGATE_CONFIG: {}", path.display()))
        }
    }
}

/// Reads a JSON table, merging its top-level fields over `defaults`.
fn merged_table<T: serde::de::DeserializeOwned + Serialize>(
    defaults: &T,
    path: &Path,
) -> Result<T> {
    let mut base = serde_json::to_value(defaults).expect("defaults serialize");
    let bytes = fs::read(path).with_context(|| path.display().to_string())?;
    let user: serde_json::Value =
        serde_json::from_slice(&bytes).with_context(|| path.display().to_string())?;
    let serde_json::Value::Object(user) = user else {
        bail!("{}: expected a JSON object", path.display());
    };
    let serde_json::Value::Object(obj) = &mut base else {
        unreachable!()
    };
    for (k, v) in user {
        obj.insert(k, v);
    }
    serde_json::from_value(base).with_context(|| path.display().to_string())
}

struct EvalContext {
    params: EnergyParams,
    climate: ClimateTable,
    thresholds: Thresholds,
}

impl EvalOpts {
    fn resolve(&self, env: &EnvConfig) -> Result<EvalContext> {
        let params = match self.params.as_ref().or(env.params.as_ref()) {
            Some(p) => merged_table(&default_params(), p)?,
            None => default_params(),
        };
        let climate = match self.climate.as_ref().or(env.climate.as_ref()) {
            Some(p) => merged_table(&default_climate(), p)?,
            None => default_climate(),
        };
        let d = Thresholds::default();
        let thresholds = Thresholds {
            eui: self.max_eui.or(env.max_eui).unwrap_or(d.eui),
            fire: self.max_fire.or(env.max_fire).unwrap_or(d.fire),
            area: self.max_area.or(env.max_area).unwrap_or(d.area),
            connectivity: self
                .min_connectivity
                .or(env.min_connectivity)
                .unwrap_or(d.connectivity),
        };
        Ok(EvalContext {
            params,
            climate,
            thresholds,
        })
    }
}

fn read_plan(path: &Path) -> Result<greengate_core::plan::Floorplan> {
    let bytes = fs::read(path).with_context(|| path.display().to_string())?;
    parse_plan(&bytes).with_context(|| path.display().to_string())
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialize"));
}

fn jsonl_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialize")
}

fn human_report(r: &ComplianceReport) {
    let flag = |b: bool| if b { "pass" } else { "FAIL" };
    println!("eui           {:>10.2} kWh/m2yr  [{}]", r.metrics.eui, flag(r.pass_energy));
    println!("fire egress   {:>10.2} m         [{}]", r.metrics.f, flag(r.pass_fire));
    println!("floor area    {:>10.2} m2        [{}]", r.metrics.a, flag(r.pass_area));
    println!("connectivity  {:>10.2}           [{}]", r.metrics.g, flag(r.pass_connectivity));
    if r.metrics.unreachable_cells > 0 {
        println!("unreachable cells: {}", r.metrics.unreachable_cells);
    }
    println!("overall: {}", if r.pass_all { "COMPLIANT" } else { "NON-COMPLIANT" });
}

fn cmd_evaluate(
    plan_path: &Path,
    eval: &EvalOpts,
    dump_distance: Option<&Path>,
    env: &EnvConfig,
    format: Format,
) -> Result<i32> {
    let ctx = eval.resolve(env)?;
    let plan = read_plan(plan_path)?;
    let evaluation = gate::evaluate(&plan, &ctx.params, &ctx.climate)
        .with_context(|| plan_path.display().to_string())?;
    let report = gate::gate(&evaluation.metrics, &ctx.thresholds);

    if let Some(out) = dump_distance {
        let egress = greengate_core::egress::egress_distance(&plan)?;
        let matrix: Vec<Vec<serde_json::Value>> = (0..plan.height())
            .map(|y| {
                (0..plan.width())
                    .map(|x| {
                        let d = egress.distance_field[plan.idx(x, y)];
                        if d.is_finite() {
                            json!(d)
                        } else {
                            serde_json::Value::Null
                        }
                    })
                    .collect()
            })
            .collect();
        fs::write(out, serde_json::to_string(&matrix).expect("serialize"))
            .with_context(|| out.display().to_string())?;
    }

    match format {
        Format::Json => print_json(&report),
        Format::Human => human_report(&report),
    }
    Ok(EXIT_OK)
}

fn cmd_label(
    manifest_path: &Path,
    out: Option<&Path>,
    eval: &EvalOpts,
    env: &EnvConfig,
    format: Format,
) -> Result<i32> {
    let ctx = eval.resolve(env)?;
    let manifest = CorpusManifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    if manifest.plans.is_empty() {
        eprintln!("warning: empty corpus");
    }
    let records = label(&manifest, base, &ctx.params, &ctx.climate, &ctx.thresholds);
    let errors = records
        .iter()
        .filter(|r| r.status == LabelStatus::Error)
        .count();

    let mut body = String::new();
    for r in &records {
        body.push_str(&jsonl_line(r));
        body.push('\n');
    }
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| path.display().to_string())?;
            match format {
                Format::Json => {}
                Format::Human => println!(
                    "labeled {} plans ({} errors) -> {}",
                    records.len(),
                    errors,
                    path.display()
                ),
            }
        }
        None => print!("{body}"),
    }
    if errors > 0 {
        eprintln!("warning: {errors} plans failed to evaluate");
        return Ok(EXIT_PARTIAL);
    }
    Ok(EXIT_OK)
}

fn read_label_records(path: &Path) -> Result<Vec<LabelRecord>> {
    let text = fs::read_to_string(path).with_context(|| path.display().to_string())?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).with_context(|| path.display().to_string()))
        .collect()
}

fn cmd_audit(labels: &Path, format: Format) -> Result<i32> {
    let records = read_label_records(labels)?;
    let summary = audit(&records)?;
    match format {
        Format::Json => print_json(&summary),
        Format::Human => {
            println!("plans evaluated: {} ({} errors)", summary.evaluated, summary.errors);
            println!("pass_all rate:   {:.1}%", summary.pass_all_rate * 100.0);
            println!("violations:");
            println!("  energy        {:.1}%", summary.violation_rates.energy * 100.0);
            println!("  fire          {:.1}%", summary.violation_rates.fire * 100.0);
            println!("  area          {:.1}%", summary.violation_rates.area * 100.0);
            println!("  connectivity  {:.1}%", summary.violation_rates.connectivity * 100.0);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_resample(
    manifest_path: &Path,
    out_dir: &Path,
    budget: u32,
    seed: u64,
    steps: usize,
    eval: &EvalOpts,
    env: &EnvConfig,
    format: Format,
) -> Result<i32> {
    let ctx = eval.resolve(env)?;
    let manifest = CorpusManifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let config = RepairConfig {
        budget,
        seed,
        steps_per_attempt: steps,
        thresholds: ctx.thresholds,
    };
    let (_, outcomes) = resample(&manifest, base, out_dir, &ctx.params, &ctx.climate, &config)?;

    let mut body = String::new();
    for o in &outcomes {
        body.push_str(&jsonl_line(o));
        body.push('\n');
    }
    fs::write(out_dir.join("outcomes.jsonl"), &body)
        .with_context(|| out_dir.display().to_string())?;

    let failed = outcomes
        .iter()
        .filter(|o| matches!(o.status, ResampleStatus::Failed { .. }))
        .count();
    match format {
        Format::Json => print!("{body}"),
        Format::Human => {
            let preserved = outcomes
                .iter()
                .filter(|o| o.status == ResampleStatus::Preserved)
                .count();
            let repaired = outcomes
                .iter()
                .filter(|o| matches!(o.status, ResampleStatus::Repaired { .. }))
                .count();
            println!(
                "{} preserved, {} repaired, {} failed -> {}",
                preserved,
                repaired,
                failed,
                out_dir.display()
            );
        }
    }
    if failed > 0 {
        eprintln!("warning: {failed} plans exhausted the repair budget");
        return Ok(EXIT_PARTIAL);
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    plan_path: &Path,
    targets: (Option<f64>, Option<f64>, Option<f64>, bool),
    lambda_rec: f64,
    reference: Option<&Path>,
    steps: usize,
    seed: u64,
    trace: Option<&Path>,
    out: Option<&Path>,
    eval: &EvalOpts,
    env: &EnvConfig,
    format: Format,
) -> Result<i32> {
    let ctx = eval.resolve(env)?;
    let plan = read_plan(plan_path)?;

    let mut demand = Demand {
        targets: Vec::new(),
        lambda_rec,
        reference: None,
    };
    let mut push = |kind, value| {
        demand.targets.push(Target {
            kind,
            value,
            weight: 1.0,
        })
    };
    if let Some(v) = targets.0 {
        push(TargetKind::Eui, v);
    }
    if let Some(v) = targets.1 {
        push(TargetKind::Fire, v);
    }
    if let Some(v) = targets.2 {
        push(TargetKind::Area, v);
    }
    if targets.3 {
        push(TargetKind::Connectivity, 1.0);
    }
    if demand.targets.is_empty() {
        bail!("no targets given; use --target-eui/--target-fire/--target-area/--require-connectivity");
    }
    if lambda_rec != 0.0 {
        demand.reference = Some(match reference {
            Some(p) => read_plan(p)?,
            None => plan.clone(),
        });
    }

    let config = SearchConfig {
        max_steps: steps,
        seed,
        ..SearchConfig::default()
    };
    let result = optimize(&plan, &demand, &ctx.params, &ctx.climate, &config)?;

    if let Some(path) = trace {
        let mut body = String::new();
        for step in &result.trace {
            body.push_str(&jsonl_line(step));
            body.push('\n');
        }
        fs::write(path, body).with_context(|| path.display().to_string())?;
    }
    if let Some(path) = out {
        fs::write(path, serialize_plan(&result.plan))
            .with_context(|| path.display().to_string())?;
    }

    let report = gate::gate(&result.metrics, &ctx.thresholds);
    let summary = json!({
        "reward": result.reward,
        "steps_taken": result.steps_taken,
        "eui": result.metrics.eui,
        "fire": result.metrics.f,
        "area": result.metrics.a,
        "connectivity": result.metrics.g,
        "pass_all": report.pass_all,
        "engine_version": ENGINE_VERSION,
    });
    match format {
        Format::Json => print_json(&summary),
        Format::Human => {
            println!(
                "reward {:.6} after {} steps; eui {:.1}, fire {:.2} m, area {:.1} m2, connectivity {:.2}",
                result.reward,
                result.steps_taken,
                result.metrics.eui,
                result.metrics.f,
                result.metrics.a,
                result.metrics.g
            );
        }
    }
    Ok(EXIT_OK)
}

fn load_corpus_plans(
    manifest_path: &Path,
) -> Result<Vec<(String, greengate_core::plan::Floorplan)>> {
    let manifest = CorpusManifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    manifest
        .plans
        .iter()
        .map(|e| Ok((e.id.clone(), read_plan(&base.join(&e.path))?)))
        .collect()
}

fn corpus_reports(
    manifest_path: &Path,
    ctx: &EvalContext,
) -> Result<Vec<ComplianceReport>> {
    let manifest = CorpusManifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let records = label(&manifest, base, &ctx.params, &ctx.climate, &ctx.thresholds);
    let mut reports = Vec::new();
    for r in records {
        match r.report {
            Some(rep) => reports.push(rep),
            None => bail!("{}: {}", r.id, r.error.unwrap_or_default()),
        }
    }
    Ok(reports)
}

fn cmd_metrics(
    corpus_path: &Path,
    reference_path: &Path,
    eval: &EvalOpts,
    env: &EnvConfig,
    format: Format,
) -> Result<i32> {
    let ctx = eval.resolve(env)?;
    let corpus_reports_v = corpus_reports(corpus_path, &ctx)?;
    let reference_reports = corpus_reports(reference_path, &ctx)?;

    let mut pair = serde_json::Value::Null;
    let corpus = load_corpus_plans(corpus_path)?;
    let reference = load_corpus_plans(reference_path)?;
    if corpus.len() == reference.len() && !corpus.is_empty() {
        let mut ious = Vec::new();
        let mut geds = Vec::new();
        let mut any_approx = false;
        for ((_, a), (_, b)) in corpus.iter().zip(&reference) {
            let p = pair_metrics(a, b)?;
            ious.push(p.iou);
            any_approx |= p.ged_approx;
            geds.push(p.ged);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        pair = json!({
            "mean_iou": mean(&ious),
            "mean_ged": mean(&geds),
            "ged_approx": any_approx,
        });
    }

    let summary = json!({
        "corpus": {
            "plans": corpus_reports_v.len(),
            "rationality": rationality(&corpus_reports_v)?,
            "mean_eui": mean_eui(&corpus_reports_v)?,
        },
        "reference": {
            "plans": reference_reports.len(),
            "rationality": rationality(&reference_reports)?,
            "mean_eui": mean_eui(&reference_reports)?,
        },
        "delta_eui_pct": delta_eui(&corpus_reports_v, &reference_reports)?,
        "pairwise": pair,
        "engine_version": ENGINE_VERSION,
    });
    match format {
        Format::Json => print_json(&summary),
        Format::Human => {
            println!("{}", serde_json::to_string_pretty(&summary).expect("serialize"));
        }
    }
    Ok(EXIT_OK)
}

fn parse_rooms(spec: &str) -> Result<Vec<RoomKind>> {
    spec.split(',')
        .map(|t| {
            let t = t.trim();
            let mut chars = t.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    RoomKind::from_letter(c).with_context(|| format!("unknown room letter `{t}`"))
                }
                _ => bail!("room program tokens must be single letters, got `{t}`"),
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    count: usize,
    seed: u64,
    noise: f64,
    out_dir: &Path,
    width: usize,
    height: usize,
    rooms: &str,
    scale: f64,
    format: Format,
) -> Result<i32> {
    let rooms = parse_rooms(rooms)?;
    fs::create_dir_all(out_dir).with_context(|| out_dir.display().to_string())?;
    let root = CounterRng::new(seed);
    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        let plan_seed = root.split(i as u64).next_u64();
        let spec = GenSpec {
            width,
            height,
            scale,
            wall_height: 2.8,
            rooms: rooms.clone(),
            seed: plan_seed,
            noise,
        };
        let id = format!("plan-{i:05}");
        let plan = synth(&spec)?.with_id(id.clone());
        let file = format!("{id}.fpgrid");
        fs::write(out_dir.join(&file), serialize_plan(&plan))
            .with_context(|| out_dir.display().to_string())?;
        entries.push(ManifestEntry {
            id,
            path: file,
            seed: Some(plan_seed),
        });
    }
    let manifest = CorpusManifest::new(
        entries,
        Some(format!(
            "synth count={count} seed={seed} noise={noise} {width}x{height} scale={scale}"
        )),
    );
    let manifest_path = out_dir.join("manifest.json");
    manifest.save(&manifest_path)?;
    match format {
        Format::Json => print_json(&json!({
            "count": count,
            "manifest": manifest_path.display().to_string(),
            "engine_version": ENGINE_VERSION,
        })),
        Format::Human => println!("wrote {count} plans to {}", out_dir.display()),
    }
    Ok(EXIT_OK)
}

fn cmd_report(
    manifest_path: &Path,
    reference: Option<&Path>,
    eval: &EvalOpts,
    env: &EnvConfig,
    format: Format,
) -> Result<i32> {
    let ctx = eval.resolve(env)?;
    let manifest = CorpusManifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let records = label(&manifest, base, &ctx.params, &ctx.climate, &ctx.thresholds);
    let summary = audit(&records)?;
    let reports: Vec<ComplianceReport> =
        records.iter().filter_map(|r| r.report.clone()).collect();
    let rat = rationality(&reports)?;
    let mean = mean_eui(&reports)?;
    let delta = match reference {
        Some(ref_path) => {
            let ref_reports = corpus_reports(ref_path, &ctx)?;
            Some(delta_eui(&reports, &ref_reports)?)
        }
        None => None,
    };
    let out = json!({
        "audit": summary,
        "rationality": rat,
        "mean_eui": mean,
        "delta_eui_pct": delta,
        "engine_version": ENGINE_VERSION,
    });
    match format {
        Format::Json => print_json(&out),
        Format::Human => {
            println!("corpus: {} plans, pass_all {:.1}%", reports.len(), out["audit"]["pass_all_rate"].as_f64().unwrap_or(0.0) * 100.0);
            println!("violations: energy {:.1}%, fire {:.1}%, area {:.1}%, connectivity {:.1}%",
                out["audit"]["violation_rates"]["energy"].as_f64().unwrap_or(0.0) * 100.0,
                out["audit"]["violation_rates"]["fire"].as_f64().unwrap_or(0.0) * 100.0,
                out["audit"]["violation_rates"]["area"].as_f64().unwrap_or(0.0) * 100.0,
                out["audit"]["violation_rates"]["connectivity"].as_f64().unwrap_or(0.0) * 100.0);
            println!("rationality {:.3}, mean EUI {:.1}", rat, mean);
            if let Some(d) = delta {
                println!("delta EUI vs reference: {d:+.2}%");
            }
        }
    }
    Ok(EXIT_OK)
}

fn run(cli: Cli, env: &EnvConfig) -> Result<i32> {
    let format = cli.format.or(env.format).unwrap_or(Format::Json);
    if let Some(jobs) = cli.jobs.or(env.jobs) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let Some(command) = cli.command else {
        bail!("missing subcommand; run with --help");
    };
    match command {
        Command::Evaluate {
            plan,
            eval,
            dump_distance,
        } => cmd_evaluate(&plan, &eval, dump_distance.as_deref(), env, format),
        Command::Label {
            manifest,
            out,
            eval,
        } => cmd_label(&manifest, out.as_deref(), &eval, env, format),
        Command::Audit { labels } => cmd_audit(&labels, format),
        Command::Resample {
            manifest,
            out_dir,
            budget,
            seed,
            steps,
            eval,
        } => cmd_resample(&manifest, &out_dir, budget, seed, steps, &eval, env, format),
        Command::Optimize {
            plan,
            target_eui,
            target_fire,
            target_area,
            require_connectivity,
            lambda_rec,
            reference,
            steps,
            seed,
            trace,
            out,
            eval,
        } => cmd_optimize(
            &plan,
            (target_eui, target_fire, target_area, require_connectivity),
            lambda_rec,
            reference.as_deref(),
            steps,
            seed,
            trace.as_deref(),
            out.as_deref(),
            &eval,
            env,
            format,
        ),
        Command::Metrics {
            corpus,
            reference,
            eval,
        } => cmd_metrics(&corpus, &reference, &eval, env, format),
        Command::Synth {
            count,
            seed,
            noise,
            out_dir,
            width,
            height,
            rooms,
            scale,
        } => cmd_synth(count, seed, noise, &out_dir, width, height, &rooms, scale, format),
        Command::Report {
            manifest,
            reference,
            eval,
        } => cmd_report(&manifest, reference.as_deref(), &eval, env, format),
    }
}

fn parse_args() -> std::result::Result<ArgMatches, clap::Error> {
    Cli::command().try_get_matches()
}

fn main() {
    let matches = match parse_args() {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            e.print().ok();
            std::process::exit(code);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            e.print().ok();
            std::process::exit(EXIT_USAGE);
        }
    };
    if cli.version {
        println!("{}", version_string());
        std::process::exit(EXIT_OK);
    }
    let env = match load_env_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(EXIT_FATAL);
        }
    };
    match run(cli, &env) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(EXIT_FATAL);
        }
    }
}
