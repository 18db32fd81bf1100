//! Multi-trial experiments: one CSV row per trial plus a JSON summary.
//!
//! Trial `i` runs with seed `trial_seed(master_seed, i)`. The host, the
//! guests and the packing each draw from their own seed derived from it, so
//! trials are independent of each other and of the worker count.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::AuditPolicy;
use crate::degeneracy::degeneracy;
use crate::engine::{default_checkpoints, packing_process, PackingResult, Phase, RunConfig};
use crate::error::{Error, Result};
use crate::generators::{GuestSpec, HostSpec};
use crate::graph::{pairs, Graph};
use crate::prepare::{prepare_guest_family, PrepareOptions, PreparedFamily};
use crate::rng::{derive_seed, stream_rng, trial_seed, RNG_VERSION};

const HOST_LABEL: u64 = 1;
const GUEST_LABEL: u64 = 2;
const PACK_LABEL: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub host: Option<HostSpec>,
    pub guests: Vec<GuestSpec>,
    pub gamma: f64,
    pub delta: f64,
    pub trials: usize,
    pub master_seed: u64,
    /// Audit stages; `None` means `0, s*/4, s*/2, 3s*/4, s*`.
    pub checkpoints: Option<Vec<usize>>,
    /// `None` means `AuditPolicy::for_degeneracy(D)`.
    pub policy: Option<AuditPolicy>,
    /// `D`; `None` takes the largest bound implied by the guest specs.
    pub max_degeneracy: Option<usize>,
    pub auto_shrink: bool,
    pub continue_on_completion_failure: bool,
    /// `0` uses every available core.
    pub workers: usize,
    /// Fill the `wall_ms` column. Off by default so that output is
    /// reproducible byte for byte.
    pub record_wall_time: bool,
    pub csv_out: Option<PathBuf>,
    pub summary_out: Option<PathBuf>,
    /// Per-trial host, guests, result JSON and binary color array.
    pub artifacts_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            host: None,
            guests: Vec::new(),
            gamma: 0.25,
            delta: 0.04,
            trials: 1,
            master_seed: 0,
            checkpoints: None,
            policy: None,
            max_degeneracy: None,
            auto_shrink: false,
            continue_on_completion_failure: false,
            workers: 0,
            record_wall_time: false,
            csv_out: None,
            summary_out: None,
            artifacts_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.host.is_none() {
            bad.push("host: missing".to_string());
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            bad.push(format!("gamma: must lie in (0, 1), got {}", self.gamma));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            bad.push(format!("delta: must lie in (0, 1), got {}", self.delta));
        }
        if self.trials == 0 {
            bad.push("trials: must be at least 1".to_string());
        }
        if let Some(Err(Error::Config(more))) = self.policy.as_ref().map(AuditPolicy::validate) {
            bad.extend(more.into_iter().map(|m| format!("policy.{m}")));
        }
        if let Some(n) = self.host.as_ref().and_then(HostSpec::n) {
            for (i, g) in self.guests.iter().enumerate() {
                let v = match *g {
                    GuestSpec::Tree { n, .. }
                    | GuestSpec::Degenerate { n, .. }
                    | GuestSpec::Star { n, .. }
                    | GuestSpec::Path { n, .. }
                    | GuestSpec::Gyarfas { n, .. } => n,
                    GuestSpec::Ringel { k } => k + 1,
                    GuestSpec::File(_) => 0,
                };
                if v > n {
                    bad.push(format!("guests[{i}]: {v} vertices exceed the host's {n}"));
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Success,
    EmbedFailure { stage: usize, position: usize },
    CompletionFailure { stage: usize, witness: usize },
}

impl Outcome {
    fn of(result: &PackingResult) -> Self {
        let failure = result.failure.as_ref().or(result.ignored_failures.first());
        match failure {
            None => Self::Success,
            Some(f) if f.phase == Phase::Embedding => Self::EmbedFailure {
                stage: f.stage,
                position: f.detail(),
            },
            Some(f) => Self::CompletionFailure {
                stage: f.stage,
                witness: f.detail(),
            },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Success => "success",
            Self::EmbedFailure { .. } => "embed_failure",
            Self::CompletionFailure { .. } => "completion_failure",
        }
    }

    pub fn stage(&self) -> Option<usize> {
        match *self {
            Self::Success => None,
            Self::EmbedFailure { stage, .. } | Self::CompletionFailure { stage, .. } => Some(stage),
        }
    }

    fn detail(&self) -> Option<usize> {
        match *self {
            Self::Success => None,
            Self::EmbedFailure { position, .. } => Some(position),
            Self::CompletionFailure { witness, .. } => Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotAudit {
    pub stage: usize,
    pub quasi: Option<f64>,
    pub coquasi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub outcome: Outcome,
    pub guests: usize,
    pub guest_edges: usize,
    pub host_edges: usize,
    pub tail_len: usize,
    pub uncovered: usize,
    pub max_reservoir_drain: usize,
    /// `max_v deg_{H*_0}(v) - deg_{H*_s}(v)` after each completed stage.
    pub drain_per_stage: Vec<usize>,
    /// One entry per checkpoint slot; stages the run never reached are `None`.
    pub audits: Vec<SlotAudit>,
    pub wall_ms: Option<u64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub count: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Nearest-rank quantiles; `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |q: f64| v[((q * (v.len() - 1) as f64).round() as usize).min(v.len() - 1)];
        Some(Self {
            count: v.len(),
            min: v[0],
            q25: at(0.25),
            median: at(0.5),
            q75: at(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSummary {
    pub slot: usize,
    /// Stages audited in this slot, ascending and deduplicated.
    pub stages: Vec<usize>,
    pub quasi: Option<Quantiles>,
    pub coquasi: Option<Quantiles>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rng_version: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub embed_failures: usize,
    pub completion_failures: usize,
    /// Failing stage → number of trials.
    pub failure_stage_histogram: BTreeMap<usize, usize>,
    pub checkpoints: Vec<CheckpointSummary>,
    pub uncovered: Option<Quantiles>,
    pub max_reservoir_drain: Option<Quantiles>,
    pub warnings: Vec<String>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
    pub csv: String,
}

/// Everything one trial needs, generated from its seed.
pub struct TrialInputs {
    pub seed: u64,
    pub host: Graph,
    pub guests: Vec<Graph>,
    pub family: PreparedFamily,
    pub run: RunConfig,
    /// Checkpoint slots: the stage audited in each CSV column pair.
    pub slots: Vec<usize>,
}

/// Generates the host, the guests and the run configuration of trial `index`.
pub fn trial_inputs(cfg: &ExperimentConfig, index: usize) -> Result<TrialInputs> {
    let seed = trial_seed(cfg.master_seed, index as u64);
    let host_spec = cfg
        .host
        .as_ref()
        .ok_or_else(|| Error::Config(vec!["host: missing".into()]))?;
    let host = host_spec.generate(&mut stream_rng(derive_seed(seed, HOST_LABEL), 0))?;
    let mut guest_rng = stream_rng(derive_seed(seed, GUEST_LABEL), 0);
    let mut guests = Vec::new();
    let mut bound = 0;
    for spec in &cfg.guests {
        let made = spec.generate(&mut guest_rng)?;
        bound = bound.max(match spec.degeneracy_bound() {
            Some(d) => d,
            None => made.iter().map(degeneracy).max().unwrap_or(0),
        });
        guests.extend(made);
    }
    let d = cfg.max_degeneracy.unwrap_or(bound.max(1));
    let family = prepare_guest_family(
        &guests,
        host.n(),
        d,
        &PrepareOptions {
            delta: cfg.delta,
            auto_shrink: cfg.auto_shrink,
        },
    )?;
    let stages = family.guests.len();
    let slots = match &cfg.checkpoints {
        Some(c) => c.clone(),
        None => default_checkpoints(stages),
    };
    let mut audit_checkpoints = slots.clone();
    audit_checkpoints.sort_unstable();
    audit_checkpoints.dedup();
    let run = RunConfig {
        gamma: cfg.gamma,
        delta: family.effective_delta,
        rng_seed: derive_seed(seed, PACK_LABEL),
        audit_checkpoints,
        audit_policy: cfg
            .policy
            .clone()
            .unwrap_or_else(|| AuditPolicy::for_degeneracy(d)),
        continue_on_completion_failure: cfg.continue_on_completion_failure,
    };
    Ok(TrialInputs {
        seed,
        host,
        guests,
        family,
        run,
        slots,
    })
}

fn run_trial(cfg: &ExperimentConfig, index: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let inputs = trial_inputs(cfg, index)?;
    let result = packing_process(&inputs.family.guests, &inputs.host, &inputs.run)?;
    let wall_ms = cfg
        .record_wall_time
        .then(|| start.elapsed().as_millis() as u64);

    if let Some(dir) = &cfg.artifacts_dir {
        write_artifacts(&dir.join(format!("trial_{index:04}")), &inputs, &result)?;
    }

    let audits = inputs
        .slots
        .iter()
        .map(|&stage| {
            let cp = result.checkpoints.iter().find(|c| c.stage == stage);
            SlotAudit {
                stage,
                quasi: cp.and_then(|c| c.bulk_quasirandom.as_ref()).map(|r| r.deviation),
                coquasi: cp
                    .and_then(|c| c.bulk_reservoir_coquasirandom.as_ref())
                    .map(|r| r.deviation),
            }
        })
        .collect();
    let mut warnings = inputs.family.warnings.clone();
    warnings.extend(result.warnings.iter().cloned());
    let guest_edges = inputs.family.guests.iter().map(|g| g.edge_count()).sum();
    Ok(TrialRecord {
        trial: index,
        seed: inputs.seed,
        outcome: Outcome::of(&result),
        guests: inputs.family.guests.len(),
        guest_edges,
        host_edges: inputs.host.m(),
        tail_len: inputs.family.tail_len,
        uncovered: result.uncovered,
        max_reservoir_drain: result.max_reservoir_drain(),
        drain_per_stage: result.stages.iter().map(|s| s.max_reservoir_drain).collect(),
        audits,
        wall_ms,
        warnings,
    })
}

/// Writes `host.txt`, `guest_NNN.txt` (the original guests), `result.json`
/// and `colors.bin` (little-endian `u32` per host edge) into `dir`.
pub fn write_artifacts(dir: &Path, inputs: &TrialInputs, result: &PackingResult) -> Result<()> {
    fs::create_dir_all(dir)?;
    inputs.host.write_edge_list(fs::File::create(dir.join("host.txt"))?)?;
    for (j, g) in inputs.guests.iter().enumerate() {
        g.write_edge_list(fs::File::create(dir.join(format!("guest_{j:03}.txt")))?)?;
    }
    let file = fs::File::create(dir.join("result.json"))?;
    serde_json::to_writer(std::io::BufWriter::new(file), result)?;
    fs::write(dir.join("colors.bin"), result.colors_le_bytes())?;
    Ok(())
}

fn csv_header(slots: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "trial",
        "outcome",
        "fail_stage",
        "fail_pos",
        "uncovered",
        "max_reservoir_drain",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for i in 0..slots {
        h.push(format!("audit_quasi_cp{i}"));
        h.push(format!("audit_coquasi_cp{i}"));
    }
    h.push("wall_ms".into());
    h
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders the trial table. Column set depends only on the slot count.
pub fn render_csv(records: &[TrialRecord], slots: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(slots))?;
    for r in records {
        let mut row = vec![
            r.trial.to_string(),
            r.outcome.label().to_string(),
            opt(r.outcome.stage()),
            opt(r.outcome.detail()),
            r.uncovered.to_string(),
            r.max_reservoir_drain.to_string(),
        ];
        for i in 0..slots {
            let a = r.audits.get(i);
            row.push(opt(a.and_then(|a| a.quasi)));
            row.push(opt(a.and_then(|a| a.coquasi)));
        }
        row.push(opt(r.wall_ms));
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Summary {
    let successes = records.iter().filter(|r| r.outcome == Outcome::Success).count();
    let mut histogram = BTreeMap::new();
    let (mut embed, mut completion) = (0, 0);
    for r in records {
        match r.outcome {
            Outcome::Success => {}
            Outcome::EmbedFailure { stage, .. } => {
                embed += 1;
                *histogram.entry(stage).or_insert(0) += 1;
            }
            Outcome::CompletionFailure { stage, .. } => {
                completion += 1;
                *histogram.entry(stage).or_insert(0) += 1;
            }
        }
    }
    let slots = records.iter().map(|r| r.audits.len()).max().unwrap_or(0);
    let checkpoints = (0..slots)
        .map(|i| {
            let audits: Vec<&SlotAudit> = records.iter().filter_map(|r| r.audits.get(i)).collect();
            let mut stages: Vec<usize> = audits.iter().map(|a| a.stage).collect();
            stages.sort_unstable();
            stages.dedup();
            let quasi: Vec<f64> = audits.iter().filter_map(|a| a.quasi).collect();
            let coquasi: Vec<f64> = audits.iter().filter_map(|a| a.coquasi).collect();
            CheckpointSummary {
                slot: i,
                stages,
                quasi: Quantiles::of(&quasi),
                coquasi: Quantiles::of(&coquasi),
            }
        })
        .collect();
    let mut warnings: Vec<String> = records.iter().flat_map(|r| r.warnings.clone()).collect();
    warnings.sort();
    warnings.dedup();
    let as_f64 = |f: fn(&TrialRecord) -> usize| -> Vec<f64> {
        records.iter().map(|r| f(r) as f64).collect()
    };
    Summary {
        rng_version: RNG_VERSION.to_string(),
        trials: records.len(),
        successes,
        success_rate: if records.is_empty() {
            0.0
        } else {
            successes as f64 / records.len() as f64
        },
        embed_failures: embed,
        completion_failures: completion,
        failure_stage_histogram: histogram,
        checkpoints,
        uncovered: Quantiles::of(&as_f64(|r| r.uncovered)),
        max_reservoir_drain: Quantiles::of(&as_f64(|r| r.max_reservoir_drain)),
        warnings,
        config: cfg.clone(),
    }
}

/// Warns when the guests of the first trial exceed `(p - 3γ)·C(n, 2)`.
fn budget_warning(cfg: &ExperimentConfig, first: &TrialRecord) -> Option<String> {
    let n = cfg.host.as_ref()?.n()?;
    let c = pairs(n) as f64;
    let p = first.host_edges as f64 / c;
    let budget = (p - 3.0 * cfg.gamma) * c;
    (first.guest_edges as f64 > budget).then(|| {
        format!(
            "guest edges {} exceed (p - 3*gamma)*C(n,2) = {budget:.0}; the packing guarantee does not apply",
            first.guest_edges
        )
    })
}

/// Runs all trials, writes the configured outputs and returns them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let run_all = || -> Result<Vec<TrialRecord>> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(cfg, i))
            .collect()
    };
    let mut records = if cfg.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run_all)?
    } else {
        run_all()?
    };
    if let Some(w) = records.first().and_then(|r| budget_warning(cfg, r)) {
        log::warn!("{w}");
        records[0].warnings.push(w);
    }
    let slots = records.iter().map(|r| r.audits.len()).max().unwrap_or(0);
    let csv = render_csv(&records, slots)?;
    let summary = summarize(cfg, &records);
    if let Some(path) = &cfg.csv_out {
        fs::write(path, &csv)?;
    }
    if let Some(path) = &cfg.summary_out {
        let mut f = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &summary)?;
        writeln!(f)?;
    }
    Ok(ExperimentOutput {
        records,
        summary,
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            host: Some("complete:n=12".parse().unwrap()),
            gamma: 0.2,
            delta: 0.1,
            ..Default::default()
        }
    }

    #[test]
    fn zero_guests_single_trial() {
        let out = run_experiment(&tiny()).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].outcome, Outcome::Success);
        assert_eq!(out.records[0].uncovered, 66);
        assert_eq!(out.summary.success_rate, 1.0);
        let mut lines = out.csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "trial,outcome,fail_stage,fail_pos,uncovered,max_reservoir_drain,\
             audit_quasi_cp0,audit_coquasi_cp0,audit_quasi_cp1,audit_coquasi_cp1,\
             audit_quasi_cp2,audit_coquasi_cp2,audit_quasi_cp3,audit_coquasi_cp3,\
             audit_quasi_cp4,audit_coquasi_cp4,wall_ms"
        );
        assert!(lines.next().unwrap().starts_with("0,success,,,66,0,"));
    }

    #[test]
    fn validation_lists_every_field() {
        let cfg = ExperimentConfig {
            host: None,
            gamma: 1.5,
            delta: 0.0,
            trials: 0,
            ..Default::default()
        };
        let Err(Error::Config(bad)) = cfg.validate() else {
            panic!("expected config error")
        };
        assert_eq!(bad.len(), 4, "{bad:?}");
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let cfg = ExperimentConfig {
            host: Some("gnp:n=40,p=0.8".parse().unwrap()),
            guests: vec!["tree:n=30,count=3".parse().unwrap()],
            gamma: 0.2,
            delta: 0.05,
            trials: 6,
            master_seed: 11,
            auto_shrink: true,
            ..Default::default()
        };
        let a = run_experiment(&ExperimentConfig { workers: 1, ..cfg.clone() }).unwrap();
        let b = run_experiment(&ExperimentConfig { workers: 3, ..cfg }).unwrap();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = ExperimentConfig {
            guests: vec!["degen:D=2,maxdeg=30,n=150,count=4".parse().unwrap()],
            checkpoints: Some(vec![0, 3]),
            ..tiny()
        };
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&json).unwrap(), cfg);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"gama": 0.2}"#).is_err());
    }

    #[test]
    fn quantiles() {
        let q = Quantiles::of(&[3.0, 1.0, 2.0, 5.0, 4.0]).unwrap();
        assert_eq!((q.min, q.q25, q.median, q.q75, q.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert!(Quantiles::of(&[]).is_none());
    }
}
