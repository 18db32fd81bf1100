use log::warn;
use serde::{Deserialize, Serialize};

use super::completion::{complete_embedding, CompletionFailure};
use super::greedy::{random_embedding, EmbedFailure};
use super::host::{split_bulk_reservoir, HostState};
use super::Embedding;
use crate::audit::{coquasirandomness_error, quasirandomness_error, AuditPolicy, AuditReport};
use crate::error::{Error, Result};
use crate::graph::{pairs, EdgeIndex, Graph};
use crate::prepare::PreparedGuest;
use crate::rng::{stream_rng, SPLIT_STREAM};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Target reservoir density.
    pub gamma: f64,
    /// Tail fraction the guests were prepared with.
    pub delta: f64,
    pub rng_seed: u64,
    /// Stages after which to audit the host; `0` is right after the split.
    pub audit_checkpoints: Vec<usize>,
    pub audit_policy: AuditPolicy,
    /// Record completion failures and keep going instead of stopping.
    pub continue_on_completion_failure: bool,
}

impl RunConfig {
    pub fn new(gamma: f64, delta: f64, rng_seed: u64) -> Self {
        Self {
            gamma,
            delta,
            rng_seed,
            audit_checkpoints: Vec::new(),
            audit_policy: AuditPolicy::default(),
            continue_on_completion_failure: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            bad.push(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            bad.push(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if let Err(Error::Config(more)) = self.audit_policy.validate() {
            bad.extend(more);
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }
}

/// The five default checkpoints `0, s*/4, s*/2, 3s*/4, s*`.
pub fn default_checkpoints(stages: usize) -> Vec<usize> {
    vec![0, stages / 4, stages / 2, 3 * stages / 4, stages]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Embedding,
    Completion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    /// 1-based stage.
    pub stage: usize,
    pub phase: Phase,
    pub embed: Option<EmbedFailure>,
    pub completion: Option<CompletionFailure>,
}

impl FailureRecord {
    /// Failing position (embedding) or Hall witness size (completion).
    pub fn detail(&self) -> usize {
        match (&self.embed, &self.completion) {
            (Some(e), _) => e.position as usize,
            (_, Some(c)) => c.hall_witness.len(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub stage: usize,
    pub bulk_edges_removed: usize,
    pub reservoir_edges_removed: usize,
    pub bulk_edges_left: usize,
    pub reservoir_edges_left: usize,
    /// `max_v deg_{H*_0}(v) - deg_{H*_s}(v)` after this stage.
    pub max_reservoir_drain: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointAudit {
    pub stage: usize,
    pub bulk_quasirandom: Option<AuditReport>,
    pub bulk_reservoir_coquasirandom: Option<AuditReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PackingResult {
    pub n: usize,
    pub host_edges: usize,
    pub guest_count: usize,
    /// Per guest, in input order. Guests after a failed stage are absent.
    pub embeddings: Vec<Embedding>,
    /// Per host edge (in lexicographic edge order): `0` if uncovered,
    /// otherwise the 1-based guest index.
    pub colors: Vec<u32>,
    /// Ids of the host edges that were put into the reservoir.
    pub reservoir_edges: Vec<u32>,
    pub failure: Option<FailureRecord>,
    /// Completion failures skipped in continue mode.
    pub ignored_failures: Vec<FailureRecord>,
    pub uncovered: usize,
    pub stages: Vec<StageStats>,
    pub checkpoints: Vec<CheckpointAudit>,
    pub warnings: Vec<String>,
}

impl PackingResult {
    pub fn is_success(&self) -> bool {
        self.failure.is_none()
            && self.ignored_failures.is_empty()
            && self.embeddings.len() == self.guest_count
    }

    pub fn max_reservoir_drain(&self) -> usize {
        self.stages.last().map_or(0, |s| s.max_reservoir_drain)
    }

    /// The color array as little-endian `u32`s.
    pub fn colors_le_bytes(&self) -> Vec<u8> {
        self.colors.iter().flat_map(|c| c.to_le_bytes()).collect()
    }
}

fn audit_host(state: &HostState, stage: usize, policy: &AuditPolicy) -> CheckpointAudit {
    CheckpointAudit {
        stage,
        bulk_quasirandom: quasirandomness_error(&state.bulk, policy).ok(),
        bulk_reservoir_coquasirandom: coquasirandomness_error(
            &state.bulk,
            &state.reservoir,
            policy,
        )
        .ok(),
    }
}

/// Packs `guests` into `hhat`: split into bulk and reservoir, then per
/// guest a greedy embedding of the non-tail positions into the bulk and a
/// matching-based completion of the tail into the reservoir, deleting used
/// edges after each phase.
///
/// Algorithmic failures end up in [`PackingResult::failure`]; the `Err`
/// branch is reserved for inconsistent inputs.
pub fn packing_process(
    guests: &[PreparedGuest],
    hhat: &Graph,
    cfg: &RunConfig,
) -> Result<PackingResult> {
    cfg.validate()?;
    let n = hhat.n();
    if let Some(bad) = guests.iter().position(|g| g.n() != n) {
        return Err(Error::Precondition(format!(
            "guest {bad} has {} vertices, host has {n}",
            guests[bad].n()
        )));
    }
    let mut warnings = Vec::new();
    let total: usize = guests.iter().map(PreparedGuest::edge_count).sum();
    let budget = hhat.m() as f64 - cfg.gamma * pairs(n) as f64;
    if total as f64 > budget {
        let msg = format!(
            "guests have {total} edges, above the budget e(H) - gamma*C(n,2) = {budget:.0}"
        );
        warn!("{msg}");
        warnings.push(msg);
    }
    let expected_tail = (cfg.delta * n as f64).floor() as usize;
    if let Some(g) = guests.iter().find(|g| g.tail_len() != expected_tail) {
        warnings.push(format!(
            "guest tail length {} differs from floor(delta*n) = {expected_tail}",
            g.tail_len()
        ));
    }

    let index = EdgeIndex::new(hhat);
    let mut colors = vec![0u32; index.len()];
    let mut state = split_bulk_reservoir(hhat, cfg.gamma, &mut stream_rng(cfg.rng_seed, SPLIT_STREAM))?;
    let reservoir_edges: Vec<u32> = state
        .reservoir
        .edges()
        .map(|(u, v)| index.get(u, v).expect("reservoir edge is a host edge") as u32)
        .collect();

    let mut checkpoints = Vec::new();
    if cfg.audit_checkpoints.contains(&0) {
        checkpoints.push(audit_host(&state, 0, &cfg.audit_policy));
    }

    let mut embeddings = Vec::with_capacity(guests.len());
    let mut stages = Vec::with_capacity(guests.len());
    let mut failure = None;
    let mut ignored_failures = Vec::new();

    for (i, guest) in guests.iter().enumerate() {
        let stage = i + 1;
        let color = stage as u32;
        let mut rng = stream_rng(cfg.rng_seed, stage as u64);
        let phi = match random_embedding(guest, &state.bulk, &mut rng) {
            Ok(phi) => phi,
            Err((_, f)) => {
                failure = Some(FailureRecord {
                    stage,
                    phase: Phase::Embedding,
                    embed: Some(f),
                    completion: None,
                });
                break;
            }
        };

        let bulk_before = state.bulk.m();
        let bulk_len = guest.bulk_len() as u32;
        for (a, b) in guest.graph().edges().filter(|&(_, b)| b < bulk_len) {
            let (u, v) = (phi.image(a).expect("embedded"), phi.image(b).expect("embedded"));
            let removed = state.bulk.remove_edge(u, v);
            debug_assert!(removed);
            colors[index.get(u, v).expect("bulk edge is a host edge")] = color;
        }
        let bulk_removed = bulk_before - state.bulk.m();

        let reservoir_before = state.reservoir.m();
        let full = match complete_embedding(guest, &state.reservoir, &phi)? {
            Ok(full) => full,
            Err(c) => {
                let record = FailureRecord {
                    stage,
                    phase: Phase::Completion,
                    embed: None,
                    completion: Some(c),
                };
                if cfg.continue_on_completion_failure {
                    ignored_failures.push(record);
                    embeddings.push(phi);
                    state.stage = stage;
                    stages.push(stage_stats(&state, stage, bulk_removed, 0));
                    if cfg.audit_checkpoints.contains(&stage) {
                        checkpoints.push(audit_host(&state, stage, &cfg.audit_policy));
                    }
                    continue;
                }
                failure = Some(record);
                embeddings.push(phi);
                break;
            }
        };
        for (a, b) in guest.graph().edges().filter(|&(_, b)| b >= bulk_len) {
            let (u, v) = (full.image(a).expect("embedded"), full.image(b).expect("embedded"));
            let removed = state.reservoir.remove_edge(u, v);
            debug_assert!(removed);
            colors[index.get(u, v).expect("reservoir edge is a host edge")] = color;
        }
        let reservoir_removed = reservoir_before - state.reservoir.m();
        embeddings.push(full);
        state.stage = stage;
        stages.push(stage_stats(&state, stage, bulk_removed, reservoir_removed));
        if cfg.audit_checkpoints.contains(&stage) {
            checkpoints.push(audit_host(&state, stage, &cfg.audit_policy));
        }
    }

    let uncovered = colors.iter().filter(|&&c| c == 0).count();
    Ok(PackingResult {
        n,
        host_edges: hhat.m(),
        guest_count: guests.len(),
        embeddings,
        colors,
        reservoir_edges,
        failure,
        ignored_failures,
        uncovered,
        stages,
        checkpoints,
        warnings,
    })
}

fn stage_stats(state: &HostState, stage: usize, bulk: usize, reservoir: usize) -> StageStats {
    StageStats {
        stage,
        bulk_edges_removed: bulk,
        reservoir_edges_removed: reservoir,
        bulk_edges_left: state.bulk.m(),
        reservoir_edges_left: state.reservoir.m(),
        max_reservoir_drain: state.max_reservoir_drain(),
    }
}
