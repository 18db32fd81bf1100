//! The packing process: bulk/reservoir split, greedy embedding of each
//! guest's non-tail positions into the bulk, matching-based completion of
//! its tail into the reservoir, and an independent checker for the result.

mod completion;
mod embedding;
mod greedy;
mod host;
pub mod matching;
mod process;
mod verify;

pub use completion::{complete_embedding, completion_candidates, CompletionFailure};
pub use embedding::Embedding;
pub use greedy::{candidate_set, random_embedding, EmbedFailure};
pub use host::{reservoir_probability, split_bulk_reservoir, HostState};
pub use process::{
    default_checkpoints, packing_process, CheckpointAudit, FailureRecord, PackingResult, Phase,
    RunConfig, StageStats,
};
pub use verify::{verify_packing, Verdict, Violation};
