use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::prepare::PreparedGuest;
use crate::rng::uniform_index;
use crate::vertex_set::VertexSet;

/// The greedy phase found no unused vertex in a candidate set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedFailure {
    /// Guest position that could not be placed.
    pub position: u32,
    /// `|im(ψ)|` when the failure happened.
    pub image_size: usize,
}

/// `N_host(ψ(N⁻(t)))`, including vertices already used by `psi`.
pub fn candidate_set(
    guest: &PreparedGuest,
    host: &Graph,
    psi: &Embedding,
    t: usize,
) -> Result<VertexSet> {
    let mut set = VertexSet::full(host.n());
    for &p in guest.left_neighbors(t) {
        let v = psi.image(p).ok_or_else(|| {
            Error::Precondition(format!(
                "left neighbor {p} of position {t} is not embedded"
            ))
        })?;
        host.restrict_to_neighbors(v, &mut set);
    }
    Ok(set)
}

/// Embeds positions `0..guest.bulk_len()` in order, each onto a uniformly
/// random unused vertex of its candidate set. Stops at the first position
/// whose candidate set is exhausted.
///
/// Each step consumes exactly one `u64` from `rng`.
///
/// # Panics
///
/// If the guest and host have different orders.
pub fn random_embedding<R: RngCore + ?Sized>(
    guest: &PreparedGuest,
    host: &Graph,
    rng: &mut R,
) -> Result<Embedding, (Embedding, EmbedFailure)> {
    assert_eq!(guest.n(), host.n(), "guest and host orders differ");
    let n = host.n();
    let mut psi = Embedding::new(n, n);
    let mut used = VertexSet::empty(n);
    let mut cand = VertexSet::full(n);
    for t in 0..guest.bulk_len() {
        cand.fill();
        for &p in guest.left_neighbors(t) {
            // left neighbors precede t, so they are embedded
            let v = psi.image(p).expect("left neighbor embedded");
            host.restrict_to_neighbors(v, &mut cand);
        }
        cand.difference_with(&used);
        let available = cand.len();
        if available == 0 {
            let failure = EmbedFailure {
                position: t as u32,
                image_size: psi.len(),
            };
            return Err((psi, failure));
        }
        let v = cand
            .nth(uniform_index(rng, available))
            .expect("index below set size");
        psi.assign(t as u32, v);
        used.insert(v);
    }
    Ok(psi)
}
