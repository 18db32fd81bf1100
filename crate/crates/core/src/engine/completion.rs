use serde::{Deserialize, Serialize};

use super::matching::{hall_violator, maximum_matching};
use super::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::prepare::PreparedGuest;
use crate::vertex_set::VertexSet;

/// No system of distinct representatives exists for the tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionFailure {
    /// Tail positions `X` violating Hall's condition.
    pub hall_witness: Vec<u32>,
    /// `⋃_{x∈X} C*(x)`, strictly smaller than `X`.
    pub witness_candidates: Vec<u32>,
    /// Size of the maximum matching that was found.
    pub matched: usize,
}

/// `C*(x)`: unused host vertices adjacent in `reservoir` to the image of
/// every guest neighbor of `x`.
pub fn completion_candidates(
    guest: &PreparedGuest,
    reservoir: &Graph,
    phi: &Embedding,
    x: u32,
) -> Result<VertexSet> {
    let mut set = VertexSet::full(reservoir.n());
    set.difference_with(&phi.image_set());
    for &y in guest.graph().neighbors(x) {
        let v = phi.image(y).ok_or_else(|| {
            Error::Precondition(format!("neighbor {y} of tail position {x} is not embedded"))
        })?;
        reservoir.restrict_to_neighbors(v, &mut set);
    }
    Ok(set)
}

/// Extends `phi` to the tail by a perfect matching between tail positions
/// and unused host vertices, where `x` may go to `v` iff `v ∈ C*(x)`.
///
/// The outer `Result` reports violated preconditions; the inner one is the
/// algorithmic outcome.
pub fn complete_embedding(
    guest: &PreparedGuest,
    reservoir: &Graph,
    phi: &Embedding,
) -> Result<Result<Embedding, CompletionFailure>> {
    let n = guest.n();
    if reservoir.n() != n || phi.host_n() != n || phi.guest_n() != n {
        return Err(Error::Precondition("guest, host and map orders differ".into()));
    }
    let bulk_len = guest.bulk_len();
    if phi.len() != bulk_len || (0..bulk_len as u32).any(|p| phi.image(p).is_none()) {
        return Err(Error::Precondition(format!(
            "expected exactly the {bulk_len} non-tail positions to be embedded, found {}",
            phi.len()
        )));
    }
    let used = phi.image_set();
    let free: Vec<u32> = (0..n as u32).filter(|&v| !used.contains(v)).collect();
    let mut slot = vec![u32::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        slot[v as usize] = i as u32;
    }

    let tail: Vec<u32> = (bulk_len as u32..n as u32).collect();
    let mut adj = Vec::with_capacity(tail.len());
    for &x in &tail {
        let c = completion_candidates(guest, reservoir, phi, x)?;
        adj.push(c.iter().map(|v| slot[v as usize]).collect::<Vec<_>>());
    }

    let matching = maximum_matching(&adj, free.len());
    if let Some((xs, ys)) = hall_violator(&adj, &matching) {
        return Ok(Err(CompletionFailure {
            hall_witness: xs.iter().map(|&i| tail[i as usize]).collect(),
            witness_candidates: ys.iter().map(|&j| free[j as usize]).collect(),
            matched: matching.size,
        }));
    }
    let mut full = phi.clone();
    for (i, mate) in matching.left_to_right.iter().enumerate() {
        let v = free[mate.expect("perfect matching") as usize];
        full.assign(tail[i], v);
    }
    Ok(Ok(full))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Guest on 4 positions: 0-2, 0-3 (tail {2,3}, degree 1).
    fn cherry() -> PreparedGuest {
        PreparedGuest::from_positional(Graph::from_edges(4, [(0, 2), (0, 3)]).unwrap(), 2).unwrap()
    }

    fn phi(pairs: &[(u32, u32)]) -> Embedding {
        let mut e = Embedding::new(4, 4);
        for &(p, v) in pairs {
            e.assign(p, v);
        }
        e
    }

    #[test]
    fn degree_zero_tail_sees_all_unused_vertices() {
        let g = PreparedGuest::from_positional(Graph::from_edges(4, [(0, 1)]).unwrap(), 2).unwrap();
        let c = completion_candidates(&g, &Graph::empty(4), &phi(&[(0, 3), (1, 1)]), 2).unwrap();
        assert_eq!(c.to_vec(), vec![0, 2]);
    }

    #[test]
    fn single_neighbor_tail_sees_reservoir_neighborhood() {
        let reservoir = Graph::from_edges(4, [(1, 0), (1, 2), (1, 3)]).unwrap();
        let c = completion_candidates(&cherry(), &reservoir, &phi(&[(0, 1), (1, 3)]), 2).unwrap();
        assert_eq!(c.to_vec(), vec![0, 2]);
    }

    #[test]
    fn completes_when_candidates_suffice() {
        let reservoir = Graph::complete(4);
        let done = complete_embedding(&cherry(), &reservoir, &phi(&[(0, 1), (1, 3)]))
            .unwrap()
            .unwrap();
        assert!(done.is_complete());
        for x in [2, 3] {
            assert!(reservoir.has_edge(done.image(0).unwrap(), done.image(x).unwrap()));
        }
    }

    #[test]
    fn shared_single_candidate_violates_hall() {
        // only vertex 0 is a reservoir neighbor of φ(0) = 1 among unused {0, 2}
        let reservoir = Graph::from_edges(4, [(1, 0)]).unwrap();
        let f = complete_embedding(&cherry(), &reservoir, &phi(&[(0, 1), (1, 3)]))
            .unwrap()
            .unwrap_err();
        assert_eq!(f.hall_witness, vec![2, 3]);
        assert_eq!(f.witness_candidates, vec![0]);
        assert_eq!(f.matched, 1);
    }

    #[test]
    fn requires_exactly_the_bulk_embedded() {
        let reservoir = Graph::complete(4);
        assert!(complete_embedding(&cherry(), &reservoir, &phi(&[(0, 1)])).is_err());
        assert!(complete_embedding(&cherry(), &reservoir, &phi(&[(0, 1), (1, 2), (2, 0)])).is_err());
    }
}
