use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{pairs, Graph};

/// The bulk `H_s` and reservoir `H*_s` of a running packing, plus the
/// reservoir degrees at stage 0 for drain tracking.
#[derive(Debug, Clone)]
pub struct HostState {
    pub bulk: Graph,
    pub reservoir: Graph,
    pub stage: usize,
    initial_reservoir_degrees: Vec<usize>,
}

impl HostState {
    pub fn new(bulk: Graph, reservoir: Graph) -> Self {
        let initial_reservoir_degrees = reservoir.degrees();
        Self {
            bulk,
            reservoir,
            stage: 0,
            initial_reservoir_degrees,
        }
    }

    pub fn n(&self) -> usize {
        self.bulk.n()
    }

    /// `max_v deg_{H*_0}(v) - deg_{H*_s}(v)`.
    pub fn max_reservoir_drain(&self) -> usize {
        self.initial_reservoir_degrees
            .iter()
            .enumerate()
            .map(|(v, &d0)| d0 - self.reservoir.degree(v as u32))
            .max()
            .unwrap_or(0)
    }

    /// Whether bulk and reservoir share an edge.
    pub fn overlapping(&self) -> bool {
        self.reservoir
            .edges()
            .any(|(u, v)| self.bulk.has_edge(u, v))
    }
}

/// Probability with which each host edge joins the reservoir:
/// `gamma * C(n,2) / e(hhat)`.
pub fn reservoir_probability(hhat: &Graph, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) || gamma.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if hhat.m() == 0 {
        return Err(Error::InvalidParameter(
            "host has no edges to put in the reservoir".into(),
        ));
    }
    let q = gamma * pairs(hhat.n()) as f64 / hhat.m() as f64;
    if q > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} needs reservoir probability {q:.4} > 1; host density is {:.4}",
            hhat.density()
        )));
    }
    Ok(q)
}

/// Puts every edge of `hhat` into the reservoir independently with
/// probability [`reservoir_probability`], the rest into the bulk.
///
/// Edges are visited in lexicographic order and each consumes one `f64`
/// draw.
pub fn split_bulk_reservoir<R: Rng + ?Sized>(
    hhat: &Graph,
    gamma: f64,
    rng: &mut R,
) -> Result<HostState> {
    let q = reservoir_probability(hhat, gamma)?;
    let mut bulk = Vec::with_capacity(hhat.m());
    let mut reservoir = Vec::new();
    for (u, v) in hhat.edges() {
        let draw: f64 = rng.gen();
        if draw < q {
            reservoir.push((u, v));
        } else {
            bulk.push((u, v));
        }
    }
    let n = hhat.n();
    Ok(HostState::new(
        Graph::from_edges(n, bulk)?,
        Graph::from_edges(n, reservoir)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn complete_host_uses_gamma_directly() {
        assert_eq!(reservoir_probability(&Graph::complete(20), 0.3).unwrap(), 0.3);
    }

    #[test]
    fn zero_gamma_keeps_everything_in_bulk() {
        let h = Graph::complete(12);
        let st = split_bulk_reservoir(&h, 0.0, &mut stream_rng(3, 0)).unwrap();
        assert_eq!(st.bulk, h);
        assert_eq!(st.reservoir.m(), 0);
    }

    #[test]
    fn too_large_gamma_is_rejected() {
        let sparse = Graph::from_edges(10, [(0, 1), (2, 3)]).unwrap();
        assert!(split_bulk_reservoir(&sparse, 0.5, &mut stream_rng(1, 0)).is_err());
    }

    #[test]
    fn split_partitions_edges() {
        let h = Graph::complete(40);
        let st = split_bulk_reservoir(&h, 0.25, &mut stream_rng(9, 0)).unwrap();
        assert_eq!(st.bulk.m() + st.reservoir.m(), h.m());
        assert!(!st.overlapping());
        assert_eq!(st.max_reservoir_drain(), 0);
        let again = split_bulk_reservoir(&h, 0.25, &mut stream_rng(9, 0)).unwrap();
        assert_eq!(again.reservoir, st.reservoir);
    }
}
