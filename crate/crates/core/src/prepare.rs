//! Turning an arbitrary family of degenerate guests into spanning guests with
//! a fixed ordering and an independent, equal-degree final segment.
//!
//! The pipeline per family:
//!
//! 1. strip isolated vertices from every guest;
//! 2. while two guests both have at most `n/2` vertices, replace them by
//!    their disjoint union;
//! 3. pad each result with isolated vertices to exactly `n`;
//! 4. order it by degeneracy, extract an equal-degree independent set and
//!    move `tail_len` of its vertices to the end, with the remaining
//!    isolated vertices placed immediately before them.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::degeneracy::{
    degeneracy, degeneracy_order, equal_degree_independent_set, equal_degree_set_guarantee,
    OrderedGraph,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Where a prepared-guest vertex came from: input guest index and vertex id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub guest: usize,
    pub vertex: u32,
}

/// A spanning guest whose vertex `t` sits at position `t` of its ordering.
///
/// The last `tail_len` positions are independent and all have degree
/// `tail_degree`.
#[derive(Debug, Clone)]
pub struct PreparedGuest {
    ordered: OrderedGraph,
    tail_len: usize,
    tail_degree: usize,
    completion_degrees: Vec<usize>,
    origins: Vec<Option<Origin>>,
    sources: Vec<usize>,
}

impl PreparedGuest {
    /// Builds a prepared guest from a graph already labelled by position.
    pub fn from_positional(graph: Graph, tail_len: usize) -> Result<Self> {
        let n = graph.n();
        Self::assemble(graph, tail_len, vec![None; n], Vec::new())
    }

    fn assemble(
        graph: Graph,
        tail_len: usize,
        origins: Vec<Option<Origin>>,
        sources: Vec<usize>,
    ) -> Result<Self> {
        let n = graph.n();
        if tail_len > n {
            return Err(Error::InvalidParameter(format!(
                "tail length {tail_len} exceeds {n} vertices"
            )));
        }
        let first_tail = (n - tail_len) as u32;
        let mut tail_degree = None;
        for x in first_tail..n as u32 {
            if graph.neighbors(x).iter().any(|&y| y >= first_tail) {
                return Err(Error::InvalidParameter(format!(
                    "tail vertex {x} has a neighbor inside the tail"
                )));
            }
            let d = graph.degree(x);
            match tail_degree {
                None => tail_degree = Some(d),
                Some(t) if t != d => {
                    return Err(Error::InvalidParameter(format!(
                        "tail vertex {x} has degree {d}, expected {t}"
                    )))
                }
                _ => {}
            }
        }
        let completion_degrees = (0..first_tail)
            .map(|x| {
                graph
                    .neighbors(x)
                    .iter()
                    .filter(|&&y| y >= first_tail)
                    .count()
            })
            .collect();
        Ok(Self {
            ordered: OrderedGraph::identity(graph),
            tail_len,
            tail_degree: tail_degree.unwrap_or(0),
            completion_degrees,
            origins,
            sources,
        })
    }

    pub fn ordered(&self) -> &OrderedGraph {
        &self.ordered
    }

    /// The guest, labelled by position.
    pub fn graph(&self) -> &Graph {
        self.ordered.graph()
    }

    pub fn n(&self) -> usize {
        self.ordered.n()
    }

    pub fn tail_len(&self) -> usize {
        self.tail_len
    }

    /// Number of positions embedded by the greedy phase.
    pub fn bulk_len(&self) -> usize {
        self.n() - self.tail_len
    }

    pub fn is_tail(&self, position: u32) -> bool {
        position as usize >= self.bulk_len()
    }

    pub fn tail_degree(&self) -> usize {
        self.tail_degree
    }

    /// Number of tail neighbors of each non-tail position.
    pub fn completion_degrees(&self) -> &[usize] {
        &self.completion_degrees
    }

    pub fn left_neighbors(&self, position: usize) -> &[u32] {
        self.ordered.left_neighbors(position)
    }

    pub fn max_left_degree(&self) -> usize {
        self.ordered.degeneracy()
    }

    pub fn edge_count(&self) -> usize {
        self.graph().m()
    }

    /// Edges with both ends outside the tail (embedded into the bulk).
    pub fn bulk_edge_count(&self) -> usize {
        self.edge_count() - self.tail_len * self.tail_degree
    }

    pub fn origins(&self) -> &[Option<Origin>] {
        &self.origins
    }

    /// Indices of the input guests merged into this one.
    pub fn sources(&self) -> &[usize] {
        &self.sources
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrepareOptions {
    /// Requested tail fraction; the tail length is `floor(delta * n)`.
    pub delta: f64,
    /// Shrink the tail to the shortest extracted independent set instead of
    /// failing when some guest cannot supply `floor(delta * n)` vertices.
    pub auto_shrink: bool,
}

#[derive(Debug, Clone)]
pub struct PreparedFamily {
    pub guests: Vec<PreparedGuest>,
    pub tail_len: usize,
    pub requested_delta: f64,
    /// `tail_len / n`; differs from the request only after an auto-shrink.
    pub effective_delta: f64,
    pub shrunk: bool,
    pub warnings: Vec<String>,
}

struct Part {
    graph: Graph,
    origins: Vec<Origin>,
    sources: Vec<usize>,
}

impl Part {
    fn union(self, other: Part) -> Part {
        let mut origins = self.origins;
        origins.extend(other.origins);
        let mut sources = self.sources;
        sources.extend(other.sources);
        Part {
            graph: self.graph.disjoint_union(&other.graph),
            origins,
            sources,
        }
    }
}

/// Prepares a guest family for packing into an `n`-vertex host.
pub fn prepare_guest_family(
    guests: &[Graph],
    n: usize,
    max_degeneracy: usize,
    opts: &PrepareOptions,
) -> Result<PreparedFamily> {
    if !(opts.delta > 0.0 && opts.delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {}",
            opts.delta
        )));
    }
    let mut warnings = Vec::new();
    let mut parts = Vec::with_capacity(guests.len());
    for (index, g) in guests.iter().enumerate() {
        if g.n() > n {
            return Err(Error::GuestTooLarge {
                index,
                vertices: g.n(),
                n,
            });
        }
        let actual = degeneracy(g);
        if actual > max_degeneracy {
            return Err(Error::GuestNotDegenerate {
                index,
                actual,
                bound: max_degeneracy,
            });
        }
        let keep: Vec<u32> = (0..g.n() as u32).filter(|&v| g.degree(v) > 0).collect();
        parts.push(Part {
            graph: g.induced(&keep),
            origins: keep
                .iter()
                .map(|&vertex| Origin {
                    guest: index,
                    vertex,
                })
                .collect(),
            sources: vec![index],
        });
    }

    let is_small = |p: &Part| 2 * p.graph.n() <= n;
    let mut done = Vec::new();
    let mut small = std::collections::VecDeque::new();
    for p in parts {
        if is_small(&p) {
            small.push_back(p);
        } else {
            done.push(p);
        }
    }
    while small.len() >= 2 {
        let a = small.pop_front().expect("len >= 2");
        let b = small.pop_front().expect("len >= 2");
        let merged = a.union(b);
        if is_small(&merged) {
            small.push_back(merged);
        } else {
            done.push(merged);
        }
    }
    done.extend(small);
    done.sort_by_key(|p| p.sources[0]);

    let requested = (opts.delta * n as f64).floor() as usize;
    let guarantee = equal_degree_set_guarantee(n, max_degeneracy);
    if requested > guarantee {
        let msg = format!(
            "tail length {requested} exceeds the guaranteed equal-degree set size {guarantee} \
             for n = {n}, D = {max_degeneracy}; preparation relies on the actual sets"
        );
        warn!("{msg}");
        warnings.push(msg);
    }

    let mut staged = Vec::with_capacity(done.len());
    let mut shortest = usize::MAX;
    for (i, part) in done.into_iter().enumerate() {
        let padded = part.graph.padded(n - part.graph.n());
        let order = degeneracy_order(&padded);
        let set = equal_degree_independent_set(&padded, max_degeneracy)?;
        if set.vertices.len() < requested && !opts.auto_shrink {
            return Err(Error::TailTooShort {
                index: i,
                found: set.vertices.len(),
                requested,
            });
        }
        shortest = shortest.min(set.vertices.len());
        staged.push((part, padded, order, set.vertices));
    }
    let tail_len = if shortest < requested {
        let msg = format!("tail shrunk from {requested} to {shortest}");
        warn!("{msg}");
        warnings.push(msg);
        shortest
    } else {
        requested
    };

    let mut prepared = Vec::with_capacity(staged.len());
    for (part, padded, order, set) in staged {
        let tail = &set[..tail_len];
        let mut in_tail = vec![false; n];
        for &v in tail {
            in_tail[v as usize] = true;
        }
        let mut positions: Vec<u32> = order
            .order()
            .iter()
            .copied()
            .filter(|&v| !in_tail[v as usize] && padded.degree(v) > 0)
            .collect();
        positions.extend((0..n as u32).filter(|&v| !in_tail[v as usize] && padded.degree(v) == 0));
        positions.extend_from_slice(tail);

        let mut perm = vec![0u32; n];
        for (t, &v) in positions.iter().enumerate() {
            perm[v as usize] = t as u32;
        }
        let origins = positions
            .iter()
            .map(|&v| part.origins.get(v as usize).copied())
            .collect();
        let guest = PreparedGuest::assemble(padded.relabel(&perm), tail_len, origins, part.sources)?;
        debug_assert!(guest.max_left_degree() <= 2 * max_degeneracy);
        prepared.push(guest);
    }

    Ok(PreparedFamily {
        guests: prepared,
        tail_len,
        requested_delta: opts.delta,
        effective_delta: if n == 0 { 0.0 } else { tail_len as f64 / n as f64 },
        shrunk: tail_len < requested,
        warnings,
    })
}
