//! Degeneracy orderings and the equal-degree independent set extraction.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A graph together with a vertex ordering.
///
/// `order[t]` is the vertex at position `t`, `position[v]` its inverse, and
/// `left[t]` lists the *positions* of the neighbors of `order[t]` that come
/// before `t`, ascending.
#[derive(Debug, Clone)]
pub struct OrderedGraph {
    graph: Graph,
    order: Vec<u32>,
    position: Vec<u32>,
    left: Vec<Vec<u32>>,
    degeneracy: usize,
}

impl OrderedGraph {
    /// Wraps `graph` with the ordering `order` (a permutation of `0..n`).
    pub fn new(graph: Graph, order: Vec<u32>) -> Result<Self> {
        let n = graph.n();
        if order.len() != n {
            return Err(Error::InvalidParameter(format!(
                "ordering has {} entries for {n} vertices",
                order.len()
            )));
        }
        let mut position = vec![u32::MAX; n];
        for (t, &v) in order.iter().enumerate() {
            if v as usize >= n || position[v as usize] != u32::MAX {
                return Err(Error::InvalidParameter(
                    "ordering is not a permutation".into(),
                ));
            }
            position[v as usize] = t as u32;
        }
        let left: Vec<Vec<u32>> = order
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                let mut l: Vec<u32> = graph
                    .neighbors(v)
                    .iter()
                    .map(|&w| position[w as usize])
                    .filter(|&p| (p as usize) < t)
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        let degeneracy = left.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            graph,
            order,
            position,
            left,
            degeneracy,
        })
    }

    /// The identity ordering.
    pub fn identity(graph: Graph) -> Self {
        let order = (0..graph.n() as u32).collect();
        Self::new(graph, order).expect("identity is a permutation")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn position(&self, v: u32) -> u32 {
        self.position[v as usize]
    }

    /// Positions of the earlier neighbors of position `t`.
    pub fn left_neighbors(&self, t: usize) -> &[u32] {
        &self.left[t]
    }

    pub fn left_degree(&self, t: usize) -> usize {
        self.left[t].len()
    }

    /// Maximum left-degree of this ordering.
    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    /// The graph relabelled so that vertex `t` is the vertex at position `t`.
    pub fn positional_graph(&self) -> Graph {
        self.graph.relabel(&self.position)
    }
}

/// Minimum-degree peeling, reversed.
///
/// Repeatedly removes a vertex of minimum remaining degree (smallest id on
/// ties); the reversed removal sequence is the ordering. The maximum
/// left-degree of the result is the degeneracy of `g`.
pub fn degeneracy_order(g: &Graph) -> OrderedGraph {
    let n = g.n();
    let mut deg: Vec<usize> = g.degrees();
    let mut queue: BTreeSet<(usize, u32)> = (0..n as u32).map(|v| (deg[v as usize], v)).collect();
    let mut removed = vec![false; n];
    let mut peeled = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        removed[v as usize] = true;
        peeled.push(v);
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                let d = &mut deg[w as usize];
                queue.remove(&(*d, w));
                *d -= 1;
                queue.insert((*d, w));
            }
        }
    }
    peeled.reverse();
    OrderedGraph::new(g.clone(), peeled).expect("peeling yields a permutation")
}

/// Degeneracy of `g`.
pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_order(g).degeneracy()
}

/// An independent set all of whose vertices have the same degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualDegreeSet {
    pub degree: usize,
    /// Ascending vertex ids.
    pub vertices: Vec<u32>,
}

/// Finds `d <= 2D` and an independent set of degree-`d` vertices with at
/// least `n / (2D+1)^3` members.
///
/// `d` is the degree in `0..=2D` shared by the most vertices (smallest `d`
/// on ties); the set is the greedy maximal independent subset of those
/// vertices, taken smallest id first.
pub fn equal_degree_independent_set(g: &Graph, max_degeneracy: usize) -> Result<EqualDegreeSet> {
    let actual = degeneracy(g);
    if actual > max_degeneracy {
        return Err(Error::NotDegenerate {
            actual,
            bound: max_degeneracy,
        });
    }
    let cap = 2 * max_degeneracy;
    let mut counts = vec![0usize; cap + 1];
    for v in 0..g.n() as u32 {
        let d = g.degree(v);
        if d <= cap {
            counts[d] += 1;
        }
    }
    let degree = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(d, _)| d)
        .unwrap_or(0);
    let mut blocked = VertexSet::empty(g.n());
    let mut vertices = Vec::new();
    for v in 0..g.n() as u32 {
        if g.degree(v) == degree && !blocked.contains(v) {
            vertices.push(v);
            for &w in g.neighbors(v) {
                blocked.insert(w);
            }
        }
    }
    Ok(EqualDegreeSet { degree, vertices })
}

/// `Σ_v deg(v)²`.
pub fn sum_sq_degrees(g: &Graph) -> u64 {
    g.degrees().iter().map(|&d| (d * d) as u64).sum()
}

/// Size guaranteed by the equal-degree independent set construction:
/// `ceil(n / (2D+1)^3)`.
pub fn equal_degree_set_guarantee(n: usize, max_degeneracy: usize) -> usize {
    let k = (2 * max_degeneracy + 1).pow(3);
    n.div_ceil(k)
}
