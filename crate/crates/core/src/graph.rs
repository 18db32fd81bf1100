//! Simple undirected graphs on `0..n` and the plain-text edge-list format.
//!
//! The edge-list format is a header line `n m` followed by `m` lines `u v`
//! with `0 <= u < v < n`, one edge per line and no duplicates.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::{words_for, VertexSet};

/// Graphs with at most this many vertices keep a dense bit row per vertex.
pub const DENSE_THRESHOLD: usize = 65_536;

/// A simple undirected graph with contiguous vertex ids.
///
/// Neighbor lists are kept sorted. For `n <= DENSE_THRESHOLD` every vertex
/// also owns a bit row of its neighborhood, which makes adjacency tests and
/// common-neighborhood intersections word-parallel.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
    rows: Option<Vec<u64>>,
    stride: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        let rows = (n <= DENSE_THRESHOLD).then(|| vec![0u64; n * stride]);
        Self {
            n,
            m: 0,
            adj: vec![Vec::new(); n],
            rows,
            stride,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                g.insert_unchecked(u, v);
            }
        }
        g.finish();
        g
    }

    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated
    /// pairs (in either orientation).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.check_new_edge(u, v)?;
            g.insert_unchecked(u, v);
            // keep lists sorted incrementally only for the sparse case, where
            // duplicate detection needs them
            if g.rows.is_none() {
                g.adj[u as usize].sort_unstable();
                g.adj[v as usize].sort_unstable();
            }
        }
        g.finish();
        Ok(g)
    }

    fn check_new_edge(&self, u: u32, v: u32) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if u as usize >= self.n || v as usize >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for n = {}",
                self.n
            )));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, u: u32, v: u32) {
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
        if let Some(rows) = &mut self.rows {
            rows[u as usize * self.stride + v as usize / 64] |= 1 << (v % 64);
            rows[v as usize * self.stride + u as usize / 64] |= 1 << (u % 64);
        }
        self.m += 1;
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    /// Removes the edge `uv`. Returns whether it was present.
    pub fn remove_edge(&mut self, u: u32, v: u32) -> bool {
        if u == v || u as usize >= self.n || v as usize >= self.n || !self.has_edge(u, v) {
            return false;
        }
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a as usize];
            if let Ok(pos) = list.binary_search(&b) {
                list.remove(pos);
            }
            if let Some(rows) = &mut self.rows {
                rows[a as usize * self.stride + b as usize / 64] &= !(1 << (b % 64));
            }
        }
        self.m -= 1;
        true
    }

    /// Vertex count `v(G)`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count `e(G)`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_dense(&self) -> bool {
        self.rows.is_some()
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u as usize >= self.n || v as usize >= self.n {
            return false;
        }
        match &self.rows {
            Some(rows) => rows[u as usize * self.stride + v as usize / 64] >> (v % 64) & 1 == 1,
            None => self.adj[u as usize].binary_search(&v).is_ok(),
        }
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `e(G) / C(n, 2)`; zero for graphs with fewer than two vertices.
    pub fn density(&self) -> f64 {
        let pairs = pairs(self.n);
        if pairs == 0 {
            0.0
        } else {
            self.m as f64 / pairs as f64
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Intersects `set` with `N(v)` in place.
    #[inline]
    pub fn restrict_to_neighbors(&self, v: u32, set: &mut VertexSet) {
        match &self.rows {
            Some(rows) => {
                let start = v as usize * self.stride;
                set.intersect_words(&rows[start..start + self.stride]);
            }
            None => {
                let mut kept = VertexSet::empty(self.n);
                for &w in &self.adj[v as usize] {
                    if set.contains(w) {
                        kept.insert(w);
                    }
                }
                *set = kept;
            }
        }
    }

    pub fn neighbor_set(&self, v: u32) -> VertexSet {
        VertexSet::from_iter_in(self.n, self.adj[v as usize].iter().copied())
    }

    pub fn isolated_vertices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n as u32).filter(|&v| self.adj[v as usize].is_empty())
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.insert_unchecked(perm[u as usize], perm[v as usize]);
        }
        g.finish();
        g
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let shift = self.n as u32;
        let mut g = Self::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.insert_unchecked(u, v);
        }
        for (u, v) in other.edges() {
            g.insert_unchecked(u + shift, v + shift);
        }
        g.finish();
        g
    }

    /// Appends `extra` isolated vertices.
    pub fn padded(&self, extra: usize) -> Self {
        self.disjoint_union(&Graph::empty(extra))
    }

    /// The subgraph induced on `keep`, relabelled `0..keep.len()` in the
    /// given order.
    pub fn induced(&self, keep: &[u32]) -> Self {
        let mut index = vec![u32::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let mut g = Self::empty(keep.len());
        for (u, v) in self.edges() {
            let (a, b) = (index[u as usize], index[v as usize]);
            if a != u32::MAX && b != u32::MAX {
                g.insert_unchecked(a, b);
            }
        }
        g.finish();
        g
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::with_capacity(12 * (self.m + 1));
        let _ = writeln!(out, "{} {}", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list_string().as_bytes())?;
        Ok(())
    }

    /// Parses the edge-list format. Errors carry 1-based line numbers.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() => None,
            other => Some((i + 1, other)),
        });
        let (line_no, header) = match lines.next() {
            Some((i, l)) => (i, l?),
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "missing header line \"n m\"".into(),
                })
            }
        };
        let [n, m] = parse_pair(&header, line_no)?;
        let mut g = Graph::empty(n);
        let mut seen = 0usize;
        for (line_no, line) in lines {
            let line = line?;
            let [u, v] = parse_pair(&line, line_no)?;
            if u >= v || v >= n {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 0 <= u < v < {n}, got \"{}\"", line.trim()),
                });
            }
            let (u, v) = (u as u32, v as u32);
            if g.has_edge(u, v) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate edge {u} {v}"),
                });
            }
            g.insert_unchecked(u, v);
            if g.rows.is_none() {
                g.adj[u as usize].sort_unstable();
                g.adj[v as usize].sort_unstable();
            }
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: line_no,
                message: format!("header declares {m} edges but {seen} were listed"),
            });
        }
        g.finish();
        Ok(g)
    }

    pub fn read_edge_list_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_edge_list(std::io::BufReader::new(file))
    }
}

fn parse_pair(line: &str, line_no: usize) -> Result<[usize; 2]> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected two integers, got \"{}\"", line.trim()),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("not a non-negative integer: \"{tok}\""),
        })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            message: format!("trailing tokens in \"{}\"", line.trim()),
        });
    }
    Ok(pair)
}

/// `C(n, 2)`.
pub fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Dense ids for the edges of a graph, in [`Graph::edges`] order.
#[derive(Debug, Clone)]
pub struct EdgeIndex {
    offsets: Vec<usize>,
    uppers: Vec<Vec<u32>>,
}

impl EdgeIndex {
    pub fn new(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut uppers = Vec::with_capacity(g.n());
        let mut total = 0;
        for u in 0..g.n() as u32 {
            offsets.push(total);
            let list = g.neighbors(u);
            let upper = list[list.partition_point(|&w| w < u)..].to_vec();
            total += upper.len();
            uppers.push(upper);
        }
        offsets.push(total);
        Self { offsets, uppers }
    }

    pub fn len(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Id of the edge `uv` (either orientation), if present.
    pub fn get(&self, u: u32, v: u32) -> Option<usize> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let upper = self.uppers.get(a as usize)?;
        upper
            .binary_search(&b)
            .ok()
            .map(|i| self.offsets[a as usize] + i)
    }
}

/// Serde-friendly edge-list form, used inside JSON artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeListGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl From<&Graph> for EdgeListGraph {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().collect(),
        }
    }
}

impl TryFrom<EdgeListGraph> for Graph {
    type Error = Error;

    fn try_from(e: EdgeListGraph) -> Result<Self> {
        Graph::from_edges(e.n, e.edges)
    }
}
