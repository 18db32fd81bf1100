//! Seeded guest and host generators, and the spec strings that name them.
//!
//! Spec strings have the form `kind:key=value,key=value`, for example
//! `tree:n=500`, `degen:D=2,maxdeg=40,n=500,count=30` or
//! `gnp:n=1000,p=0.5`. `file:PATH` reads an edge-list file instead.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pairs, Graph};

/// Decodes a Prüfer sequence over `0..n` (`seq.len() == n - 2`).
pub fn tree_from_prufer(n: usize, seq: &[u32]) -> Result<Graph> {
    if n < 2 {
        if seq.is_empty() {
            return Ok(Graph::empty(n));
        }
        return Err(Error::InvalidParameter("Prüfer sequence too long".into()));
    }
    if seq.len() != n - 2 || seq.iter().any(|&v| v as usize >= n) {
        return Err(Error::InvalidParameter(format!(
            "a Prüfer sequence for {n} vertices has {} entries below {n}",
            n - 2
        )));
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v as usize] += 1;
    }
    let mut leaves: std::collections::BTreeSet<u32> =
        (0..n as u32).filter(|&v| degree[v as usize] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = leaves.pop_first().expect("a tree always has a leaf");
        edges.push((leaf, v));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 {
            leaves.insert(v);
        }
    }
    let a = leaves.pop_first().expect("two leaves remain");
    let b = leaves.pop_first().expect("two leaves remain");
    edges.push((a, b));
    Graph::from_edges(n, edges)
}

/// Uniform labelled tree on `n` vertices via a uniform Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let seq: Vec<u32> = (0..n.saturating_sub(2))
        .map(|_| rng.gen_range(0..n as u32))
        .collect();
    tree_from_prufer(n, &seq).expect("valid Prüfer sequence")
}

/// Adds vertices `0..n` in order; each picks up to `d` distinct earlier
/// neighbors uniformly among those whose degree is still below
/// `max_degree`. Saturated vertices are skipped, so the result is not a
/// uniform sample of anything, but it is `d`-degenerate in construction
/// order with maximum degree at most `max_degree`.
pub fn random_degenerate<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    max_degree: usize,
    rng: &mut R,
) -> Result<Graph> {
    if max_degree < d {
        return Err(Error::InvalidParameter(format!(
            "max degree {max_degree} is below the degeneracy {d}"
        )));
    }
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    let mut eligible: Vec<u32> = Vec::with_capacity(n);
    for v in 0..n as u32 {
        eligible.retain(|&u| degree[u as usize] < max_degree);
        let k = d.min(eligible.len());
        let mut picked: Vec<u32> = sample(rng, eligible.len(), k)
            .into_iter()
            .map(|i| eligible[i])
            .collect();
        picked.sort_unstable();
        for u in picked {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
            edges.push((u, v));
        }
        if degree[v as usize] < max_degree {
            eligible.push(v);
        }
    }
    Graph::from_edges(n, edges)
}

pub fn star(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as u32).map(|i| (0, i))).expect("star is simple")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as u32).map(|i| (i - 1, i))).expect("path is simple")
}

/// Random trees `T_1, …, T_n` with `v(T_i) = i`; together they have exactly
/// `C(n, 2)` edges.
pub fn gyarfas_family<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Graph> {
    (1..=n).map(|i| random_tree(i, rng)).collect()
}

/// Drops the largest graphs (by edge count, later ones first on ties) until
/// the total edge count is at most `budget`. Keeps the input order.
pub fn truncate_to_budget(family: Vec<Graph>, budget: usize) -> Vec<Graph> {
    let mut total: usize = family.iter().map(Graph::m).sum();
    let mut by_size: Vec<usize> = (0..family.len()).collect();
    by_size.sort_by_key(|&i| std::cmp::Reverse((family[i].m(), i)));
    let mut drop = vec![false; family.len()];
    for i in by_size {
        if total <= budget {
            break;
        }
        total -= family[i].m();
        drop[i] = true;
    }
    family
        .into_iter()
        .zip(drop)
        .filter_map(|(g, d)| (!d).then_some(g))
        .collect()
}

/// Erdős–Rényi `G(n, p)`: pairs visited in lexicographic order, one `f64`
/// draw each.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    let mut edges = Vec::with_capacity((p * pairs(n) as f64) as usize + 16);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            let draw: f64 = rng.gen();
            if draw < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GuestSpec {
    Tree { n: usize, count: usize },
    Degenerate { n: usize, d: usize, max_degree: usize, count: usize },
    Star { n: usize, count: usize },
    Path { n: usize, count: usize },
    /// `T_1, …, T_n`, optionally truncated to `budget · C(n, 2)` edges.
    Gyarfas { n: usize, budget: Option<f64> },
    /// `2k + 1` copies of one random tree on `k + 1` vertices.
    Ringel { k: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum HostSpec {
    Complete { n: usize },
    Gnp { n: usize, p: f64 },
    File(PathBuf),
}

impl GuestSpec {
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Graph>> {
        Ok(match *self {
            Self::Tree { n, count } => (0..count).map(|_| random_tree(n, rng)).collect(),
            Self::Degenerate {
                n,
                d,
                max_degree,
                count,
            } => (0..count)
                .map(|_| random_degenerate(n, d, max_degree, rng))
                .collect::<Result<_>>()?,
            Self::Star { n, count } => vec![star(n); count],
            Self::Path { n, count } => vec![path(n); count],
            Self::Gyarfas { n, budget } => {
                let family = gyarfas_family(n, rng);
                match budget {
                    Some(b) => truncate_to_budget(family, (b * pairs(n) as f64).floor() as usize),
                    None => family,
                }
            }
            Self::Ringel { k } => vec![random_tree(k + 1, rng); 2 * k + 1],
            Self::File(ref path) => vec![Graph::read_edge_list_file(path)?],
        })
    }

    /// Degeneracy bound guaranteed by construction, if the spec has one.
    pub fn degeneracy_bound(&self) -> Option<usize> {
        match *self {
            Self::Degenerate { d, .. } => Some(d),
            Self::File(_) => None,
            _ => Some(1),
        }
    }
}

impl HostSpec {
    pub fn n(&self) -> Option<usize> {
        match *self {
            Self::Complete { n } | Self::Gnp { n, .. } => Some(n),
            Self::File(_) => None,
        }
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match *self {
            Self::Complete { n } => Ok(Graph::complete(n)),
            Self::Gnp { n, p } => gnp(n, p, rng),
            Self::File(ref path) => Graph::read_edge_list_file(path),
        }
    }
}

/// A parsed `kind:key=value,...` string with byte offsets for diagnostics.
struct RawSpec<'a> {
    kind: &'a str,
    params: Vec<(&'a str, &'a str, usize)>,
    rest: &'a str,
    rest_at: usize,
}

fn spec_err(position: usize, message: impl Into<String>) -> Error {
    Error::Spec {
        position,
        message: message.into(),
    }
}

impl<'a> RawSpec<'a> {
    fn parse(s: &'a str) -> Result<Self> {
        let (kind, rest, rest_at) = match s.find(':') {
            Some(i) => (&s[..i], &s[i + 1..], i + 1),
            None => (s, "", s.len()),
        };
        if kind.is_empty() {
            return Err(spec_err(0, "missing generator kind"));
        }
        let mut params = Vec::new();
        if kind != "file" && !rest.is_empty() {
            let mut at = rest_at;
            for item in rest.split(',') {
                let Some(eq) = item.find('=') else {
                    return Err(spec_err(at, format!("expected key=value, got \"{item}\"")));
                };
                params.push((item[..eq].trim(), item[eq + 1..].trim(), at + eq + 1));
                at += item.len() + 1;
            }
        }
        Ok(Self {
            kind,
            params,
            rest,
            rest_at,
        })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for &(k, _, at) in &self.params {
            if !allowed.contains(&k) {
                return Err(spec_err(
                    at - k.len() - 1,
                    format!("unknown parameter \"{k}\" for {}", self.kind),
                ));
            }
        }
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.params.iter().find(|(k, _, _)| *k == key) {
            None => Ok(None),
            Some(&(_, v, at)) => v
                .parse()
                .map(Some)
                .map_err(|_| spec_err(at, format!("invalid value \"{v}\" for {key}"))),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| {
            spec_err(self.rest_at, format!("{} requires parameter {key}", self.kind))
        })
    }

    fn path(&self) -> Result<PathBuf> {
        if self.rest.is_empty() {
            return Err(spec_err(self.rest_at, "file: needs a path"));
        }
        Ok(PathBuf::from(self.rest))
    }
}

impl FromStr for GuestSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = RawSpec::parse(s.trim())?;
        let count = |raw: &RawSpec| -> Result<usize> { Ok(raw.get("count")?.unwrap_or(1)) };
        let spec = match raw.kind {
            "tree" | "spanning" => {
                raw.check_keys(&["n", "count"])?;
                Self::Tree {
                    n: raw.require("n")?,
                    count: count(&raw)?,
                }
            }
            "degen" => {
                raw.check_keys(&["n", "D", "maxdeg", "count"])?;
                let n = raw.require("n")?;
                let d = raw.require("D")?;
                Self::Degenerate {
                    n,
                    d,
                    max_degree: raw.get("maxdeg")?.unwrap_or(n),
                    count: count(&raw)?,
                }
            }
            "star" => {
                raw.check_keys(&["n", "count"])?;
                Self::Star {
                    n: raw.require("n")?,
                    count: count(&raw)?,
                }
            }
            "path" => {
                raw.check_keys(&["n", "count"])?;
                Self::Path {
                    n: raw.require("n")?,
                    count: count(&raw)?,
                }
            }
            "gyarfas" => {
                raw.check_keys(&["n", "budget"])?;
                Self::Gyarfas {
                    n: raw.require("n")?,
                    budget: raw.get("budget")?,
                }
            }
            "ringel" => {
                raw.check_keys(&["k"])?;
                Self::Ringel { k: raw.require("k")? }
            }
            "file" => Self::File(raw.path()?),
            other => return Err(spec_err(0, format!("unknown guest kind \"{other}\""))),
        };
        Ok(spec)
    }
}

impl FromStr for HostSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let raw = RawSpec::parse(s.trim())?;
        match raw.kind {
            "complete" | "K" => {
                raw.check_keys(&["n"])?;
                Ok(Self::Complete { n: raw.require("n")? })
            }
            "gnp" => {
                raw.check_keys(&["n", "p"])?;
                let p: f64 = raw.require("p")?;
                if !(0.0..=1.0).contains(&p) {
                    let at = raw.params.iter().find(|(k, _, _)| *k == "p").map_or(0, |x| x.2);
                    return Err(spec_err(at, "p must lie in [0, 1]"));
                }
                Ok(Self::Gnp {
                    n: raw.require("n")?,
                    p,
                })
            }
            "file" => Ok(Self::File(raw.path()?)),
            other => Err(spec_err(0, format!("unknown host kind \"{other}\""))),
        }
    }
}

impl fmt::Display for GuestSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tree { n, count } => write!(f, "tree:n={n},count={count}"),
            Self::Degenerate {
                n,
                d,
                max_degree,
                count,
            } => write!(f, "degen:D={d},maxdeg={max_degree},n={n},count={count}"),
            Self::Star { n, count } => write!(f, "star:n={n},count={count}"),
            Self::Path { n, count } => write!(f, "path:n={n},count={count}"),
            Self::Gyarfas { n, budget: None } => write!(f, "gyarfas:n={n}"),
            Self::Gyarfas { n, budget: Some(b) } => write!(f, "gyarfas:n={n},budget={b}"),
            Self::Ringel { k } => write!(f, "ringel:k={k}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl fmt::Display for HostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Complete { n } => write!(f, "complete:n={n}"),
            Self::Gnp { n, p } => write!(f, "gnp:n={n},p={p}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(GuestSpec);
string_serde!(HostSpec);

/// A graph for the `gen` command: hosts and guests share one namespace.
pub fn generate_any<R: Rng + ?Sized>(spec: &str, rng: &mut R) -> Result<Vec<Graph>> {
    match spec.parse::<HostSpec>() {
        Ok(h) => Ok(vec![h.generate(rng)?]),
        Err(host_err) => match spec.parse::<GuestSpec>() {
            Ok(g) => g.generate(rng),
            Err(Error::Spec { message, .. }) if message.starts_with("unknown guest kind") => {
                Err(host_err)
            }
            Err(e) => Err(e),
        },
    }
}
