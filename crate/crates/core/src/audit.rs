//! Measured deviations from quasirandomness and its relatives.
//!
//! Every audit evaluates a relative error `|count / expected - 1|` over a
//! family of witness sets `S` and reports the worst one. Sets of size up to
//! `exhaustive_max_size` are enumerated completely; larger sizes up to
//! `max_set_size` are sampled uniformly (distinct vertices within a set) from
//! a seeded generator. The sampled part makes every reported value a lower
//! bound on the true worst case.
//!
//! Densities are read from the graphs at audit time.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::prepare::PreparedGuest;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditPolicy {
    /// `L`: largest witness set.
    pub max_set_size: usize,
    pub exhaustive_max_size: usize,
    pub samples_per_size: usize,
    pub rng_seed: u64,
}

impl Default for AuditPolicy {
    fn default() -> Self {
        Self::for_degeneracy(1)
    }
}

impl AuditPolicy {
    /// `L = 2D + 3`, exhaustive up to pairs, 200 samples per larger size.
    pub fn for_degeneracy(d: usize) -> Self {
        Self {
            max_set_size: 2 * d + 3,
            exhaustive_max_size: 2,
            samples_per_size: 200,
            rng_seed: 0,
        }
    }

    /// Only sets of size `1..=k`, all of them.
    pub fn exhaustive(k: usize) -> Self {
        Self {
            max_set_size: k,
            exhaustive_max_size: k,
            samples_per_size: 1,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.max_set_size < 1 {
            bad.push("max_set_size must be at least 1".to_string());
        }
        if self.exhaustive_max_size > self.max_set_size {
            bad.push("exhaustive_max_size must not exceed max_set_size".to_string());
        }
        if self.samples_per_size < 1 {
            bad.push("samples_per_size must be at least 1".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Quasirandom,
    Coquasirandom,
    Diet,
    Codiet,
}

/// Worst observed deviation for one condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub condition: Condition,
    pub deviation: f64,
    /// The witness `S` achieving `deviation`.
    pub witness: Vec<u32>,
    /// The subset `R ⊆ S` taken in the first graph (co-conditions only).
    pub witness_first: Option<Vec<u32>>,
    /// Number of witness sets `S` evaluated.
    pub sets_tested: usize,
    pub density: f64,
    pub second_density: Option<f64>,
    pub excluded: usize,
}

/// `⋂_{v∈S} N_h(v)`; the whole vertex set for empty `S`.
pub fn common_neighborhood(h: &Graph, s: &[u32]) -> VertexSet {
    let mut set = VertexSet::full(h.n());
    for &v in s {
        h.restrict_to_neighbors(v, &mut set);
    }
    set
}

/// `N_f(R) ∩ N_fstar(S∖R)`, with `R` given as a bitmask over `s`.
fn mixed_neighborhood(f: &Graph, fstar: &Graph, s: &[u32], r_mask: u64) -> VertexSet {
    let mut set = VertexSet::full(f.n());
    for (i, &v) in s.iter().enumerate() {
        if r_mask >> i & 1 == 1 {
            f.restrict_to_neighbors(v, &mut set);
        } else {
            fstar.restrict_to_neighbors(v, &mut set);
        }
    }
    set
}

/// All witness sets of `policy` over `0..n`, in evaluation order: sizes
/// `1..=exhaustive_max_size` lexicographically, then `samples_per_size`
/// sampled sets for each larger size. Sizes above `n` are skipped.
pub fn witness_sets(n: usize, policy: &AuditPolicy) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let exhaustive = policy.exhaustive_max_size.min(policy.max_set_size).min(n);
    for k in 1..=exhaustive {
        push_combinations(n as u32, k, &mut out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.rng_seed);
    for k in exhaustive + 1..=policy.max_set_size.min(n) {
        for _ in 0..policy.samples_per_size {
            let mut s: Vec<u32> = rand::seq::index::sample(&mut rng, n, k)
                .into_iter()
                .map(|v| v as u32)
                .collect();
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

fn push_combinations(n: u32, k: usize, out: &mut Vec<Vec<u32>>) {
    let mut idx: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - (k - i) as u32 {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn relative_deviation(count: usize, expected: f64) -> f64 {
    (count as f64 - expected).abs() / expected
}

fn positive_density(g: &Graph) -> Result<f64> {
    let p = g.density();
    if p > 0.0 {
        Ok(p)
    } else {
        Err(Error::DegenerateDensity)
    }
}

fn remaining(n: usize, excluded: Option<&VertexSet>) -> Result<usize> {
    let x = excluded.map_or(0, VertexSet::len);
    if x >= n {
        Err(Error::EverythingExcluded)
    } else {
        Ok(n - x)
    }
}

/// Deviation of one pair `(S, R)` for the codiet condition of
/// `(f, fstar, X)`; the other three conditions are special cases.
pub fn co_deviation(
    f: &Graph,
    fstar: &Graph,
    excluded: Option<&VertexSet>,
    s: &[u32],
    r: &[u32],
) -> Result<f64> {
    let p = positive_density(f)?;
    let r_mask = s
        .iter()
        .enumerate()
        .filter(|(_, v)| r.contains(v))
        .fold(0u64, |m, (i, _)| m | 1 << i);
    let ps = if r.len() < s.len() {
        positive_density(fstar)?
    } else {
        fstar.density()
    };
    let base = remaining(f.n(), excluded)?;
    Ok(evaluate(f, fstar, excluded, s, r_mask, p, ps, base))
}

/// Deviation of one witness `S` for the diet condition of `(h, X)`.
pub fn diet_deviation(h: &Graph, excluded: Option<&VertexSet>, s: &[u32]) -> Result<f64> {
    let p = positive_density(h)?;
    let base = remaining(h.n(), excluded)?;
    let full = (1u64 << s.len()) - 1;
    Ok(evaluate(h, h, excluded, s, full, p, 0.0, base))
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn evaluate(
    f: &Graph,
    fstar: &Graph,
    excluded: Option<&VertexSet>,
    s: &[u32],
    r_mask: u64,
    p: f64,
    ps: f64,
    base: usize,
) -> f64 {
    let set = mixed_neighborhood(f, fstar, s, r_mask);
    let count = match excluded {
        Some(x) => set.count_difference(x),
        None => set.len(),
    };
    let r = r_mask.count_ones() as i32;
    let rest = s.len() as i32 - r;
    let expected = if rest == 0 {
        p.powi(r) * base as f64
    } else {
        p.powi(r) * ps.powi(rest) * base as f64
    };
    relative_deviation(count, expected)
}

struct Worst {
    deviation: f64,
    witness: Vec<u32>,
    first: Option<Vec<u32>>,
}

impl Worst {
    fn new() -> Self {
        Self {
            deviation: 0.0,
            witness: Vec::new(),
            first: None,
        }
    }

    fn offer(&mut self, dev: f64, s: &[u32], first: Option<Vec<u32>>) {
        if dev > self.deviation || self.witness.is_empty() {
            self.deviation = dev;
            self.witness = s.to_vec();
            self.first = first;
        }
    }
}

/// Worst `| |N_h(S) ∖ X| / (p^{|S|} (n - |X|)) - 1 |` over the policy's
/// witnesses.
pub fn diet_error(h: &Graph, excluded: &VertexSet, policy: &AuditPolicy) -> Result<AuditReport> {
    single_graph_audit(h, Some(excluded), policy, Condition::Diet)
}

/// Worst `| |N_h(S)| / (p^{|S|} n) - 1 |` over the policy's witnesses.
pub fn quasirandomness_error(h: &Graph, policy: &AuditPolicy) -> Result<AuditReport> {
    single_graph_audit(h, None, policy, Condition::Quasirandom)
}

fn single_graph_audit(
    h: &Graph,
    excluded: Option<&VertexSet>,
    policy: &AuditPolicy,
    condition: Condition,
) -> Result<AuditReport> {
    policy.validate()?;
    let p = positive_density(h)?;
    let base = remaining(h.n(), excluded)?;
    let witnesses = witness_sets(h.n(), policy);
    let mut worst = Worst::new();
    for s in &witnesses {
        let full = (1u64 << s.len()) - 1;
        let dev = evaluate(h, h, excluded, s, full, p, 0.0, base);
        worst.offer(dev, s, None);
    }
    Ok(AuditReport {
        condition,
        deviation: worst.deviation,
        witness: worst.witness,
        witness_first: None,
        sets_tested: witnesses.len(),
        density: p,
        second_density: None,
        excluded: excluded.map_or(0, VertexSet::len),
    })
}

/// Worst `| |N_f(R) ∩ N_f*(S∖R)| / (p^{|R|} p*^{|S∖R|} n) - 1 |` over the
/// policy's witnesses `S` and every `R ⊆ S`.
pub fn coquasirandomness_error(
    f: &Graph,
    fstar: &Graph,
    policy: &AuditPolicy,
) -> Result<AuditReport> {
    pair_audit(f, fstar, None, policy, Condition::Coquasirandom)
}

/// The codiet analogue of [`coquasirandomness_error`], relative to the
/// excluded set `X`.
pub fn codiet_error(
    h: &Graph,
    hstar: &Graph,
    excluded: &VertexSet,
    policy: &AuditPolicy,
) -> Result<AuditReport> {
    pair_audit(h, hstar, Some(excluded), policy, Condition::Codiet)
}

fn pair_audit(
    f: &Graph,
    fstar: &Graph,
    excluded: Option<&VertexSet>,
    policy: &AuditPolicy,
    condition: Condition,
) -> Result<AuditReport> {
    policy.validate()?;
    if f.n() != fstar.n() {
        return Err(Error::Precondition(
            "paired graphs must share a vertex set".into(),
        ));
    }
    if policy.max_set_size > 63 {
        return Err(Error::InvalidParameter(
            "co-condition witnesses are limited to 63 vertices".into(),
        ));
    }
    let p = positive_density(f)?;
    let ps = positive_density(fstar)?;
    let base = remaining(f.n(), excluded)?;
    let witnesses = witness_sets(f.n(), policy);
    let mut worst = Worst::new();
    for s in &witnesses {
        for r_mask in 0..1u64 << s.len() {
            let dev = evaluate(f, fstar, excluded, s, r_mask, p, ps, base);
            if dev > worst.deviation || worst.witness.is_empty() {
                let first = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| r_mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                worst.offer(dev, s, Some(first));
            }
        }
    }
    Ok(AuditReport {
        condition,
        deviation: worst.deviation,
        witness: worst.witness,
        witness_first: worst.first,
        sets_tested: witnesses.len(),
        density: p,
        second_density: Some(ps),
        excluded: excluded.map_or(0, VertexSet::len),
    })
}

/// Result of a cover audit over one window of guest positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    /// Smallest `β` such that every `(v, d)` count is within
    /// `(1 ± β) p^d |X_{i,d}| ± ε² n`.
    pub beta: f64,
    /// `(v, d)` attaining `beta`, if any stratum deviates.
    pub worst: Option<(u32, usize)>,
    /// Per left-degree `d`: the max over host vertices.
    pub per_degree: Vec<f64>,
    /// `|X_{i,d}|` per `d`.
    pub stratum_sizes: Vec<usize>,
    pub window: (usize, usize),
    pub density: f64,
    pub eps: f64,
}

/// Positions `start..end` with `start <= x < start + eps·n`.
pub fn cover_window(n: usize, start: usize, eps: f64) -> (usize, usize) {
    let len = (eps * n as f64 - 1e-9).ceil().max(0.0) as usize;
    (start.min(n), (start + len).min(n))
}

/// `counts[d][v] = |{x ∈ X_{i,d} : v ∈ N_h(ψ(N⁻(x)))}|`, together with the
/// stratum sizes `|X_{i,d}|`.
pub fn cover_counts(
    guest: &PreparedGuest,
    h: &Graph,
    psi: &Embedding,
    start: usize,
    eps: f64,
) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let n = h.n();
    let (lo, hi) = cover_window(guest.n(), start, eps);
    let max_d = (lo..hi).map(|x| guest.left_neighbors(x).len()).max().unwrap_or(0);
    let mut counts = vec![vec![0usize; n]; max_d + 1];
    let mut sizes = vec![0usize; max_d + 1];
    for x in lo..hi {
        let left = guest.left_neighbors(x);
        let d = left.len();
        sizes[d] += 1;
        let mut set = VertexSet::full(n);
        for &y in left {
            let v = psi.image(y).ok_or_else(|| {
                Error::Precondition(format!("left neighbor {y} of position {x} is not embedded"))
            })?;
            h.restrict_to_neighbors(v, &mut set);
        }
        for v in set.iter() {
            counts[d][v as usize] += 1;
        }
    }
    Ok((counts, sizes))
}

pub fn cover_error(
    guest: &PreparedGuest,
    h: &Graph,
    psi: &Embedding,
    start: usize,
    eps: f64,
) -> Result<CoverReport> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let p = positive_density(h)?;
    let n = h.n() as f64;
    let (counts, sizes) = cover_counts(guest, h, psi, start, eps)?;
    let slack = eps * eps * n;
    let mut per_degree = vec![0.0; sizes.len()];
    let mut beta = 0.0;
    let mut worst = None;
    // d = 0 holds with zero error: every vertex is in every candidate set
    for d in 1..sizes.len() {
        if sizes[d] == 0 {
            continue;
        }
        let expected = p.powi(d as i32) * sizes[d] as f64;
        for (v, &c) in counts[d].iter().enumerate() {
            let dev = (((c as f64 - expected).abs() - slack) / expected).max(0.0);
            if dev > per_degree[d] {
                per_degree[d] = dev;
            }
            if dev > beta {
                beta = dev;
                worst = Some((v as u32, d));
            }
        }
    }
    Ok(CoverReport {
        beta,
        worst,
        per_degree,
        stratum_sizes: sizes,
        window: cover_window(guest.n(), start, eps),
        density: p,
        eps,
    })
}
