//! Brute-force oracles. Everything here is written against `has_edge` and
//! plain loops only, never against the engine's bitsets or orderings.
#![allow(dead_code)]

use greedypack::engine::Embedding;
use greedypack::{Graph, PreparedGuest};
use rand::Rng;

/// Minimum over all `n!` orderings of the largest left-degree.
pub fn brute_degeneracy(g: &Graph) -> usize {
    let n = g.n();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut best = usize::MAX;
    permute(&mut perm, 0, &mut |p| {
        let mut worst = 0;
        for i in 0..p.len() {
            let left = (0..i).filter(|&j| g.has_edge(p[i], p[j])).count();
            worst = worst.max(left);
        }
        best = best.min(worst);
    });
    if n == 0 {
        0
    } else {
        best
    }
}

fn permute(p: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n as u32 {
            if !seen[v as usize] && g.has_edge(u, v) {
                seen[v as usize] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The graph on `n` vertices whose edges are the set bits of `mask` over
/// pairs in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// `|{v ∉ X : v ~ u for all u ∈ S}|` by direct adjacency tests.
pub fn brute_common_count(h: &Graph, s: &[u32], excluded: &[bool]) -> usize {
    (0..h.n() as u32)
        .filter(|&v| !excluded[v as usize] && s.iter().all(|&u| h.has_edge(u, v)))
        .count()
}

/// Mixed version: `v ~_f r` for `r ∈ R`, `v ~_fstar u` for `u ∈ S ∖ R`.
pub fn brute_mixed_count(f: &Graph, fstar: &Graph, s: &[u32], r: &[u32], excluded: &[bool]) -> usize {
    (0..f.n() as u32)
        .filter(|&v| {
            !excluded[v as usize]
                && s.iter().all(|&u| {
                    if r.contains(&u) {
                        f.has_edge(u, v)
                    } else {
                        fstar.has_edge(u, v)
                    }
                })
        })
        .count()
}

pub fn brute_density(h: &Graph) -> f64 {
    let n = h.n();
    let mut m = 0usize;
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if h.has_edge(u, v) {
                m += 1;
            }
        }
    }
    m as f64 / (n * (n - 1) / 2) as f64
}

/// `C*(x)` by filtering every host vertex.
pub fn brute_completion_candidates(
    guest: &PreparedGuest,
    reservoir: &Graph,
    phi: &Embedding,
    x: u32,
) -> Vec<u32> {
    let n = guest.n() as u32;
    let used: Vec<u32> = (0..n).filter_map(|p| phi.image(p)).collect();
    let nbrs: Vec<u32> = (0..n).filter(|&y| guest.graph().has_edge(x, y)).collect();
    (0..n)
        .filter(|v| !used.contains(v))
        .filter(|&v| nbrs.iter().all(|&y| reservoir.has_edge(phi.image(y).unwrap(), v)))
        .collect()
}

/// Whether an injective choice `x ↦ c ∈ cands[x]` exists, by exhaustive
/// backtracking over all partial assignments.
pub fn brute_sdr_exists(cands: &[Vec<u32>]) -> bool {
    fn go(cands: &[Vec<u32>], i: usize, taken: &mut Vec<u32>) -> bool {
        if i == cands.len() {
            return true;
        }
        for &c in &cands[i] {
            if !taken.contains(&c) {
                taken.push(c);
                if go(cands, i + 1, taken) {
                    return true;
                }
                taken.pop();
            }
        }
        false
    }
    go(cands, 0, &mut Vec::new())
}

/// Whether every subfamily `X` satisfies `|⋃ cands[X]| ≥ |X|`.
pub fn hall_condition_holds(cands: &[Vec<u32>]) -> bool {
    let k = cands.len();
    (1u32..1 << k).all(|mask| {
        let mut union: Vec<u32> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| cands[i].iter().copied())
            .collect();
        union.sort_unstable();
        union.dedup();
        union.len() >= mask.count_ones() as usize
    })
}

/// Random `d`-degenerate graph: vertex `i` picks `min(d, i)` distinct
/// earlier neighbors, then the labels are shuffled.
pub fn random_degenerate_shuffled<R: Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    use rand::seq::SliceRandom;
    let mut label: Vec<u32> = (0..n as u32).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    for v in 1..n {
        let mut earlier: Vec<u32> = (0..v as u32).collect();
        earlier.shuffle(rng);
        for &u in earlier.iter().take(d) {
            edges.push((label[u as usize], label[v]));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// A random completion instance: a guest whose last `t ≤ 12` positions form
/// an independent tail of common degree `d`, a random reservoir and a random
/// injection of the non-tail positions.
pub fn random_completion_instance<R: Rng>(rng: &mut R) -> (PreparedGuest, Graph, Embedding) {
    use rand::seq::SliceRandom;
    let n = rng.gen_range(6..=28usize);
    let t = rng.gen_range(1..=12usize.min(n - 2));
    let bulk = n - t;
    let d = rng.gen_range(0..=3usize.min(bulk));
    let mut edges = Vec::new();
    for x in bulk..n {
        let mut ys: Vec<u32> = (0..bulk as u32).collect();
        ys.shuffle(rng);
        edges.extend(ys[..d].iter().map(|&y| (y, x as u32)));
    }
    for u in 0..bulk as u32 {
        for v in u + 1..bulk as u32 {
            if rng.gen_bool(0.2) {
                edges.push((u, v));
            }
        }
    }
    let guest = PreparedGuest::from_positional(Graph::from_edges(n, edges).unwrap(), t).unwrap();
    let p = rng.gen_range(0.1..0.8);
    let reservoir = random_graph(n, p, rng);
    let mut hosts: Vec<u32> = (0..n as u32).collect();
    hosts.shuffle(rng);
    let mut phi = Embedding::new(n, n);
    for pos in 0..bulk as u32 {
        phi.assign(pos, hosts[pos as usize]);
    }
    (guest, reservoir, phi)
}

/// Runs `complete_embedding` and checks it against the oracles: existence
/// must match exhaustive search and Hall's condition; a success must be a
/// valid SDR; a failure must carry a literal Hall violator. Returns whether
/// the instance was completable.
pub fn check_completion(
    guest: &PreparedGuest,
    reservoir: &Graph,
    phi: &Embedding,
) -> Result<bool, String> {
    use greedypack::engine::complete_embedding;
    let bulk = guest.bulk_len() as u32;
    let tail: Vec<u32> = (bulk..guest.n() as u32).collect();
    let cands: Vec<Vec<u32>> = tail
        .iter()
        .map(|&x| brute_completion_candidates(guest, reservoir, phi, x))
        .collect();
    let exists = brute_sdr_exists(&cands);
    if exists != hall_condition_holds(&cands) {
        return Err("the two oracles disagree".into());
    }
    match complete_embedding(guest, reservoir, phi).map_err(|e| e.to_string())? {
        Ok(full) => {
            if !exists {
                return Err("engine completed an instance without an SDR".into());
            }
            let mut seen = Vec::new();
            for p in 0..bulk {
                if full.image(p) != phi.image(p) {
                    return Err(format!("completion moved bulk position {p}"));
                }
            }
            for (i, &x) in tail.iter().enumerate() {
                let v = full.image(x).ok_or("tail position left unembedded")?;
                if !cands[i].contains(&v) || seen.contains(&v) {
                    return Err(format!("tail position {x} mapped to invalid vertex {v}"));
                }
                seen.push(v);
            }
            Ok(true)
        }
        Err(f) => {
            if exists {
                return Err("engine failed on an instance with an SDR".into());
            }
            let mut union: Vec<u32> = f
                .hall_witness
                .iter()
                .flat_map(|&x| cands[(x - bulk) as usize].iter().copied())
                .collect();
            union.sort_unstable();
            union.dedup();
            if f.hall_witness.is_empty() || union.len() >= f.hall_witness.len() {
                return Err(format!(
                    "witness {:?} is not a Hall violator (|union| = {})",
                    f.hall_witness,
                    union.len()
                ));
            }
            let mut reported = f.witness_candidates.clone();
            reported.sort_unstable();
            if union != reported {
                return Err("reported witness candidates differ from the union".into());
            }
            Ok(false)
        }
    }
}
