//! Maximum bipartite matching by shortest augmenting paths in phases
//! (Hopcroft–Karp), with Hall-violator extraction on deficiency.

use std::collections::VecDeque;

const FREE: u32 = u32::MAX;
const INF: u32 = u32::MAX;

/// A maximum matching between left vertices `0..adj.len()` and right
/// vertices `0..right_n`.
#[derive(Debug, Clone)]
pub struct Matching {
    pub left_to_right: Vec<Option<u32>>,
    pub right_to_left: Vec<Option<u32>>,
    pub size: usize,
}

impl Matching {
    pub fn is_left_perfect(&self) -> bool {
        self.size == self.left_to_right.len()
    }
}

pub fn maximum_matching(adj: &[Vec<u32>], right_n: usize) -> Matching {
    let left_n = adj.len();
    let mut mate_l = vec![FREE; left_n];
    let mut mate_r = vec![FREE; right_n];
    let mut dist = vec![INF; left_n];
    let mut size = 0;

    loop {
        // layer the free left vertices and everything alternating-reachable
        let mut queue = VecDeque::new();
        for u in 0..left_n {
            if mate_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u as u32);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u as usize] {
                match mate_r[v as usize] {
                    FREE => found = true,
                    w if dist[w as usize] == INF => {
                        dist[w as usize] = dist[u as usize] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next_edge = vec![0usize; left_n];
        for u in 0..left_n {
            if mate_l[u] == FREE && augment(u as u32, adj, &mut mate_l, &mut mate_r, &mut dist, &mut next_edge) {
                size += 1;
            }
        }
    }

    let opt = |x: u32| (x != FREE).then_some(x);
    Matching {
        left_to_right: mate_l.into_iter().map(opt).collect(),
        right_to_left: mate_r.into_iter().map(opt).collect(),
        size,
    }
}

fn augment(
    u: u32,
    adj: &[Vec<u32>],
    mate_l: &mut [u32],
    mate_r: &mut [u32],
    dist: &mut [u32],
    next_edge: &mut [usize],
) -> bool {
    let ui = u as usize;
    while next_edge[ui] < adj[ui].len() {
        let v = adj[ui][next_edge[ui]];
        next_edge[ui] += 1;
        let w = mate_r[v as usize];
        let ok = if w == FREE {
            true
        } else {
            dist[w as usize] == dist[ui] + 1
                && augment(w, adj, mate_l, mate_r, dist, next_edge)
        };
        if ok {
            mate_l[ui] = v;
            mate_r[v as usize] = u;
            return true;
        }
    }
    dist[ui] = INF;
    false
}

/// For a maximum matching that leaves some left vertex free, the set `X`
/// of left vertices reachable from free left vertices by alternating paths,
/// with its neighborhood `N(X)`. Then `|N(X)| = |X| - #free < |X|`.
pub fn hall_violator(adj: &[Vec<u32>], matching: &Matching) -> Option<(Vec<u32>, Vec<u32>)> {
    if matching.is_left_perfect() {
        return None;
    }
    let right_n = matching.right_to_left.len();
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; right_n];
    let mut queue: VecDeque<u32> = (0..adj.len() as u32)
        .filter(|&u| matching.left_to_right[u as usize].is_none())
        .collect();
    for &u in &queue {
        seen_l[u as usize] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u as usize] {
            if !seen_r[v as usize] {
                seen_r[v as usize] = true;
                if let Some(w) = matching.right_to_left[v as usize] {
                    if !seen_l[w as usize] {
                        seen_l[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let pick = |seen: &[bool]| {
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i as u32)
            .collect::<Vec<_>>()
    };
    Some((pick(&seen_l), pick(&seen_r)))
}
