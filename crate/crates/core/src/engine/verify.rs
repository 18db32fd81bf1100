use std::fmt;

use serde::Serialize;

use super::PackingResult;
use crate::graph::{EdgeIndex, Graph};
use crate::prepare::PreparedGuest;

/// One violated clause of a packing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotSuccessful,
    GuestCount { expected: usize, found: usize },
    OrderMismatch { guest: usize },
    NotInjective { guest: usize },
    Unembedded { guest: usize, position: u32 },
    NotHostEdge { guest: usize, guest_edge: (u32, u32), host_pair: (u32, u32) },
    ColorOverlap { edge: (u32, u32), first: usize, second: usize },
    WrongColor { edge: (u32, u32), expected: u32, found: u32 },
    WrongPhase { guest: usize, guest_edge: (u32, u32), edge: (u32, u32), expected_reservoir: bool },
    ColorArrayLength { expected: usize, found: usize },
    UncoveredMismatch { expected: usize, counted: usize, reported: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSuccessful => write!(f, "result does not report success"),
            Self::GuestCount { expected, found } => {
                write!(f, "expected {expected} embeddings, found {found}")
            }
            Self::OrderMismatch { guest } => write!(f, "guest {guest}: map order differs from host"),
            Self::NotInjective { guest } => write!(f, "guest {guest}: map is not injective"),
            Self::Unembedded { guest, position } => {
                write!(f, "guest {guest}: position {position} is not embedded")
            }
            Self::NotHostEdge { guest, guest_edge, host_pair } => write!(
                f,
                "guest {guest}: edge {guest_edge:?} maps to non-edge {host_pair:?}"
            ),
            Self::ColorOverlap { edge, first, second } => write!(
                f,
                "color overlap on host edge {edge:?}: guests {first} and {second}"
            ),
            Self::WrongColor { edge, expected, found } => write!(
                f,
                "host edge {edge:?} has color {found}, maps say {expected}"
            ),
            Self::WrongPhase { guest, guest_edge, edge, expected_reservoir } => write!(
                f,
                "guest {guest}: edge {guest_edge:?} landed on {edge:?}, which is not a {} edge",
                if *expected_reservoir { "reservoir" } else { "bulk" }
            ),
            Self::ColorArrayLength { expected, found } => {
                write!(f, "color array has {found} entries, host has {expected} edges")
            }
            Self::UncoveredMismatch { expected, counted, reported } => write!(
                f,
                "uncovered edges: expected {expected}, counted {counted}, reported {reported}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "packing valid");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Re-checks a packing from its embedding maps alone, then compares the
/// recomputed coloring with the one the result reports. The reservoir and
/// color arrays are optional in serialized results; empty arrays skip the
/// corresponding comparisons.
pub fn verify_packing(guests: &[PreparedGuest], hhat: &Graph, result: &PackingResult) -> Verdict {
    let mut out = Vec::new();
    if !result.is_success() {
        out.push(Violation::NotSuccessful);
    }
    if result.embeddings.len() != guests.len() {
        out.push(Violation::GuestCount {
            expected: guests.len(),
            found: result.embeddings.len(),
        });
    }
    let index = EdgeIndex::new(hhat);
    let mut reservoir = vec![false; index.len()];
    for &e in &result.reservoir_edges {
        if let Some(slot) = reservoir.get_mut(e as usize) {
            *slot = true;
        }
    }
    let check_phase = !result.reservoir_edges.is_empty();

    let mut owner = vec![0u32; index.len()];
    for (s, (guest, phi)) in guests.iter().zip(&result.embeddings).enumerate() {
        if phi.guest_n() != guest.n() || phi.host_n() != hhat.n() {
            out.push(Violation::OrderMismatch { guest: s });
            continue;
        }
        if phi.image_set().len() != phi.len() {
            out.push(Violation::NotInjective { guest: s });
        }
        if let Some(p) = (0..guest.n() as u32).find(|&p| phi.image(p).is_none()) {
            out.push(Violation::Unembedded { guest: s, position: p });
        }
        // a partial map still owns the edges between embedded positions
        for (a, b) in guest.graph().edges() {
            let (Some(u), Some(v)) = (phi.image(a), phi.image(b)) else {
                continue;
            };
            let Some(e) = index.get(u, v) else {
                out.push(Violation::NotHostEdge {
                    guest: s,
                    guest_edge: (a, b),
                    host_pair: (u, v),
                });
                continue;
            };
            let edge = (u.min(v), u.max(v));
            if owner[e] != 0 {
                out.push(Violation::ColorOverlap {
                    edge,
                    first: owner[e] as usize - 1,
                    second: s,
                });
                continue;
            }
            owner[e] = s as u32 + 1;
            let tail_edge = guest.is_tail(a) || guest.is_tail(b);
            if check_phase && reservoir[e] != tail_edge {
                out.push(Violation::WrongPhase {
                    guest: s,
                    guest_edge: (a, b),
                    edge,
                    expected_reservoir: tail_edge,
                });
            }
        }
    }

    if !result.colors.is_empty() {
        if result.colors.len() != index.len() {
            out.push(Violation::ColorArrayLength {
                expected: index.len(),
                found: result.colors.len(),
            });
        } else {
            for ((e, (u, v)), (&want, &got)) in hhat
                .edges()
                .enumerate()
                .zip(owner.iter().zip(&result.colors))
            {
                if want != got {
                    debug_assert_eq!(index.get(u, v), Some(e));
                    out.push(Violation::WrongColor {
                        edge: (u, v),
                        expected: want,
                        found: got,
                    });
                }
            }
        }
    }

    let counted = owner.iter().filter(|&&c| c == 0).count();
    let expected = if result.is_success() {
        let used: usize = guests.iter().map(PreparedGuest::edge_count).sum();
        hhat.m().saturating_sub(used)
    } else {
        counted
    };
    if expected != counted || expected != result.uncovered {
        out.push(Violation::UncoveredMismatch {
            expected,
            counted,
            reported: result.uncovered,
        });
    }
    Verdict { violations: out }
}
