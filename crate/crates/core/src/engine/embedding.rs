use serde::{Deserialize, Serialize};

use crate::vertex_set::VertexSet;

const UNSET: u32 = u32::MAX;

/// An injective partial map from guest positions to host vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    forward: Vec<u32>,
    inverse: Vec<u32>,
    embedded: usize,
}

impl Embedding {
    pub fn new(guest_n: usize, host_n: usize) -> Self {
        Self {
            forward: vec![UNSET; guest_n],
            inverse: vec![UNSET; host_n],
            embedded: 0,
        }
    }

    /// Maps `position` to `vertex`. Returns `false`, leaving the map
    /// unchanged, if either side is already taken.
    pub fn assign(&mut self, position: u32, vertex: u32) -> bool {
        let (p, v) = (position as usize, vertex as usize);
        if self.forward[p] != UNSET || self.inverse[v] != UNSET {
            return false;
        }
        self.forward[p] = vertex;
        self.inverse[v] = position;
        self.embedded += 1;
        true
    }

    #[inline]
    pub fn image(&self, position: u32) -> Option<u32> {
        match self.forward[position as usize] {
            UNSET => None,
            v => Some(v),
        }
    }

    #[inline]
    pub fn preimage(&self, vertex: u32) -> Option<u32> {
        match self.inverse[vertex as usize] {
            UNSET => None,
            p => Some(p),
        }
    }

    pub fn guest_n(&self) -> usize {
        self.forward.len()
    }

    pub fn host_n(&self) -> usize {
        self.inverse.len()
    }

    /// Number of embedded positions, i.e. `|im(ψ)|`.
    pub fn len(&self) -> usize {
        self.embedded
    }

    pub fn is_empty(&self) -> bool {
        self.embedded == 0
    }

    pub fn is_complete(&self) -> bool {
        self.embedded == self.forward.len()
    }

    pub fn image_set(&self) -> VertexSet {
        let mut set = VertexSet::empty(self.inverse.len());
        for v in self.forward.iter().copied().filter(|&v| v != UNSET) {
            set.insert(v);
        }
        set
    }

    pub fn to_options(&self) -> Vec<Option<u32>> {
        (0..self.forward.len() as u32).map(|p| self.image(p)).collect()
    }

    /// Rebuilds an embedding from a forward map; `None` if it is not
    /// injective or points outside the host.
    pub fn from_options(map: &[Option<u32>], host_n: usize) -> Option<Self> {
        let mut e = Self::new(map.len(), host_n);
        for (p, v) in map.iter().enumerate() {
            if let Some(v) = *v {
                if v as usize >= host_n || !e.assign(p as u32, v) {
                    return None;
                }
            }
        }
        Some(e)
    }
}

/// Serialized form: the forward map only, `null` for unembedded positions.
#[derive(Serialize, Deserialize)]
struct EmbeddingRepr {
    host_n: usize,
    forward: Vec<Option<u32>>,
}

impl Serialize for Embedding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddingRepr {
            host_n: self.host_n(),
            forward: self.to_options(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Embedding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = EmbeddingRepr::deserialize(d)?;
        Embedding::from_options(&repr.forward, repr.host_n)
            .ok_or_else(|| serde::de::Error::custom("embedding is not injective"))
    }
}
