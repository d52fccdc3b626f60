//! Order-maintenance list for labeled vertices.
//!
//! Labels are appended at the end or inserted right after an existing
//! element; comparisons use integer keys spaced by a large gap, renumbered
//! when a gap is exhausted.

use std::collections::HashMap;

use crate::linalg::VertexId;

const GAP: u64 = 1 << 32;

#[derive(Debug, Clone, Default)]
pub(crate) struct Order {
    key: HashMap<VertexId, u64>,
    seq: Vec<VertexId>,
}

impl Order {
    /// Appends `v` as the largest element.
    pub fn push(&mut self, v: VertexId) {
        let k = self.seq.last().map_or(GAP, |l| self.key[l] + GAP);
        self.key.insert(v, k);
        self.seq.push(v);
    }

    /// Inserts `v` immediately after `r`.
    pub fn insert_after(&mut self, r: VertexId, v: VertexId) {
        let pos = self.position(r);
        let lo = self.key[&r];
        let hi = self.seq.get(pos + 1).map_or(lo + 2 * GAP, |n| self.key[n]);
        if hi - lo < 2 {
            self.renumber();
            return self.insert_after(r, v);
        }
        self.key.insert(v, lo + (hi - lo) / 2);
        self.seq.insert(pos + 1, v);
    }

    fn position(&self, r: VertexId) -> usize {
        let k = self.key[&r];
        self.seq.partition_point(|x| self.key[x] < k)
    }

    fn renumber(&mut self) {
        for (i, v) in self.seq.iter().enumerate() {
            self.key.insert(*v, (i as u64 + 1) * GAP);
        }
    }

    /// Sort key of a labeled vertex.
    pub fn key(&self, v: VertexId) -> u64 {
        self.key[&v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_after_keeps_order_through_renumbering() {
        let mut o = Order::default();
        o.push(VertexId(0));
        o.push(VertexId(1));
        for i in 2..80 {
            o.insert_after(VertexId(0), VertexId(i));
        }
        assert!(o.key(VertexId(0)) < o.key(VertexId(79)));
        assert!(o.key(VertexId(79)) < o.key(VertexId(78)));
        assert!(o.key(VertexId(2)) < o.key(VertexId(1)));
        let keys: Vec<u64> = o.seq.iter().map(|v| o.key(*v)).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
