//! Fixed-capacity bitsets over vertex indices.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            bits: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::empty(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn singleton(capacity: usize, v: usize) -> Self {
        let mut s = Self::empty(capacity);
        s.insert(v);
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.bits[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let mut a = VertexSet::empty(130);
        a.insert(3);
        a.insert(129);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(a.len(), 2);
        let b = VertexSet::singleton(130, 129);
        assert!(a.intersects(&b));
        a.intersect_with(&b);
        assert_eq!(a, b);
        assert!(VertexSet::empty(5).is_empty());
        assert_eq!(VertexSet::full(5).len(), 5);
    }
}
