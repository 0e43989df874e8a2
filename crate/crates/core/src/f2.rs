//! Dense linear algebra over F2 with bit-packed rows.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

/// Row-reduced basis of a subspace, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    rows: Vec<(usize, BitVec)>,
}

impl Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis, returning the remainder.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                for (_, row) in &mut self.rows {
                    if row.get(p) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.push((p, r));
                true
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

pub fn rank(rows: impl IntoIterator<Item = BitVec>) -> usize {
    let mut b = Basis::new();
    for r in rows {
        b.insert(r);
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            BitVec::from_ones(5, [0, 1]),
            BitVec::from_ones(5, [1, 2]),
            BitVec::from_ones(5, [0, 2]),
        ];
        assert_eq!(rank(rows), 2);
    }

    proptest! {
        #[test]
        fn sums_of_members_are_members(rows in prop::collection::vec(prop::collection::vec(0usize..70, 0..6), 1..8), pick in prop::collection::vec(any::<bool>(), 8)) {
            let vecs: Vec<BitVec> = rows.iter().map(|r| BitVec::from_ones(70, r.iter().copied())).collect();
            let mut b = Basis::new();
            for v in &vecs { b.insert(v.clone()); }
            let mut s = BitVec::zeros(70);
            for (v, &p) in vecs.iter().zip(&pick) { if p { s.xor_assign(v); } }
            prop_assert!(b.contains(&s));
            prop_assert!(b.rank() <= vecs.len());
        }
    }
}
