//! Incremental reduced row echelon form over GF(2).

use alloc::vec::Vec;

use crate::bits::BitVec;

/// Fully reduced basis of a subspace, with each row tagged by the
/// combination of inserted basis vectors it equals.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    tags: Vec<BitVec>,
    originals: Vec<BitVec>,
    max_rank: usize,
}

impl Echelon {
    /// `max_rank` bounds the tag width.
    pub fn new(len: usize, max_rank: usize) -> Self {
        Self { len, rows: Vec::new(), pivots: Vec::new(), tags: Vec::new(), originals: Vec::new(), max_rank }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Independent vectors in insertion order.
    pub fn basis(&self) -> &[BitVec] {
        &self.originals
    }

    /// Residue of `v` modulo the span and the basis combination removed.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut tag = BitVec::zeros(self.max_rank);
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.tags) {
            if r.get(p) {
                r.xor_assign(row);
                tag.xor_assign(t);
            }
        }
        (r, tag)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coordinates of `v` in [`Echelon::basis`], if `v` lies in the span.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        let (r, tag) = self.reduce(v);
        r.is_zero().then_some(tag)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let (r, mut tag) = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        assert!(self.rows.len() < self.max_rank, "echelon tag width exceeded");
        tag.flip(self.originals.len());
        for (row, t) in self.rows.iter_mut().zip(self.tags.iter_mut()) {
            if row.get(p) {
                row.xor_assign(&r);
                t.xor_assign(&tag);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        self.tags.push(tag);
        self.originals.push(v.clone());
        true
    }

    /// Positions not used as pivots; their unit vectors complete a basis.
    pub fn free_positions(&self) -> Vec<usize> {
        let mut used = alloc::vec![false; self.len];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.len).filter(|&i| !used[i]).collect()
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[BitVec]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut e = Echelon::new(first.len(), first.len().min(vectors.len()));
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : Σ x_i v_i = 0}` as bit vectors of length `vectors.len()`.
pub fn kernel(vectors: &[BitVec], len: usize) -> Vec<BitVec> {
    let m = vectors.len();
    let mut e = Echelon::new(len, m);
    let mut inserted = Vec::new();
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        match e.coords(v) {
            Some(c) => {
                let mut x = BitVec::zeros(m);
                x.set(i, true);
                for k in c.iter_ones() {
                    x.flip(inserted[k]);
                }
                out.push(x);
            }
            None => {
                e.insert(v);
                inserted.push(i);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVec {
        BitVec::from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_coords() {
        let vs = [bv("1100"), bv("0110"), bv("1010")];
        assert_eq!(rank(&vs), 2);
        let mut e = Echelon::new(4, 4);
        assert!(e.insert(&vs[0]));
        assert!(e.insert(&vs[1]));
        assert!(!e.insert(&vs[2]));
        assert_eq!(e.coords(&bv("1010")), Some(bv("1100")));
        assert_eq!(e.coords(&bv("0001")), None);
        assert_eq!(e.free_positions().len(), 2);
    }

    #[test]
    fn kernel_relation() {
        let vs = [bv("1100"), bv("0110"), bv("1010")];
        let k = kernel(&vs, 4);
        assert_eq!(k, [bv("111")]);
    }

    proptest! {
        #[test]
        fn coords_reconstruct(raw in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 12), 1..10)) {
            let vs: Vec<BitVec> = raw.iter().map(|r| BitVec::from_bools(r)).collect();
            let mut e = Echelon::new(12, 12);
            for v in &vs { e.insert(v); }
            for v in &vs {
                let c = e.coords(v).unwrap();
                let mut acc = BitVec::zeros(12);
                for k in c.iter_ones() { acc.xor_assign(&e.basis()[k]); }
                prop_assert_eq!(&acc, v);
            }
            for x in kernel(&vs, 12) {
                let mut acc = BitVec::zeros(12);
                for i in x.iter_ones() { acc.xor_assign(&vs[i]); }
                prop_assert!(acc.is_zero());
            }
        }
    }
}
