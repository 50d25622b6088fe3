//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words. [`Echelon`] maintains a row-reduced
//! basis incrementally and can report, for any vector, whether it lies in the
//! span and which inserted vectors combine to it.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in indices {
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
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |i| self.get(*i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// Incremental row echelon form.
///
/// Every stored row carries a combination vector recording which inserted
/// vectors (by insertion index) sum to it.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<(usize, BitVec, BitVec)>,
    inserted: usize,
    combos_len: usize,
}

impl Echelon {
    /// `capacity` bounds the number of vectors that will be inserted; it sizes
    /// the combination vectors.
    pub fn new(dim: usize, capacity: usize) -> Self {
        Echelon { dim, rows: Vec::new(), inserted: 0, combos_len: capacity }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. Returns the residual and the
    /// combination of inserted vectors that was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut combo = BitVec::zeros(self.combos_len);
        for (pivot, row, c) in &self.rows {
            if r.get(*pivot) {
                r.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        (r, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`. Returns `Ok(())` if it was independent, otherwise the
    /// combination of earlier inserted vectors equal to it.
    pub fn insert(&mut self, v: &BitVec) -> Result<(), BitVec> {
        assert!(self.inserted < self.combos_len, "echelon capacity exceeded");
        let (mut r, mut combo) = self.reduce(v);
        let idx = self.inserted;
        self.inserted += 1;
        match r.first_one() {
            None => Err(combo),
            Some(p) => {
                combo.flip(idx);
                // keep rows fully reduced on the new pivot
                for (_, row, c) in self.rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&r);
                        c.xor_assign(&combo);
                    }
                }
                let pos = self.rows.partition_point(|(q, _, _)| *q < p);
                r.set(p, true);
                self.rows.insert(pos, (p, r, combo));
                Ok(())
            }
        }
    }

    /// Reduced basis rows in pivot order.
    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter().map(|(_, r, _)| r)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _, _)| *p)
    }

    /// Expresses `v` as a combination of inserted vectors, if it lies in the span.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let (r, combo) = self.reduce(v);
        r.is_zero().then_some(combo)
    }
}

/// Rank of a list of vectors of common length.
pub fn rank(vectors: &[BitVec], dim: usize) -> usize {
    let mut e = Echelon::new(dim, vectors.len());
    for v in vectors {
        let _ = e.insert(v);
    }
    e.rank()
}

/// Basis of the kernel of the map sending the i-th standard basis vector of
/// the domain to `images[i]`, returned as domain vectors.
pub fn kernel(images: &[BitVec], codim: usize) -> Vec<BitVec> {
    let mut e = Echelon::new(codim, images.len());
    let mut out = Vec::new();
    for v in images {
        if let Err(mut combo) = e.insert(v) {
            combo.flip(e.inserted - 1);
            out.push(combo);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &str) -> BitVec {
        BitVec::from_indices(bits.len(), bits.char_indices().filter(|(_, c)| *c == '1').map(|(i, _)| i))
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![bv("110"), bv("011"), bv("101")];
        assert_eq!(rank(&rows, 3), 2);
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], bv("111"));
    }

    #[test]
    fn solve_reports_combination() {
        let mut e = Echelon::new(4, 3);
        e.insert(&bv("1100")).unwrap();
        e.insert(&bv("0110")).unwrap();
        e.insert(&bv("0001")).unwrap();
        let c = e.solve(&bv("1011")).unwrap();
        assert_eq!(c, bv("111"));
        assert!(e.solve(&bv("1000")).is_none());
    }

    #[test]
    fn wide_vectors_cross_word_boundary() {
        let a = BitVec::from_indices(130, [3, 70, 129]);
        let b = BitVec::from_indices(130, [70]);
        let mut e = Echelon::new(130, 2);
        e.insert(&a).unwrap();
        e.insert(&b).unwrap();
        assert!(e.contains(&BitVec::from_indices(130, [3, 129])));
        assert_eq!(a.first_one(), Some(3));
        assert_eq!(a.count_ones(), 3);
    }
}
