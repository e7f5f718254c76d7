//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices store 64 bits per machine word. All padding bits past
//! the logical length are kept at zero, so word-level operations (XOR,
//! AND/popcount dot products) never need masking on read. Elimination scans
//! columns left to right, which makes ranks, kernels and row-space reductions
//! deterministic for a given input.

use crate::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A vector over GF(2), bit-packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    /// Builds from a slice of 0/1 bytes.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones exactly at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "BitVec length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the ones, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Expands to one byte per bit (0 or 1).
    pub fn to_dense(&self) -> Vec<u8> {
        (0..self.len).map(|i| u8::from(self.get(i))).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Parity of the AND of two vectors (the GF(2) inner product).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "BitVec length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A matrix over GF(2), rows bit-packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        Self { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds from dense 0/1 rows; every row must have the same length.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows in from_dense".into()));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Stacks row vectors (all of equal length) into a matrix.
    pub fn from_rows(rows: &[BitVec]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows in from_rows".into()));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.wpr + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD_BITS);
        let w = &mut self.data[r * self.wpr + c / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    /// Copies row `r` out as a vector.
    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(r).to_vec() }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        let (t, s) = (target * self.wpr, source * self.wpr);
        for k in 0..self.wpr {
            let v = self.data[s + k];
            self.data[t + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.data.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let words = self.row_words(r);
            for (wi, &w) in words.iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    t.set(wi * WORD_BITS + b, r, true);
                    bits &= bits - 1;
                }
            }
        }
        t
    }

    /// Matrix product over GF(2). `self` is `r x k`, `other` must be `k x c`.
    pub fn mat_mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "mat_mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ot = other.transpose();
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a = self.row_words(i);
            for j in 0..other.cols {
                let b = ot.row_words(j);
                let mut acc = 0u64;
                for (x, y) in a.iter().zip(b) {
                    acc ^= x & y;
                }
                if acc.count_ones() % 2 == 1 {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product: returns `self * v` as a length-`rows` vector.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "mul_vec: {}x{} times length-{}",
                self.rows, self.cols, v.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (x, y) in self.row_words(r).iter().zip(v.words()) {
                acc ^= x & y;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack: row count mismatch".into()));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                out.set(r, c, true);
            }
            for c in other.row(r).ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// Copy with the listed rows removed (indices may be unsorted; duplicates
    /// are ignored).
    pub fn delete_rows(&self, rows: &[usize]) -> Result<BitMatrix> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::InvalidArgument(format!(
                "delete_rows: row {bad} out of range for {} rows",
                self.rows
            )));
        }
        let mut keep: Vec<bool> = vec![true; self.rows];
        for &r in rows {
            keep[r] = false;
        }
        let kept: Vec<usize> = (0..self.rows).filter(|&r| keep[r]).collect();
        let mut out = BitMatrix::zeros(kept.len(), self.cols);
        for (i, &r) in kept.iter().enumerate() {
            let src = self.row_words(r).to_vec();
            out.row_words_mut(i).copy_from_slice(&src);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Row rank.
    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Reduced row-echelon form with pivot bookkeeping. Zero rows are dropped.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.rows = r;
        m.data.truncate(r * m.wpr);
        Echelon { mat: m, pivots }
    }

    /// Whether `v` lies in the row space of `self`.
    pub fn in_rowspace(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "in_rowspace: vector length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.echelon().contains(v))
    }

    /// Basis for the right kernel `{x : self * x = 0}`, one vector per row.
    /// The basis has exactly `cols - rank` rows.
    pub fn kernel_basis(&self) -> BitMatrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (bi, &f) in free.iter().enumerate() {
            basis.set(bi, f, true);
            for (ri, &p) in ech.pivots.iter().enumerate() {
                if ech.mat.get(ri, f) {
                    basis.set(bi, p, true);
                }
            }
        }
        basis
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&BitMatrix::identity(n)).expect("same rows");
        let ech = aug.echelon();
        // Invertible iff the left half reduces to the identity, i.e. the first
        // n pivots are exactly columns 0..n.
        if ech.pivots.len() < n || ech.pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        let mut inv = BitMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if ech.mat.get(r, n + c) {
                    inv.set(r, c, true);
                }
            }
        }
        Some(inv)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form of a matrix, reusable for many membership or
/// residual-reduction queries against the same row space.
pub struct Echelon {
    mat: BitMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.mat
    }

    /// Reduces `v` in place modulo the row space.
    pub fn reduce(&self, v: &mut BitVec) {
        assert_eq!(v.len(), self.mat.cols, "reduce: length mismatch");
        for (ri, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                for (a, b) in v.words.iter_mut().zip(self.mat.row_words(ri)) {
                    *a ^= b;
                }
            }
        }
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &BitVec) -> bool {
        let mut r = v.clone();
        self.reduce(&mut r);
        r.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        assert_eq!(v.len(), 130);
        assert!(v.is_zero());
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.ones(), vec![0, 64, 129]);
        v.set(64, false);
        assert_eq!(v.weight(), 2);
        let w = BitVec::from_support(130, &[0, 1]);
        let mut x = v.clone();
        x.xor_assign(&w);
        assert_eq!(x.ones(), vec![1, 129]);
        assert!(v.dot(&w)); // overlap only at bit 0
    }

    #[test]
    fn identity_and_mul() {
        let i4 = BitMatrix::identity(4);
        let m = BitMatrix::from_dense(&[
            vec![1, 0, 1, 1],
            vec![0, 1, 1, 0],
        ])
        .unwrap();
        assert_eq!(m.mat_mul(&i4).unwrap(), m);
        let v = BitVec::from_bits(&[1, 1, 0, 1]);
        let s = m.mul_vec(&v).unwrap();
        assert_eq!(s.to_dense(), vec![0, 1]);
    }

    #[test]
    fn mul_dimension_error() {
        let a = BitMatrix::zeros(2, 3);
        let b = BitMatrix::zeros(2, 3);
        assert!(a.mat_mul(&b).is_err());
        assert!(a.mul_vec(&BitVec::zeros(2)).is_err());
    }

    #[test]
    fn rank_kernel_small() {
        // rows: 1100, 0110, 1010 (third = first + second) -> rank 2
        let m = BitMatrix::from_dense(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![1, 0, 1, 0],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2); // 4 - 2
        for r in 0..k.rows() {
            assert!(m.mul_vec(&k.row(r)).unwrap().is_zero());
        }
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn rowspace_membership() {
        let m = BitMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert!(m.in_rowspace(&BitVec::from_bits(&[1, 0, 1])).unwrap());
        assert!(m.in_rowspace(&BitVec::zeros(3)).unwrap());
        assert!(!m.in_rowspace(&BitVec::from_bits(&[1, 1, 1])).unwrap());
        assert!(m.in_rowspace(&BitVec::zeros(4)).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = BitMatrix::from_dense(&[
            vec![1, 1, 0],
            vec![0, 1, 1],
            vec![0, 0, 1],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mat_mul(&inv).unwrap(), BitMatrix::identity(3));
        let singular = BitMatrix::from_dense(&[
            vec![1, 1, 0],
            vec![0, 1, 1],
            vec![1, 0, 1],
        ])
        .unwrap();
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn delete_rows_keeps_order() {
        let m = BitMatrix::from_dense(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap();
        let d = m.delete_rows(&[1]).unwrap();
        assert_eq!(d.rows(), 2);
        assert!(d.get(0, 0) && d.get(1, 2));
        assert!(m.delete_rows(&[7]).is_err());
    }
}
