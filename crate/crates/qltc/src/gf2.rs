//! Bit-packed linear algebra over GF(2).

use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Dense bit vector. Trailing bits of the last word are kept zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
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
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
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

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the AND with `other`; the GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let acc: u64 = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0, |acc, (a, b)| acc ^ (a & b));
        acc.count_ones() % 2 == 1
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_support().collect()
    }

    pub fn iter_support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Lowest set bit, if any.
    pub fn first_set(&self) -> Option<usize> {
        self.words.iter().enumerate().find_map(|(wi, &w)| {
            (w != 0).then(|| wi * WORD_BITS + w.trailing_zeros() as usize)
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Concatenation, `self` in the low positions.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_support() {
            out.set(i, true);
        }
        for i in other.iter_support() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVector({s})")
    }
}

/// Dense GF(2) matrix, one bit-packed word slice per row.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "row length mismatch");
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    /// Rows given as sorted or unsorted column-index lists.
    pub fn from_supports(rows: usize, cols: usize, supports: &[Vec<usize>]) -> Self {
        assert_eq!(supports.len(), rows, "support count mismatch");
        let mut m = Self::zeros(rows, cols);
        for (r, sup) in supports.iter().enumerate() {
            for &c in sup {
                assert!(c < cols, "column index {c} out of range {cols}");
                m.set(r, c, true);
            }
        }
        m
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
        self.data[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            words: self.row_words(r).to_vec(),
            len: self.cols,
        }
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).support()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_row_from(&mut self, target: usize, source: usize) {
        debug_assert_ne!(target, source);
        let (t, s) = (target * self.words_per_row, source * self.words_per_row);
        for k in 0..self.words_per_row {
            let w = self.data[s + k];
            self.data[t + k] ^= w;
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVector) {
        assert_eq!(v.len(), self.cols);
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|r| self.row_weight(r)).max().unwrap_or(0)
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.cols];
        for r in 0..self.rows {
            for c in self.row(r).iter_support() {
                w[c] += 1;
            }
        }
        w
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_support() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2). Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} times {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in self.row(r).iter_support() {
                let (t, s) = (r * out.words_per_row, c * other.words_per_row);
                for k in 0..out.words_per_row {
                    out.data[t + k] ^= other.data[s + k];
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let acc: u64 = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0, |acc, (a, b)| acc ^ (a & b));
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Kronecker product; block (i,j) of the result is a(i,j) * b, so
    /// entry ((i*b.rows + k), (j*b.cols + l)) = a(i,j) * b(k,l).
    pub fn kronecker(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            let a_sup = self.row_support(i);
            for k in 0..other.rows {
                let r = i * other.rows + k;
                for &j in &a_sup {
                    for l in other.row(k).iter_support() {
                        out.set(r, j * other.cols + l, true);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation; all blocks must agree on row count.
    pub fn hstack(blocks: &[&BitMatrix]) -> BitMatrix {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack row mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for r in 0..rows {
                for c in b.row(r).iter_support() {
                    out.set(r, offset + c, true);
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must agree on column count.
    pub fn vstack(blocks: &[&BitMatrix]) -> BitMatrix {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack col mismatch");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for r in 0..b.rows {
                out.row_words_mut(offset + r).copy_from_slice(b.row_words(r));
            }
            offset += b.rows;
        }
        out
    }

    /// Rows of `self` restricted to `rows`, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (new_r, &r) in rows.iter().enumerate() {
            out.row_words_mut(new_r).copy_from_slice(self.row_words(r));
        }
        out
    }

    /// Columns of `self` restricted to `cols`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (new_c, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, new_c, true);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for v in self.iter_rows() {
            ech.insert(v);
        }
        ech.rank()
    }

    /// Rank together with a basis of the right kernel {x : self * x = 0}.
    /// The basis has cols - rank elements, one per free column.
    pub fn rank_kernel(&self) -> (usize, Vec<BitVector>) {
        // Reduced echelon rows, pivots strictly increasing.
        let mut ech = Echelon::new(self.cols);
        for v in self.iter_rows() {
            ech.insert(v);
        }
        let rank = ech.rank();
        let pivots = ech.pivots().to_vec();
        let is_pivot = {
            let mut flags = vec![false; self.cols];
            for &p in &pivots {
                flags[p] = true;
            }
            flags
        };
        let mut kernel = Vec::with_capacity(self.cols - rank);
        for (free, &pivot_col) in is_pivot.iter().enumerate() {
            if pivot_col {
                continue;
            }
            let mut x = BitVector::zeros(self.cols);
            x.set(free, true);
            // Row i has pivot pivots[i]; entry at the free column feeds back.
            for (i, &p) in pivots.iter().enumerate() {
                if ech.rows()[i].get(free) {
                    x.set(p, true);
                }
            }
            kernel.push(x);
        }
        debug_assert!(kernel.iter().all(|x| self.mul_vec(x).is_zero()));
        (rank, kernel)
    }

    /// True when both matrices span the same row space.
    pub fn row_space_equal(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let ech = Echelon::from_rows(self.iter_rows());
        let other_ech = Echelon::from_rows(other.iter_rows());
        ech.rank() == other_ech.rank() && other.iter_rows().all(|v| ech.contains(&v))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let s: String = (0..self.cols.min(128))
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        if self.rows > 32 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon accumulator with strictly increasing pivots.
#[derive(Clone)]
pub struct Echelon {
    cols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(rows: impl Iterator<Item = BitVector>) -> Self {
        let mut rows = rows.peekable();
        let cols = rows.peek().map_or(0, |v| v.len());
        let mut ech = Echelon::new(cols);
        for v in rows {
            ech.insert(v);
        }
        ech
    }

    /// Reduce `v` against the basis; if a nonzero remainder survives, absorb
    /// it (keeping reduced form) and return true.
    pub fn insert(&mut self, v: BitVector) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.first_set() else {
            return false;
        };
        let pos = self.pivots.partition_point(|&p| p < pivot);
        // Clear this pivot from earlier rows to stay fully reduced.
        for i in 0..pos {
            if self.rows[i].get(pivot) {
                self.rows[i].xor_assign(&v);
            }
        }
        self.rows.insert(pos, v);
        self.pivots.insert(pos, pivot);
        true
    }

    /// Remainder of `v` after elimination by the basis.
    pub fn reduce(&self, mut v: BitVector) -> BitVector {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Gray code order: iterate all 2^k combinations of `basis`, calling
/// `visit(current, index)` after each single-basis-vector toggle. `index`
/// is the gray code of the step counter, so bit j of `index` says whether
/// basis[j] is currently included. Starts from the zero vector (visited
/// with index 0 first).
pub fn gray_enumerate(
    len: usize,
    basis: &[BitVector],
    mut visit: impl FnMut(&BitVector, u64) -> bool,
) {
    let k = basis.len();
    assert!(k < 63, "gray enumeration exponent too large");
    let mut current = BitVector::zeros(len);
    if !visit(&current, 0) {
        return;
    }
    for step in 1u64..(1u64 << k) {
        let j = step.trailing_zeros() as usize;
        current.xor_assign(&basis[j]);
        let index = step ^ (step >> 1);
        if !visit(&current, index) {
            return;
        }
    }
}
