//! Dense linear algebra over GF(2).
//!
//! Bit vectors are packed into `u64` words, least significant bit first.
//! Matrices are stored row-major as one [`BitVec`] per row.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
}

/// Fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector from the low `len` bits of `value`, bit `i` of the
    /// integer becoming entry `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len.min(WORD) {
            v.set(i, (value >> i) & 1 == 1);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of bit vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot product of bit vectors with different lengths");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    /// Number of positions where both vectors are set.
    pub fn and_count(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Gf2Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitVec::from_bools(&bits))
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivot rows; the result is zero iff `v` is in
    /// the row space.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (row, &p) in self.matrix.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(k: usize) -> Self {
        Self { cols: k, rows: (0..k).map(|i| BitVec::unit(k, i)).collect() }
    }

    /// Builds a matrix from rows; `cols` fixes the width so that an empty
    /// row list still has a well-defined shape.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows written as `"0110"` strings. All rows must share a length.
    pub fn parse_rows(cols: usize, rows: &[&str]) -> Result<Self, Gf2Error> {
        let rows = rows.iter().map(|r| r.parse()).collect::<Result<Vec<BitVec>, _>>()?;
        Self::from_rows(cols, rows)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Gf2Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for i in c.ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter()
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_bools(&self.rows.iter().map(|r| r.get(j)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Matrix product `self · other` mod 2.
    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows() {
            return Err(Gf2Error::DimensionMismatch { expected: self.cols, found: other.rows() });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { cols: other.cols, rows })
    }

    /// `self · v` mod 2.
    pub fn mat_vec(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>()))
    }

    /// Gauss-Jordan elimination. Pivots are chosen in increasing column
    /// order, taking the first available row each time.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        Echelon { matrix: BitMatrix { cols: self.cols, rows }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Nonzero rows of the reduced row-echelon form.
    pub fn row_space_basis(&self) -> BitMatrix {
        self.rref().matrix
    }

    /// Some `x` with `self · x = b`, or `None` when `b` is outside the
    /// column space. Free variables are set to zero.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, Gf2Error> {
        if b.len() != self.rows() {
            return Err(Gf2Error::DimensionMismatch { expected: self.rows(), found: b.len() });
        }
        let width = self.cols + 1;
        let augmented = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = BitVec::zeros(width);
                for j in row.ones() {
                    r.set(j, true);
                }
                r.set(self.cols, b.get(i));
                r
            })
            .collect();
        let ech = BitMatrix { cols: width, rows: augmented }.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &p) in ech.matrix.rows.iter().zip(&ech.pivots) {
            x.set(p, row.get(self.cols));
        }
        Ok(Some(x))
    }

    /// Whether `v` lies in the span of the rows of `self`.
    pub fn in_row_span(&self, v: &BitVec) -> Result<bool, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self.rref().reduce(v).is_zero())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}
