//! Linear algebra over GF(2): bit vectors, packed bit matrices, the polarizing
//! transform `A_m = B_m F^{⊗m}` and constraint-matrix normalization.

use std::fmt;

use crate::error::{Error, Result};

/// A fixed-length vector over GF(2), one byte per symbol.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    bits: Vec<u8>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// Builds a vector from 0/1 bytes; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Parse(format!("non-binary value {} at index {pos}", bits[pos])));
        }
        Ok(Self { bits: bits.to_vec() })
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.bits[index] = 1;
        v
    }

    /// Low `len` bits of `mask`, bit `j` of the mask becoming symbol `j`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self { bits: (0..len).map(|j| ((mask >> j) & 1) as u8).collect() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> u8 {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: u8) {
        self.bits[index] = value & 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Packs the vector into a `u64`, symbol `j` at bit `j`. Panics above 64 symbols.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len() <= 64, "vector too long for a u64 mask");
        self.bits.iter().enumerate().fold(0, |acc, (j, &b)| acc | (u64::from(b) << j))
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!("xor of lengths {} and {}", self.len(), other.len())));
        }
        Ok(Self { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() })
    }

    /// Row-vector times matrix.
    pub fn mul_matrix(&self, m: &BitMatrix) -> Result<Self> {
        if self.len() != m.rows() {
            return Err(Error::Dimension(format!(
                "vector of length {} times {}x{} matrix",
                self.len(),
                m.rows(),
                m.cols()
            )));
        }
        let mut acc = vec![0u64; m.words];
        for (i, &b) in self.bits.iter().enumerate() {
            if b == 1 {
                for (a, w) in acc.iter_mut().zip(m.row_words(i)) {
                    *a ^= w;
                }
            }
        }
        Ok(Self { bits: (0..m.cols()).map(|j| ((acc[j / 64] >> (j % 64)) & 1) as u8).collect() })
    }
}

impl From<BitVector> for Vec<u8> {
    fn from(v: BitVector) -> Self {
        v.bits
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Dense GF(2) matrix with rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            for (j, &b) in r.as_slice().iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// Parses the fixture text format: one row per line, characters `0`/`1`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(BitVector::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    /// Renders the matrix in the fixture text format (trailing newline included).
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            s.push_str(&self.row(i).to_string());
            s.push('\n');
        }
        s
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        debug_assert!(i < self.rows && j < self.cols);
        ((self.data[i * self.words + j / 64] >> (j % 64)) & 1) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.words + j / 64];
        let bit = 1u64 << (j % 64);
        if value & 1 == 1 {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.words {
            let w = self.data[src * self.words + k];
            self.data[dst * self.words + k] ^= w;
        }
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector { bits: (0..self.cols).map(|j| self.get(i, j)).collect() }
    }

    /// Row `i` packed into a `u64` (symbol `j` at bit `j`); requires at most 64 columns.
    pub fn row_mask(&self, i: usize) -> u64 {
        assert!(self.cols <= 64, "row_mask needs at most 64 columns");
        self.data[i * self.words]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) == 1 {
                    t.set(j, i, 1);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) == 1 {
                    for w in 0..out.words {
                        out.data[i * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) == 0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out.set(i * other.rows + p, j * other.cols + q, other.get(p, q));
                    }
                }
            }
        }
        out
    }

    /// Matrix whose row `i` is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(perm.len(), self.cols);
        for (i, &src) in perm.iter().enumerate() {
            out.data[i * self.words..(i + 1) * self.words].copy_from_slice(self.row_words(src));
        }
        out
    }

    /// Matrix whose column `j` is column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, perm.len());
        for i in 0..self.rows {
            for (j, &src) in perm.iter().enumerate() {
                out.set(i, j, self.get(i, src));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("stacking {} and {} columns", self.cols, other.cols)));
        }
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend_from_slice(&other.data);
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, col) == 1) else {
                continue;
            };
            if p != rank {
                for k in 0..m.words {
                    m.data.swap(p * m.words + k, rank * m.words + k);
                }
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) == 1 {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &Self) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let r = self.rank();
        r == other.rank() && self.vstack(other).map(|s| s.rank() == r).unwrap_or(false)
    }

    /// True when `v` lies in the row space of `self`.
    pub fn spans(&self, v: &BitVector) -> bool {
        match BitMatrix::from_rows(std::slice::from_ref(v)).and_then(|m| self.vstack(&m)) {
            Ok(s) => s.rank() == self.rank(),
            Err(_) => false,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        f.write_str(&self.to_text())
    }
}

/// Bit-reversal permutation on `{0, …, 2^m − 1}`: entry `j` is `j` with its
/// `m`-bit expansion reversed.
pub fn bit_reversal_perm(m: u32) -> Vec<usize> {
    let n = 1usize << m;
    (0..n)
        .map(|j| if m == 0 { 0 } else { j.reverse_bits() >> (usize::BITS - m) })
        .collect()
}

/// The polarizing transform `A_m = B_m F^{⊗m}` with kernel `F = [[1,0],[1,1]]`.
pub fn polarizing_transform(m: u32) -> BitMatrix {
    let kernel = BitMatrix::from_rows(&[
        BitVector { bits: vec![1, 0] },
        BitVector { bits: vec![1, 1] },
    ])
    .expect("kernel is rectangular");
    let mut f = BitMatrix::identity(1);
    for _ in 0..m {
        f = f.kron(&kernel);
    }
    f.permute_rows(&bit_reversal_perm(m))
}

/// Block-diagonal `diag(A_{m_0}, …, A_{m_{s−1}})`.
pub fn mixed_transform_matrix(segment_orders: &[u32]) -> BitMatrix {
    let n: usize = segment_orders.iter().map(|&m| 1usize << m).sum();
    let mut out = BitMatrix::zeros(n, n);
    let mut offset = 0;
    for &m in segment_orders {
        let a = polarizing_transform(m);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                out.set(offset + i, offset + j, a.get(i, j));
            }
        }
        offset += a.rows();
    }
    out
}

/// In-place `x ← x · A_m` for a slice of length `2^m` holding 0/1 values.
///
/// Uses `A_m = B_m F^{⊗m}`: bit-reverse the input, then run the `F^{⊗m}` butterflies.
pub fn polar_transform_in_place(x: &mut [u8]) {
    let n = x.len();
    assert!(n.is_power_of_two(), "polar transform length must be a power of two");
    let m = n.trailing_zeros();
    if m > 0 {
        for j in 0..n {
            let r = j.reverse_bits() >> (usize::BITS - m);
            if j < r {
                x.swap(j, r);
            }
        }
    }
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for j in block..block + half {
                x[j] ^= x[j + half];
            }
        }
        half *= 2;
    }
}

/// Total length `Σ 2^{m_i}` of a chained transform.
pub fn chained_length(segment_orders: &[u32]) -> usize {
    segment_orders.iter().map(|&m| 1usize << m).sum()
}

/// Applies `diag(A_{m_0}, …)` to `u`, segment by segment.
pub fn apply_mixed_transform(u: &BitVector, segment_orders: &[u32]) -> Result<BitVector> {
    let n = chained_length(segment_orders);
    if u.len() != n {
        return Err(Error::Dimension(format!("input of length {} for transform of length {n}", u.len())));
    }
    let mut bits = u.bits.clone();
    let mut offset = 0;
    for &m in segment_orders {
        let len = 1usize << m;
        polar_transform_in_place(&mut bits[offset..offset + len]);
        offset += len;
    }
    Ok(BitVector { bits })
}

/// Frozen positions and their dynamic freezing constraints
/// `u_i = Σ_{j<i} V_{s_i, j} u_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    n: usize,
    frozen: Vec<usize>,
    /// Indexed by symbol; `Some((row, deps))` for frozen symbols.
    rules: Vec<Option<(usize, Vec<usize>)>>,
}

impl ConstraintSet {
    /// Reads the constraint structure off a matrix whose rows have distinct
    /// last nonzero columns.
    pub fn from_constraint_matrix(v: &BitMatrix) -> Result<Self> {
        let n = v.cols();
        let mut rules = vec![None; n];
        for s in 0..v.rows() {
            let row = v.row(s);
            let Some(last) = (0..n).rev().find(|&j| row.get(j) == 1) else {
                return Err(Error::RankDeficient { rank: s, expected: v.rows() });
            };
            if rules[last].is_some() {
                return Err(Error::Dimension(format!("rows share last nonzero column {last}")));
            }
            let deps = (0..last).filter(|&j| row.get(j) == 1).collect();
            rules[last] = Some((s, deps));
        }
        let frozen = (0..n).filter(|&i| rules[i].is_some()).collect();
        Ok(Self { n, frozen, rules })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Frozen indices in increasing order.
    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.rules[i].is_some()
    }

    /// Earlier symbols the frozen symbol `i` depends on; `None` for information symbols.
    pub fn dependencies(&self, i: usize) -> Option<&[usize]> {
        self.rules[i].as_ref().map(|(_, d)| d.as_slice())
    }

    /// Row of `V` whose last one sits in column `i`.
    pub fn row_of(&self, i: usize) -> Option<usize> {
        self.rules[i].as_ref().map(|(s, _)| *s)
    }

    /// Value forced on frozen symbol `i` by the already decided symbols in `u`.
    pub fn frozen_value(&self, i: usize, u: &[u8]) -> u8 {
        self.dependencies(i).map_or(0, |deps| deps.iter().fold(0, |acc, &j| acc ^ u[j]))
    }

    /// Information (non-frozen) indices in increasing order.
    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.is_frozen(i)).collect()
    }

    /// True when `u` satisfies every freezing constraint.
    pub fn is_satisfied(&self, u: &[u8]) -> bool {
        self.frozen.iter().all(|&i| u[i] == self.frozen_value(i, u))
    }
}

/// Derives the constraint matrix `V` (row space of `H·Aᵀ`) and its constraint set.
///
/// Elimination pivots on the last nonzero column of each row, scanning columns
/// right to left, and clears every pivot column from all other rows. The result
/// is unique for a given row space, so it does not depend on the row order of `h`.
pub fn normalize_constraints(h: &BitMatrix, segment_orders: &[u32]) -> Result<(BitMatrix, ConstraintSet)> {
    let n = chained_length(segment_orders);
    if h.cols() != n {
        return Err(Error::Dimension(format!("check matrix has {} columns, transform length {n}", h.cols())));
    }
    let a = mixed_transform_matrix(segment_orders);
    let mut m = h.mul(&a.transpose())?;
    let rows = m.rows();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    for col in (0..n).rev() {
        let Some(p) = (0..rows).find(|&r| pivot_of_row[r].is_none() && m.get(r, col) == 1) else {
            continue;
        };
        pivot_of_row[p] = Some(col);
        for r in 0..rows {
            if r != p && m.get(r, col) == 1 {
                m.xor_row_into(p, r);
            }
        }
    }
    let rank = pivot_of_row.iter().filter(|p| p.is_some()).count();
    if rank != rows {
        return Err(Error::RankDeficient { rank, expected: rows });
    }
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by_key(|&r| pivot_of_row[r]);
    let v = m.permute_rows(&order);
    let cs = ConstraintSet::from_constraint_matrix(&v)?;
    Ok((v, cs))
}
