//! The extended (24,12,8) Golay code via the Turyn construction, and its
//! representation as a chained polar subcode with `A = diag(A_4, A_3)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector, ConstraintSet};

/// Generator matrix as printed alongside the construction (golden fixture).
pub const GOLAY_G_FIXTURE: &str = include_str!("../fixtures/golay_g.txt");
/// Constraint matrix `V` as printed alongside the construction (golden fixture).
pub const GOLAY_V_FIXTURE: &str = include_str!("../fixtures/golay_v.txt");
/// Published decoding schedule (golden fixture).
pub const GOLAY_SCHEDULE_FIXTURE: &str = include_str!("../fixtures/golay_schedule.txt");

pub const GOLAY_N: usize = 24;
pub const GOLAY_K: usize = 12;
/// Segment orders `(m_0, m_1)`: a length-16 and a length-8 polarizing transform.
pub const GOLAY_SEGMENTS: [u32; 2] = [4, 3];

/// An (8,4,4) extended Hamming code. Generator and check matrix coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCode {
    pub generator: BitMatrix,
    pub check: BitMatrix,
}

/// Multiplicative powers `α^0 … α^6` of a root of `x^3 + x + 1`, as 3-bit integers.
fn gf8_powers() -> [usize; 7] {
    let mut p = [0usize; 7];
    let mut x = 1usize;
    for slot in &mut p {
        *slot = x;
        x <<= 1;
        if x & 0b1000 != 0 {
            x ^= 0b1011;
        }
    }
    p
}

/// Column permutation from "power order" `(0, α^0, …, α^6)` to standard bit
/// order `(0, 1, α, α+1, α^2, …)`: entry `b` is the power-order column of the
/// field element whose integer value is `b`.
pub fn standard_bit_order() -> [usize; 8] {
    let mut perm = [0usize; 8];
    for (e, &value) in gf8_powers().iter().enumerate() {
        perm[value] = e + 1;
    }
    perm
}

/// Extended cyclic code of length 8 generated by the degree-3 polynomial with
/// coefficients `g` (constant term first), columns in power order with the
/// overall-parity column first.
fn extended_cyclic(g: [u8; 4]) -> ComponentCode {
    let rows: Vec<BitVector> = (0..4)
        .map(|shift| {
            let mut bits = [0u8; 8];
            for (d, &coeff) in g.iter().enumerate() {
                bits[1 + shift + d] = coeff;
            }
            bits[0] = bits[1..].iter().fold(0, |a, b| a ^ b);
            BitVector::from_bits(&bits).expect("binary")
        })
        .collect();
    let generator = BitMatrix::from_rows(&rows).expect("rectangular");
    ComponentCode { check: generator.clone(), generator }
}

/// The two (8,4,4) components, from `x^3 + x + 1` and `x^3 + x^2 + 1`.
///
/// Columns are in power order `(0, α^0, …, α^6)`; [`turyn_construct`] moves
/// them to standard bit order.
pub fn build_component_codes() -> (ComponentCode, ComponentCode) {
    (extended_cyclic([1, 1, 0, 1]), extended_cyclic([1, 0, 1, 1]))
}

/// All codewords spanned by the rows of `g`, as `u64` masks. At most 20 rows.
pub fn span_masks(g: &BitMatrix) -> Result<Vec<u64>> {
    if g.rows() > 20 {
        return Err(Error::TooManyRows(g.rows()));
    }
    if g.cols() > 64 {
        return Err(Error::Dimension(format!("{} columns exceed a u64 mask", g.cols())));
    }
    let rows: Vec<u64> = (0..g.rows()).map(|i| g.row_mask(i)).collect();
    let mut out = Vec::with_capacity(1 << rows.len());
    let mut word = 0u64;
    out.push(word);
    // Gray-code walk: step t flips generator row trailing_zeros(t).
    for t in 1u64..(1 << rows.len()) {
        word ^= rows[t.trailing_zeros() as usize];
        out.push(word);
    }
    Ok(out)
}

/// Turyn construction `{(u+v, u+w, u+v+w) : v, w ∈ C', u ∈ C''}`.
///
/// Fails if the component codes intersect in anything beyond `{0, 1}`.
pub fn turyn_construct(c_prime: &ComponentCode, c_double_prime: &ComponentCode) -> Result<BitMatrix> {
    let order = standard_bit_order();
    let gp = c_prime.generator.permute_cols(&order);
    let gpp = c_double_prime.generator.permute_cols(&order);

    let a = span_masks(&gp)?;
    let b = span_masks(&gpp)?;
    let common = a.iter().filter(|x| b.contains(x)).count();
    if common != 2 || !a.contains(&0xFF) || !b.contains(&0xFF) {
        return Err(Error::IntersectionViolated);
    }

    let mut g = BitMatrix::zeros(12, 24);
    for i in 0..4 {
        for j in 0..8 {
            let x = gp.get(i, j);
            g.set(i, j, x);
            g.set(i, 16 + j, x);
            g.set(4 + i, 8 + j, x);
            g.set(4 + i, 16 + j, x);
            let y = gpp.get(i, j);
            g.set(8 + i, j, y);
            g.set(8 + i, 8 + j, y);
            g.set(8 + i, 16 + j, y);
        }
    }
    Ok(g)
}

/// The Golay generator matrix (equal to its check matrix) built by the Turyn construction.
pub fn golay_generator() -> BitMatrix {
    let (cp, cpp) = build_component_codes();
    turyn_construct(&cp, &cpp).expect("component codes satisfy the intersection property")
}

/// Parses a comma-separated schedule line.
pub fn parse_schedule(text: &str) -> Result<Vec<usize>> {
    text.trim()
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("schedule entry {t:?}: {e}"))))
        .collect()
}

pub fn format_schedule(schedule: &[usize]) -> String {
    schedule.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Segment index and local phase of global symbol `i`.
pub fn locate(segment_orders: &[u32], i: usize) -> (usize, usize) {
    let mut offset = 0;
    for (s, &m) in segment_orders.iter().enumerate() {
        let len = 1usize << m;
        if i < offset + len {
            return (s, i - offset);
        }
        offset += len;
    }
    panic!("symbol {i} outside the chained transform");
}

/// Greedy schedule: frozen symbols as early as their dependencies allow.
///
/// Within a segment symbols are taken in successive-cancellation order, so the
/// candidates at each step are the next pending symbol of every segment. A
/// frozen candidate whose dependencies are all scheduled is taken first,
/// preferring dynamically frozen symbols over those frozen to zero and then
/// the smallest index. Otherwise the smallest-index information candidate is
/// taken.
pub fn greedy_schedule(cs: &ConstraintSet, segment_orders: &[u32]) -> Vec<usize> {
    let n = gf2::chained_length(segment_orders);
    let mut starts = Vec::with_capacity(segment_orders.len());
    let mut offset = 0;
    for &m in segment_orders {
        starts.push((offset, offset + (1usize << m)));
        offset += 1usize << m;
    }
    let mut next: Vec<usize> = starts.iter().map(|&(s, _)| s).collect();
    let mut done = vec![false; n];
    let mut schedule = Vec::with_capacity(n);

    while schedule.len() < n {
        let heads = next.iter().zip(&starts).filter(|(&h, &(_, end))| h < end).map(|(&h, _)| h);
        let ready_frozen = heads
            .clone()
            .filter(|&h| cs.dependencies(h).is_some_and(|d| d.iter().all(|&j| done[j])))
            .min_by_key(|&h| (cs.dependencies(h).is_some_and(|d| d.is_empty()), h));
        // The smallest pending head has all of its (smaller) dependencies
        // scheduled, so some candidate is always available.
        let i = ready_frozen
            .or_else(|| heads.filter(|&h| !cs.is_frozen(h)).min())
            .expect("a frozen head with pending dependencies implies a smaller pending head");
        done[i] = true;
        schedule.push(i);
        next[locate(segment_orders, i).0] += 1;
    }
    schedule
}

/// Checks that `schedule` is a permutation, keeps each segment in
/// successive-cancellation order, and places every frozen symbol after its
/// dependencies. Returns a description of the first violation.
pub fn validate_schedule(cs: &ConstraintSet, segment_orders: &[u32], schedule: &[usize]) -> std::result::Result<(), String> {
    let n = gf2::chained_length(segment_orders);
    if schedule.len() != n {
        return Err(format!("schedule has {} entries, expected {n}", schedule.len()));
    }
    let mut pos = vec![usize::MAX; n];
    for (t, &i) in schedule.iter().enumerate() {
        if i >= n || pos[i] != usize::MAX {
            return Err(format!("entry {i} at step {t} is out of range or repeated"));
        }
        pos[i] = t;
    }
    for i in 1..n {
        if locate(segment_orders, i).0 == locate(segment_orders, i - 1).0 && pos[i - 1] > pos[i] {
            return Err(format!("symbol {i} scheduled before {} of the same segment", i - 1));
        }
    }
    for &i in cs.frozen() {
        for &j in cs.dependencies(i).unwrap_or(&[]) {
            if pos[j] > pos[i] {
                return Err(format!("frozen symbol {i} scheduled before its dependency {j}"));
            }
        }
    }
    Ok(())
}

/// A chained polar subcode: segment orders, constraint matrix, decoding schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    pub segment_orders: Vec<u32>,
    pub check: BitMatrix,
    pub v: BitMatrix,
    pub cs: ConstraintSet,
    pub schedule: Vec<usize>,
    pub info_positions: Vec<usize>,
}

impl CodeSpec {
    /// Builds the representation of the code with check matrix `h`, using the greedy schedule.
    pub fn from_check_matrix(h: &BitMatrix, segment_orders: &[u32]) -> Result<Self> {
        let (v, cs) = gf2::normalize_constraints(h, segment_orders)?;
        let schedule = greedy_schedule(&cs, segment_orders);
        let info_positions = cs.info_positions();
        Ok(Self {
            n: h.cols(),
            k: info_positions.len(),
            segment_orders: segment_orders.to_vec(),
            check: h.clone(),
            v,
            cs,
            schedule,
            info_positions,
        })
    }

    /// Start offset of each segment.
    pub fn segment_offsets(&self) -> Vec<usize> {
        self.segment_orders
            .iter()
            .scan(0usize, |acc, &m| {
                let o = *acc;
                *acc += 1usize << m;
                Some(o)
            })
            .collect()
    }

    /// Fills in the frozen symbols of `u` given its information symbols.
    pub fn complete_input(&self, u: &mut [u8]) {
        for &i in &self.schedule {
            if self.cs.is_frozen(i) {
                u[i] = self.cs.frozen_value(i, u);
            }
        }
    }

    /// Maps `k` information bits to a codeword.
    pub fn encode(&self, info: &BitVector) -> Result<BitVector> {
        if info.len() != self.k {
            return Err(Error::Dimension(format!("{} information bits, expected {}", info.len(), self.k)));
        }
        let mut u = vec![0u8; self.n];
        for (&p, &b) in self.info_positions.iter().zip(info.as_slice()) {
            u[p] = b;
        }
        self.complete_input(&mut u);
        gf2::apply_mixed_transform(&BitVector::from_bits(&u)?, &self.segment_orders)
    }

    /// Input vector `u = c·A` of a word (the transform is an involution).
    pub fn input_of(&self, c: &BitVector) -> Result<BitVector> {
        gf2::apply_mixed_transform(c, &self.segment_orders)
    }

    /// Information bits carried by an input vector.
    pub fn info_of_input(&self, u: &[u8]) -> BitVector {
        BitVector::from_bits(&self.info_positions.iter().map(|&p| u[p]).collect::<Vec<_>>()).expect("binary")
    }
}

/// The extended Golay code as a chained polar subcode with the greedy schedule.
pub fn golay_spec() -> CodeSpec {
    CodeSpec::from_check_matrix(&golay_generator(), &GOLAY_SEGMENTS).expect("Golay check matrix has full rank")
}

/// Shared, lazily built Golay [`CodeSpec`].
pub fn golay() -> &'static CodeSpec {
    static SPEC: OnceLock<CodeSpec> = OnceLock::new();
    SPEC.get_or_init(golay_spec)
}
