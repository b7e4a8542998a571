//! Brute-force references: maximum-likelihood decoding over the whole Golay
//! codebook, exact weight enumeration, and exhaustive min-sum path LLRs.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::decoder::{correlation, DecodeResult, LlrVector};
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};
use crate::golay::{self, span_masks};
use crate::ops::OpCounter;

/// Fixture of `(LLRs ; ML codeword)` regression pairs.
pub const ML_REGRESSION_FIXTURE: &str = include_str!("../fixtures/ml_regression.txt");

/// All 4096 Golay codewords as 24-bit masks, indexed by the information mask.
pub fn golay_codebook() -> &'static [u32] {
    static BOOK: OnceLock<Vec<u32>> = OnceLock::new();
    BOOK.get_or_init(|| {
        let spec = golay::golay();
        (0..4096u64)
            .map(|m| {
                let c = spec.encode(&BitVector::from_mask(m, 12)).expect("12 info bits");
                c.to_mask() as u32
            })
            .collect()
    })
}

/// Per-byte lookup of `Σ_{j ∈ mask} y_{8b+j}` for the three bytes of a 24-bit word.
fn byte_tables(y: &[f64], ops: &mut OpCounter) -> [[f64; 256]; 3] {
    let mut t = [[0.0f64; 256]; 3];
    for (b, table) in t.iter_mut().enumerate() {
        for x in 1..256usize {
            let low = x.trailing_zeros() as usize;
            table[x] = table[x & (x - 1)] + y[8 * b + low];
        }
        ops.sum(255);
    }
    t
}

/// Index into the codebook of the maximum-correlation codeword (first on ties)
/// and the sum of LLRs over its support.
fn ml_search(y: &[f64], ops: &mut OpCounter) -> (usize, f64) {
    assert_eq!(y.len(), 24, "the Golay oracle needs 24 LLRs");
    let t = byte_tables(y, ops);
    let book = golay_codebook();
    // Maximizing Σ(−1)^{c_j} y_j is minimizing the LLR mass on the support of c.
    let mut best = (0usize, 0.0f64);
    for (idx, &c) in book.iter().enumerate().skip(1) {
        let c = c as usize;
        let mass = t[0][c & 0xFF] + t[1][(c >> 8) & 0xFF] + t[2][c >> 16];
        ops.sum(2);
        ops.cmp(1);
        if mass < best.1 {
            best = (idx, mass);
        }
    }
    best
}

/// Maximum-likelihood decoding by exhaustive search over the 4096 codewords.
pub fn ml_decode(y: &LlrVector) -> DecodeResult {
    let mut ops = OpCounter::new();
    let (idx, _) = ml_search(y, &mut ops);
    let codeword = BitVector::from_mask(u64::from(golay_codebook()[idx]), 24);
    let score = -crate::decoder::ellipsoidal_weight(codeword.as_slice(), y);
    DecodeResult {
        info: BitVector::from_mask(idx as u64, 12),
        codeword,
        score,
        ops,
        capped: false,
    }
}

/// Largest correlation `Σ(−1)^{c_j} y_j` over the codebook.
pub fn max_correlation(y: &[f64]) -> f64 {
    let (idx, _) = ml_search(y, &mut OpCounter::new());
    let c = BitVector::from_mask(u64::from(golay_codebook()[idx]), 24);
    correlation(c.as_slice(), y)
}

/// Exact weight enumerator of the row space of `g` (at most 20 rows).
pub fn weight_distribution(g: &BitMatrix) -> Result<BTreeMap<usize, u64>> {
    let mut words = span_masks(g)?;
    // A rank-deficient generator enumerates some codewords more than once.
    words.sort_unstable();
    words.dedup();
    let mut dist = BTreeMap::new();
    for w in words {
        *dist.entry(w.count_ones() as usize).or_insert(0) += 1;
    }
    Ok(dist)
}

/// Min-sum path LLR of `u_i` (with `i = prefix.len()`) for a single length-`2^m`
/// polar segment, by exhausting every continuation.
///
/// The score of a full input vector is `−E(u·A_m, y)`; the result is the best
/// score over continuations with `u_i = 0` minus the best with `u_i = 1`.
pub fn brute_force_path_llr(m: u32, y: &[f64], prefix: &[u8]) -> Result<f64> {
    if m > 3 {
        return Err(Error::OrderTooLarge(m));
    }
    let n = 1usize << m;
    if y.len() != n || prefix.len() >= n {
        return Err(Error::Dimension(format!("m = {m} with {} LLRs and prefix {}", y.len(), prefix.len())));
    }
    let i = prefix.len();
    let free = n - i - 1;
    let mut best = [f64::NEG_INFINITY; 2];
    let mut u = vec![0u8; n];
    u[..i].copy_from_slice(prefix);
    for ui in 0..2u8 {
        u[i] = ui;
        for tail in 0..(1usize << free) {
            for k in 0..free {
                u[i + 1 + k] = ((tail >> k) & 1) as u8;
            }
            let c = gf2::apply_mixed_transform(&BitVector::from_bits(&u)?, &[m])?;
            let score = -crate::decoder::ellipsoidal_weight(c.as_slice(), y);
            best[ui as usize] = best[ui as usize].max(score);
        }
    }
    Ok(best[0] - best[1])
}

/// One regression pair from the fixture file.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionCase {
    pub llrs: LlrVector,
    pub codeword: BitVector,
}

/// Parses `v_0 … v_23 ; c_0…c_23` lines; `#` comments and blank lines are skipped.
pub fn parse_regression(text: &str) -> Result<Vec<RegressionCase>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, line)| {
            let (llrs, cw) = line
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("line {}: missing ';'", n + 1)))?;
            let values = llrs
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", n + 1))))
                .collect::<Result<Vec<_>>>()?;
            Ok(RegressionCase { llrs: LlrVector::new(values)?, codeword: BitVector::parse(cw)? })
        })
        .collect()
}
