//! Two-stage block decoding of the chained Golay code with fast Hadamard
//! transforms.
//!
//! Every half-segment the decoder has to complete is a coset of the first-order
//! Reed–Muller code, so the best completion of a half-segment is read off the
//! largest Hadamard coefficient of the (sign-adjusted) LLRs feeding it.
//!
//! Stage 1 enumerates the 32 choices of `(u3, u5, u6, u7, u19)` and scores each
//! by the correlations of the first branches of both segments. Stage 2 takes the
//! stage-1 paths in decreasing score order, completes the second segment (four
//! affine candidates, best first), then the first segment, and stops as soon as
//! an upper bound falls below the best complete score found. Scores in this
//! module drop the path-independent constant: a complete codeword `c` scores
//! `Σ|z_i| − 2·E(c, y)` with `z_i = y_{2i} ⊞ y_{2i+1}`.

use crate::decoder::{ellipsoidal_weight, DecodeResult, LlrVector};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVector};
use crate::golay::{self, CodeSpec};
use crate::ops::{insertion_sort_desc, merge_sort_desc, OpCounter};
use crate::sc::{boxplus, first_branch_bits, g_step, hard_decision};

/// Walsh–Hadamard transform `F[a] = Σ_j (−1)^{popcount(a & j)} z_j`.
pub fn fht(z: &[f64]) -> Result<Vec<f64>> {
    fht_counted(z, &mut OpCounter::new())
}

/// [`fht`] charging `N·log₂N` summations to `ops`.
pub fn fht_counted(z: &[f64], ops: &mut OpCounter) -> Result<Vec<f64>> {
    let n = z.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut f = z.to_vec();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for j in block..block + h {
                let (a, b) = (f[j], f[j + h]);
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
        ops.sum(n as u64);
        h *= 2;
    }
    Ok(f)
}

/// Ellipsoidal weight from a correlation: `E = ½(Σ|z_j| − C)`.
pub fn correlation_to_weight(correlation: f64, z: &[f64]) -> f64 {
    0.5 * (z.iter().map(|v| v.abs()).sum::<f64>() - correlation)
}

/// Word `x_j = s ⊕ ⟨a, j⟩` of length `len`.
fn affine_word(a: usize, s: u8, len: usize) -> Vec<u8> {
    (0..len).map(|j| s ^ ((a & j).count_ones() & 1) as u8).collect()
}

/// Inverse of [`affine_word`].
fn affine_params(x: &[u8]) -> (usize, u8) {
    let s = x[0];
    let mut a = 0;
    let mut k = 0;
    while 1usize << k < x.len() {
        a |= usize::from(x[1 << k] ^ s) << k;
        k += 1;
    }
    debug_assert_eq!(affine_word(a, s, x.len()), x, "not an affine word");
    (a, s)
}

/// `u_i ⊕ Σ_{j ∈ deps(i), j ≠ unknown} u_j`: the value of `u_unknown` that
/// satisfies the constraint on frozen symbol `i`.
fn solve_for(spec: &CodeSpec, i: usize, unknown: usize, u: &[u8]) -> u8 {
    let deps = spec.cs.dependencies(i).expect("frozen symbol");
    debug_assert!(deps.contains(&unknown));
    deps.iter().filter(|&&j| j != unknown).fold(u[i], |acc, &j| acc ^ u[j])
}

/// Correlation of `x` with `z` when `x` is the affine word of the largest
/// coefficient: returns `(|F[a*]|, a*, s*)`, first index on ties.
fn best_affine(f: &[f64], ops: &mut OpCounter) -> (f64, usize, u8) {
    let mut best = 0;
    for a in 1..f.len() {
        ops.cmp(1);
        if f[a].abs() > f[best].abs() {
            best = a;
        }
    }
    ops.cmp(1);
    (f[best].abs(), best, hard_decision(f[best]))
}

/// A stage-1 path: the symbols `u_0^7` and `u_16^19` plus its score
/// `r = C(v, z_0^7) + C(w, z_8^11)`, an upper bound on the score of every
/// completion of the path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stage1Path {
    pub u: [u8; 24],
    pub r: f64,
}

impl Stage1Path {
    fn flipped(&self) -> Self {
        let mut u = self.u;
        u[7] ^= 1;
        u[19] ^= 1;
        Self { u, r: -self.r }
    }
}

/// Shared stage-1 state of one frame.
struct Stage1 {
    /// Sixteen paths with `u7 = u19 = 0`; flipping both negates `r`.
    base: Vec<Stage1Path>,
}

fn stage1(spec: &CodeSpec, y: &[f64], ops: &mut OpCounter) -> Stage1 {
    let z: Vec<f64> = (0..12).map(|i| boxplus(y[2 * i], y[2 * i + 1])).collect();
    ops.cmp(12);
    let f8 = fht_counted(&z[..8], ops).expect("power of two");
    let f4 = fht_counted(&z[8..], ops).expect("power of two");
    let mut base = Vec::with_capacity(16);
    // Enumeration order: u5 slowest, then u3, u6 and u19.
    for bits in 0..8u8 {
        for u19 in 0..2u8 {
            let mut u = [0u8; 24];
            u[3] = (bits >> 1) & 1;
            u[5] = (bits >> 2) & 1;
            u[6] = bits & 1;
            u[17] = spec.cs.frozen_value(17, &u);
            u[18] = spec.cs.frozen_value(18, &u);
            u[19] = u19;
            let (a8, s8) = affine_params(&first_branch_bits(4, &u[..8]));
            let (a4, s4) = affine_params(&first_branch_bits(3, &u[16..20]));
            let c8 = if s8 == 0 { f8[a8] } else { -f8[a8] };
            let c4 = if s4 == 0 { f4[a4] } else { -f4[a4] };
            base.push(Stage1Path { u, r: c8 + c4 });
        }
    }
    ops.sum(16);
    Stage1 { base }
}

/// All 32 stage-1 paths, best first.
pub fn stage1_enumerate(y: &LlrVector) -> Vec<Stage1Path> {
    let spec = golay::golay();
    let mut ops = OpCounter::new();
    let s = stage1(spec, y, &mut ops);
    let mut all: Vec<Stage1Path> = s.base.iter().flat_map(|p| [*p, p.flipped()]).collect();
    insertion_sort_desc(&mut all, &mut ops, |p| p.r);
    all
}

/// A complete input vector and its score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Completion {
    pub u: [u8; 24],
    pub score: f64,
}

/// Outcome of completing one stage-1 path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stage2Outcome {
    /// A completion scoring strictly above the incumbent.
    Improved(Completion),
    /// No completion of the path beats the incumbent.
    Pruned,
}

/// LLRs of the second branch of a half-segment pair:
/// `z̃_β = g(y_{2β}, y_{2β+1}, v_β)`.
fn second_branch_llrs(y: &[f64], v: &[u8], ops: &mut OpCounter) -> Vec<f64> {
    ops.sum(v.len() as u64);
    v.iter().enumerate().map(|(b, &vb)| g_step(y[2 * b], y[2 * b + 1], vb)).collect()
}

/// Second half of a segment: symbols `u_{N/2}^{N−1}` from the second-branch
/// word `x`, which equals `u_{N/2}^{N−1}·A`.
fn second_half_input(x: &[u8]) -> Vec<u8> {
    let mut u = x.to_vec();
    gf2::polar_transform_in_place(&mut u);
    u
}

/// Leader of the coset fixed by the frozen symbols of a second half:
/// `(ℓ_0, …)·A` with the free symbols set to zero.
fn coset_leader(fixed: &[u8]) -> Vec<u8> {
    second_half_input(fixed)
}

fn apply_signs(z: &[f64], leader: &[u8]) -> Vec<f64> {
    z.iter().zip(leader).map(|(&v, &l)| if l == 0 { v } else { -v }).collect()
}

/// Second-branch LLRs of a half-segment with their lazily summed magnitudes.
struct Branch {
    z: Vec<f64>,
    abs_sum: Option<f64>,
}

impl Branch {
    fn new(y: &[f64], v: &[u8], ops: &mut OpCounter) -> Self {
        Self { z: second_branch_llrs(y, v, ops), abs_sum: None }
    }

    fn abs_sum(&mut self, ops: &mut OpCounter) -> f64 {
        *self.abs_sum.get_or_insert_with(|| {
            ops.sum(self.z.len() as u64);
            self.z.iter().map(|x| x.abs()).sum()
        })
    }

    fn hard_decisions(&self, ops: &mut OpCounter) -> Vec<u8> {
        ops.cmp(self.z.len() as u64);
        self.z.iter().map(|&v| hard_decision(v)).collect()
    }
}

/// Values shared by the stage-1 paths of one frame. Paths agreeing on
/// `u_0^7` share the first-segment branch; paths agreeing on `u_16^19` share
/// the second-segment branch, and its transform when `u_20` agrees too.
#[derive(Default)]
pub struct Stage2Cache {
    first: [Option<Branch>; 16],
    second: [Option<Branch>; 16],
    second_fht: [Option<Vec<f64>>; 32],
}

impl Stage2Cache {
    pub fn new() -> Self {
        Self::default()
    }
}

fn first_key(u: &[u8; 24]) -> usize {
    usize::from(u[3]) | usize::from(u[5]) << 1 | usize::from(u[6]) << 2 | usize::from(u[7]) << 3
}

fn second_key(u: &[u8; 24]) -> usize {
    (16..20).fold(0, |k, i| k | usize::from(u[i]) << (i - 16))
}

fn first_branch<'a>(cache: &'a mut Stage2Cache, u: &[u8; 24], y: &[f64], ops: &mut OpCounter) -> &'a mut Branch {
    cache.first[first_key(u)].get_or_insert_with(|| Branch::new(&y[..16], &first_branch_bits(4, &u[..8]), ops))
}

/// Completes `u_8^15` of a path whose symbols `u_8`, `u_9`, `u_10`, `u_12` are
/// fixed, returning the correlation `C` and the filled input.
fn complete_first_segment(first: &Branch, u: &mut [u8; 24], ops: &mut OpCounter) -> f64 {
    let fixed = [u[8], u[9], u[10], 0, u[12], 0, 0, 0];
    let leader = coset_leader(&fixed);
    let f = fht_counted(&apply_signs(&first.z, &leader), ops).expect("power of two");
    let (c, a, s) = best_affine(&f, ops);
    let x: Vec<u8> = affine_word(a, s, 8).iter().zip(&leader).map(|(p, q)| p ^ q).collect();
    let half = second_half_input(&x);
    debug_assert_eq!([half[0], half[1], half[2], half[4]], [u[8], u[9], u[10], u[12]]);
    u[8..16].copy_from_slice(&half);
    c
}

/// Completes a stage-1 path, returning the best completion when it beats
/// `incumbent`.
///
/// With `shortcut`, the hard decisions of both second branches are tried
/// first; when they satisfy every constraint the path's upper bound is met
/// and no transform is needed.
pub fn stage2_extend(
    path: &Stage1Path,
    y: &[f64],
    incumbent: Option<f64>,
    shortcut: bool,
    cache: &mut Stage2Cache,
    ops: &mut OpCounter,
) -> Stage2Outcome {
    let spec = golay::golay();
    let mut u = path.u;
    u[9] = solve_for(spec, 19, 9, &u);
    u[20] = spec.cs.frozen_value(20, &u);
    let key2 = second_key(&u);
    if cache.second[key2].is_none() {
        cache.second[key2] = Some(Branch::new(&y[16..24], &first_branch_bits(3, &u[16..20]), ops));
    }

    if shortcut {
        let x2 = cache.second[key2].as_ref().expect("filled").hard_decisions(ops);
        let h2 = second_half_input(&x2);
        if h2[0] == u[20] {
            let mut t = u;
            t[20..24].copy_from_slice(&h2);
            t[10] = solve_for(spec, 21, 10, &t);
            t[12] = solve_for(spec, 22, 12, &t);
            let x1 = first_branch(cache, &t, y, ops).hard_decisions(ops);
            let h1 = second_half_input(&x1);
            if [h1[0], h1[1], h1[2], h1[4]] == [0, t[9], t[10], t[12]] {
                t[8..16].copy_from_slice(&h1);
                // The completion meets the upper bound r, and r is not below
                // the incumbent or the path would not have been visited.
                return match incumbent {
                    Some(best) if path.r <= best => Stage2Outcome::Pruned,
                    _ => Stage2Outcome::Improved(Completion { u: t, score: path.r }),
                };
            }
        }
    }

    let leader = coset_leader(&[u[20], 0, 0, 0]);
    let branch = cache.second[key2].as_mut().expect("filled");
    let f = match &cache.second_fht[2 * key2 + usize::from(u[20])] {
        Some(f) => f.clone(),
        None => {
            let f = fht_counted(&apply_signs(&branch.z, &leader), ops).expect("power of two");
            cache.second_fht[2 * key2 + usize::from(u[20])] = Some(f.clone());
            f
        }
    };
    let abs2 = branch.abs_sum(ops);
    let base = path.r - abs2;
    ops.sum(1);
    // (upper bound ρ, affine index, constant)
    let mut cands: Vec<(f64, usize, u8)> = (0..4)
        .map(|a| {
            ops.cmp(1);
            (base + f[a].abs(), a, hard_decision(f[a]))
        })
        .collect();
    ops.sum(4);
    insertion_sort_desc(&mut cands, ops, |c| c.0);

    let mut best = incumbent;
    let mut found = None;
    for &(rho, a, s) in &cands {
        if let Some(b) = best {
            ops.cmp(1);
            if rho < b {
                break;
            }
        }
        let mut t = u;
        let x: Vec<u8> = affine_word(a, s, 4).iter().zip(&leader).map(|(p, q)| p ^ q).collect();
        let h2 = second_half_input(&x);
        debug_assert_eq!(h2[0], u[20]);
        t[20..24].copy_from_slice(&h2);
        t[10] = solve_for(spec, 21, 10, &t);
        t[12] = solve_for(spec, 22, 12, &t);
        let fb = first_branch(cache, &t, y, ops);
        let abs1 = fb.abs_sum(ops);
        let c = complete_first_segment(fb, &mut t, ops);
        let score = rho - abs1 + c;
        ops.sum(2);
        let better = match best {
            None => true,
            Some(b) => {
                ops.cmp(1);
                score > b
            }
        };
        if better {
            best = Some(score);
            found = Some(Completion { u: t, score });
        }
    }
    found.map_or(Stage2Outcome::Pruned, Stage2Outcome::Improved)
}

fn finish(spec: &CodeSpec, u: &[u8; 24], y: &[f64], ops: OpCounter) -> DecodeResult {
    debug_assert!(spec.cs.is_satisfied(u));
    let ub = BitVector::from_bits(u).expect("binary");
    let codeword = gf2::apply_mixed_transform(&ub, &spec.segment_orders).expect("length 24");
    DecodeResult {
        score: -ellipsoidal_weight(codeword.as_slice(), y),
        info: spec.info_of_input(u),
        codeword,
        ops,
        capped: false,
    }
}

/// Maximum-likelihood block decoding of the Golay chain.
///
/// Stage-1 paths are visited best first: the sixteen base paths are sorted by
/// `|r|`, each is oriented by one sign test, and the negated twins follow in
/// reverse order. The search stops at the first path whose bound `r` is below
/// the best complete score.
pub fn block_decode(y: &LlrVector, shortcut: bool) -> DecodeResult {
    let spec = golay::golay();
    assert_eq!(y.len(), 24, "the block decoder needs 24 LLRs");
    let mut ops = OpCounter::new();
    let s1 = stage1(spec, y, &mut ops);
    let mut order: Vec<Stage1Path> = s1.base;
    merge_sort_desc(&mut order, &mut ops, |p| p.r.abs());
    let mut oriented: Vec<Stage1Path> = Vec::with_capacity(16);
    let mut best: Option<Completion> = None;
    let mut cache = Stage2Cache::new();

    for k in 0..32 {
        let bound = if k < 16 { order[k].r.abs() } else { -order[31 - k].r.abs() };
        if let Some(b) = &best {
            ops.cmp(1);
            if bound < b.score {
                break;
            }
        }
        let path = if k < 16 {
            ops.cmp(1);
            let p = if order[k].r >= 0.0 { order[k] } else { order[k].flipped() };
            oriented.push(p);
            p
        } else {
            oriented[31 - k].flipped()
        };
        if let Stage2Outcome::Improved(c) = stage2_extend(&path, y, best.map(|b| b.score), shortcut, &mut cache, &mut ops) {
            best = Some(c);
        }
    }
    let best = best.expect("the first stage-1 path always completes");
    finish(spec, &best.u, y, ops)
}

/// Block decoding without pruning: every stage-1 path and every one of the
/// eight second-segment completions is scored, the first segment completed by
/// its largest Hadamard coefficient. Ties keep the first completion found.
pub fn block_decode_exhaustive(y: &LlrVector) -> DecodeResult {
    let spec = golay::golay();
    let mut ops = OpCounter::new();
    let s1 = stage1(spec, y, &mut ops);
    let paths: Vec<Stage1Path> = s1.base.iter().flat_map(|p| [*p, p.flipped()]).collect();
    let mut best: Option<Completion> = None;
    for path in &paths {
        let mut u = path.u;
        u[9] = solve_for(spec, 19, 9, &u);
        u[20] = spec.cs.frozen_value(20, &u);
        let w = first_branch_bits(3, &u[16..20]);
        let z2 = second_branch_llrs(&y[16..24], &w, &mut ops);
        let leader = coset_leader(&[u[20], 0, 0, 0]);
        for a in 0..4 {
            for s in 0..2u8 {
                let mut t = u;
                let x: Vec<u8> = affine_word(a, s, 4).iter().zip(&leader).map(|(p, q)| p ^ q).collect();
                t[20..24].copy_from_slice(&second_half_input(&x));
                t[10] = solve_for(spec, 21, 10, &t);
                t[12] = solve_for(spec, 22, 12, &t);
                let c2: f64 = x.iter().zip(&z2).map(|(&b, &v)| if b == 0 { v } else { -v }).sum();
                let abs2: f64 = z2.iter().map(|v| v.abs()).sum();
                let mut fb = Branch::new(&y[..16], &first_branch_bits(4, &t[..8]), &mut ops);
                let abs1 = fb.abs_sum(&mut ops);
                let c1 = complete_first_segment(&fb, &mut t, &mut ops);
                let score = path.r - abs2 + c2 - abs1 + c1;
                if best.is_none_or(|b| score > b.score) {
                    best = Some(Completion { u: t, score });
                }
            }
        }
    }
    finish(spec, &best.expect("32 paths").u, y, ops)
}
