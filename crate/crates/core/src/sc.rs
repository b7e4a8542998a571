//! Chained successive-cancellation decoding in the min-sum LLR domain.
//!
//! Every segment of the chained transform keeps its own layered LLR and
//! partial-sum arrays. A global schedule interleaves the segments, and all
//! paths are ranked by the score `R`, the running sum of `τ` penalties, which
//! for a complete path equals minus the correlation discrepancy of its codeword.

use std::cmp::Ordering;

use crate::decoder::{DecodeResult, LlrVector};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVector};
use crate::golay::{self, CodeSpec};
use crate::ops::OpCounter;

/// Path cap of the sequential decoder: the size of the Golay codebook.
pub const DEFAULT_MAX_PATHS: usize = 4096;

/// Largest supported segment order.
pub const MAX_SEGMENT_ORDER: u32 = 10;

/// Hard decision with `sgn(0) = +1`.
#[inline]
pub fn hard_decision(x: f64) -> u8 {
    u8::from(x < 0.0)
}

/// Min-sum check-node combine `sgn(a)·sgn(b)·min(|a|, |b|)`.
#[inline]
pub fn boxplus(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if hard_decision(a) ^ hard_decision(b) == 1 {
        -m
    } else {
        m
    }
}

/// Variable-node update `(−1)^u · a + b`.
#[inline]
pub fn g_step(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        a + b
    } else {
        b - a
    }
}

/// Score penalty for deciding `u` against LLR `s`: zero when the sign of `s`
/// agrees with `(−1)^u`, otherwise `−|s|`.
#[inline]
pub fn tau(s: f64, u: u8) -> f64 {
    if hard_decision(s) == u {
        0.0
    } else {
        -s.abs()
    }
}

#[derive(Clone, Debug)]
struct SegmentLayout {
    order: u32,
    channel: usize,
    llr: usize,
    bits: usize,
}

/// Offset of layer `lambda` inside a segment's layered array.
#[inline]
fn layer_offset(m: u32, lambda: u32) -> usize {
    (1usize << (m + 1)) - (1usize << (m + 1 - lambda))
}

/// Buffer offsets for every segment of a chained transform.
#[derive(Clone, Debug)]
pub struct ChainLayout {
    segments: Vec<SegmentLayout>,
    llr_len: usize,
    bit_len: usize,
    n: usize,
}

impl ChainLayout {
    pub fn new(segment_orders: &[u32]) -> Result<Self> {
        let mut segments = Vec::with_capacity(segment_orders.len());
        let (mut channel, mut llr, mut bits) = (0, 0, 0);
        for &order in segment_orders {
            if order > MAX_SEGMENT_ORDER {
                return Err(Error::OrderTooLarge(order));
            }
            segments.push(SegmentLayout { order, channel, llr, bits });
            let layered = (1usize << (order + 1)) - 1;
            channel += 1usize << order;
            llr += layered;
            bits += 2 * layered;
        }
        Ok(Self { segments, llr_len: llr, bit_len: bits, n: channel })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Segment index and local phase of global symbol `i`.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        let s = self
            .segments
            .iter()
            .rposition(|seg| seg.channel <= i)
            .expect("symbol index inside the chain");
        (s, i - self.segments[s].channel)
    }
}

/// One decoding path: the partial input vector plus per-segment SC state.
#[derive(Clone, Debug)]
pub struct DecoderPath {
    /// Input symbols decided so far (undecided entries are 0).
    pub u: Vec<u8>,
    llr: Vec<f64>,
    bits: Vec<u8>,
    next_phase: Vec<usize>,
    /// Path score `R`, the sum of `τ` penalties so far.
    pub score: f64,
    /// Number of symbols decided.
    pub depth: usize,
    last_bit: u8,
}

impl DecoderPath {
    pub fn new(layout: &ChainLayout, y: &[f64]) -> Result<Self> {
        if y.len() != layout.n {
            return Err(Error::Dimension(format!("{} LLRs for a chain of length {}", y.len(), layout.n)));
        }
        let mut llr = vec![0.0; layout.llr_len];
        for seg in &layout.segments {
            let len = 1usize << seg.order;
            llr[seg.llr..seg.llr + len].copy_from_slice(&y[seg.channel..seg.channel + len]);
        }
        Ok(Self {
            u: vec![0; layout.n],
            llr,
            bits: vec![0; layout.bit_len],
            next_phase: vec![0; layout.segments.len()],
            score: 0.0,
            depth: 0,
            last_bit: 0,
        })
    }

    /// LLR `S_m^{(phase)}` of the next symbol of segment `segment`.
    ///
    /// `phase` must be the segment's next undecided local index.
    pub fn segment_llr(&mut self, layout: &ChainLayout, segment: usize, phase: usize, ops: &mut OpCounter) -> Result<f64> {
        let seg = &layout.segments[segment];
        let expected = self.next_phase[segment];
        if phase != expected || phase >= 1usize << seg.order {
            return Err(Error::PhaseOrder { requested: phase, expected });
        }
        let m = seg.order;
        let llr_len = (1usize << (m + 1)) - 1;
        let llr = &mut self.llr[seg.llr..seg.llr + llr_len];
        let bits = &self.bits[seg.bits..seg.bits + 2 * llr_len];
        calc_llr(llr, bits, m, m, phase, ops);
        Ok(llr[layer_offset(m, m)])
    }

    /// Fixes global symbol `symbol` to `bit`, charging `τ(llr, bit)` to the score.
    pub fn decide(&mut self, layout: &ChainLayout, symbol: usize, bit: u8, llr: f64, ops: &mut OpCounter) {
        let (segment, phase) = layout.locate(symbol);
        debug_assert_eq!(phase, self.next_phase[segment]);
        ops.cmp(1);
        ops.sum(1);
        self.score += tau(llr, bit);
        let seg = &layout.segments[segment];
        let m = seg.order;
        let llr_len = (1usize << (m + 1)) - 1;
        let bits = &mut self.bits[seg.bits..seg.bits + 2 * llr_len];
        bits[2 * layer_offset(m, m) + (phase & 1)] = bit;
        if phase & 1 == 1 {
            update_bits(bits, m, m, phase);
        }
        self.next_phase[segment] += 1;
        self.u[symbol] = bit;
        self.depth += 1;
        self.last_bit = bit;
    }
}

fn calc_llr(llr: &mut [f64], bits: &[u8], m: u32, lambda: u32, phi: usize, ops: &mut OpCounter) {
    if lambda == 0 {
        return;
    }
    if phi & 1 == 0 {
        calc_llr(llr, bits, m, lambda - 1, phi >> 1, ops);
    }
    let cur = layer_offset(m, lambda);
    let prev = layer_offset(m, lambda - 1);
    for beta in 0..(1usize << (m - lambda)) {
        let a = llr[prev + 2 * beta];
        let b = llr[prev + 2 * beta + 1];
        llr[cur + beta] = if phi & 1 == 0 {
            ops.cmp(1);
            boxplus(a, b)
        } else {
            ops.sum(1);
            g_step(a, b, bits[2 * (cur + beta)])
        };
    }
}

fn update_bits(bits: &mut [u8], m: u32, lambda: u32, phi: usize) {
    let psi = phi >> 1;
    let cur = layer_offset(m, lambda);
    let prev = layer_offset(m, lambda - 1);
    for beta in 0..(1usize << (m - lambda)) {
        let even = bits[2 * (cur + beta)];
        let odd = bits[2 * (cur + beta) + 1];
        bits[2 * (prev + 2 * beta) + (psi & 1)] = even ^ odd;
        bits[2 * (prev + 2 * beta + 1) + (psi & 1)] = odd;
    }
    if psi & 1 == 1 {
        update_bits(bits, m, lambda - 1, psi);
    }
}

/// Partial sums `v = u_0^{N/2−1} · A_{m−1}` feeding the `g` steps of the first
/// layer, obtained by replaying the first half of a segment's decisions
/// through the layered partial-sum update.
pub fn first_branch_bits(m: u32, prefix: &[u8]) -> Vec<u8> {
    assert!(m >= 1 && prefix.len() == 1usize << (m - 1), "prefix must be the first half of the segment");
    let llr_len = (1usize << (m + 1)) - 1;
    let mut bits = vec![0u8; 2 * llr_len];
    for (phase, &b) in prefix.iter().enumerate() {
        bits[2 * layer_offset(m, m) + (phase & 1)] = b;
        if phase & 1 == 1 {
            update_bits(&mut bits, m, m, phase);
        }
    }
    let first = layer_offset(m, 1);
    (0..prefix.len()).map(|beta| bits[2 * (first + beta)]).collect()
}

fn finish(spec: &CodeSpec, path: &DecoderPath, ops: OpCounter, capped: bool) -> DecodeResult {
    let u = BitVector::from_bits(&path.u).expect("binary");
    DecodeResult {
        codeword: gf2::apply_mixed_transform(&u, &spec.segment_orders).expect("length matches"),
        info: spec.info_of_input(&path.u),
        score: path.score,
        ops,
        capped,
    }
}

/// Ranking used for list pruning and the priority queue: higher score first,
/// then the path whose latest symbol is 0.
fn rank(a: &DecoderPath, b: &DecoderPath) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then(a.last_bit.cmp(&b.last_bit))
}

/// Extends `path` by the symbol at schedule position `path.depth`, returning
/// the surviving children (one for frozen symbols, two otherwise).
fn extend(spec: &CodeSpec, layout: &ChainLayout, mut path: DecoderPath, ops: &mut OpCounter) -> (DecoderPath, Option<DecoderPath>) {
    let i = spec.schedule[path.depth];
    let (segment, phase) = layout.locate(i);
    let s = path
        .segment_llr(layout, segment, phase, ops)
        .expect("the schedule keeps segment phases in order");
    if spec.cs.is_frozen(i) {
        let bit = spec.cs.frozen_value(i, &path.u);
        path.decide(layout, i, bit, s, ops);
        (path, None)
    } else {
        let mut one = path.clone();
        path.decide(layout, i, 0, s, ops);
        one.decide(layout, i, 1, s, ops);
        (path, Some(one))
    }
}

/// List successive-cancellation decoding over the schedule of `spec`.
///
/// Returns the completed paths, best score first. Every result carries the
/// operation count of the whole decode.
pub fn list_decode(y: &LlrVector, spec: &CodeSpec, list_size: usize) -> Vec<DecodeResult> {
    assert!(list_size >= 1, "list size must be at least 1");
    let layout = ChainLayout::new(&spec.segment_orders).expect("supported segment orders");
    let mut ops = OpCounter::new();
    let mut paths = vec![DecoderPath::new(&layout, y).expect("LLR length matches the code")];
    for _ in 0..spec.n {
        let mut next = Vec::with_capacity(2 * paths.len());
        for path in paths {
            let (a, b) = extend(spec, &layout, path, &mut ops);
            next.push(a);
            next.extend(b);
        }
        if next.len() > list_size {
            next.sort_by(|a, b| {
                ops.cmp(1);
                rank(a, b)
            });
            next.truncate(list_size);
        }
        paths = next;
    }
    paths.sort_by(rank);
    paths.iter().map(|p| finish(spec, p, ops, false)).collect()
}

/// Binary max-heap under a caller-supplied ordering, charging every
/// comparison to an [`OpCounter`].
struct CountingHeap<T> {
    items: Vec<T>,
}

impl<T> CountingHeap<T> {
    fn new() -> Self {
        Self { items: Vec::new() }
    }

    fn push(&mut self, item: T, ops: &mut OpCounter, higher: impl Fn(&T, &T) -> bool) {
        self.items.push(item);
        let mut i = self.items.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            ops.cmp(1);
            if higher(&self.items[i], &self.items[parent]) {
                self.items.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn pop(&mut self, ops: &mut OpCounter, higher: impl Fn(&T, &T) -> bool) -> Option<T> {
        if self.items.is_empty() {
            return None;
        }
        let top = self.items.swap_remove(0);
        let n = self.items.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < n {
                ops.cmp(1);
                if higher(&self.items[l], &self.items[best]) {
                    best = l;
                }
            }
            if r < n {
                ops.cmp(1);
                if higher(&self.items[r], &self.items[best]) {
                    best = r;
                }
            }
            if best == i {
                break;
            }
            self.items.swap(i, best);
            i = best;
        }
        Some(top)
    }
}

/// Best-first (stack) decoding over the same path tree as [`list_decode`].
///
/// The path with the highest score is extended first; at most `list_size`
/// paths are extended at each schedule position, and the first complete path
/// to reach the top of the queue is returned. After `max_paths` extensions the
/// deepest path seen is completed greedily and the result is flagged `capped`.
pub fn sequential_decode(y: &LlrVector, spec: &CodeSpec, list_size: usize, max_paths: usize) -> DecodeResult {
    assert!(list_size >= 1, "list size must be at least 1");
    let layout = ChainLayout::new(&spec.segment_orders).expect("supported segment orders");
    let mut ops = OpCounter::new();
    // Entries carry an insertion counter so equal-rank paths leave in FIFO order.
    let higher = |a: &(DecoderPath, u64), b: &(DecoderPath, u64)| rank(&a.0, &b.0).then(a.1.cmp(&b.1)) == Ordering::Less;
    let mut heap = CountingHeap::new();
    let mut seq = 0u64;
    heap.push((DecoderPath::new(&layout, y).expect("LLR length matches the code"), seq), &mut ops, higher);
    let mut extended = vec![0usize; spec.n];
    let mut expansions = 0usize;
    let mut deepest: Option<DecoderPath> = None;

    while let Some((path, _)) = heap.pop(&mut ops, higher) {
        if path.depth == spec.n {
            return finish(spec, &path, ops, false);
        }
        if extended[path.depth] >= list_size {
            continue;
        }
        if expansions >= max_paths {
            let start = match deepest {
                Some(d) if d.depth >= path.depth => d,
                _ => path,
            };
            return complete_greedily(spec, &layout, start, ops);
        }
        extended[path.depth] += 1;
        expansions += 1;
        if deepest.as_ref().is_none_or(|d| path.depth > d.depth) {
            deepest = Some(path.clone());
        }
        let (a, b) = extend(spec, &layout, path, &mut ops);
        for child in std::iter::once(a).chain(b) {
            seq += 1;
            heap.push((child, seq), &mut ops, higher);
        }
    }
    // Every depth reached its extension budget without completing a path;
    // only possible when `max_paths` leaves the queue exhausted.
    let start = deepest.unwrap_or_else(|| DecoderPath::new(&layout, y).expect("LLR length matches"));
    complete_greedily(spec, &layout, start, ops)
}

fn complete_greedily(spec: &CodeSpec, layout: &ChainLayout, mut path: DecoderPath, mut ops: OpCounter) -> DecodeResult {
    while path.depth < spec.n {
        let i = spec.schedule[path.depth];
        let (segment, phase) = layout.locate(i);
        let s = path.segment_llr(layout, segment, phase, &mut ops).expect("phases in order");
        let bit = if spec.cs.is_frozen(i) {
            spec.cs.frozen_value(i, &path.u)
        } else {
            ops.cmp(1);
            hard_decision(s)
        };
        path.decide(layout, i, bit, s, &mut ops);
    }
    finish(spec, &path, ops, true)
}

/// Score `R(u | y)` of a full input vector, ignoring freezing constraints.
pub fn path_score(u: &[u8], y: &[f64], segment_orders: &[u32]) -> Result<f64> {
    let layout = ChainLayout::new(segment_orders)?;
    if u.len() != layout.n {
        return Err(Error::Dimension(format!("input of length {} for chain of length {}", u.len(), layout.n)));
    }
    let mut path = DecoderPath::new(&layout, y)?;
    let mut ops = OpCounter::new();
    for (i, &bit) in u.iter().enumerate() {
        let (segment, phase) = layout.locate(i);
        let s = path.segment_llr(&layout, segment, phase, &mut ops)?;
        path.decide(&layout, i, bit, s, &mut ops);
    }
    Ok(path.score)
}

/// Both sides of the score identity `R(u | y) = −E(u·A, y)` for the Golay chain.
pub fn path_score_identity_check(u: &BitVector, y: &LlrVector) -> Result<(f64, f64)> {
    let r = path_score(u.as_slice(), y, &golay::GOLAY_SEGMENTS)?;
    let c = gf2::apply_mixed_transform(u, &golay::GOLAY_SEGMENTS)?;
    Ok((r, crate::decoder::ellipsoidal_weight(c.as_slice(), y)))
}
