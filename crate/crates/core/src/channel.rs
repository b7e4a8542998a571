//! BPSK over AWGN and the Monte-Carlo frame-error-rate harness.
//!
//! Every frame draws its information bits and noise from its own ChaCha stream
//! keyed by `(seed, SNR point, frame index)`, so results do not depend on how
//! frames are spread over worker threads.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decoder::{correlation, Algorithm, LlrVector};
use crate::gf2::BitVector;
use crate::golay::CodeSpec;
use crate::oracle;

/// Header of the CSV written by [`write_csv`].
pub const CSV_HEADER: &str = "eb_n0_db,frames,frame_errors,fer,avg_sums,avg_cmps,max_ops,ml_agreement";

/// Frames handed to the workers between two stop-rule checks.
pub const BATCH_FRAMES: u64 = 4096;

/// Relative tolerance when comparing a decoded correlation with the oracle's.
pub const ML_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub eb_n0_db: f64,
    pub code_rate: f64,
    /// When false the channel is noiseless; LLRs still carry the `2/σ²` scale.
    pub noise: bool,
}

impl ChannelConfig {
    pub fn new(eb_n0_db: f64, code_rate: f64) -> Self {
        Self { eb_n0_db, code_rate, noise: true }
    }

    /// Noise variance `σ² = 1/(2·R·10^{Eb/N0 / 10})` for unit symbol energy.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.code_rate * 10f64.powf(self.eb_n0_db / 10.0))
    }
}

/// Maps bit 0 to +1 and bit 1 to −1, adds Gaussian noise of variance `σ²`,
/// and returns the LLRs `2y/σ²`.
pub fn modulate_and_transmit<R: Rng + ?Sized>(c: &BitVector, cfg: &ChannelConfig, rng: &mut R) -> LlrVector {
    let var = cfg.noise_variance();
    let sigma = var.sqrt();
    let llrs = c
        .as_slice()
        .iter()
        .map(|&b| {
            let x = if b == 0 { 1.0 } else { -1.0 };
            let n: f64 = if cfg.noise { StandardNormal.sample(rng) } else { 0.0 };
            2.0 * (x + sigma * n) / var
        })
        .collect();
    LlrVector::new(llrs).expect("finite channel output")
}

/// Random stream for frame `frame` of SNR point `point`.
pub fn frame_rng(seed: u64, point: u64, frame: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(frame);
    rng
}

/// When to stop simulating an SNR point: after at least `min_frames` frames
/// and `min_errors` frame errors, or at `max_frames`, whichever comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub min_frames: u64,
    pub min_errors: u64,
    pub max_frames: Option<u64>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_frames: 100_000, min_errors: 200, max_frames: None }
    }
}

impl StopRule {
    /// Exactly `frames` frames.
    pub fn fixed(frames: u64) -> Self {
        Self { min_frames: frames, min_errors: 0, max_frames: Some(frames) }
    }

    fn done(&self, frames: u64, errors: u64) -> bool {
        self.max_frames.is_some_and(|m| frames >= m) || (frames >= self.min_frames && errors >= self.min_errors)
    }

    fn next_batch(&self, frames: u64) -> u64 {
        let mut n = BATCH_FRAMES;
        if frames < self.min_frames {
            n = n.min(self.min_frames - frames);
        }
        if let Some(m) = self.max_frames {
            n = n.min(m - frames);
        }
        n
    }
}

/// How frames are distributed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Frame-parallel on the rayon pool; serial when built without `parallel`.
    #[default]
    Parallel,
}

/// Per-frame measurements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    frames: u64,
    errors: u64,
    sums: u64,
    cmps: u64,
    max_ops: u64,
    ml_agree: u64,
}

impl Tally {
    fn merge(mut self, o: Self) -> Self {
        self.frames += o.frames;
        self.errors += o.errors;
        self.sums += o.sums;
        self.cmps += o.cmps;
        self.max_ops = self.max_ops.max(o.max_ops);
        self.ml_agree += o.ml_agree;
        self
    }
}

/// Outcome of one simulated frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameOutcome {
    pub sent: BitVector,
    pub llrs: LlrVector,
    pub decoded: BitVector,
    pub summations: u64,
    pub comparisons: u64,
    /// Decoded correlation equals the best correlation over the codebook.
    pub ml_agreement: bool,
}

/// Transmits and decodes frame `frame` of SNR point `point`.
pub fn simulate_frame(spec: &CodeSpec, algo: Algorithm, cfg: &ChannelConfig, seed: u64, point: u64, frame: u64) -> FrameOutcome {
    let mut rng = frame_rng(seed, point, frame);
    let mask = rng.random::<u64>() & ((1u64 << spec.k) - 1);
    let sent = spec.encode(&BitVector::from_mask(mask, spec.k)).expect("k information bits");
    let llrs = modulate_and_transmit(&sent, cfg, &mut rng);
    let r = algo.decode(spec, &llrs);
    FrameOutcome {
        ml_agreement: agrees_with_ml(r.codeword.as_slice(), &llrs),
        sent,
        decoded: r.codeword,
        summations: r.ops.summations,
        comparisons: r.ops.comparisons,
        llrs,
    }
}

/// True when `c` reaches the oracle's maximum correlation (ties count as agreement).
pub fn agrees_with_ml(c: &[u8], y: &[f64]) -> bool {
    let best = oracle::max_correlation(y);
    let scale = y.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    correlation(c, y) >= best - ML_TOLERANCE * scale
}

fn tally_frame(spec: &CodeSpec, algo: Algorithm, cfg: &ChannelConfig, seed: u64, point: u64, frame: u64) -> Tally {
    let o = simulate_frame(spec, algo, cfg, seed, point, frame);
    Tally {
        frames: 1,
        errors: u64::from(o.decoded != o.sent),
        sums: o.summations,
        cmps: o.comparisons,
        max_ops: o.summations + o.comparisons,
        ml_agree: u64::from(o.ml_agreement),
    }
}

fn run_batch(
    spec: &CodeSpec,
    algo: Algorithm,
    cfg: &ChannelConfig,
    seed: u64,
    point: u64,
    frames: std::ops::Range<u64>,
    exec: Execution,
) -> Tally {
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            frames
                .into_par_iter()
                .map(|f| tally_frame(spec, algo, cfg, seed, point, f))
                .reduce(Tally::default, Tally::merge)
        }
        _ => frames
            .map(|f| tally_frame(spec, algo, cfg, seed, point, f))
            .fold(Tally::default(), Tally::merge),
    }
}

/// Measurements at one SNR point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimRecord {
    pub eb_n0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub avg_summations: f64,
    pub avg_comparisons: f64,
    pub max_total_ops: u64,
    pub ml_agreement_rate: f64,
}

impl SimRecord {
    fn from_tally(eb_n0_db: f64, t: Tally) -> Self {
        let n = t.frames.max(1) as f64;
        Self {
            eb_n0_db,
            frames: t.frames,
            frame_errors: t.errors,
            fer: t.errors as f64 / n,
            avg_summations: t.sums as f64 / n,
            avg_comparisons: t.cmps as f64 / n,
            max_total_ops: t.max_ops,
            ml_agreement_rate: t.ml_agree as f64 / n,
        }
    }

    pub fn avg_total_ops(&self) -> f64 {
        self.avg_summations + self.avg_comparisons
    }

    /// One CSV data row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{:.2},{},{},{:.6e},{:.3},{:.3},{},{:.6}",
            self.eb_n0_db,
            self.frames,
            self.frame_errors,
            self.fer,
            self.avg_summations,
            self.avg_comparisons,
            self.max_total_ops,
            self.ml_agreement_rate
        )
    }
}

/// Simulation parameters shared by all SNR points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    pub stop: StopRule,
    pub seed: u64,
    pub execution: Execution,
}

/// Runs the Monte-Carlo experiment at every SNR in `snrs_db`.
pub fn run_fer(spec: &CodeSpec, snrs_db: &[f64], cfg: &SimConfig) -> Vec<SimRecord> {
    let rate = spec.k as f64 / spec.n as f64;
    snrs_db
        .iter()
        .enumerate()
        .map(|(point, &snr)| {
            let ch = ChannelConfig::new(snr, rate);
            let mut total = Tally::default();
            while !cfg.stop.done(total.frames, total.errors) {
                let n = cfg.stop.next_batch(total.frames);
                let range = total.frames..total.frames + n;
                total = total.merge(run_batch(spec, cfg.algorithm, &ch, cfg.seed, point as u64, range, cfg.execution));
            }
            SimRecord::from_tally(snr, total)
        })
        .collect()
}

/// Writes the header and one row per record.
pub fn write_csv<W: Write>(mut out: W, records: &[SimRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Parses an `a:step:b` SNR range (inclusive, tolerant of rounding).
pub fn parse_snr_range(text: &str) -> crate::Result<Vec<f64>> {
    let bad = || crate::Error::InvalidArgument(format!("SNR range {text:?} is not a:step:b"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<crate::Result<_>>()?;
    let (a, step, b) = match parts[..] {
        [a] => (a, 1.0, a),
        [a, step, b] => (a, step, b),
        _ => return Err(bad()),
    };
    if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b < a {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + step * i as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golay::golay;

    #[test]
    fn noiseless_llrs_follow_the_codeword() {
        let mut cfg = ChannelConfig::new(2.0, 0.5);
        cfg.noise = false;
        let mut rng = frame_rng(1, 0, 0);
        let zero = modulate_and_transmit(&BitVector::zeros(24), &cfg, &mut rng);
        let expected = 2.0 / cfg.noise_variance();
        assert!(zero.iter().all(|&v| v == expected));
        let c = BitVector::parse("110100100001111000101101").unwrap();
        let y = modulate_and_transmit(&c, &cfg, &mut rng);
        for (b, v) in c.as_slice().iter().zip(y.iter()) {
            assert_eq!(*b == 1, *v < 0.0);
        }
    }

    #[test]
    fn noise_variance_formula() {
        let cfg = ChannelConfig::new(0.0, 0.5);
        assert!((cfg.noise_variance() - 1.0).abs() < 1e-15);
        let cfg = ChannelConfig::new(10.0, 0.5);
        assert!((cfg.noise_variance() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn empirical_llr_mean() {
        let cfg = ChannelConfig::new(2.0, 0.5);
        let mut rng = frame_rng(9, 0, 0);
        let mut sum = 0.0;
        let mut n = 0usize;
        while n < 100_000 {
            let y = modulate_and_transmit(&BitVector::zeros(24), &cfg, &mut rng);
            sum += y.iter().sum::<f64>();
            n += 24;
        }
        let expected = 2.0 / cfg.noise_variance();
        assert!((sum / n as f64 - expected).abs() < 0.02 * expected);
    }

    #[test]
    fn snr_ranges() {
        assert_eq!(parse_snr_range("1:1:4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_snr_range("2:1:2").unwrap(), vec![2.0]);
        assert_eq!(parse_snr_range("0:0.5:1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_snr_range("1:0:4").is_err());
        assert!(parse_snr_range("4:1:1").is_err());
        assert!(parse_snr_range("x").is_err());
    }

    #[test]
    fn ml_simulation_agrees_with_itself() {
        let cfg = SimConfig { algorithm: Algorithm::Ml, stop: StopRule::fixed(300), seed: 3, execution: Execution::Serial };
        let r = run_fer(golay(), &[1.0], &cfg);
        assert_eq!(r[0].frames, 300);
        assert_eq!(r[0].ml_agreement_rate, 1.0);
    }

    #[test]
    fn serial_and_parallel_runs_match() {
        let mut cfg = SimConfig {
            algorithm: Algorithm::Block { shortcut: false },
            stop: StopRule { min_frames: 5000, min_errors: 10, max_frames: Some(20_000) },
            seed: 11,
            execution: Execution::Serial,
        };
        let serial = run_fer(golay(), &[1.0, 2.0], &cfg);
        cfg.execution = Execution::Parallel;
        assert_eq!(serial, run_fer(golay(), &[1.0, 2.0], &cfg));
    }

    #[test]
    fn csv_layout() {
        let cfg = SimConfig { algorithm: Algorithm::Ml, stop: StopRule::fixed(10), seed: 1, execution: Execution::Serial };
        let r = run_fer(golay(), &[3.0], &cfg);
        let mut buf = Vec::new();
        write_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("3.00,10,"));
        assert_eq!(lines[1].split(',').count(), 8);
    }
}
