use chained_golay::channel::{self, ChannelConfig, Execution, SimConfig, StopRule};
use chained_golay::fht;
use chained_golay::gf2::BitVector;
use chained_golay::golay::golay;
use chained_golay::oracle::{self, parse_regression, ML_REGRESSION_FIXTURE};
use chained_golay::sc;
use chained_golay::{Algorithm, LlrVector};

#[test]
fn every_decoder_matches_the_regression_fixture() {
    let spec = golay();
    for case in parse_regression(ML_REGRESSION_FIXTURE).unwrap() {
        for algo in [Algorithm::Block { shortcut: false }, Algorithm::Block { shortcut: true }, Algorithm::Ml] {
            assert_eq!(algo.decode(spec, &case.llrs).codeword, case.codeword, "{algo}");
        }
        assert_eq!(fht::block_decode_exhaustive(&case.llrs).codeword, case.codeword);
        // The full tree keeps every path, so the list winner is the ML codeword.
        assert_eq!(sc::list_decode(&case.llrs, spec, 4096)[0].codeword, case.codeword);
    }
}

#[test]
fn sequential_and_list_agree_on_noisy_frames() {
    let spec = golay();
    let cfg = ChannelConfig::new(2.0, 0.5);
    for f in 0..300 {
        let o = channel::simulate_frame(spec, Algorithm::List { size: 16 }, &cfg, 4, 0, f);
        let seq = sc::sequential_decode(&o.llrs, spec, 16, sc::DEFAULT_MAX_PATHS);
        assert!(!seq.capped);
        // Both keep the best 16 extensions per depth; they may differ only on exact score ties.
        let list = sc::list_decode(&o.llrs, spec, 16).swap_remove(0);
        assert!((seq.score - list.score).abs() < 1e-9, "frame {f}");
        assert!(seq.ops.total() <= list.ops.total(), "frame {f}");
    }
}

#[test]
fn plain_sc_is_a_valid_but_weaker_decoder() {
    let spec = golay();
    let cfg = ChannelConfig::new(1.0, 0.5);
    let mut worse = 0;
    for f in 0..500 {
        let o = channel::simulate_frame(spec, Algorithm::Sc, &cfg, 8, 0, f);
        assert_eq!(spec.encode(&spec.info_of_input(spec.input_of(&o.decoded).unwrap().as_slice())).unwrap(), o.decoded);
        worse += usize::from(!o.ml_agreement);
    }
    assert!(worse > 0);
}

#[test]
fn ml_agreeing_decoders_share_the_oracle_fer() {
    let run = |algorithm| {
        let cfg = SimConfig { algorithm, stop: StopRule::fixed(5000), seed: 42, execution: Execution::Parallel };
        channel::run_fer(golay(), &[1.0, 3.0], &cfg)
    };
    let ml = run(Algorithm::Ml);
    for algo in [Algorithm::Block { shortcut: false }, Algorithm::Block { shortcut: true }] {
        let r = run(algo);
        for (a, b) in r.iter().zip(&ml) {
            assert_eq!(a.frame_errors, b.frame_errors, "{algo}");
            assert_eq!(a.ml_agreement_rate, 1.0);
        }
    }
}

#[test]
fn all_zero_and_random_codewords_give_matching_fer() {
    // Linear code, symmetric channel: the error rate does not depend on the codeword sent.
    let spec = golay();
    let cfg = ChannelConfig::new(1.5, 0.5);
    let frames = 20_000u64;
    let mut zero_errors = 0u64;
    for f in 0..frames {
        let mut rng = channel::frame_rng(77, 0, f);
        let y = channel::modulate_and_transmit(&BitVector::zeros(24), &cfg, &mut rng);
        zero_errors += u64::from(fht::block_decode(&y, false).codeword != BitVector::zeros(24));
    }
    let sim = SimConfig { algorithm: Algorithm::Block { shortcut: false }, stop: StopRule::fixed(frames), seed: 78, execution: Execution::Parallel };
    let random = channel::run_fer(spec, &[1.5], &sim)[0];
    let (p0, p1) = (zero_errors as f64 / frames as f64, random.fer);
    let sd = (p0 * (1.0 - p0) / frames as f64 * 2.0).sqrt();
    assert!((p0 - p1).abs() < 4.0 * sd, "{p0} vs {p1}");
}

#[test]
fn block_decoder_average_cost_falls_with_snr() {
    let cfg = SimConfig { algorithm: Algorithm::Block { shortcut: false }, stop: StopRule::fixed(4000), seed: 2, execution: Execution::Parallel };
    let r = channel::run_fer(golay(), &[1.0, 2.0, 3.0, 4.0], &cfg);
    assert!(r.windows(2).all(|w| w[1].avg_total_ops() < w[0].avg_total_ops()));
    let y = LlrVector::new(vec![1.0; 24]).unwrap();
    assert!(r.iter().all(|rec| rec.avg_total_ops() >= fht::block_decode(&y, false).ops.total() as f64));
    assert!(oracle::ml_decode(&y).ops.total() > r[0].max_total_ops);
}
