use proptest::prelude::*;

use chained_golay::decoder::{correlation, ellipsoidal_weight};
use chained_golay::fht;
use chained_golay::gf2::{self, BitMatrix, BitVector};
use chained_golay::golay::{golay, GOLAY_SEGMENTS};
use chained_golay::oracle;
use chained_golay::sc;
use chained_golay::{Algorithm, LlrVector};

fn llrs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-8.0f64..8.0, 24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chained_transform_is_an_involution(mask in 0u64..(1 << 24)) {
        let u = BitVector::from_mask(mask, 24);
        let c = gf2::apply_mixed_transform(&u, &GOLAY_SEGMENTS).unwrap();
        prop_assert_eq!(gf2::apply_mixed_transform(&c, &GOLAY_SEGMENTS).unwrap(), u.clone());
        let a = gf2::mixed_transform_matrix(&GOLAY_SEGMENTS);
        prop_assert_eq!(u.mul_matrix(&a).unwrap(), c);
    }

    #[test]
    fn encoding_round_trips(info in 0u64..4096) {
        let spec = golay();
        let info = BitVector::from_mask(info, 12);
        let c = spec.encode(&info).unwrap();
        let u = spec.input_of(&c).unwrap();
        prop_assert!(spec.cs.is_satisfied(u.as_slice()));
        prop_assert_eq!(spec.info_of_input(u.as_slice()), info);
        prop_assert!(BitMatrix::from_rows(&[c]).unwrap().mul(&spec.check.transpose()).unwrap().is_zero());
    }

    #[test]
    fn score_identity_holds(mask in 0u64..(1 << 24), y in llrs()) {
        let u = BitVector::from_mask(mask, 24);
        let (r, e) = sc::path_score_identity_check(&u, &LlrVector::new(y).unwrap()).unwrap();
        prop_assert!((r + e).abs() <= 1e-9 * e.max(1.0));
    }

    #[test]
    fn boxplus_is_symmetric_and_bounded(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        prop_assert_eq!(sc::boxplus(a, b), sc::boxplus(b, a));
        prop_assert!(sc::boxplus(a, b).abs() <= a.abs().min(b.abs()));
        prop_assert!(sc::tau(a, 0) <= 0.0 && sc::tau(a, 1) <= 0.0);
        prop_assert_eq!(sc::tau(a, 0) + sc::tau(a, 1), -a.abs());
    }

    #[test]
    fn hadamard_transform_inverts_itself(z in prop::collection::vec(-5.0f64..5.0, 16)) {
        let f = fht::fht(&z).unwrap();
        let back = fht::fht(&f).unwrap();
        for (x, w) in z.iter().zip(&back) {
            prop_assert!((x * 16.0 - w).abs() < 1e-9);
        }
    }

    #[test]
    fn block_decoder_reaches_the_ml_correlation(y in llrs(), shortcut in any::<bool>()) {
        let y = LlrVector::new(y).unwrap();
        let b = fht::block_decode(&y, shortcut);
        prop_assert!((correlation(b.codeword.as_slice(), &y) - oracle::max_correlation(&y)).abs() < 1e-9);
        prop_assert!((b.score + ellipsoidal_weight(b.codeword.as_slice(), &y)).abs() < 1e-12);
        prop_assert_eq!(golay().encode(&b.info).unwrap(), b.codeword);
    }

    #[test]
    fn decisions_ignore_positive_scaling(y in llrs(), lambda in 0.01f64..100.0) {
        let y = LlrVector::new(y).unwrap();
        let scaled = y.scaled(lambda);
        for algo in [Algorithm::Sc, Algorithm::List { size: 4 }, Algorithm::Block { shortcut: false }, Algorithm::Ml] {
            prop_assert_eq!(algo.decode(golay(), &y).codeword, algo.decode(golay(), &scaled).codeword, "{}", algo);
        }
    }

    #[test]
    fn list_results_are_ranked_codewords(y in llrs()) {
        let spec = golay();
        let results = sc::list_decode(&LlrVector::new(y).unwrap(), spec, 8);
        prop_assert_eq!(results.len(), 8);
        prop_assert!(results.windows(2).all(|w| w[0].score >= w[1].score));
        for r in &results {
            prop_assert_eq!(spec.encode(&r.info).unwrap(), r.codeword.clone());
        }
    }

    #[test]
    fn stage1_scores_come_in_opposite_pairs(y in llrs()) {
        let paths = fht::stage1_enumerate(&LlrVector::new(y).unwrap());
        let mut rs: Vec<f64> = paths.iter().map(|p| p.r).collect();
        let total: f64 = rs.iter().sum();
        prop_assert!(total.abs() < 1e-9);
        rs.sort_by(f64::total_cmp);
        for (a, b) in rs.iter().zip(rs.iter().rev()) {
            prop_assert!((a + b).abs() < 1e-9);
        }
    }
}
