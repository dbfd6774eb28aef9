//! Randomized invariants over the stochastic building blocks.

use glv_core::channel::{impulse_response, propagate, ChannelConfig};
use glv_core::loss::{apply_loss, beta_params_from_mean_cv, LossModel};
use glv_core::rng::substream;
use glv_core::transmitter::{build_emission_signal, EmissionConfig};
use glv_core::molecule::PerMolecule;
use glv_core::wind::{sample_wind_path, WindModel};
use proptest::prelude::*;
use rand::Rng;

fn feasible_loss() -> impl Strategy<Value = LossModel> {
    // cv² < (1 − mean)/mean keeps the Beta parameters positive
    (0.05f64..0.95).prop_flat_map(|mean| {
        let cv_max = ((1.0 - mean) / mean).sqrt() * 0.9;
        (Just(mean), 0.0f64..cv_max).prop_map(|(mean, cv)| LossModel { mean, cv })
    })
}

proptest! {
    #[test]
    fn loss_factors_stay_in_unit_interval(
        model in feasible_loss(),
        trace in proptest::collection::vec(0.0f64..1e-3, 1..200),
        seed in any::<u64>(),
    ) {
        let out = apply_loss(&trace, &model, seed, "loss:HAL").unwrap();
        prop_assert_eq!(out.len(), trace.len());
        for (y, x) in out.iter().zip(&trace) {
            prop_assert!(*y >= 0.0);
            prop_assert!(*y <= *x);
        }
    }

    #[test]
    fn loss_is_deterministic_per_stream(
        model in feasible_loss(),
        trace in proptest::collection::vec(0.0f64..1e-3, 1..100),
        seed in any::<u64>(),
    ) {
        let a = apply_loss(&trace, &model, seed, "loss:HOL").unwrap();
        let b = apply_loss(&trace, &model, seed, "loss:HOL").unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn beta_moment_match_recovers_mean(model in feasible_loss()) {
        if let Some((alpha, beta)) = beta_params_from_mean_cv(model.mean, model.cv).unwrap() {
            prop_assert!(alpha > 0.0 && beta > 0.0);
            let mean = alpha / (alpha + beta);
            prop_assert!((mean - model.mean).abs() < 1e-12);
            let variance = alpha * beta / ((alpha + beta).powi(2) * (alpha + beta + 1.0));
            prop_assert!((variance.sqrt() / mean - model.cv).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_is_positive_and_radially_decreasing(
        dt in 0.1f64..1e4,
        d in 1e-7f64..1e-4,
        r1 in 0.0f64..0.5,
        extra in 1e-4f64..0.5,
    ) {
        let near = impulse_response(dt, [r1, 0.0, 0.0], d).unwrap();
        let far = impulse_response(dt, [r1 + extra, 0.0, 0.0], d).unwrap();
        prop_assert!(near > 0.0);
        prop_assert!(far < near);
        // isotropy: only the offset norm matters
        let rotated = impulse_response(dt, [0.0, r1, 0.0], d).unwrap();
        let axial = impulse_response(dt, [r1, 0.0, 0.0], d).unwrap();
        prop_assert!((rotated - axial).abs() <= 1e-12 * axial.max(1e-300));
    }

    #[test]
    fn emission_mass_matches_bit_count(
        bits in proptest::collection::vec(0u8..2, 1..32),
        amplitude in 1e-13f64..1e-9,
    ) {
        let fs = 10.0;
        let t_sym = 2.0;
        let signal = build_emission_signal(&EmissionConfig {
            bit_sequence: bits.clone(),
            symbol_period_s: t_sym,
            amplitudes: PerMolecule::new(amplitude, 0.0, 0.0),
            sample_rate_hz: fs,
        }).unwrap();
        let ones = bits.iter().filter(|&&b| b == 1).count() as f64;
        let mass: f64 = signal.samples.hal.iter().map(|q| q / fs).sum();
        prop_assert!((mass - ones * t_sym * amplitude).abs() <= 1e-12 * (ones * t_sym * amplitude).max(1e-300));
        for &q in &signal.samples.hal {
            prop_assert!(q == 0.0 || q == amplitude);
        }
        prop_assert!(signal.samples.hol.iter().all(|&q| q == 0.0));
    }

    #[test]
    fn propagation_is_nonnegative_and_scales_linearly(
        seed in any::<u64>(),
        rx_x in 0.05f64..0.5,
        amplitude in 1e-13f64..1e-9,
    ) {
        let fs = 10.0;
        let cfg = ChannelConfig {
            tx_position: [0.0, 0.0, 1.0],
            sample_rate_hz: fs,
            horizon_s: 30.0,
            truncation: false,
            far_decimation: None,
        };
        let model = WindModel::regime("directed", fs).unwrap();
        let wind = sample_wind_path(&model, seed, cfg.n_samples()).unwrap();
        let mut emission = vec![0.0; cfg.n_samples()];
        for q in emission.iter_mut().take(20) {
            *q = amplitude;
        }
        let base = propagate(&emission, &wind, 8.0718e-6, &cfg, [rx_x, 0.0, 1.0]).unwrap();
        prop_assert!(base.iter().all(|&c| c >= 0.0));
        prop_assert_eq!(base[0], 0.0); // nothing can arrive at t = 0

        // doubling the source doubles the trace exactly (powers of two are
        // lossless scalings of every normal f64 in the superposition; the
        // additive floor only excuses subnormal tails)
        let doubled: Vec<f64> = emission.iter().map(|q| 2.0 * q).collect();
        let scaled = propagate(&doubled, &wind, 8.0718e-6, &cfg, [rx_x, 0.0, 1.0]).unwrap();
        for (two, one) in scaled.iter().zip(&base) {
            prop_assert!((two - 2.0 * one).abs() <= 2.3e-308);
        }
    }

    #[test]
    fn substreams_with_distinct_names_decorrelate(seed in any::<u64>()) {
        let a: Vec<u64> = { let mut r = substream(seed, "wind"); (0..16).map(|_| r.gen()).collect() };
        let b: Vec<u64> = { let mut r = substream(seed, "bits"); (0..16).map(|_| r.gen()).collect() };
        let a2: Vec<u64> = { let mut r = substream(seed, "wind"); (0..16).map(|_| r.gen()).collect() };
        prop_assert_eq!(&a, &a2);
        prop_assert_ne!(a, b);
    }
}
