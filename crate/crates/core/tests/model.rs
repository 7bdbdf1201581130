use backhaul_core::model::*;
use backhaul_core::*;
use proptest::prelude::*;
use std::f64::consts::E;

#[test]
fn default_deployment_derivation() {
    let d = derive_model(&NetworkParams::default()).unwrap();
    assert!((d.lambda_c - 10.0 * E).abs() < 1e-12);
    assert!((d.lambda_s - 50.0 * E).abs() < 1e-12);
    assert!((d.lambda_c - 27.18).abs() < 0.01);
    assert!((d.lambda_s - 135.9).abs() < 0.1);
    assert!((d.mean_load - 5.0).abs() < 1e-12);
    assert!((d.lambda_bar_si - 67.96).abs() < 0.01);
    assert_eq!(d.lambda_bar_si, d.lambda_bar_so);
}

#[test]
fn derivation_is_deterministic() {
    let p = NetworkParams { q: 0.37, shadow_sigma: 1.3, ..Default::default() };
    let a = serde_json::to_string(&derive_model(&p).unwrap()).unwrap();
    let b = serde_json::to_string(&derive_model(&p).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_parameters_name_the_field() {
    let cases: Vec<(NetworkParams, &str)> = vec![
        (NetworkParams { beta: 2.0, ..Default::default() }, "beta"),
        (NetworkParams { q: 1.5, ..Default::default() }, "q"),
        (NetworkParams { p_c: 0.0, ..Default::default() }, "p_c"),
        (NetworkParams { lambda_s_raw: -1.0, ..Default::default() }, "lambda_s_raw"),
        (NetworkParams { antennas: 0, ..Default::default() }, "antennas"),
        (NetworkParams { noise_power: -1.0, ..Default::default() }, "noise_power"),
    ];
    for (p, field) in cases {
        match derive_model(&p) {
            Err(Error::InvalidParameter { field: f, .. }) => assert_eq!(f, field),
            other => panic!("{field}: {other:?}"),
        }
    }
}

#[test]
fn empty_cell_probability() {
    let p0 = load_pmf(5.0, 0).unwrap();
    let want = (3.575f64 / 8.575).powf(3.575);
    assert!((p0 - want).abs() < 1e-14);
    assert!((p0 - 0.0438).abs() < 5e-5);
}

#[test]
fn truncated_pmf_normalisation_and_mean() {
    for mean in [0.2, 1.0, 5.0, 10.0, 60.0] {
        let l = LoadDistribution::new(mean).unwrap();
        let total: f64 = l.pmf.iter().sum();
        assert!(total >= 1.0 - LoadDistribution::TAIL_MASS, "mean {mean}: {total}");
        assert!(l.pmf.iter().all(|&v| v >= 0.0));
        let m: f64 = l.pmf.iter().enumerate().map(|(n, &v)| n as f64 * v).sum();
        assert!((m - mean).abs() / mean < 1e-3, "mean {mean}: {m}");
        assert!(l.n_max() as f64 <= 64.0 * mean + 1.0);
        let c: f64 = l.conditioned_nonempty().iter().map(|&(_, w)| w).sum();
        assert!((c - 1.0).abs() < 1e-12);
    }
}

#[test]
fn pilot_reuse_intensity() {
    let d = derive_model(&NetworkParams::default()).unwrap();
    let l = LoadDistribution::new(d.mean_load).unwrap();
    let v = pilot_contamination_intensity(&d, &l, 50);
    assert!((v / (0.1 * d.lambda_c) - 1.0).abs() < 0.01, "{v}");
    // every CN exhausts its pilots when the load dwarfs S
    let heavy = LoadDistribution::new(5000.0).unwrap();
    let v = pilot_contamination_intensity(&d, &heavy, 50);
    assert!((v / d.lambda_c - 1.0).abs() < 0.01);
    // no SBSs, no pilots in use
    let empty = LoadDistribution { mean_load: 1e-9, pmf: vec![1.0] };
    assert_eq!(pilot_contamination_intensity(&d, &empty, 50), 0.0);
}

#[test]
fn out_of_band_threshold_identity() {
    for r in [0.5, 1.0, 2.0] {
        let d = derive_model(&NetworkParams { rate_threshold: r, ..Default::default() }).unwrap();
        let g = d.gamma_a_i;
        assert!((d.gamma_a_o - (g * g + 2.0 * g)).abs() < 1e-12);
    }
}

#[test]
fn thresholds_vanish_with_many_antennas() {
    for mode in [Mode::Ibfd, Mode::Obfd] {
        let p = NetworkParams { antennas: u32::MAX, ..Default::default() };
        assert!(backhaul_threshold(20, &p, mode).unwrap() < 1e-7);
    }
}

proptest! {
    #[test]
    fn interfering_intensities_split_linearly(q in 0.0..=1.0f64, ls in 1.0..1000.0f64) {
        let p = NetworkParams { q, lambda_s_raw: ls, ..Default::default() };
        let d = derive_model(&p).unwrap();
        prop_assert!((d.lambda_bar_si + d.lambda_bar_so - d.served_intensity).abs() <= 1e-12 * d.served_intensity);
        prop_assert!((d.lambda_bar_si - q * d.served_intensity).abs() <= 1e-12 * d.served_intensity);
        prop_assert!(d.served_intensity <= 50.0 * d.lambda_c * (1.0 + 1e-12));
    }

    #[test]
    fn backhaul_threshold_monotone(m in 60u32..5000, n in 1u32..50) {
        let p = NetworkParams { antennas: m, ..Default::default() };
        let more = NetworkParams { antennas: m + 1, ..Default::default() };
        for mode in [Mode::Ibfd, Mode::Obfd] {
            let t = backhaul_threshold(n, &p, mode).unwrap();
            prop_assert!(backhaul_threshold(n, &more, mode).unwrap() <= t);
            prop_assert!(backhaul_threshold(n + 1, &p, mode).unwrap() >= t);
        }
    }
}
