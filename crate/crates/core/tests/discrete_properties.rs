use proptest::prelude::*;
use sqfi_core::{
    discretize_spectrum, gamma_analytic, gamma_discrete, gamma_discrete_forms, BathMode,
    DiscreteBath, OhmicSpectrum, SqueezeParams,
};
use std::f64::consts::TAU;

fn fig1a_grid() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for i in 0..=10 {
        for j in 0..=20 {
            pts.push((0.1 * i as f64, 0.5 * j as f64));
        }
    }
    pts
}

fn max_relative_error(n_modes: usize) -> f64 {
    let spec = OhmicSpectrum::new(0.6, 2.0, 1.0).unwrap();
    let bath = discretize_spectrum(&spec, n_modes, 40.0).unwrap();
    fig1a_grid()
        .into_iter()
        .map(|(r, t)| {
            let sq = SqueezeParams::new(r, 0.0).unwrap();
            let exact = gamma_analytic(t, &spec, &sq).unwrap();
            let approx = gamma_discrete(&bath, t, &sq).unwrap();
            (approx - exact).abs() / exact.max(1e-6)
        })
        .fold(0.0, f64::max)
}

#[test]
fn discrete_bath_converges_to_continuum() {
    let errors: Vec<f64> = [1000, 2000, 4000]
        .iter()
        .map(|&n| max_relative_error(n))
        .collect();
    assert!(errors[2] <= 1e-3, "{errors:?}");
    for w in errors.windows(2) {
        assert!(w[1] <= 0.5 * w[0], "{errors:?}");
    }
}

#[test]
fn vacuum_discrete_value_at_unit_time() {
    let spec = OhmicSpectrum::new(0.6, 2.0, 1.0).unwrap();
    let bath = discretize_spectrum(&spec, 4000, 40.0).unwrap();
    let g = gamma_discrete(&bath, 1.0, &SqueezeParams::vacuum()).unwrap();
    assert!((g - 0.3).abs() / 0.3 < 1e-3);
}

#[test]
fn sub_ohmic_discretization_still_converges() {
    let spec = OhmicSpectrum::new(0.6, 0.8, 1.0).unwrap();
    let sq = SqueezeParams::new(0.8, 3.0).unwrap();
    let exact = gamma_analytic(5.0, &spec, &sq).unwrap();
    let coarse =
        gamma_discrete(&discretize_spectrum(&spec, 1000, 40.0).unwrap(), 5.0, &sq).unwrap();
    let fine = gamma_discrete(&discretize_spectrum(&spec, 8000, 40.0).unwrap(), 5.0, &sq).unwrap();
    assert!((fine - exact).abs() < (coarse - exact).abs());
    assert!((fine - exact).abs() / exact < 1e-3);
}

fn arb_bath() -> impl Strategy<Value = DiscreteBath> {
    prop::collection::vec((0.01f64..20.0, -2.0f64..2.0), 1..64).prop_map(|modes| {
        DiscreteBath::manual(
            modes
                .into_iter()
                .map(|(w, g)| BathMode::new(w, g).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn mode_sum_forms_agree(bath in arb_bath(), r in 0.0f64..1.5, theta in 0.0f64..TAU, t in 0.0f64..30.0) {
        let sq = SqueezeParams::new(r, theta).unwrap();
        let (beta_form, closed_form) = gamma_discrete_forms(&bath, t, &sq).unwrap();
        prop_assert!((beta_form - closed_form).abs() <= 1e-12 * beta_form.abs().max(closed_form.abs()).max(1e-300));
        prop_assert!(gamma_discrete(&bath, t, &sq).unwrap() >= 0.0);
    }

    #[test]
    fn discretized_sums_are_reproducible(n in 1usize..5000, t in 0.0f64..10.0) {
        let spec = OhmicSpectrum::new(0.6, 1.3, 1.0).unwrap();
        let bath = discretize_spectrum(&spec, n, 40.0).unwrap();
        let sq = SqueezeParams::new(0.5, 1.0).unwrap();
        let a = gamma_discrete(&bath, t, &sq).unwrap();
        let b = gamma_discrete(&bath, t, &sq).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }
}
