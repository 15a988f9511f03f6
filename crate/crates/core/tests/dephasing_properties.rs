use proptest::prelude::*;
use sqfi_core::{
    gamma_analytic, gamma_analytic_complex, gamma_quadrature, gamma_series, gamma_thermal,
    gamma_vacuum, mean_occupation, GammaMethod, OhmicSpectrum, SqueezeParams, ThermalParams,
};
use std::f64::consts::{PI, TAU};

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_is_real_and_nonnegative(
        s in 0.3f64..3.0,
        r in 0.0f64..1.5,
        theta in 0.0f64..TAU,
        t in 0.0f64..20.0,
    ) {
        let spec = OhmicSpectrum::new(0.6, s, 1.0).unwrap();
        let sq = SqueezeParams::new(r, theta).unwrap();
        let z = gamma_analytic_complex(t, &spec, &sq).unwrap();
        prop_assert!(z.im.abs() < 1e-10, "imag residue {}", z.im);
        let g = gamma_analytic(t, &spec, &sq).unwrap();
        prop_assert!(g >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unsqueezed_closed_form_matches_vacuum_formula(
        s in 0.3f64..3.0,
        theta in 0.0f64..TAU,
        t in 0.0f64..20.0,
        eta in 0.05f64..2.0,
    ) {
        let spec = OhmicSpectrum::new(eta, s, 1.0).unwrap();
        let sq = SqueezeParams::new(0.0, theta).unwrap();
        let a = gamma_analytic(t, &spec, &sq).unwrap();
        let v = gamma_vacuum(t, &spec).unwrap();
        prop_assert!((a - v).abs() <= 1e-12 * v.max(1.0), "{a} vs {v}");
        let a0 = gamma_analytic(t, &spec, &SqueezeParams::vacuum()).unwrap();
        prop_assert!((a - a0).abs() <= 1e-14 * a0.max(1.0));
    }

    #[test]
    fn cutoff_rescaling(
        s in 0.3f64..3.0,
        r in 0.0f64..1.5,
        theta in 0.0f64..TAU,
        t in 0.0f64..10.0,
        wc in 0.1f64..5.0,
    ) {
        let sq = SqueezeParams::new(r, theta).unwrap();
        let scaled = OhmicSpectrum::new(0.6, s, wc).unwrap();
        let unit = OhmicSpectrum::new(0.6, s, 1.0).unwrap();
        let a = gamma_analytic(t, &scaled, &sq).unwrap();
        let b = gamma_analytic(wc * t, &unit, &sq).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
    }

    #[test]
    fn thermal_scaling_is_exact(temperature in 0.0f64..10.0, omega0 in 0.05f64..5.0, t in 0.0f64..10.0) {
        let spec = OhmicSpectrum::new(0.6, 0.8, 1.0).unwrap();
        let sq = SqueezeParams::new(0.8, 1.0).unwrap();
        let th = ThermalParams::new(temperature, omega0).unwrap();
        let g = gamma_analytic(t, &spec, &sq).unwrap();
        let gt = gamma_thermal(t, &spec, &sq, &th).unwrap();
        let factor = 2.0 * mean_occupation(&th) + 1.0;
        prop_assert!((gt - factor * g).abs() <= 1e-12 * gt.max(1e-300));
    }
}

#[test]
fn ohmic_limit_is_continuous() {
    for &r in &[0.0, 0.1, 0.8] {
        for &theta in &[0.0, 2.0, PI] {
            let sq = SqueezeParams::new(r, theta).unwrap();
            for i in 1..=20 {
                let t = 0.5 * i as f64;
                let at =
                    gamma_analytic(t, &OhmicSpectrum::new(0.6, 1.0, 1.0).unwrap(), &sq).unwrap();
                for ds in [1e-6, -1e-6] {
                    let near =
                        gamma_analytic(t, &OhmicSpectrum::new(0.6, 1.0 + ds, 1.0).unwrap(), &sq)
                            .unwrap();
                    assert!(rel(at, near) < 1e-4, "r={r} θ={theta} t={t}");
                }
            }
        }
    }
}

// Symmetric Richardson extrapolation from s = 1 ± δ, δ ∈ {1e-4, 5e-5}, as an
// independent route to the s = 1 value.
#[test]
fn ohmic_value_matches_richardson_extrapolation() {
    let sq = SqueezeParams::new(0.8, 2.0).unwrap();
    let at =
        |s: f64, t: f64| gamma_analytic(t, &OhmicSpectrum::new(0.6, s, 1.0).unwrap(), &sq).unwrap();
    for &t in &[0.3, 1.0, 4.0, 9.0] {
        let sym = |d: f64| 0.5 * (at(1.0 + d, t) + at(1.0 - d, t));
        let extrapolated = (4.0 * sym(5e-5) - sym(1e-4)) / 3.0;
        assert!(rel(at(1.0, t), extrapolated) < 1e-10, "t={t}");
    }
}

#[test]
fn quadrature_agrees_on_reduced_grid() {
    for &s in &[0.8, 1.0, 2.0] {
        let spec = OhmicSpectrum::new(0.6, s, 1.0).unwrap();
        for &(r, theta) in &[(0.0, 0.0), (0.1, 2.0), (0.8, PI)] {
            let sq = SqueezeParams::new(r, theta).unwrap();
            for &t in &[0.2, 1.0, 3.3, 10.0] {
                let q = gamma_quadrature(t, &spec, &sq, 1e-10).unwrap();
                let a = gamma_analytic(t, &spec, &sq).unwrap();
                assert!(rel(q.value, a) < 1e-7, "s={s} r={r} θ={theta} t={t}");
                assert!(q.abs_error <= 1e-10 * q.value);
            }
        }
    }
}

#[test]
fn thermal_dephasing_grows_with_temperature() {
    let spec = OhmicSpectrum::new(0.6, 2.0, 1.0).unwrap();
    let sq = SqueezeParams::new(0.4, 0.0).unwrap();
    let mut prev = 0.0;
    for i in 0..30 {
        let th = ThermalParams::new(0.1 * (i + 1) as f64, 1.0).unwrap();
        let g = gamma_thermal(2.0, &spec, &sq, &th).unwrap();
        assert!(g > prev);
        prev = g;
    }
}

#[test]
fn series_methods_agree_and_parallel_is_deterministic() {
    let spec = OhmicSpectrum::new(0.6, 0.8, 1.0).unwrap();
    let sq = SqueezeParams::new(0.8, 3.0).unwrap();
    let times: Vec<f64> = (0..50).map(|i| 10.0 * i as f64 / 49.0).collect();
    let analytic = gamma_series(&times, &spec, &sq, None, &GammaMethod::Analytic).unwrap();
    let quad = gamma_series(
        &times,
        &spec,
        &sq,
        None,
        &GammaMethod::Quadrature { rel_tol: 1e-10 },
    )
    .unwrap();
    let worst = analytic
        .values()
        .iter()
        .zip(quad.values())
        .map(|(&a, &q)| rel(a, q))
        .fold(0.0, f64::max);
    assert!(worst <= 1e-7, "{worst}");

    let sequential: Vec<f64> = times
        .iter()
        .map(|&t| gamma_analytic(t, &spec, &sq).unwrap())
        .collect();
    let again = gamma_series(&times, &spec, &sq, None, &GammaMethod::Analytic).unwrap();
    for ((a, b), c) in analytic
        .values()
        .iter()
        .zip(again.values())
        .zip(&sequential)
    {
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(a.to_bits(), c.to_bits());
    }
}
