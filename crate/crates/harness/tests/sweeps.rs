use std::path::PathBuf;

use sqfi_harness::emit::render;
use sqfi_harness::{
    run_sweep, run_sweep_with_jobs, Axis, Format, MethodKind, Options, Quantity, SweepSpec,
};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> SweepSpec {
    SweepSpec::load(&configs().join(name)).unwrap()
}

#[test]
fn shipped_configs_run() {
    for (name, n) in [
        ("fig1a.toml", 41 * 51),
        ("fig1b.toml", 63 * 51),
        ("fig2.toml", 51 * 2),
        ("fig3a.toml", 41 * 3),
        ("fig3b.toml", 41 * 3),
    ] {
        let res = run_sweep_with_jobs(&load(name), Some(2)).unwrap();
        assert_eq!(res.grid.len(), n, "{name}");
        assert!(res.grid.iter().all(|p| p.value.is_finite()));
    }
}

#[test]
fn fig1a_surface_starts_at_one_and_decays() {
    let res = run_sweep(&load("fig1a.toml")).unwrap();
    assert_eq!(res.value(0, 0), 1.0);
    for i in 0..41 {
        let row = res.row(i);
        assert!(row.iter().all(|&v| v > 0.0 && v <= 1.0));
        assert!(row[50] < row[0]);
    }
}

#[test]
fn json_mirror_is_equivalent() {
    let spec = load("fig2.toml");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.json");
    std::fs::write(&path, spec.to_json()).unwrap();
    assert_eq!(SweepSpec::load(&path).unwrap(), spec);
}

#[test]
fn csv_is_byte_identical_across_runs_and_worker_counts() {
    let spec = load("fig1b.toml");
    let a = render(&run_sweep_with_jobs(&spec, Some(1)).unwrap(), Format::Csv);
    let b = render(&run_sweep_with_jobs(&spec, Some(1)).unwrap(), Format::Csv);
    let c = render(&run_sweep_with_jobs(&spec, Some(4)).unwrap(), Format::Csv);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn methods_agree_on_a_small_grid() {
    let mut spec = SweepSpec {
        quantity: Quantity::Gamma,
        method: MethodKind::Analytic,
        fixed: [
            ("eta".to_string(), 0.6),
            ("s".to_string(), 2.0),
            ("theta".to_string(), 0.0),
        ]
        .into_iter()
        .collect(),
        axis1: Axis::new("r", 0.0, 1.0, 3),
        axis2: Axis::new("t", 0.5, 5.0, 4),
        options: Options::default(),
    };
    let analytic = run_sweep(&spec).unwrap();
    spec.method = MethodKind::Quadrature;
    let quad = run_sweep(&spec).unwrap();
    assert_eq!(quad.metadata.rel_tol, Some(1e-10));
    spec.method = MethodKind::Discrete;
    let disc = run_sweep(&spec).unwrap();
    assert_eq!(disc.metadata.modes, Some(4000));
    for ((a, q), d) in analytic.grid.iter().zip(&quad.grid).zip(&disc.grid) {
        assert!((a.value - q.value).abs() <= 1e-7 * a.value);
        assert!((a.value - d.value).abs() <= 1e-3 * a.value);
    }
}

#[test]
fn thermal_axis_scales_gamma() {
    let spec = SweepSpec {
        quantity: Quantity::Gamma,
        method: MethodKind::Analytic,
        fixed: [
            ("eta", 0.6),
            ("s", 0.8),
            ("r", 0.8),
            ("theta", 1.0),
            ("t", 3.0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect(),
        axis1: Axis::new("temperature", 0.1, 5.0, 5),
        axis2: Axis::new("omega0", 0.5, 2.0, 3),
        options: Options::default(),
    };
    let res = run_sweep(&spec).unwrap();
    let base = {
        let mut s = spec.clone();
        s.axis1 = Axis::new("temperature", 0.0, 1.0, 2);
        run_sweep(&s).unwrap().value(0, 0)
    };
    for p in &res.grid {
        let n = 1.0 / (p.axis2 / p.axis1).exp_m1();
        assert!((p.value - (2.0 * n + 1.0) * base).abs() <= 1e-12 * p.value);
    }
}
