use std::f64::consts::PI;

use proptest::prelude::*;
use relaxwave_core::constants::PhysicalConstants;
use relaxwave_core::grid::{l2_distance, linf_distance, SpatialGrid};
use relaxwave_core::modes::{dispersion_omega, dispersion_omega_for_tau};
use relaxwave_core::quantum::{
    decomposition_residual, decomposition_terms, evolve_fourier_with_potential, evolve_modified_se, evolve_se,
    evolve_thermal_potential, initial_time_derivative, QuantumParams, SeScheme, WaveField,
};
use relaxwave_core::telegraph::ThermalField;
use relaxwave_core::Complex64;

fn nat() -> PhysicalConstants {
    PhysicalConstants::natural()
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// |Ψ|² has variance σ₀² and mean momentum ħk₀.
fn packet(grid: SpatialGrid, sigma0: f64, k0: f64) -> WaveField {
    WaveField::from_fn(grid, |x| cis(k0 * x) * (-x * x / (4.0 * sigma0 * sigma0)).exp()).unwrap()
}

fn position_variance(field: &WaveField) -> f64 {
    let xs = field.grid.coordinates();
    let w: Vec<f64> = field.psi.iter().map(|p| p.norm_sqr()).collect();
    let total: f64 = w.iter().sum();
    let mean: f64 = xs.iter().zip(&w).map(|(x, p)| x * p).sum::<f64>() / total;
    xs.iter().zip(&w).map(|(x, p)| (x - mean).powi(2) * p).sum::<f64>() / total
}

#[test]
fn free_packet_width_law() {
    let (sigma0, m) = (1.0, 1.0);
    for (grid, dt, n) in [
        (SpatialGrid::periodic(-40.0, 40.0, 512).unwrap(), 0.01, 300),
        (SpatialGrid::dirichlet(-40.0, 40.0, 2048).unwrap(), 0.002, 1500),
    ] {
        let p = QuantumParams::free(&grid, m, &nat()).unwrap();
        let out = evolve_se(&packet(grid, sigma0, 0.0), &p, dt, n).unwrap();
        let t = out.time;
        let expect = sigma0 * sigma0 * (1.0 + (t / (2.0 * m * sigma0 * sigma0)).powi(2));
        let got = position_variance(&out);
        assert!(((got - expect) / expect).abs() < 1e-3, "{got} vs {expect}");
    }
}

#[test]
fn norm_is_conserved_over_a_thousand_steps() {
    let periodic = SpatialGrid::periodic(-20.0, 20.0, 256).unwrap();
    let dirichlet = SpatialGrid::dirichlet(-20.0, 20.0, 512).unwrap();
    for (grid, scheme) in [
        (periodic, SeScheme::SplitStep),
        (periodic, SeScheme::CrankNicolson),
        (dirichlet, SeScheme::CrankNicolson),
    ] {
        let v = grid
            .coordinates()
            .iter()
            .map(|x| 0.1 * x * x + (3.0 * x).sin())
            .collect();
        let p = QuantumParams::new(1.0, v, &nat()).unwrap().with_scheme(scheme);
        let f = packet(grid, 1.0, 2.0);
        let out = evolve_se(&f, &p, 0.005, 1000).unwrap();
        assert!(((out.norm() - f.norm()) / f.norm()).abs() < 1e-8, "{scheme:?}");
    }
}

#[test]
fn plane_wave_eigenphase_with_constant_potential() {
    let grid = SpatialGrid::periodic(0.0, 2.0 * PI, 64).unwrap();
    let (k, v0) = (3.0, 0.7);
    let p = QuantumParams::new(1.0, vec![v0; 64], &nat()).unwrap();
    let f = WaveField::from_fn(grid, |x| cis(k * x)).unwrap();
    let energy = k * k / 2.0 + v0;
    let period = 2.0 * PI / energy;
    let n = 200;
    let out = evolve_se(&f, &p, period / n as f64, n).unwrap();
    for (a, b) in out.psi.iter().zip(&f.psi) {
        // one full period returns to the start
        assert!((a / b).arg().abs() < 1e-6);
    }
}

#[test]
fn potential_shift_is_a_global_phase() {
    let grid = SpatialGrid::periodic(-20.0, 20.0, 256).unwrap();
    let base: Vec<f64> = grid.coordinates().iter().map(|x| 0.05 * x * x).collect();
    let v0 = 0.5;
    let f = packet(grid, 1.0, 1.0);
    for scheme in [SeScheme::SplitStep, SeScheme::CrankNicolson] {
        let p = QuantumParams::new(1.0, base.clone(), &nat())
            .unwrap()
            .with_scheme(scheme);
        let shifted = QuantumParams::new(1.0, base.iter().map(|v| v + v0).collect(), &nat())
            .unwrap()
            .with_scheme(scheme);
        let a = evolve_se(&f, &p, 1e-3, 1000).unwrap();
        let b = evolve_se(&f, &shifted, 1e-3, 1000).unwrap();
        let phase = cis(-v0 * a.time);
        let rotated: Vec<Complex64> = a.psi.iter().map(|z| z * phase).collect();
        assert!(linf_distance(&rotated, &b.psi) < 1e-6, "{scheme:?}");
    }
}

#[test]
fn crank_nicolson_is_second_order_in_time() {
    let grid = SpatialGrid::dirichlet(-20.0, 20.0, 512).unwrap();
    let p = QuantumParams::free(&grid, 1.0, &nat()).unwrap();
    let f = packet(grid, 1.0, 1.5);
    let run = |dt: f64| evolve_se(&f, &p, dt, (1.0 / dt).round() as usize).unwrap().psi;
    let levels: Vec<Vec<Complex64>> = [0.04, 0.02, 0.01, 0.005].iter().map(|&dt| run(dt)).collect();
    let diffs: Vec<f64> = levels.windows(2).map(|w| l2_distance(&grid, &w[0], &w[1])).collect();
    for w in diffs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }
}

#[test]
fn wick_rotated_heat_flow_is_schrodinger_flow() {
    let grid = SpatialGrid::periodic(-20.0, 20.0, 256).unwrap();
    let v = grid.coordinates().iter().map(|x| 0.05 * x * x).collect();
    let p = QuantumParams::new(1.0, v, &nat()).unwrap();
    let f = packet(grid, 1.0, 1.0);
    let dt = 0.01;
    let rotated = evolve_fourier_with_potential(&f.psi, &grid, &p, Complex64::new(0.0, dt), 200).unwrap();
    let se = evolve_se(&f, &p, dt, 200).unwrap();
    assert!(linf_distance(&rotated, &se.psi) < 1e-12);
}

#[test]
fn thermal_potential_adds_decay_rate() {
    let grid = SpatialGrid::periodic(0.0, 1.0, 16).unwrap();
    let (hbar, v0) = (1.0, 0.3);
    let p = QuantumParams::new(0.5, vec![v0; 16], &nat()).unwrap();
    let t = ThermalField::from_fn(grid, |_| 2.0).unwrap();
    let out = evolve_thermal_potential(&t, &p, 0.1, 20).unwrap();
    for v in &out.values {
        assert!((v - 2.0 * (-v0 / hbar * 2.0f64).exp()).abs() < 1e-14);
    }
}

#[test]
fn modified_equation_converges_to_se_linearly_in_tau() {
    let grid = SpatialGrid::periodic(-20.0, 20.0, 256).unwrap();
    let f = packet(grid, 1.0, 1.0);
    let base = QuantumParams::free(&grid, 1.0, &nat()).unwrap();
    let reference = evolve_se(&f, &base, 0.01, 100).unwrap();
    let errors: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
        .iter()
        .map(|&tau| {
            let p = base.clone().with_tau(tau);
            let d = initial_time_derivative(&f, &p).unwrap();
            let start = f.clone().with_time_derivative(d).unwrap();
            let out = evolve_modified_se(&start, &p, 0.01, 100).unwrap();
            l2_distance(&grid, &out.psi, &reference.psi)
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((0.95..=2.0).contains(&order), "order {order}, errors {errors:?}");
    }
}

/// Frequency of the fitted phase slope of Ψ(0, t), unwrapped step by step.
fn fitted_frequency(f: &WaveField, p: &QuantumParams, dt: f64, n: usize) -> f64 {
    let mut state = f.clone();
    let (mut phase, mut prev) = (0.0, f.psi[0]);
    let (mut st, mut sp, mut stt, mut stp) = (0.0, 0.0, 0.0, 0.0);
    for i in 1..=n {
        state = evolve_modified_se(&state, p, dt, 1).unwrap();
        phase += (state.psi[0] / prev).arg();
        prev = state.psi[0];
        let t = i as f64 * dt;
        st += t;
        sp += phase;
        stt += t * t;
        stp += t * phase;
    }
    let nf = n as f64;
    -(nf * stp - st * sp) / (nf * stt - st * st)
}

#[test]
fn plane_wave_frequency_matches_dispersion_root() {
    let tau = 0.005;
    let constants = PhysicalConstants::natural_with_planck_tau(tau).unwrap();
    let grid = SpatialGrid::periodic(0.0, 2.0 * PI, 16).unwrap();
    for k in [1.0, 2.0, 3.0] {
        let p = QuantumParams::free(&grid, 1.0, &constants).unwrap();
        assert_eq!(p.tau, tau);
        let f = WaveField::from_fn(grid, |x| cis(k * x)).unwrap();
        let f = f
            .clone()
            .with_time_derivative(initial_time_derivative(&f, &p).unwrap())
            .unwrap();
        let omega = fitted_frequency(&f, &p, 0.01, 10_000);
        let expect = dispersion_omega(k, 1.0, &constants).unwrap().minus_omega().re;
        let via_tau = dispersion_omega_for_tau(k, 1.0, 1.0, tau).unwrap().minus_omega().re;
        assert!(((expect - via_tau) / expect).abs() < 1e-14);
        assert!(((omega - expect) / expect).abs() < 1e-4, "k={k}: {omega} vs {expect}");
        // and the relaxation shift is resolved
        assert!(((omega - k * k / 2.0) / omega).abs() > 1e-3);
    }
}

fn smooth_field(grid: SpatialGrid, coeffs: &[(f64, f64)], phase: f64) -> Vec<Complex64> {
    let l = grid.length();
    grid.coordinates()
        .iter()
        .map(|x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, (a, b))| {
                    let k = 2.0 * PI * j as f64 / l;
                    Complex64::new(*a, *b) * cis(k * x + phase)
                })
                .sum()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_identity_on_random_fields(
        c1 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
        c2 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
        c3 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
        v in prop::collection::vec(-2.0f64..2.0, 64),
        mass in 0.1f64..10.0,
    ) {
        let grid = SpatialGrid::periodic(0.0, 2.0 * PI, 64).unwrap();
        let k = nat();
        let p = QuantumParams::new(mass, v, &k).unwrap();
        let f = WaveField::new(grid, smooth_field(grid, &c1, 0.0), 0.0).unwrap()
            .with_time_derivative(smooth_field(grid, &c2, 0.3)).unwrap();
        let d2 = smooth_field(grid, &c3, 0.7);
        let r = decomposition_residual(&f, Some(&d2), &p, &k).unwrap();
        prop_assert!(r <= 1e-10, "residual {r:e}");
        // neither part vanishes on its own
        let terms = decomposition_terms(&f, Some(&d2), &p, &k).unwrap();
        let size = |z: &[Complex64]| z.iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(size(&terms.full) > 1e-3 || size(&terms.reduced) > 1e-3);
    }
}

#[test]
fn dalembert_pulse_has_no_pilot_residual() {
    let grid = SpatialGrid::periodic(-20.0, 20.0, 256).unwrap();
    let k = nat();
    let c = k.c;
    let t = 0.0;
    let f = |x: f64| (-(x - c * t).powi(2)).exp();
    let fp = |x: f64| -2.0 * (x - c * t) * f(x);
    let fpp = |x: f64| (4.0 * (x - c * t).powi(2) - 2.0) * f(x);
    let xs = grid.coordinates();
    let psi = xs.iter().map(|&x| Complex64::new(f(x), 0.0)).collect();
    let dpsi = xs.iter().map(|&x| Complex64::new(-c * fp(x), 0.0)).collect();
    let d2: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(c * c * fpp(x), 0.0)).collect();
    let field = WaveField::new(grid, psi, t)
        .unwrap()
        .with_time_derivative(dpsi)
        .unwrap();
    let p = QuantumParams::free(&grid, 1.0, &k).unwrap();
    let terms = decomposition_terms(&field, Some(&d2), &p, &k).unwrap();
    let pilot = l2_distance(&grid, &terms.pilot, &vec![Complex64::new(0.0, 0.0); 256]);
    assert!(pilot <= 1e-10, "pilot residual {pilot:e}");
    assert!(decomposition_residual(&field, Some(&d2), &p, &k).unwrap() <= 1e-10);
}
