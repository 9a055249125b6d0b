use std::f64::consts::PI;

use proptest::prelude::*;
use relaxwave_core::constants::{planck_scales, PhysicalConstants};
use relaxwave_core::grid::{linf_distance, SpatialGrid};
use relaxwave_core::modes::{
    dispersion_omega, pilot_wave_advance, reduced_equation_check, string_mode_field, string_modes, DispersionRoots,
    PilotField, Regime,
};
use relaxwave_core::Complex64;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn constants() -> impl Strategy<Value = PhysicalConstants> {
    prop_oneof![
        Just(PhysicalConstants::natural()),
        Just(PhysicalConstants::codata_2018()),
        (0.1f64..10.0, 0.1f64..10.0, 0.1f64..10.0).prop_map(|(h, c, g)| PhysicalConstants::new(h, c, g).unwrap()),
    ]
}

proptest! {
    #[test]
    fn vieta_identities(k in constants(), nu in -3.0f64..3.0) {
        let rest = planck_scales(&k).unwrap().rest_energy(&k);
        let v = nu * rest;
        let m = string_modes(v, &k).unwrap();
        let scale = rest / k.hbar;
        let sum = Complex64::new(-2.0 * scale, 0.0);
        let product = Complex64::new(2.0 * v * rest / (k.hbar * k.hbar), 0.0);
        prop_assert!(rel(m.omega1 + m.omega2, sum) <= 1e-12);
        if v != 0.0 {
            prop_assert!(rel(m.omega1 * m.omega2, product) <= 1e-12);
        } else {
            prop_assert_eq!(m.omega1, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn roots_solve_the_quadratic(k in constants(), nu in -3.0f64..3.0) {
        let rest = planck_scales(&k).unwrap().rest_energy(&k);
        let v = nu * rest;
        let m = string_modes(v, &k).unwrap();
        let a = k.hbar * k.hbar / (2.0 * rest);
        for w in [m.omega1, m.omega2] {
            let terms = [a * w * w, k.hbar * w, Complex64::new(v, 0.0)];
            let size = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!((terms[0] + terms[1] + terms[2]).norm() <= 1e-12 * size);
        }
        let check = reduced_equation_check(v, Complex64::new(0.6, -0.8), &[0.0, 0.5 / (rest / k.hbar)], &k).unwrap();
        prop_assert!(check <= 1e-12);
    }

    #[test]
    fn dispersion_identity(k in constants(), log_kw in -6.0f64..0.5, log_m in -2.0f64..2.0) {
        let scales = planck_scales(&k).unwrap();
        let m = scales.mass_planck * 10f64.powf(log_m);
        // wavenumber relative to the one at which the roots merge
        let k_merge = (m * scales.rest_energy(&k)).sqrt() / k.hbar;
        let kw = k_merge * 10f64.powf(log_kw);
        let roots = dispersion_omega(kw, m, &k).unwrap();
        let rest = scales.rest_energy(&k);
        let kinetic = (k.hbar * kw).powi(2) / (2.0 * m);
        match roots {
            DispersionRoots::Real { minus, plus } => {
                for p in [minus, plus] {
                    let lhs = p.energy;
                    let rhs = kinetic + p.energy * p.energy / (2.0 * rest);
                    prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
                    prop_assert_eq!(p.momentum, k.hbar * kw);
                }
                prop_assert!(minus.omega <= plus.omega);
            }
            DispersionRoots::Complex { minus, plus } => {
                prop_assert_eq!(minus, plus.conj());
                prop_assert!(kw > k_merge * 0.999);
            }
        }
    }
}

#[test]
fn regime_boundary_is_exact_and_roots_are_continuous() {
    for k in [PhysicalConstants::natural(), PhysicalConstants::codata_2018()] {
        let rest = planck_scales(&k).unwrap().rest_energy(&k);
        let half = 0.5 * rest;
        assert_eq!(string_modes(half, &k).unwrap().regime, Regime::Critical);
        let below = string_modes(half * (1.0 - f64::EPSILON), &k).unwrap();
        let above = string_modes(half * (1.0 + 2.0 * f64::EPSILON), &k).unwrap();
        assert_eq!(below.regime, Regime::Oscillatory);
        assert_eq!(above.regime, Regime::DampedComplex);
        let at = string_modes(half, &k).unwrap();
        for eps in [1e-6, 1e-10] {
            let lo = string_modes(half * (1.0 - eps), &k).unwrap();
            let hi = string_modes(half * (1.0 + eps), &k).unwrap();
            // square-root branch point: distance ∝ √ε
            for m in [lo, hi] {
                assert!(rel(m.omega1, at.omega1) <= 3.0 * eps.sqrt());
                assert!(rel(m.omega2, at.omega2) <= 3.0 * eps.sqrt());
            }
        }
    }
}

#[test]
fn pointwise_modes_follow_the_potential() {
    let k = PhysicalConstants::natural();
    let v = [0.0, 0.25, 0.5, 0.75, 1.0];
    let field = string_mode_field(&v, &k).unwrap();
    let regimes: Vec<Regime> = field.iter().map(|m| m.regime).collect();
    assert_eq!(
        regimes,
        [
            Regime::Oscillatory,
            Regime::Oscillatory,
            Regime::Critical,
            Regime::DampedComplex,
            Regime::DampedComplex
        ]
    );
}

fn pulse_field(grid: SpatialGrid, c: f64, center: f64) -> PilotField {
    let f = |x: f64| (-(x - center).powi(2) / 0.5).exp();
    let xs = grid.coordinates();
    let psi = xs.iter().map(|&x| Complex64::new(f(x), 0.0)).collect();
    // right-moving: Ψₜ = −c·f′
    let dpsi = xs
        .iter()
        .map(|&x| Complex64::new(c * 2.0 * (x - center) / 0.5 * f(x), 0.0))
        .collect();
    PilotField::new(grid, psi, dpsi, 0.0).unwrap()
}

#[test]
fn pilot_pulse_translates_rigidly() {
    let grid = SpatialGrid::periodic(-10.0, 10.0, 256).unwrap();
    for k in [
        PhysicalConstants::natural(),
        PhysicalConstants::new(1.0, 2.5, 1.0).unwrap(),
    ] {
        let start = pulse_field(grid, k.c, 0.0);
        let transit = grid.length() / k.c;
        let out = pilot_wave_advance(&start, transit / 500.0, 500, &k).unwrap();
        assert!(linf_distance(&out.psi, &start.psi) < 1e-3);
        let quarter = pilot_wave_advance(&start, transit / 500.0, 125, &k).unwrap();
        let moved = pulse_field(grid, k.c, 5.0);
        assert!(linf_distance(&quarter.psi, &moved.psi) < 1e-3);
    }
}

#[test]
fn pilot_standing_mode_over_one_period() {
    let grid = SpatialGrid::periodic(0.0, 1.0, 64).unwrap();
    let k = PhysicalConstants::natural();
    let kw = 2.0 * PI * 3.0;
    let psi = grid
        .coordinates()
        .iter()
        .map(|&x| Complex64::new((kw * x).cos(), 0.0))
        .collect();
    let start = PilotField::new(grid, psi, vec![Complex64::new(0.0, 0.0); 64], 0.0).unwrap();
    let period = 2.0 * PI / (kw * k.c);
    for (n, expect) in [(400, 1.0), (100, 0.0), (200, -1.0)] {
        let out = pilot_wave_advance(&start, period / 400.0, n, &k).unwrap();
        let predicted: Vec<Complex64> = start.psi.iter().map(|z| z * expect).collect();
        assert!(linf_distance(&out.psi, &predicted) < 1e-3, "n = {n}");
    }
}

#[test]
fn pilot_wave_runs_backwards() {
    let grid = SpatialGrid::periodic(-10.0, 10.0, 128).unwrap();
    let k = PhysicalConstants::natural();
    let start = pulse_field(grid, 1.0, 0.0);
    let fwd = pilot_wave_advance(&start, 0.05, 100, &k).unwrap();
    let back = pilot_wave_advance(&fwd, -0.05, 100, &k).unwrap();
    assert!(linf_distance(&back.psi, &start.psi) < 1e-10);
    assert!(back.time.abs() < 1e-12);
}
