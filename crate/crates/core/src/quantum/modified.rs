use num_complex::Complex64;

use super::{evolve_se, initial_time_derivative, QuantumParams, WaveField};
use crate::error::{check_finite, require_time_step, Error, Result};
use crate::fd::FdOperator;
use crate::grid::SpatialGrid;
use crate::propagator::ModePropagator;
use crate::spectral::Spectral;

/// Step bound for a non-uniform potential: dt ≤ τ/10.
pub const STEPS_PER_TAU: f64 = 10.0;

/// Largest mode energy (in units of ħ/τ) for which both frequency roots of the
/// relaxation-modified equation are real: E ≤ ħ/(4τ). Above it one root
/// grows exponentially.
pub fn modified_se_mode_limit(params: &QuantumParams) -> f64 {
    params.hbar / (4.0 * params.tau)
}

/// Advance iħΨ' = VΨ − (ħ²/2m)∂²ₓΨ − τħΨ'' as a first-order system in (Ψ, Ψ').
///
/// Periodic grids step each Fourier mode with its exact propagator; a
/// non-uniform V is Strang-split off as a kick on Ψ' and then requires
/// dt ≤ τ/10. Dirichlet grids use 3-point differences with trapezoidal
/// stepping. τ = 0 routes to [`evolve_se`].
pub fn evolve_modified_se(field: &WaveField, params: &QuantumParams, dt: f64, n_steps: usize) -> Result<WaveField> {
    let grid = field.grid;
    params.validate(&grid)?;
    if params.tau == 0.0 {
        let mut out = evolve_se(field, params, dt, n_steps)?;
        if out.dpsi_dt.is_some() {
            out.dpsi_dt = Some(initial_time_derivative(&out, params)?);
        }
        return Ok(out);
    }
    let dpsi_dt = field
        .dpsi_dt
        .as_ref()
        .ok_or_else(|| Error::usage("the relaxation-modified equation needs dpsi_dt; see initial_time_derivative"))?;
    grid.check_len("time derivative", dpsi_dt.len())?;
    require_time_step(dt, false)?;
    check_mode_limit(&grid, params)?;

    let uniform = params.uniform_potential();
    if uniform.is_none() && dt > params.tau / STEPS_PER_TAU {
        return Err(Error::config(format!(
            "dt = {dt} exceeds tau/{STEPS_PER_TAU} = {} for a non-uniform potential",
            params.tau / STEPS_PER_TAU
        )));
    }

    let (psi, dpsi) = if grid.is_periodic() {
        spectral_path(field, dpsi_dt, params, uniform, dt, n_steps)?
    } else {
        dirichlet_path(field, dpsi_dt, params, dt, n_steps)?
    };

    Ok(WaveField {
        grid,
        psi,
        dpsi_dt: Some(dpsi),
        time: field.time + n_steps as f64 * dt,
    })
}

fn check_mode_limit(grid: &SpatialGrid, params: &QuantumParams) -> Result<()> {
    let v_max = params.potential.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e_max = params.hbar * params.hbar * grid.max_laplacian_symbol() / (2.0 * params.mass) + v_max;
    let limit = modified_se_mode_limit(params);
    if e_max > limit {
        return Err(Error::config(format!(
            "grid resolves mode energies up to {e_max:.4e} but the relaxation term keeps roots \
             real only below hbar/(4 tau) = {limit:.4e}; coarsen the grid or reduce tau"
        )));
    }
    Ok(())
}

fn spectral_path(
    field: &WaveField,
    dpsi_dt: &[Complex64],
    params: &QuantumParams,
    uniform: Option<f64>,
    dt: f64,
    n_steps: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let spectral = Spectral::new(&field.grid);
    let (hbar, tau) = (params.hbar, params.tau);
    let v_mean = uniform.unwrap_or_else(|| params.potential.iter().sum::<f64>() / params.potential.len() as f64);
    let p = Complex64::new(0.0, -1.0 / tau);
    let props: Vec<ModePropagator> = spectral
        .wavenumbers()
        .iter()
        .map(|k| {
            let energy = hbar * hbar * k * k / (2.0 * params.mass) + v_mean;
            ModePropagator::new(p, Complex64::new(energy / (tau * hbar), 0.0), dt)
        })
        .collect();

    let advance = |u: &mut [Complex64], w: &mut [Complex64]| {
        for ((a, b), prop) in u.iter_mut().zip(w.iter_mut()).zip(&props) {
            (*a, *b) = prop.apply(*a, *b);
        }
    };

    if uniform.is_some() {
        let mut u = spectral.analyze(&field.psi);
        let mut w = spectral.analyze(dpsi_dt);
        for step in 1..=n_steps {
            advance(&mut u, &mut w);
            check_finite(&u, step, "wave function")?;
        }
        return Ok((spectral.synthesize(&u), spectral.synthesize(&w)));
    }

    // kick: Ψ'' gains (V − V̄)Ψ/(τħ) over half a step
    let kick: Vec<f64> = params
        .potential
        .iter()
        .map(|v| 0.5 * dt * (v - v_mean) / (tau * hbar))
        .collect();
    let mut u = field.psi.clone();
    let mut w = dpsi_dt.to_vec();
    for step in 1..=n_steps {
        for ((wi, ui), k) in w.iter_mut().zip(&u).zip(&kick) {
            *wi += k * ui;
        }
        spectral.forward(&mut u);
        spectral.forward(&mut w);
        advance(&mut u, &mut w);
        spectral.inverse(&mut u);
        spectral.inverse(&mut w);
        for ((wi, ui), k) in w.iter_mut().zip(&u).zip(&kick) {
            *wi += k * ui;
        }
        check_finite(&u, step, "wave function")?;
    }
    Ok((u, w))
}

fn dirichlet_path(
    field: &WaveField,
    dpsi_dt: &[Complex64],
    params: &QuantumParams,
    dt: f64,
    n_steps: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let (hbar, tau) = (params.hbar, params.tau);
    // Ψ'' = −(i/τ)Ψ' + HΨ/(τħ)
    let shift = params
        .potential
        .iter()
        .map(|v| Complex64::new(v / (tau * hbar), 0.0))
        .collect();
    let op = FdOperator::new(
        &field.grid,
        Complex64::new(-hbar / (2.0 * params.mass * tau), 0.0),
        shift,
    );
    let p = Complex64::new(0.0, -1.0 / tau);
    let mut u = field.psi.clone();
    let mut w = dpsi_dt.to_vec();
    u[0] = Complex64::new(0.0, 0.0);
    w[0] = Complex64::new(0.0, 0.0);
    for step in 1..=n_steps {
        op.second_order_step(p, &mut u, &mut w, dt);
        check_finite(&u, step, "wave function")?;
    }
    Ok((u, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;

    fn gaussian(grid: SpatialGrid) -> WaveField {
        WaveField::from_fn(grid, |x| Complex64::new(0.0, 1.0 * x).exp() * (-x * x / 2.0).exp()).unwrap()
    }

    #[test]
    fn zero_tau_matches_se_exactly() {
        let g = SpatialGrid::periodic(-20.0, 20.0, 128).unwrap();
        let p = QuantumParams::free(&g, 1.0, &PhysicalConstants::natural())
            .unwrap()
            .with_tau(0.0);
        let f = gaussian(g);
        let a = evolve_modified_se(&f, &p, 0.01, 50).unwrap();
        let b = evolve_se(&f, &p, 0.01, 50).unwrap();
        assert_eq!(a.psi, b.psi);
    }

    #[test]
    fn missing_derivative_is_usage_error() {
        let g = SpatialGrid::periodic(-20.0, 20.0, 128).unwrap();
        let p = QuantumParams::free(&g, 1.0, &PhysicalConstants::natural())
            .unwrap()
            .with_tau(1e-3);
        assert!(matches!(
            evolve_modified_se(&gaussian(g), &p, 1e-4, 1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn unresolved_growing_modes_are_rejected() {
        let g = SpatialGrid::periodic(-20.0, 20.0, 1024).unwrap();
        let p = QuantumParams::free(&g, 1.0, &PhysicalConstants::natural())
            .unwrap()
            .with_tau(1e-2);
        let f = gaussian(g);
        let d = initial_time_derivative(&f, &p).unwrap();
        let f = f.with_time_derivative(d).unwrap();
        assert!(matches!(
            evolve_modified_se(&f, &p, 1e-4, 1),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn non_uniform_potential_needs_small_step() {
        let g = SpatialGrid::periodic(-20.0, 20.0, 128).unwrap();
        let pot = g.coordinates().iter().map(|x| 0.01 * x * x).collect();
        let p = QuantumParams::new(1.0, pot, &PhysicalConstants::natural())
            .unwrap()
            .with_tau(1e-3);
        let f = gaussian(g);
        let d = initial_time_derivative(&f, &p).unwrap();
        let f = f.with_time_derivative(d).unwrap();
        assert!(matches!(
            evolve_modified_se(&f, &p, 1e-3, 1),
            Err(Error::Configuration(_))
        ));
        assert!(evolve_modified_se(&f, &p, 1e-4, 10).is_ok());
    }

    #[test]
    fn dirichlet_and_periodic_agree_for_localized_packet() {
        let tau = 1e-3;
        let make = |g: SpatialGrid| {
            let p = QuantumParams::free(&g, 1.0, &PhysicalConstants::natural())
                .unwrap()
                .with_tau(tau);
            let f = gaussian(g);
            let d = initial_time_derivative(&f, &p).unwrap();
            (f.with_time_derivative(d).unwrap(), p)
        };
        let (fp, pp) = make(SpatialGrid::periodic(-20.0, 20.0, 256).unwrap());
        let (fd, pd) = make(SpatialGrid::dirichlet(-20.0, 20.0, 256).unwrap());
        let a = evolve_modified_se(&fp, &pp, 1e-3, 500).unwrap();
        let b = evolve_modified_se(&fd, &pd, 1e-3, 500).unwrap();
        // x = 0; the 3-point stencil at dx = 0.16 limits agreement
        assert!(
            (a.psi[128] - b.psi[128]).norm() < 1e-2,
            "{} vs {}",
            a.psi[128],
            b.psi[128]
        );
    }
}
