use num_complex::Complex64;

use super::{QuantumParams, SeScheme, WaveField};
use crate::error::{check_finite, require_time_step, Result};
use crate::fd::FdOperator;
use crate::spectral::Spectral;

/// Advance iħ∂ₜΨ = −(ħ²/2m)∂²ₓΨ + VΨ by `n_steps` steps of `dt`.
///
/// Both schemes are unitary per step and second order in `dt`; the
/// split-step scheme is exact when V is uniform. `tau` is ignored.
pub fn evolve_se(field: &WaveField, params: &QuantumParams, dt: f64, n_steps: usize) -> Result<WaveField> {
    let grid = field.grid;
    params.validate(&grid)?;
    grid.check_len("wave function", field.psi.len())?;
    require_time_step(dt, true)?;

    let psi = match params.resolve_scheme(&grid)? {
        SeScheme::CrankNicolson => crank_nicolson(field, params, dt, n_steps)?,
        _ => split_step(field, params, dt, n_steps)?,
    };

    Ok(WaveField {
        grid,
        psi,
        dpsi_dt: field.dpsi_dt.clone(),
        time: field.time + n_steps as f64 * dt,
    })
}

fn split_step(field: &WaveField, params: &QuantumParams, dt: f64, n_steps: usize) -> Result<Vec<Complex64>> {
    let spectral = Spectral::new(&field.grid);
    let hbar = params.hbar;
    let kinetic: Vec<Complex64> = spectral
        .wavenumbers()
        .iter()
        .map(|k| Complex64::new(0.0, -hbar * k * k / (2.0 * params.mass) * dt).exp())
        .collect();

    if let Some(v) = params.uniform_potential() {
        // the two factors commute: one transform, exact phase per mode
        let phase = Complex64::new(0.0, -v * dt / hbar).exp();
        let mut hat = spectral.analyze(&field.psi);
        for step in 1..=n_steps {
            for (h, k) in hat.iter_mut().zip(&kinetic) {
                *h *= k * phase;
            }
            check_finite(&hat, step, "wave function")?;
        }
        return Ok(spectral.synthesize(&hat));
    }

    let half_potential: Vec<Complex64> = params
        .potential
        .iter()
        .map(|v| Complex64::new(0.0, -v * dt / (2.0 * hbar)).exp())
        .collect();
    let mut psi = field.psi.clone();
    for step in 1..=n_steps {
        for (p, h) in psi.iter_mut().zip(&half_potential) {
            *p *= h;
        }
        spectral.forward(&mut psi);
        for (p, k) in psi.iter_mut().zip(&kinetic) {
            *p *= k;
        }
        spectral.inverse(&mut psi);
        for (p, h) in psi.iter_mut().zip(&half_potential) {
            *p *= h;
        }
        check_finite(&psi, step, "wave function")?;
    }
    Ok(psi)
}

fn crank_nicolson(field: &WaveField, params: &QuantumParams, dt: f64, n_steps: usize) -> Result<Vec<Complex64>> {
    let hbar = params.hbar;
    // u' = M u,  M = (iħ/2m)∂²ₓ − (i/ħ)V
    let shift = params
        .potential
        .iter()
        .map(|v| Complex64::new(0.0, -v / hbar))
        .collect();
    let op = FdOperator::new(&field.grid, Complex64::new(0.0, hbar / (2.0 * params.mass)), shift);
    let mut psi = field.psi.clone();
    if !field.grid.is_periodic() {
        psi[0] = Complex64::new(0.0, 0.0);
    }
    for step in 1..=n_steps {
        op.crank_nicolson_step(&mut psi, dt);
        check_finite(&psi, step, "wave function")?;
    }
    Ok(psi)
}
