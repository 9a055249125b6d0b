//! The formal substitution T ↔ Ψ, t ↔ it between the heat equation with a
//! decay term,
//!
//! ```text
//! ∂T/∂t = (ħ/2m) ∂²ₓT − (V/ħ) T,
//! ```
//!
//! and the Schrödinger equation. Evolving the heat equation by the complex
//! time z = i·t gives the Schrödinger state at real time t.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{QuantumParams, WaveField};
use crate::error::{check_finite, Error, Result};
use crate::grid::SpatialGrid;
use crate::spectral::{to_complex, Spectral};
use crate::telegraph::ThermalField;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BridgeField {
    Thermal(ThermalField),
    Wave(WaveField),
}

/// Relabel a field across the substitution: T becomes Ψ (real part only, zero
/// imaginary part) or Ψ becomes T (the real part is kept). The time label
/// is carried over unchanged; it is read along the rotated axis.
pub fn wick_bridge(field: &BridgeField) -> BridgeField {
    match field {
        BridgeField::Thermal(t) => BridgeField::Wave(WaveField {
            grid: t.grid,
            psi: to_complex(&t.values),
            dpsi_dt: None,
            time: t.time,
        }),
        BridgeField::Wave(w) => BridgeField::Thermal(ThermalField {
            grid: w.grid,
            values: w.psi.iter().map(|v| v.re).collect(),
            time: w.time,
        }),
    }
}

/// Closed-form factor of the mode e^{ikx} under the heat equation with decay
/// rate γ = V/ħ, at a possibly complex time: exp(−(Dk² + γ)·t).
pub fn thermal_mode_factor(k: f64, diffusivity: f64, decay_rate: f64, t: Complex64) -> Complex64 {
    (-(diffusivity * k * k + decay_rate) * t).exp()
}

/// Closed-form Schrödinger factor of e^{ikx} with D = ħ/2m, γ = V/ħ:
/// exp(−i(Dk² + γ)t).
pub fn quantum_mode_factor(k: f64, diffusivity: f64, decay_rate: f64, t: f64) -> Complex64 {
    Complex64::new(0.0, -(diffusivity * k * k + decay_rate) * t).exp()
}

/// Evolve ∂ₜu = (ħ/2m)∂²ₓu − (V/ħ)u over `n_steps` complex time steps `step`.
///
/// Periodic grids only; Strang split-step, exact when V is uniform.
/// `step = dt` is the thermal equation, `step = i·dt` is the Schrödinger
/// equation. Steps with a negative real part are refused (ill-posed).
pub fn evolve_fourier_with_potential(
    values: &[Complex64],
    grid: &SpatialGrid,
    params: &QuantumParams,
    step: Complex64,
    n_steps: usize,
) -> Result<Vec<Complex64>> {
    params.validate(grid)?;
    grid.check_len("field", values.len())?;
    if !grid.is_periodic() {
        return Err(Error::config("complex-time evolution needs a periodic grid"));
    }
    if !(step.is_finite() && step.re >= 0.0 && step.norm() > 0.0) {
        return Err(Error::config(format!(
            "complex time step must be nonzero with Re >= 0, got {step}"
        )));
    }
    let spectral = Spectral::new(grid);
    let d = params.diffusivity();
    let hbar = params.hbar;
    let kinetic: Vec<Complex64> = spectral
        .wavenumbers()
        .iter()
        .map(|&k| thermal_mode_factor(k, d, 0.0, step))
        .collect();
    let half: Vec<Complex64> = params
        .potential
        .iter()
        .map(|v| (-(v / hbar) * 0.5 * step).exp())
        .collect();

    let mut u = values.to_vec();
    for n in 1..=n_steps {
        for (a, h) in u.iter_mut().zip(&half) {
            *a *= h;
        }
        spectral.forward(&mut u);
        for (a, k) in u.iter_mut().zip(&kinetic) {
            *a *= k;
        }
        spectral.inverse(&mut u);
        for (a, h) in u.iter_mut().zip(&half) {
            *a *= h;
        }
        check_finite(&u, n, "field")?;
    }
    Ok(u)
}

/// Real-time heat equation with decay term V/ħ.
pub fn evolve_thermal_potential(
    field: &ThermalField,
    params: &QuantumParams,
    dt: f64,
    n_steps: usize,
) -> Result<ThermalField> {
    let out = evolve_fourier_with_potential(
        &to_complex(&field.values),
        &field.grid,
        params,
        Complex64::new(dt, 0.0),
        n_steps,
    )?;
    Ok(ThermalField {
        grid: field.grid,
        values: out.iter().map(|v| v.re).collect(),
        time: field.time + n_steps as f64 * dt,
    })
}
