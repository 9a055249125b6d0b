//! Add-and-subtract split of the Planck-relaxation equation.
//!
//! Writing τ_P = ħ/(2M_P c²), the residual of
//!
//! ```text
//! iħΨₜ = VΨ − (ħ²/2m)Ψₓₓ − τ_P ħ Ψₜₜ                       (full)
//! ```
//!
//! equals the residual of the mass-shifted Schrödinger equation
//!
//! ```text
//! iħΨₜ = −(ħ²/2m)Ψₓₓ + VΨ − (ħ²/2M_P)Ψₓₓ                     (reduced)
//! ```
//!
//! plus (ħ²/2M_P) times the d'Alembert residual Ψₜₜ/c² − Ψₓₓ of the
//! mass-independent pilot-wave equation. The identity is algebraic and holds
//! for any field; neither piece has to vanish on its own.

use num_complex::Complex64;

use super::{QuantumParams, WaveField};
use crate::constants::{planck_scales, PhysicalConstants};
use crate::error::{Error, Result};
use crate::fd::FdOperator;
use crate::grid::SpatialGrid;
use crate::spectral::Spectral;

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerms {
    /// LHS − RHS of the full equation.
    pub full: Vec<Complex64>,
    /// LHS − RHS of the reduced equation.
    pub reduced: Vec<Complex64>,
    /// Ψₜₜ/c² − Ψₓₓ.
    pub pilot: Vec<Complex64>,
    /// ħ²/2M_P.
    pub pilot_weight: f64,
}

/// (Ψ'(t₂) − Ψ'(t₁))/(t₂ − t₁) from two stored states.
pub fn second_time_derivative(earlier: &WaveField, later: &WaveField) -> Result<Vec<Complex64>> {
    let (a, b) = match (&earlier.dpsi_dt, &later.dpsi_dt) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::usage("both states need dpsi_dt")),
    };
    let dt = later.time - earlier.time;
    if !(dt > 0.0) || !earlier.grid.same_as(&later.grid) {
        return Err(Error::usage("states must share a grid and be ordered in time"));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (y - x) / dt).collect())
}

fn laplacian(grid: &SpatialGrid, psi: &[Complex64]) -> Vec<Complex64> {
    if grid.is_periodic() {
        Spectral::new(grid).second_derivative(psi)
    } else {
        let zero = vec![Complex64::new(0.0, 0.0); grid.n_points];
        FdOperator::new(grid, Complex64::new(1.0, 0.0), zero).apply(psi)
    }
}

pub fn decomposition_terms(
    field: &WaveField,
    d2psi_dt2: Option<&[Complex64]>,
    params: &QuantumParams,
    constants: &PhysicalConstants,
) -> Result<DecompositionTerms> {
    let grid = field.grid;
    params.validate(&grid)?;
    let dpsi = field
        .dpsi_dt
        .as_deref()
        .ok_or_else(|| Error::usage("decomposition needs dpsi_dt"))?;
    let d2psi =
        d2psi_dt2.ok_or_else(|| Error::usage("decomposition needs a second time derivative (two stored steps)"))?;
    grid.check_len("time derivative", dpsi.len())?;
    grid.check_len("second time derivative", d2psi.len())?;

    let scales = planck_scales(constants)?;
    let hbar = constants.hbar;
    let c2 = constants.c * constants.c;
    let m = params.mass;
    let big_m = scales.mass_planck;
    let tau_p = scales.tau_planck;
    let i_hbar = Complex64::new(0.0, hbar);
    let lap = laplacian(&grid, &field.psi);

    let mut full = Vec::with_capacity(grid.n_points);
    let mut reduced = Vec::with_capacity(grid.n_points);
    let mut pilot = Vec::with_capacity(grid.n_points);
    for i in 0..grid.n_points {
        let (psi, v) = (field.psi[i], params.potential[i]);
        let lhs = i_hbar * dpsi[i];
        full.push(lhs - (v * psi - hbar * hbar / (2.0 * m) * lap[i] - tau_p * hbar * d2psi[i]));
        reduced.push(lhs - (-hbar * hbar / (2.0 * m) * lap[i] + v * psi - hbar * hbar / (2.0 * big_m) * lap[i]));
        pilot.push(d2psi[i] / c2 - lap[i]);
    }
    Ok(DecompositionTerms {
        full,
        reduced,
        pilot,
        pilot_weight: hbar * hbar / (2.0 * big_m),
    })
}

/// L2 norm of full − (reduced + (ħ²/2M_P)·pilot).
pub fn decomposition_residual(
    field: &WaveField,
    d2psi_dt2: Option<&[Complex64]>,
    params: &QuantumParams,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let t = decomposition_terms(field, d2psi_dt2, params, constants)?;
    let sum: f64 = t
        .full
        .iter()
        .zip(&t.reduced)
        .zip(&t.pilot)
        .map(|((f, r), p)| (f - (r + t.pilot_weight * p)).norm_sqr())
        .sum();
    Ok((sum * field.grid.dx()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_history() {
        let g = SpatialGrid::periodic(0.0, 1.0, 16).unwrap();
        let k = PhysicalConstants::natural();
        let p = QuantumParams::free(&g, 1.0, &k).unwrap();
        let f = WaveField::from_fn(g, |x| Complex64::new(x.sin(), 0.0)).unwrap();
        assert!(matches!(decomposition_residual(&f, None, &p, &k), Err(Error::Usage(_))));
        let f = f.with_time_derivative(vec![Complex64::new(0.0, 0.0); 16]).unwrap();
        assert!(matches!(decomposition_residual(&f, None, &p, &k), Err(Error::Usage(_))));
    }

    #[test]
    fn second_derivative_from_two_states() {
        let g = SpatialGrid::periodic(0.0, 1.0, 8).unwrap();
        let mut a = WaveField::from_fn(g, |_| Complex64::new(0.0, 0.0)).unwrap();
        a.dpsi_dt = Some(vec![Complex64::new(1.0, 0.0); 8]);
        let mut b = a.clone();
        b.time = 0.5;
        b.dpsi_dt = Some(vec![Complex64::new(2.0, 1.0); 8]);
        let d = second_time_derivative(&a, &b).unwrap();
        assert_eq!(d[3], Complex64::new(2.0, 2.0));
        assert!(second_time_derivative(&b, &a).is_err());
    }
}
