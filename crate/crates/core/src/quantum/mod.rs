//! The Schrödinger equation, its relaxation-modified second-order form
//!
//! ```text
//! iħ ∂Ψ/∂t = VΨ − (ħ²/2m) ∂²ₓΨ − τħ ∂²Ψ/∂t²
//! ```
//!
//! and the formal bridge between them and the Fourier heat equation under
//! T ↔ Ψ, t ↔ it.

mod decomposition;
mod modified;
mod se;
mod wick;

pub use decomposition::{decomposition_residual, decomposition_terms, second_time_derivative, DecompositionTerms};
pub use modified::{evolve_modified_se, modified_se_mode_limit};
pub use se::evolve_se;
pub use wick::{
    evolve_fourier_with_potential, evolve_thermal_potential, quantum_mode_factor, thermal_mode_factor, wick_bridge,
    BridgeField,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{planck_scales, PhysicalConstants};
use crate::error::{require_positive, Error, Result};
use crate::fd::FdOperator;
use crate::grid::SpatialGrid;
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeScheme {
    /// Split-step spectral on periodic grids, Crank-Nicolson on Dirichlet grids.
    #[default]
    Auto,
    /// Strang split-step Fourier. Periodic grids only; exact for uniform V.
    SplitStep,
    /// 3-point Laplacian with Crank-Nicolson stepping.
    CrankNicolson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub mass: f64,
    /// V(x) sampled at the grid nodes. Static.
    pub potential: Vec<f64>,
    /// Relaxation time of the second-order term.
    pub tau: f64,
    pub hbar: f64,
    #[serde(default)]
    pub scheme: SeScheme,
}

impl QuantumParams {
    /// τ defaults to τ_Planck of `constants`.
    pub fn new(mass: f64, potential: Vec<f64>, constants: &PhysicalConstants) -> Result<Self> {
        let tau = planck_scales(constants)?.tau_planck;
        let params = Self {
            mass,
            potential,
            tau,
            hbar: constants.hbar,
            scheme: SeScheme::Auto,
        };
        params.validate_scalars()?;
        Ok(params)
    }

    pub fn free(grid: &SpatialGrid, mass: f64, constants: &PhysicalConstants) -> Result<Self> {
        Self::new(mass, vec![0.0; grid.n_points], constants)
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_scheme(mut self, scheme: SeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    fn validate_scalars(&self) -> Result<()> {
        require_positive("mass", self.mass)?;
        require_positive("hbar", self.hbar)?;
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::domain(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        if !self.potential.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("potential contains non-finite values"));
        }
        Ok(())
    }

    pub fn validate(&self, grid: &SpatialGrid) -> Result<()> {
        self.validate_scalars()?;
        grid.check_len("potential", self.potential.len())
    }

    /// ħ/2m.
    pub fn diffusivity(&self) -> f64 {
        self.hbar / (2.0 * self.mass)
    }

    fn uniform_potential(&self) -> Option<f64> {
        let first = *self.potential.first()?;
        self.potential.iter().all(|&v| v == first).then_some(first)
    }

    fn resolve_scheme(&self, grid: &SpatialGrid) -> Result<SeScheme> {
        match (self.scheme, grid.is_periodic()) {
            (SeScheme::Auto, true) => Ok(SeScheme::SplitStep),
            (SeScheme::Auto, false) => Ok(SeScheme::CrankNicolson),
            (SeScheme::SplitStep, false) => Err(Error::config("split-step stepping needs a periodic grid")),
            (scheme, _) => Ok(scheme),
        }
    }
}

/// Ψ(x, t) and, for the second-order equation, ∂Ψ/∂t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveField {
    pub grid: SpatialGrid,
    pub psi: Vec<Complex64>,
    pub dpsi_dt: Option<Vec<Complex64>>,
    pub time: f64,
}

impl WaveField {
    pub fn new(grid: SpatialGrid, psi: Vec<Complex64>, time: f64) -> Result<Self> {
        grid.validate()?;
        grid.check_len("wave function", psi.len())?;
        if !psi.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("wave function contains non-finite values"));
        }
        Ok(Self {
            grid,
            psi,
            dpsi_dt: None,
            time,
        })
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let mut psi: Vec<Complex64> = grid.coordinates().into_iter().map(f).collect();
        if !grid.is_periodic() {
            psi[0] = Complex64::new(0.0, 0.0);
        }
        Self::new(grid, psi, 0.0)
    }

    pub fn with_time_derivative(mut self, dpsi_dt: Vec<Complex64>) -> Result<Self> {
        self.grid.check_len("time derivative", dpsi_dt.len())?;
        self.dpsi_dt = Some(dpsi_dt);
        Ok(self)
    }

    /// ∫ |Ψ|² dx.
    pub fn norm(&self) -> f64 {
        crate::grid::integrate(&self.grid, self.psi.iter().map(|v| v.norm_sqr()))
    }
}

/// −(ħ²/2m)∂²ₓΨ + VΨ, spectral on periodic grids, 3-point on Dirichlet grids.
pub(crate) fn apply_hamiltonian(grid: &SpatialGrid, params: &QuantumParams, psi: &[Complex64]) -> Vec<Complex64> {
    let kinetic = -params.hbar * params.hbar / (2.0 * params.mass);
    if grid.is_periodic() {
        let lap = Spectral::new(grid).second_derivative(psi);
        lap.iter()
            .zip(psi)
            .zip(&params.potential)
            .map(|((l, p), v)| kinetic * l + v * p)
            .collect()
    } else {
        let shift = params.potential.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FdOperator::new(grid, Complex64::new(kinetic, 0.0), shift).apply(psi)
    }
}

/// ∂Ψ/∂t at t = 0 taken from the τ = 0 dynamics: (1/iħ)·HΨ₀.
///
/// Supplies the second initial condition of the relaxation-modified equation
/// so that its τ → 0 limit meets the ordinary Schrödinger evolution.
pub fn initial_time_derivative(field: &WaveField, params: &QuantumParams) -> Result<Vec<Complex64>> {
    params.validate(&field.grid)?;
    let h = apply_hamiltonian(&field.grid, params, &field.psi);
    let factor = Complex64::new(0.0, -1.0 / params.hbar);
    Ok(h.into_iter().map(|v| factor * v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    #[test]
    fn default_tau_is_planck() {
        let g = SpatialGrid::periodic(0.0, 1.0, 16).unwrap();
        let p = QuantumParams::free(&g, 1.0, &nat()).unwrap();
        assert_eq!(p.tau, 0.5);
    }

    #[test]
    fn derivative_of_uniform_state_vanishes() {
        let g = SpatialGrid::periodic(0.0, 1.0, 16).unwrap();
        let p = QuantumParams::free(&g, 1.0, &nat()).unwrap();
        let f = WaveField::from_fn(g, |_| Complex64::new(0.7, -0.2)).unwrap();
        let d = initial_time_derivative(&f, &p).unwrap();
        assert!(d.iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn derivative_of_plane_wave() {
        let g = SpatialGrid::periodic(0.0, 2.0 * std::f64::consts::PI, 32).unwrap();
        let m = 0.8;
        let p = QuantumParams::free(&g, m, &nat()).unwrap();
        let k = 3.0;
        let f = WaveField::from_fn(g, |x| Complex64::new(0.0, k * x).exp()).unwrap();
        let d = initial_time_derivative(&f, &p).unwrap();
        let factor = Complex64::new(0.0, -k * k / (2.0 * m));
        for (got, psi) in d.iter().zip(&f.psi) {
            assert!((got - factor * psi).norm() < 1e-12);
        }
    }

    #[test]
    fn split_step_needs_periodic_grid() {
        let g = SpatialGrid::dirichlet(0.0, 1.0, 16).unwrap();
        let p = QuantumParams::free(&g, 1.0, &nat())
            .unwrap()
            .with_scheme(SeScheme::SplitStep);
        assert!(p.resolve_scheme(&g).is_err());
    }
}
