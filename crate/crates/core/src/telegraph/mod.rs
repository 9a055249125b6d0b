//! Hyperbolic heat conduction in one dimension.
//!
//! The flux follows a memory law, q(t) = −∫ K(t−t′) ∂ₓT(t′) dt′ with the
//! exponential kernel K(s) = (K/τ)·e^{−s/τ}. Closing it with ∂ₜT = −∂ₓq at
//! unit heat capacity gives the telegraph equation
//!
//! ```text
//! ∂²T/∂t² + (1/τ) ∂T/∂t = (D/τ) ∂²T/∂x²,   D = K
//! ```
//!
//! which reduces to the heat equation as τ → 0 and to the undamped wave
//! equation with speed v = √(D/τ) in the ballistic limit. [`evolve_telegraph`],
//! [`evolve_fourier`] and [`evolve_wave`] integrate the three PDE forms;
//! [`evolve_memory_integral`] integrates the flux law directly and serves as
//! the independent check on the PDE form.

mod memory;
mod solver;

pub use memory::{evolve_memory_integral, memory_step_limit, FluxHistory, FluxSample, MIN_WINDOW_TAUS};
pub(crate) use solver::second_order_complex;
pub use solver::{diffusive_rate, evolve_fourier, evolve_telegraph, evolve_wave, wave_energy};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::grid::SpatialGrid;

/// Real temperature field T(x, t) on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalField {
    pub grid: SpatialGrid,
    pub values: Vec<f64>,
    pub time: f64,
}

impl ThermalField {
    pub fn new(grid: SpatialGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        grid.validate()?;
        grid.check_len("thermal field", values.len())?;
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("thermal field contains non-finite values"));
        }
        Ok(Self { grid, values, time })
    }

    /// Sample `f` at the grid nodes (node 0 forced to zero on Dirichlet grids).
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values: Vec<f64> = grid.coordinates().into_iter().map(f).collect();
        if !grid.is_periodic() {
            values[0] = 0.0;
        }
        Self::new(grid, values, 0.0)
    }

    pub fn zeros(grid: SpatialGrid) -> Result<Self> {
        Self::new(grid, vec![0.0; grid.n_points], 0.0)
    }

    /// ∫ T dx.
    pub fn total(&self) -> f64 {
        crate::grid::integrate(&self.grid, self.values.iter().copied())
    }
}

/// Relaxation time, diffusivity and kernel strength of one transport channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TelegraphParams {
    pub tau: f64,
    pub diffusivity: f64,
    /// K of the memory kernel. Equals the diffusivity under the unit heat
    /// capacity closure.
    pub kernel_strength: f64,
    /// τ → ∞ sentinel: the kernel is a constant and the dynamics is the
    /// undamped wave equation with speed √(D/τ).
    #[serde(default)]
    pub ballistic: bool,
}

impl TelegraphParams {
    pub fn new(tau: f64, diffusivity: f64) -> Result<Self> {
        let params = Self {
            tau,
            diffusivity,
            kernel_strength: diffusivity,
            ballistic: false,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn ballistic(tau: f64, diffusivity: f64) -> Result<Self> {
        let params = Self {
            ballistic: true,
            ..Self::new(tau, diffusivity)?
        };
        require_positive("tau of a ballistic channel", tau)?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::domain(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        require_positive("diffusivity", self.diffusivity)?;
        require_positive("kernel strength", self.kernel_strength)
    }

    /// v = √(D/τ), or `None` when τ = 0.
    pub fn speed(&self) -> Option<f64> {
        (self.tau > 0.0).then(|| (self.diffusivity / self.tau).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// Delta kernel, τ = 0: Fourier heat equation.
    Diffusion,
    /// Constant kernel, τ → ∞: ballistic wave equation.
    Wave,
    /// Exponential kernel: telegraph equation.
    DampedWave,
}

pub fn classify_kernel(params: &TelegraphParams) -> KernelKind {
    if params.ballistic {
        KernelKind::Wave
    } else if params.tau == 0.0 {
        KernelKind::Diffusion
    } else {
        KernelKind::DampedWave
    }
}

/// (K/τ)·e^{−lag/τ}.
pub fn kernel_eval(lag: f64, params: &TelegraphParams) -> Result<f64> {
    if !(lag >= 0.0) {
        return Err(Error::domain(format!("kernel lag must be >= 0, got {lag}")));
    }
    require_positive("tau", params.tau)?;
    Ok(params.kernel_strength / params.tau * (-lag / params.tau).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        let p = TelegraphParams::new(1.0, 1.0).unwrap();
        assert_eq!(kernel_eval(0.0, &p).unwrap(), 1.0);
        let p = TelegraphParams::new(0.3, 2.0).unwrap();
        let want = 2.0 / 0.3 * (-1.0f64).exp();
        assert!((kernel_eval(0.3, &p).unwrap() - want).abs() < 1e-15);
        assert!(matches!(kernel_eval(-1e-3, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn kernel_integrates_to_strength() {
        // composite Simpson on [0, 60τ] in the substituted variable
        for tau in [1e-3, 0.05, 1.0, 7.5] {
            let p = TelegraphParams::new(tau, 1.3).unwrap();
            let upper = 60.0 * tau;
            let n = 20_000;
            let h = upper / n as f64;
            let mut sum = kernel_eval(0.0, &p).unwrap() + kernel_eval(upper, &p).unwrap();
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * kernel_eval(i as f64 * h, &p).unwrap();
            }
            let integral = sum * h / 3.0;
            assert!(((integral - 1.3) / 1.3).abs() < 1e-10, "tau={tau}: {integral}");
        }
    }

    #[test]
    fn kernel_is_monotone() {
        let p = TelegraphParams::new(0.2, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..100 {
            let k = kernel_eval(i as f64 * 0.01, &p).unwrap();
            assert!(k >= 0.0 && k < last);
            last = k;
        }
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_kernel(&TelegraphParams::new(0.0, 1.0).unwrap()),
            KernelKind::Diffusion
        );
        assert_eq!(
            classify_kernel(&TelegraphParams::ballistic(1.0, 1.0).unwrap()),
            KernelKind::Wave
        );
        assert_eq!(
            classify_kernel(&TelegraphParams::new(1.0, 1.0).unwrap()),
            KernelKind::DampedWave
        );
    }

    #[test]
    fn params_validation() {
        assert!(TelegraphParams::new(-1.0, 1.0).is_err());
        assert!(TelegraphParams::new(1.0, 0.0).is_err());
        assert!(TelegraphParams::ballistic(0.0, 1.0).is_err());
        assert_eq!(TelegraphParams::new(4.0, 1.0).unwrap().speed(), Some(0.5));
        assert_eq!(TelegraphParams::new(0.0, 1.0).unwrap().speed(), None);
    }
}
