//! Closed-form frequency roots and the pilot-wave equation.
//!
//! Plane waves e^{i(kx−ωt)} of the relaxation-modified Schrödinger equation
//! with τ = ħ/(2M_P c²) obey the quadratic dispersion relation
//!
//! ```text
//! ħω = (ħk)²/2m + (ħω)²/(2 M_P c²)
//! ```
//!
//! whose lower root tends to the Schrödinger value ħk²/2m. Dropping the
//! kinetic term (m ≈ M_P, pilot-wave part removed) leaves
//! (ħ²/2M_P c²)Ψₜₜ + iħΨₜ − VΨ = 0; with the ansatz Ψ = e^{iωt}u(x) (note the
//! sign) its roots are ω = (M_P c²/ħ)(−1 ± √(1 − 2V/M_P c²)), real below
//! V = M_P c²/2 and a complex pair above it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{planck_scales, PhysicalConstants};
use crate::error::{check_finite, require_positive, require_time_step, Error, Result};
use crate::grid::SpatialGrid;
use crate::telegraph::second_order_complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub k: f64,
    pub omega: f64,
    /// ħω.
    pub energy: f64,
    /// ħk.
    pub momentum: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DispersionRoots {
    Real {
        minus: DispersionPoint,
        plus: DispersionPoint,
    },
    /// Kinetic energy above M_P c²/2: the roots form a complex pair.
    Complex { minus: Complex64, plus: Complex64 },
}

impl DispersionRoots {
    pub fn minus_omega(&self) -> Complex64 {
        match self {
            DispersionRoots::Real { minus, .. } => Complex64::new(minus.omega, 0.0),
            DispersionRoots::Complex { minus, .. } => *minus,
        }
    }

    pub fn plus_omega(&self) -> Complex64 {
        match self {
            DispersionRoots::Real { plus, .. } => Complex64::new(plus.omega, 0.0),
            DispersionRoots::Complex { plus, .. } => *plus,
        }
    }
}

/// Both roots ω(k) of ħω = (ħk)²/2m + (ħω)²/(2 M_P c²), M_P from `constants`.
pub fn dispersion_omega(k: f64, mass: f64, constants: &PhysicalConstants) -> Result<DispersionRoots> {
    let scales = planck_scales(constants)?;
    dispersion_with_rest_energy(k, mass, constants.hbar, scales.rest_energy(constants))
}

/// Same relation written with the relaxation time τ = ħ/(2 M c²) instead of
/// the Planck mass.
pub fn dispersion_omega_for_tau(k: f64, mass: f64, hbar: f64, tau: f64) -> Result<DispersionRoots> {
    require_positive("tau", tau)?;
    dispersion_with_rest_energy(k, mass, hbar, hbar / (2.0 * tau))
}

fn dispersion_with_rest_energy(k: f64, mass: f64, hbar: f64, rest_energy: f64) -> Result<DispersionRoots> {
    require_positive("mass", mass)?;
    require_positive("hbar", hbar)?;
    if !k.is_finite() {
        return Err(Error::domain(format!("wavenumber must be finite, got {k}")));
    }
    let scale = rest_energy / hbar;
    let kinetic = hbar * hbar * k * k / (2.0 * mass);
    // ω = scale·(1 ± √(1 − χ)),  χ = 2·kinetic/rest_energy
    let chi = 2.0 * kinetic / rest_energy;
    let disc = 1.0 - chi;
    let point = |omega: f64, branch| DispersionPoint {
        k,
        omega,
        energy: hbar * omega,
        momentum: hbar * k,
        branch,
    };
    if disc >= 0.0 {
        let root = disc.sqrt();
        let plus = scale * (1.0 + root);
        // Vieta: ω₋ω₊ = scale²·χ, avoids cancellation at small k
        let minus = scale * chi / (1.0 + root);
        Ok(DispersionRoots::Real {
            minus: point(minus, Branch::Minus),
            plus: point(plus, Branch::Plus),
        })
    } else {
        let im = scale * (-disc).sqrt();
        Ok(DispersionRoots::Complex {
            minus: Complex64::new(scale, -im),
            plus: Complex64::new(scale, im),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// V < M_P c²/2: two distinct real roots.
    Oscillatory,
    /// V = M_P c²/2: double root −M_P c²/ħ.
    Critical,
    /// V > M_P c²/2: complex-conjugate pair.
    DampedComplex,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Oscillatory => "oscillatory",
            Regime::Critical => "critical",
            Regime::DampedComplex => "damped-complex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePair {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub regime: Regime,
    pub potential: f64,
}

/// Roots of (ħ²/2M_P c²)ω² + ħω + V = 0.
pub fn string_modes(potential: f64, constants: &PhysicalConstants) -> Result<ModePair> {
    if !potential.is_finite() {
        return Err(Error::domain(format!("potential must be finite, got {potential}")));
    }
    let scales = planck_scales(constants)?;
    let rest = scales.rest_energy(constants);
    let scale = rest / constants.hbar;
    let half = 0.5 * rest;
    let disc = (rest - 2.0 * potential) / rest;

    let (omega1, omega2, regime) = if potential < half {
        let root = disc.max(0.0).sqrt();
        // larger-magnitude root first, the other from ω₁ω₂ = 2V·scale²/rest
        let big = -(1.0 + root);
        let small = if potential == 0.0 {
            0.0
        } else {
            2.0 * (potential / rest) / big
        };
        (
            Complex64::new(scale * small, 0.0),
            Complex64::new(scale * big, 0.0),
            Regime::Oscillatory,
        )
    } else if potential == half {
        let w = Complex64::new(-scale, 0.0);
        (w, w, Regime::Critical)
    } else {
        let im = scale * (-disc).sqrt();
        (
            Complex64::new(-scale, im),
            Complex64::new(-scale, -im),
            Regime::DampedComplex,
        )
    };
    Ok(ModePair {
        omega1,
        omega2,
        regime,
        potential,
    })
}

/// Pointwise [`string_modes`] for a potential sampled on a grid.
pub fn string_mode_field(potential: &[f64], constants: &PhysicalConstants) -> Result<Vec<ModePair>> {
    potential.iter().map(|&v| string_modes(v, constants)).collect()
}

/// Largest relative residual of (ħ²/2M_P c²)Ψₜₜ + iħΨₜ − VΨ for Ψ = e^{iωt}u
/// over both roots and all sample times. Derivatives are taken analytically
/// (Ψₜ = iωΨ, Ψₜₜ = −ω²Ψ); the residual is scaled by the largest of the three
/// term magnitudes.
pub fn reduced_equation_check(
    potential: f64,
    amplitude: Complex64,
    t_samples: &[f64],
    constants: &PhysicalConstants,
) -> Result<f64> {
    let pair = string_modes(potential, constants)?;
    let scales = planck_scales(constants)?;
    let hbar = constants.hbar;
    let a = hbar * hbar / (2.0 * scales.rest_energy(constants));
    let i = Complex64::new(0.0, 1.0);

    let mut worst: f64 = 0.0;
    for omega in [pair.omega1, pair.omega2] {
        for &t in t_samples {
            let psi = (i * omega * t).exp() * amplitude;
            let dpsi = i * omega * psi;
            let d2psi = -omega * omega * psi;
            let terms = [a * d2psi, i * hbar * dpsi, -potential * psi];
            let residual = (terms[0] + terms[1] + terms[2]).norm();
            let size = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if size > 0.0 {
                worst = worst.max(residual / size);
            } else if residual > 0.0 {
                worst = f64::INFINITY;
            }
        }
    }
    Ok(worst)
}

/// Ψ and Ψₜ of the pilot wave ∂²ₓΨ − Ψₜₜ/c² = 0. Carries no mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PilotField {
    pub grid: SpatialGrid,
    pub psi: Vec<Complex64>,
    pub dpsi_dt: Vec<Complex64>,
    pub time: f64,
}

impl PilotField {
    pub fn new(grid: SpatialGrid, psi: Vec<Complex64>, dpsi_dt: Vec<Complex64>, time: f64) -> Result<Self> {
        grid.validate()?;
        grid.check_len("pilot wave", psi.len())?;
        grid.check_len("pilot wave time derivative", dpsi_dt.len())?;
        Ok(Self {
            grid,
            psi,
            dpsi_dt,
            time,
        })
    }
}

/// Advance the pilot wave by `n_steps` steps of `dt` (negative `dt` runs
/// backwards). Periodic grids, exact spectral stepping; only c enters.
pub fn pilot_wave_advance(
    field: &PilotField,
    dt: f64,
    n_steps: usize,
    constants: &PhysicalConstants,
) -> Result<PilotField> {
    constants.validate()?;
    require_time_step(dt, true)?;
    let grid = field.grid;
    if !grid.is_periodic() {
        return Err(Error::config("pilot-wave stepping needs a periodic grid"));
    }
    grid.check_len("pilot wave", field.psi.len())?;
    grid.check_len("pilot wave time derivative", field.dpsi_dt.len())?;
    let c2 = constants.c * constants.c;
    let (psi, dpsi_dt) = second_order_complex(
        &grid,
        &field.psi,
        &field.dpsi_dt,
        Complex64::new(0.0, 0.0),
        |k| Complex64::new(-c2 * k * k, 0.0),
        Complex64::new(c2, 0.0),
        dt,
        n_steps,
    )?;
    check_finite(&psi, n_steps, "pilot wave")?;
    Ok(PilotField {
        grid,
        psi,
        dpsi_dt,
        time: field.time + n_steps as f64 * dt,
    })
}
