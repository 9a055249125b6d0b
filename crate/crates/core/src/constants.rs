//! Physical constants, Planck scales and the closed-form relaxation and
//! diffusivity relations.
//!
//! The relations tie together four quantities of a transport channel: the
//! relaxation time τ, the wave speed v, the diffusivity D = τv² and the mean
//! free path λ = vτ. For a quantum particle of mass m the diffusivity is
//! ħ/2m, which fixes τ = ħ/(2mv²). At m = M_P and v = c that is τ_Planck,
//! half the Planck time.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// ħ, c and G. Values are in SI unless the caller chose natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

impl PhysicalConstants {
    pub const CODATA_HBAR: f64 = 1.054_571_817e-34;
    pub const CODATA_C: f64 = 2.997_924_58e8;
    pub const CODATA_G: f64 = 6.674_30e-11;

    /// CODATA 2018 values in SI units.
    pub fn codata_2018() -> Self {
        Self {
            hbar: Self::CODATA_HBAR,
            c: Self::CODATA_C,
            g: Self::CODATA_G,
        }
    }

    /// ħ = c = G = 1.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            g: 1.0,
        }
    }

    pub fn new(hbar: f64, c: f64, g: f64) -> Result<Self> {
        let constants = Self { hbar, c, g };
        constants.validate()?;
        Ok(constants)
    }

    /// Natural ħ = c = 1 with G chosen so that τ_Planck equals `tau`.
    ///
    /// Useful for desk-scale runs where the relaxation time is a dial rather
    /// than 1e-44 s: with ħ = c = 1, τ_Planck = √G / 2.
    pub fn natural_with_planck_tau(tau: f64) -> Result<Self> {
        require_positive("tau", tau)?;
        Self::new(1.0, 1.0, 4.0 * tau * tau)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("hbar", self.hbar)?;
        require_positive("c", self.c)?;
        require_positive("G", self.g)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata_2018()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckScales {
    pub mass_planck: f64,
    pub length_planck: f64,
    pub time_planck: f64,
    /// ħ/(2 M_P c²), which equals half the Planck time.
    pub tau_planck: f64,
}

impl PlanckScales {
    /// Rest energy M_P c².
    pub fn rest_energy(&self, constants: &PhysicalConstants) -> f64 {
        self.mass_planck * constants.c * constants.c
    }
}

pub fn planck_scales(constants: &PhysicalConstants) -> Result<PlanckScales> {
    constants.validate()?;
    let PhysicalConstants { hbar, c, g } = *constants;
    let mass_planck = (hbar * c / g).sqrt();
    Ok(PlanckScales {
        mass_planck,
        length_planck: (hbar * g / c.powi(3)).sqrt(),
        time_planck: (hbar * g / c.powi(5)).sqrt(),
        tau_planck: hbar / (2.0 * mass_planck * c * c),
    })
}

/// τ_Planck written without the Planck mass: ½·√(ħG/c⁵).
pub fn tau_planck_from_gravity(constants: &PhysicalConstants) -> Result<f64> {
    constants.validate()?;
    let PhysicalConstants { hbar, c, g } = *constants;
    Ok(0.5 * (hbar * g / c.powi(5)).sqrt())
}

/// D = ħ/2m.
pub fn quantum_diffusivity(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("mass", mass)?;
    constants.validate()?;
    Ok(constants.hbar / (2.0 * mass))
}

/// τ = ħ/(2mv²).
pub fn quantum_relaxation_time(mass: f64, speed: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("speed", speed)?;
    constants.validate()?;
    Ok(constants.hbar / (2.0 * mass * speed * speed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationChannel {
    pub label: String,
    pub tau: f64,
}

/// Independent scattering channels whose rates add.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationBudget {
    channels: Vec<RelaxationChannel>,
}

impl RelaxationBudget {
    pub fn new(channels: Vec<RelaxationChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::usage("relaxation budget needs at least one channel"));
        }
        for ch in &channels {
            require_positive(&format!("tau of channel '{}'", ch.label), ch.tau)?;
        }
        Ok(Self { channels })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(label, tau)| RelaxationChannel {
                    label: label.to_owned(),
                    tau,
                })
                .collect(),
        )
    }

    pub fn channels(&self) -> &[RelaxationChannel] {
        &self.channels
    }
}

/// Matthiessen's rule: 1/τ = Σ 1/τᵢ.
pub fn matthiessen_combine(budget: &RelaxationBudget) -> Result<f64> {
    if budget.channels.is_empty() {
        return Err(Error::usage("relaxation budget needs at least one channel"));
    }
    let rate: f64 = budget.channels.iter().map(|ch| 1.0 / ch.tau).sum();
    Ok(1.0 / rate)
}

/// (τ_min − τ)/τ_min for the combined τ, evaluated as x/(1 + x) with
/// x = Σ_{i≠min} τ_min/τᵢ so that deviations far below machine epsilon
/// survive.
pub fn matthiessen_deviation(budget: &RelaxationBudget) -> Result<f64> {
    let fastest = budget
        .channels
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.tau.total_cmp(&b.1.tau))
        .ok_or_else(|| Error::usage("relaxation budget needs at least one channel"))?;
    let x: f64 = budget
        .channels
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != fastest.0)
        .map(|(_, ch)| fastest.1.tau / ch.tau)
        .sum();
    Ok(x / (1.0 + x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportScales {
    pub diffusivity: f64,
    pub speed: f64,
    pub mean_free_path: f64,
    pub tau: f64,
}

pub fn transport_scales(tau: f64, speed: f64) -> Result<TransportScales> {
    require_positive("tau", tau)?;
    require_positive("speed", speed)?;
    Ok(TransportScales {
        diffusivity: tau * speed * speed,
        speed,
        mean_free_path: speed * tau,
        tau,
    })
}

/// v = √(D/τ).
pub fn wave_speed(diffusivity: f64, tau: f64) -> Result<f64> {
    require_positive("diffusivity", diffusivity)?;
    require_positive("tau", tau)?;
    Ok((diffusivity / tau).sqrt())
}
