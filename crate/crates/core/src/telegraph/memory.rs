//! Direct integration of the memory flux law, without passing through the
//! telegraph PDE.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{TelegraphParams, ThermalField};
use crate::error::{check_finite, require_positive, require_time_step, Error, Result};
use crate::grid::SpatialGrid;
use crate::spectral::{to_complex, Spectral};

/// Minimum history window in units of τ.
pub const MIN_WINDOW_TAUS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSample {
    pub time: f64,
    /// ∂ₓT at this time. On Dirichlet grids entry i is the face value
    /// between nodes i and i+1.
    pub gradient: Vec<f64>,
}

/// Stored temperature gradients over a sliding window ending at the current
/// time. The newest sample always describes the current field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxHistory {
    window: f64,
    samples: VecDeque<FluxSample>,
}

impl FluxHistory {
    pub fn new(window: f64, samples: Vec<FluxSample>) -> Result<Self> {
        require_positive("history window", window)?;
        if samples.is_empty() {
            return Err(Error::usage("flux history needs at least one sample"));
        }
        if samples.windows(2).any(|w| !(w[1].time > w[0].time)) {
            return Err(Error::usage("flux history times must be strictly increasing"));
        }
        let len = samples[0].gradient.len();
        if samples.iter().any(|s| s.gradient.len() != len) {
            return Err(Error::usage("flux history samples differ in length"));
        }
        Ok(Self {
            window,
            samples: samples.into(),
        })
    }

    /// History in which the field has sat unchanged for all earlier times,
    /// sampled every `spacing` over `window`.
    pub fn constant(field: &ThermalField, window: f64, spacing: f64) -> Result<Self> {
        require_positive("history window", window)?;
        require_positive("history spacing", spacing)?;
        let spectral = field.grid.is_periodic().then(|| Spectral::new(&field.grid));
        let gradient = gradient(&field.grid, spectral.as_ref(), &field.values);
        let intervals = (window / spacing).ceil().max(1.0) as usize;
        let samples = (0..=intervals)
            .map(|j| FluxSample {
                time: field.time - (intervals - j) as f64 * spacing,
                gradient: gradient.clone(),
            })
            .collect();
        Self::new(window, samples)
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn samples(&self) -> impl Iterator<Item = &FluxSample> {
        self.samples.iter()
    }

    pub fn latest_time(&self) -> f64 {
        self.samples.back().map(|s| s.time).unwrap_or(f64::NAN)
    }

    fn push(&mut self, sample: FluxSample) {
        self.samples.push_back(sample);
        let newest = self.latest_time();
        while self.samples.len() > 2 && newest - self.samples[1].time >= self.window {
            self.samples.pop_front();
        }
    }

    fn replace_latest(&mut self, gradient: Vec<f64>) {
        if let Some(last) = self.samples.back_mut() {
            last.gradient = gradient;
        }
    }

    /// q at the newest sample time.
    ///
    /// Each interval integrates the kernel exactly against the linear
    /// interpolant of the stored gradients (trapezoidal in the gradient);
    /// the part beyond the oldest sample is K·e^{−lag/τ}·(oldest gradient).
    fn flux(&self, params: &TelegraphParams) -> Vec<f64> {
        let tau = params.tau;
        let strength = params.kernel_strength;
        let t = self.latest_time();
        let n = self.samples[0].gradient.len();
        let mut q = vec![0.0; n];

        let oldest = &self.samples[0];
        let tail = strength * (-(t - oldest.time) / tau).exp();
        axpy(&mut q, -tail, &oldest.gradient);

        for (older, newer) in self.samples.iter().zip(self.samples.iter().skip(1)) {
            let near_lag = t - newer.time;
            let r = (newer.time - older.time) / tau;
            let scale = strength * (-near_lag / tau).exp();
            let ramp = phi1_over_r(r);
            let w_old = scale * ramp;
            let w_new = scale * (-(-r).exp_m1() - ramp);
            axpy(&mut q, -w_old, &older.gradient);
            axpy(&mut q, -w_new, &newer.gradient);
        }
        q
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    if a == 0.0 {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// (1 − e^{−r}(1 + r))/r.
fn phi1_over_r(r: f64) -> f64 {
    if r < 0.1 {
        // Σ_{n≥2} (−1)ⁿ (n−1) rⁿ⁻¹ / n!
        let mut sum = 0.0;
        let mut term = 1.0; // r^{n-1}/n! built incrementally
        for n in 2..16 {
            term = if n == 2 { r / 2.0 } else { term * r / n as f64 };
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * (n - 1) as f64 * term;
        }
        sum
    } else {
        (-(-r).exp_m1() - r * (-r).exp()) / r
    }
}

fn gradient(grid: &SpatialGrid, spectral: Option<&Spectral>, values: &[f64]) -> Vec<f64> {
    if let Some(s) = spectral {
        s.derivative_real(values)
    } else {
        let n = values.len();
        let dx = grid.dx();
        (0..n).map(|i| (values[(i + 1) % n] - values[i]) / dx).collect()
    }
}

/// −∂ₓq, matching [`gradient`]'s staggering on Dirichlet grids.
fn negative_divergence(grid: &SpatialGrid, spectral: Option<&Spectral>, q: &[f64]) -> Vec<f64> {
    match spectral {
        Some(s) => s.derivative(&to_complex(q)).iter().map(|v| -v.re).collect(),
        None => {
            let n = q.len();
            let dx = grid.dx();
            let mut out: Vec<f64> = (0..n).map(|i| -(q[i] - q[(i + n - 1) % n]) / dx).collect();
            out[0] = 0.0;
            out
        }
    }
}

/// Largest step for which the explicit predictor-corrector stays stable:
/// dt·ρ ≤ 1/2, ρ the magnitude of the slow mode rate at the grid's highest
/// wavenumber.
pub fn memory_step_limit(grid: &SpatialGrid, params: &TelegraphParams) -> f64 {
    let dk2 = params.kernel_strength * grid.max_laplacian_symbol();
    let tau = params.tau;
    let disc = 1.0 - 4.0 * tau * dk2;
    let rho = if disc >= 0.0 {
        2.0 * dk2 / (1.0 + disc.sqrt())
    } else {
        (dk2 / tau).sqrt()
    };
    0.5 / rho
}

/// Advance T' = −∂ₓq with q given by the memory integral over `history`.
///
/// Heun (trapezoidal predictor-corrector) in time, one history sample per
/// step. `history` is advanced along with the field and must end at
/// `field.time`.
pub fn evolve_memory_integral(
    field: &ThermalField,
    history: &mut FluxHistory,
    params: &TelegraphParams,
    dt: f64,
    n_steps: usize,
) -> Result<ThermalField> {
    params.validate()?;
    require_positive("tau", params.tau)?;
    require_time_step(dt, false)?;
    let grid = field.grid;
    grid.check_len("thermal field", field.values.len())?;
    if history.samples[0].gradient.len() != grid.n_points {
        return Err(Error::usage("flux history does not match the grid"));
    }
    if history.window < MIN_WINDOW_TAUS * params.tau {
        return Err(Error::config(format!(
            "history window {} is shorter than {MIN_WINDOW_TAUS}·tau = {}",
            history.window,
            MIN_WINDOW_TAUS * params.tau
        )));
    }
    let tol = 1e-9 * field.time.abs().max(dt);
    if (history.latest_time() - field.time).abs() > tol {
        return Err(Error::usage(format!(
            "flux history ends at t = {} but the field is at t = {}",
            history.latest_time(),
            field.time
        )));
    }
    let limit = memory_step_limit(&grid, params);
    if dt > limit {
        return Err(Error::config(format!(
            "dt = {dt} exceeds the memory-integral stability limit {limit:.3e}"
        )));
    }

    let spectral = grid.is_periodic().then(|| Spectral::new(&grid));
    let mut values = field.values.clone();
    if !grid.is_periodic() {
        values[0] = 0.0;
    }
    let mut time = field.time;

    for step in 1..=n_steps {
        let rate_now = negative_divergence(&grid, spectral.as_ref(), &history.flux(params));
        let predicted: Vec<f64> = values.iter().zip(&rate_now).map(|(v, r)| v + dt * r).collect();
        time = field.time + step as f64 * dt;
        history.push(FluxSample {
            time,
            gradient: gradient(&grid, spectral.as_ref(), &predicted),
        });
        let rate_next = negative_divergence(&grid, spectral.as_ref(), &history.flux(params));
        for ((v, a), b) in values.iter_mut().zip(&rate_now).zip(&rate_next) {
            *v += 0.5 * dt * (a + b);
        }
        history.replace_latest(gradient(&grid, spectral.as_ref(), &values));
        check_finite(&values, step, "temperature")?;
    }

    Ok(ThermalField { grid, values, time })
}
