use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::SpatialGrid;

/// FFT plans and angular wavenumbers for a periodic grid.
pub(crate) struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
    nyquist: Option<usize>,
}

impl Spectral {
    pub fn new(grid: &SpatialGrid) -> Self {
        let n = grid.n_points;
        let mut planner = FftPlanner::new();
        let base = 2.0 * std::f64::consts::PI / grid.length();
        let wavenumbers = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                base * m
            })
            .collect();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            wavenumbers,
            nyquist: n.is_multiple_of(2).then_some(n / 2),
        }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    pub fn analyze(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut data = values.to_vec();
        self.forward(&mut data);
        data
    }

    pub fn synthesize(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut data = spectrum.to_vec();
        self.inverse(&mut data);
        data
    }

    /// ∂ₓ with the Nyquist coefficient dropped.
    pub fn derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut data = self.analyze(values);
        for (j, (v, &k)) in data.iter_mut().zip(&self.wavenumbers).enumerate() {
            *v = if Some(j) == self.nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                *v * Complex64::new(0.0, k)
            };
        }
        self.inverse(&mut data);
        data
    }

    pub fn second_derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut data = self.analyze(values);
        for (v, &k) in data.iter_mut().zip(&self.wavenumbers) {
            *v *= -k * k;
        }
        self.inverse(&mut data);
        data
    }

    pub fn derivative_real(&self, values: &[f64]) -> Vec<f64> {
        self.derivative(&to_complex(values)).iter().map(|v| v.re).collect()
    }

    #[cfg(test)]
    pub fn second_derivative_real(&self, values: &[f64]) -> Vec<f64> {
        self.second_derivative(&to_complex(values))
            .iter()
            .map(|v| v.re)
            .collect()
    }
}

pub(crate) fn to_complex(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}
