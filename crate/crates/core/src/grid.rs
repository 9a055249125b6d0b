use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Periodic,
    /// Zero value at both ends. Node 0 sits on `x_min` and doubles as the
    /// `x_max` boundary, so it is held at zero.
    DirichletZero,
}

/// Uniform 1-D grid with `n_points` nodes at `x_min + i·dx`, `dx = L/n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub boundary: Boundary,
}

impl SpatialGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize, boundary: Boundary) -> Result<Self> {
        let grid = Self {
            x_min,
            x_max,
            n_points,
            boundary,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn periodic(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        Self::new(x_min, x_max, n_points, Boundary::Periodic)
    }

    pub fn dirichlet(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        Self::new(x_min, x_max, n_points, Boundary::DirichletZero)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(Error::config(format!(
                "grid needs finite x_max > x_min, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_points < Self::MIN_POINTS {
            return Err(Error::config(format!(
                "grid needs at least {} points, got {}",
                Self::MIN_POINTS,
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    /// Largest |wavenumber| the grid represents (Nyquist).
    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI / self.dx()
    }

    /// Largest eigenvalue magnitude of the discrete −∂²ₓ on this grid.
    pub fn max_laplacian_symbol(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.max_wavenumber().powi(2),
            Boundary::DirichletZero => 4.0 / self.dx().powi(2),
        }
    }

    pub fn same_as(&self, other: &SpatialGrid) -> bool {
        self.n_points == other.n_points
            && self.boundary == other.boundary
            && self.x_min == other.x_min
            && self.x_max == other.x_max
    }

    pub(crate) fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.n_points {
            return Err(Error::usage(format!(
                "{what} has {len} entries but the grid has {} points",
                self.n_points
            )));
        }
        Ok(())
    }
}

/// Rectangle-rule integral over one period (spectrally accurate for
/// smooth periodic data).
pub fn integrate(grid: &SpatialGrid, values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().sum::<f64>() * grid.dx()
}

/// √(Σ |aᵢ − bᵢ|² dx).
pub fn l2_distance<T>(grid: &SpatialGrid, a: &[T], b: &[T]) -> f64
where
    T: Copy + std::ops::Sub<Output = T> + Into<num_complex::Complex64>,
{
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| Into::<num_complex::Complex64>::into(x - y).norm_sqr())
        .sum();
    (sum * grid.dx()).sqrt()
}

pub fn linf_distance<T>(a: &[T], b: &[T]) -> f64
where
    T: Copy + std::ops::Sub<Output = T> + Into<num_complex::Complex64>,
{
    a.iter()
        .zip(b)
        .map(|(&x, &y)| Into::<num_complex::Complex64>::into(x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_coordinates() {
        let g = SpatialGrid::periodic(0.0, 1.0, 8).unwrap();
        assert_eq!(g.dx(), 0.125);
        assert_eq!(g.x(4), 0.5);
        assert_eq!(g.coordinates().len(), 8);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(SpatialGrid::periodic(1.0, 0.0, 16).is_err());
        assert!(SpatialGrid::periodic(0.0, 1.0, 4).is_err());
        assert!(SpatialGrid::dirichlet(0.0, f64::INFINITY, 16).is_err());
    }

    #[test]
    fn distances() {
        let g = SpatialGrid::periodic(0.0, 1.0, 8).unwrap();
        let a = vec![1.0; 8];
        let b = vec![0.0; 8];
        assert!((l2_distance(&g, &a, &b) - 1.0).abs() < 1e-15);
        assert_eq!(linf_distance(&a, &b), 1.0);
    }
}
