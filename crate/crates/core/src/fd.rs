//! Second-order finite differences with trapezoidal time stepping, used on
//! Dirichlet grids (and by the Crank-Nicolson Schrödinger scheme on
//! periodic grids).

use num_complex::Complex64;

use crate::grid::SpatialGrid;
use crate::tridiag;

/// M = coeff·∂²ₓ + diag(shift), discretized with the 3-point stencil.
/// On Dirichlet grids node 0 is the boundary and is excluded from the unknowns.
pub(crate) struct FdOperator {
    coeff: Complex64,
    shift: Vec<Complex64>,
    inv_dx2: f64,
    periodic: bool,
}

impl FdOperator {
    pub fn new(grid: &SpatialGrid, coeff: Complex64, shift: Vec<Complex64>) -> Self {
        debug_assert_eq!(shift.len(), grid.n_points);
        Self {
            coeff,
            shift,
            inv_dx2: 1.0 / grid.dx().powi(2),
            periodic: grid.is_periodic(),
        }
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let n = u.len();
        let c = self.coeff * self.inv_dx2;
        let mut out: Vec<Complex64> = (0..n)
            .map(|i| {
                let left = u[(i + n - 1) % n];
                let right = u[(i + 1) % n];
                c * (left - 2.0 * u[i] + right) + self.shift[i] * u[i]
            })
            .collect();
        if !self.periodic {
            out[0] = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Solve (a·I + b·M) x = rhs in place.
    pub fn solve_shifted(&self, a: Complex64, b: Complex64, rhs: &mut [Complex64]) {
        let c = self.coeff * self.inv_dx2;
        let off = b * c;
        let diag: Vec<Complex64> = self.shift.iter().map(|&s| a + b * (s - 2.0 * c)).collect();
        if self.periodic {
            tridiag::solve_cyclic(&diag, off, rhs);
        } else {
            rhs[0] = Complex64::new(0.0, 0.0);
            tridiag::solve(&diag[1..], off, &mut rhs[1..]);
        }
    }

    /// One Crank-Nicolson step of u' = M u.
    pub fn crank_nicolson_step(&self, u: &mut [Complex64], dt: f64) {
        let mu = self.apply(u);
        let mut rhs: Vec<Complex64> = u.iter().zip(&mu).map(|(&x, &m)| x + 0.5 * dt * m).collect();
        let one = Complex64::new(1.0, 0.0);
        self.solve_shifted(one, Complex64::new(-0.5 * dt, 0.0), &mut rhs);
        u.copy_from_slice(&rhs);
    }

    /// One trapezoidal step of u'' = p·u' + M u, with w = u'.
    pub fn second_order_step(&self, p: Complex64, u: &mut [Complex64], w: &mut [Complex64], dt: f64) {
        let lead = (2.0 / dt) * (1.0 - 0.5 * dt * p);
        let mu = self.apply(u);
        let mut rhs: Vec<Complex64> = u
            .iter()
            .zip(w.iter())
            .zip(&mu)
            .map(|((&ui, &wi), &mi)| lead * ui + 2.0 * wi + 0.5 * dt * mi)
            .collect();
        self.solve_shifted(lead, Complex64::new(-0.5 * dt, 0.0), &mut rhs);
        for i in 0..u.len() {
            let next = rhs[i];
            w[i] = (2.0 / dt) * (next - u[i]) - w[i];
            u[i] = next;
        }
        if !self.periodic {
            u[0] = Complex64::new(0.0, 0.0);
            w[0] = Complex64::new(0.0, 0.0);
        }
    }
}
