use num_complex::Complex64;

use super::{TelegraphParams, ThermalField};
use crate::error::{check_finite, require_time_step, Error, Result};
use crate::fd::FdOperator;
use crate::grid::SpatialGrid;
use crate::propagator::ModePropagator;
use crate::spectral::{to_complex, Spectral};

/// Advance the telegraph equation τT'' + T' = D·∂²ₓT by `n_steps` steps of `dt`.
///
/// Periodic grids step every Fourier mode with its exact 2×2 propagator;
/// Dirichlet grids use 3-point differences with trapezoidal stepping. Both are
/// unconditionally stable. A ballistic `params` routes to [`evolve_wave`].
pub fn evolve_telegraph(
    field: &ThermalField,
    dfield_dt: &[f64],
    params: &TelegraphParams,
    dt: f64,
    n_steps: usize,
) -> Result<(ThermalField, Vec<f64>)> {
    params.validate()?;
    if params.ballistic {
        return evolve_wave(field, dfield_dt, params, dt, n_steps);
    }
    if params.tau == 0.0 {
        return Err(Error::config(
            "telegraph stepping needs tau > 0; use evolve_fourier for the tau = 0 limit",
        ));
    }
    require_time_step(dt, false)?;
    let p = Complex64::new(-1.0 / params.tau, 0.0);
    let rate = params.diffusivity / params.tau;
    evolve_second_order(field, dfield_dt, p, rate, dt, n_steps)
}

/// Advance the undamped wave equation T'' = v²·∂²ₓT, v = √(D/τ).
///
/// Negative `dt` runs the dynamics backwards; both schemes are time-symmetric.
pub fn evolve_wave(
    field: &ThermalField,
    dfield_dt: &[f64],
    params: &TelegraphParams,
    dt: f64,
    n_steps: usize,
) -> Result<(ThermalField, Vec<f64>)> {
    params.validate()?;
    let v = params
        .speed()
        .ok_or_else(|| Error::config("wave stepping needs a finite speed, i.e. tau > 0"))?;
    require_time_step(dt, true)?;
    evolve_second_order(field, dfield_dt, Complex64::new(0.0, 0.0), v * v, dt, n_steps)
}

/// Advance the heat equation T' = D·∂²ₓT. Exact per-mode decay on periodic
/// grids, Crank-Nicolson on Dirichlet grids.
pub fn evolve_fourier(field: &ThermalField, params: &TelegraphParams, dt: f64, n_steps: usize) -> Result<ThermalField> {
    params.validate()?;
    require_time_step(dt, false)?;
    let grid = field.grid;
    grid.check_len("thermal field", field.values.len())?;
    let d = params.diffusivity;

    let values = if grid.is_periodic() {
        let spectral = Spectral::new(&grid);
        let mut hat = spectral.analyze(&to_complex(&field.values));
        let factors: Vec<f64> = spectral.wavenumbers().iter().map(|k| (-d * k * k * dt).exp()).collect();
        for step in 1..=n_steps {
            for (h, f) in hat.iter_mut().zip(&factors) {
                *h *= f;
            }
            check_finite(&hat, step, "temperature")?;
        }
        spectral.synthesize(&hat)
    } else {
        let op = FdOperator::new(
            &grid,
            Complex64::new(d, 0.0),
            vec![Complex64::new(0.0, 0.0); grid.n_points],
        );
        let mut u = to_complex(&field.values);
        u[0] = Complex64::new(0.0, 0.0);
        for step in 1..=n_steps {
            op.crank_nicolson_step(&mut u, dt);
            check_finite(&u, step, "temperature")?;
        }
        u
    };

    Ok(ThermalField {
        grid,
        values: values.iter().map(|v| v.re).collect(),
        time: field.time + n_steps as f64 * dt,
    })
}

/// D·∂²ₓT: the heat-equation rate, which is also the starting T' under which
/// the telegraph and memory-integral solvers leave the Fourier limit smoothly.
pub fn diffusive_rate(field: &ThermalField, params: &TelegraphParams) -> Result<Vec<f64>> {
    params.validate()?;
    let grid = field.grid;
    grid.check_len("thermal field", field.values.len())?;
    let d = params.diffusivity;
    let lap = if grid.is_periodic() {
        Spectral::new(&grid).second_derivative(&to_complex(&field.values))
    } else {
        FdOperator::new(
            &grid,
            Complex64::new(1.0, 0.0),
            vec![Complex64::new(0.0, 0.0); grid.n_points],
        )
        .apply(&to_complex(&field.values))
    };
    Ok(lap.iter().map(|v| d * v.re).collect())
}

/// u'' = p·u' + c²·∂²ₓu for real fields.
fn evolve_second_order(
    field: &ThermalField,
    dfield_dt: &[f64],
    p: Complex64,
    c2: f64,
    dt: f64,
    n_steps: usize,
) -> Result<(ThermalField, Vec<f64>)> {
    let grid = field.grid;
    grid.check_len("thermal field", field.values.len())?;
    grid.check_len("time derivative", dfield_dt.len())?;
    let (u, w) = second_order_complex(
        &grid,
        &to_complex(&field.values),
        &to_complex(dfield_dt),
        p,
        |k| Complex64::new(-c2 * k * k, 0.0),
        Complex64::new(c2, 0.0),
        dt,
        n_steps,
    )?;
    Ok((
        ThermalField {
            grid,
            values: u.iter().map(|v| v.re).collect(),
            time: field.time + n_steps as f64 * dt,
        },
        w.iter().map(|v| v.re).collect(),
    ))
}

/// Shared stepping kernel for u'' = p·u' + M·u with M = c·∂²ₓ + shift.
///
/// `symbol(k)` is M's Fourier symbol (periodic path); `laplacian_coeff` is c
/// (Dirichlet path, zero shift).
#[allow(clippy::too_many_arguments)]
pub(crate) fn second_order_complex(
    grid: &SpatialGrid,
    u0: &[Complex64],
    w0: &[Complex64],
    p: Complex64,
    symbol: impl Fn(f64) -> Complex64,
    laplacian_coeff: Complex64,
    dt: f64,
    n_steps: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if grid.is_periodic() {
        let spectral = Spectral::new(grid);
        let mut u_hat = spectral.analyze(u0);
        let mut w_hat = spectral.analyze(w0);
        let props: Vec<ModePropagator> = spectral
            .wavenumbers()
            .iter()
            .map(|&k| ModePropagator::new(p, symbol(k), dt))
            .collect();
        for step in 1..=n_steps {
            for ((u, w), prop) in u_hat.iter_mut().zip(w_hat.iter_mut()).zip(&props) {
                (*u, *w) = prop.apply(*u, *w);
            }
            check_finite(&u_hat, step, "field")?;
        }
        Ok((spectral.synthesize(&u_hat), spectral.synthesize(&w_hat)))
    } else {
        let op = FdOperator::new(grid, laplacian_coeff, vec![Complex64::new(0.0, 0.0); grid.n_points]);
        let mut u = u0.to_vec();
        let mut w = w0.to_vec();
        u[0] = Complex64::new(0.0, 0.0);
        w[0] = Complex64::new(0.0, 0.0);
        for step in 1..=n_steps {
            op.second_order_step(p, &mut u, &mut w, dt);
            check_finite(&u, step, "field")?;
        }
        Ok((u, w))
    }
}

/// E = ∫ [(∂ₜT)² + v²(∂ₓT)²] dx, with spectral ∂ₓ on periodic grids and
/// one-sided face differences on Dirichlet grids.
pub fn wave_energy(field: &ThermalField, dfield_dt: &[f64], speed: f64) -> f64 {
    let grid = field.grid;
    let gradient: Vec<f64> = if grid.is_periodic() {
        Spectral::new(&grid).derivative_real(&field.values)
    } else {
        let n = grid.n_points;
        (0..n)
            .map(|i| (field.values[(i + 1) % n] - field.values[i]) / grid.dx())
            .collect()
    };
    let sum: f64 = dfield_dt
        .iter()
        .zip(&gradient)
        .map(|(s, g)| s * s + speed * speed * g * g)
        .sum();
    sum * grid.dx()
}
