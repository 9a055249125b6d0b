use num_complex::Complex64;

/// Solve a tridiagonal system with constant off-diagonals `off` and the given
/// diagonal (Thomas algorithm). `rhs` is overwritten with the solution.
pub(crate) fn solve(diag: &[Complex64], off: Complex64, rhs: &mut [Complex64]) {
    let n = diag.len();
    debug_assert_eq!(rhs.len(), n);
    if n == 0 {
        return;
    }
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = diag[0];
    c_prime[0] = off / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - off * c_prime[i - 1];
        c_prime[i] = off / denom;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= c_prime[i] * next;
    }
}

/// Periodic (cyclic) variant: the corner entries also equal `off`.
/// Sherman–Morrison on top of two Thomas solves.
pub(crate) fn solve_cyclic(diag: &[Complex64], off: Complex64, rhs: &mut [Complex64]) {
    let n = diag.len();
    debug_assert!(n >= 3);
    let gamma = -diag[0];
    let mut modified = diag.to_vec();
    modified[0] -= gamma;
    modified[n - 1] -= off * off / gamma;

    solve(&modified, off, rhs);

    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = off;
    solve(&modified, off, &mut u);

    // v = (1, 0, …, 0, off/γ)
    let v_last = off / gamma;
    let factor = (rhs[0] + v_last * rhs[n - 1]) / (Complex64::new(1.0, 0.0) + u[0] + v_last * u[n - 1]);
    for (x, ui) in rhs.iter_mut().zip(&u) {
        *x -= factor * ui;
    }
}
