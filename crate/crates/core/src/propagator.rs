//! Exact one-step propagators for constant-coefficient linear modes.

use num_complex::Complex64;

/// exp(h·A) for the companion system u'' = p·u' + μ·u, i.e.
/// A = [[0, 1], [μ, p]], acting on (u, u').
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModePropagator {
    m: [[Complex64; 2]; 2],
}

impl ModePropagator {
    pub fn new(p: Complex64, mu: Complex64, h: f64) -> Self {
        let half = 0.5 * p;
        let s = (half * half + mu).sqrt();
        let lp = (half + s) * h;
        let lm = (half - s) * h;

        let cosh_term = 0.5 * (lp.exp() + lm.exp());
        // e^{h p/2}·sinh(s h)/s without cancellation or overflow
        let gap = lp - lm;
        let sinh_term = if gap.norm() < 0.5 {
            h * lm.exp() * exprel(gap)
        } else {
            h * (lp.exp() - lm.exp()) / gap
        };

        Self {
            m: [
                [cosh_term - half * sinh_term, sinh_term],
                [mu * sinh_term, cosh_term + half * sinh_term],
            ],
        }
    }

    #[inline]
    pub fn apply(&self, u: Complex64, du: Complex64) -> (Complex64, Complex64) {
        (
            self.m[0][0] * u + self.m[0][1] * du,
            self.m[1][0] * u + self.m[1][1] * du,
        )
    }
}

/// (eᶻ − 1)/z, accurate near zero.
pub(crate) fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let one = Complex64::new(1.0, 0.0);
        one + z / 2.0 * (one + z / 3.0 * (one + z / 4.0 * (one + z / 5.0)))
    } else {
        expm1(z) / z
    }
}

pub(crate) fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half_sin = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half_sin * half_sin, x.exp() * y.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference: many tiny explicit RK4 steps.
    fn rk4(p: Complex64, mu: Complex64, h: f64, u0: Complex64, v0: Complex64) -> (Complex64, Complex64) {
        let n = 20_000;
        let dt = h / n as f64;
        let f = |u: Complex64, v: Complex64| (v, mu * u + p * v);
        let (mut u, mut v) = (u0, v0);
        for _ in 0..n {
            let (a1, b1) = f(u, v);
            let (a2, b2) = f(u + 0.5 * dt * a1, v + 0.5 * dt * b1);
            let (a3, b3) = f(u + 0.5 * dt * a2, v + 0.5 * dt * b2);
            let (a4, b4) = f(u + dt * a3, v + dt * b3);
            u += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            v += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
        (u, v)
    }

    #[test]
    fn matches_rk4_across_regimes() {
        let cases = [
            (c(-10.0, 0.0), c(-400.0, 0.0)), // underdamped
            (c(-10.0, 0.0), c(-25.0, 0.0)),  // critical
            (c(-10.0, 0.0), c(-1.0, 0.0)),   // overdamped
            (c(0.0, 0.0), c(-9.0, 0.0)),     // undamped
            (c(0.0, 0.0), c(0.0, 0.0)),      // free drift
            (c(0.0, -20.0), c(0.0, 10.0)),   // modified Schrödinger mode
        ];
        for (p, mu) in cases {
            let prop = ModePropagator::new(p, mu, 0.3);
            let got = prop.apply(c(1.0, 0.5), c(-0.2, 0.1));
            let want = rk4(p, mu, 0.3, c(1.0, 0.5), c(-0.2, 0.1));
            assert!((got.0 - want.0).norm() < 1e-9, "{p} {mu}: {got:?} vs {want:?}");
            assert!((got.1 - want.1).norm() < 1e-8, "{p} {mu}: {got:?} vs {want:?}");
        }
    }

    #[test]
    fn stiff_damping_does_not_overflow() {
        let prop = ModePropagator::new(c(-1e6, 0.0), c(-1e9, 0.0), 1.0);
        let (u, v) = prop.apply(c(1.0, 0.0), c(0.0, 0.0));
        assert!(u.re.is_finite() && v.re.is_finite());
    }

    #[test]
    fn negative_step_inverts() {
        let fwd = ModePropagator::new(c(0.0, 0.0), c(-50.0, 0.0), 0.01);
        let back = ModePropagator::new(c(0.0, 0.0), c(-50.0, 0.0), -0.01);
        let (u, v) = fwd.apply(c(0.3, 0.0), c(1.0, 0.0));
        let (u, v) = back.apply(u, v);
        assert!((u - c(0.3, 0.0)).norm() < 1e-15);
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
    }
}
