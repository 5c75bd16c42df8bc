//! Independent oracles shared by the unit tests. Everything here solves the
//! same problems as the library through a different route and must stay
//! decoupled from the implementation paths it cross-checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{SDParams, SDState};
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;

/// Closed-form solution for spatially constant data: with `rho = |a|^2`
/// frozen, `v` relaxes exponentially and `u` accumulates the integrated
/// phase of `v`.
pub(crate) fn constant_solution(
    a: Complex64,
    v0: f64,
    params: SDParams,
    t: f64,
) -> (Complex64, f64) {
    let mu = params.mu;
    let lambda = params.lambda_f();
    let rho = a.norm_sqr();
    let gap = v0 - lambda * rho;
    let v = lambda * rho + gap * (-t / mu).exp();
    let phase = lambda * rho * t + mu * gap * (1.0 - (-t / mu).exp());
    (a * Complex64::new(0.0, -phase).exp(), v)
}

/// Brute-force RK4 integration of the pointwise no-Laplacian system
/// `u' = -i u v`, `v' = (lambda |u|^2 - v) / mu` over `tau` in `n` substeps.
pub(crate) fn pointwise_ode_oracle(
    state: &SDState,
    tau: f64,
    n: usize,
) -> (Vec<Complex64>, Vec<f64>) {
    let mu = state.params.mu;
    let lambda = state.params.lambda_f();
    let h = tau / n as f64;
    let rhs = |u: Complex64, v: f64| -> (Complex64, f64) {
        (-Complex64::i() * u * v, (lambda * u.norm_sqr() - v) / mu)
    };
    let mut us = Vec::with_capacity(state.u.values.len());
    let mut vs = Vec::with_capacity(state.v.values.len());
    for (u0, v0) in state.u.values.iter().zip(&state.v.values) {
        let (mut u, mut v) = (*u0, *v0);
        for _ in 0..n {
            let (k1u, k1v) = rhs(u, v);
            let (k2u, k2v) = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
            let (k3u, k3v) = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
            let (k4u, k4v) = rhs(u + h * k3u, v + h * k3v);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        us.push(u);
        vs.push(v);
    }
    (us, vs)
}

/// Band-limited random state with O(1) amplitude: a handful of
/// low-wavenumber modes with seeded coefficients, plus a matching smooth
/// real `v`.
pub(crate) fn random_smooth_state(grid: &Grid, mu: f64, lambda: i32, seed: u64) -> SDState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let mut u = ComplexField::zeros(grid);
    let mut v = RealField::zeros(grid);
    for _ in 0..4 {
        let mut mode = [0i64; 3];
        for m in mode.iter_mut().take(dim) {
            *m = rng.gen_range(-2..=2);
        }
        let cu = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let wave = ComplexField::plane_wave(grid, &mode[..dim], cu);
        for (a, b) in u.values.iter_mut().zip(&wave.values) {
            *a += b;
        }
        let cv = rng.gen_range(-0.3..0.3);
        for (a, b) in v.values.iter_mut().zip(&wave.values) {
            *a += cv * b.re;
        }
    }
    SDState::new(u, v, 0.0, SDParams::new(mu, lambda).unwrap()).unwrap()
}
