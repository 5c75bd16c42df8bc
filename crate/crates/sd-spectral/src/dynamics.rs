//! Time integration of the Schrödinger-Debye system
//!
//! ```text
//!   i u_t + (1/2) Lap u = u v
//!   mu v_t + v          = lambda |u|^2,   mu > 0, lambda = +-1
//! ```
//!
//! by Strang splitting between the free Schrödinger group and the
//! no-Laplacian subsystem. Both substeps are exact flows:
//!
//! * the free group is the unimodular multiplier `exp(-i dt |xi|^2 / 2)`;
//! * with the Laplacian dropped, `d|u|^2/dt = 2 Re(conj(u) * (-i u v)) = 0`
//!   because `v` is real, so `rho = |u|^2` is frozen pointwise and the
//!   subsystem reduces to a linear relaxation for `v` plus a phase rotation
//!   for `u`:
//!
//!   ```text
//!   v(tau) = lambda rho + (v0 - lambda rho) exp(-tau/mu)
//!   u(tau) = u0 exp(-i Phi),
//!   Phi    = lambda rho tau + mu (v0 - lambda rho) (1 - exp(-tau/mu)).
//!   ```
//!
//! All splitting error is therefore commutator error and the composition is
//! second order. Each substep preserves `||u||_2` exactly in exact
//! arithmetic, and `v` stays real by construction. A cubic-NLS reference
//! integrator with the same structure lives here too.

use num_complex::Complex64;

use crate::error::{Result, SdError};
use crate::fft::{apply_symbol_of_k2, dealias_two_thirds, resample};
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;

/// Relaxation time and nonlinearity sign of the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SDParams {
    pub mu: f64,
    pub lambda: i32,
}

impl SDParams {
    pub fn new(mu: f64, lambda: i32) -> Result<Self> {
        if !mu.is_finite() || mu <= 0.0 {
            return Err(SdError::Config(format!("mu must be positive and finite, got {mu}")));
        }
        if lambda != 1 && lambda != -1 {
            return Err(SdError::Config(format!("lambda must be +1 or -1, got {lambda}")));
        }
        Ok(Self { mu, lambda })
    }

    #[inline]
    pub fn lambda_f(&self) -> f64 {
        f64::from(self.lambda)
    }
}

/// Full simulation state: wave field, medium response, time, parameters.
#[derive(Debug, Clone)]
pub struct SDState {
    pub u: ComplexField,
    pub v: RealField,
    pub t: f64,
    pub params: SDParams,
}

impl SDState {
    pub fn new(u: ComplexField, v: RealField, t: f64, params: SDParams) -> Result<Self> {
        u.check_same_grid(&v)?;
        if t.is_nan() || t < 0.0 {
            return Err(SdError::Config(format!("start time must be >= 0, got {t}")));
        }
        Ok(Self { u, v, t, params })
    }

    pub fn grid(&self) -> &Grid {
        &self.u.grid
    }
}

/// Step size and dealiasing policy for the splitting integrator.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub dt: f64,
    /// Two-thirds spectral truncation after each full step. Off by default:
    /// the nonlinear substep is a pure phase, so aliasing pressure is mild.
    pub dealias: bool,
}

impl StepControl {
    pub fn new(dt: f64) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(SdError::Config(format!("dt must be positive and finite, got {dt}")));
        }
        Ok(Self { dt, dealias: false })
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }
}

/// Free Schrödinger group `S(dt)`: spectrum multiplied by
/// `exp(-i dt |xi|^2 / 2)`. Exactly unitary on the grid.
pub fn schrodinger_flow(u: &ComplexField, dt: f64) -> ComplexField {
    if dt == 0.0 {
        return u.clone();
    }
    apply_symbol_of_k2(u, |k2| Complex64::new(0.0, -0.5 * dt * k2).exp())
}

/// Exact flow of the no-Laplacian subsystem over `tau` (see module docs).
/// `|u|` is unchanged pointwise; `v` relaxes toward `lambda |u|^2`.
pub fn nonlinear_substep(state: &SDState, tau: f64) -> SDState {
    let mu = state.params.mu;
    let lambda = state.params.lambda_f();
    let decay = (-tau / mu).exp();
    // 1 - exp(-tau/mu) without cancellation for small tau/mu
    let one_minus_decay = -(-tau / mu).exp_m1();

    let mut u = state.u.clone();
    let mut v = state.v.clone();
    for (uj, vj) in u.values.iter_mut().zip(v.values.iter_mut()) {
        let rho = uj.norm_sqr();
        let gap = *vj - lambda * rho;
        let phase = lambda * rho * tau + mu * gap * one_minus_decay;
        *uj *= Complex64::new(0.0, -phase).exp();
        *vj = lambda * rho + gap * decay;
    }
    SDState { u, v, t: state.t, params: state.params }
}

fn step_with(state: &SDState, dt: f64, dealias: bool) -> Result<SDState> {
    let half = nonlinear_substep(state, 0.5 * dt);
    let u_mid = schrodinger_flow(&half.u, dt);
    let mid = SDState { u: u_mid, ..half };
    let mut out = nonlinear_substep(&mid, 0.5 * dt);
    out.t = state.t + dt;
    if dealias {
        out.u = dealias_two_thirds(&out.u);
    }
    if !out.u.is_finite() || !out.v.is_finite() {
        return Err(SdError::IntegrationDiverged { t: out.t });
    }
    Ok(out)
}

/// One Strang step: nonlinear half step, full linear flow, nonlinear half
/// step; advances `t` by `ctl.dt`.
pub fn strang_step(state: &SDState, ctl: &StepControl) -> Result<SDState> {
    step_with(state, ctl.dt, ctl.dealias)
}

/// March the state to `t_end` with a trailing partial step if needed.
/// The observer sees the initial state, every `cadence`-th step, and the
/// final state (so `ceil(steps/cadence) + 1` invocations in total).
pub fn evolve(
    state: SDState,
    ctl: &StepControl,
    t_end: f64,
    cadence: usize,
    mut observer: impl FnMut(&SDState),
) -> Result<SDState> {
    if t_end < state.t {
        return Err(SdError::Config(format!(
            "t_end = {t_end} lies before the state time {}",
            state.t
        )));
    }
    let cadence = cadence.max(1);
    let t0 = state.t;
    let eps = ctl.dt * 1e-12;
    observer(&state);
    let mut current = state;
    let mut step_index = 0usize;
    while t_end - current.t > eps {
        step_index += 1;
        // target times computed from t0 so rounding does not accumulate
        let target = (t0 + step_index as f64 * ctl.dt).min(t_end);
        let dt = target - current.t;
        current = step_with(&current, dt, ctl.dealias)?;
        current.t = target;
        if step_index.is_multiple_of(cadence) || t_end - current.t <= eps {
            observer(&current);
        }
    }
    Ok(current)
}

/// One Strang step of the cubic NLS reference
/// `i u_t + (1/2) Lap u = lambda |u|^2 u`: half phase, full linear flow,
/// half phase (with the magnitude re-read after the linear flow).
pub fn nls_step(u: &ComplexField, lambda: i32, dt: f64) -> Result<ComplexField> {
    let lam = f64::from(lambda);
    let half_phase = |f: &ComplexField| {
        let mut out = f.clone();
        for z in &mut out.values {
            let rho = z.norm_sqr();
            *z *= Complex64::new(0.0, -lam * rho * 0.5 * dt).exp();
        }
        out
    };
    let a = half_phase(u);
    let b = schrodinger_flow(&a, dt);
    let out = half_phase(&b);
    if !out.is_finite() {
        return Err(SdError::IntegrationDiverged { t: f64::NAN });
    }
    Ok(out)
}

/// Repeated [`nls_step`] over `[0, t_end]` with a trailing partial step.
pub fn nls_evolve(u0: &ComplexField, lambda: i32, dt: f64, t_end: f64) -> Result<ComplexField> {
    let mut u = u0.clone();
    let mut t = 0.0;
    let mut k = 0usize;
    let eps = dt * 1e-12;
    while t_end - t > eps {
        k += 1;
        let target = (k as f64 * dt).min(t_end);
        u = nls_step(&u, lambda, target - t)?;
        t = target;
    }
    Ok(u)
}

/// Map a solution at relaxation time `mu` to the equivalent `mu = 1`
/// solution: samples scale by `sqrt(mu)` (for `u`) and `mu` (for `v`), the
/// box extent contracts to `L / sqrt(mu)`, and the state time becomes
/// `t / mu`. Grid points map one-to-one, so no interpolation is involved:
/// the transformed state at time `t/mu` samples the original solution at
/// time `t`.
pub fn scaling_transform(state: &SDState) -> Result<SDState> {
    let mu = state.params.mu;
    let root_mu = mu.sqrt();
    let src = state.grid();
    let grid = Grid::new(src.dim(), src.points_per_axis(), src.extent() / root_mu)?;
    let u = ComplexField {
        grid: grid.clone(),
        values: state.u.values.iter().map(|z| z * root_mu).collect(),
    };
    let v = RealField { grid, values: state.v.values.iter().map(|x| x * mu).collect() };
    SDState::new(u, v, state.t / mu, SDParams::new(1.0, state.params.lambda)?)
}

/// [`scaling_transform`] followed by spectral interpolation onto a grid
/// with `new_points` per axis. Fails with an aliasing error if the source
/// occupies modes the target cannot carry.
pub fn scaling_transform_resampled(state: &SDState, new_points: usize) -> Result<SDState> {
    let scaled = scaling_transform(state)?;
    if new_points == scaled.grid().points_per_axis() {
        return Ok(scaled);
    }
    let u = resample(&scaled.u, new_points)?;
    let v_c = resample(&scaled.v.to_complex(), new_points)?;
    let v = RealField { grid: u.grid.clone(), values: v_c.values.iter().map(|z| z.re).collect() };
    SDState::new(u, v, scaled.t, scaled.params)
}
