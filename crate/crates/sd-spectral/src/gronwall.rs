//! Gagliardo-Nirenberg calibration and the iterated exponential a-priori
//! envelope for `f(t) = ||grad u||_2^2 + ||v||_2^2`.
//!
//! In two dimensions `||u||_4^2 <= beta^2 ||u||_2 ||grad u||_2`. The size
//! functional then obeys `f(t) <= alpha0 exp(alpha1 t)` on windows of length
//! `T_mu`, with
//!
//! ```text
//! alpha0 = 2|E0| + 4 ||v0||^2 (2 beta^4 ||u0||^2 + 3/2)
//! alpha1 = (2/mu) (5 beta^4 ||u0||^2 + 19/4)
//! T_mu   = mu / (4 beta^4 ||u0||^2)
//! ```
//!
//! Because `T_mu` depends only on the conserved `||u0||_2`, the window can
//! be restarted from measured data at its end and the bound iterated to any
//! time. `beta` is calibrated empirically: the maximum of the GN ratio over
//! a field ensemble, inflated by a safety factor. A looser `beta` only
//! loosens the envelope, so the `f <= envelope` witness stays valid.
//!
//! The one-dimensional variant bounds `g = f + ||v_x||_2` the same way,
//! with the endpoint bound `||u||_inf^2 <= ||u||_2^2 + ||u_x||_2^2` in
//! place of Gagliardo-Nirenberg; see [`GEnvelope1d`] for the bookkeeping.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{energy, DiagnosticsRecord};
use crate::dynamics::{SDParams, SDState};
use crate::error::{Result, SdError};
use crate::fft::random_bandlimited_field;
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;
use crate::norms::{gradient_l2, l2_norm, lp_norm, mass, NormOrder};

/// `||u||_4^4 / (||u||_2^2 ||grad u||_2^2)`, the quantity bounded by
/// `beta^4` in two dimensions. Scale invariant in amplitude, and in 2D also
/// under dilation.
pub fn gn_ratio(u: &ComplexField) -> Result<f64> {
    let m = mass(u);
    let g = gradient_l2(u);
    if m == 0.0 || g == 0.0 {
        return Err(SdError::ZeroField);
    }
    let l4 = lp_norm(u, NormOrder::P(4.0)).expect("p = 4 is valid");
    Ok(l4.powi(4) / (m * g * g))
}

/// 1D analogue with the classical `H^1` norm in the denominator:
/// `||u||_4^4 / (||u||_2^2 (||u||_2^2 + ||u_x||_2^2))`.
pub fn h1_interpolation_ratio(u: &ComplexField) -> Result<f64> {
    let m = mass(u);
    if m == 0.0 {
        return Err(SdError::ZeroField);
    }
    let g = gradient_l2(u);
    let l4 = lp_norm(u, NormOrder::P(4.0)).expect("p = 4 is valid");
    Ok(l4.powi(4) / (m * (m + g * g)))
}

/// `beta` with `beta^4 = safety * max(gn_ratio)` over the ensemble.
pub fn calibrate_beta(ensemble: &[ComplexField], safety: f64) -> Result<f64> {
    calibrate(ensemble, safety, gn_ratio)
}

/// `kappa` for the 1D bound, same construction over
/// [`h1_interpolation_ratio`].
pub fn calibrate_kappa(ensemble: &[ComplexField], safety: f64) -> Result<f64> {
    calibrate(ensemble, safety, h1_interpolation_ratio)
}

fn calibrate(
    ensemble: &[ComplexField],
    safety: f64,
    ratio: impl Fn(&ComplexField) -> Result<f64>,
) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(SdError::EmptyEnsemble);
    }
    let mut max = 0.0f64;
    for u in ensemble {
        max = max.max(ratio(u)?);
    }
    Ok((safety * max).powf(0.25))
}

/// Default calibration ensemble: Gaussians of several widths plus seeded
/// band-limited random fields on the same grid.
pub fn default_calibration_ensemble(grid: &Grid, seed: u64, random_count: usize) -> Vec<ComplexField> {
    let mut out = Vec::new();
    let center = grid.center();
    for width in [0.5, 1.0, 2.0] {
        out.push(ComplexField::gaussian(grid, 1.0, width, &center[..grid.dim()]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e5e_a110);
    let cutoff = (grid.points_per_axis() / 4).max(2);
    for _ in 0..random_count {
        out.push(random_bandlimited_field(grid, cutoff, &mut rng));
    }
    out
}

/// The envelope constants for one window, with the initial energy they were
/// derived from.
#[derive(Debug, Clone, Copy)]
pub struct GronwallConstants {
    pub beta: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    /// Window length; infinite when `u0` vanishes.
    pub t_mu: f64,
    pub e0: f64,
}

/// Evaluate the constants from initial data. `e0` comes from [`energy`] at
/// the state's own time; norms are measured on the grid.
pub fn gronwall_constants(
    u0: &ComplexField,
    v0: &RealField,
    params: &SDParams,
    beta: f64,
) -> Result<GronwallConstants> {
    let state = SDState::new(u0.clone(), v0.clone(), 0.0, *params)?;
    let (e0, _) = energy(&state);
    let u_mass = mass(u0);
    let v_l2_sq = {
        let n = l2_norm(v0);
        n * n
    };
    Ok(constants_from_measurements(e0, u_mass, v_l2_sq, params.mu, beta))
}

fn constants_from_measurements(
    e: f64,
    u_mass: f64,
    v_l2_sq: f64,
    mu: f64,
    beta: f64,
) -> GronwallConstants {
    let b4 = beta.powi(4);
    let alpha0 = 2.0 * e.abs() + 4.0 * v_l2_sq * (2.0 * b4 * u_mass + 1.5);
    let alpha1 = (2.0 / mu) * (5.0 * b4 * u_mass + 4.75);
    let t_mu = if u_mass == 0.0 { f64::INFINITY } else { mu / (4.0 * b4 * u_mass) };
    GronwallConstants { beta, alpha0, alpha1, t_mu, e0: e }
}

/// Streaming form of the iterated envelope: each window starts from the
/// last sample that still fits in the previous one and re-derives `alpha0`
/// from the measured energy and `||v||_2^2` there.
#[derive(Debug, Clone)]
pub struct GronwallEnvelope {
    mu: f64,
    beta: f64,
    mass0: f64,
    segment_start: f64,
    alpha0: f64,
    alpha1: f64,
    t_mu: f64,
    /// previous sample kept as the candidate restart point
    last: Option<(f64, f64, f64)>, // (t, |E|, ||v||^2)
}

impl GronwallEnvelope {
    /// Start the envelope from data measured at the initial sample.
    pub fn new(params: &SDParams, beta: f64, mass0: f64, e0: f64, v_l2_sq0: f64) -> Self {
        let c = constants_from_measurements(e0, mass0, v_l2_sq0, params.mu, beta);
        Self {
            mu: params.mu,
            beta,
            mass0,
            segment_start: 0.0,
            alpha0: c.alpha0,
            alpha1: c.alpha1,
            t_mu: c.t_mu,
            last: None,
        }
    }

    pub fn t_mu(&self) -> f64 {
        self.t_mu
    }

    /// Envelope value for the sample `(t, |E(t)|, ||v(t)||^2, mass(t))`,
    /// restarting the window at the previous sample when `t` falls outside
    /// the current one. The window length is recomputed from the measured
    /// mass at each restart and must agree with the initial one, since the
    /// mass is conserved.
    pub fn advance(&mut self, t: f64, e: f64, v_l2_sq: f64, mass_now: f64) -> Result<f64> {
        if t - self.segment_start > self.t_mu {
            let (ts, es, vs) = self.last.ok_or_else(|| {
                SdError::Config(
                    "diagnostics cadence exceeds the envelope window; record more often".into(),
                )
            })?;
            if t - ts > self.t_mu {
                return Err(SdError::Config(
                    "diagnostics cadence exceeds the envelope window; record more often".into(),
                ));
            }
            let c = constants_from_measurements(es, self.mass0, vs, self.mu, self.beta);
            let t_mu_now = if mass_now == 0.0 {
                f64::INFINITY
            } else {
                self.mu / (4.0 * self.beta.powi(4) * mass_now)
            };
            assert!(
                (t_mu_now - self.t_mu).abs() <= 1e-6 * self.t_mu,
                "window length drifted: {} vs {}; mass is not being conserved",
                t_mu_now,
                self.t_mu
            );
            self.segment_start = ts;
            self.alpha0 = c.alpha0;
            self.alpha1 = c.alpha1;
        }
        self.last = Some((t, e, v_l2_sq));
        Ok(self.alpha0 * (self.alpha1 * (t - self.segment_start)).exp())
    }
}

/// Post-hoc envelope over a recorded trajectory; returns one value per
/// record, aligned with the input.
pub fn envelope_over_records(
    records: &[DiagnosticsRecord],
    params: &SDParams,
    beta: f64,
) -> Result<Vec<f64>> {
    if records.is_empty() {
        return Err(SdError::TooFewRecords { needed: 1, got: 0 });
    }
    let first = &records[0];
    let mut env = GronwallEnvelope::new(params, beta, first.mass, first.energy_a, first.v_l2_sq);
    records
        .iter()
        .map(|r| env.advance(r.t, r.energy_a, r.v_l2_sq, r.mass))
        .collect()
}

/// Iterated exponential bound for the 1D functional `g = f + ||v_x||_2`.
///
/// The window bookkeeping mirrors the 2D envelope. With `M^2 = ||u0||_2^2`
/// conserved, `kappa^4` an upper bound for `||u||_4^4 / (M^2 (M^2 +
/// ||u_x||^2))`, and `||u||_inf^2 <= ||u||_2^2 + ||u_x||_2^2`, the same
/// energy bookkeeping that yields the 2D constants gives, on windows of
/// length `T = mu / (4 kappa^4 M^2)`,
///
/// ```text
/// a0 = 2|E| + 8 kappa^4 M^2 ||v||^2 + 6 ||v||^2 + (7/2) M^2 + 3/(8 kappa^4)
/// a1 = (2/mu) (5 kappa^4 M^2 + 19/4)
/// g(t) <= [a0 + ||v_x|| + 1/(4 kappa^4)] * exp((a1 + 2/mu) (t - t_start))
/// ```
#[derive(Debug, Clone)]
pub struct GEnvelope1d {
    mu: f64,
    kappa4: f64,
    mass0: f64,
    segment_start: f64,
    g0: f64,
    g1: f64,
    t_window: f64,
    last: Option<(f64, f64, f64, f64)>, // (t, |E|, ||v||^2, ||v_x||)
}

impl GEnvelope1d {
    pub fn new(params: &SDParams, kappa: f64, mass0: f64, e0: f64, v_l2_sq0: f64, vx_l2_0: f64) -> Self {
        let kappa4 = kappa.powi(4);
        let t_window =
            if mass0 == 0.0 { f64::INFINITY } else { params.mu / (4.0 * kappa4 * mass0) };
        let (g0, g1) = Self::segment_constants(params.mu, kappa4, mass0, e0, v_l2_sq0, vx_l2_0);
        Self { mu: params.mu, kappa4, mass0, segment_start: 0.0, g0, g1, t_window, last: None }
    }

    fn segment_constants(
        mu: f64,
        kappa4: f64,
        m2: f64,
        e: f64,
        v_l2_sq: f64,
        vx_l2: f64,
    ) -> (f64, f64) {
        let a0 = 2.0 * e.abs()
            + 8.0 * kappa4 * m2 * v_l2_sq
            + 6.0 * v_l2_sq
            + 3.5 * m2
            + 3.0 / (8.0 * kappa4);
        let a1 = (2.0 / mu) * (5.0 * kappa4 * m2 + 4.75);
        (a0 + vx_l2 + 1.0 / (4.0 * kappa4), a1 + 2.0 / mu)
    }

    pub fn advance(&mut self, t: f64, e: f64, v_l2_sq: f64, vx_l2: f64) -> Result<f64> {
        if t - self.segment_start > self.t_window {
            let (ts, es, vs, vxs) = self.last.ok_or_else(|| {
                SdError::Config("sampling cadence exceeds the 1D envelope window".into())
            })?;
            if t - ts > self.t_window {
                return Err(SdError::Config(
                    "sampling cadence exceeds the 1D envelope window".into(),
                ));
            }
            let (g0, g1) =
                Self::segment_constants(self.mu, self.kappa4, self.mass0, es, vs, vxs);
            self.segment_start = ts;
            self.g0 = g0;
            self.g1 = g1;
        }
        self.last = Some((t, e, v_l2_sq, vx_l2));
        Ok(self.g0 * (self.g1 * (t - self.segment_start)).exp())
    }
}
