//! Discrete space-time restriction norms and empirical bilinear-estimate
//! probes.
//!
//! For a function on the space-time lattice the two norms are
//!
//! ```text
//! ||u||_{X^{s,b}}   = || <xi>^s <tau + |xi|^2/2>^b  u_hat(xi, tau) ||_2
//! ||v||_{H^{l,c}}   = || <xi>^l <tau>^c             v_hat(xi, tau) ||_2
//! ```
//!
//! with the bracket `<.> = 1 + |.|`. The modulation `tau + |xi|^2/2`
//! vanishes exactly on free solutions, which is what makes `X^{s,b}` the
//! restriction norm adapted to the Schrödinger group.
//!
//! Caveat: the continuum norms live on all of space-time; here they are
//! estimated from a finite windowed trace with a temporal taper standing in
//! for the compact-in-time support assumption. The estimated constants
//! depend on the taper shape, so the bilinear ratio experiments are
//! qualitative probes of boundedness, not certified bounds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftDirection;

use crate::error::{Result, SdError};
use crate::fft::{plan, transform_all_axes};
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;

/// Accept `(s, l)` only inside the admissible region
/// `max{0, s-1} <= l <= min{2s, s+1}`; the error names the first violated
/// inequality.
pub fn region_w_check(s: f64, ell: f64) -> Result<()> {
    let fail = |violated: &str| {
        Err(SdError::OutsideRegionW { s, ell, violated: violated.to_string() })
    };
    if ell.is_nan() || ell < 0.0 {
        return fail("ell >= 0");
    }
    if ell.is_nan() || s.is_nan() || ell < s - 1.0 {
        return fail("ell >= s - 1");
    }
    if ell > 2.0 * s {
        return fail("ell <= 2s");
    }
    if ell > s + 1.0 {
        return fail("ell <= s + 1");
    }
    Ok(())
}

/// Exponent set for the bilinear experiments; `(s, ell)` is validated
/// against the admissible region on construction, `b` and `c` are the
/// "slightly above one half" exponents of the two norms.
#[derive(Debug, Clone, Copy)]
pub struct BourgainParams {
    pub s: f64,
    pub ell: f64,
    pub b: f64,
    pub c: f64,
}

impl BourgainParams {
    pub fn new(s: f64, ell: f64, b: f64, c: f64) -> Result<Self> {
        region_w_check(s, ell)?;
        Ok(Self { s, ell, b, c })
    }

    /// `b = c = 1/2 + eps`, the standard choice.
    pub fn with_eps(s: f64, ell: f64, eps: f64) -> Result<Self> {
        Self::new(s, ell, 0.5 + eps, 0.5 + eps)
    }
}

/// Temporal window applied before the time transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Taper {
    /// Raised cosine (Hann), vanishing at both ends of the window.
    #[default]
    RaisedCosine,
    /// No windowing; only appropriate for traces that already vanish at the
    /// window ends.
    None,
}

impl Taper {
    fn weight(self, j: usize, m: usize) -> f64 {
        match self {
            Taper::None => 1.0,
            Taper::RaisedCosine => {
                if m < 2 {
                    1.0
                } else {
                    let phase = std::f64::consts::TAU * j as f64 / (m - 1) as f64;
                    0.5 * (1.0 - phase.cos())
                }
            }
        }
    }
}

/// A stack of snapshots on a uniform time mesh: the discrete stand-in for a
/// compactly-supported space-time function. Stored time-major.
#[derive(Debug, Clone)]
pub struct SpaceTimeTrace {
    pub grid: Grid,
    pub dt: f64,
    pub taper: Taper,
    snapshots: usize,
    values: Vec<Complex64>,
}

impl SpaceTimeTrace {
    pub fn from_complex_snapshots(
        snapshots: &[ComplexField],
        dt: f64,
        taper: Taper,
    ) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(SdError::SingleSnapshot);
        }
        if dt.is_nan() || dt <= 0.0 {
            return Err(SdError::Config(format!("trace dt must be positive, got {dt}")));
        }
        let grid = snapshots[0].grid.clone();
        let mut values = Vec::with_capacity(snapshots.len() * grid.len());
        for s in snapshots {
            if s.grid != grid {
                return Err(SdError::GridMismatch);
            }
            values.extend_from_slice(&s.values);
        }
        Ok(Self { grid, dt, taper, snapshots: snapshots.len(), values })
    }

    pub fn from_real_snapshots(snapshots: &[RealField], dt: f64, taper: Taper) -> Result<Self> {
        let complex: Vec<ComplexField> = snapshots.iter().map(RealField::to_complex).collect();
        Self::from_complex_snapshots(&complex, dt, taper)
    }

    pub fn len_time(&self) -> usize {
        self.snapshots
    }

    /// Pointwise product trace `self * other` (used for `u v`).
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self { grid: self.grid.clone(), dt: self.dt, taper: self.taper, snapshots: self.snapshots, values })
    }

    /// Pointwise `self * conj(other)` (used for `u conj(w)`).
    pub fn conj_product(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).collect();
        Ok(Self { grid: self.grid.clone(), dt: self.dt, taper: self.taper, snapshots: self.snapshots, values })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            dt: self.dt,
            taper: self.taper,
            snapshots: self.snapshots,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.snapshots != other.snapshots || self.dt != other.dt {
            return Err(SdError::GridMismatch);
        }
        Ok(())
    }

    /// Taper, then transform in space and in time; returns the unnormalized
    /// double DFT, time-major.
    fn transform(&self) -> Result<Vec<Complex64>> {
        let m = self.snapshots;
        if m < 2 {
            return Err(SdError::SingleSnapshot);
        }
        let vol = self.grid.len();
        let mut work = self.values.clone();
        for (j, chunk) in work.chunks_mut(vol).enumerate() {
            let w = self.taper.weight(j, m);
            for z in chunk.iter_mut() {
                *z *= w;
            }
            transform_all_axes(chunk, &self.grid, FftDirection::Forward);
        }
        let fft_t = plan(m, FftDirection::Forward);
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..vol {
            for j in 0..m {
                line[j] = work[j * vol + k];
            }
            fft_t.process(&mut line);
            for j in 0..m {
                work[j * vol + k] = line[j];
            }
        }
        Ok(work)
    }

    /// Signed temporal frequency of time-index `j`.
    fn tau(&self, j: usize) -> f64 {
        let m = self.snapshots;
        let signed = if j < m / 2 { j as isize } else { j as isize - m as isize };
        signed as f64 * std::f64::consts::TAU / (m as f64 * self.dt)
    }

    /// Weighted space-time L2 over the double transform; the weight maps
    /// `(xi, tau)` to a nonnegative factor. Normalized so that zero weights
    /// reproduce the physical space-time L2 of the tapered trace.
    fn weighted_l2(&self, weight: impl Fn(f64, f64) -> f64) -> Result<f64> {
        let spec = self.transform()?;
        let vol = self.grid.len();
        let m = self.snapshots;
        let mut sum = 0.0;
        for (j, chunk) in spec.chunks(vol).enumerate() {
            let tau = self.tau(j);
            for (k, z) in chunk.iter().enumerate() {
                let xi2 = self.grid.wavevector_norm_sq(k);
                let w = weight(xi2, tau);
                sum += w * w * z.norm_sqr();
            }
        }
        let space = self.grid.extent().powi(self.grid.dim() as i32)
            / (self.grid.len() as f64 * self.grid.len() as f64);
        let time = self.dt / m as f64;
        Ok((sum * space * time).sqrt())
    }
}

#[inline]
fn bracket(x: f64) -> f64 {
    1.0 + x.abs()
}

/// Restriction norm adapted to the Schrödinger group: weight
/// `<xi>^s <tau + |xi|^2/2>^b`.
pub fn bourgain_norm_u(trace: &SpaceTimeTrace, s: f64, b: f64) -> Result<f64> {
    trace.weighted_l2(|xi2, tau| {
        bracket(xi2.sqrt()).powf(s) * bracket(tau + 0.5 * xi2).powf(b)
    })
}

/// Plain space-time Sobolev norm: weight `<xi>^l <tau>^c`.
pub fn restriction_norm_v(trace: &SpaceTimeTrace, ell: f64, c: f64) -> Result<f64> {
    trace.weighted_l2(|xi2, tau| bracket(xi2.sqrt()).powf(ell) * bracket(tau).powf(c))
}

/// Forced modulation gap `(|xi1|^2 - |xi2|^2) / 2` of an interacting
/// frequency pair under the convolution constraint `xi = xi1 - xi2`.
pub fn resonance_gap(xi1: &[f64], xi2: &[f64]) -> f64 {
    let n1: f64 = xi1.iter().map(|x| x * x).sum();
    let n2: f64 = xi2.iter().map(|x| x * x).sum();
    0.5 * (n1 - n2)
}

/// Ratio statistics over an ensemble; zero-denominator members are skipped
/// and counted.
#[derive(Debug, Clone)]
pub struct RatioStats {
    pub ratios: Vec<f64>,
    pub max: f64,
    pub mean: f64,
    pub skipped: usize,
}

impl RatioStats {
    fn from_ratios(mut ratios: Vec<f64>, skipped: usize) -> Result<Self> {
        if ratios.is_empty() {
            return Err(SdError::EmptyEnsemble);
        }
        ratios.sort_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
        let max = *ratios.last().expect("nonempty");
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        Ok(Self { ratios, max, mean, skipped })
    }

    /// Uniform histogram over `[0, max]`.
    pub fn histogram(&self, bins: usize) -> Vec<usize> {
        let bins = bins.max(1);
        let mut counts = vec![0usize; bins];
        if self.max == 0.0 {
            counts[0] = self.ratios.len();
            return counts;
        }
        for r in &self.ratios {
            let idx = ((r / self.max) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        counts
    }
}

/// Ratio `||u v||_{X^{s,-b1}} / (||u||_{X^{s,b2}} ||v||_{H^{l,c}})` per
/// member, with `b1 = 1/2 - eps1`, `b2 = p.b`, `c = p.c`.
pub fn bilinear_ratio_uv(
    members: &[(SpaceTimeTrace, SpaceTimeTrace)],
    p: &BourgainParams,
    eps1: f64,
) -> Result<RatioStats> {
    let b1 = 0.5 - eps1;
    let results: Vec<Option<f64>> = members
        .par_iter()
        .map(|(u, v)| -> Result<Option<f64>> {
            let denom = bourgain_norm_u(u, p.s, p.b)? * restriction_norm_v(v, p.ell, p.c)?;
            if denom == 0.0 {
                return Ok(None);
            }
            let num = bourgain_norm_u(&u.product(v)?, p.s, -b1)?;
            Ok(Some(num / denom))
        })
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    RatioStats::from_ratios(results.into_iter().flatten().collect(), skipped)
}

/// Ratio `||u conj(w)||_{H^{l,-b}} / (||u||_{X^{s,b3}} ||w||_{X^{s,b3}})`
/// per member, with `b = 1/2 - eps`, `b3 = p.b`.
pub fn bilinear_ratio_uw(
    members: &[(SpaceTimeTrace, SpaceTimeTrace)],
    p: &BourgainParams,
    eps: f64,
) -> Result<RatioStats> {
    let b = 0.5 - eps;
    let results: Vec<Option<f64>> = members
        .par_iter()
        .map(|(u, w)| -> Result<Option<f64>> {
            let denom = bourgain_norm_u(u, p.s, p.b)? * bourgain_norm_u(w, p.s, p.b)?;
            if denom == 0.0 {
                return Ok(None);
            }
            let num = restriction_norm_v(&u.conj_product(w)?, p.ell, -b)?;
            Ok(Some(num / denom))
        })
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    RatioStats::from_ratios(results.into_iter().flatten().collect(), skipped)
}

/// Seeded random band-limited trace: random coefficients on the space-time
/// spectral lattice up to `space_cut`/`time_cut` signed indices, transformed
/// to physical space. `real` Hermitian-symmetrizes by taking the real part,
/// for `v`-like members.
#[allow(clippy::too_many_arguments)]
pub fn random_bandlimited_trace(
    grid: &Grid,
    m_times: usize,
    dt: f64,
    space_cut: usize,
    time_cut: usize,
    taper: Taper,
    real: bool,
    rng: &mut ChaCha8Rng,
) -> Result<SpaceTimeTrace> {
    let vol = grid.len();
    let n = grid.points_per_axis();
    let mut spec = vec![Complex64::new(0.0, 0.0); m_times * vol];
    for (j, chunk) in spec.chunks_mut(vol).enumerate() {
        let jt = if j < m_times / 2 { j } else { m_times - j };
        if jt > time_cut {
            continue;
        }
        for (k, z) in chunk.iter_mut().enumerate() {
            let idx = grid.axis_indices(k);
            let in_band = idx.iter().take(grid.dim()).all(|&i| {
                let signed = if i < n / 2 { i } else { n - i };
                signed <= space_cut
            });
            if in_band {
                *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
    }
    // inverse transform: spatial per snapshot, then temporal lines
    let fft_t = plan(m_times, FftDirection::Inverse);
    let mut line = vec![Complex64::new(0.0, 0.0); m_times];
    for k in 0..vol {
        for j in 0..m_times {
            line[j] = spec[j * vol + k];
        }
        fft_t.process(&mut line);
        for j in 0..m_times {
            spec[j * vol + k] = line[j] / m_times as f64;
        }
    }
    let snapshots: Vec<ComplexField> = spec
        .chunks(vol)
        .map(|chunk| {
            let mut field = ComplexField { grid: grid.clone(), values: chunk.to_vec() };
            transform_all_axes(&mut field.values, grid, FftDirection::Inverse);
            let scale = 1.0 / vol as f64;
            for z in &mut field.values {
                *z *= scale;
                if real {
                    *z = Complex64::new(z.re, 0.0);
                }
            }
            field
        })
        .collect();
    SpaceTimeTrace::from_complex_snapshots(&snapshots, dt, taper)
}

/// Ensemble of `(u, v)` trace pairs for the product estimates; `v` members
/// are real-valued.
#[allow(clippy::too_many_arguments)]
pub fn random_trace_ensemble(
    grid: &Grid,
    m_times: usize,
    dt: f64,
    space_cut: usize,
    time_cut: usize,
    taper: Taper,
    count: usize,
    seed: u64,
) -> Result<Vec<(SpaceTimeTrace, SpaceTimeTrace)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u =
                random_bandlimited_trace(grid, m_times, dt, space_cut, time_cut, taper, false, &mut rng)?;
            let v =
                random_bandlimited_trace(grid, m_times, dt, space_cut, time_cut, taper, true, &mut rng)?;
            Ok((u, v))
        })
        .collect()
}
