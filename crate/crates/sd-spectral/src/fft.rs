//! Discrete Fourier transforms and Fourier multipliers.
//!
//! Normalization: the forward transform is the plain unnormalized DFT
//! `F_k = sum_j f_j exp(-i x_j . xi_k)`; the inverse carries the `1/n^dim`
//! factor, so `inverse(forward(f)) == f`. The physical-space L2 norm relates
//! to the spectral one through `||f||_2 = L^(dim/2) / n^dim * ||F||_2`; the
//! norm routines in [`crate::norms`] fold that constant in.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Result, SdError};
use crate::field::ComplexField;
use crate::grid::Grid;

/// Process-wide plan cache; rustfft plans are immutable and shareable.
type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

pub(crate) fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<PlanCache> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, matches!(direction, FftDirection::Forward));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

/// In-place DFT along every axis of a row-major hypercube.
pub(crate) fn transform_all_axes(values: &mut [Complex64], grid: &Grid, direction: FftDirection) {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let fft = plan(n, direction);
    let mut line = vec![Complex64::new(0.0, 0.0); n];

    // Axis `a` has stride n^(dim-1-a); the last axis is contiguous.
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n; // span of one full line set along this axis
        let lines_per_block = stride;
        let blocks = values.len() / block;
        for b in 0..blocks {
            let base = b * block;
            for l in 0..lines_per_block {
                let start = base + l;
                if stride == 1 {
                    fft.process(&mut values[start..start + n]);
                } else {
                    for j in 0..n {
                        line[j] = values[start + j * stride];
                    }
                    fft.process(&mut line);
                    for j in 0..n {
                        values[start + j * stride] = line[j];
                    }
                }
            }
        }
    }
}

/// Unnormalized forward DFT of a field; the result lives on the same grid
/// with row-major spectral indices in DFT ordering.
pub fn forward_transform(f: &ComplexField) -> ComplexField {
    let mut out = f.clone();
    transform_all_axes(&mut out.values, &f.grid, FftDirection::Forward);
    out
}

/// Inverse DFT carrying the `1/n^dim` normalization.
pub fn inverse_transform(f: &ComplexField) -> ComplexField {
    let mut out = f.clone();
    transform_all_axes(&mut out.values, &f.grid, FftDirection::Inverse);
    let scale = 1.0 / f.grid.len() as f64;
    for v in &mut out.values {
        *v *= scale;
    }
    out
}

/// Apply a Fourier multiplier `m(xi)`: transform, multiply pointwise in
/// spectral space, transform back. Errors if `m` is non-finite anywhere on
/// the grid's wavenumber lattice.
pub fn apply_multiplier(
    f: &ComplexField,
    m: impl Fn(&[f64]) -> Complex64,
) -> Result<ComplexField> {
    let dim = f.grid.dim();
    let mut spec = forward_transform(f);
    for (k, v) in spec.values.iter_mut().enumerate() {
        let xi = spec.grid.wavevector(k);
        let mk = m(&xi[..dim]);
        if !mk.re.is_finite() || !mk.im.is_finite() {
            return Err(SdError::NonFiniteMultiplier { xi: xi[..dim].to_vec() });
        }
        *v *= mk;
    }
    Ok(inverse_transform(&spec))
}

/// Multiplier given directly as a function of `|xi|^2`; used by the solver
/// hot path where the symbol is known to be finite and unimodular.
pub(crate) fn apply_symbol_of_k2(f: &ComplexField, m: impl Fn(f64) -> Complex64) -> ComplexField {
    let mut spec = forward_transform(f);
    for (k, v) in spec.values.iter_mut().enumerate() {
        *v *= m(spec.grid.wavevector_norm_sq(k));
    }
    inverse_transform(&spec)
}

/// Largest occupied mode index per axis (ignoring coefficients below `tol`
/// relative to the spectral peak). Used by the resampler to detect aliasing.
fn occupied_band(spec: &ComplexField, tol: f64) -> usize {
    let n = spec.grid.points_per_axis();
    let peak = spec.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0;
    }
    let mut band = 0usize;
    for (k, z) in spec.values.iter().enumerate() {
        if z.norm() > tol * peak {
            let idx = spec.grid.axis_indices(k);
            for &i in idx.iter().take(spec.grid.dim()) {
                let signed = if i < n / 2 { i } else { n - i };
                band = band.max(signed);
            }
        }
    }
    band
}

/// Spectral interpolation onto a grid with a different resolution (same
/// extent): pads or truncates the spectrum by signed mode index. Truncation
/// that would discard occupied modes is reported as aliasing.
pub fn resample(f: &ComplexField, new_points: usize) -> Result<ComplexField> {
    let src = &f.grid;
    let dst = Grid::new(src.dim(), new_points, src.extent())?;
    if new_points == src.points_per_axis() {
        return Ok(ComplexField { grid: dst, values: f.values.clone() });
    }
    let spec = forward_transform(f);
    if new_points < src.points_per_axis() {
        let occupied = occupied_band(&spec, 1e-13);
        let available = new_points / 2 - 1;
        if occupied > available {
            return Err(SdError::Aliasing { occupied, available });
        }
    }

    let n_src = src.points_per_axis();
    let n_dst = new_points;
    let dim = src.dim();
    let mut out_spec = ComplexField::zeros(&dst);
    // Copy coefficients whose signed index is representable on both grids.
    let half = n_src.min(n_dst) / 2;
    let mut idx_dst = [0usize; 3];
    for (k, z) in spec.values.iter().enumerate() {
        let idx = spec.grid.axis_indices(k);
        let mut ok = true;
        for a in 0..dim {
            let i = idx[a];
            let signed: isize =
                if i < n_src / 2 { i as isize } else { i as isize - n_src as isize };
            if signed.unsigned_abs() > half || signed.unsigned_abs() == n_dst / 2 {
                ok = false;
                break;
            }
            idx_dst[a] = signed.rem_euclid(n_dst as isize) as usize;
        }
        if !ok {
            continue;
        }
        let mut flat = 0usize;
        for &i in idx_dst.iter().take(dim) {
            flat = flat * n_dst + i;
        }
        out_spec.values[flat] = *z;
    }
    // Forward was unnormalized on the source grid; rescale so the inverse on
    // the destination grid reproduces the same band-limited function.
    let scale = (n_dst as f64 / n_src as f64).powi(dim as i32);
    for v in &mut out_spec.values {
        *v *= scale;
    }
    Ok(inverse_transform(&out_spec))
}

/// Seeded random band-limited field: uniform random coefficients on every
/// mode with per-axis signed index at most `cutoff`, transformed to
/// physical space.
pub fn random_bandlimited_field(
    grid: &Grid,
    cutoff: usize,
    rng: &mut impl rand::Rng,
) -> ComplexField {
    let n = grid.points_per_axis();
    let mut spec = ComplexField::zeros(grid);
    for (k, z) in spec.values.iter_mut().enumerate() {
        let idx = grid.axis_indices(k);
        let in_band = idx.iter().take(grid.dim()).all(|&i| {
            let signed = if i < n / 2 { i } else { n - i };
            signed <= cutoff
        });
        if in_band {
            *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    inverse_transform(&spec)
}

/// Two-thirds rule: zero every spectral coefficient with any axis index
/// above `n/3`.
pub fn dealias_two_thirds(f: &ComplexField) -> ComplexField {
    let n = f.grid.points_per_axis();
    let cutoff = n / 3;
    let dim = f.grid.dim();
    let mut spec = forward_transform(f);
    for (k, v) in spec.values.iter_mut().enumerate() {
        let idx = spec.grid.axis_indices(k);
        for &i in idx.iter().take(dim) {
            let signed = if i < n / 2 { i } else { n - i };
            if signed > cutoff {
                *v = Complex64::new(0.0, 0.0);
                break;
            }
        }
    }
    inverse_transform(&spec)
}
