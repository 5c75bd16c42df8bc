//! Periodic box discretization.
//!
//! A [`Grid`] is a uniform tensor grid on `[0, L)^dim` with the same number
//! of points on every axis. Wavenumbers follow the standard symmetric DFT
//! ordering `{0, 1, ..., n/2 - 1, -n/2, ..., -1}` scaled by `2*pi/L`, so a
//! sample at flat index `j` and a spectral coefficient at flat index `k`
//! pair up through `exp(i x_j . xi_k)` with no extra phase conventions.

use crate::error::{Result, SdError};

/// Uniform periodic grid on `[0, L)^dim`, identical resolution per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
    extent: f64,
    /// Signed wavenumbers `2*pi*k/L` in DFT ordering, shared by all axes.
    wavenumbers: Vec<f64>,
}

impl Grid {
    /// Build a grid, validating dimension, resolution and extent.
    pub fn new(dim: usize, points_per_axis: usize, extent: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(SdError::InvalidDimension(dim));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(SdError::InvalidGridSize(points_per_axis));
        }
        if !extent.is_finite() || extent <= 0.0 {
            return Err(SdError::NonPositiveExtent(extent));
        }
        let n = points_per_axis;
        let tau_over_l = std::f64::consts::TAU / extent;
        let wavenumbers = (0..n)
            .map(|k| {
                let signed = if k < n / 2 { k as isize } else { k as isize - n as isize };
                signed as f64 * tau_over_l
            })
            .collect();
        Ok(Self { dim, points_per_axis, extent, wavenumbers })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Grid spacing `L / n`.
    pub fn spacing(&self) -> f64 {
        self.extent / self.points_per_axis as f64
    }

    /// Total number of samples `n^dim`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `spacing^dim` of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Signed wavenumber table (one axis; all axes share it).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Split a flat row-major index into per-axis indices (axis 0 slowest).
    #[inline]
    pub fn axis_indices(&self, mut flat: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        let mut out = [0usize; 3];
        for axis in (0..self.dim).rev() {
            out[axis] = flat % n;
            flat /= n;
        }
        out
    }

    /// Wavenumber vector at a flat spectral index; only the first `dim`
    /// entries are meaningful.
    #[inline]
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let idx = self.axis_indices(flat);
        let mut xi = [0.0; 3];
        for axis in 0..self.dim {
            xi[axis] = self.wavenumbers[idx[axis]];
        }
        xi
    }

    /// `|xi|^2` at a flat spectral index.
    #[inline]
    pub fn wavevector_norm_sq(&self, flat: usize) -> f64 {
        let xi = self.wavevector(flat);
        let mut s = 0.0;
        for x in xi.iter().take(self.dim) {
            s += x * x;
        }
        s
    }

    /// Spatial coordinates of a flat sample index; first `dim` entries valid.
    #[inline]
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.axis_indices(flat);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = idx[axis] as f64 * h;
        }
        x
    }

    /// Box center, handy for placing localized initial data.
    pub fn center(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for a in c.iter_mut().take(self.dim) {
            *a = 0.5 * self.extent;
        }
        c
    }
}

/// Free-function form of [`Grid::new`].
pub fn make_grid(dim: usize, points_per_axis: usize, extent: f64) -> Result<Grid> {
    Grid::new(dim, points_per_axis, extent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn wavenumbers_on_tau_box_are_integers() {
        let g = Grid::new(1, 8, TAU).unwrap();
        let expect = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (w, e) in g.wavenumbers().iter().zip(expect) {
            assert!((w - e).abs() < 1e-14, "got {w}, want {e}");
        }
    }

    #[test]
    fn spacing_2d() {
        let g = Grid::new(2, 128, 20.0).unwrap();
        assert_eq!(g.spacing(), 0.15625);
        assert_eq!(g.spacing() * g.points_per_axis() as f64, g.extent());
        assert_eq!(g.len(), 128 * 128);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(Grid::new(3, 4, 1.0), Err(SdError::InvalidGridSize(4))));
        assert!(matches!(Grid::new(0, 8, 1.0), Err(SdError::InvalidDimension(0))));
        assert!(matches!(Grid::new(4, 8, 1.0), Err(SdError::InvalidDimension(4))));
        assert!(matches!(Grid::new(2, 12, 1.0), Err(SdError::InvalidGridSize(12))));
        assert!(matches!(Grid::new(2, 16, 0.0), Err(SdError::NonPositiveExtent(_))));
        assert!(matches!(Grid::new(2, 16, -3.0), Err(SdError::NonPositiveExtent(_))));
    }

    #[test]
    fn wavenumber_table_antisymmetric_below_nyquist() {
        let g = Grid::new(1, 32, 5.5).unwrap();
        let w = g.wavenumbers();
        let n = g.points_per_axis();
        for j in 1..n / 2 {
            assert_eq!(w[n - j], -w[j]);
        }
    }

    #[test]
    fn flat_index_roundtrip_3d() {
        let g = Grid::new(3, 8, 2.0).unwrap();
        let n = g.points_per_axis();
        for flat in [0, 1, 7, 8, 63, 64, 511] {
            let idx = g.axis_indices(flat);
            assert_eq!((idx[0] * n + idx[1]) * n + idx[2], flat);
        }
    }
}
