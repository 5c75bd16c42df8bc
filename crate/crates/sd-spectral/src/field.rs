//! Sampled fields on a periodic grid.

use num_complex::Complex64;

use crate::error::{Result, SdError};
use crate::grid::Grid;

/// Complex-valued samples, row-major over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

/// Real-valued samples, row-major over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ComplexField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Sample a function of position over the grid.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let dim = grid.dim();
        let values = (0..grid.len())
            .map(|j| {
                let x = grid.position(j);
                f(&x[..dim])
            })
            .collect();
        Self { grid: grid.clone(), values }
    }

    /// Centered isotropic Gaussian `amplitude * exp(-|x - center|^2 / (2 width^2))`.
    pub fn gaussian(grid: &Grid, amplitude: f64, width: f64, center: &[f64]) -> Self {
        let two_w2 = 2.0 * width * width;
        Self::from_fn(grid, |x| {
            let mut r2 = 0.0;
            for (xi, ci) in x.iter().zip(center) {
                r2 += (xi - ci) * (xi - ci);
            }
            Complex64::new(amplitude * (-r2 / two_w2).exp(), 0.0)
        })
    }

    pub fn constant(grid: &Grid, value: Complex64) -> Self {
        Self { grid: grid.clone(), values: vec![value; grid.len()] }
    }

    /// Plane wave `amplitude * exp(i xi0 . x)` with `xi0` given by integer
    /// mode indices so it lies exactly on the grid's wavenumber lattice.
    pub fn plane_wave(grid: &Grid, mode: &[i64], amplitude: Complex64) -> Self {
        let tau_over_l = std::f64::consts::TAU / grid.extent();
        Self::from_fn(grid, |x| {
            let mut phase = 0.0;
            for (xi, ki) in x.iter().zip(mode) {
                phase += *ki as f64 * tau_over_l * xi;
            }
            amplitude * Complex64::new(0.0, phase).exp()
        })
    }

    /// Pointwise squared magnitude `|u|^2`.
    pub fn abs_sq(&self) -> RealField {
        RealField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Error out if the two fields live on different grids.
    pub fn check_same_grid(&self, other: &RealField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(SdError::GridMismatch)
        }
    }
}

impl RealField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self { grid: grid.clone(), values: vec![value; grid.len()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let dim = grid.dim();
        let values = (0..grid.len())
            .map(|j| {
                let x = grid.position(j);
                f(&x[..dim])
            })
            .collect();
        Self { grid: grid.clone(), values }
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Anything with a grid and sample magnitudes; lets the norm routines accept
/// both field kinds.
pub trait SampledField {
    fn grid(&self) -> &Grid;
    fn sample_abs(&self, j: usize) -> f64;
    fn len(&self) -> usize {
        self.grid().len()
    }
    fn is_empty(&self) -> bool {
        false
    }
}

impl SampledField for ComplexField {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    #[inline]
    fn sample_abs(&self, j: usize) -> f64 {
        self.values[j].norm()
    }
}

impl SampledField for RealField {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    #[inline]
    fn sample_abs(&self, j: usize) -> f64 {
        self.values[j].abs()
    }
}
