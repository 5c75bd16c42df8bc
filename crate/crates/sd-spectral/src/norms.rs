//! Norms and scalar functionals.
//!
//! Physical-space integrals use the plain Riemann sum with weight
//! `spacing^dim`, which is spectrally accurate for smooth periodic
//! integrands. Spectral-side norms fold in the Parseval constant
//! `L^(dim/2) / n^dim` matching the transform normalization in
//! [`crate::fft`]. The Sobolev bracket is `<xi> = 1 + |xi|`.

use crate::error::{Result, SdError};
use crate::fft::forward_transform;
use crate::field::{ComplexField, SampledField};
use crate::grid::Grid;

/// Order of an Lp norm; `Infinity` takes the max of `|f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormOrder {
    P(f64),
    Infinity,
}

impl NormOrder {
    fn validate(self) -> Result<Self> {
        match self {
            NormOrder::P(p) if p.is_nan() || p < 1.0 => Err(SdError::InvalidNormOrder(p)),
            ok => Ok(ok),
        }
    }
}

/// `(sum |f|^p h^dim)^(1/p)`, or `max |f|` for the infinity order.
pub fn lp_norm(f: &impl SampledField, order: NormOrder) -> Result<f64> {
    match order.validate()? {
        NormOrder::Infinity => Ok((0..f.len()).map(|j| f.sample_abs(j)).fold(0.0, f64::max)),
        NormOrder::P(p) => {
            let vol = f.grid().cell_volume();
            if p == 2.0 {
                // dominant case; avoid powf
                let s: f64 = (0..f.len())
                    .map(|j| {
                        let a = f.sample_abs(j);
                        a * a
                    })
                    .sum();
                Ok((s * vol).sqrt())
            } else {
                let s: f64 = (0..f.len()).map(|j| f.sample_abs(j).powf(p)).sum();
                Ok((s * vol).powf(1.0 / p))
            }
        }
    }
}

/// Convenience for the ubiquitous `||f||_2`.
pub fn l2_norm(f: &impl SampledField) -> f64 {
    lp_norm(f, NormOrder::P(2.0)).expect("p = 2 is always valid")
}

/// `||u||_2^2`, the conserved mass of the Schrödinger component.
pub fn mass(u: &impl SampledField) -> f64 {
    let vol = u.grid().cell_volume();
    let s: f64 = (0..u.len())
        .map(|j| {
            let a = u.sample_abs(j);
            a * a
        })
        .sum();
    s * vol
}

/// Parseval constant mapping raw spectral sums to physical L2 norms.
fn spectral_weight(grid: &Grid) -> f64 {
    grid.extent().powf(grid.dim() as f64 / 2.0) / grid.len() as f64
}

/// `|| <xi>^s u_hat ||_2` with the bracket `<xi> = 1 + |xi|`.
pub fn sobolev_norm(u: &ComplexField, s: f64) -> f64 {
    let spec = forward_transform(u);
    let sum: f64 = spec
        .values
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let bracket = 1.0 + spec.grid.wavevector_norm_sq(k).sqrt();
            bracket.powf(2.0 * s) * z.norm_sqr()
        })
        .sum();
    spectral_weight(&u.grid) * sum.sqrt()
}

/// `|| grad u ||_2` computed spectrally as `|| |xi| u_hat ||_2`.
pub fn gradient_l2(u: &ComplexField) -> f64 {
    let spec = forward_transform(u);
    let sum: f64 = spec
        .values
        .iter()
        .enumerate()
        .map(|(k, z)| spec.grid.wavevector_norm_sq(k) * z.norm_sqr())
        .sum();
    spectral_weight(&u.grid) * sum.sqrt()
}
