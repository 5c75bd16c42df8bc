//! Pseudospectral simulator and analysis toolkit for the Schrödinger-Debye
//! system on periodic boxes in one, two and three dimensions.
//!
//! The system couples a cubic Schrödinger equation to a Debye relaxation
//! equation for the medium response:
//!
//! ```text
//!   i u_t + (1/2) Lap u = u v
//!   mu v_t + v          = lambda |u|^2,   mu > 0, lambda = +-1
//! ```
//!
//! The crate provides:
//!
//! * [`grid`], [`field`], [`fft`], [`norms`] - periodic grids, DFTs,
//!   Fourier multipliers, and the norms and functionals built on them;
//! * [`dynamics`] - an exact-substep Strang splitting integrator, a cubic
//!   NLS reference integrator, and the relaxation-scaling map between
//!   different values of `mu`;
//! * [`picard`] - an independent fixed-point solver on the integral
//!   (Duhamel) form of the equations, used to cross-validate the splitting
//!   integrator;
//! * [`diagnostics`], [`gronwall`] - mass, the two equivalent energy
//!   forms, the energy production identity, and the iterated exponential
//!   a-priori envelope for `f(t) = ||grad u||^2 + ||v||^2`;
//! * [`bourgain`] - discrete space-time restriction norms and empirical
//!   bilinear-estimate probes;
//! * [`scenario`], [`snapshot`], [`config`] - named reproducible
//!   experiments with CSV/JSON/binary outputs;
//! * [`cli`] - the `sd-spectral` command-line front end.
//!
//! See the crate examples for one runnable program per capability.

pub mod bourgain;
pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod gronwall;
pub mod norms;
pub mod picard;
pub mod scenario;
pub mod snapshot;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Result, SdError};
pub use field::{ComplexField, RealField};
pub use grid::Grid;
