//! Calibrate the Gagliardo-Nirenberg constant empirically: take the largest
//! ratio `||u||_4^4 / (||u||_2^2 ||grad u||_2^2)` over an ensemble of test
//! fields and inflate it by a safety factor. The centered Gaussian attains
//! `1/(2 pi)` exactly, and in two dimensions the ratio is invariant under
//! both amplitude scaling and dilation.

use sd_spectral::field::ComplexField;
use sd_spectral::gronwall::{calibrate_beta, default_calibration_ensemble, gn_ratio};
use sd_spectral::Grid;

fn main() -> sd_spectral::Result<()> {
    let grid = Grid::new(2, 128, 20.0)?;

    let gaussian = ComplexField::gaussian(&grid, 1.0, 1.0, &grid.center()[..2]);
    println!("gaussian ratio          = {:.9}", gn_ratio(&gaussian)?);
    println!("1/(2 pi)                = {:.9}", 1.0 / (2.0 * std::f64::consts::PI));

    for width in [0.5, 2.0] {
        let dilated = ComplexField::gaussian(&grid, 1.0, width, &grid.center()[..2]);
        println!("dilated (width {width})     = {:.9}", gn_ratio(&dilated)?);
    }

    let ensemble = default_calibration_ensemble(&grid, 7, 12);
    let mut worst = 0.0f64;
    for u in &ensemble {
        worst = worst.max(gn_ratio(u)?);
    }
    let beta = calibrate_beta(&ensemble, 2.0)?;
    println!("ensemble size           = {}", ensemble.len());
    println!("max ratio over ensemble = {worst:.9}");
    println!("beta (safety 2)         = {beta:.9}");
    println!("beta^4                  = {:.9}", beta.powi(4));
    Ok(())
}
