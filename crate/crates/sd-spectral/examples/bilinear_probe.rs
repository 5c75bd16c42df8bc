//! Empirical probes of the two bilinear estimates behind the local theory:
//! ratios of space-time restriction norms over an ensemble of random
//! band-limited tapered traces.
//!
//! These are qualitative experiments: the discrete windowed norms depend on
//! the temporal taper, so the interesting outputs are finiteness, exact
//! scale invariance, and stability of the maximum as the ensemble grows.

use sd_spectral::bourgain::{
    bilinear_ratio_uv, bilinear_ratio_uw, random_trace_ensemble, region_w_check, BourgainParams,
    Taper,
};
use sd_spectral::Grid;

fn main() -> sd_spectral::Result<()> {
    let grid = Grid::new(2, 16, 4.0)?;
    let (s, ell, eps) = (1.0, 0.0, 0.05);
    region_w_check(s, ell)?;
    let p = BourgainParams::with_eps(s, ell, eps)?;

    for count in [100, 200] {
        let members =
            random_trace_ensemble(&grid, 16, 0.1, 4, 4, Taper::RaisedCosine, count, 42)?;
        let uv = bilinear_ratio_uv(&members, &p, eps)?;
        let uw = bilinear_ratio_uw(&members, &p, eps)?;
        println!(
            "{count:>4} members | uv: max {:.4e} mean {:.4e} | uw: max {:.4e} mean {:.4e}",
            uv.max, uv.mean, uw.max, uw.mean
        );
        if count == 200 {
            print!("histogram of uv ratios (10 bins up to max):");
            for c in uv.histogram(10) {
                print!(" {c}");
            }
            println!();
        }
    }

    // lattice points outside the admissible region are rejected by name
    for (s, ell) in [(0.0, 1.0), (2.0, 0.5), (3.0, 4.5)] {
        if let Err(e) = region_w_check(s, ell) {
            println!("rejected: {e}");
        }
    }
    Ok(())
}
