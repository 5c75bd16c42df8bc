//! The vanishing-delay limit: with equilibrium data `v0 = lambda |u0|^2`,
//! shrinking the relaxation time `mu` drives the system toward the cubic
//! NLS equation. The final-time L2 distance to the NLS reference decays
//! roughly linearly in `mu`.

use sd_spectral::config::ConfigMap;
use sd_spectral::scenario::{nls_limit_study, ScenarioConfig};

fn main() -> sd_spectral::Result<()> {
    let mut map = ConfigMap::defaults();
    map.set("name", "limit-demo")?;
    map.set("grid.points", "64")?;
    map.set("grid.extent", "12.0")?;
    map.set("params.lambda", "1")?;
    map.set("step.dt", "5e-4")?;
    map.set("step.t_end", "0.5")?;
    let cfg = ScenarioConfig::from_map(&map)?;

    let mu_list = [0.2, 0.1, 0.05, 0.025];
    let rows = nls_limit_study(&cfg, &mu_list)?;
    println!("{:<10} {:>14} {:>10}", "mu", "L2 error", "ratio");
    let mut prev: Option<f64> = None;
    for row in &rows {
        let ratio = prev.map_or(String::from("-"), |p| format!("{:.3}", p / row.l2_error));
        println!("{:<10} {:>14.6e} {:>10}", row.mu, row.l2_error, ratio);
        prev = Some(row.l2_error);
    }
    println!("a ratio near 2 per halving of mu indicates first-order convergence in mu");
    Ok(())
}
