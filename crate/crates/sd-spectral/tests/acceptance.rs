//! Acceptance suite: every numbered criterion below is asserted at its
//! stated tolerance and prints one `[criterion NN] PASS` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//!  1. mass conservation along long runs, both nonlinearity signs
//!  2. the two energy integrand forms agree on every sampled state
//!  3. the energy production identity closes at second order in dt
//!  4. the envelope constants match hand-evaluated formulas
//!  5. the focusing/defocusing Gaussian probe keeps `f` under its envelope
//!  6. relaxation-scaling symmetry between mu = 4 and mu = 1 runs
//!  7. the vanishing-delay limit approaches the cubic NLS reference
//!  8. Strang and Picard-Duhamel solvers agree on short windows
//!  9. the Gaussian Gagliardo-Nirenberg ratio equals 1/(2 pi)
//! 10. observed splitting order is two
//! 11. bilinear ratio probes are finite, scale-invariant, and stable
//! 12. the (s, l) admissibility gate matches the region inequalities

use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use sd_spectral::bourgain::{
    bilinear_ratio_uv, bilinear_ratio_uw, random_trace_ensemble, region_w_check, BourgainParams,
    Taper,
};
use sd_spectral::diagnostics::DiagnosticsRecord;
use sd_spectral::dynamics::{evolve, SDParams, SDState, StepControl};
use sd_spectral::field::{ComplexField, RealField};
use sd_spectral::gronwall::{gn_ratio, gronwall_constants};
use sd_spectral::norms::l2_norm;
use sd_spectral::picard::picard_duhamel_solve;
use sd_spectral::scenario::{besse_bidegaray_probe, nls_limit_study, scaling_symmetry_check};
use sd_spectral::Grid;

const PI: f64 = std::f64::consts::PI;

fn gaussian_state(grid: &Grid, amplitude: f64, params: SDParams, equilibrium: bool) -> SDState {
    let dim = grid.dim();
    let u = ComplexField::gaussian(grid, amplitude, 1.0, &grid.center()[..dim]);
    let v = if equilibrium {
        RealField {
            grid: grid.clone(),
            values: u.values.iter().map(|z| params.lambda_f() * z.norm_sqr()).collect(),
        }
    } else {
        RealField::zeros(grid)
    };
    SDState::new(u, v, 0.0, params).unwrap()
}

fn l2_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    let mut diff = a.clone();
    for (d, r) in diff.values.iter_mut().zip(&b.values) {
        *d -= r;
    }
    l2_norm(&diff)
}

/// Criterion 1/2 runs, shared: 2D, 128^2, dt = 1e-3, 1000 steps, Gaussian
/// data, both signs, records every 10 steps.
fn reference_runs() -> &'static (Vec<(i32, Vec<DiagnosticsRecord>)>, f64) {
    static RUNS: OnceLock<(Vec<(i32, Vec<DiagnosticsRecord>)>, f64)> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let grid = Grid::new(2, 128, 20.0).unwrap();
        let mut out = Vec::new();
        for lambda in [1, -1] {
            let params = SDParams::new(1.0, lambda).unwrap();
            let state = gaussian_state(&grid, 1.0, params, true);
            let ctl = StepControl::new(1e-3).unwrap();
            let mut records = Vec::new();
            evolve(state, &ctl, 1.0, 10, |s| {
                records.push(DiagnosticsRecord::sample(s, 0.0));
            })
            .unwrap();
            out.push((lambda, records));
        }
        (out, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_01_mass_conservation() {
    let (runs, elapsed) = reference_runs();
    for (lambda, records) in runs {
        let m0 = records.first().unwrap().mass;
        let drift = records
            .iter()
            .map(|r| (r.mass - m0).abs() / m0)
            .fold(0.0, f64::max);
        assert!(drift < 1e-10, "lambda {lambda}: mass drift {drift:.3e}");
        println!(
            "[criterion 01] PASS mass conservation (lambda = {lambda:+}): relative drift {drift:.3e} < 1e-10"
        );
    }
    assert!(*elapsed < 60.0, "criterion-1 runs took {elapsed:.1} s, budget 60 s");
    println!("[criterion 01] PASS runtime {elapsed:.1} s < 60 s");
}

#[test]
fn criterion_02_energy_form_identity() {
    let (runs, _) = reference_runs();
    for (lambda, records) in runs {
        let worst = records
            .iter()
            .map(|r| (r.energy_a - r.energy_b).abs() / (1.0 + r.energy_a.abs()))
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "lambda {lambda}: energy forms differ by {worst:.3e}");
        println!(
            "[criterion 02] PASS energy-form identity (lambda = {lambda:+}): worst relative gap {worst:.3e} < 1e-10"
        );
    }
}

#[test]
fn criterion_03_energy_rate_second_order() {
    let grid = Grid::new(2, 64, 12.0).unwrap();
    let params = SDParams::new(1.0, 1).unwrap();
    let max_residual = |dt: f64| {
        let state = gaussian_state(&grid, 1.0, params, false);
        let ctl = StepControl::new(dt).unwrap();
        let mut records = Vec::new();
        evolve(state, &ctl, 1.0, 1, |s| records.push(DiagnosticsRecord::sample(s, 0.0)))
            .unwrap();
        let stride = (0.05 / dt).round() as usize;
        sd_spectral::diagnostics::energy_rate_residual_strided(&records, &params, stride)
            .unwrap()
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()))
    };
    let coarse = max_residual(2e-3);
    let fine = max_residual(1e-3);
    let ratio = coarse / fine;
    assert!(
        (3.5..=4.5).contains(&ratio),
        "residual ratio {ratio:.3} outside [3.5, 4.5] (coarse {coarse:.3e}, fine {fine:.3e})"
    );
    println!("[criterion 03] PASS energy rate residual ratio {ratio:.3} in [3.5, 4.5]");
}

#[test]
fn criterion_04_gronwall_constants_hand_check() {
    // u0 = exp(-|x|^2/2), v0 = |u0|^2, lambda = 1, mu = 1, beta^4 = 1/(2 pi):
    // measured inputs must reproduce the formulas to 1e-10, and the formulas
    // evaluate to the closed forms alpha0 = 8 pi, alpha1 = 14.5, T_mu = 1/2.
    let grid = Grid::new(2, 128, 20.0).unwrap();
    let params = SDParams::new(1.0, 1).unwrap();
    let state = gaussian_state(&grid, 1.0, params, true);
    let beta = (1.0 / (2.0 * PI)).powf(0.25);
    let c = gronwall_constants(&state.u, &state.v, &params, beta).unwrap();

    // hand evaluation from independently measured ingredients
    let mass = sd_spectral::norms::mass(&state.u);
    let v2 = l2_norm(&state.v).powi(2);
    let (e0, _) = sd_spectral::diagnostics::energy(&state);
    let b4 = beta.powi(4);
    let alpha0_hand = 2.0 * e0.abs() + 4.0 * v2 * (2.0 * b4 * mass + 1.5);
    let alpha1_hand = 2.0 * (5.0 * b4 * mass + 4.75);
    let t_mu_hand = 1.0 / (4.0 * b4 * mass);
    assert!((c.alpha0 - alpha0_hand).abs() < 1e-10 * alpha0_hand);
    assert!((c.alpha1 - alpha1_hand).abs() < 1e-10 * alpha1_hand);
    assert!((c.t_mu - t_mu_hand).abs() < 1e-10 * t_mu_hand);

    // closed forms of the measured ingredients
    assert!((c.alpha0 - 8.0 * PI).abs() < 1e-7, "alpha0 {}", c.alpha0);
    assert!((c.alpha1 - 14.5).abs() < 1e-7, "alpha1 {}", c.alpha1);
    assert!((c.t_mu - 0.5).abs() < 1e-8, "T_mu {}", c.t_mu);
    println!(
        "[criterion 04] PASS constants: alpha0 = {:.12} (8 pi), alpha1 = {:.12}, T_mu = {:.12}",
        c.alpha0, c.alpha1, c.t_mu
    );
}

#[test]
fn criterion_05_global_regularity_witness() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    for lambda in [-1, 1] {
        let probe = sd_spectral::scenario::BlowupProbeConfig {
            lambda,
            ..Default::default()
        };
        let report = besse_bidegaray_probe(&probe, dir.path()).unwrap();
        assert!(!report.summary.diverged, "lambda {lambda}: diverged");
        let margin = report.summary.envelope_margin_min.unwrap();
        assert!(margin > 0.0, "lambda {lambda}: envelope margin {margin:.3e}");
        println!(
            "[criterion 05] PASS probe (lambda = {lambda:+}): margin {margin:.3e}, sup-norm growth {:.3}",
            report.summary.u_linf_growth
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "probes took {elapsed:.0} s, budget 600 s");
    println!("[criterion 05] PASS runtime {elapsed:.1} s < 600 s");
}

#[test]
fn criterion_06_scaling_symmetry() {
    let mut map = sd_spectral::config::ConfigMap::defaults();
    map.set("name", "acceptance-scaling").unwrap();
    map.set("grid.points", "64").unwrap();
    map.set("grid.extent", "12.0").unwrap();
    map.set("params.mu", "4.0").unwrap();
    map.set("params.lambda", "1").unwrap();
    map.set("step.dt", "2e-3").unwrap();
    map.set("step.t_end", "2.0").unwrap(); // maps to t <= 0.5 at mu = 1
    let cfg = sd_spectral::scenario::ScenarioConfig::from_map(&map).unwrap();
    let result = scaling_symmetry_check(&cfg, 4).unwrap();
    assert!(
        result.max_discrepancy < 1e-6,
        "max discrepancy {:.3e}",
        result.max_discrepancy
    );
    let t_last = result.samples.last().unwrap().0;
    assert!((t_last - 0.5).abs() < 1e-12, "comparison window ends at {t_last}");
    println!(
        "[criterion 06] PASS scaling symmetry mu = 4: max L2 discrepancy {:.3e} < 1e-6 for t <= 0.5",
        result.max_discrepancy
    );
}

#[test]
fn criterion_07_nls_limit() {
    let mut map = sd_spectral::config::ConfigMap::defaults();
    map.set("name", "acceptance-limit").unwrap();
    map.set("grid.points", "64").unwrap();
    map.set("grid.extent", "12.0").unwrap();
    map.set("step.dt", "5e-4").unwrap();
    map.set("step.t_end", "0.5").unwrap();
    let cfg = sd_spectral::scenario::ScenarioConfig::from_map(&map).unwrap();
    let rows = nls_limit_study(&cfg, &[0.1, 0.05, 0.025]).unwrap();
    assert!(rows.iter().all(|r| !r.diverged));
    for w in rows.windows(2) {
        assert!(
            w[1].l2_error < w[0].l2_error,
            "errors not strictly decreasing: {:?}",
            rows.iter().map(|r| (r.mu, r.l2_error)).collect::<Vec<_>>()
        );
    }
    println!(
        "[criterion 07] PASS vanishing-delay limit: errors {:?} strictly decreasing",
        rows.iter().map(|r| format!("{:.3e}", r.l2_error)).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_08_solver_cross_validation() {
    let grid = Grid::new(2, 64, 12.0).unwrap();
    let params = SDParams::new(1.0, 1).unwrap();
    let u0 = ComplexField::gaussian(&grid, 0.3, 1.0, &grid.center()[..2]);
    let v0 = RealField::zeros(&grid);
    let t_final = 0.1;
    let sol = picard_duhamel_solve(&u0, &v0, params, t_final, 200, 50, 1e-10).unwrap();

    let state = SDState::new(u0, v0, 0.0, params).unwrap();
    let ctl = StepControl::new(5e-4).unwrap();
    let mid = evolve(state, &ctl, 0.05, usize::MAX, |_| {}).unwrap();
    let end = evolve(mid.clone(), &ctl, t_final, usize::MAX, |_| {}).unwrap();

    let err_mid = l2_diff(&mid.u, sol.nearest(0.05));
    let err_end = l2_diff(&end.u, sol.nearest(t_final));
    assert!(err_mid < 1e-6, "t = 0.05 disagreement {err_mid:.3e}");
    assert!(err_end < 1e-6, "t = 0.10 disagreement {err_end:.3e}");
    println!(
        "[criterion 08] PASS cross-validation: L2 distance {err_mid:.3e} (t = 0.05), {err_end:.3e} (t = 0.1) < 1e-6"
    );
}

#[test]
fn criterion_09_gn_ratio_gaussian() {
    let grid = Grid::new(2, 256, 20.0).unwrap();
    let u = ComplexField::gaussian(&grid, 1.0, 1.0, &grid.center()[..2]);
    let ratio = gn_ratio(&u).unwrap();
    let want = 1.0 / (2.0 * PI);
    assert!((ratio - want).abs() < 1e-6, "ratio {ratio} vs {want}");
    println!(
        "[criterion 09] PASS Gaussian GN ratio {ratio:.9} = 1/(2 pi) within 1e-6 on 256^2"
    );
}

#[test]
fn criterion_10_splitting_order() {
    let grid = Grid::new(2, 64, 12.0).unwrap();
    let params = SDParams::new(1.0, -1).unwrap();
    let t_end = 0.5;
    let run = |dt: f64| {
        let state = gaussian_state(&grid, 1.0, params, true);
        evolve(state, &StepControl::new(dt).unwrap(), t_end, usize::MAX, |_| {}).unwrap()
    };
    let reference = run(5e-4); // dt/8 of the coarse run
    let e_coarse = l2_diff(&run(4e-3).u, &reference.u);
    let e_fine = l2_diff(&run(2e-3).u, &reference.u);
    let order = (e_coarse / e_fine).log2();
    assert!(
        (1.9..=2.1).contains(&order),
        "observed order {order:.3} (errors {e_coarse:.3e}, {e_fine:.3e})"
    );
    println!("[criterion 10] PASS observed splitting order {order:.3} in [1.9, 2.1]");
}

#[test]
fn criterion_11_bilinear_probes() {
    let grid = Grid::new(2, 16, 4.0).unwrap();
    let p = BourgainParams::with_eps(1.0, 0.0, 0.05).unwrap();
    let eps = 0.05;
    let members =
        random_trace_ensemble(&grid, 16, 0.1, 4, 4, Taper::RaisedCosine, 200, 42).unwrap();
    let uv = bilinear_ratio_uv(&members, &p, eps).unwrap();
    let uw = bilinear_ratio_uw(&members, &p, eps).unwrap();
    assert!(uv.ratios.iter().all(|r| r.is_finite()));
    assert!(uw.ratios.iter().all(|r| r.is_finite()));

    // exact homogeneity: rescaled members give identical ratios
    let scaled: Vec<_> = members
        .iter()
        .map(|(u, v)| {
            (u.scale(Complex64::new(-2.0, 1.5)), v.scale(Complex64::new(0.3, 0.0)))
        })
        .collect();
    let uv_scaled = bilinear_ratio_uv(&scaled, &p, eps).unwrap();
    for (a, b) in uv.ratios.iter().zip(&uv_scaled.ratios) {
        assert!((a - b).abs() < 1e-12 * a.max(1.0), "{a} vs {b}");
    }

    // stability: doubling the ensemble (same seed, superset) moves the max
    // by less than a factor of two
    let doubled =
        random_trace_ensemble(&grid, 16, 0.1, 4, 4, Taper::RaisedCosine, 400, 42).unwrap();
    let uv2 = bilinear_ratio_uv(&doubled, &p, eps).unwrap();
    let uw2 = bilinear_ratio_uw(&doubled, &p, eps).unwrap();
    assert!(uv2.max >= uv.max, "superset max cannot shrink");
    assert!(uv2.max < 2.0 * uv.max, "uv max unstable: {} -> {}", uv.max, uv2.max);
    assert!(uw2.max < 2.0 * uw.max, "uw max unstable: {} -> {}", uw.max, uw2.max);
    println!(
        "[criterion 11] PASS bilinear probes at (s, l) = (1, 0): uv max {:.4e} -> {:.4e}, uw max {:.4e} -> {:.4e} (ratios finite, scale-invariant, < 2x under doubling)",
        uv.max, uv2.max, uw.max, uw2.max
    );
}

#[test]
fn criterion_12_region_gate() {
    // oracle: the two-sided inequality evaluated directly
    let inside = |s: f64, ell: f64| (0f64.max(s - 1.0)..=(2.0 * s).min(s + 1.0)).contains(&ell);
    let mut s = -0.5;
    while s <= 2.5 {
        let mut ell = -1.0;
        while ell <= 3.5 {
            let got = region_w_check(s, ell).is_ok();
            assert_eq!(got, inside(s, ell), "disagreement at ({s}, {ell})");
            ell += 0.25;
        }
        s += 0.25;
    }
    // named boundary and example points
    assert!(region_w_check(1.0, 0.0).is_ok());
    assert!(region_w_check(1.0, 2.0).is_ok(), "ell = s + 1 boundary");
    assert!(region_w_check(0.5, 1.0).is_ok(), "ell = 2s boundary");
    assert!(region_w_check(0.0, 1.0).is_err());
    match region_w_check(0.0, 1.0) {
        Err(sd_spectral::SdError::OutsideRegionW { violated, .. }) => {
            assert_eq!(violated, "ell <= 2s")
        }
        other => panic!("expected rejection, got {other:?}"),
    }
    println!("[criterion 12] PASS region gate matches the inequalities, boundaries included");
}
