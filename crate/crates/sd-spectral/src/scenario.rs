//! Named, reproducible experiments: initial data construction, the run
//! loop with diagnostics and persistence, the focusing-Gaussian probe, the
//! relaxation-scaling symmetry check, and the vanishing-delay limit study.
//!
//! A run writes into `out_root/<name>/`:
//!
//! * `series.csv` - one [`DiagnosticsRecord`] per diagnostics cadence, fixed
//!   column order;
//! * `summary.json` - run parameters, extreme norms, envelope margin,
//!   divergence flag;
//! * `snapshots/snap_NNN.snap` - binary snapshots of `u` and `v` at the
//!   configured times.
//!
//! Runs are deterministic: the same configuration and seed produce
//! byte-identical CSV output.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ConfigMap;
use crate::diagnostics::DiagnosticsRecord;
use crate::dynamics::{
    evolve, nls_evolve, scaling_transform, strang_step, SDParams, SDState, StepControl,
};
use crate::error::{Result, SdError};
use crate::fft::random_bandlimited_field;
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;
use crate::gronwall::{calibrate_beta, default_calibration_ensemble, gn_ratio, GronwallEnvelope};
use crate::norms::l2_norm;
use crate::snapshot::{write_snapshot, Snapshot};

/// Initial profile for either field; `DebyeEquilibrium` (`v = lambda |u|^2`)
/// only makes sense for `v`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDataSpec {
    Gaussian { amplitude: f64, width: f64, center: Option<Vec<f64>> },
    Constant { re: f64, im: f64 },
    Mode { indices: Vec<i64>, amplitude: f64 },
    RandomBandlimited { seed: u64, cutoff: usize },
    DebyeEquilibrium,
    FromFile { path: PathBuf },
}

impl InitialDataSpec {
    fn from_map(map: &ConfigMap, side: &str, dim: usize) -> Result<Self> {
        let key = |suffix: &str| format!("initial.{side}.{suffix}");
        let kind = map.get_string(&key("kind"))?;
        Ok(match kind.as_str() {
            "gaussian" => {
                let center = map.get_f64_list(&key("center"))?;
                let center = if center.is_empty() {
                    None
                } else if center.len() == dim {
                    Some(center)
                } else {
                    return Err(SdError::Config(format!(
                        "{} must list {dim} coordinates",
                        key("center")
                    )));
                };
                InitialDataSpec::Gaussian {
                    amplitude: map.get_f64(&key("amplitude"))?,
                    width: map.get_f64(&key("width"))?,
                    center,
                }
            }
            "constant" => {
                let v = map.get_f64_list(&key("value"))?;
                match v.as_slice() {
                    [re] => InitialDataSpec::Constant { re: *re, im: 0.0 },
                    [re, im] => InitialDataSpec::Constant { re: *re, im: *im },
                    _ => {
                        return Err(SdError::Config(format!(
                            "{} must be one number or re,im",
                            key("value")
                        )))
                    }
                }
            }
            "mode" => {
                let mut indices = map.get_i64_list(&key("mode"))?;
                if indices.len() > dim {
                    return Err(SdError::Config(format!(
                        "{} lists more indices than dimensions",
                        key("mode")
                    )));
                }
                indices.resize(dim, 0);
                InitialDataSpec::Mode { indices, amplitude: map.get_f64(&key("amplitude"))? }
            }
            "random_bandlimited" => InitialDataSpec::RandomBandlimited {
                seed: map.get_u64(&key("seed"))?,
                cutoff: map.get_usize(&key("cutoff"))?,
            },
            "equilibrium" | "debye_equilibrium" => InitialDataSpec::DebyeEquilibrium,
            "zero" => InitialDataSpec::Constant { re: 0.0, im: 0.0 },
            "from_file" => {
                InitialDataSpec::FromFile { path: PathBuf::from(map.get_string(&key("path"))?) }
            }
            other => {
                return Err(SdError::Config(format!("{}: unknown kind {other:?}", key("kind"))))
            }
        })
    }

    fn build_complex(&self, grid: &Grid, master_seed: u64) -> Result<ComplexField> {
        Ok(match self {
            InitialDataSpec::Gaussian { amplitude, width, center } => {
                let c = match center {
                    Some(c) => c.clone(),
                    None => grid.center()[..grid.dim()].to_vec(),
                };
                ComplexField::gaussian(grid, *amplitude, *width, &c)
            }
            InitialDataSpec::Constant { re, im } => {
                ComplexField::constant(grid, Complex64::new(*re, *im))
            }
            InitialDataSpec::Mode { indices, amplitude } => {
                ComplexField::plane_wave(grid, indices, Complex64::new(*amplitude, 0.0))
            }
            InitialDataSpec::RandomBandlimited { seed, cutoff } => {
                let effective = if *seed == 0 { master_seed ^ 0x0075_eed5 } else { *seed };
                let mut rng = ChaCha8Rng::seed_from_u64(effective);
                random_bandlimited_field(grid, *cutoff, &mut rng)
            }
            InitialDataSpec::DebyeEquilibrium => {
                return Err(SdError::Config(
                    "equilibrium is only meaningful for the v field".into(),
                ))
            }
            InitialDataSpec::FromFile { path } => match crate::snapshot::read_snapshot(path)? {
                Snapshot::Complex { field, .. } => {
                    if field.grid != *grid {
                        return Err(SdError::GridMismatch);
                    }
                    field
                }
                Snapshot::Real { .. } => {
                    return Err(SdError::SnapshotFormat(format!(
                        "{} holds a real field, expected complex",
                        path.display()
                    )))
                }
            },
        })
    }

    fn build_real(
        &self,
        grid: &Grid,
        u0: &ComplexField,
        lambda: f64,
        master_seed: u64,
    ) -> Result<RealField> {
        Ok(match self {
            InitialDataSpec::DebyeEquilibrium => RealField {
                grid: grid.clone(),
                values: u0.values.iter().map(|z| lambda * z.norm_sqr()).collect(),
            },
            InitialDataSpec::FromFile { path } => match crate::snapshot::read_snapshot(path)? {
                Snapshot::Real { field, .. } => {
                    if field.grid != *grid {
                        return Err(SdError::GridMismatch);
                    }
                    field
                }
                Snapshot::Complex { .. } => {
                    return Err(SdError::SnapshotFormat(format!(
                        "{} holds a complex field, expected real",
                        path.display()
                    )))
                }
            },
            other => {
                let complex = other.build_complex(grid, master_seed ^ 0x0f1e_1d5e)?;
                RealField { grid: grid.clone(), values: complex.values.iter().map(|z| z.re).collect() }
            }
        })
    }
}

/// Everything a run needs, resolved and typed.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub name: String,
    pub dim: usize,
    pub points: usize,
    pub extent: f64,
    pub params: SDParams,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    pub initial_u: InitialDataSpec,
    pub initial_v: InitialDataSpec,
    pub cadence: usize,
    pub snapshot_times: Vec<f64>,
    pub seed: u64,
    pub gronwall_safety: f64,
    pub gronwall_ensemble: usize,
}

impl ScenarioConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        let dim = map.get_usize("dim")?;
        let cfg = Self {
            name: map.get_string("name")?,
            dim,
            points: map.get_usize("grid.points")?,
            extent: map.get_f64("grid.extent")?,
            params: SDParams::new(map.get_f64("params.mu")?, map.get_i32("params.lambda")?)?,
            dt: map.get_f64("step.dt")?,
            t_end: map.get_f64("step.t_end")?,
            dealias: map.get_bool("step.dealias")?,
            initial_u: InitialDataSpec::from_map(map, "u", dim)?,
            initial_v: InitialDataSpec::from_map(map, "v", dim)?,
            cadence: map.get_usize("diagnostics.cadence")?.max(1),
            snapshot_times: map.get_f64_list("output.snapshots")?,
            seed: map.get_u64("seed")?,
            gronwall_safety: map.get_f64("gronwall.safety")?,
            gronwall_ensemble: map.get_usize("gronwall.ensemble")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        Grid::new(self.dim, self.points, self.extent)?;
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(SdError::Config(format!("step.dt must be positive, got {}", self.dt)));
        }
        if !self.t_end.is_finite() || self.t_end < 0.0 {
            return Err(SdError::Config(format!(
                "step.t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(SdError::Config(format!("invalid scenario name {:?}", self.name)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dim, self.points, self.extent)
    }

    /// Build `(u0, v0)` and wrap them in a state at `t = 0`.
    pub fn initial_state(&self) -> Result<SDState> {
        let grid = self.grid()?;
        let u0 = self.initial_u.build_complex(&grid, self.seed)?;
        let v0 = self.initial_v.build_real(&grid, &u0, self.params.lambda_f(), self.seed)?;
        SDState::new(u0, v0, 0.0, self.params)
    }
}

/// Run metadata and extreme values, serialized as `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub dim: usize,
    pub points: usize,
    pub extent: f64,
    pub mu: f64,
    pub lambda: i32,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    /// Calibrated Gagliardo-Nirenberg constant; only 2D runs carry one (the
    /// envelope is a 2D result).
    pub beta: Option<f64>,
    /// Envelope window length; `None` when not applicable or unbounded.
    pub t_mu: Option<f64>,
    pub records: usize,
    pub final_time: f64,
    pub mass_initial: f64,
    pub mass_drift_rel: f64,
    pub max_u_linf: f64,
    /// `max_t ||u||_inf / ||u0||_inf`; zero when the run starts from zero.
    pub u_linf_growth: f64,
    pub max_f: f64,
    /// `min_t (envelope - f)`, 2D runs only; negative means the a-priori
    /// bound failed.
    pub envelope_margin_min: Option<f64>,
    pub diverged: bool,
    pub divergence_time: Option<f64>,
    pub snapshots: Vec<String>,
}

/// Everything a finished (or diverged) run hands back.
#[derive(Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub records: Vec<DiagnosticsRecord>,
    pub dir: PathBuf,
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Calibrate `beta` for a run: the default ensemble on the run's grid plus
/// the initial `u` itself when it is admissible.
fn run_beta(cfg: &ScenarioConfig, grid: &Grid, u0: &ComplexField) -> Result<f64> {
    let mut ensemble = default_calibration_ensemble(grid, cfg.seed, cfg.gronwall_ensemble);
    if gn_ratio(u0).is_ok() {
        ensemble.push(u0.clone());
    }
    calibrate_beta(&ensemble, cfg.gronwall_safety)
}

/// Evolve a configured scenario, streaming diagnostics and snapshots into
/// `out_root/<name>/`. Divergence is recorded in the summary and partial
/// outputs are kept; an envelope violation is likewise recorded (negative
/// margin) rather than erased. Callers decide how loud to fail.
pub fn run_scenario(cfg: &ScenarioConfig, out_root: &Path) -> Result<RunOutput> {
    let grid = cfg.grid()?;
    let state0 = cfg.initial_state()?;
    // the exponential envelope is a 2D result; other dimensions record an
    // infinite (vacuous) bound
    let beta = if cfg.dim == 2 { Some(run_beta(cfg, &grid, &state0.u)?) } else { None };

    let dir = out_root.join(&cfg.name);
    std::fs::create_dir_all(&dir)?;

    // snapshot times snapped to the step grid
    let total_steps = (cfg.t_end / cfg.dt - 1e-12).ceil().max(0.0) as usize;
    let mut snap_steps: Vec<(usize, usize)> = cfg
        .snapshot_times
        .iter()
        .enumerate()
        .map(|(i, t)| (((t / cfg.dt).round() as usize).min(total_steps), i))
        .collect();
    snap_steps.sort_unstable();

    let ctl = StepControl { dt: cfg.dt, dealias: cfg.dealias };
    let mut records: Vec<DiagnosticsRecord> = Vec::new();
    let mut snapshots_written: Vec<String> = Vec::new();
    let mut diverged = false;
    let mut divergence_time = None;

    let first = DiagnosticsRecord::sample(&state0, 0.0);
    let mut envelope = beta.map(|b| {
        GronwallEnvelope::new(&cfg.params, b, first.mass, first.energy_a, first.v_l2_sq)
    });
    let mass0 = first.mass;
    let u_linf0 = first.u_linf;

    let mut push_record = |state: &SDState, records: &mut Vec<DiagnosticsRecord>| -> Result<()> {
        let mut r = DiagnosticsRecord::sample(state, 0.0);
        r.gronwall_envelope = match envelope.as_mut() {
            Some(env) => env.advance(r.t, r.energy_a, r.v_l2_sq, r.mass)?,
            None => f64::INFINITY,
        };
        records.push(r);
        Ok(())
    };
    let write_snaps = |state: &SDState,
                       ids: &[(usize, usize)],
                       step: usize,
                       written: &mut Vec<String>|
     -> Result<()> {
        for (snap_step, index) in ids {
            if *snap_step != step {
                continue;
            }
            let base = dir.join("snapshots");
            let u_name = format!("snap_{index:03}_u.snap");
            let v_name = format!("snap_{index:03}_v.snap");
            write_snapshot(
                &Snapshot::Complex { field: state.u.clone(), time: state.t },
                &base.join(&u_name),
            )?;
            write_snapshot(
                &Snapshot::Real { field: state.v.clone(), time: state.t },
                &base.join(&v_name),
            )?;
            written.push(u_name);
            written.push(v_name);
        }
        Ok(())
    };

    push_record(&state0, &mut records)?;
    write_snaps(&state0, &snap_steps, 0, &mut snapshots_written)?;

    let mut state = state0;
    for step in 1..=total_steps {
        let target = (step as f64 * cfg.dt).min(cfg.t_end);
        let dt = target - state.t;
        match strang_step(&state, &StepControl { dt, dealias: ctl.dealias }) {
            Ok(mut next) => {
                next.t = target;
                state = next;
            }
            Err(SdError::IntegrationDiverged { t }) => {
                diverged = true;
                divergence_time = Some(t);
                break;
            }
            Err(other) => return Err(other),
        }
        if step % cfg.cadence == 0 || step == total_steps {
            push_record(&state, &mut records)?;
        }
        write_snaps(&state, &snap_steps, step, &mut snapshots_written)?;
    }

    // series.csv
    let mut csv = String::from(DiagnosticsRecord::CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.to_csv_row());
        csv.push('\n');
    }
    atomic_write(&dir.join("series.csv"), csv.as_bytes())?;

    let max_u_linf = records.iter().map(|r| r.u_linf).fold(0.0, f64::max);
    let max_f = records.iter().map(|r| r.f).fold(0.0, f64::max);
    let envelope_margin_min = envelope.as_ref().map(|_| {
        records
            .iter()
            .map(|r| r.gronwall_envelope - r.f)
            .fold(f64::INFINITY, f64::min)
    });
    let mass_final = records.last().map_or(mass0, |r| r.mass);
    let mass_drift_rel =
        if mass0 > 0.0 { (mass_final - mass0).abs() / mass0 } else { 0.0 };
    let t_mu = envelope.as_ref().map(GronwallEnvelope::t_mu).filter(|t| t.is_finite());

    let summary = RunSummary {
        name: cfg.name.clone(),
        dim: cfg.dim,
        points: cfg.points,
        extent: cfg.extent,
        mu: cfg.params.mu,
        lambda: cfg.params.lambda,
        dt: cfg.dt,
        t_end: cfg.t_end,
        seed: cfg.seed,
        beta,
        t_mu,
        records: records.len(),
        final_time: records.last().map_or(0.0, |r| r.t),
        mass_initial: mass0,
        mass_drift_rel,
        max_u_linf,
        u_linf_growth: if u_linf0 > 0.0 { max_u_linf / u_linf0 } else { 0.0 },
        max_f,
        envelope_margin_min,
        diverged,
        divergence_time,
        snapshots: snapshots_written,
    };
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| SdError::Config(format!("summary serialization failed: {e}")))?;
    atomic_write(&dir.join("summary.json"), json.as_bytes())?;

    Ok(RunOutput { summary, records, dir })
}

/// Configuration of the focusing-Gaussian probe. Defaults: a box of extent
/// 20 at 256 x 256 (the Gaussian tail is below 1e-12 at the boundary),
/// `dt = 5e-4`, five time units.
#[derive(Debug, Clone)]
pub struct BlowupProbeConfig {
    pub mu: f64,
    pub lambda: i32,
    pub points: usize,
    pub extent: f64,
    pub dt: f64,
    pub t_end: f64,
    pub cadence: usize,
    pub seed: u64,
}

impl Default for BlowupProbeConfig {
    fn default() -> Self {
        Self {
            mu: 1.0,
            lambda: -1,
            points: 256,
            extent: 20.0,
            dt: 5e-4,
            t_end: 5.0,
            cadence: 20,
            seed: 1,
        }
    }
}

/// Probe report: the run summary plus a refinement hint when the run
/// diverged before its end time.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub summary: RunSummary,
    pub refinement_hint: Option<String>,
}

/// Evolve `u0 = exp(-|x|^2)`, `v0 = lambda |u0|^2` on a 2D box and report
/// how far `||u||_inf` wanders while `f` stays under its envelope. The
/// sup-norm is allowed to grow; the envelope margin is the regularity
/// witness.
pub fn besse_bidegaray_probe(probe: &BlowupProbeConfig, out_root: &Path) -> Result<BlowupReport> {
    let cfg = ScenarioConfig {
        name: format!(
            "besse-bidegaray-mu{}-{}",
            probe.mu,
            if probe.lambda < 0 { "focusing" } else { "defocusing" }
        ),
        dim: 2,
        points: probe.points,
        extent: probe.extent,
        params: SDParams::new(probe.mu, probe.lambda)?,
        dt: probe.dt,
        t_end: probe.t_end,
        dealias: false,
        // exp(-|x|^2) is a width-1/sqrt(2) Gaussian in our convention
        initial_u: InitialDataSpec::Gaussian {
            amplitude: 1.0,
            width: std::f64::consts::FRAC_1_SQRT_2,
            center: None,
        },
        initial_v: InitialDataSpec::DebyeEquilibrium,
        cadence: probe.cadence,
        snapshot_times: Vec::new(),
        seed: probe.seed,
        gronwall_safety: 2.0,
        gronwall_ensemble: 8,
    };
    let out = run_scenario(&cfg, out_root)?;
    let refinement_hint = out.summary.diverged.then(|| {
        format!(
            "diverged at t = {:?}; retry with grid.points = {} and step.dt = {}",
            out.summary.divergence_time,
            cfg.points * 2,
            cfg.dt / 2.0
        )
    });
    Ok(BlowupReport { summary: out.summary, refinement_hint })
}

/// Result of the scaling-symmetry comparison: per-sample discrepancies in
/// `L^2` at matched rescaled times.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingCheckResult {
    pub mu: f64,
    /// `(t in mu = 1 time, ||difference||_2)` pairs.
    pub samples: Vec<(f64, f64)>,
    pub max_discrepancy: f64,
}

/// Run the configured scenario at its own `mu`, map every captured state
/// through the scaling transform, and compare against a direct `mu = 1` run
/// started from the transformed initial data with the matching step
/// `dt / mu`. Sample counts are aligned to whole steps.
pub fn scaling_symmetry_check(cfg: &ScenarioConfig, n_samples: usize) -> Result<ScalingCheckResult> {
    let n_samples = n_samples.max(1);
    let state0 = cfg.initial_state()?;
    let mu = cfg.params.mu;

    let steps_per_sample =
        ((cfg.t_end / (n_samples as f64 * cfg.dt)).round() as usize).max(1);
    let total_steps = steps_per_sample * n_samples;
    let t_end = total_steps as f64 * cfg.dt;

    let ctl = StepControl { dt: cfg.dt, dealias: cfg.dealias };
    let mut scaled_states: Vec<SDState> = Vec::new();
    evolve(state0.clone(), &ctl, t_end, steps_per_sample, |s| {
        scaled_states.push(s.clone());
    })?;

    let transformed: Vec<SDState> =
        scaled_states.iter().map(scaling_transform).collect::<Result<_>>()?;

    let reference0 = scaling_transform(&state0)?;
    let ctl_ref = StepControl { dt: cfg.dt / mu, dealias: cfg.dealias };
    let mut reference_states: Vec<SDState> = Vec::new();
    evolve(reference0, &ctl_ref, t_end / mu, steps_per_sample, |s| {
        reference_states.push(s.clone());
    })?;

    let mut samples = Vec::new();
    let mut max_discrepancy: f64 = 0.0;
    for (mapped, direct) in transformed.iter().zip(&reference_states) {
        let mut diff = mapped.u.clone();
        for (d, r) in diff.values.iter_mut().zip(&direct.u.values) {
            *d -= r;
        }
        let err = l2_norm(&diff);
        max_discrepancy = max_discrepancy.max(err);
        samples.push((direct.t, err));
    }
    Ok(ScalingCheckResult { mu, samples, max_discrepancy })
}

/// One row of the vanishing-delay study.
#[derive(Debug, Clone, Serialize)]
pub struct NlsLimitRow {
    pub mu: f64,
    pub l2_error: f64,
    pub diverged: bool,
}

/// For each `mu`, evolve the system from equilibrium data
/// (`v0 = lambda |u0|^2`) and measure the final-time `L^2` distance to the
/// cubic NLS reference with the same initial `u`. Divergence at one `mu` is
/// recorded and the study continues.
pub fn nls_limit_study(cfg: &ScenarioConfig, mu_list: &[f64]) -> Result<Vec<NlsLimitRow>> {
    if mu_list.is_empty() {
        return Err(SdError::Config("nls.mu_list must not be empty".into()));
    }
    if mu_list.windows(2).any(|w| w[1] >= w[0]) || mu_list.iter().any(|m| *m <= 0.0) {
        return Err(SdError::Config(
            "nls.mu_list must be strictly decreasing and positive".into(),
        ));
    }
    let grid = cfg.grid()?;
    let u0 = cfg.initial_u.build_complex(&grid, cfg.seed)?;
    let lambda = cfg.params.lambda;
    let reference = nls_evolve(&u0, lambda, cfg.dt, cfg.t_end)?;

    let mut rows = Vec::new();
    for &mu in mu_list {
        let params = SDParams::new(mu, lambda)?;
        let v0 = InitialDataSpec::DebyeEquilibrium.build_real(
            &grid,
            &u0,
            params.lambda_f(),
            cfg.seed,
        )?;
        let state = SDState::new(u0.clone(), v0, 0.0, params)?;
        let ctl = StepControl { dt: cfg.dt, dealias: cfg.dealias };
        match evolve(state, &ctl, cfg.t_end, usize::MAX, |_| {}) {
            Ok(end) => {
                let mut diff = end.u.clone();
                for (d, r) in diff.values.iter_mut().zip(&reference.values) {
                    *d -= r;
                }
                rows.push(NlsLimitRow { mu, l2_error: l2_norm(&diff), diverged: false });
            }
            Err(SdError::IntegrationDiverged { .. }) => {
                rows.push(NlsLimitRow { mu, l2_error: f64::NAN, diverged: true });
            }
            Err(other) => return Err(other),
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::constant_solution;

    fn base_map() -> ConfigMap {
        ConfigMap::defaults()
    }

    fn small_cfg(name: &str) -> ScenarioConfig {
        let mut map = base_map();
        map.set("name", name).unwrap();
        map.set("grid.points", "32").unwrap();
        map.set("grid.extent", "10.0").unwrap();
        map.set("step.dt", "2e-3").unwrap();
        map.set("step.t_end", "0.2").unwrap();
        map.set("diagnostics.cadence", "10").unwrap();
        ScenarioConfig::from_map(&map).unwrap()
    }

    #[test]
    fn zero_initial_data_yields_all_zero_series() {
        let dir = tempfile::tempdir().unwrap();
        let mut map = base_map();
        map.set("name", "zero").unwrap();
        map.set("grid.points", "16").unwrap();
        map.set("step.t_end", "0.05").unwrap();
        map.set("initial.u.kind", "constant").unwrap();
        map.set("initial.u.value", "0.0,0.0").unwrap();
        map.set("initial.v.kind", "zero").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        let out = run_scenario(&cfg, dir.path()).unwrap();
        assert!(!out.summary.diverged);
        for r in &out.records {
            assert_eq!(r.mass, 0.0);
            assert_eq!(r.f, 0.0);
            assert_eq!(r.u_linf, 0.0);
        }
        assert!(dir.path().join("zero/series.csv").exists());
        assert!(dir.path().join("zero/summary.json").exists());
    }

    #[test]
    fn constant_data_series_matches_closed_form() {
        let dir = tempfile::tempdir().unwrap();
        let mut map = base_map();
        map.set("name", "constant").unwrap();
        map.set("dim", "1").unwrap();
        map.set("grid.points", "16").unwrap();
        map.set("grid.extent", "2.0").unwrap();
        map.set("params.mu", "0.7").unwrap();
        map.set("params.lambda", "-1").unwrap();
        map.set("step.dt", "1e-3").unwrap();
        map.set("step.t_end", "0.1").unwrap();
        map.set("initial.u.kind", "constant").unwrap();
        map.set("initial.u.value", "0.6,0.2").unwrap();
        map.set("initial.v.kind", "constant").unwrap();
        map.set("initial.v.value", "0.25").unwrap();
        map.set("diagnostics.cadence", "25").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        let out = run_scenario(&cfg, dir.path()).unwrap();

        let params = cfg.params;
        let a = Complex64::new(0.6, 0.2);
        for r in &out.records {
            let (u_t, v_t) = constant_solution(a, 0.25, params, r.t);
            // mass = |u|^2 L, ||v||^2 = v^2 L on the 1D box
            let want_mass = u_t.norm_sqr() * cfg.extent;
            let want_v2 = v_t * v_t * cfg.extent;
            assert!((r.mass - want_mass).abs() < 1e-8 * want_mass.max(1.0));
            assert!((r.v_l2_sq - want_v2).abs() < 1e-8 * want_v2.max(1.0));
            assert!(r.grad_u_l2_sq < 1e-20);
        }
    }

    #[test]
    fn runs_are_byte_deterministic() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let mut map = base_map();
        map.set("name", "det").unwrap();
        map.set("grid.points", "16").unwrap();
        map.set("step.t_end", "0.05").unwrap();
        map.set("initial.u.kind", "random_bandlimited").unwrap();
        map.set("seed", "77").unwrap();
        map.set("output.snapshots", "0.0,0.05").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        run_scenario(&cfg, dir_a.path()).unwrap();
        run_scenario(&cfg, dir_b.path()).unwrap();
        let a = std::fs::read(dir_a.path().join("det/series.csv")).unwrap();
        let b = std::fs::read(dir_b.path().join("det/series.csv")).unwrap();
        assert_eq!(a, b);
        let sa = std::fs::read(dir_a.path().join("det/summary.json")).unwrap();
        let sb = std::fs::read(dir_b.path().join("det/summary.json")).unwrap();
        assert_eq!(sa, sb);
        let na = std::fs::read(dir_a.path().join("det/snapshots/snap_001_u.snap")).unwrap();
        let nb = std::fs::read(dir_b.path().join("det/snapshots/snap_001_u.snap")).unwrap();
        assert_eq!(na, nb);
    }

    #[test]
    fn summary_records_positive_margin_on_smooth_runs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_cfg("margin");
        let out = run_scenario(&cfg, dir.path()).unwrap();
        assert!(!out.summary.diverged);
        assert!(out.summary.envelope_margin_min.unwrap() > 0.0);
        assert!(out.summary.mass_drift_rel < 1e-10);
        assert_eq!(out.summary.records, out.records.len());
    }

    #[test]
    fn scaling_symmetry_mu_one_is_exact_and_mu_four_matches() {
        let mut map = base_map();
        map.set("name", "scaling").unwrap();
        map.set("grid.points", "32").unwrap();
        map.set("grid.extent", "10.0").unwrap();
        map.set("params.mu", "1.0").unwrap();
        map.set("step.dt", "2e-3").unwrap();
        map.set("step.t_end", "0.2").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        let res = scaling_symmetry_check(&cfg, 4).unwrap();
        assert!(res.max_discrepancy < 1e-12, "mu=1: {:.3e}", res.max_discrepancy);

        let mut map4 = base_map();
        map4.set("name", "scaling4").unwrap();
        map4.set("grid.points", "32").unwrap();
        map4.set("grid.extent", "10.0").unwrap();
        map4.set("params.mu", "4.0").unwrap();
        map4.set("step.dt", "2e-3").unwrap();
        map4.set("step.t_end", "0.8").unwrap();
        let cfg4 = ScenarioConfig::from_map(&map4).unwrap();
        let res4 = scaling_symmetry_check(&cfg4, 4).unwrap();
        assert!(res4.max_discrepancy < 1e-6, "mu=4: {:.3e}", res4.max_discrepancy);
    }

    #[test]
    fn constant_data_scaling_check_is_machine_exact() {
        let mut map = base_map();
        map.set("name", "scaling-const").unwrap();
        map.set("grid.points", "16").unwrap();
        map.set("params.mu", "4.0").unwrap();
        map.set("step.dt", "1e-3").unwrap();
        map.set("step.t_end", "0.4").unwrap();
        map.set("initial.u.kind", "constant").unwrap();
        map.set("initial.u.value", "0.8,0.1").unwrap();
        map.set("initial.v.kind", "constant").unwrap();
        map.set("initial.v.value", "0.3").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        let res = scaling_symmetry_check(&cfg, 4).unwrap();
        assert!(res.max_discrepancy < 1e-10, "{:.3e}", res.max_discrepancy);
    }

    #[test]
    fn nls_limit_errors_decrease_with_mu() {
        let mut map = base_map();
        map.set("name", "limit").unwrap();
        map.set("grid.points", "32").unwrap();
        map.set("grid.extent", "10.0").unwrap();
        map.set("step.dt", "1e-3").unwrap();
        map.set("step.t_end", "0.25").unwrap();
        map.set("initial.u.amplitude", "0.8").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        let rows = nls_limit_study(&cfg, &[0.1, 0.05, 0.025]).unwrap();
        assert_eq!(rows.len(), 3);
        for w in rows.windows(2) {
            assert!(
                w[1].l2_error < w[0].l2_error,
                "errors not decreasing: {:?}",
                rows.iter().map(|r| r.l2_error).collect::<Vec<_>>()
            );
        }
        // zero data: every error is zero
        let mut zmap = base_map();
        zmap.set("name", "limit-zero").unwrap();
        zmap.set("grid.points", "16").unwrap();
        zmap.set("step.t_end", "0.1").unwrap();
        zmap.set("initial.u.kind", "constant").unwrap();
        zmap.set("initial.u.value", "0.0,0.0").unwrap();
        let zcfg = ScenarioConfig::from_map(&zmap).unwrap();
        let zrows = nls_limit_study(&zcfg, &[0.1, 0.05]).unwrap();
        for r in zrows {
            assert_eq!(r.l2_error, 0.0);
        }
        // non-decreasing list rejected
        assert!(nls_limit_study(&cfg, &[0.05, 0.1]).is_err());
    }

    #[test]
    fn equilibrium_u_is_rejected() {
        let mut map = base_map();
        map.set("initial.u.kind", "equilibrium").unwrap();
        let cfg = ScenarioConfig::from_map(&map).unwrap();
        assert!(matches!(cfg.initial_state(), Err(SdError::Config(_))));
    }

    #[test]
    fn blowup_probe_small_scale_keeps_margin() {
        let dir = tempfile::tempdir().unwrap();
        let probe = BlowupProbeConfig {
            points: 64,
            extent: 14.0,
            dt: 2e-3,
            t_end: 0.5,
            cadence: 25,
            ..BlowupProbeConfig::default()
        };
        let report = besse_bidegaray_probe(&probe, dir.path()).unwrap();
        assert!(!report.summary.diverged);
        assert!(report.refinement_hint.is_none());
        assert!(report.summary.envelope_margin_min.unwrap() > 0.0);
        assert!(report.summary.u_linf_growth > 0.0);
    }
}
