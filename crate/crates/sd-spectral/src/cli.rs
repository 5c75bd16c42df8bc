//! Command-line front end.
//!
//! Subcommands: `run`, `probe-blowup`, `check-scaling`, `nls-limit`,
//! `bilinear-sweep`, `calibrate-beta`, `validate-config`. Configuration is
//! resolved in three layers (defaults, `--config` file, `--set` overrides,
//! later layers winning); unknown keys and ill-typed values are rejected.
//!
//! Exit codes, stable for CI gating:
//!
//! * 0 - success
//! * 1 - configuration or usage error
//! * 2 - integration divergence
//! * 3 - a checked invariant failed (envelope violated, limit errors not
//!   decreasing)

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bourgain::{
    bilinear_ratio_uv, bilinear_ratio_uw, random_trace_ensemble, region_w_check, BourgainParams,
    Taper,
};
use crate::config::ConfigMap;
use crate::error::{Result, SdError};
use crate::grid::Grid;
use crate::gronwall::{calibrate_beta, default_calibration_ensemble};
use crate::scenario::{
    besse_bidegaray_probe, nls_limit_study, run_scenario, scaling_symmetry_check,
    BlowupProbeConfig, RunSummary, ScenarioConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "sd-spectral",
    version,
    about = "Pseudospectral Schrödinger-Debye simulator and analysis toolkit",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (flat `key = value` lines, dotted keys)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override a single key, e.g. --set params.mu=0.5 (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output root directory (default: $SD_SPECTRAL_OUT or ./out)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads for ensemble experiments
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Master seed override
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Suppress progress messages
    #[arg(long, global = true)]
    quiet: bool,

    /// Write a gnuplot script stub next to each CSV this command produces
    #[arg(long, global = true)]
    emit_plot: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a configured scenario and write its time series and summary
    Run,
    /// Focusing Gaussian regularity probe (sup norm may grow; the size
    /// functional must stay under its envelope)
    ProbeBlowup {
        /// Relaxation time of the probe
        #[arg(long)]
        mu: Option<f64>,
        /// Nonlinearity sign, +1 or -1
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<i32>,
    },
    /// Evolve at mu != 1, rescale, and compare against a direct mu = 1 run
    CheckScaling {
        /// Relaxation time of the scaled run
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Distance to the cubic NLS reference for a decreasing list of mu
    NlsLimit,
    /// Bilinear ratio statistics over an (s, ell) lattice
    BilinearSweep,
    /// Calibrate the Gagliardo-Nirenberg constant over a field ensemble
    CalibrateBeta,
    /// Resolve, validate and echo the configuration
    ValidateConfig {
        /// Config file; equivalent to --config
        path: Option<PathBuf>,
    },
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for_error(&err)
        }
    }
}

fn exit_code_for_error(err: &SdError) -> i32 {
    match err {
        SdError::IntegrationDiverged { .. } => 2,
        SdError::EnvelopeViolated { .. } => 3,
        _ => 1,
    }
}

/// Divergence beats an envelope failure when both happened; success
/// otherwise.
fn exit_code_for_run(summary: &RunSummary) -> i32 {
    if summary.diverged {
        return 2;
    }
    if let Some(margin) = summary.envelope_margin_min {
        if margin < 0.0 {
            return 3;
        }
    }
    0
}

fn out_root(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("SD_SPECTRAL_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn resolve_config(cli: &Cli, subcommand_defaults: &[(&str, &str)]) -> Result<ConfigMap> {
    let mut defaults = ConfigMap::defaults();
    for (k, v) in subcommand_defaults {
        defaults.set(k, v)?;
    }
    let mut file_path = cli.config.clone();
    if let Command::ValidateConfig { path: Some(p) } = &cli.command {
        file_path = Some(p.clone());
    }
    let file = file_path.map(|p| ConfigMap::load(&p)).transpose()?;
    let mut overrides = ConfigMap::new();
    for pair in &cli.set {
        overrides.set_pair(pair)?;
    }
    if let Some(seed) = cli.seed {
        overrides.set("seed", &seed.to_string())?;
    }
    match &cli.command {
        Command::ProbeBlowup { mu, lambda } => {
            if let Some(mu) = mu {
                overrides.set("params.mu", &mu.to_string())?;
            }
            if let Some(lambda) = lambda {
                overrides.set("params.lambda", &lambda.to_string())?;
            }
        }
        Command::CheckScaling { mu: Some(mu) } => {
            overrides.set("scaling.mu", &mu.to_string())?;
        }
        _ => {}
    }
    Ok(ConfigMap::resolve(defaults, file, overrides))
}

fn configure_jobs(cli: &Cli) {
    if let Some(jobs) = cli.jobs {
        // a second init in the same process is fine to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
}

fn info(cli: &Cli, msg: &str) {
    if !cli.quiet {
        eprintln!("{msg}");
    }
}

fn write_plot_stub(csv: &Path, title: &str, plot_lines: &str) -> Result<()> {
    let gp = csv.with_extension("gp");
    let csv_name = csv
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data.csv".to_string());
    let script = format!(
        "# gnuplot stub; run from this directory: gnuplot {}\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set title '{title}'\n\
         set xlabel 't'\n\
         {}\n",
        gp.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        plot_lines.replace("CSV", &csv_name),
    );
    std::fs::write(&gp, script)?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32> {
    configure_jobs(cli);
    let out = out_root(cli);
    match &cli.command {
        Command::ValidateConfig { .. } => {
            let map = resolve_config(cli, &[])?;
            // a full scenario must be constructible, not just well-typed keys
            ScenarioConfig::from_map(&map)?;
            print!("{}", map.render());
            Ok(0)
        }
        Command::Run => {
            let map = resolve_config(cli, &[])?;
            let cfg = ScenarioConfig::from_map(&map)?;
            info(cli, &format!("running scenario {:?}", cfg.name));
            let run = run_scenario(&cfg, &out)?;
            println!("{}", run.dir.join("summary.json").display());
            if cli.emit_plot {
                write_plot_stub(
                    &run.dir.join("series.csv"),
                    &cfg.name,
                    "plot 'CSV' using 1:7 with lines title 'f', \\\n     'CSV' using 1:11 with lines title 'envelope'",
                )?;
            }
            if run.summary.diverged {
                eprintln!(
                    "integration diverged at t = {:?}",
                    run.summary.divergence_time
                );
            } else if exit_code_for_run(&run.summary) == 3 {
                eprintln!(
                    "envelope violated: margin {:?}",
                    run.summary.envelope_margin_min
                );
            }
            Ok(exit_code_for_run(&run.summary))
        }
        Command::ProbeBlowup { .. } => {
            let defaults = [
                ("name", "probe-blowup"),
                ("grid.points", "256"),
                ("grid.extent", "20.0"),
                ("params.lambda", "-1"),
                ("step.dt", "5e-4"),
                ("step.t_end", "5.0"),
                ("diagnostics.cadence", "20"),
            ];
            let map = resolve_config(cli, &defaults)?;
            let probe = BlowupProbeConfig {
                mu: map.get_f64("params.mu")?,
                lambda: map.get_i32("params.lambda")?,
                points: map.get_usize("grid.points")?,
                extent: map.get_f64("grid.extent")?,
                dt: map.get_f64("step.dt")?,
                t_end: map.get_f64("step.t_end")?,
                cadence: map.get_usize("diagnostics.cadence")?.max(1),
                seed: map.get_u64("seed")?,
            };
            info(
                cli,
                &format!(
                    "probing mu = {}, lambda = {} on {}^2 (extent {})",
                    probe.mu, probe.lambda, probe.points, probe.extent
                ),
            );
            let report = besse_bidegaray_probe(&probe, &out)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report)
                    .map_err(|e| SdError::Config(e.to_string()))?
            );
            if cli.emit_plot {
                let dir = out.join(&report.summary.name);
                write_plot_stub(
                    &dir.join("series.csv"),
                    &report.summary.name,
                    "plot 'CSV' using 1:7 with lines title 'f', \\\n     'CSV' using 1:11 with lines title 'envelope', \\\n     'CSV' using 1:8 with lines title 'sup norm'",
                )?;
            }
            if let Some(hint) = &report.refinement_hint {
                eprintln!("{hint}");
            }
            Ok(exit_code_for_run(&report.summary))
        }
        Command::CheckScaling { .. } => {
            let map = resolve_config(cli, &[])?;
            let mut cfg = ScenarioConfig::from_map(&map)?;
            let mu = map.get_f64("scaling.mu")?;
            cfg.params = crate::dynamics::SDParams::new(mu, cfg.params.lambda)?;
            let samples = map.get_usize("scaling.samples")?;
            info(cli, &format!("scaling check at mu = {mu} with {samples} samples"));
            let result = scaling_symmetry_check(&cfg, samples)?;
            let csv_path = out.join(format!("{}-scaling.csv", cfg.name));
            let mut csv = String::from("t,l2_discrepancy\n");
            for (t, err) in &result.samples {
                csv.push_str(&format!("{t},{err}\n"));
            }
            std::fs::create_dir_all(&out)?;
            std::fs::write(&csv_path, csv)?;
            println!("mu = {}", result.mu);
            for (t, err) in &result.samples {
                println!("t = {t:<10} discrepancy = {err:.6e}");
            }
            println!("max discrepancy = {:.6e}", result.max_discrepancy);
            if cli.emit_plot {
                write_plot_stub(
                    &csv_path,
                    "scaling symmetry",
                    "set logscale y\nplot 'CSV' using 1:2 with linespoints title 'discrepancy'",
                )?;
            }
            Ok(0)
        }
        Command::NlsLimit => {
            let map = resolve_config(cli, &[])?;
            let cfg = ScenarioConfig::from_map(&map)?;
            let mu_list = map.get_f64_list("nls.mu_list")?;
            info(cli, &format!("limit study over mu = {mu_list:?}"));
            let rows = nls_limit_study(&cfg, &mu_list)?;
            let csv_path = out.join(format!("{}-nls-limit.csv", cfg.name));
            let mut csv = String::from("mu,l2_error,diverged\n");
            for r in &rows {
                csv.push_str(&format!("{},{},{}\n", r.mu, r.l2_error, r.diverged));
            }
            std::fs::create_dir_all(&out)?;
            std::fs::write(&csv_path, csv)?;
            for r in &rows {
                println!(
                    "mu = {:<8} error = {:.6e}{}",
                    r.mu,
                    r.l2_error,
                    if r.diverged { "  (diverged)" } else { "" }
                );
            }
            if cli.emit_plot {
                write_plot_stub(
                    &csv_path,
                    "vanishing-delay limit",
                    "set logscale xy\nplot 'CSV' using 1:2 with linespoints title 'L2 error'",
                )?;
            }
            if rows.iter().any(|r| r.diverged) {
                eprintln!("at least one mu diverged");
                return Ok(2);
            }
            let decreasing = rows.windows(2).all(|w| w[1].l2_error < w[0].l2_error);
            if !decreasing {
                eprintln!("errors are not strictly decreasing in mu");
                return Ok(3);
            }
            Ok(0)
        }
        Command::BilinearSweep => {
            let map = resolve_config(cli, &[])?;
            let dim = map.get_usize("dim")?;
            let grid = Grid::new(dim, map.get_usize("bilinear.grid_points")?, map.get_f64("grid.extent")?)?;
            let m_times = map.get_usize("bilinear.time_points")?;
            let dt = map.get_f64("bilinear.dt")?;
            let eps = map.get_f64("bilinear.eps")?;
            let members = map.get_usize("bilinear.members")?;
            let seed = map.get_u64("seed")?;
            let s_values = map.get_f64_list("bilinear.s_values")?;
            let ell_values = map.get_f64_list("bilinear.ell_values")?;
            let space_cut = map.get_usize("bilinear.space_cut")?;
            let time_cut = map.get_usize("bilinear.time_cut")?;

            info(
                cli,
                &format!(
                    "bilinear sweep: {} members on {}^{dim} x {m_times} trace lattice",
                    members,
                    grid.points_per_axis()
                ),
            );
            let ensemble = random_trace_ensemble(
                &grid,
                m_times,
                dt,
                space_cut,
                time_cut,
                Taper::RaisedCosine,
                members,
                seed,
            )?;

            let mut csv = String::from(
                "s,ell,max_ratio_uv,mean_ratio_uv,max_ratio_uw,mean_ratio_uw,skipped\n",
            );
            let mut evaluated = 0usize;
            for &s in &s_values {
                for &ell in &ell_values {
                    match region_w_check(s, ell) {
                        Err(SdError::OutsideRegionW { violated, .. }) => {
                            eprintln!("rejected (s, ell) = ({s}, {ell}): violates {violated}");
                            continue;
                        }
                        Err(other) => return Err(other),
                        Ok(()) => {}
                    }
                    let p = BourgainParams::with_eps(s, ell, eps)?;
                    let uv = bilinear_ratio_uv(&ensemble, &p, eps)?;
                    let uw = bilinear_ratio_uw(&ensemble, &p, eps)?;
                    csv.push_str(&format!(
                        "{s},{ell},{},{},{},{},{}\n",
                        uv.max,
                        uv.mean,
                        uw.max,
                        uw.mean,
                        uv.skipped + uw.skipped
                    ));
                    println!(
                        "(s, ell) = ({s}, {ell}): uv max {:.4e} mean {:.4e} | uw max {:.4e} mean {:.4e}",
                        uv.max, uv.mean, uw.max, uw.mean
                    );
                    evaluated += 1;
                }
            }
            if evaluated == 0 {
                return Err(SdError::Config(
                    "every lattice point lies outside the admissible region".into(),
                ));
            }
            let csv_path = out.join("bilinear-sweep.csv");
            std::fs::create_dir_all(&out)?;
            std::fs::write(&csv_path, csv)?;
            println!("{}", csv_path.display());
            Ok(0)
        }
        Command::CalibrateBeta => {
            let map = resolve_config(cli, &[])?;
            let grid = Grid::new(
                map.get_usize("dim")?,
                map.get_usize("grid.points")?,
                map.get_f64("grid.extent")?,
            )?;
            let safety = map.get_f64("gronwall.safety")?;
            let count = map.get_usize("gronwall.ensemble")?;
            let ensemble = default_calibration_ensemble(&grid, map.get_u64("seed")?, count);
            let beta = calibrate_beta(&ensemble, safety)?;
            println!("ensemble size = {}", ensemble.len());
            println!("max ratio     = {}", beta.powi(4) / safety);
            println!("safety        = {safety}");
            println!("beta^4        = {}", beta.powi(4));
            println!("beta          = {beta}");
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary_stub() -> RunSummary {
        RunSummary {
            name: "stub".into(),
            dim: 2,
            points: 16,
            extent: 4.0,
            mu: 1.0,
            lambda: 1,
            dt: 1e-3,
            t_end: 0.1,
            seed: 1,
            beta: Some(0.8),
            t_mu: Some(0.5),
            records: 3,
            final_time: 0.1,
            mass_initial: 1.0,
            mass_drift_rel: 0.0,
            max_u_linf: 1.0,
            u_linf_growth: 1.0,
            max_f: 1.0,
            envelope_margin_min: Some(1.0),
            diverged: false,
            divergence_time: None,
            snapshots: Vec::new(),
        }
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        let ok = summary_stub();
        assert_eq!(exit_code_for_run(&ok), 0);

        let mut diverged = summary_stub();
        diverged.diverged = true;
        diverged.divergence_time = Some(0.05);
        assert_eq!(exit_code_for_run(&diverged), 2);

        let mut violated = summary_stub();
        violated.envelope_margin_min = Some(-0.5);
        assert_eq!(exit_code_for_run(&violated), 3);

        // divergence wins when both are present
        let mut both = summary_stub();
        both.diverged = true;
        both.envelope_margin_min = Some(-0.5);
        assert_eq!(exit_code_for_run(&both), 2);

        // 1D runs carry no margin and cannot fail on it
        let mut one_d = summary_stub();
        one_d.envelope_margin_min = None;
        assert_eq!(exit_code_for_run(&one_d), 0);

        assert_eq!(exit_code_for_error(&SdError::IntegrationDiverged { t: 1.0 }), 2);
        assert_eq!(
            exit_code_for_error(&SdError::EnvelopeViolated { t: 1.0, excess: 0.1 }),
            3
        );
        assert_eq!(exit_code_for_error(&SdError::Config("x".into())), 1);
    }
}
