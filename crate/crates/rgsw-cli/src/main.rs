//! Binary entry point.
//!
//! Exit codes: 0 on success (a delivered verdict counts, as do check
//! failures without `--strict`), 2 when a check fails under `--strict`,
//! 1 on any error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use rgsw::equilibrium::{riemann_solve, u_of_h, EquilibriumState, HeightWave};
use rgsw::profiles::mollify;
use rgsw::solver::{run, write_run_csv, SimConfig};
use rgsw::spectral::{
    count_unstable, dispersion_roots, stability_verdict, weighted_dispersion_roots, StabilityMode,
};

use rgsw_cli::checks::{preset_checks, seed_checks};
use rgsw_cli::configs::{
    validated, DispersionConfig, ProfileConfig, ProfileSummary, RiemannConfig, StabilityConfig,
};
use rgsw_cli::manifest::{write_manifest, Check, RunManifest};
use rgsw_cli::presets;
use rgsw_cli::{load_config, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "rgsw",
    version,
    about = "Laboratory for the Richard-Gavrilyuk shallow-water relaxation system"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a time-dependent simulation from a JSON config.
    Simulate {
        /// Simulation config file.
        config: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Run a bundled experiment by name.
    Preset {
        /// One of fig2, fig4, fig5, fig6, fig7, fig8, fig9, fig10.
        name: String,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Construct a travelling wave and write its profile.
    Profile {
        /// Profile config file.
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide spectral stability of a travelling wave.
    Stability {
        /// Stability config file.
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate dispersion-relation roots over a wavenumber window.
    Dispersion {
        /// Dispersion config file.
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the equilibrium Riemann problem and print the wave fan.
    Riemann {
        /// Riemann config file.
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the cell count.
    #[arg(long)]
    cells: Option<usize>,
    /// Override the CFL number.
    #[arg(long)]
    cfl: Option<f64>,
    /// Check the initial data for consistency before running (default).
    #[arg(long, overrides_with = "no_seed_check")]
    seed_check: bool,
    /// Skip the initial-data checks.
    #[arg(long, overrides_with = "seed_check")]
    no_seed_check: bool,
    /// Exit with code 2 when any check fails.
    #[arg(long)]
    strict: bool,
}

impl RunOpts {
    fn seed_check(&self) -> bool {
        self.seed_check || !self.no_seed_check
    }

    fn apply(&self, cfg: &mut SimConfig) {
        if let Some(cells) = self.cells {
            cfg.grid.n_cells = cells;
        }
        if let Some(cfl) = self.cfl {
            cfg.time.cfl = cfl;
        }
    }
}

/// What a command reports back to `main` for the exit code.
struct Outcome {
    failed: usize,
    strict: bool,
}

impl Outcome {
    fn clean() -> Self {
        Outcome {
            failed: 0,
            strict: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(out) if out.failed > 0 && out.strict => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Cmd::Simulate { config, run } => cmd_simulate(&config, &run),
        Cmd::Preset { name, run } => cmd_preset(&name, &run),
        Cmd::Profile { config, out } => cmd_profile(&config, out.as_ref()),
        Cmd::Stability { config, out } => cmd_stability(&config, out.as_ref()),
        Cmd::Dispersion { config, out } => cmd_dispersion(&config, out.as_ref()),
        Cmd::Riemann { config } => cmd_riemann(&config),
    }
}

fn config_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn out_dir(requested: Option<&PathBuf>, leaf: &str) -> PathBuf {
    requested
        .cloned()
        .unwrap_or_else(|| Path::new("rgsw-out").join(leaf))
}

fn rel_names(dir: &Path, paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.strip_prefix(dir).unwrap_or(p).display().to_string())
        .collect()
}

/// Prints every check, warning (or erroring under `--strict`) on the
/// failures, and returns the failure count.
fn report_checks(checks: &[Check], strict: bool) -> usize {
    let mut failed = 0;
    for c in checks {
        if c.passed {
            println!("check {}: pass ({})", c.name, c.detail);
        } else {
            failed += 1;
            if strict {
                eprintln!("check {} failed: {}", c.name, c.detail);
            } else {
                eprintln!("warning: check {} failed: {}", c.name, c.detail);
            }
        }
    }
    failed
}

fn finish_manifest(
    dir: &Path,
    command: String,
    config: serde_json::Value,
    started: Instant,
    outputs: Vec<String>,
    checks: Vec<Check>,
) -> CliResult<()> {
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        config,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs,
        checks,
    };
    let path = write_manifest(dir, &manifest)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_simulation(
    command: String,
    mut cfg: SimConfig,
    opts: &RunOpts,
    dir: &Path,
    preset: Option<&str>,
) -> CliResult<Outcome> {
    opts.apply(&mut cfg);
    let started = Instant::now();
    let mut checks = Vec::new();
    if opts.seed_check() {
        checks.extend(seed_checks(&cfg)?);
    }
    let snaps = run(&cfg)?;
    let files = write_run_csv(dir, &snaps, &cfg.params)?;
    if let Some(name) = preset {
        checks.extend(preset_checks(name, &cfg, &snaps)?);
    }
    let outputs = rel_names(dir, &files);
    for path in &files {
        println!("wrote {}", path.display());
    }
    let failed = report_checks(&checks, opts.strict);
    finish_manifest(
        dir,
        command,
        serde_json::to_value(&cfg)?,
        started,
        outputs,
        checks,
    )?;
    Ok(Outcome {
        failed,
        strict: opts.strict,
    })
}

fn cmd_simulate(path: &Path, opts: &RunOpts) -> CliResult<Outcome> {
    let cfg: SimConfig = load_config(path)?;
    validated(&cfg.params).map_err(|e| config_err(path, e))?;
    let leaf = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("simulate")
        .to_string();
    let dir = out_dir(opts.out.as_ref(), &leaf);
    run_simulation(
        format!("simulate {}", path.display()),
        cfg,
        opts,
        &dir,
        None,
    )
}

fn cmd_preset(name: &str, opts: &RunOpts) -> CliResult<Outcome> {
    let cfg = presets::config(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown preset '{name}'; expected one of {}",
            presets::PRESET_NAMES.join(", ")
        ))
    })?;
    let dir = out_dir(opts.out.as_ref(), name);
    run_simulation(format!("preset {name}"), cfg, opts, &dir, Some(name))
}

fn cmd_profile(path: &Path, out: Option<&PathBuf>) -> CliResult<Outcome> {
    let started = Instant::now();
    let cfg: ProfileConfig = load_config(path)?;
    let params = validated(&cfg.params).map_err(|e| config_err(path, e))?;
    let mut wave = cfg.wave.build(&params)?;
    // The residual is checked before mollifying: blending a jump trades
    // the profile relation for smoothness.
    let residual = wave.relation_residual();
    let checks = vec![Check::new(
        "profile satisfies the wave relation",
        residual <= 1e-6,
        format!("sup residual {residual:.3e}"),
    )];
    if let Some(eps) = cfg.mollify {
        wave = mollify(&wave, eps)?;
    }

    let dir = out_dir(out, "profile");
    fs::create_dir_all(&dir)?;
    let mut csv = Vec::new();
    wave.write_csv(&mut csv)?;
    fs::write(dir.join("profile.csv"), csv)?;
    let mut summary = serde_json::to_vec_pretty(&ProfileSummary::of(&wave))?;
    summary.push(b'\n');
    fs::write(dir.join("profile.json"), summary)?;
    println!("wrote {}", dir.join("profile.csv").display());
    println!("wrote {}", dir.join("profile.json").display());

    let failed = report_checks(&checks, false);
    finish_manifest(
        &dir,
        format!("profile {}", path.display()),
        serde_json::to_value(&cfg)?,
        started,
        vec!["profile.csv".into(), "profile.json".into()],
        checks,
    )?;
    let _ = failed;
    Ok(Outcome::clean())
}

fn mode_name(mode: StabilityMode) -> &'static str {
    match mode {
        StabilityMode::Standard => "standard",
        StabilityMode::Convective => "convective",
        StabilityMode::ExtendedConvective => "extended convective",
    }
}

fn cmd_stability(path: &Path, out: Option<&PathBuf>) -> CliResult<Outcome> {
    let started = Instant::now();
    let cfg: StabilityConfig = load_config(path)?;
    let params = validated(&cfg.params).map_err(|e| config_err(path, e))?;
    let mut wave = cfg.wave.build(&params)?;
    if let Some(eps) = cfg.mollify {
        wave = mollify(&wave, eps)?;
    }
    let mut report = stability_verdict(&wave, cfg.mode)?;
    if let Some(contour) = &cfg.evans {
        let count = count_unstable(&wave, contour, None)?;
        report.evans_winding = count.winding;
        report.essential_intrusion = Some(count.essential_intrusion);
    }
    let verdict = report.requested();
    let word = if !verdict.stable {
        "unstable"
    } else if verdict.strongly_stable == Some(true) {
        "strongly stable"
    } else {
        "stable"
    };
    println!("verdict ({}): {word}", mode_name(cfg.mode));

    let dir = out_dir(out, "stability");
    fs::create_dir_all(&dir)?;
    let mut doc = serde_json::to_vec_pretty(&report)?;
    doc.push(b'\n');
    fs::write(dir.join("stability.json"), doc)?;
    println!("wrote {}", dir.join("stability.json").display());
    finish_manifest(
        &dir,
        format!("stability {}", path.display()),
        serde_json::to_value(&cfg)?,
        started,
        vec!["stability.json".into()],
        Vec::new(),
    )?;
    Ok(Outcome::clean())
}

fn cmd_dispersion(path: &Path, out: Option<&PathBuf>) -> CliResult<Outcome> {
    let started = Instant::now();
    let cfg: DispersionConfig = load_config(path)?;
    let params = validated(&cfg.params).map_err(|e| config_err(path, e))?;
    if !(cfg.h0 > 0.0 && cfg.phi0 > 0.0) {
        return Err(config_err(path, "h0 and phi0 must be positive"));
    }
    if cfg.n_points < 2 || !(cfg.xi_max > cfg.xi_min) {
        return Err(config_err(path, "need n_points >= 2 and xi_max > xi_min"));
    }

    let mut csv = Vec::new();
    writeln!(csv, "xi,re_lambda1,re_lambda2,im_lambda1,im_lambda2")?;
    for i in 0..cfg.n_points {
        let frac = i as f64 / (cfg.n_points - 1) as f64;
        let xi = cfg.xi_min + (cfg.xi_max - cfg.xi_min) * frac;
        let roots = match cfg.theta {
            Some(theta) => weighted_dispersion_roots(xi, theta, cfg.h0, cfg.phi0, &params),
            None => dispersion_roots(xi, cfg.h0, cfg.phi0, &params),
        };
        writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            xi, roots[0].re, roots[1].re, roots[0].im, roots[1].im
        )?;
    }

    let dir = out_dir(out, "dispersion");
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("dispersion.csv"), csv)?;
    println!("wrote {}", dir.join("dispersion.csv").display());
    finish_manifest(
        &dir,
        format!("dispersion {}", path.display()),
        serde_json::to_value(&cfg)?,
        started,
        vec!["dispersion.csv".into()],
        Vec::new(),
    )?;
    Ok(Outcome::clean())
}

fn cmd_riemann(path: &Path) -> CliResult<Outcome> {
    let cfg: RiemannConfig = load_config(path)?;
    let params = validated(&cfg.params).map_err(|e| config_err(path, e))?;
    let left =
        EquilibriumState::new(cfg.left.h, cfg.left.phi).map_err(|e| config_err(path, e))?;
    let right =
        EquilibriumState::new(cfg.right.h, cfg.right.phi).map_err(|e| config_err(path, e))?;
    let sol = riemann_solve(&left, &right, &params);

    println!(
        "left: h = {}, phi = {}, u = {}",
        left.h,
        left.phi,
        u_of_h(left.h, &params)
    );
    println!("contact: speed {}", sol.contact_speed);
    println!(
        "intermediate: h = {}, phi = {}",
        sol.intermediate.h, sol.intermediate.phi
    );
    match sol.height_wave {
        None => println!("height wave: none (equal depths)"),
        Some(HeightWave::Shock { speed }) => println!("shock: speed {speed}"),
        Some(HeightWave::Rarefaction {
            left_edge_speed,
            right_edge_speed,
        }) => println!("rarefaction: edge speeds {left_edge_speed} .. {right_edge_speed}"),
    }
    println!(
        "right: h = {}, phi = {}, u = {}",
        right.h,
        right.phi,
        u_of_h(right.h, &params)
    );
    Ok(Outcome::clean())
}
