//! Command-line front end for the verification suites.
//!
//! Builds the barbell profile (or the round reference), runs the numeric
//! verification battery, and writes reports, sample tables, and figure
//! plots into the output directory. Exit status is 0 exactly when every
//! executed check passed; configuration and I/O problems exit 2 with the
//! diagnostic on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use revcurv_core::curvature::{verify_curvature_properties, CurvatureField};
use revcurv_core::geodesic::verify_geodesic_properties;
use revcurv_core::jacobi::verify_conjugate_properties;
use revcurv_core::profile::ProfileCurve;
use revcurv_core::report::VerificationReport;
use revcurv_core::run::{run_report, RunSettings};
use revcurv_core::sphere::{verify_convexity_properties, SphericalRegion};

mod figures;

#[derive(Parser)]
#[command(
    name = "revcurv",
    version,
    about = "Numerical verification of a barbell metric on the two-sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the profile and write its sample table.
    Build(RunOpts),
    /// Sample the Gauss curvature and run the curvature suite.
    Curvature(RunOpts),
    /// Run the geodesic suite: parallels, closures, Clairaut drift.
    Geodesic(RunOpts),
    /// Run the conjugate-point suite.
    Conjugate(RunOpts),
    /// Run the spherical-convexity suite.
    Convexity(RunOpts),
    /// Run every suite and write the consolidated report.
    Report(RunOpts),
    /// Export figure tables and SVG line plots.
    Figures(RunOpts),
}

/// Flags mirroring the run settings, shared by every subcommand.
#[derive(Args)]
struct RunOpts {
    /// Mollifier half-width of the construction.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,

    /// Rescaling offset; 0 is the published construction.
    #[arg(long, default_value_t = 0.0)]
    a: f64,

    /// Sample-grid resolution over the profile span.
    #[arg(long = "grid", default_value_t = 4096)]
    grid: usize,

    /// Gauss-Legendre panel order for the convolution quadrature.
    #[arg(long, default_value_t = 64)]
    quad_order: usize,

    /// Local error tolerance for the adaptive geodesic flows.
    #[arg(long, default_value_t = 1e-10)]
    step_tol: f64,

    /// Seed for the randomized convexity draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory; the REVCURV_OUT environment variable overrides.
    #[arg(long, default_value = "revcurv-out")]
    out: PathBuf,

    /// Verify the round reference profile instead of the barbell.
    #[arg(long)]
    baseline: bool,

    /// Spherical region spec (cap:..., inter:..., poly:...); repeatable.
    #[arg(long = "region", value_name = "SPEC")]
    region: Vec<String>,
}

impl RunOpts {
    fn settings(&self) -> RunSettings {
        RunSettings {
            delta: self.delta,
            a: self.a,
            grid_n: self.grid,
            quad_order: self.quad_order,
            step_tol: self.step_tol,
            seed: self.seed,
            baseline: self.baseline,
        }
    }

    /// Create and return the output directory, honoring REVCURV_OUT.
    fn out_dir(&self) -> Result<PathBuf> {
        let dir = match std::env::var_os("REVCURV_OUT") {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => self.out.clone(),
        };
        fs::create_dir_all(&dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(dir)
    }

    fn regions(&self) -> Result<Vec<SphericalRegion>> {
        self.region
            .iter()
            .map(|spec| {
                SphericalRegion::parse(spec).map_err(|e| anyhow!("--region {spec}: {e}"))
            })
            .collect()
    }

    fn build_profile(&self) -> Result<ProfileCurve> {
        let s = self.settings();
        s.validate()
            .and_then(|()| {
                if s.baseline {
                    ProfileCurve::round(s.grid_n)
                } else {
                    ProfileCurve::build(s.construction())
                }
            })
            .map_err(|e| anyhow!("profile construction failed: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verdict = match &cli.command {
        Command::Build(o) => cmd_build(o),
        Command::Curvature(o) => cmd_curvature(o),
        Command::Geodesic(o) => cmd_suite(o, "geodesic"),
        Command::Conjugate(o) => cmd_suite(o, "conjugate"),
        Command::Convexity(o) => cmd_convexity(o),
        Command::Report(o) => cmd_report(o),
        Command::Figures(o) => cmd_figures(o),
    };
    match verdict {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("revcurv: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_text(dir: &Path, name: &str, content: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn print_summary(report: &VerificationReport) {
    for r in &report.records {
        println!("{} {}", if r.passed { "pass" } else { "FAIL" }, r.id);
    }
    println!(
        "overall: {} ({} of {} checks)",
        if report.overall() { "pass" } else { "fail" },
        report.passed_count(),
        report.records.len()
    );
}

fn cmd_build(opts: &RunOpts) -> Result<bool> {
    let dir = opts.out_dir()?;
    let profile = opts.build_profile()?;
    let (lo, hi) = profile.domain();
    println!(
        "profile span [{lo:.16e}, {hi:.16e}], {} grid samples, waist radius {:.16e}",
        profile.grid().len(),
        profile.waist_radius()
    );
    write_text(&dir, "profile.txt", &profile.table())?;
    Ok(true)
}

fn cmd_curvature(opts: &RunOpts) -> Result<bool> {
    let dir = opts.out_dir()?;
    let profile = opts.build_profile()?;
    let field = CurvatureField::sample(&profile);
    write_text(&dir, "curvature.txt", &field.table())?;
    let report = verify_curvature_properties(&profile);
    write_text(&dir, "curvature_report.txt", &report.render())?;
    print_summary(&report);
    Ok(report.overall())
}

fn cmd_suite(opts: &RunOpts, which: &str) -> Result<bool> {
    let dir = opts.out_dir()?;
    let profile = opts.build_profile()?;
    let report = match which {
        "geodesic" => verify_geodesic_properties(&profile, opts.step_tol),
        _ => verify_conjugate_properties(&profile, opts.step_tol),
    };
    write_text(&dir, &format!("{which}_report.txt"), &report.render())?;
    print_summary(&report);
    Ok(report.overall())
}

fn cmd_convexity(opts: &RunOpts) -> Result<bool> {
    let dir = opts.out_dir()?;
    let regions = opts.regions()?;
    let report = verify_convexity_properties(opts.seed, &regions);
    write_text(&dir, "convexity_report.txt", &report.render())?;
    print_summary(&report);
    Ok(report.overall())
}

fn cmd_report(opts: &RunOpts) -> Result<bool> {
    let dir = opts.out_dir()?;
    let regions = opts.regions()?;
    let outcome = run_report(&opts.settings(), &regions);
    write_text(&dir, "report.txt", &outcome.report.render())?;
    if let Some(profile) = &outcome.profile {
        write_text(&dir, "profile.txt", &profile.table())?;
        write_text(&dir, "curvature.txt", &CurvatureField::sample(profile).table())?;
    }
    if let Some(e) = &outcome.failure {
        eprintln!("revcurv: profile construction failed: {e}");
    }
    print_summary(&outcome.report);
    Ok(outcome.passed())
}

fn cmd_figures(opts: &RunOpts) -> Result<bool> {
    let dir = opts.out_dir()?;
    let profile = opts.build_profile()?;
    figures::export(&profile, &dir)?;
    Ok(true)
}
