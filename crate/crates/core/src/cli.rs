//! Command line front end: `verify`, `arrival`, `eigen`, `limits`.
//!
//! Exit status: 0 on success, 1 when a check fails or a run errors, 2 for an
//! invalid configuration or command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::arrival::{arrival_distribution, build_packet, flux_at_origin};
use crate::config::{EigenRequest, RunConfig};
use crate::eigen::ToaEigenfunction;
use crate::error::{Error, Result};
use crate::limits::{
    deficiency_diagnostic, eigenfunction_limit_table, nr_eigen_limit_check, ratio_lattice,
    spinor_limit_table, DeficiencyReport, EigenGap,
};
use crate::output::{write_csv, write_json};
use crate::par::Execution;
use crate::verify::run_all;

#[derive(Debug, Parser)]
#[command(
    name = "dirac-toa",
    version,
    about = "Time-of-arrival computations for a free Dirac particle"
)]
pub struct Cli {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Run sample loops on a pool of this many threads (0: one per core).
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every invariant check; exits 1 if any fails.
    Verify,
    /// Arrival-time distribution of the configured packet.
    Arrival,
    /// Sample the configured eigenfunctions on the grid.
    Eigen,
    /// Nonrelativistic limit tables and the deficiency diagnostic.
    Limits,
}

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INVALID_CONFIG: u8 = 2;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::LabelOutOfRange { .. } | Error::InsufficientCoverage { .. } => {
            EXIT_INVALID_CONFIG
        }
        _ => EXIT_CHECK_FAILED,
    }
}

/// Parses the process arguments and runs; the binary's whole `main`.
pub fn main_exit() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_INVALID_CONFIG
            } else {
                0
            });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn execution(parallel: Option<usize>) -> Execution {
    let Some(threads) = parallel else {
        return Execution::Sequential;
    };
    if !Execution::is_parallel_available() {
        eprintln!("warning: built without the `parallel` feature; running sequentially");
        return Execution::Sequential;
    }
    #[cfg(feature = "parallel")]
    {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Execution::Parallel
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let exec = execution(cli.parallel);
    fs::create_dir_all(&cli.out)?;
    match cli.command {
        Command::Verify => cmd_verify(&cfg, &cli.out, exec),
        Command::Arrival => cmd_arrival(&cfg, &cli.out, exec).map(|_| 0),
        Command::Eigen => cmd_eigen(&cfg, &cli.out).map(|_| 0),
        Command::Limits => cmd_limits(&cfg, &cli.out).map(|_| 0),
    }
}

pub fn cmd_verify(cfg: &RunConfig, out: &Path, exec: Execution) -> Result<u8> {
    let report = run_all(cfg, exec);
    for c in &report.checks {
        println!(
            "{} {} max_residual={:e} tolerance={:e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.max_residual,
            c.tolerance
        );
    }
    write_json(&out.join("verify.json"), &report)?;
    Ok(if report.all_pass {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Debug, Serialize)]
struct ArrivalSidecar<'a> {
    peak_time: f64,
    captured_mass: f64,
    flux_peak_time: f64,
    flux_integral: f64,
    n_t: usize,
    warnings: Vec<String>,
    config: &'a RunConfig,
}

pub fn cmd_arrival(cfg: &RunConfig, out: &Path, exec: Execution) -> Result<()> {
    let grid = cfg.build_grid()?;
    let spec = cfg.packet_spec();
    let mut warnings = spec.validate()?;
    let window = cfg.window()?;
    let psi = build_packet(&spec, &grid)?;
    let dist = arrival_distribution(&psi, cfg.mass, &window, exec)?;
    let flux = flux_at_origin(&psi, cfg.mass, &window, exec)?;
    let rows: Vec<Vec<f64>> = (0..dist.len())
        .map(|j| {
            vec![
                dist.t[j],
                dist.total[j],
                dist.pos[j],
                dist.neg[j],
                dist.interf[j],
            ]
        })
        .collect();
    write_csv(
        &out.join("arrival.csv"),
        &["t", "Pi_total", "Pi_pos", "Pi_neg", "Pi_interf"],
        &rows,
    )?;
    warnings.extend(dist.warnings.iter().cloned());
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let sidecar = ArrivalSidecar {
        peak_time: dist.peak_time(),
        captured_mass: dist.captured_mass,
        flux_peak_time: flux.peak_time(),
        flux_integral: flux.integral(),
        n_t: dist.len(),
        warnings,
        config: cfg,
    };
    write_json(&out.join("arrival.json"), &sidecar)?;
    println!(
        "peak_time={} flux_peak_time={} captured_mass={}",
        sidecar.peak_time, sidecar.flux_peak_time, sidecar.captured_mass
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct EigenEntry {
    file: String,
    #[serde(flatten)]
    request: EigenRequest,
    mass: f64,
    max_pointwise_residual: f64,
}

fn eigen_file_name(k: usize, f: &ToaEigenfunction) -> String {
    let family = match f.family {
        crate::eigen::Family::Time { .. } => "time",
        crate::eigen::Family::Position { .. } => "position",
        crate::eigen::Family::Event { .. } => "event",
    };
    format!("eigen_{k}_{family}.csv")
}

pub fn cmd_eigen(cfg: &RunConfig, out: &Path) -> Result<()> {
    let grid = cfg.build_grid()?;
    let functions = cfg.eigenfunctions();
    for f in &functions {
        f.check_resolvable(&grid)?;
    }
    let header = [
        "p", "re_c1", "im_c1", "re_c2", "im_c2", "re_c3", "im_c3", "re_c4", "im_c4",
    ];
    let mut entries = Vec::new();
    for (k, (f, req)) in functions.iter().zip(&cfg.eigen).enumerate() {
        let rows: Vec<Vec<f64>> = grid
            .nodes()
            .iter()
            .map(|&p| {
                let v = f.value(p);
                let mut row = vec![p];
                for z in v.iter() {
                    row.push(z.re);
                    row.push(z.im);
                }
                row
            })
            .collect();
        let file = eigen_file_name(k, f);
        write_csv(&out.join(&file), &header, &rows)?;
        let res = f.pointwise_residuals(&grid, true)?;
        entries.push(EigenEntry {
            file,
            request: *req,
            mass: cfg.mass,
            max_pointwise_residual: res.iter().fold(0.0, |a, &b| a.max(b)),
        });
    }
    write_json(&out.join("eigen.json"), &entries)?;
    println!("wrote {} eigenfunction tables", entries.len());
    Ok(())
}

#[derive(Debug, Serialize)]
struct DeficiencySummary {
    n_plus: u32,
    n_minus: u32,
    equal: bool,
    stable: bool,
    runs: Vec<DeficiencyReport>,
}

#[derive(Debug, Serialize)]
struct LimitsSummary {
    u_slope: f64,
    w_slope: f64,
    eigfun_slope: f64,
    eigfun_time: f64,
    eigfun_mass: f64,
    eigenvalue_gaps: Vec<(f64, EigenGap)>,
}

pub fn cmd_limits(cfg: &RunConfig, out: &Path) -> Result<()> {
    let ratios = ratio_lattice(3);
    let spinor = spinor_limit_table(&ratios)?;
    write_csv(
        &out.join("limits_spinor.csv"),
        &["ratio", "u_error", "w_error"],
        &(0..ratios.len())
            .map(|k| vec![spinor.ratio[k], spinor.u_error[k], spinor.w_error[k]])
            .collect::<Vec<_>>(),
    )?;
    // the limit needs a massive particle; a massless config falls back to m = 1
    let m = if cfg.mass > 0.0 { cfg.mass } else { 1.0 };
    let t = 3.0 / m;
    let eig = eigenfunction_limit_table(t, cfg.packet.spin, m, &ratios)?;
    write_csv(
        &out.join("limits_eigfun.csv"),
        &["ratio", "eigfun_distance"],
        &(0..ratios.len())
            .map(|k| vec![eig.ratios[k], eig.errors[k]])
            .collect::<Vec<_>>(),
    )?;
    let runs = [10.0, 20.0, 40.0]
        .iter()
        .map(|k| deficiency_diagnostic(m, k * m))
        .collect::<Result<Vec<_>>>()?;
    let first = &runs[0];
    let stable = runs
        .iter()
        .all(|r| r.n_plus == first.n_plus && r.n_minus == first.n_minus);
    let deficiency = DeficiencySummary {
        n_plus: first.n_plus,
        n_minus: first.n_minus,
        equal: first.equal,
        stable,
        runs,
    };
    write_json(&out.join("deficiency.json"), &deficiency)?;
    let eigenvalue_gaps = ratios
        .iter()
        .map(|&r| nr_eigen_limit_check(1.0, r * m, m).map(|g| (r, g)))
        .collect::<Result<Vec<_>>>()?;
    let summary = LimitsSummary {
        u_slope: spinor.u_slope,
        w_slope: spinor.w_slope,
        eigfun_slope: eig.slope,
        eigfun_time: t,
        eigfun_mass: m,
        eigenvalue_gaps,
    };
    write_json(&out.join("limits.json"), &summary)?;
    println!(
        "u_slope={} w_slope={} eigfun_slope={} n_plus={} n_minus={}",
        summary.u_slope,
        summary.w_slope,
        summary.eigfun_slope,
        deficiency.n_plus,
        deficiency.n_minus
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::{Sign, Spin};

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "dirac-toa",
            "arrival",
            "--out",
            "x",
            "--seed",
            "7",
            "--parallel",
            "2",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Arrival));
        assert_eq!(cli.seed, Some(7));
        assert_eq!(cli.parallel, Some(2));
        assert_eq!(cli.out, PathBuf::from("x"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::Config("x".into())), 2);
        assert_eq!(exit_code_for(&Error::ZeroField), 1);
    }

    #[test]
    fn eigen_files_are_named_by_family() {
        let f = ToaEigenfunction {
            family: crate::eigen::Family::Time {
                t: 0.0,
                lambda: Sign::Plus,
            },
            spin: Spin::Up,
            mass: 1.0,
        };
        assert_eq!(eigen_file_name(3, &f), "eigen_3_time.csv");
    }
}
