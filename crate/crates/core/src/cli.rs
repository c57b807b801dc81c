//! Command-line front end: parses config, dispatches computations, writes
//! CSV/report artifacts.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
//! 3 verification failure.

use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::atlas::{
    condition_curve, verify_curve_full_model, ConditionCurve, ConditionQuery, ConditionTarget,
};
use crate::config::{load_config, Config};
use crate::effective::theta_reduced;
use crate::entanglement::entropy_from_theta;
use crate::error::{Error, Result};
use crate::full_dynamics::{self, FullState, Tolerances};
use crate::gates::GateKind;
use crate::grid::{Axis, GridSpec};
use crate::params::{check_adiabaticity, derive_scales, CONDITION_LABELS, DEFAULT_ADIABATICITY_MARGIN};

#[derive(Debug, Parser)]
#[command(
    name = "cavity-crossing",
    about = "Two four-level atoms crossing a detuned optical cavity: \
             transits, entanglement maps, gate fidelities"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Configuration file (key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for grid and curve sweeps.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report derived scales and the off-resonance condition ratios.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Required ratio for each condition to pass.
        #[arg(long, default_value_t = DEFAULT_ADIABATICITY_MARGIN)]
        margin: f64,
    },
    /// Integrate one full-model transit and export the trajectory.
    Trajectory {
        #[command(flatten)]
        common: CommonArgs,
        /// Atomic speed (m/s); overrides the config.
        #[arg(long)]
        v: Option<f64>,
        /// Inter-atomic distance (um); overrides the config.
        #[arg(long)]
        ell: Option<f64>,
        /// Initial state: a1 (|a,1;0>) or 1a (|1,a;0>).
        #[arg(long, default_value = "a1")]
        initial: String,
        /// Number of output samples.
        #[arg(long, default_value_t = full_dynamics::DEFAULT_SAMPLES)]
        samples: usize,
        /// Relative tolerance for the adaptive integrator.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sweep a (v/K, ell/w) grid of entropy or gate fidelity.
    Map {
        #[command(flatten)]
        common: CommonArgs,
        /// entropy, fidelity:i-swap, fidelity:cz, or fidelity:cnotbar.
        #[arg(long)]
        kind: String,
        /// Grid size as NXxNY (velocity x separation samples).
        #[arg(long, default_value = "200x200")]
        grid: String,
        /// Velocity range a:b in units of K.
        #[arg(long, default_value = "0.006:1.2")]
        v_range: String,
        /// Separation range a:b in units of w.
        #[arg(long, default_value = "0:3")]
        ell_range: String,
        /// Axis units: reduced or absolute.
        #[arg(long, default_value = "reduced")]
        units: String,
    },
    /// Export condition curves theta(v, ell) = theta* for a list of branches.
    Lines {
        #[command(flatten)]
        common: CommonArgs,
        /// max-entanglement, i-swap, or cz-cnot.
        #[arg(long)]
        target: String,
        /// Comma-separated branch indices, e.g. 0,1,2.
        #[arg(long, default_value = "0")]
        n: String,
        /// Separation range a:b in units of w.
        #[arg(long, default_value = "0:3")]
        ell_range: String,
        /// Samples per curve.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Axis units: reduced or absolute.
        #[arg(long, default_value = "reduced")]
        units: String,
    },
    /// Re-integrate the full model on an exported curve and compare angles.
    Crosscheck {
        #[command(flatten)]
        common: CommonArgs,
        /// Curve CSV produced by `lines`.
        #[arg(long)]
        curve: PathBuf,
        /// Allowed |theta_full - theta*| in radians.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
}

/// Parse `a:b` into an inclusive range.
fn parse_range(text: &str, flag: &'static str) -> Result<(f64, f64)> {
    let invalid = || Error::InvalidParameter {
        name: flag,
        reason: format!("expected a:b, got `{text}`"),
    };
    let (a, b) = text.split_once(':').ok_or_else(invalid)?;
    let a: f64 = a.trim().parse().map_err(|_| invalid())?;
    let b: f64 = b.trim().parse().map_err(|_| invalid())?;
    if !(b > a) {
        return Err(invalid());
    }
    Ok((a, b))
}

fn parse_grid_size(text: &str) -> Result<(usize, usize)> {
    let invalid = || Error::InvalidParameter {
        name: "grid",
        reason: format!("expected NXxNY, got `{text}`"),
    };
    let (nx, ny) = text.split_once('x').ok_or_else(invalid)?;
    let nx: usize = nx.trim().parse().map_err(|_| invalid())?;
    let ny: usize = ny.trim().parse().map_err(|_| invalid())?;
    if nx == 0 || ny == 0 {
        return Err(invalid());
    }
    Ok((nx, ny))
}

fn parse_branches(text: &str) -> Result<Vec<u32>> {
    let list: std::result::Result<Vec<u32>, _> =
        text.split(',').map(|s| s.trim().parse()).collect();
    let list = list.map_err(|_| Error::InvalidParameter {
        name: "n",
        reason: format!("expected comma-separated branch indices, got `{text}`"),
    })?;
    if list.is_empty() {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "branch list must be non-empty".to_string(),
        });
    }
    Ok(list)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnitMode {
    Reduced,
    Absolute,
}

impl UnitMode {
    fn parse(text: &str) -> Result<Self> {
        match text {
            "reduced" => Ok(UnitMode::Reduced),
            "absolute" => Ok(UnitMode::Absolute),
            _ => Err(Error::UnknownName {
                what: "unit mode",
                name: text.to_string(),
            }),
        }
    }
}

/// Comment block echoing the resolved parameters, prepended to every CSV.
fn comment_block(cfg: &Config, extra: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in cfg.echo().iter().chain(extra) {
        writeln!(s, "# {k} = {v}").unwrap();
    }
    s
}

/// Collects output paths for the run manifest.
struct Manifest {
    command: String,
    config: PathBuf,
    outputs: Vec<PathBuf>,
    echo: Vec<(String, String)>,
}

impl Manifest {
    fn new(command: &str, config: &Path, cfg: &Config) -> Self {
        Manifest {
            command: command.to_string(),
            config: config.to_path_buf(),
            outputs: Vec::new(),
            echo: cfg.echo(),
        }
    }

    fn write(&self, out_dir: &Path) -> Result<()> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut s = String::new();
        writeln!(s, "command = {}", self.command).unwrap();
        writeln!(s, "config = {}", self.config.display()).unwrap();
        writeln!(s, "timestamp_unix = {timestamp}").unwrap();
        for (k, v) in &self.echo {
            writeln!(s, "param.{k} = {v}").unwrap();
        }
        for p in &self.outputs {
            writeln!(s, "output = {}", p.display()).unwrap();
        }
        fs::write(out_dir.join("manifest.txt"), s)?;
        Ok(())
    }
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn cmd_validate(config_path: &Path, margin: f64) -> Result<String> {
    let cfg = load_config(config_path)?;
    if margin < 1.0 {
        return Err(Error::InvalidParameter {
            name: "margin",
            reason: "must be >= 1".to_string(),
        });
    }
    let scales = derive_scales(&cfg.params)?;
    let report = check_adiabaticity(&cfg.params, margin);
    let mut s = String::new();
    writeln!(s, "velocity unit K = {:.4} m/s", scales.velocity_unit).unwrap();
    writeln!(s, "distance unit w = {:.4} um", scales.distance_unit).unwrap();
    writeln!(s, "off-resonance conditions (margin {margin}):").unwrap();
    for i in 0..3 {
        writeln!(
            s,
            "  {} = {:.2} .. {}",
            CONDITION_LABELS[i],
            report.ratios[i],
            if report.passes[i] { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
fn cmd_trajectory(
    common: &CommonArgs,
    v: Option<f64>,
    ell: Option<f64>,
    initial: &str,
    samples: usize,
    tol: Option<f64>,
) -> Result<i32> {
    let cfg = load_config(&common.config)?;
    let k = cfg.kinematics(v, ell)?;
    let state = match initial {
        "a1" => FullState::initial_a1(),
        "1a" => FullState::initial_1a(),
        other => {
            return Err(Error::UnknownName {
                what: "initial state",
                name: other.to_string(),
            })
        }
    };
    let mut tolerances = Tolerances::default();
    if let Some(rtol) = tol {
        tolerances.rtol = rtol;
        tolerances.atol = rtol * 1e-3;
    }
    let traj = full_dynamics::integrate(&state, &cfg.params, &k, &tolerances, samples)?;

    ensure_out_dir(&common.out)?;
    let extra = vec![
        ("v".to_string(), format!("{}", k.velocity)),
        ("ell".to_string(), format!("{}", k.separation)),
        ("initial".to_string(), initial.to_string()),
    ];
    let mut csv = comment_block(&cfg, &extra);
    csv.push_str("t_us,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_c4,im_c4,re_c5,im_c5,norm\n");
    for s in &traj.samples {
        let mut row = fmt_f(s.t);
        for a in &s.amps {
            row.push(',');
            row.push_str(&fmt_f(a.re));
            row.push(',');
            row.push_str(&fmt_f(a.im));
        }
        row.push(',');
        row.push_str(&fmt_f(s.norm_sq()));
        row.push('\n');
        csv.push_str(&row);
    }
    let path = common.out.join("trajectory.csv");
    fs::write(&path, csv)?;

    let f = traj.final_state();
    println!("wrote {}", path.display());
    println!(
        "final populations: |c1|^2 = {:.6}, |c5|^2 = {:.6}",
        f.amps[0].norm_sqr(),
        f.amps[4].norm_sqr()
    );
    println!("intermediate-state leakage at exit: {:.3e}", traj.final_leakage());
    println!(
        "max norm drift: {:.3e} ({} steps, {} rejected)",
        traj.stats.max_norm_drift, traj.stats.steps, traj.stats.rejected
    );
    match full_dynamics::extract_full_angle(&traj) {
        Ok(theta) => println!("extracted coupling angle theta_full = {theta:.6} rad"),
        Err(e) => println!("warning: {e}"),
    }

    let mut manifest = Manifest::new("trajectory", &common.config, &cfg);
    manifest.outputs.push(path);
    manifest.write(&common.out)?;
    Ok(0)
}

enum MapKind {
    Entropy,
    Fidelity(GateKind),
}

impl MapKind {
    fn parse(text: &str) -> Result<Self> {
        match text {
            "entropy" => Ok(MapKind::Entropy),
            _ => match text.strip_prefix("fidelity:") {
                Some(gate) => Ok(MapKind::Fidelity(GateKind::parse(gate)?)),
                None => Err(Error::UnknownName {
                    what: "map kind",
                    name: text.to_string(),
                }),
            },
        }
    }

    fn file_stem(&self) -> &'static str {
        match self {
            MapKind::Entropy => "entropy",
            MapKind::Fidelity(GateKind::ISwap) => "fidelity_iswap",
            MapKind::Fidelity(GateKind::ControlledZ) => "fidelity_cz",
            MapKind::Fidelity(GateKind::ControlledNotBar) => "fidelity_cnotbar",
        }
    }

    fn value(&self, theta: f64) -> f64 {
        match self {
            MapKind::Entropy => entropy_from_theta(theta),
            MapKind::Fidelity(kind) => kind.fidelity_closed_form(theta),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_map(
    common: &CommonArgs,
    kind: &str,
    grid: &str,
    v_range: &str,
    ell_range: &str,
    units: &str,
) -> Result<i32> {
    let cfg = load_config(&common.config)?;
    let kind = MapKind::parse(kind)?;
    let (nv, nell) = parse_grid_size(grid)?;
    let (v_lo, v_hi) = parse_range(v_range, "v-range")?;
    let (e_lo, e_hi) = parse_range(ell_range, "ell-range")?;
    let units = UnitMode::parse(units)?;
    let spec = GridSpec {
        v_over_k: Axis::new(v_lo, v_hi, nv),
        ell_over_w: Axis::new(e_lo, e_hi, nell),
    };
    spec.validate()?;
    let scales = derive_scales(&cfg.params)?;

    let values = run_with_threads(common.threads, || {
        use rayon::prelude::*;
        let ells = spec.ell_over_w.values();
        spec.v_over_k
            .values()
            .par_iter()
            .map(|&u| {
                ells.iter()
                    .map(|&x| kind.value(theta_reduced(u, x)))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });

    ensure_out_dir(&common.out)?;
    let (v_scale, e_scale, v_label, e_label) = match units {
        UnitMode::Reduced => (1.0, 1.0, "v_over_K", "ell_over_w"),
        UnitMode::Absolute => (
            scales.velocity_unit,
            scales.distance_unit,
            "v_m_per_s",
            "ell_um",
        ),
    };
    let extra = vec![
        ("map".to_string(), kind.file_stem().to_string()),
        ("units".to_string(), format!("{v_label},{e_label}")),
    ];
    let mut csv = comment_block(&cfg, &extra);
    csv.push_str(v_label);
    for x in spec.ell_over_w.values() {
        csv.push(',');
        csv.push_str(&fmt_f(x * e_scale));
    }
    csv.push('\n');
    for (u, row) in spec.v_over_k.values().iter().zip(&values) {
        csv.push_str(&fmt_f(u * v_scale));
        for val in row {
            csv.push(',');
            csv.push_str(&fmt_f(*val));
        }
        csv.push('\n');
    }
    let path = common.out.join(format!("{}.csv", kind.file_stem()));
    fs::write(&path, csv)?;
    println!("wrote {}", path.display());

    let mut manifest = Manifest::new("map", &common.config, &cfg);
    manifest.outputs.push(path);
    manifest.write(&common.out)?;
    Ok(0)
}

fn curve_csv(cfg: &Config, curve: &ConditionCurve, units: UnitMode, scales_v: f64, w: f64) -> String {
    let extra = vec![
        ("theta_star".to_string(), format!("{}", curve.theta_star)),
        ("n".to_string(), format!("{}", curve.n)),
    ];
    let mut csv = comment_block(cfg, &extra);
    match units {
        UnitMode::Reduced => csv.push_str("ell_over_w,v_over_K,theta_star,n\n"),
        UnitMode::Absolute => csv.push_str("ell_over_w,v_over_K,theta_star,n,ell_um,v_m_per_s\n"),
    }
    for &(x, u) in &curve.points {
        let mut row = format!(
            "{},{},{},{}",
            fmt_f(x),
            fmt_f(u),
            fmt_f(curve.theta_star),
            curve.n
        );
        if units == UnitMode::Absolute {
            row.push(',');
            row.push_str(&fmt_f(x * w));
            row.push(',');
            row.push_str(&fmt_f(u * scales_v));
        }
        row.push('\n');
        csv.push_str(&row);
    }
    csv
}

fn cmd_lines(
    common: &CommonArgs,
    target: &str,
    branches: &str,
    ell_range: &str,
    samples: usize,
    units: &str,
) -> Result<i32> {
    let cfg = load_config(&common.config)?;
    let target = ConditionTarget::parse(target)?;
    let branches = parse_branches(branches)?;
    let ell_range = parse_range(ell_range, "ell-range")?;
    let units = UnitMode::parse(units)?;
    let scales = derive_scales(&cfg.params)?;

    ensure_out_dir(&common.out)?;
    let mut manifest = Manifest::new("lines", &common.config, &cfg);
    for n in branches {
        let q = ConditionQuery {
            target,
            n,
            ell_range,
            samples,
        };
        let curve = condition_curve(&q)?;
        let csv = curve_csv(&cfg, &curve, units, scales.velocity_unit, cfg.params.waist);
        let path = common.out.join(format!("curve_n{n}.csv"));
        fs::write(&path, csv)?;
        println!("wrote {}", path.display());
        manifest.outputs.push(path);
    }
    manifest.write(&common.out)?;
    Ok(0)
}

/// Read back a curve CSV produced by `lines` (reduced-unit columns).
fn read_curve(path: &Path) -> Result<ConditionCurve> {
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    let mut theta_star = None;
    let mut n = 0u32;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("ell_over_w") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 4 {
            return Err(Error::InvalidParameter {
                name: "curve",
                reason: format!("bad curve row `{line}`"),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::InvalidParameter {
                name: "curve",
                reason: format!("bad number `{s}`"),
            })
        };
        let x = parse(fields[0])?;
        let u = parse(fields[1])?;
        theta_star = Some(parse(fields[2])?);
        n = fields[3].parse().unwrap_or(0);
        points.push((x, u));
    }
    let theta_star = theta_star.ok_or(Error::InvalidParameter {
        name: "curve",
        reason: "curve file has no data rows".to_string(),
    })?;
    Ok(ConditionCurve {
        points,
        theta_star,
        n,
    })
}

fn cmd_crosscheck(common: &CommonArgs, curve_path: &Path, tol: f64) -> Result<i32> {
    let cfg = load_config(&common.config)?;
    let curve = read_curve(curve_path)?;
    let report = run_with_threads(common.threads, || {
        verify_curve_full_model(&curve, &cfg.params, tol)
    })?;

    if !report.adiabatic {
        println!("warning: off-resonance conditions fail at margin {DEFAULT_ADIABATICITY_MARGIN}");
    }
    for p in &report.points {
        match (p.theta_full, &p.warning) {
            (Some(theta), _) => println!(
                "ell/w = {:.4}  v/K = {:.4}  theta* = {:.6}  theta_full = {:.6}  \
                 |dev| = {:.2e}  leakage = {:.2e}  {}",
                p.ell_over_w,
                p.v_over_k,
                p.theta_star,
                theta,
                (theta - p.theta_star).abs(),
                p.leakage,
                if p.within_tolerance { "ok" } else { "EXCEEDS" }
            ),
            (None, Some(w)) => println!(
                "ell/w = {:.4}  v/K = {:.4}  theta* = {:.6}  warning: {w}",
                p.ell_over_w, p.v_over_k, p.theta_star
            ),
            (None, None) => unreachable!("point without angle must carry a warning"),
        }
    }
    if report.all_ok() {
        println!("all {} points within {tol} rad", report.points.len());
        Ok(0)
    } else {
        println!("verification FAILED (tolerance {tol} rad)");
        Ok(3)
    }
}

fn run_with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { common, margin } => {
            let report = cmd_validate(&common.config, margin)?;
            print!("{report}");
            Ok(0)
        }
        Command::Trajectory {
            common,
            v,
            ell,
            initial,
            samples,
            tol,
        } => cmd_trajectory(&common, v, ell, &initial, samples, tol),
        Command::Map {
            common,
            kind,
            grid,
            v_range,
            ell_range,
            units,
        } => cmd_map(&common, &kind, &grid, &v_range, &ell_range, &units),
        Command::Lines {
            common,
            target,
            n,
            ell_range,
            samples,
            units,
        } => cmd_lines(&common, &target, &n, &ell_range, samples, &units),
        Command::Crosscheck { common, curve, tol } => cmd_crosscheck(&common, &curve, tol),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
