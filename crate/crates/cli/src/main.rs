//! `trimer` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use trimer::analytic::{analytic_eigensystem, level_energies};
use trimer::export::{self, boundaries_to_csv, phases_to_csv, Format};
use trimer::hamiltonian::spectrum;
use trimer::phase::{phase_negativity, MaxOptions, PhaseScanOptions};
use trimer::scan::{scan_thermal, ThermalOptions, ZeroTOptions};
use trimer::units::{parse_compound_config, CompoundConfig, PhysicalScale};
use trimer::{
    build_hamiltonian, find_maximum, ground_phase, scan_gtn_zero_t, scan_phases, Axis, AxisSpec, GridRange, GridScan,
    LevelLabel, ModelParams, NegativityReport, Quantity, Stability, StateMode,
};

#[derive(Parser)]
#[command(name = "trimer", version, about = "Spin-(1/2,1,1) trimer spectra and tripartite negativity")]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output files given without a path, or when `--out` is omitted.
    #[arg(long, global = true, env = "TRIMER_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All 18 levels from the closed form next to the numerical oracle.
    Spectrum(PointArgs),
    /// Negativities at a point, of the ground state, a phase or a Gibbs state.
    Negativity(NegativityArgs),
    /// Ground-state phase map with bisected boundaries.
    PhaseDiagram(PhaseArgs),
    /// Zero-temperature negativity map over two couplings.
    ScanGtn(ScanArgs),
    /// Finite-temperature negativity map over field and temperature.
    ThermalMap(ThermalArgs),
    /// Maximize a phase eigenvector's negativity along one coupling.
    FindMax(FindMaxArgs),
    /// Closed form against the oracle at random points.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct PointArgs {
    /// TOML file with a `[compound]` table; explicit flags override it.
    #[arg(long)]
    compound: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    j1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
}

impl PointArgs {
    fn compound(&self) -> anyhow::Result<Option<CompoundConfig>> {
        let Some(path) = &self.compound else { return Ok(None) };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Some(parse_compound_config(&text).with_context(|| format!("parsing {}", path.display()))?))
    }

    fn params(&self) -> anyhow::Result<ModelParams> {
        let base = match self.compound()? {
            Some(c) => c.model_params()?,
            None => ModelParams::dimensionless(0.0, 0.0, 0.0),
        };
        let p = ModelParams {
            j1: self.j1.unwrap_or(base.j1),
            d: self.d.unwrap_or(base.d),
            h: self.h.unwrap_or(base.h),
            ..base
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args)]
struct NegativityArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Gibbs state at this k_BT/J instead of a zero-temperature state.
    #[arg(long)]
    kt: Option<f64>,
    /// Use this phase eigenvector instead of the ground state.
    #[arg(long)]
    phase: Option<LevelLabel>,
    #[arg(long, value_enum, default_value = "pure")]
    state: StateArg,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted and no output directory is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

impl OutputArgs {
    fn target(&self, out_dir: Option<&Path>, stem: &str) -> Option<PathBuf> {
        match (&self.out, out_dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p.clone()),
            (None, Some(dir)) => Some(dir.join(format!("{stem}.{}", self.format.extension()))),
            (None, None) => None,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long = "x-axis", visible_alias = "axis")]
    x_axis: Option<Axis>,
    /// `min:max:count`.
    #[arg(long = "x-range", visible_alias = "range", allow_hyphen_values = true)]
    x_range: Option<GridRange>,
    #[arg(long = "y-axis")]
    y_axis: Option<Axis>,
    #[arg(long = "y-range", allow_hyphen_values = true)]
    y_range: Option<GridRange>,
}

impl GridArgs {
    fn axes(&self, x: (Axis, &str), y: (Axis, &str)) -> anyhow::Result<(AxisSpec, AxisSpec)> {
        let xr = match self.x_range {
            Some(r) => r,
            None => x.1.parse()?,
        };
        let yr = match self.y_range {
            Some(r) => r,
            None => y.1.parse()?,
        };
        Ok((
            AxisSpec::from_range(self.x_axis.unwrap_or(x.0), xr)?,
            AxisSpec::from_range(self.y_axis.unwrap_or(y.0), yr)?,
        ))
    }
}

#[derive(Args)]
struct PhaseArgs {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Stopping width of the boundary bisection.
    #[arg(long, default_value_t = 1e-6)]
    bisect_tol: f64,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value = "gtn")]
    quantity: Quantity,
    #[arg(long, value_enum, default_value = "pure")]
    state: StateArg,
    /// Field used in place of h = 0 so that the ground state is unique.
    #[arg(long, default_value_t = 1e-9)]
    h_zero_offset: f64,
    /// Isovalues for contour lines, comma separated.
    #[arg(long, value_delimiter = ',')]
    contours: Vec<f64>,
}

#[derive(Args)]
struct ThermalArgs {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, default_value = "gtn")]
    quantity: Quantity,
    #[arg(long, value_delimiter = ',')]
    contours: Vec<f64>,
}

#[derive(Args)]
struct FindMaxArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    phase: LevelLabel,
    #[arg(long, default_value = "d")]
    axis: Axis,
    /// `min:max` or `min:max:count`, the count being the initial grid.
    #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
    range: String,
    #[arg(long, default_value = "gtn")]
    quantity: Quantity,
    #[arg(long, value_enum, default_value = "pure")]
    state: StateArg,
    #[arg(long, default_value = "eigenvector")]
    stability: Stability,
    /// Stopping width of the golden-section refinement.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 1000)]
    points: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Couplings are drawn uniformly from [-bound, bound].
    #[arg(long, default_value_t = 3.0)]
    bound: f64,
    /// Largest accepted energy deviation.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Pure,
    Mixture,
}

impl From<StateArg> for StateMode {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Pure => StateMode::Pure,
            StateArg::Mixture => StateMode::DegenerateMixture,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if cli.json {
                eprintln!("{}", json!({ "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Spectrum(a) => spectrum_cmd(cli, a),
        Command::Negativity(a) => negativity_cmd(cli, a),
        Command::PhaseDiagram(a) => phase_cmd(cli, a, out_dir),
        Command::ScanGtn(a) => scan_cmd(cli, a, out_dir),
        Command::ThermalMap(a) => thermal_cmd(cli, a, out_dir),
        Command::FindMax(a) => find_max_cmd(cli, a),
        Command::Validate(a) => validate_cmd(cli, a),
    }
}

fn print_json(v: &serde_json::Value) -> anyhow::Result<bool> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(true)
}

fn spectrum_cmd(cli: &Cli, a: &PointArgs) -> anyhow::Result<bool> {
    let p = a.params()?;
    let h = build_hamiltonian(&p)?;
    let oracle = spectrum(&p)?;
    let mut levels = level_energies(&p)?;
    levels.sort_by(|x, y| x.1.total_cmp(&y.1));
    let analytic_residual = analytic_eigensystem(&p)?
        .iter()
        .map(|l| (h.apply(&l.vector) - &l.vector * trimer::C64::from(l.energy)).norm())
        .fold(0.0, f64::max);
    let oracle_residual = oracle.max_residual(&h);
    let deviation = levels.iter().zip(&oracle.levels).map(|(l, o)| (l.1 - o.energy).abs()).fold(0.0, f64::max);

    if cli.json {
        let rows: Vec<_> = levels
            .iter()
            .zip(&oracle.levels)
            .map(|(l, o)| json!({ "label": l.0.to_string(), "energy": l.1, "oracle": o.energy }))
            .collect();
        return print_json(&json!({
            "params": p,
            "levels": rows,
            "max_deviation": deviation,
            "max_residual": analytic_residual.max(oracle_residual),
        }));
    }
    println!("# J1/J = {:.6}, D/J = {:.6}, h/J = {:.6}", p.j1, p.d, p.h);
    println!("{:<16} {:>22} {:>22}", "level", "analytic", "oracle");
    for (l, o) in levels.iter().zip(&oracle.levels) {
        println!("{:<16} {:>22.15e} {:>22.15e}", l.0.to_string(), l.1, o.energy);
    }
    println!("max |energy deviation| = {deviation:.3e}");
    println!("max residual = {:.3e}", analytic_residual.max(oracle_residual));
    Ok(true)
}

fn print_report(cli: &Cli, context: serde_json::Value, r: &NegativityReport) -> anyhow::Result<bool> {
    if cli.json {
        return print_json(&json!({ "state": context, "report": r }));
    }
    println!("# {}", context.as_str().unwrap_or_default());
    for (name, v, part) in [
        ("N_mu", r.n_mu, &r.partitions[0]),
        ("N_S1", r.n_s1, &r.partitions[1]),
        ("N_S2", r.n_s2, &r.partitions[2]),
    ] {
        println!("{name:<5} = {v:.10}  ({} negative eigenvalues)", part.negative_eigenvalues.len());
    }
    println!("gTN   = {:.10}", r.gtn);
    Ok(true)
}

fn negativity_cmd(cli: &Cli, a: &NegativityArgs) -> anyhow::Result<bool> {
    let p = a.point.params()?;
    if let Some(kt) = a.kt {
        let r = trimer::scan::thermal_negativity(&spectrum(&p)?, kt * p.j)?;
        return print_report(cli, json!(format!("Gibbs state at kT/J = {kt}")), &r);
    }
    let label = match a.phase {
        Some(l) => l,
        None => ground_phase(&p)?.level,
    };
    let r = phase_negativity(label, &p, a.state.into())?;
    print_report(cli, json!(format!("{label} at J1/J = {}, D/J = {}, h/J = {}", p.j1, p.d, p.h)), &r)
}

fn stamp(scan: &mut GridScan) {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        scan.metadata.timestamp = Some(epoch);
    }
}

fn emit(path: Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            export::write_file(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_scan(scan: &GridScan, output: &OutputArgs, contours: &[f64], out_dir: Option<&Path>, stem: &str) -> anyhow::Result<bool> {
    let set = (!contours.is_empty()).then(|| scan.contours(contours));
    match output.target(out_dir, stem) {
        Some(path) => {
            export::export_scan(scan, set.as_ref(), output.format, &path)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let text = match output.format {
                Format::Csv => export::scan_to_csv(scan),
                Format::Json => export::scan_to_json(scan)?,
                Format::Svg => export::scan_to_svg(scan, set.as_ref()),
            };
            emit(None, &text)?;
        }
    }
    Ok(true)
}

fn phase_cmd(cli: &Cli, a: &PhaseArgs, out_dir: Option<&Path>) -> anyhow::Result<bool> {
    let p = a.point.params()?;
    let (x, y) = a.grid.axes((Axis::D, "-3:3:121"), (Axis::J1, "-1:3:81"))?;
    let opts = PhaseScanOptions { bisect_tol: a.bisect_tol, threads: cli.threads };
    let map = scan_phases(x, y, p, opts)?;
    let path = a.output.target(out_dir, "phase-diagram");
    match a.output.format {
        Format::Csv => {
            if let Some(path) = &path {
                emit(Some(path.with_extension("boundaries.csv")), &boundaries_to_csv(&map))?;
            }
            emit(path, &phases_to_csv(&map))?;
        }
        Format::Json => emit(path, &(serde_json::to_string_pretty(&map)? + "\n"))?,
        Format::Svg => bail!("phase-diagram writes csv or json"),
    }
    Ok(true)
}

fn scan_cmd(cli: &Cli, a: &ScanArgs, out_dir: Option<&Path>) -> anyhow::Result<bool> {
    let p = a.point.params()?;
    let (x, y) = a.grid.axes((Axis::D, "-3:3:121"), (Axis::H, "0:4:81"))?;
    let opts = ZeroTOptions {
        quantity: a.quantity,
        state: a.state.into(),
        h_zero_offset: (a.h_zero_offset != 0.0).then_some(a.h_zero_offset),
        threads: cli.threads,
    };
    let mut scan = scan_gtn_zero_t(x, y, p, opts)?;
    stamp(&mut scan);
    emit_scan(&scan, &a.output, &a.contours, out_dir, "scan-gtn")
}

fn thermal_cmd(cli: &Cli, a: &ThermalArgs, out_dir: Option<&Path>) -> anyhow::Result<bool> {
    let p = a.point.params()?;
    let scale: Option<PhysicalScale> = a.point.compound()?.map(|c| c.scale()).transpose()?;
    let defaults = if scale.is_some() {
        ((Axis::FieldTesla, "0:200:101"), (Axis::TemperatureKelvin, "1:300:100"))
    } else {
        ((Axis::H, "0:3:61"), (Axis::Kt, "0.01:2:100"))
    };
    let (x, y) = a.grid.axes(defaults.0, defaults.1)?;
    let opts = ThermalOptions { quantity: a.quantity, scale, threads: cli.threads };
    let mut scan = scan_thermal(x, y, p.with_h(0.0), opts)?;
    stamp(&mut scan);
    emit_scan(&scan, &a.output, &a.contours, out_dir, "thermal-map")
}

fn parse_span(s: &str) -> anyhow::Result<(f64, f64, Option<usize>)> {
    if s.split(':').count() == 2 {
        let (lo, hi) = s.split_once(':').unwrap_or_default();
        let lo: f64 = lo.trim().parse().with_context(|| format!("invalid range `{s}`"))?;
        let hi: f64 = hi.trim().parse().with_context(|| format!("invalid range `{s}`"))?;
        return Ok((lo, hi, None));
    }
    let r: GridRange = s.parse()?;
    Ok((r.min, r.max, Some(r.count)))
}

fn find_max_cmd(cli: &Cli, a: &FindMaxArgs) -> anyhow::Result<bool> {
    let p = a.point.params()?;
    let (lo, hi, grid) = parse_span(&a.range)?;
    let defaults = MaxOptions::default();
    let opts = MaxOptions {
        quantity: a.quantity,
        mode: a.state.into(),
        stability: a.stability,
        grid: grid.unwrap_or(defaults.grid),
        tol: a.tol,
    };
    let m = find_maximum(a.phase, a.axis, (lo, hi), p, opts)?;
    if cli.json {
        return print_json(&json!(m));
    }
    println!("phase    = {}", m.phase);
    println!("axis     = {}", m.axis);
    println!("location = {:.6}", m.location);
    println!("{:<8} = {:.6}", a.quantity.name(), m.value);
    Ok(true)
}

fn validate_cmd(cli: &Cli, a: &ValidateArgs) -> anyhow::Result<bool> {
    if !(a.bound.is_finite() && a.bound > 0.0) || a.points == 0 {
        bail!("need a positive bound and at least one point");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (mut energy, mut residual, mut label_mismatch) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..a.points {
        let mut draw = || rng.gen_range(-a.bound..a.bound);
        let p = ModelParams::dimensionless(draw(), draw(), draw());
        let h = build_hamiltonian(&p)?;
        let oracle = spectrum(&p)?;
        let mut analytic = analytic_eigensystem(&p)?;
        analytic.sort_by(|x, y| x.energy.total_cmp(&y.energy));
        for (l, o) in analytic.iter().zip(&oracle.levels) {
            energy = energy.max((l.energy - o.energy).abs());
            residual = residual.max((h.apply(&l.vector) - &l.vector * trimer::C64::from(l.energy)).norm());
        }
        let phase = ground_phase(&p)?;
        let ground = analytic.iter().find(|l| l.label == phase.level).map(|l| l.energy);
        if ground.is_none_or(|e| (e - oracle.ground_energy()).abs() > a.tol) {
            label_mismatch += 1;
        }
    }
    let checks = [
        ("energy deviation", energy, energy < a.tol),
        ("eigenvector residual", residual, residual < a.tol),
        ("ground label mismatches", label_mismatch as f64, label_mismatch == 0),
    ];
    let pass = checks.iter().all(|c| c.2);
    if cli.json {
        let items: Vec<_> =
            checks.iter().map(|(name, v, ok)| json!({ "check": name, "value": v, "pass": ok })).collect();
        print_json(&json!({ "points": a.points, "seed": a.seed, "checks": items, "pass": pass }))?;
        return Ok(pass);
    }
    println!("# {} points, seed {}, couplings in [-{}, {}]", a.points, a.seed, a.bound, a.bound);
    for (name, v, ok) in checks {
        println!("{} {name}: {v:.3e}", if ok { "PASS" } else { "FAIL" });
    }
    println!("{}: max energy deviation {energy:.3e}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}
