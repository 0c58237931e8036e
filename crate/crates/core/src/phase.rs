//! Ground-state phases, phase maps with refined boundaries, and per-phase
//! negativity maxima.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analytic::{analytic_level, dominant_cubic_component, level_energies};
use crate::contour::chain_segments;
use crate::hamiltonian::ModelParams;
use crate::label::LevelLabel;
use crate::negativity::{gtn, NegativityReport, Quantity};
use crate::scan::{run_parallel, Axis, AxisSpec};
use crate::thermal::{DensityMatrix, StateMode};
use crate::{Error, Result};

/// Relative energy tolerance for flagging ties between families.
pub const TIE_TOL: f64 = 1e-9;

/// Ground-state phase at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseLabel {
    /// The lowest level: the positive `S_t^z` member unless `h < 0`.
    pub level: LevelLabel,
    /// Another family lies within the tie tolerance.
    pub tie: bool,
    /// Families tied with `level`, excluding it.
    pub tied_with: Vec<LevelLabel>,
    /// Dominant amplitude `(α, β, γ)` index for cubic-family phases.
    pub character: Option<usize>,
}

impl PhaseLabel {
    pub fn family(&self) -> LevelLabel {
        self.level.family()
    }

    /// `label` is this phase or tied with it.
    pub fn admits(&self, label: LevelLabel) -> bool {
        let f = label.family();
        self.family() == f || self.tied_with.iter().any(|t| t.family() == f)
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.level.fmt(f)
    }
}

fn tie_tolerance(e_min: f64) -> f64 {
    TIE_TOL * e_min.abs().max(1.0)
}

/// Lowest-energy family from the closed-form spectrum.
pub fn ground_phase(p: &ModelParams) -> Result<PhaseLabel> {
    let mut levels = level_energies(p)?;
    levels.sort_by(|a, b| a.1.total_cmp(&b.1));
    let e_min = levels[0].1;
    let tol = tie_tolerance(e_min);
    let mut families: Vec<LevelLabel> = Vec::new();
    for (label, e) in &levels {
        if e - e_min > tol {
            break;
        }
        if !families.contains(&label.family()) {
            families.push(label.family());
        }
    }
    let fam = families[0];
    let level = if p.h < 0.0 { fam.partner() } else { fam };
    Ok(PhaseLabel {
        level,
        tie: families.len() > 1,
        tied_with: families[1..].to_vec(),
        character: dominant_cubic_component(p, fam),
    })
}

/// Energy of the member of `family` that is lowest at the given field.
fn family_energy(p: &ModelParams, family: LevelLabel) -> Result<f64> {
    let fam = family.family();
    Ok(level_energies(p)?
        .into_iter()
        .filter(|(l, _)| l.family() == fam)
        .map(|(_, e)| e)
        .fold(f64::INFINITY, f64::min))
}

/// State of a phase eigenvector at `p`.
pub fn phase_state(label: LevelLabel, p: &ModelParams, mode: StateMode) -> Result<DensityMatrix> {
    let up = analytic_level(p, label)?;
    match mode {
        StateMode::Pure => Ok(DensityMatrix::pure(&up.vector)),
        StateMode::DegenerateMixture => {
            let down = analytic_level(p, label.partner())?;
            Ok(DensityMatrix::mixture([(0.5, &up.vector), (0.5, &down.vector)]))
        }
    }
}

/// Negativities of a phase eigenvector.
pub fn phase_negativity(label: LevelLabel, p: &ModelParams, mode: StateMode) -> Result<NegativityReport> {
    gtn(&phase_state(label, p, mode)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseScanOptions {
    /// Bisection stops once the bracket is below this, in the scanned
    /// parameter.
    pub bisect_tol: f64,
    pub threads: Option<usize>,
}

impl Default for PhaseScanOptions {
    fn default() -> Self {
        PhaseScanOptions { bisect_tol: 1e-6, threads: None }
    }
}

/// A point on a phase boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub x: f64,
    pub y: f64,
    /// The two families meeting here, ordered.
    pub phases: (LevelLabel, LevelLabel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLine {
    pub phases: (LevelLabel, LevelLabel),
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseMap {
    pub x: AxisSpec,
    pub y: AxisSpec,
    pub fixed: ModelParams,
    /// Row-major, `y` outer.
    pub cells: Vec<PhaseLabel>,
    pub boundaries: Vec<BoundaryLine>,
    /// Lines inside a cubic-family phase where the dominant amplitude of the
    /// eigenvector changes.
    pub character_lines: Vec<Vec<[f64; 2]>>,
}

impl PhaseMap {
    pub fn cell(&self, ix: usize, iy: usize) -> &PhaseLabel {
        &self.cells[iy * self.x.count + ix]
    }

    /// Distinct families present, in first-seen order.
    pub fn families(&self) -> Vec<LevelLabel> {
        let mut out = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.family()) {
                out.push(c.family());
            }
        }
        out
    }
}

fn ordered(a: LevelLabel, b: LevelLabel) -> (LevelLabel, LevelLabel) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Finds the root of `f` in `[a, b]` given opposite signs at the ends,
/// bisecting to `tol` then interpolating inside the final bracket.
fn bisect_root(mut a: f64, mut b: f64, f: impl Fn(f64) -> Result<f64>, tol: f64) -> Result<f64> {
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    Ok(if fb != fa { a - fa * (b - a) / (fb - fa) } else { 0.5 * (a + b) })
}

/// Last parameter in `[a, b]` where `pred` still holds, assuming it holds at
/// `a` and not at `b`.
fn bisect_predicate(mut a: f64, mut b: f64, pred: impl Fn(f64) -> Result<bool>, tol: f64) -> Result<f64> {
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if pred(m)? {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Grid edges: horizontal `(0, ix, iy)` joins `(ix, iy)`–`(ix+1, iy)`,
/// vertical `(1, ix, iy)` joins `(ix, iy)`–`(ix, iy+1)`.
type EdgeKey = (u8, usize, usize);

fn cell_edges(ix: usize, iy: usize) -> [EdgeKey; 4] {
    [(0, ix, iy), (1, ix + 1, iy), (0, ix, iy + 1), (1, ix, iy)]
}

/// Labels every cell of the `(x, y)` plane and refines boundaries between
/// differing neighbors by bisection on the energy difference of the two
/// families.
pub fn scan_phases(x: AxisSpec, y: AxisSpec, fixed: ModelParams, opts: PhaseScanOptions) -> Result<PhaseMap> {
    for a in [&x, &y] {
        if !a.axis.is_model_parameter() {
            return Err(Error::InvalidRange(format!("axis {} cannot span a phase map", a.axis)));
        }
    }
    if x.axis == y.axis {
        return Err(Error::InvalidRange("phase map axes must differ".into()));
    }
    fixed.validate()?;
    let (xs, ys) = (x.values(), y.values());
    let (nx, ny) = (xs.len(), ys.len());
    let at = |px: f64, py: f64| y.axis.apply(x.axis.apply(fixed, px), py);
    let cells: Vec<PhaseLabel> =
        run_parallel(opts.threads, nx * ny, |k| ground_phase(&at(xs[k % nx], ys[k / nx])))?
            .into_iter()
            .collect::<Result<_>>()?;
    let fam = |ix: usize, iy: usize| cells[iy * nx + ix].family();
    let character = |ix: usize, iy: usize| cells[iy * nx + ix].character;

    let mut edges: Vec<(EdgeKey, [usize; 4])> = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if ix + 1 < nx {
                edges.push(((0, ix, iy), [ix, iy, ix + 1, iy]));
            }
            if iy + 1 < ny {
                edges.push(((1, ix, iy), [ix, iy, ix, iy + 1]));
            }
        }
    }
    let refine = |&(key, [ax, ay, bx, by]): &(EdgeKey, [usize; 4])| -> Result<(Option<BoundaryPoint>, Option<[f64; 2]>)> {
        let (fa, fb) = (fam(ax, ay), fam(bx, by));
        let horizontal = key.0 == 0;
        let point_at = |t: f64| if horizontal { (t, ys[ay]) } else { (xs[ax], t) };
        let (lo, hi) = if horizontal { (xs[ax], xs[bx]) } else { (ys[ay], ys[by]) };
        if fa != fb {
            let t = bisect_root(
                lo,
                hi,
                |t| {
                    let (px, py) = point_at(t);
                    let p = at(px, py);
                    Ok(family_energy(&p, fa)? - family_energy(&p, fb)?)
                },
                opts.bisect_tol,
            )?;
            let (px, py) = point_at(t);
            return Ok((Some(BoundaryPoint { x: px, y: py, phases: ordered(fa, fb) }), None));
        }
        let (ca, cb) = (character(ax, ay), character(bx, by));
        if ca != cb {
            let t = bisect_predicate(
                lo,
                hi,
                |t| {
                    let (px, py) = point_at(t);
                    Ok(dominant_cubic_component(&at(px, py), fa) == ca)
                },
                opts.bisect_tol,
            )?;
            let (px, py) = point_at(t);
            return Ok((None, Some([px, py])));
        }
        Ok((None, None))
    };
    let refined: Vec<_> =
        run_parallel(opts.threads, edges.len(), |k| refine(&edges[k]))?.into_iter().collect::<Result<_>>()?;
    let mut boundary_points: BTreeMap<EdgeKey, BoundaryPoint> = BTreeMap::new();
    let mut character_points: BTreeMap<EdgeKey, [f64; 2]> = BTreeMap::new();
    for ((key, _), (b, c)) in edges.iter().zip(refined) {
        if let Some(b) = b {
            boundary_points.insert(*key, b);
        }
        if let Some(c) = c {
            character_points.insert(*key, c);
        }
    }

    let mut boundary_segments = Vec::new();
    let mut character_segments = Vec::new();
    for iy in 0..ny.saturating_sub(1) {
        for ix in 0..nx.saturating_sub(1) {
            let around = cell_edges(ix, iy);
            let mut groups: BTreeMap<(LevelLabel, LevelLabel), Vec<EdgeKey>> = BTreeMap::new();
            for e in around {
                if let Some(b) = boundary_points.get(&e) {
                    groups.entry(b.phases).or_default().push(e);
                }
            }
            for keys in groups.values() {
                for pair in keys.chunks_exact(2) {
                    boundary_segments.push((pair[0], pair[1]));
                }
            }
            let with_char: Vec<EdgeKey> = around.into_iter().filter(|e| character_points.contains_key(e)).collect();
            for pair in with_char.chunks_exact(2) {
                character_segments.push((pair[0], pair[1]));
            }
        }
    }
    let mut boundaries: Vec<BoundaryLine> = chain_segments(&boundary_segments)
        .into_iter()
        .map(|keys| BoundaryLine {
            phases: boundary_points[&keys[0]].phases,
            points: keys.iter().map(|k| [boundary_points[k].x, boundary_points[k].y]).collect(),
        })
        .collect();
    // isolated boundary points (no partner edge in any cell) still count
    let used: std::collections::BTreeSet<EdgeKey> = boundary_segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    for (k, b) in &boundary_points {
        if !used.contains(k) {
            boundaries.push(BoundaryLine { phases: b.phases, points: vec![[b.x, b.y]] });
        }
    }
    let character_lines = chain_segments(&character_segments)
        .into_iter()
        .map(|keys| keys.iter().map(|k| character_points[k]).collect())
        .collect();
    Ok(PhaseMap { x, y, fixed, cells, boundaries, character_lines })
}

/// Where a phase must be the ground state for a point to be admissible in
/// [`find_maximum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    /// Only points where the phase is the ground state at the fixed
    /// parameters.
    GroundState,
    /// The whole range, provided the phase is the ground state at one grid
    /// point or more.
    #[default]
    Eigenvector,
}

impl std::str::FromStr for Stability {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" | "ground-state" => Ok(Stability::GroundState),
            "eigenvector" => Ok(Stability::Eigenvector),
            _ => Err(Error::Config(format!("unknown stability mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxOptions {
    pub quantity: Quantity,
    pub mode: StateMode,
    pub stability: Stability,
    /// Points of the initial grid scan.
    pub grid: usize,
    /// Golden-section stopping width.
    pub tol: f64,
}

impl Default for MaxOptions {
    fn default() -> Self {
        MaxOptions {
            quantity: Quantity::Gtn,
            mode: StateMode::Pure,
            stability: Stability::default(),
            grid: 601,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub phase: LevelLabel,
    pub axis: Axis,
    pub location: f64,
    pub value: f64,
    pub report: NegativityReport,
}

/// Maximizes a negativity of the `phase` eigenvector along `axis` over
/// `[lo, hi]` by grid scan plus golden-section refinement.
pub fn find_maximum(
    phase: LevelLabel,
    axis: Axis,
    (lo, hi): (f64, f64),
    fixed: ModelParams,
    opts: MaxOptions,
) -> Result<Maximum> {
    if !axis.is_model_parameter() {
        return Err(Error::InvalidRange(format!("cannot maximize along {axis}")));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi || opts.grid < 3 {
        return Err(Error::InvalidRange(format!("{lo}:{hi}:{}", opts.grid)));
    }
    if !phase.is_known() {
        return Err(Error::InvalidLabel(phase.to_string()));
    }
    fixed.validate()?;
    let at = |t: f64| axis.apply(fixed, t);
    let ground = |t: f64| -> Result<bool> { Ok(ground_phase(&at(t))?.admits(phase)) };
    let value = |t: f64| -> Result<f64> { Ok(phase_negativity(phase, &at(t), opts.mode)?.get(opts.quantity)) };
    let objective = |t: f64| -> Result<f64> {
        if opts.stability == Stability::GroundState && !ground(t)? {
            return Ok(f64::NEG_INFINITY);
        }
        value(t)
    };

    let n = opts.grid;
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut stable_somewhere = false;
    let mut best: Option<(usize, f64)> = None;
    for (i, &t) in grid.iter().enumerate() {
        let g = ground(t)?;
        stable_somewhere |= g;
        if opts.stability == Stability::GroundState && !g {
            continue;
        }
        let v = value(t)?;
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    if !stable_somewhere {
        return Err(Error::PhaseNotStable(format!("{phase} is not the ground state anywhere on {axis} ∈ [{lo}, {hi}]")));
    }
    let (k, grid_best) = best.expect("stable somewhere implies a candidate");

    let (mut a, mut b) = (grid[k.saturating_sub(1)], grid[(k + 1).min(n - 1)]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (objective(c)?, objective(d)?);
    while (b - a) > opts.tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = objective(d)?;
        }
    }
    let mut location = 0.5 * (a + b);
    if objective(location)? < grid_best {
        location = grid[k];
    }
    let report = phase_negativity(phase, &at(location), opts.mode)?;
    Ok(Maximum { phase, axis, location, value: report.get(opts.quantity), report })
}

/// gTN maximum of a phase eigenvector; see [`find_maximum`].
pub fn find_gtn_maximum(
    phase: LevelLabel,
    axis: Axis,
    range: (f64, f64),
    fixed: ModelParams,
    mode: StateMode,
    stability: Stability,
) -> Result<Maximum> {
    find_maximum(phase, axis, range, fixed, MaxOptions { mode, stability, ..MaxOptions::default() })
}
