//! Two-dimensional negativity maps at zero and finite temperature.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::{extract_contours, ContourSet};
use crate::hamiltonian::{spectrum, ModelParams, Spectrum};
use crate::negativity::{gtn, NegativityReport, Quantity};
use crate::phase::{ground_phase, phase_negativity};
use crate::thermal::{thermal_density_matrix, StateMode};
use crate::units::PhysicalScale;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// `h/J`
    H,
    /// `D/J`
    D,
    /// `J1/J`
    J1,
    /// `k_BT/J`
    Kt,
    /// Field in tesla.
    FieldTesla,
    /// Temperature in kelvin.
    TemperatureKelvin,
}

impl Axis {
    /// Human-readable name used in file headers.
    pub fn name(self) -> &'static str {
        match self {
            Axis::H => "h/J",
            Axis::D => "D/J",
            Axis::J1 => "J1/J",
            Axis::Kt => "kT/J",
            Axis::FieldTesla => "B[T]",
            Axis::TemperatureKelvin => "T[K]",
        }
    }

    /// `h`, `D` or `J1`: an axis that sets a coupling.
    pub fn is_model_parameter(self) -> bool {
        matches!(self, Axis::H | Axis::D | Axis::J1)
    }

    /// Sets this coupling in `p`, in units of `p.j`. Other axes leave `p` as
    /// is.
    pub fn apply(self, p: ModelParams, v: f64) -> ModelParams {
        match self {
            Axis::H => p.with_h(v * p.j),
            Axis::D => p.with_d(v * p.j),
            Axis::J1 => p.with_j1(v * p.j),
            _ => p,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "h/j" => Ok(Axis::H),
            "d" | "d/j" => Ok(Axis::D),
            "j1" | "j1/j" => Ok(Axis::J1),
            "kt" | "kt/j" => Ok(Axis::Kt),
            "b" | "tesla" => Ok(Axis::FieldTesla),
            "t" | "kelvin" => Ok(Axis::TemperatureKelvin),
            _ => Err(Error::InvalidRange(format!("unknown axis `{s}`"))),
        }
    }
}

/// Largest accepted point count per axis.
pub const MAX_COUNT: usize = 100_000;

/// `min:max:count`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridRange {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let r = GridRange { min, max, count };
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidRange(format!("{r}: bounds must be finite")));
        }
        if min == max {
            return Err(Error::InvalidRange(format!("{r}: empty range")));
        }
        if !(2..=MAX_COUNT).contains(&count) {
            return Err(Error::InvalidRange(format!("{r}: count must be in 2..={MAX_COUNT}")));
        }
        Ok(r)
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for GridRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

impl FromStr for GridRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRange(format!("`{s}` is not min:max:count"));
        let mut parts = s.trim().split(':');
        let (Some(a), Some(b), Some(n), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let min: f64 = a.trim().parse().map_err(|_| bad())?;
        let max: f64 = b.trim().parse().map_err(|_| bad())?;
        let count: usize = n.trim().parse().map_err(|_| bad())?;
        GridRange::new(min, max, count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(axis: Axis, min: f64, max: f64, count: usize) -> Result<Self> {
        Self::from_range(axis, GridRange::new(min, max, count)?)
    }

    pub fn from_range(axis: Axis, r: GridRange) -> Result<Self> {
        Ok(AxisSpec { axis, min: r.min, max: r.max, count: r.count })
    }

    pub fn range(&self) -> GridRange {
        GridRange { min: self.min, max: self.max, count: self.count }
    }

    pub fn values(&self) -> Vec<f64> {
        self.range().values()
    }
}

/// Evaluates `f(0..n)` on a pool of `threads` workers (all cores when
/// `None`), returning results in index order.
pub fn run_parallel<T, F>(threads: Option<usize>, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match threads {
        Some(1) => Ok((0..n).map(f).collect()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
        }
        None => Ok((0..n).into_par_iter().map(f).collect()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Temperature {
    /// Ground-state phase eigenvectors.
    Zero {
        state: StateMode,
        /// Grid points at `h = 0` are moved to this field.
        h_zero_offset: Option<f64>,
    },
    /// Gibbs states; axes may be in laboratory units.
    Thermal { scale: Option<PhysicalScale> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    /// Couplings not set by an axis.
    pub fixed: ModelParams,
    pub temperature: Temperature,
    pub version: String,
    /// Left empty unless the caller supplies one, so that identical scans
    /// serialize identically.
    #[serde(default)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScan {
    pub x: AxisSpec,
    pub y: AxisSpec,
    pub quantity: Quantity,
    /// Row-major, `y` outer: `values[iy * x.count + ix]`.
    pub values: Vec<f64>,
    pub metadata: ScanMetadata,
}

impl GridScan {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.x.count + ix]
    }

    pub fn row(&self, iy: usize) -> &[f64] {
        &self.values[iy * self.x.count..(iy + 1) * self.x.count]
    }

    pub fn column(&self, ix: usize) -> Vec<f64> {
        (0..self.y.count).map(|iy| self.value(ix, iy)).collect()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn contours(&self, isovalues: &[f64]) -> ContourSet {
        extract_contours(&self.x.values(), &self.y.values(), &self.values, isovalues)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTOptions {
    pub quantity: Quantity,
    pub state: StateMode,
    pub h_zero_offset: Option<f64>,
    pub threads: Option<usize>,
}

impl Default for ZeroTOptions {
    fn default() -> Self {
        ZeroTOptions { quantity: Quantity::Gtn, state: StateMode::Pure, h_zero_offset: Some(1e-9), threads: None }
    }
}

/// Negativity of the ground state at `p`. On a tie the largest value over
/// the tied phases is reported.
pub fn ground_negativity(p: &ModelParams, state: StateMode, quantity: Quantity) -> Result<f64> {
    let phase = ground_phase(p)?;
    let mut best = phase_negativity(phase.level, p, state)?.get(quantity);
    for other in &phase.tied_with {
        let level = if p.h < 0.0 { other.partner() } else { *other };
        best = best.max(phase_negativity(level, p, state)?.get(quantity));
    }
    Ok(best)
}

/// Zero-temperature map over two couplings.
pub fn scan_gtn_zero_t(x: AxisSpec, y: AxisSpec, fixed: ModelParams, opts: ZeroTOptions) -> Result<GridScan> {
    for a in [&x, &y] {
        if !a.axis.is_model_parameter() {
            return Err(Error::InvalidRange(format!("axis {} needs a thermal scan", a.axis)));
        }
    }
    if x.axis == y.axis {
        return Err(Error::InvalidRange("scan axes must differ".into()));
    }
    fixed.validate()?;
    let (xs, ys) = (x.values(), y.values());
    let nx = xs.len();
    let values = run_parallel(opts.threads, nx * ys.len(), |k| {
        let mut p = y.axis.apply(x.axis.apply(fixed, xs[k % nx]), ys[k / nx]);
        if let Some(off) = opts.h_zero_offset {
            if p.h == 0.0 {
                p.h = off * p.j;
            }
        }
        ground_negativity(&p, opts.state, opts.quantity)
    })?
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let temperature = Temperature::Zero { state: opts.state, h_zero_offset: opts.h_zero_offset };
    Ok(GridScan { x, y, quantity: opts.quantity, values, metadata: metadata(fixed, temperature) })
}

fn metadata(fixed: ModelParams, temperature: Temperature) -> ScanMetadata {
    ScanMetadata { fixed, temperature, version: env!("CARGO_PKG_VERSION").to_string(), timestamp: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThermalOptions {
    pub quantity: Quantity,
    /// Needed when an axis is in tesla or kelvin.
    pub scale: Option<PhysicalScale>,
    pub threads: Option<usize>,
}

/// Negativities of the Gibbs state.
pub fn thermal_negativity(s: &Spectrum, kt: f64) -> Result<NegativityReport> {
    gtn(&thermal_density_matrix(s, kt)?)
}

/// Finite-temperature map: `x` is the field (`h/J` or tesla), `y` the
/// temperature (`k_BT/J` or kelvin). The Hamiltonian is diagonalized once
/// per field column.
pub fn scan_thermal(x: AxisSpec, y: AxisSpec, fixed: ModelParams, opts: ThermalOptions) -> Result<GridScan> {
    let need_scale = || {
        opts.scale.ok_or_else(|| Error::InvalidPhysical("laboratory-unit axes need a compound scale".into()))
    };
    let to_h: Box<dyn Fn(f64) -> f64 + Sync + Send> = match x.axis {
        Axis::H => Box::new(|v| v),
        Axis::FieldTesla => {
            let s = need_scale()?;
            Box::new(move |b| s.h_over_j(b))
        }
        a => return Err(Error::InvalidRange(format!("thermal x axis must be a field, got {a}"))),
    };
    let to_kt: Box<dyn Fn(f64) -> f64 + Sync + Send> = match y.axis {
        Axis::Kt => Box::new(|v| v),
        Axis::TemperatureKelvin => {
            let s = need_scale()?;
            Box::new(move |t| s.kt_over_j(t))
        }
        a => return Err(Error::InvalidRange(format!("thermal y axis must be a temperature, got {a}"))),
    };
    fixed.validate()?;
    let (xs, ys) = (x.values(), y.values());
    let kts: Vec<f64> = ys.iter().map(|&t| to_kt(t) * fixed.j).collect();
    if let Some(bad) = kts.iter().find(|&&k| k.is_nan() || k <= 0.0) {
        return Err(Error::NonPositiveTemperature(*bad));
    }
    let columns = run_parallel(opts.threads, xs.len(), |ix| -> Result<Vec<f64>> {
        let s = spectrum(&fixed.with_h(to_h(xs[ix]) * fixed.j))?;
        kts.iter().map(|&kt| Ok(thermal_negativity(&s, kt)?.get(opts.quantity))).collect()
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (nx, ny) = (xs.len(), ys.len());
    let values = (0..nx * ny).map(|k| columns[k % nx][k / nx]).collect();
    Ok(GridScan {
        x,
        y,
        quantity: opts.quantity,
        values,
        metadata: metadata(fixed, Temperature::Thermal { scale: opts.scale }),
    })
}

/// A temperature where a partial-transpose eigenvalue changes sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalKink {
    pub kt: f64,
    /// Negative partial-transpose eigenvalues over all three cuts, just
    /// below and just above `kt`.
    pub negative_below: usize,
    pub negative_above: usize,
    pub gtn: f64,
    /// One-sided derivatives of gTN with respect to `k_BT/J`.
    pub slope_below: f64,
    pub slope_above: f64,
}

impl ThermalKink {
    pub fn slope_jump(&self) -> f64 {
        (self.slope_above - self.slope_below).abs()
    }
}

fn negative_count(r: &NegativityReport) -> usize {
    r.partitions.iter().map(|p| p.negative_eigenvalues.len()).sum()
}

/// Scans `samples` temperatures in `[lo, hi]` for changes in the number of
/// negative partial-transpose eigenvalues and locates each by bisection.
pub fn find_thermal_kinks(p: &ModelParams, (lo, hi): (f64, f64), samples: usize) -> Result<Vec<ThermalKink>> {
    let r = GridRange::new(lo, hi, samples)?;
    if !(lo > 0.0 && hi > 0.0) {
        return Err(Error::NonPositiveTemperature(lo.min(hi)));
    }
    let s = spectrum(p)?;
    let at = |kt: f64| thermal_negativity(&s, kt);
    let count = |kt: f64| -> Result<usize> { Ok(negative_count(&at(kt)?)) };
    let ts = r.values();
    let counts: Vec<usize> = ts.iter().map(|&t| count(t)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 1..ts.len() {
        if counts[i] == counts[i - 1] {
            continue;
        }
        let (mut a, mut b) = (ts[i - 1], ts[i]);
        while (b - a).abs() > 1e-12 * a.abs().max(1.0) {
            let m = 0.5 * (a + b);
            if count(m)? == counts[i - 1] {
                a = m;
            } else {
                b = m;
            }
        }
        let kt = 0.5 * (a + b);
        let step = 1e-5 * kt.abs().max(1.0);
        let g = |t: f64| -> Result<f64> { Ok(at(t)?.gtn) };
        let (dir_lo, dir_hi) = if a < b { (a, b) } else { (b, a) };
        let slope_below = (g(dir_lo - step)? - g(dir_lo - 2.0 * step)?) / step;
        let slope_above = (g(dir_hi + 2.0 * step)? - g(dir_hi + step)?) / step;
        out.push(ThermalKink {
            kt,
            negative_below: count(dir_lo)?,
            negative_above: count(dir_hi)?,
            gtn: g(kt)?,
            slope_below,
            slope_above,
        });
    }
    Ok(out)
}
