//! Closed-form eigenvalues and eigenvectors of the trimer.
//!
//! `S_t^z` and the exchange `S1 ↔ S2` are conserved, so the 18-dimensional
//! space splits into blocks of size at most three:
//!
//! * `|±5/2⟩`: the stretched product state;
//! * `|±3/2⟩`: an antisymmetric singlet (`ε^I_{3/2}`) and a symmetric 2×2 block
//!   with discriminant `P1`;
//! * `|±1/2⟩`: an antisymmetric 2×2 block with discriminant `P2` and a
//!   symmetric 3×3 block solved by the trigonometric form of the cubic.
//!
//! Negative-`S_t^z` members follow from the positive ones by reversing every
//! magnetic quantum number, which maps `H(h)` onto `H(-h)`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::eigen;
use crate::hamiltonian::ModelParams;
use crate::label::LevelLabel;
use crate::spin::{flip_vector, ket, C64};
use crate::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Denominator magnitude below which closed-form cubic amplitudes are
/// replaced by the numerical block eigenvector.
const SINGULAR_TOL: f64 = 1e-10;

/// Intermediate quantities of the closed-form solution at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct TableCoefficients {
    pub p1: f64,
    pub p2: f64,
    /// Depressed-cubic auxiliaries: roots solve `Y³ - 3pY - 2q = 0`.
    pub p: f64,
    pub q: f64,
    pub phi: f64,
    /// Roots in descending order `Y0 ≥ Y1 ≥ Y2`.
    pub y: [f64; 3],
    pub a1m: f64,
    pub a1p: f64,
    pub a2m: f64,
    pub a2p: f64,
    pub r: [f64; 3],
    pub t: [f64; 3],
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub gamma: [f64; 3],
    /// Roots whose amplitudes came from the numerical block fallback.
    pub fallback: [bool; 3],
}

/// Three real roots of `Y³ - 3pY - 2q = 0`, descending.
pub fn cubic_roots(p: f64, q: f64) -> Result<[f64; 3]> {
    Ok(cubic_with_angle(p, q)?.0)
}

fn cubic_with_angle(p: f64, q: f64) -> Result<([f64; 3], f64)> {
    let tol = 1e-12 * (1.0 + q.abs().powf(2.0 / 3.0));
    if p < -tol || !p.is_finite() || !q.is_finite() {
        return Err(Error::NegativeCubicP(p));
    }
    let p = p.max(0.0);
    let disc = (p * p * p - q * q).max(0.0);
    let phi = disc.sqrt().atan2(q);
    let amp = 2.0 * p.sqrt();
    let y = [0, 1, 2].map(|i: i32| amp * (phi / 3.0 + 2.0 / 3.0 * PI * f64::from(3 - i)).cos());
    Ok((y, phi))
}

/// Symmetric `S_t^z = +1/2` block at `h = 0` in the basis
/// `|+½⟩⊗Ψ_S⁺, |-½⟩⊗Φ_S⁺, |+½⟩⊗|0,0⟩`.
fn cubic_block(p: &ModelParams) -> [[f64; 3]; 3] {
    let ModelParams { j, j1, d, .. } = *p;
    [
        [2.0 * d - j1, j * FRAC_1_SQRT_2, SQRT_2 * j1],
        [j * FRAC_1_SQRT_2, d - j / 2.0 + j1, j],
        [SQRT_2 * j1, j, 0.0],
    ]
}

impl TableCoefficients {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let ModelParams { j, j1, d, .. } = *params;
        let p1 = ((5.0 * j + 2.0 * d).powi(2) - 32.0 * j * d).max(0.0).sqrt();
        let p2 = ((3.0 * j - 2.0 * d).powi(2) + 16.0 * j * d).max(0.0).sqrt();
        let s1 = 3.0 * j - 2.0 * d;
        let a1m = -((p1 - s1).max(0.0) / (2.0 * p1)).sqrt();
        let a1p = ((p1 + s1).max(0.0) / (2.0 * p1)).sqrt();
        let s2 = j + 2.0 * d;
        let a2m = ((p2 - s2).max(0.0) / (2.0 * p2)).sqrt();
        let a2p = ((p2 + s2).max(0.0) / (2.0 * p2)).sqrt();

        let p = (19.0 * j * j + 12.0 * d * d) / 36.0 - j1 / 6.0 * (j + 2.0 * d - 6.0 * j1);
        let q = (j / 6.0 - j1 / 2.0) * d * d - (j * j / 4.0 + j * j1 / 6.0 - j1 * j1 / 2.0) * d
            - 7.0 * j.powi(3) / 54.0
            + 37.0 * j * j * j1 / 24.0
            + j * j1 * j1 / 4.0
            - j1.powi(3);
        let (y, phi) = cubic_with_angle(p, q)?;

        let scale = j.abs().max(j1.abs()).max(d.abs()).max(1.0);
        let mut out = TableCoefficients {
            p1,
            p2,
            p,
            q,
            phi,
            y,
            a1m,
            a1p,
            a2m,
            a2p,
            r: [f64::NAN; 3],
            t: [f64::NAN; 3],
            alpha: [0.0; 3],
            beta: [0.0; 3],
            gamma: [0.0; 3],
            fallback: [false; 3],
        };

        let block = cubic_block(params);
        for i in 0..3 {
            let eps = d - j / 6.0 + y[i];
            let den = eps + 2.0 * j1;
            let near_degenerate = (0..3).any(|k| k != i && (y[k] - y[i]).abs() < 1e-7 * scale);
            if den.abs() < SINGULAR_TOL * scale || near_degenerate {
                out.fallback[i] = true;
                continue;
            }
            let r = SQRT_2 / j * (eps - 2.0 * d - j1 + 4.0 * d * j1 / den);
            let t = 2.0 * (1.0 - 2.0 * d / den);
            let alpha = (1.0 + r * r + t * t / 2.0).powf(-0.5);
            let amps = [alpha, alpha * r, alpha * t / SQRT_2];
            // large R/T lose precision near the singular set
            let residual = (0..3)
                .map(|row| (0..3).map(|c| block[row][c] * amps[c]).sum::<f64>() - eps * amps[row])
                .fold(0.0f64, |m, x| m.max(x.abs()));
            out.r[i] = r;
            out.t[i] = t;
            if residual > 1e-10 * scale {
                out.fallback[i] = true;
                continue;
            }
            out.alpha[i] = amps[0];
            out.beta[i] = amps[1];
            out.gamma[i] = amps[2];
        }
        if out.fallback.iter().any(|&f| f) {
            let m = DMatrix::from_fn(3, 3, |r, c| C64::from(block[r][c]));
            let (_, vecs) = eigen::eigh(&m);
            for i in 0..3 {
                if out.fallback[i] {
                    // block eigenvalues ascend, roots descend
                    let col = vecs.column(2 - i);
                    out.alpha[i] = col[0].re;
                    out.beta[i] = col[1].re;
                    out.gamma[i] = col[2].re;
                }
            }
        }
        Ok(out)
    }
}

/// One labeled level of the closed-form solution.
#[derive(Debug, Clone)]
pub struct AnalyticLevel {
    pub label: LevelLabel,
    pub energy: f64,
    pub vector: DVector<C64>,
}

fn zeeman(label: LevelLabel, h: f64) -> f64 {
    -h * label.stz.value()
}

/// Energies of the nine positive-`S_t^z` families at `h = 0`, in
/// [`LevelLabel::FAMILIES`] order.
fn family_energies_h0(p: &ModelParams, c: &TableCoefficients) -> [f64; 9] {
    let ModelParams { j, j1, d, .. } = *p;
    let base = (6.0 * d - j) / 4.0;
    let cubic = (6.0 * d - j) / 6.0;
    [
        base + j1 + (5.0 * j + 2.0 * d) / 4.0,
        base - j1 + (3.0 * j - 2.0 * d) / 4.0,
        base + j1 - c.p1 / 4.0,
        base + j1 + c.p1 / 4.0,
        base - j1 - c.p2 / 4.0,
        base - j1 + c.p2 / 4.0,
        cubic + c.y[0],
        cubic + c.y[1],
        cubic + c.y[2],
    ]
}

/// All 18 `(label, energy)` pairs without eigenvectors.
pub fn level_energies(p: &ModelParams) -> Result<Vec<(LevelLabel, f64)>> {
    let c = TableCoefficients::new(p)?;
    let e0 = family_energies_h0(p, &c);
    let mut out = Vec::with_capacity(18);
    for (fam, e) in LevelLabel::FAMILIES.into_iter().zip(e0) {
        out.push((fam, e + zeeman(fam, p.h)));
        let partner = fam.partner();
        out.push((partner, e + zeeman(partner, p.h)));
    }
    Ok(out)
}

fn family_vector(fam: LevelLabel, c: &TableCoefficients) -> DVector<C64> {
    let s = FRAC_1_SQRT_2;
    // |±1/2⟩ twice-values: +1 / -1
    let phi_a = |a: f64| ket(&[(a * s, 1, 1, 0), (-a * s, 1, 0, 1)]);
    let phi_s_dn = |a: f64| ket(&[(a * s, -1, 1, 0), (a * s, -1, 0, 1)]);
    let phi_s_up = |a: f64| ket(&[(a * s, 1, 1, 0), (a * s, 1, 0, 1)]);
    let psi_up = |a: f64| ket(&[(a * s, 1, 1, -1), (-a * s, 1, -1, 1)]);
    let phi_a_dn = |a: f64| ket(&[(a * s, -1, 1, 0), (-a * s, -1, 0, 1)]);
    let psi_s_up = |a: f64| ket(&[(a * s, 1, 1, -1), (a * s, 1, -1, 1)]);
    let cubic = |i: usize| psi_s_up(c.alpha[i]) + phi_s_dn(c.beta[i]) + ket(&[(c.gamma[i], 1, 0, 0)]);
    match fam {
        LevelLabel::STRETCHED => ket(&[(1.0, 1, 1, 1)]),
        LevelLabel::QUARTET_32_I => phi_a(1.0),
        LevelLabel::QUARTET_32_II => phi_s_up(c.a1m) + ket(&[(c.a1p, -1, 1, 1)]),
        LevelLabel::SEXTET_32 => phi_s_up(c.a1p) + ket(&[(-c.a1m, -1, 1, 1)]),
        LevelLabel::DOUBLET_12_II => psi_up(c.a2m) + phi_a_dn(-c.a2p),
        LevelLabel::QUARTET_12_I => psi_up(c.a2p) + phi_a_dn(c.a2m),
        LevelLabel::SEXTET_12 => cubic(0),
        LevelLabel::QUARTET_12_II => cubic(1),
        LevelLabel::DOUBLET_12_I => cubic(2),
        _ => unreachable!("not a family label: {fam}"),
    }
}

/// The 18 labeled levels at `p`: each family's positive member followed by
/// its negative partner, in [`LevelLabel::FAMILIES`] order.
pub fn analytic_eigensystem(p: &ModelParams) -> Result<Vec<AnalyticLevel>> {
    let c = TableCoefficients::new(p)?;
    let e0 = family_energies_h0(p, &c);
    let mut out = Vec::with_capacity(18);
    for (fam, e) in LevelLabel::FAMILIES.into_iter().zip(e0) {
        let mut up = family_vector(fam, &c);
        let mut down = flip_vector(&up);
        eigen::fix_phase(&mut up);
        eigen::fix_phase(&mut down);
        out.push(AnalyticLevel { label: fam, energy: e + zeeman(fam, p.h), vector: up });
        let partner = fam.partner();
        out.push(AnalyticLevel { label: partner, energy: e + zeeman(partner, p.h), vector: down });
    }
    Ok(out)
}

/// A single labeled level.
pub fn analytic_level(p: &ModelParams, label: LevelLabel) -> Result<AnalyticLevel> {
    if !label.is_known() {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    let c = TableCoefficients::new(p)?;
    let fam = label.family();
    let idx = LevelLabel::FAMILIES.iter().position(|&f| f == fam).expect("known family");
    let e = family_energies_h0(p, &c)[idx] + zeeman(label, p.h);
    let mut v = family_vector(fam, &c);
    if label.stz.twice() < 0 {
        v = flip_vector(&v);
    }
    eigen::fix_phase(&mut v);
    Ok(AnalyticLevel { label, energy: e, vector: v })
}

/// Sorted energies of all 18 levels.
pub fn sorted_energies(p: &ModelParams) -> Result<Vec<f64>> {
    let mut e: Vec<f64> = level_energies(p)?.into_iter().map(|(_, e)| e).collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// Index of the dominant amplitude `(α², β², γ²)` of a cubic-family level;
/// marks changes in eigenvector character inside a phase.
pub fn dominant_cubic_component(p: &ModelParams, label: LevelLabel) -> Option<usize> {
    let i = match label.family() {
        LevelLabel::SEXTET_12 => 0,
        LevelLabel::QUARTET_12_II => 1,
        LevelLabel::DOUBLET_12_I => 2,
        _ => return None,
    };
    let c = TableCoefficients::new(p).ok()?;
    let w = [c.alpha[i].powi(2), c.beta[i].powi(2), c.gamma[i].powi(2)];
    (0..3).max_by(|&a, &b| w[a].total_cmp(&w[b]))
}
