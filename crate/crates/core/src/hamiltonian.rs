//! Trimer Hamiltonian and the numerical exact-diagonalization oracle.
//!
//! ```text
//! H = Σ_{i=1,2} [ J μ·S_i + D (S_i^z)² - h S_i^z ] + J1 S_1·S_2 - h μ^z
//! ```

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::label::LevelLabel;
use crate::spin::{site_spin, BasisState, HalfInt, Operator, Site, C64, DIM};
use crate::{Error, Result};

/// Couplings of the trimer. In dimensionless mode `j = 1` and the rest are
/// ratios to `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub j: f64,
    pub j1: f64,
    pub d: f64,
    pub h: f64,
}

impl ModelParams {
    pub fn new(j: f64, j1: f64, d: f64, h: f64) -> Self {
        ModelParams { j, j1, d, h }
    }

    /// `J = 1`, remaining couplings given as ratios.
    pub fn dimensionless(j1: f64, d: f64, h: f64) -> Self {
        ModelParams { j: 1.0, j1, d, h }
    }

    pub fn with_h(self, h: f64) -> Self {
        ModelParams { h, ..self }
    }

    pub fn with_d(self, d: f64) -> Self {
        ModelParams { d, ..self }
    }

    pub fn with_j1(self, j1: f64) -> Self {
        ModelParams { j1, ..self }
    }

    pub fn check_finite(&self) -> Result<()> {
        for (name, v) in [("J", self.j), ("J1", self.j1), ("D", self.d), ("h", self.h)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    /// Finite couplings and `J > 0`.
    pub fn validate(&self) -> Result<()> {
        self.check_finite()?;
        if self.j <= 0.0 {
            return Err(Error::NonPositiveExchange(self.j));
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::dimensionless(0.0, 0.0, 0.0)
    }
}

struct Terms {
    exchange_mu: Operator,
    exchange_11: Operator,
    anisotropy: Operator,
    total_sz: Operator,
}

fn dot(a: Site, b: Site) -> Operator {
    let (sa, sb) = (site_spin(a), site_spin(b));
    sa.components()
        .iter()
        .zip(sb.components())
        .fold(Operator::zeros(DIM), |acc, (x, y)| &acc + &(*x * y))
}

fn terms() -> &'static Terms {
    static TERMS: OnceLock<Terms> = OnceLock::new();
    TERMS.get_or_init(|| {
        let z1 = site_spin(Site::S1).z;
        let z2 = site_spin(Site::S2).z;
        let zmu = site_spin(Site::Mu).z;
        Terms {
            exchange_mu: &dot(Site::Mu, Site::S1) + &dot(Site::Mu, Site::S2),
            exchange_11: dot(Site::S1, Site::S2),
            anisotropy: &(&z1 * &z1) + &(&z2 * &z2),
            total_sz: &(&zmu + &z1) + &z2,
        }
    })
}

/// The 18×18 Hamiltonian at `p`.
pub fn build_hamiltonian(p: &ModelParams) -> Result<Operator> {
    p.check_finite()?;
    let t = terms();
    let m = t.exchange_mu.matrix() * C64::from(p.j)
        + t.exchange_11.matrix() * C64::from(p.j1)
        + t.anisotropy.matrix() * C64::from(p.d)
        - t.total_sz.matrix() * C64::from(p.h);
    Ok(Operator::new(m))
}

/// `μ^z + S_1^z + S_2^z`.
pub fn total_sz() -> Operator {
    terms().total_sz.clone()
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: DVector<C64>,
    /// `⟨S_t^z⟩` rounded to the nearest half-integer.
    pub stz: HalfInt,
    pub label: Option<LevelLabel>,
}

/// Eigenpairs sorted by ascending energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub levels: Vec<Eigenpair>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn ground_energy(&self) -> f64 {
        self.levels.first().map_or(f64::NAN, |l| l.energy)
    }

    /// `max_k ‖H v_k - ε_k v_k‖`.
    pub fn max_residual(&self, h: &Operator) -> f64 {
        self.levels
            .iter()
            .map(|l| (h.apply(&l.vector) - &l.vector * C64::from(l.energy)).norm())
            .fold(0.0, f64::max)
    }

    /// `max |⟨v_i|v_j⟩ - δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.levels.iter().enumerate() {
            for (j, b) in self.levels.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.vector.dotc(&b.vector) - C64::from(target)).norm());
            }
        }
        worst
    }
}

/// Basis indices grouped by total `S_t^z`, highest first.
fn sector_indices() -> &'static [(HalfInt, Vec<usize>)] {
    static SECTORS: OnceLock<Vec<(HalfInt, Vec<usize>)>> = OnceLock::new();
    SECTORS.get_or_init(|| {
        let mut map = std::collections::BTreeMap::<HalfInt, Vec<usize>>::new();
        for i in 0..DIM {
            map.entry(BasisState::from_index(i).total_sz()).or_default().push(i);
        }
        map.into_iter().rev().collect()
    })
}

/// Full eigendecomposition of a Hermitian operator. Trimer operators that
/// conserve `S_t^z` are diagonalized sector by sector.
pub fn diagonalize(op: &Operator) -> Result<Spectrum> {
    let scale = op.max_abs().max(1.0);
    let herm = op.hermiticity_error();
    if herm > 1e-10 * scale {
        return Err(Error::NotHermitian(herm));
    }
    let sz = (op.dim() == DIM).then(total_sz);
    let conserves_sz = sz.as_ref().is_some_and(|s| op.commutator(s).max_abs() <= 1e-12 * scale);
    let mut levels: Vec<Eigenpair> = if conserves_sz {
        // sector-wise, so degenerate ±S_t^z partners stay unmixed
        sector_indices()
            .iter()
            .flat_map(|(stz, idx)| {
                let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| op.matrix()[(idx[r], idx[c])]);
                let (values, vectors) = eigen::eigh(&block);
                values.into_iter().enumerate().map(move |(k, energy)| {
                    let mut vector = DVector::from_element(DIM, C64::new(0.0, 0.0));
                    for (r, &i) in idx.iter().enumerate() {
                        vector[i] = vectors[(r, k)];
                    }
                    eigen::fix_phase(&mut vector);
                    Eigenpair { energy, vector, stz: *stz, label: None }
                })
            })
            .collect()
    } else {
        let (values, vectors) = eigen::eigh(op.matrix());
        values
            .into_iter()
            .enumerate()
            .map(|(k, energy)| {
                let mut vector = vectors.column(k).into_owned();
                eigen::fix_phase(&mut vector);
                let stz = sz.as_ref().map_or(HalfInt::from_twice(0), |s| HalfInt::round(s.expectation(&vector)));
                Eigenpair { energy, vector, stz, label: None }
            })
            .collect()
    };
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(b.stz.cmp(&a.stz)));
    Ok(Spectrum { levels })
}

/// Diagonalizes the Hamiltonian at `p`.
pub fn spectrum(p: &ModelParams) -> Result<Spectrum> {
    diagonalize(&build_hamiltonian(p)?)
}
