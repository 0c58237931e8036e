//! Ground-state and Gibbs density matrices.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::hamiltonian::Spectrum;
use crate::spin::{C64, DIM, ZERO};
use crate::{Error, Result};

/// Which state represents a (possibly degenerate) phase eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateMode {
    /// The single labeled eigenvector as a pure state.
    #[default]
    Pure,
    /// Equal mixture of the level and its `-S_t^z` partner, i.e. the zero-field
    /// ground state of a two-fold degenerate phase.
    DegenerateMixture,
}

impl std::str::FromStr for StateMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(StateMode::Pure),
            "mixture" | "degenerate-mixture" => Ok(StateMode::DegenerateMixture),
            _ => Err(Error::Config(format!("unknown state mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub matrix: DMatrix<C64>,
    /// `k_B T / J`; zero for ground states and pure states.
    pub temperature: f64,
}

impl DensityMatrix {
    pub fn pure(v: &DVector<C64>) -> Self {
        let n = v.norm_squared();
        DensityMatrix { matrix: v * v.adjoint() / C64::from(n), temperature: 0.0 }
    }

    /// `Σ_k w_k |v_k⟩⟨v_k|`; weights are used as given.
    pub fn mixture<'a>(terms: impl IntoIterator<Item = (f64, &'a DVector<C64>)>) -> Self {
        let mut m = DMatrix::from_element(DIM, DIM, ZERO);
        for (w, v) in terms {
            if w != 0.0 {
                m += v * v.adjoint() * C64::from(w);
            }
        }
        DensityMatrix { matrix: m, temperature: 0.0 }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix { matrix: DMatrix::identity(DIM, DIM) / C64::from(DIM as f64), temperature: f64::INFINITY }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigen::eigvalsh(&self.matrix)
    }

    /// Max entrywise `|ρ - σ|`.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Hermitian, unit trace, positive semidefinite.
    pub fn is_valid(&self, tol: f64) -> bool {
        let n = self.dim();
        let herm = (0..n).all(|i| (i..n).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol));
        herm && (self.trace() - 1.0).abs() <= tol && self.eigenvalues()[0] >= -1e-10
    }
}

/// Boltzmann weights shifted by the lowest energy.
pub fn boltzmann_weights(energies: &[f64], kt: f64) -> Result<Vec<f64>> {
    if kt.is_nan() || kt <= 0.0 {
        return Err(Error::NonPositiveTemperature(kt));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = energies.iter().map(|e| (-(e - e_min) / kt).exp()).collect();
    let z: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / z).collect())
}

/// Gibbs state `Σ_i e^{-ε_i/kT} |ψ_i⟩⟨ψ_i| / Z`.
pub fn thermal_density_matrix(s: &Spectrum, kt: f64) -> Result<DensityMatrix> {
    if s.len() != DIM {
        return Err(Error::IncompleteSpectrum(s.len()));
    }
    let w = boltzmann_weights(&s.energies(), kt)?;
    let mut rho = DensityMatrix::mixture(w.iter().zip(&s.levels).map(|(&w, l)| (w, &l.vector)));
    rho.temperature = kt;
    Ok(rho)
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub rho: DensityMatrix,
    /// Spectrum indices of the degenerate ground levels.
    pub members: Vec<usize>,
    /// The degeneracy is not just a `±S_t^z` pair: a level crossing.
    pub crossing: bool,
}

/// Equal-weight mixture over all levels within `degeneracy_tol` of the
/// lowest energy.
pub fn ground_state_density_matrix(s: &Spectrum, degeneracy_tol: f64) -> Result<GroundState> {
    if s.len() != DIM {
        return Err(Error::IncompleteSpectrum(s.len()));
    }
    let e0 = s.ground_energy();
    let members: Vec<usize> = (0..s.len()).filter(|&k| s.levels[k].energy - e0 <= degeneracy_tol).collect();
    let w = 1.0 / members.len() as f64;
    let rho = DensityMatrix::mixture(members.iter().map(|&k| (w, &s.levels[k].vector)));
    let stz: Vec<i32> = members.iter().map(|&k| s.levels[k].stz.twice()).collect();
    let crossing = match stz.as_slice() {
        [_] => false,
        [a, b] => *a != -*b || *a == 0,
        _ => true,
    };
    Ok(GroundState { rho, members, crossing })
}
