//! Partial transposition, bipartite negativity and global tripartite
//! negativity (gTN).
//!
//! For a state commuting with `S_t^z`, the transpose over one site conserves
//! the twisted charge `Q = S_t^z - 2 m_site`, so its eigenvalues are computed
//! block by block and tagged with `Q`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::spin::{BasisState, HalfInt, Operator, Site, SiteDims, C64, DIM};
use crate::thermal::DensityMatrix;
use crate::{Error, Result};

/// Eigenvalues below `-NEGATIVE_TOL` count as negative.
pub const NEGATIVE_TOL: f64 = 1e-12;

/// Transposes the indices of `site` only.
pub fn partial_transpose_matrix(m: &DMatrix<C64>, site: Site) -> Result<DMatrix<C64>> {
    let dims = SiteDims::trimer();
    if m.nrows() != DIM || m.ncols() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, got: m.nrows() });
    }
    let s = site.index();
    let mut out = DMatrix::from_element(DIM, DIM, C64::new(0.0, 0.0));
    for row in 0..DIM {
        let r = dims.split(row);
        for col in 0..DIM {
            let c = dims.split(col);
            let (mut r2, mut c2) = (r.clone(), c.clone());
            r2[s] = c[s];
            c2[s] = r[s];
            out[(row, col)] = m[(dims.join(&r2), dims.join(&c2))];
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, site: Site) -> Result<Operator> {
    Ok(Operator::new(partial_transpose_matrix(&rho.matrix, site)?))
}

fn twisted_charge(i: usize, site: Site) -> HalfInt {
    let b = BasisState::from_index(i);
    let m_site2 = match site {
        Site::Mu => b.m_mu.twice(),
        Site::S1 => 2 * b.m1,
        Site::S2 => 2 * b.m2,
    };
    HalfInt::from_twice(b.total_sz().twice() - 2 * m_site2)
}

type Blocks = Vec<(HalfInt, Vec<usize>)>;

fn charge_blocks(site: Site) -> &'static [(HalfInt, Vec<usize>)] {
    static BLOCKS: OnceLock<[Blocks; 3]> = OnceLock::new();
    let all = BLOCKS.get_or_init(|| {
        Site::ALL.map(|s| {
            let mut map = std::collections::BTreeMap::<HalfInt, Vec<usize>>::new();
            for i in 0..DIM {
                map.entry(twisted_charge(i, s)).or_default().push(i);
            }
            map.into_iter().collect()
        })
    });
    &all[site.index()]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtEigenvalue {
    pub value: f64,
    /// Twisted charge of the block, when the block structure holds.
    pub block: Option<HalfInt>,
}

/// All eigenvalues of the partial transpose, ascending.
pub fn pt_eigenvalues(rho: &DensityMatrix, site: Site) -> Result<Vec<PtEigenvalue>> {
    let pt = partial_transpose_matrix(&rho.matrix, site)?;
    let blocks = charge_blocks(site);
    let mut leak = 0.0f64;
    for (qa, ia) in blocks {
        for (qb, ib) in blocks {
            if qa != qb {
                for &i in ia {
                    for &j in ib {
                        leak = leak.max(pt[(i, j)].norm());
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(DIM);
    if leak <= 1e-12 {
        for (q, idx) in blocks {
            let n = idx.len();
            let vals = if pt.iter().all(|z| z.im == 0.0) {
                eigen::eigvalsh_real(DMatrix::from_fn(n, n, |r, c| pt[(idx[r], idx[c])].re))
            } else {
                eigen::eigvalsh(&DMatrix::from_fn(n, n, |r, c| pt[(idx[r], idx[c])]))
            };
            out.extend(vals.into_iter().map(|value| PtEigenvalue { value, block: Some(*q) }));
        }
    } else {
        out.extend(eigen::eigvalsh(&pt).into_iter().map(|value| PtEigenvalue { value, block: None }));
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionNegativity {
    pub site: Site,
    pub value: f64,
    pub negative_eigenvalues: Vec<PtEigenvalue>,
}

/// `N_{site|rest} = Σ_{λ<0} |λ|` over the partial transpose on `site`.
pub fn negativity(rho: &DensityMatrix, site: Site) -> Result<PartitionNegativity> {
    let negative: Vec<PtEigenvalue> =
        pt_eigenvalues(rho, site)?.into_iter().filter(|e| e.value < -NEGATIVE_TOL).collect();
    let value = negative.iter().fold(0.0, |acc, e| acc - e.value);
    Ok(PartitionNegativity { site, value, negative_eigenvalues: negative })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    /// `N_{μ|S1S2}`
    pub n_mu: f64,
    /// `N_{S1|μS2}`
    pub n_s1: f64,
    /// `N_{S2|μS1}`, equal to `n_s1` by the `S1 ↔ S2` symmetry.
    pub n_s2: f64,
    pub gtn: f64,
    pub partitions: [PartitionNegativity; 3],
}

impl NegativityReport {
    pub fn symmetry_defect(&self) -> f64 {
        (self.n_s1 - self.n_s2).abs()
    }

    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Gtn => self.gtn,
            Quantity::NMu => self.n_mu,
            Quantity::NS1 => self.n_s1,
        }
    }
}

/// Scalar read out of a [`NegativityReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    #[default]
    Gtn,
    NMu,
    NS1,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Gtn => "gtn",
            Quantity::NMu => "n_mu",
            Quantity::NS1 => "n_s1",
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gtn" => Ok(Quantity::Gtn),
            "n_mu" | "nmu" => Ok(Quantity::NMu),
            "n_s1" | "ns1" => Ok(Quantity::NS1),
            _ => Err(Error::Config(format!("unknown quantity `{s}`"))),
        }
    }
}

/// Bipartite negativities of all three single-site cuts and their geometric
/// mean.
pub fn gtn(rho: &DensityMatrix) -> Result<NegativityReport> {
    let [a, b, c] = [Site::Mu, Site::S1, Site::S2].map(|s| negativity(rho, s));
    let partitions = [a?, b?, c?];
    let (n_mu, n_s1, n_s2) = (partitions[0].value, partitions[1].value, partitions[2].value);
    Ok(NegativityReport { n_mu, n_s1, n_s2, gtn: (n_mu * n_s1 * n_s2).cbrt(), partitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::ket;
    use approx::assert_abs_diff_eq;

    #[test]
    fn involution() {
        let v = ket(&[(0.6, 1, 1, -1), (0.8, -1, 0, 1)]);
        let rho = DensityMatrix::pure(&v);
        for s in Site::ALL {
            let once = partial_transpose_matrix(&rho.matrix, s).unwrap();
            let twice = partial_transpose_matrix(&once, s).unwrap();
            assert_eq!(twice, rho.matrix);
            assert_abs_diff_eq!(once.trace().re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let rho = DensityMatrix::pure(&ket(&[(1.0, 1, 0, -1)]));
        let r = gtn(&rho).unwrap();
        assert_eq!((r.n_mu, r.n_s1, r.n_s2, r.gtn), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        let r = gtn(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(r.gtn, 0.0);
        assert!(r.partitions.iter().all(|p| p.negative_eigenvalues.is_empty()));
    }

    #[test]
    fn singlet_between_mu_and_s1() {
        // (|+,1⟩ - |-,0⟩)/√2 ⊗ |S2 = 1⟩ : 2×3 cut with Schmidt weights ½, ½
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&ket(&[(s, 1, 1, 1), (-s, -1, 0, 1)]));
        let r = gtn(&rho).unwrap();
        assert_abs_diff_eq!(r.n_mu, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.n_s1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.n_s2, 0.0, epsilon = 1e-12);
        assert_eq!(r.gtn, 0.0);
    }

    #[test]
    fn block_path_matches_dense_path() {
        let v = ket(&[(0.3, 1, 1, -1), (0.5, 1, -1, 1), (-0.4, 1, 0, 0), (0.7, -1, 1, 0)]);
        let rho = DensityMatrix::pure(&v);
        for s in Site::ALL {
            let blocked: Vec<f64> = pt_eigenvalues(&rho, s).unwrap().iter().map(|e| e.value).collect();
            let dense = eigen::eigvalsh(&partial_transpose_matrix(&rho.matrix, s).unwrap());
            for (a, b) in blocked.iter().zip(&dense) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        let m = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
        assert!(partial_transpose_matrix(&m, Site::Mu).is_err());
    }
}
