//! Spin operators, the `2 ⊗ 3 ⊗ 3` product basis and tensor embeddings.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// Total dimension of the trimer Hilbert space.
pub const DIM: usize = 18;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Nearest half-integer to `x`.
    pub fn round(x: f64) -> Self {
        HalfInt((2.0 * x).round() as i32)
    }

    pub const fn neg(self) -> Self {
        HalfInt(-self.0)
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Spin magnitudes realised on the trimer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Half,
    One,
}

impl Spin {
    pub fn dim(self) -> usize {
        match self {
            Spin::Half => 2,
            Spin::One => 3,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Spin::Half => 0.5,
            Spin::One => 1.0,
        }
    }
}

impl TryFrom<f64> for Spin {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        if s == 0.5 {
            Ok(Spin::Half)
        } else if s == 1.0 {
            Ok(Spin::One)
        } else {
            Err(Error::UnsupportedSpin(s))
        }
    }
}

/// One of the three sites, in basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    #[serde(rename = "mu")]
    Mu,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "s2")]
    S2,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::Mu, Site::S1, Site::S2];

    pub fn index(self) -> usize {
        match self {
            Site::Mu => 0,
            Site::S1 => 1,
            Site::S2 => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Site> {
        Site::ALL.get(i).copied()
    }

    pub fn spin(self) -> Spin {
        match self {
            Site::Mu => Spin::Half,
            Site::S1 | Site::S2 => Spin::One,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Site::Mu => "mu",
            Site::S1 => "S1",
            Site::S2 => "S2",
        })
    }
}

/// Ordered local dimensions of a product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteDims {
    dims: Vec<usize>,
}

impl SiteDims {
    /// `(μ, S1, S2) = (2, 3, 3)`.
    pub fn trimer() -> Self {
        SiteDims { dims: vec![2, 3, 3] }
    }

    pub fn new(dims: Vec<usize>) -> Self {
        SiteDims { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Splits a flat index into per-site indices.
    pub fn split(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn join(&self, local: &[usize]) -> usize {
        local.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

/// Product basis state `|m_μ⟩ ⊗ |m_1, m_2⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub m_mu: HalfInt,
    pub m1: i32,
    pub m2: i32,
}

impl BasisState {
    pub fn new(m_mu: HalfInt, m1: i32, m2: i32) -> Self {
        BasisState { m_mu, m1, m2 }
    }

    /// Row-major over `(m_μ, m_1, m_2)`, highest `m` first on each site.
    pub fn index(&self) -> usize {
        debug_assert!(self.m_mu.twice().abs() == 1 && self.m1.abs() <= 1 && self.m2.abs() <= 1);
        let i_mu = ((1 - self.m_mu.twice()) / 2) as usize;
        let i1 = (1 - self.m1) as usize;
        let i2 = (1 - self.m2) as usize;
        i_mu * 9 + i1 * 3 + i2
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < DIM, "basis index {index} out of range");
        let i_mu = index / 9;
        let i1 = (index / 3) % 3;
        let i2 = index % 3;
        BasisState {
            m_mu: HalfInt::from_twice(1 - 2 * i_mu as i32),
            m1: 1 - i1 as i32,
            m2: 1 - i2 as i32,
        }
    }

    pub fn total_sz(&self) -> HalfInt {
        HalfInt::from_twice(self.m_mu.twice() + 2 * (self.m1 + self.m2))
    }

    /// All quantum numbers reversed.
    pub fn flipped(&self) -> Self {
        BasisState::new(self.m_mu.neg(), -self.m1, -self.m2)
    }
}

/// Builds an 18-vector from `(amplitude, m_μ twice, m_1, m_2)` terms.
pub(crate) fn ket(terms: &[(f64, i32, i32, i32)]) -> DVector<C64> {
    let mut v = DVector::from_element(DIM, ZERO);
    for &(c, mu2, m1, m2) in terms {
        v[BasisState::new(HalfInt::from_twice(mu2), m1, m2).index()] += C64::new(c, 0.0);
    }
    v
}

/// Dense complex square operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    pub fn new(matrix: DMatrix<C64>) -> Self {
        assert!(matrix.is_square(), "operator matrix must be square");
        Operator(matrix)
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Self {
        Operator::new(matrix.map(|x| C64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Operator(DMatrix::from_element(dim, dim, ZERO))
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        Operator(DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(entries[i], 0.0) } else { ZERO }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Operator {
        Operator(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Operator {
        Operator(self.0.map(|z| z * s))
    }

    /// `max |M - M†|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    /// `⟨v|O|v⟩`, real part.
    pub fn expectation(&self, v: &DVector<C64>) -> f64 {
        v.dotc(&(&self.0 * v)).re
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub x: Operator,
    pub y: Operator,
    pub z: Operator,
}

impl SpinMatrices {
    pub fn components(&self) -> [&Operator; 3] {
        [&self.x, &self.y, &self.z]
    }
}

/// Standard spin matrices for `s ∈ {1/2, 1}` in the `m = s, …, -s` basis.
pub fn spin_matrices(s: f64) -> Result<SpinMatrices> {
    let spin = Spin::try_from(s)?;
    let n = spin.dim();
    let m: Vec<f64> = (0..n).map(|k| s - k as f64).collect();
    // S+ |m⟩ = sqrt(s(s+1) - m(m+1)) |m+1⟩
    let mut plus = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        plus[(k - 1, k)] = (s * (s + 1.0) - m[k] * (m[k] + 1.0)).sqrt();
    }
    let minus = plus.transpose();
    let x = (&plus + &minus).map(|v| C64::new(v / 2.0, 0.0));
    let y = (&plus - &minus).map(|v| C64::new(0.0, -v / 2.0));
    Ok(SpinMatrices { x: Operator(x), y: Operator(y), z: Operator::diag(&m) })
}

/// Kronecker product, `a`'s index slowest.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator(a.0.kronecker(&b.0))
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` acting on `site`.
pub fn embed(op: &Operator, site: usize, dims: &SiteDims) -> Result<Operator> {
    let &expected = dims.dims().get(site).ok_or(Error::DimensionMismatch {
        expected: dims.dims().len(),
        got: site,
    })?;
    if op.dim() != expected {
        return Err(Error::DimensionMismatch { expected, got: op.dim() });
    }
    let mut out = Operator::identity(1);
    for (k, &d) in dims.dims().iter().enumerate() {
        let factor = if k == site { op.clone() } else { Operator::identity(d) };
        out = kron(&out, &factor);
    }
    Ok(out)
}

/// Spin components of one trimer site embedded in the 18-dimensional space.
pub fn site_spin(site: Site) -> SpinMatrices {
    let local = spin_matrices(site.spin().value()).expect("trimer spins are supported");
    let dims = SiteDims::trimer();
    let e = |op: &Operator| embed(op, site.index(), &dims).expect("site dimension matches");
    SpinMatrices { x: e(&local.x), y: e(&local.y), z: e(&local.z) }
}

/// Reverses every magnetic quantum number of a trimer vector.
pub fn flip_vector(v: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::from_element(DIM, ZERO);
    for i in 0..DIM {
        out[BasisState::from_index(i).flipped().index()] = v[i];
    }
    out
}
