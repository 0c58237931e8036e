//! Hermitian eigensolver used for both the Hamiltonian and partial transposes.
//!
//! Backed by faer's self-adjoint eigendecomposition, which keeps eigenvector
//! residuals at machine precision. Matrices whose imaginary parts vanish are
//! routed through the real solver.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use crate::spin::C64;

const REAL_TOL: f64 = 1e-14;

fn as_real(m: &DMatrix<C64>) -> Option<DMatrix<f64>> {
    let scale = m.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    if m.iter().all(|z| z.im.abs() <= REAL_TOL * scale) {
        Some(m.map(|z| z.re))
    } else {
        None
    }
}

/// Subnormal inputs stall the QR iteration, so they are flushed to zero.
fn flush(x: f64) -> f64 {
    if x.abs() < f64::MIN_POSITIVE {
        0.0
    } else {
        x
    }
}

fn to_faer_real(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| flush(m[(i, j)]))
}

fn to_faer_complex(m: &DMatrix<C64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(flush(m[(i, j)].re), flush(m[(i, j)].im)))
}

fn real_eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<C64>) {
    let evd = to_faer_real(m).self_adjoint_eigen(Side::Lower).expect("finite symmetric matrix");
    let (s, u) = (evd.S(), evd.U());
    let n = m.nrows();
    ((0..n).map(|k| s[k]).collect(), DMatrix::from_fn(n, n, |i, j| C64::new(u[(i, j)], 0.0)))
}

fn complex_eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let evd = to_faer_complex(m).self_adjoint_eigen(Side::Lower).expect("finite Hermitian matrix");
    let (s, u) = (evd.S(), evd.U());
    let n = m.nrows();
    ((0..n).map(|k| s[k].re).collect(), DMatrix::from_fn(n, n, |i, j| u[(i, j)]))
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// Eigenvalues ascending with matching eigenvector columns.
pub fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let (values, vectors) = match as_real(m) {
        Some(real) => real_eigh(&real),
        None => complex_eigh(m),
    };
    let order = sorted_order(&values);
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    (sorted_values, sorted_vectors)
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    match as_real(m) {
        Some(real) => eigvalsh_real(real),
        None => {
            let mut values: Vec<f64> = to_faer_complex(m)
                .self_adjoint_eigenvalues(Side::Lower)
                .expect("finite Hermitian matrix")
                .into_iter()
                .collect();
            values.sort_by(f64::total_cmp);
            values
        }
    }
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn eigvalsh_real(m: DMatrix<f64>) -> Vec<f64> {
    let mut values = to_faer_real(&m).self_adjoint_eigenvalues(Side::Lower).expect("finite symmetric matrix");
    values.sort_by(f64::total_cmp);
    values
}

/// Rotates `v` so its largest-magnitude component is real and positive.
pub fn fix_phase(v: &mut DVector<C64>) {
    let mut best = 0;
    for i in 1..v.len() {
        // strict comparison with slack keeps the choice stable among ties
        if v[i].norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}
