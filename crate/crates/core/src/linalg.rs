//! Dense complex linear algebra: Pauli matrices, tensor products, single-site
//! embedding, and Hermitian eigendecomposition.
//!
//! Everything is dense; chains are capped at [`MAX_SITES`] sites (4096-dim),
//! which is far beyond the four-qubit target.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest supported chain length for dense storage.
pub const MAX_SITES: usize = 12;

/// Hermiticity tolerance used before eigendecomposition.
pub const HERMITICITY_TOL: f64 = 1e-10;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// σ^x in the |R⟩, |L⟩ basis (|R⟩ first).
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    ])
}

/// σ^y in the |R⟩, |L⟩ basis.
pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    ])
}

/// σ^z with σ^z|R⟩ = +|R⟩.
pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ])
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Embeds a single-site operator on site `site` of an `n_sites` chain:
/// I ⊗ … ⊗ op ⊗ … ⊗ I, with site 1 the most significant tensor factor.
pub fn embed_site(op: &CMatrix, site: usize, n_sites: usize) -> Result<CMatrix> {
    if site == 0 || site > n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let left = identity(1 << (site - 1));
    let right = identity(1 << (n_sites - site));
    Ok(kron(&kron(&left, op), &right))
}

/// Max-entry magnitude of M − M†.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut res: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            res = res.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    res
}

/// Eigendecomposition of a Hermitian matrix: real ascending eigenvalues in
/// rad/ns and column-aligned orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// The input is symmetrized as (H + H†)/2 before decomposition; inputs whose
/// Hermiticity residual exceeds [`HERMITICITY_TOL`] relative to the largest
/// entry are rejected.
pub fn eigh(h: &CMatrix) -> Result<EigenDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare { rows: h.nrows(), cols: h.ncols() });
    }
    let scale = h.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let residual = hermiticity_residual(h);
    if residual > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian { residual, tol: HERMITICITY_TOL * scale });
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let se = sym.symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| se.eigenvalues[k]));
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        eigenvectors.set_column(col, &se.eigenvectors.column(k));
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// |⟨a|b⟩|² with both vectors assumed unit-norm.
pub fn overlap_sq(a: &CVector, b: &CVector) -> f64 {
    a.dotc(b).norm_sqr()
}
