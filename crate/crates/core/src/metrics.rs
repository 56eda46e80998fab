//! End-pair entanglement metrics: partial trace to a two-qubit pair,
//! Wootters concurrence, and density-matrix validation.

use num_complex::Complex64;

use crate::linalg::{self, eigh, kron, pauli_y, CMatrix, CVector};
use crate::{Error, Result};

/// Validation tolerance on Hermiticity, trace and positivity.
pub const DM_TOL: f64 = 1e-9;

/// Reduced 4×4 state of a qubit pair; the first pair site is the most
/// significant qubit of the pair index.
#[derive(Debug, Clone)]
pub struct TwoQubitDensityMatrix {
    rho: CMatrix,
}

impl TwoQubitDensityMatrix {
    /// Wraps a raw 4×4 matrix after validating Hermiticity, unit trace and
    /// positivity at [`DM_TOL`].
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != 4 || rho.ncols() != 4 {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected 4x4, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let dm = Self { rho };
        let d = dm.diagnostics()?;
        d.check(DM_TOL)?;
        Ok(dm)
    }

    /// Wraps without validation; for diagnostics of deliberately bad states.
    pub fn new_unchecked(rho: CMatrix) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn diagnostics(&self) -> Result<DensityMatrixDiagnostics> {
        let hermiticity_residual = linalg::hermiticity_residual(&self.rho);
        let trace_deviation = (self.rho.trace() - Complex64::new(1.0, 0.0)).norm();
        let sym = (&self.rho + self.rho.adjoint()).scale(0.5);
        let d = eigh(&sym)?;
        let min_eigenvalue = d.eigenvalues[0];
        Ok(DensityMatrixDiagnostics {
            hermiticity_residual,
            trace_deviation,
            min_eigenvalue,
        })
    }
}

/// Numeric health report for a candidate density matrix.
#[derive(Debug, Clone, Copy)]
pub struct DensityMatrixDiagnostics {
    pub hermiticity_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
}

impl DensityMatrixDiagnostics {
    pub fn check(&self, tol: f64) -> Result<()> {
        if self.hermiticity_residual > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity residual {:.3e} exceeds {tol:.1e}",
                self.hermiticity_residual
            )));
        }
        if self.trace_deviation > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace deviates from 1 by {:.3e}",
                self.trace_deviation
            )));
        }
        if self.min_eigenvalue < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                self.min_eigenvalue
            )));
        }
        Ok(())
    }
}

/// Reduced density matrix of sites (a, b) of a pure chain state, tracing out
/// every other site. Requires 1 ≤ a < b ≤ N.
pub fn partial_trace_pair(
    psi: &CVector,
    site_a: usize,
    site_b: usize,
    n_sites: usize,
) -> Result<TwoQubitDensityMatrix> {
    if site_a == site_b || site_a == 0 || site_b == 0 || site_a > n_sites || site_b > n_sites {
        return Err(Error::SiteOutOfRange {
            site: site_a.max(site_b),
            n_sites,
        });
    }
    let (a, b) = if site_a < site_b { (site_a, site_b) } else { (site_b, site_a) };
    let dim = 1 << n_sites;
    assert_eq!(psi.len(), dim, "state dimension does not match n_sites");
    // bit positions counted from the most significant end
    let shift_a = n_sites - a;
    let shift_b = n_sites - b;
    let mut rho = CMatrix::zeros(4, 4);
    for i in 0..dim {
        let pa = (i >> shift_a) & 1;
        let pb = (i >> shift_b) & 1;
        let row = (pa << 1) | pb;
        for j in 0..dim {
            // environment bits must match
            let mask = !((1 << shift_a) | (1 << shift_b));
            if (i & mask) != (j & mask) {
                continue;
            }
            let qa = (j >> shift_a) & 1;
            let qb = (j >> shift_b) & 1;
            let col = (qa << 1) | qb;
            rho[(row, col)] += psi[i] * psi[j].conj();
        }
    }
    TwoQubitDensityMatrix::new(rho)
}

/// ρ̃ = (σ^y⊗σ^y) ρ* (σ^y⊗σ^y).
#[cfg(test)]
fn spin_flipped(rho: &CMatrix) -> CMatrix {
    let yy = kron(&pauli_y(), &pauli_y());
    let conj = rho.map(|z| z.conj());
    &yy * conj * &yy
}

/// Wootters concurrence C = max{0, λ₁−λ₂−λ₃−λ₄}, with λ_i the descending
/// square roots of the eigenvalues of ρρ̃.
///
/// With Y = σ^y⊗σ^y and √ρ the Hermitian square root, ρ* = (√ρ)*(√ρ)* gives
/// √ρ·ρ̃·√ρ = B·B† for B = √ρ·Y·(√ρ)*, so the λ_i are the singular values of
/// B and share the spectrum of ρρ̃. They are read off the Hermitian embedding
/// [[0, B], [B†, 0]], whose eigenvalues are ±σ_i(B). This route uses only
/// Hermitian eigensolvers — non-Hermitian solvers fail to converge on the
/// rank-deficient products that pure product states produce — and resolves
/// small λ_i at machine precision rather than at √ε from squared spectra.
/// Negativity of ρ beyond [`DM_TOL`] is rejected by the input validation;
/// smaller rounding-level negatives are clamped to zero.
pub fn concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    rho.diagnostics()?.check(DM_TOL)?;
    let d = eigh(rho.matrix())?;
    let sqrt_rho = {
        let lam = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            d.eigenvalues
                .iter()
                .map(|&x| Complex64::new(x.max(0.0).sqrt(), 0.0)),
        ));
        &d.eigenvectors * lam * d.eigenvectors.adjoint()
    };
    let yy = kron(&pauli_y(), &pauli_y());
    let b = &sqrt_rho * yy * sqrt_rho.map(|z| z.conj());
    let mut embed = CMatrix::zeros(8, 8);
    embed.view_mut((0, 4), (4, 4)).copy_from(&b);
    embed.view_mut((4, 0), (4, 4)).copy_from(&b.adjoint());
    let de = eigh(&embed)?;
    // ascending ± pairs: the top four entries are σ_i(B) in ascending order
    let lam = |k: usize| de.eigenvalues[k].max(0.0);
    Ok((lam(7) - lam(6) - lam(5) - lam(4)).max(0.0))
}

/// Concurrence of the end pair (1, N) of a pure chain state.
pub fn end_to_end_concurrence(psi: &CVector, n_sites: usize) -> Result<f64> {
    concurrence(&partial_trace_pair(psi, 1, n_sites, n_sites)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent cross-check: eigenvalues of the non-Hermitian product ρρ̃
    /// read off the diagonal of its complex Schur triangular factor. Only safe
    /// for full-rank inputs — the Schur iteration does not converge on the
    /// rank-deficient products that pure product states yield, which is why
    /// the primary route goes through Hermitian decompositions.
    fn concurrence_schur_route(rho: &CMatrix) -> f64 {
        let product = rho * spin_flipped(rho);
        let (_, t) = product.schur().unpack();
        let mut lambdas: Vec<f64> = (0..4).map(|i| t[(i, i)].re.max(0.0).sqrt()).collect();
        lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
    }

    fn bell_phi_plus() -> TwoQubitDensityMatrix {
        let mut psi = CVector::zeros(4);
        psi[0] = c(1.0 / 2f64.sqrt(), 0.0);
        psi[3] = c(1.0 / 2f64.sqrt(), 0.0);
        let rho = CMatrix::from_fn(4, 4, |i, j| psi[i] * psi[j].conj());
        TwoQubitDensityMatrix::new(rho).unwrap()
    }

    #[test]
    fn bell_state_concurrence_is_one() {
        assert_abs_diff_eq!(concurrence(&bell_phi_plus()).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn maximally_mixed_concurrence_is_zero() {
        let rho = TwoQubitDensityMatrix::new(linalg::identity(4).scale(0.25)).unwrap();
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_state_half() {
        // ρ = p|Ψ⁻⟩⟨Ψ⁻| + (1−p)I/4 has C = max(0, (3p−1)/2)
        let p = 0.5;
        let mut psi = CVector::zeros(4);
        psi[1] = c(1.0 / 2f64.sqrt(), 0.0);
        psi[2] = c(-1.0 / 2f64.sqrt(), 0.0);
        let proj = CMatrix::from_fn(4, 4, |i, j| psi[i] * psi[j].conj());
        let rho = proj.scale(p) + linalg::identity(4).scale((1.0 - p) / 4.0);
        let dm = TwoQubitDensityMatrix::new(rho).unwrap();
        assert_abs_diff_eq!(concurrence(&dm).unwrap(), 0.25, epsilon = 1e-9);
    }

    #[test]
    fn partial_trace_product_state() {
        // |RL⟩⊗|RR⟩, pair (1,4) → |RR⟩⟨RR| pure product
        let mut psi = CVector::zeros(16);
        psi[0b0100] = c(1.0, 0.0);
        let rho = partial_trace_pair(&psi, 1, 4, 4).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_bell_on_ends() {
        // (|R..R⟩+|L..L⟩)/√2 on sites (1,4) with |RR⟩ on (2,3)
        let mut psi = CVector::zeros(16);
        psi[0b0000] = c(1.0 / 2f64.sqrt(), 0.0);
        psi[0b1001] = c(1.0 / 2f64.sqrt(), 0.0);
        let rho = partial_trace_pair(&psi, 1, 4, 4).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence(&rho).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_sites() {
        let psi = CVector::zeros(16);
        assert!(partial_trace_pair(&psi, 2, 2, 4).is_err());
        assert!(partial_trace_pair(&psi, 0, 3, 4).is_err());
        assert!(partial_trace_pair(&psi, 1, 5, 4).is_err());
    }

    #[test]
    fn validation_flags_bad_trace() {
        let dm = TwoQubitDensityMatrix::new_unchecked(linalg::identity(4).scale(0.225));
        let d = dm.diagnostics().unwrap();
        assert_abs_diff_eq!(d.trace_deviation, 0.1, epsilon = 1e-12);
        assert!(d.check(1e-9).is_err());
        assert!(TwoQubitDensityMatrix::new(linalg::identity(4).scale(0.225)).is_err());
    }

    #[test]
    fn concurrence_matches_schur_route_random_states() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            // random mixed state from a random pure 4x4 ensemble
            let mut rho = CMatrix::zeros(4, 4);
            for _ in 0..3 {
                let mut v = CVector::from_fn(4, |_, _| {
                    c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                });
                v /= c(v.norm(), 0.0);
                let w: f64 = rng.gen();
                rho += CMatrix::from_fn(4, 4, |i, j| v[i] * v[j].conj()).scale(w);
            }
            let tr = rho.trace().re;
            rho.iter_mut().for_each(|z| *z /= tr);
            let dm = TwoQubitDensityMatrix::new(rho.clone()).unwrap();
            let c1 = concurrence(&dm).unwrap();
            let c2 = concurrence_schur_route(&rho);
            assert_abs_diff_eq!(c1, c2, epsilon = 1e-8);
        }
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let haar_u2 = |rng: &mut rand_chacha::ChaCha8Rng| {
            // QR of a random complex 2x2 gives a Haar-ish unitary; enough here
            let a = CMatrix::from_fn(2, 2, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let qr = a.qr();
            qr.q()
        };
        for _ in 0..25 {
            let mut v = CVector::from_fn(4, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            v /= c(v.norm(), 0.0);
            let rho = CMatrix::from_fn(4, 4, |i, j| v[i] * v[j].conj());
            let u = kron(&haar_u2(&mut rng), &haar_u2(&mut rng));
            let rho2 = &u * &rho * u.adjoint();
            let c1 = concurrence(&TwoQubitDensityMatrix::new(rho).unwrap()).unwrap();
            let c2 = concurrence(&TwoQubitDensityMatrix::new(rho2).unwrap()).unwrap();
            assert_abs_diff_eq!(c1, c2, epsilon = 1e-8);
        }
    }

    proptest! {
        #[test]
        fn superposition_concurrence_is_2ab(a in 0.05f64..0.95, phase in 0.0f64..6.28) {
            // α|RL⟩ + β|LR⟩ has C = 2|αβ|
            let alpha = a.sqrt();
            let beta = (1.0 - a).sqrt();
            let mut psi = CVector::zeros(4);
            psi[1] = c(alpha, 0.0);
            psi[2] = c(beta * phase.cos(), beta * phase.sin());
            let rho = CMatrix::from_fn(4, 4, |i, j| psi[i] * psi[j].conj());
            let cval = concurrence(&TwoQubitDensityMatrix::new(rho).unwrap()).unwrap();
            prop_assert!((cval - 2.0 * alpha * beta).abs() < 1e-9);
        }

        #[test]
        fn partial_trace_preserves_trace_and_purity_bound(seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut psi = CVector::from_fn(16, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            psi /= c(psi.norm(), 0.0);
            let rho = partial_trace_pair(&psi, 1, 4, 4).unwrap();
            let d = rho.diagnostics().unwrap();
            prop_assert!(d.trace_deviation < 1e-12);
            prop_assert!(d.hermiticity_residual < 1e-12);
            prop_assert!(rho.purity() <= 1.0 + 1e-9);
        }
    }
}
