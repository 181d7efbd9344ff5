//! Parity-time symmetric Hamiltonians with time reversal fixed to complex
//! conjugation, so that `[H, PT] = 0` becomes `H = P·conj(H)·P`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{identity_residual, sigma_x, ComplexMatrix, C64, I, ONE, ZERO};
use crate::random;

pub const DEFAULT_TOL: f64 = 1e-9;

/// A parity operator: any matrix with `P² = 1`. It need not be Hermitian or
/// diagonalizable.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityOperator {
    p: ComplexMatrix,
}

impl ParityOperator {
    pub fn new(p: ComplexMatrix, tol: f64) -> Result<Self> {
        p.validate()?;
        let residual = parity_residual(&p);
        if residual > tol {
            return Err(Error::InvalidParity { residual });
        }
        Ok(Self { p })
    }

    pub fn sigma_x() -> Self {
        Self { p: sigma_x() }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            p: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }
}

/// `‖p·p − I‖_F`.
pub fn parity_residual(p: &ComplexMatrix) -> f64 {
    identity_residual(&(p * p))
}

pub fn validate_parity(p: &ComplexMatrix, tol: f64) -> bool {
    parity_residual(p) <= tol
}

/// Relative residual `‖h − p·conj(h)·p‖_F / ‖h‖_F` (absolute when `h = 0`).
pub fn pt_residual(h: &ComplexMatrix, p: &ParityOperator) -> Result<f64> {
    h.check_same_dim(&p.p)?;
    let image = &(&p.p * &h.conj()) * &p.p;
    let r = h.distance(&image);
    let scale = h.frobenius_norm();
    Ok(if scale == 0.0 { r } else { r / scale })
}

pub fn satisfies_pt(h: &ComplexMatrix, p: &ParityOperator, tol: f64) -> bool {
    pt_residual(h, p).is_ok_and(|r| r <= tol)
}

/// The general `2×2` Hamiltonian symmetric under `P = σx`:
/// `[[d, o], [conj(o), conj(d)]]`.
///
/// With `P = σx` the condition `H = σx·conj(H)·σx` forces `H₂₂ = conj(H₁₁)` and
/// `H₂₁ = conj(H₁₂)`, leaving two free complex parameters.
pub fn general_2x2(diag: C64, off: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![diag, off], vec![off.conj(), diag.conj()]])
        .expect("finite inputs give a finite matrix")
}

/// Random Hamiltonian satisfying the condition for a real involutory `p`.
///
/// Symmetrizes a Gaussian matrix: `h = ½(x + p·conj(x)·p)`.
pub fn random_pt(p: &ParityOperator, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = random::rng(seed);
    random_pt_with(p, &mut rng)
}

pub fn random_pt_with(p: &ParityOperator, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if !p.p.is_real() {
        return Err(Error::InvalidArgument(
            "random_pt requires a parity operator with real entries".into(),
        ));
    }
    let x = random::complex_matrix(rng, p.dim());
    let image = &(&p.p * &x.conj()) * &p.p;
    Ok((&x + &image).scale_real(0.5))
}

/// The non-diagonalizable pair `P = [[1, 1], [0, −1]]`, `H = [[1, 5i], [0, 1]]`.
pub fn jordan_counterexample() -> (ParityOperator, ComplexMatrix) {
    let p = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]).expect("static shape");
    let h = ComplexMatrix::from_rows(&[vec![ONE, 5.0 * I], vec![ZERO, ONE]]).expect("static shape");
    (ParityOperator { p }, h)
}
