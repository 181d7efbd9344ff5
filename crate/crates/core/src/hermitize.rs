//! Equivalence between accepted Hamiltonians and Hermitian ones.
//!
//! An accepted `H` is diagonalized by its eigenvector matrix `S`; the diagonal
//! form has real entries and is therefore Hermitian, and the metric that
//! makes the eigenvectors orthonormal becomes the standard inner product in
//! that basis. So `H = S·D·S⁻¹` is just `D` written in the non-orthogonal
//! basis given by the columns of `S`.
//!
//! Two conventions for a basis change meet here. A Hermitian `H` becomes
//! `H′ = B⁻¹·H·B` with metric `B†·B` when states transform as `|ψ′⟩ = B⁻¹|ψ⟩`
//! ([`to_nonorthogonal`]). In the other direction, [`hermitize`] returns `b = S`
//! with `H = b·D·b⁻¹`, so the same pair is recovered by
//! `to_nonorthogonal(D, basis.inverted())`.

use serde::{Deserialize, Serialize};

use crate::acceptability::{
    accept, diagonalize, metric_from_inverse, AcceptConfig, MetricOperator,
};
use crate::error::{Error, Result};
use crate::linalg::{self, cond, eigenvalues, inverse, ComplexMatrix, C64};

/// Invertible change of basis with its inverse cached.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisChange {
    b: ComplexMatrix,
    b_inv: ComplexMatrix,
}

impl BasisChange {
    pub fn new(b: ComplexMatrix) -> Result<Self> {
        let b_inv = inverse(&b)?;
        Ok(Self { b, b_inv })
    }

    /// Construct from the inverse, which is how the alpha family is specified.
    pub fn from_inverse(b_inv: ComplexMatrix) -> Result<Self> {
        let b = inverse(&b_inv)?;
        Ok(Self { b, b_inv })
    }

    pub(crate) fn from_parts(b: ComplexMatrix, b_inv: ComplexMatrix) -> Self {
        Self { b, b_inv }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            b: ComplexMatrix::identity(dim),
            b_inv: ComplexMatrix::identity(dim),
        }
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn b_inv(&self) -> &ComplexMatrix {
        &self.b_inv
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    /// The change with `b` and `b⁻¹` swapped.
    pub fn inverted(&self) -> Self {
        Self {
            b: self.b_inv.clone(),
            b_inv: self.b.clone(),
        }
    }

    pub fn cond(&self) -> f64 {
        cond(&self.b)
    }

    /// `‖b·b⁻¹ − I‖_F`.
    pub fn inverse_residual(&self) -> f64 {
        linalg::identity_residual(&(&self.b * &self.b_inv))
    }

    /// `B†·B`, the inner product in the primed coordinates.
    pub fn metric(&self) -> Result<MetricOperator> {
        MetricOperator::new(&self.b.adjoint() * &self.b, 1e-10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Original → primed: `|ψ′⟩ = B⁻¹|ψ⟩`.
    Forward,
    /// Primed → original: `|ψ⟩ = B|ψ′⟩`.
    Backward,
}

/// Residual diagnostics for an [`EquivalencePair`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EquivalenceResiduals {
    /// `‖h_pt − b·h_herm·b⁻¹‖_F / ‖h_pt‖_F`.
    pub reconstruction: f64,
    /// `‖b·b⁻¹ − I‖_F`.
    pub inverse: f64,
    /// `‖b†·C·b − I‖_F`.
    pub orthonormality: f64,
    /// `‖h†·C − C·h‖_F / (‖C‖_F·‖h‖_F)`.
    pub pseudo_hermiticity: f64,
    pub basis_cond: f64,
}

/// `h_pt = b·h_herm·b⁻¹` with `h_herm` real diagonal and metric `(b⁻¹)†·b⁻¹`.
#[derive(Debug, Clone)]
pub struct EquivalencePair {
    pub h_pt: ComplexMatrix,
    pub h_herm: ComplexMatrix,
    pub basis: BasisChange,
    pub metric: MetricOperator,
}

impl EquivalencePair {
    pub fn spectrum(&self) -> Vec<f64> {
        self.h_herm.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn residuals(&self) -> EquivalenceResiduals {
        let rebuilt = &(self.basis.b() * &self.h_herm) * self.basis.b_inv();
        let scale = self.h_pt.frobenius_norm().max(f64::MIN_POSITIVE);
        EquivalenceResiduals {
            reconstruction: rebuilt.distance(&self.h_pt) / scale,
            inverse: self.basis.inverse_residual(),
            orthonormality: crate::acceptability::orthonormality_residual(
                self.basis.b(),
                &self.metric,
            ),
            pseudo_hermiticity: crate::acceptability::hermitian_wrt_residual(
                &self.h_pt,
                &self.metric,
            )
            .unwrap_or(f64::INFINITY),
            basis_cond: self.basis.cond(),
        }
    }
}

/// Factor an accepted Hamiltonian as a basis change of a real diagonal one.
///
/// Fails with the first rejection reason when `h` is not accepted.
pub fn hermitize(h: &ComplexMatrix) -> Result<EquivalencePair> {
    hermitize_with(h, &AcceptConfig::default())
}

pub fn hermitize_with(h: &ComplexMatrix, config: &AcceptConfig) -> Result<EquivalencePair> {
    let report = accept(h, config);
    if !report.is_accepted() {
        return Err(Error::InvalidArgument(format!(
            "Hamiltonian rejected: {}",
            report.reasons.join("; ")
        )));
    }
    let diag = diagonalize(h, config.spectrum_tol, config.cond_cap)?;
    let metric = metric_from_inverse(&diag.inverse)?;
    Ok(EquivalencePair {
        h_pt: h.clone(),
        h_herm: ComplexMatrix::from_real_diag(&diag.values),
        basis: BasisChange::from_parts(diag.vectors, diag.inverse),
        metric,
    })
}

/// Rewrite a Hermitian `h_herm` in the basis `b`: `H′ = b⁻¹·h_herm·b`, `C = b†·b`.
pub fn to_nonorthogonal(
    h_herm: &ComplexMatrix,
    b: &BasisChange,
) -> Result<(ComplexMatrix, MetricOperator)> {
    h_herm.check_same_dim(b.b())?;
    if !h_herm.is_hermitian(1e-12) {
        return Err(Error::InvalidArgument("h_herm is not Hermitian".into()));
    }
    let h_prime = &(b.b_inv() * h_herm) * b.b();
    Ok((h_prime, b.metric()?))
}

pub fn transform_state(v: &[C64], b: &BasisChange, direction: Direction) -> Result<Vec<C64>> {
    match direction {
        Direction::Forward => b.b_inv().mul_vec(v),
        Direction::Backward => b.b().mul_vec(v),
    }
}

/// `b⁻¹·o·b`, the same covariance rule as for the Hamiltonian.
pub fn transform_operator(o: &ComplexMatrix, b: &BasisChange) -> Result<ComplexMatrix> {
    o.check_same_dim(b.b())?;
    Ok(&(b.b_inv() * o) * b.b())
}

/// Spectra agree up to `tol·max(1, |λ|)`, matched greedily by nearest value.
pub fn spectra_equal(h1: &ComplexMatrix, h2: &ComplexMatrix, tol: f64) -> Result<bool> {
    h1.check_same_dim(h2)?;
    let a = eigenvalues(h1)?;
    let mut b = eigenvalues(h2)?;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("same dimension");
        if d > tol * x.norm().max(1.0) {
            return Ok(false);
        }
        b.swap_remove(k);
    }
    Ok(true)
}
