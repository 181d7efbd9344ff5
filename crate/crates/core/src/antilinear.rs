//! Anti-linear operators `v ↦ M·conj(v)` and their eigenvectors shared with a
//! linear Hamiltonian.
//!
//! For an anti-linear `A` commuting with a linear `H`, any common eigenvector
//! `|E, a⟩` gives `E·a = conj(E)·a`, so the eigenvalue is real whenever `a ≠ 0`.
//! Unlike the linear case, commuting does not force the eigenvectors to be
//! shared, and [`shared_spectrum`] reports exactly which ones are.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, clustered_eigenbasis, cond, dot, norm, ComplexMatrix, C64};

/// Default tolerance for parallelism and commutation tests.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Anti-linear operator acting as `v ↦ m·conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    m: ComplexMatrix,
}

impl AntilinearOperator {
    /// Wraps the linear part. Singular `m` is rejected: an operator with a zero
    /// eigenvalue cannot carry the reality argument.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.validate()?;
        let c = cond(&m);
        if !c.is_finite() {
            return Err(Error::Singular { cond: c });
        }
        Ok(Self { m })
    }

    /// Pure complex conjugation on `C^dim`.
    pub fn conjugation(dim: usize) -> Self {
        Self {
            m: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.m.mul_vec(&linalg::conj_vec(v))
    }

    /// `A∘A` is linear with matrix `m·conj(m)`.
    pub fn square(&self) -> ComplexMatrix {
        &self.m * &self.m.conj()
    }

    pub fn involution_residual(&self) -> f64 {
        linalg::identity_residual(&self.square())
    }

    /// `‖m·conj(m) − I‖_F ≤ tol`.
    pub fn is_involution(&self, tol: f64) -> bool {
        self.involution_residual() <= tol
    }
}

pub fn apply(a: &AntilinearOperator, v: &[C64]) -> Result<Vec<C64>> {
    a.apply(v)
}

pub fn is_involution(a: &AntilinearOperator, tol: f64) -> bool {
    a.is_involution(tol)
}

/// Relative commutator residual `‖h·m − m·conj(h)‖_F / ‖h‖_F`.
///
/// `H∘A` has matrix `h·m` and `A∘H` has matrix `m·conj(h)`, both acting on
/// `conj(v)`, so the operators commute iff these agree.
pub fn commutation_residual(h: &ComplexMatrix, a: &AntilinearOperator) -> Result<f64> {
    h.check_same_dim(&a.m)?;
    let lhs = h * &a.m;
    let rhs = &a.m * &h.conj();
    let scale = h.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs.distance(&rhs) / scale)
}

pub fn commutes_with(h: &ComplexMatrix, a: &AntilinearOperator, tol: f64) -> bool {
    commutation_residual(h, a).is_ok_and(|r| r <= tol)
}

/// Squared-cosine parallelism test `|⟨v, w⟩|² ≥ (1 − tol)·‖v‖²·‖w‖²`.
pub fn is_parallel(v: &[C64], w: &[C64], tol: f64) -> bool {
    let nv = norm(v);
    let nw = norm(w);
    if nv == 0.0 || nw == 0.0 {
        return false;
    }
    dot(v, w).norm_sqr() >= (1.0 - tol) * nv * nv * nw * nw
}

/// One eigenvector of `h` and how the anti-linear symmetry acts on it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharedRecord {
    pub eigenvalue: C64,
    pub is_shared: bool,
    /// `⟨v, A v⟩ / ‖v‖²`; phase-gauge dependent, reported as computed.
    pub antilinear_eigenvalue: Option<C64>,
    /// Component of `A v` outside the eigenspace of `v`, relative to `‖A v‖`.
    pub residual: f64,
    /// Size of the eigenspace this vector belongs to.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharedSpectrumReport {
    pub records: Vec<SharedRecord>,
    pub unbroken: bool,
}

impl SharedSpectrumReport {
    pub fn shared_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_shared).count()
    }

    /// Largest `|Im λ|` among shared records.
    pub fn max_shared_imag(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.is_shared)
            .map(|r| r.eigenvalue.im.abs())
            .fold(0.0, f64::max)
    }
}

/// Which eigenvectors of `h` are also eigenvectors of `a`.
///
/// Degenerate eigenspaces are tested as a whole: a vector counts as shared
/// when `a` maps its eigenspace into itself. Errors if `h` and `a` do not
/// commute to `tol`, or if `h` is defective.
pub fn shared_spectrum(
    h: &ComplexMatrix,
    a: &AntilinearOperator,
    tol: f64,
) -> Result<SharedSpectrumReport> {
    let residual = commutation_residual(h, a)?;
    if residual > tol {
        return Err(Error::NotCommuting { residual });
    }
    let cluster_tol = 1e-7 * h.frobenius_norm();
    let basis = clustered_eigenbasis(h, cluster_tol)?;
    if basis.defective {
        return Err(Error::Defective {
            cond: f64::INFINITY,
        });
    }
    let mut records: Vec<Option<SharedRecord>> = vec![None; h.dim()];
    for cluster in &basis.clusters {
        let span: Vec<Vec<C64>> = cluster.iter().map(|&i| basis.vectors.column(i)).collect();
        for (&idx, v) in cluster.iter().zip(&span) {
            let av = a.apply(v)?;
            let anorm = norm(&av);
            // distance of A v from the (orthonormal) eigenspace
            let mut out = av.clone();
            for u in &span {
                let p = dot(u, &av);
                for (o, ui) in out.iter_mut().zip(u) {
                    *o -= p * ui;
                }
            }
            let rel = if anorm == 0.0 {
                1.0
            } else {
                norm(&out) / anorm
            };
            let is_shared = if cluster.len() == 1 {
                is_parallel(v, &av, tol)
            } else {
                rel * rel <= tol
            };
            let antilinear_eigenvalue =
                (is_shared && is_parallel(v, &av, tol)).then(|| dot(v, &av) / dot(v, v).re);
            records[idx] = Some(SharedRecord {
                eigenvalue: basis.values[idx],
                is_shared,
                antilinear_eigenvalue,
                residual: rel,
                multiplicity: cluster.len(),
            });
        }
    }
    let records: Vec<SharedRecord> = records
        .into_iter()
        .map(|r| r.expect("every index clustered"))
        .collect();
    let unbroken = records.iter().all(|r| r.is_shared);
    Ok(SharedSpectrumReport { records, unbroken })
}

/// The 3×3 example: `H = diag(1, i, −i)` with `A(a, b, c) = (a*, c*, b*)`.
pub fn three_level_example() -> (ComplexMatrix, AntilinearOperator) {
    let h = ComplexMatrix::from_diag(&[linalg::ONE, linalg::I, -linalg::I]);
    let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]])
        .expect("static shape");
    (h, AntilinearOperator { m })
}
