//! Physical acceptability of a (possibly non-Hermitian) Hamiltonian.
//!
//! The four criteria, checked in order:
//!
//! 1. real eigenvalues,
//! 2. diagonalizable (eigenvectors span the space),
//! 3. eigenvectors orthonormal in some inner product `⟨φ|C|ψ⟩`,
//! 4. probabilities conserved under time evolution.
//!
//! Criterion 3 is met constructively: with `S` the eigenvector matrix, the
//! metric `C = (S⁻¹)†·S⁻¹` is the unique inner product (up to rotations inside
//! degenerate eigenspaces) in which the columns of `S` are orthonormal. An
//! accepted Hamiltonian is then Hermitian and its propagator unitary with
//! respect to `C`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, cholesky, clustered_eigenbasis, cond, eigenvalues, inverse, propagator, ComplexMatrix,
    C64,
};
use crate::random;

pub const DEFAULT_SPECTRUM_TOL: f64 = 1e-9;
pub const DEFAULT_COND_CAP: f64 = 1e8;
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-8;
pub const DEFAULT_CONSERVATION_TOL: f64 = 1e-8;
/// Relative (to `‖h‖_F`) distance under which eigenvalues share an eigenspace.
pub const CLUSTER_RTOL: f64 = 1e-7;

/// Hermitian positive-definite matrix defining `⟨φ|C|ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricOperator {
    c: ComplexMatrix,
}

impl MetricOperator {
    /// Validates Hermiticity (relative `tol`) and positive definiteness.
    pub fn new(c: ComplexMatrix, tol: f64) -> Result<Self> {
        c.validate()?;
        let asym = c.distance(&c.adjoint());
        if asym > tol * c.frobenius_norm().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidMetric(format!(
                "not Hermitian (‖C − C†‖_F = {asym:e})"
            )));
        }
        let c = (&c + &c.adjoint()).scale_real(0.5);
        if cholesky(&c).is_none() {
            return Err(Error::InvalidMetric("not positive definite".into()));
        }
        Ok(Self { c })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            c: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// `φ†·C·ψ`.
    pub fn overlap(&self, phi: &[C64], psi: &[C64]) -> Result<C64> {
        let cpsi = self.c.mul_vec(psi)?;
        self.c.check_vec(phi)?;
        Ok(linalg::dot(phi, &cpsi))
    }

    /// `⟨ψ|C|ψ⟩`, real and positive for `ψ ≠ 0`.
    pub fn norm_sqr(&self, psi: &[C64]) -> Result<f64> {
        Ok(self.overlap(psi, psi)?.re)
    }

    /// Smallest positive scale `s` minimizing `‖s·self − other‖_F`, with the residual
    /// relative to `‖other‖_F`.
    pub fn scale_to(&self, other: &ComplexMatrix) -> (f64, f64) {
        let num: f64 = self
            .c
            .entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        let den: f64 = self.c.entries().iter().map(|a| a.norm_sqr()).sum();
        let s = num / den;
        let resid = self.c.scale_real(s).distance(other) / other.frobenius_norm();
        (s, resid)
    }
}

/// An accepted Hamiltonian's eigen-data in canonical form.
///
/// `vectors` columns are unit-norm, orthonormal inside each degenerate
/// eigenspace, and phase-fixed so that the first component of largest modulus
/// is real and positive. `values` are the real parts of the (sorted) spectrum.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub inverse: ComplexMatrix,
    pub clusters: Vec<Vec<usize>>,
    pub cond: f64,
}

fn fix_phase(col: &mut [C64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in col.iter().enumerate() {
        // first component of largest modulus, ignoring rounding-level ties
        if z.norm() > best_abs * (1.0 + 1e-12) {
            best = i;
            best_abs = z.norm();
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let phase = col[best].conj() / best_abs;
    for z in col.iter_mut() {
        *z *= phase;
    }
    col[best] = C64::new(col[best].norm(), 0.0);
}

/// Diagonalize `h`, requiring a real spectrum and `cond(S) ≤ cond_cap`.
pub fn diagonalize(h: &ComplexMatrix, spectrum_tol: f64, cond_cap: f64) -> Result<Diagonalization> {
    let (real, max_imag) = check_real_spectrum(h, spectrum_tol)?;
    if !real {
        return Err(Error::ComplexSpectrum { max_imag });
    }
    let basis = clustered_eigenbasis(h, CLUSTER_RTOL * h.frobenius_norm())?;
    if basis.defective {
        return Err(Error::Defective {
            cond: f64::INFINITY,
        });
    }
    let mut s = basis.vectors;
    for j in 0..s.dim() {
        let mut col = s.column(j);
        fix_phase(&mut col);
        s.set_column(j, &col);
    }
    let c = cond(&s);
    if !(c <= cond_cap) {
        return Err(Error::Defective { cond: c });
    }
    let s_inv = inverse(&s).map_err(|_| Error::Defective { cond: c })?;
    Ok(Diagonalization {
        values: basis.values.iter().map(|z| z.re).collect(),
        vectors: s,
        inverse: s_inv,
        clusters: basis.clusters,
        cond: c,
    })
}

/// Criterion 1: `max |Im λ| ≤ tol·max(1, ‖h‖_F)`. Returns the verdict and `max |Im λ|`.
pub fn check_real_spectrum(h: &ComplexMatrix, tol: f64) -> Result<(bool, f64)> {
    let values = eigenvalues(h)?;
    let max_imag = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok((max_imag <= tol * h.frobenius_norm().max(1.0), max_imag))
}

/// Criterion 2: eigenvector matrix full rank with `cond(S) ≤ cond_cap`.
pub fn check_diagonalizable(h: &ComplexMatrix, cond_cap: f64) -> Result<(bool, f64)> {
    let basis = clustered_eigenbasis(h, CLUSTER_RTOL * h.frobenius_norm())?;
    if basis.defective {
        return Ok((false, f64::INFINITY));
    }
    let c = cond(&basis.vectors);
    Ok((c <= cond_cap, c))
}

/// Metric `C = (S⁻¹)†·S⁻¹` making the eigenvectors of `h` orthonormal.
pub fn build_metric(h: &ComplexMatrix) -> Result<MetricOperator> {
    let diag = diagonalize(h, DEFAULT_SPECTRUM_TOL, DEFAULT_COND_CAP)?;
    metric_from_inverse(&diag.inverse)
}

/// `(S⁻¹)†·S⁻¹` for a given inverse eigenvector matrix.
pub fn metric_from_inverse(s_inv: &ComplexMatrix) -> Result<MetricOperator> {
    let c = &s_inv.adjoint() * s_inv;
    MetricOperator::new(c, 1e-10)
}

/// `‖S†·C·S − I‖_F`: how far the columns of `s` are from orthonormal under `c`.
pub fn orthonormality_residual(s: &ComplexMatrix, c: &MetricOperator) -> f64 {
    linalg::identity_residual(&(&(&s.adjoint() * c.matrix()) * s))
}

/// Hermiticity in the physical inner product: `‖o†·C − C·o‖_F ≤ tol·‖C‖_F·‖o‖_F`.
pub fn is_hermitian_wrt(o: &ComplexMatrix, c: &MetricOperator, tol: f64) -> bool {
    hermitian_wrt_residual(o, c).is_ok_and(|r| r <= tol)
}

/// Relative residual `‖o†·C − C·o‖_F / (‖C‖_F·‖o‖_F)`.
pub fn hermitian_wrt_residual(o: &ComplexMatrix, c: &MetricOperator) -> Result<f64> {
    o.check_same_dim(c.matrix())?;
    let lhs = &o.adjoint() * c.matrix();
    let rhs = c.matrix() * o;
    let scale = c.matrix().frobenius_norm() * o.frobenius_norm();
    let r = lhs.distance(&rhs);
    Ok(if scale == 0.0 { r } else { r / scale })
}

/// Unitarity in the physical inner product: `‖u†·C·u − C‖_F ≤ tol·‖C‖_F`.
pub fn is_unitary_wrt(u: &ComplexMatrix, c: &MetricOperator, tol: f64) -> bool {
    unitary_wrt_residual(u, c).is_ok_and(|r| r <= tol)
}

pub fn unitary_wrt_residual(u: &ComplexMatrix, c: &MetricOperator) -> Result<f64> {
    u.check_same_dim(c.matrix())?;
    let lhs = &(&u.adjoint() * c.matrix()) * u;
    Ok(lhs.distance(c.matrix()) / c.matrix().frobenius_norm())
}

/// Largest relative drift `|⟨ψ(t)|C|ψ(t)⟩ − ⟨ψ₀|C|ψ₀⟩| / ⟨ψ₀|C|ψ₀⟩` over the
/// sampled states and times, with `ψ(t) = exp(−i·h·t/ħ)·ψ₀`.
pub fn max_norm_drift(
    h: &ComplexMatrix,
    c: &MetricOperator,
    t_grid: &[f64],
    states: &[Vec<C64>],
    hbar: f64,
) -> Result<f64> {
    h.check_same_dim(c.matrix())?;
    let mut worst: f64 = 0.0;
    let initial: Vec<f64> = states
        .iter()
        .map(|s| c.norm_sqr(s))
        .collect::<Result<_>>()?;
    for &t in t_grid {
        let u = propagator(h, t, hbar)?;
        for (psi0, &n0) in states.iter().zip(&initial) {
            let psi = u.mul_vec(psi0)?;
            let nt = c.norm_sqr(&psi)?;
            worst = worst.max((nt - n0).abs() / n0);
        }
    }
    Ok(worst)
}

/// Criterion 4 on a sample of states and times.
pub fn check_probability_conservation(
    h: &ComplexMatrix,
    c: &MetricOperator,
    t_grid: &[f64],
    states: &[Vec<C64>],
    tol: f64,
) -> Result<bool> {
    Ok(max_norm_drift(h, c, t_grid, states, 1.0)? <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
}

/// Tolerances and sampling for [`accept`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcceptConfig {
    pub spectrum_tol: f64,
    pub cond_cap: f64,
    pub hermitian_tol: f64,
    pub conservation_tol: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub n_states: usize,
    pub seed: u64,
    pub hbar: f64,
}

impl Default for AcceptConfig {
    fn default() -> Self {
        Self {
            spectrum_tol: DEFAULT_SPECTRUM_TOL,
            cond_cap: DEFAULT_COND_CAP,
            hermitian_tol: DEFAULT_HERMITIAN_TOL,
            conservation_tol: DEFAULT_CONSERVATION_TOL,
            t_max: 10.0,
            t_points: 41,
            n_states: 16,
            seed: 0,
            hbar: 1.0,
        }
    }
}

impl AcceptConfig {
    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.t_points.max(2);
        (0..n)
            .map(|k| self.t_max * k as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcceptabilityReport {
    pub real_spectrum: bool,
    pub max_imag: f64,
    pub diagonalizable: bool,
    pub eigvec_cond: f64,
    pub metric: Option<ComplexMatrix>,
    pub eigenvectors_orthonormal: bool,
    pub orthonormality_residual: Option<f64>,
    pub pseudo_hermitian: bool,
    pub hermitian_residual: Option<f64>,
    pub unitary_evolution: bool,
    pub probability_conserving: bool,
    pub max_norm_drift: Option<f64>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

impl AcceptabilityReport {
    fn rejected() -> Self {
        Self {
            real_spectrum: false,
            max_imag: f64::NAN,
            diagonalizable: false,
            eigvec_cond: f64::INFINITY,
            metric: None,
            eigenvectors_orthonormal: false,
            orthonormality_residual: None,
            pseudo_hermitian: false,
            hermitian_residual: None,
            unitary_evolution: false,
            probability_conserving: false,
            max_norm_drift: None,
            verdict: Verdict::Rejected,
            reasons: Vec::new(),
        }
    }

    pub fn is_accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    pub fn metric_operator(&self) -> Option<MetricOperator> {
        self.metric.clone().map(|c| MetricOperator { c })
    }

    fn reject(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Rejected;
        self.reasons.push(reason.into());
        self
    }
}

pub const REASON_COMPLEX: &str = "complex spectrum";
pub const REASON_DEFECTIVE: &str = "not diagonalizable";
pub const REASON_NO_METRIC: &str = "no metric orthonormalizes the eigenvectors";
pub const REASON_NOT_HERMITIAN: &str = "not Hermitian with respect to the metric";
pub const REASON_NOT_CONSERVING: &str = "probabilities not conserved";

/// Run the four criteria in order, stopping at the first failure.
pub fn accept(h: &ComplexMatrix, config: &AcceptConfig) -> AcceptabilityReport {
    let mut report = AcceptabilityReport::rejected();

    // 1. real spectrum
    match check_real_spectrum(h, config.spectrum_tol) {
        Ok((real, max_imag)) => {
            report.real_spectrum = real;
            report.max_imag = max_imag;
            if !real {
                return report.reject(REASON_COMPLEX);
            }
        }
        Err(e) => return report.reject(format!("eigendecomposition failed: {e}")),
    }

    // 2. diagonalizable
    let diag = match diagonalize(h, config.spectrum_tol, config.cond_cap) {
        Ok(d) => d,
        Err(Error::Defective { cond }) => {
            report.eigvec_cond = cond;
            return report.reject(REASON_DEFECTIVE);
        }
        Err(e) => return report.reject(format!("eigendecomposition failed: {e}")),
    };
    report.diagonalizable = true;
    report.eigvec_cond = diag.cond;

    // 3. orthonormal eigenvectors under a constructed metric
    let metric = match metric_from_inverse(&diag.inverse) {
        Ok(m) => m,
        Err(e) => return report.reject(format!("{REASON_NO_METRIC}: {e}")),
    };
    let ortho = orthonormality_residual(&diag.vectors, &metric);
    report.orthonormality_residual = Some(ortho);
    report.metric = Some(metric.matrix().clone());
    report.eigenvectors_orthonormal = ortho <= config.hermitian_tol * (h.dim() as f64).sqrt();
    if !report.eigenvectors_orthonormal {
        return report.reject(REASON_NO_METRIC);
    }
    let herm = hermitian_wrt_residual(h, &metric).unwrap_or(f64::INFINITY);
    report.hermitian_residual = Some(herm);
    report.pseudo_hermitian = herm <= config.hermitian_tol;
    if !report.pseudo_hermitian {
        return report.reject(REASON_NOT_HERMITIAN);
    }

    // 4. probability conservation
    let mut rng = random::rng(config.seed);
    let states: Vec<Vec<C64>> = (0..config.n_states)
        .map(|_| random::complex_vector(&mut rng, h.dim()))
        .collect();
    let t_grid = config.t_grid();
    match max_norm_drift(h, &metric, &t_grid, &states, config.hbar) {
        Ok(drift) => {
            report.max_norm_drift = Some(drift);
            report.probability_conserving = drift <= config.conservation_tol;
        }
        Err(e) => return report.reject(format!("time evolution failed: {e}")),
    }
    let t_last = *t_grid.last().expect("at least two grid points");
    report.unitary_evolution = propagator(h, t_last, config.hbar)
        .map(|u| is_unitary_wrt(&u, &metric, config.conservation_tol))
        .unwrap_or(false);
    if !(report.probability_conserving && report.unitary_evolution) {
        return report.reject(REASON_NOT_CONSERVING);
    }
    report.verdict = Verdict::Accepted;
    report
}
