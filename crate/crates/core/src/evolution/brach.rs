//! Spin-1/2 in the non-orthogonal basis `B⁻¹ = [[cos α, −i sin α], [−i sin α, −cos α]]`.
//!
//! In the primed coordinates `H′ = B⁻¹·εσx·B` carries the basis states
//! `e₁′ → e₂′` in time `τ(α) = (ħ/ε)·arctan(1/tan 2α)`, which falls below the
//! Hermitian bound `πħ/ω` for every `α > 0`. The same two states, written in
//! the original basis and evolved by `εσx`, take exactly the same time: the
//! speed-up lives in the coordinates, not in the physics.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::{first_passage_time, EvolutionConfig};
use crate::acceptability::MetricOperator;
use crate::error::{Error, Result};
use crate::hermitize::{to_nonorthogonal, BasisChange};
use crate::linalg::{basis_vector, eigenvalues, sigma_x, ComplexMatrix, C64, I};

/// Smallest admissible `|cos 2α|`.
pub const SINGULARITY_FLOOR: f64 = 1e-6;
/// Sweep points with a larger `cond(B)` are refused.
pub const MAX_BASIS_COND: f64 = 1e8;

/// One point of a brachistochrone sweep. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrachRecord {
    pub alpha: f64,
    pub tau_numeric: f64,
    pub tau_formula: f64,
    pub hermitian_bound: f64,
    pub gap: f64,
    pub basis_cond: f64,
}

/// `ε·σx`.
pub fn spin_half(epsilon: f64) -> Result<ComplexMatrix> {
    check_positive("epsilon", epsilon)?;
    Ok(sigma_x().scale_real(epsilon))
}

pub fn alpha_basis(alpha: f64) -> Result<BasisChange> {
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    let (c2, s2) = ((2.0 * alpha).cos(), (2.0 * alpha).sin());
    if c2.abs() < SINGULARITY_FLOOR {
        // Singular values of B⁻¹ are √(1 ± sin 2α).
        let cond = ((1.0 + s2.abs()) / (1.0 - s2.abs()).max(f64::MIN_POSITIVE)).sqrt();
        return Err(Error::Singular { cond });
    }
    let (c, s) = (alpha.cos(), alpha.sin());
    let b_inv = ComplexMatrix::from_rows(&[
        vec![C64::new(c, 0.0), -I * s],
        vec![-I * s, C64::new(-c, 0.0)],
    ])?;
    BasisChange::from_inverse(b_inv)
}

/// `(ħ/ε)·arctan(1/tan 2α)` on `[0, π/4)`; at `α = 0` this is `πħ/(2ε)`.
pub fn tau_formula(epsilon: f64, alpha: f64, hbar: f64) -> Result<f64> {
    check_positive("epsilon", epsilon)?;
    check_positive("hbar", hbar)?;
    if !(0.0..FRAC_PI_4).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in [0, π/4), got {alpha}"
        )));
    }
    let two = 2.0 * alpha;
    Ok(hbar / epsilon * two.cos().atan2(two.sin()))
}

/// `πħ/ω`.
pub fn hermitian_bound(omega: f64, hbar: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("hbar", hbar)?;
    Ok(PI * hbar / omega)
}

/// Config covering one period `πħ/ε` of the spin-1/2 fidelity.
pub fn spin_half_config(epsilon: f64, hbar: f64) -> EvolutionConfig {
    EvolutionConfig {
        hbar,
        t_max: PI * hbar / epsilon,
        ..EvolutionConfig::default()
    }
}

/// `(H′, B†B, B)` for the given `α`.
pub fn primed_frame(
    epsilon: f64,
    alpha: f64,
) -> Result<(ComplexMatrix, MetricOperator, BasisChange)> {
    let basis = alpha_basis(alpha)?;
    let (h, c) = to_nonorthogonal(&spin_half(epsilon)?, &basis)?;
    Ok((h, c, basis))
}

fn record(epsilon: f64, alpha: f64, config: &EvolutionConfig) -> Result<BrachRecord> {
    if !(0.0..FRAC_PI_4).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in [0, π/4), got {alpha}"
        )));
    }
    let (h, c, basis) = primed_frame(epsilon, alpha)?;
    let basis_cond = basis.cond();
    if !(basis_cond <= MAX_BASIS_COND) {
        return Err(Error::Singular { cond: basis_cond });
    }
    let spectrum = eigenvalues(&h)?;
    let hi = spectrum
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = spectrum.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let gap = hi - lo;
    let tau_numeric = first_passage_time(&h, &c, &basis_vector(2, 0), &basis_vector(2, 1), config)?;
    Ok(BrachRecord {
        alpha,
        tau_numeric,
        tau_formula: tau_formula(epsilon, alpha, config.hbar)?,
        hermitian_bound: hermitian_bound(gap, config.hbar)?,
        gap,
        basis_cond,
    })
}

/// One record per `α`, in input order.
pub fn brach_sweep(
    epsilon: f64,
    alpha_grid: &[f64],
    config: &EvolutionConfig,
) -> Result<Vec<BrachRecord>> {
    check_positive("epsilon", epsilon)?;
    config.validate()?;
    alpha_grid
        .iter()
        .map(|&a| record(epsilon, a, config))
        .collect()
}

/// [`brach_sweep`] spread over `jobs` threads; the output is identical.
pub fn brach_sweep_parallel(
    epsilon: f64,
    alpha_grid: &[f64],
    config: &EvolutionConfig,
    jobs: usize,
) -> Result<Vec<BrachRecord>> {
    let jobs = jobs.max(1).min(alpha_grid.len().max(1));
    if jobs == 1 {
        return brach_sweep(epsilon, alpha_grid, config);
    }
    check_positive("epsilon", epsilon)?;
    config.validate()?;
    let chunk = alpha_grid.len().div_ceil(jobs);
    let parts: Vec<Result<Vec<BrachRecord>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = alpha_grid
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|&a| record(epsilon, a, config)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(alpha_grid.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// First passage between `B·e₁′` and `B·e₂′` under `εσx` with the ordinary inner product.
pub fn original_frame_passage(epsilon: f64, alpha: f64, config: &EvolutionConfig) -> Result<f64> {
    let basis = alpha_basis(alpha)?;
    let h = spin_half(epsilon)?;
    let e1 = basis.b().column(0);
    let e2 = basis.b().column(1);
    first_passage_time(&h, &MetricOperator::identity(2), &e1, &e2, config)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {x}"
        )))
    }
}
