//! Time evolution `ψ(t) = exp(−i·h·t/ħ)·ψ₀` and physical overlaps, plus the
//! spin-1/2 brachistochrone study and the shifted-oscillator truncation.

mod brach;
mod oscillator;

pub use brach::{
    alpha_basis, brach_sweep, brach_sweep_parallel, hermitian_bound, original_frame_passage,
    primed_frame, spin_half, spin_half_config, tau_formula, BrachRecord, MAX_BASIS_COND,
    SINGULARITY_FLOOR,
};
pub use oscillator::{oscillator_spectrum, shifted_oscillator, OscillatorSpectrum, MIN_NMAX};

use serde::{Deserialize, Serialize};

use crate::acceptability::MetricOperator;
use crate::error::{Error, Result};
use crate::linalg::{propagator, ComplexMatrix, C64};

/// Grid maxima below `1 − COARSE_THRESHOLD` are not refined.
pub const COARSE_THRESHOLD: f64 = 1e-4;
pub const DEFAULT_GRID_POINTS: usize = 1024;
pub const DEFAULT_ROOT_POLISH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub hbar: f64,
    pub t_max: f64,
    pub grid_points: usize,
    pub root_polish_tol: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            t_max: 10.0,
            grid_points: DEFAULT_GRID_POINTS,
            root_polish_tol: DEFAULT_ROOT_POLISH_TOL,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.grid_points < 16 {
            return Err(Error::InvalidArgument(format!(
                "grid_points must be at least 16, got {}",
                self.grid_points
            )));
        }
        if !(self.root_polish_tol > 0.0 && self.root_polish_tol < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "root_polish_tol must lie in (0, 1), got {}",
                self.root_polish_tol
            )));
        }
        Ok(())
    }

    /// Time grid `t_k = k·t_max/n`, `k = 0..=n`.
    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        (0..=n).map(|k| self.t_max * k as f64 / n as f64).collect()
    }
}

pub fn evolve(h: &ComplexMatrix, psi0: &[C64], t: f64, hbar: f64) -> Result<Vec<C64>> {
    h.check_vec(psi0)?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be finite, got {t}")));
    }
    if t == 0.0 {
        return Ok(psi0.to_vec());
    }
    propagator(h, t, hbar)?.mul_vec(psi0)
}

/// `φ†·C·ψ`.
pub fn physical_overlap(c: &MetricOperator, phi: &[C64], psi: &[C64]) -> Result<C64> {
    c.overlap(phi, psi)
}

/// Phase-free fidelity `|⟨target|C|ψ⟩|² / (⟨target|C|target⟩·⟨ψ|C|ψ⟩)`.
pub fn state_fidelity(c: &MetricOperator, target: &[C64], psi: &[C64]) -> Result<f64> {
    let a = c.overlap(target, psi)?;
    let tt = c.norm_sqr(target)?;
    let nn = c.norm_sqr(psi)?;
    if !(tt > 0.0) || !(nn > 0.0) {
        return Err(Error::InvalidArgument("fidelity of a zero state".into()));
    }
    Ok(a.norm_sqr() / (tt * nn))
}

/// `F(t)` and `dF/dt` for `ψ(t) = exp(−i·h·t/ħ)·ψ₀`.
struct FidelityCurve<'a> {
    h: &'a ComplexMatrix,
    c: &'a MetricOperator,
    psi0: &'a [C64],
    ctarget: Vec<C64>,
    tt: f64,
    hbar: f64,
}

impl<'a> FidelityCurve<'a> {
    fn new(
        h: &'a ComplexMatrix,
        c: &'a MetricOperator,
        psi0: &'a [C64],
        target: &'a [C64],
        hbar: f64,
    ) -> Result<Self> {
        h.check_same_dim(c.matrix())?;
        h.check_vec(psi0)?;
        h.check_vec(target)?;
        let tt = c.norm_sqr(target)?;
        if !(tt > 0.0) {
            return Err(Error::InvalidArgument("target state is zero".into()));
        }
        if !(c.norm_sqr(psi0)? > 0.0) {
            return Err(Error::InvalidArgument("initial state is zero".into()));
        }
        // C is Hermitian, so ⟨target|C|ψ⟩ = (C·target)†·ψ.
        let ctarget = c.matrix().mul_vec(target)?;
        Ok(Self {
            h,
            c,
            psi0,
            ctarget,
            tt,
            hbar,
        })
    }

    fn state(&self, t: f64) -> Result<Vec<C64>> {
        evolve(self.h, self.psi0, t, self.hbar)
    }

    fn value_of(&self, psi: &[C64]) -> Result<f64> {
        let a = crate::linalg::dot(&self.ctarget, psi);
        let n = self.c.norm_sqr(psi)?;
        Ok(a.norm_sqr() / (self.tt * n))
    }

    fn value(&self, t: f64) -> Result<f64> {
        self.value_of(&self.state(t)?)
    }

    fn derivative(&self, t: f64) -> Result<f64> {
        let psi = self.state(t)?;
        let dpsi: Vec<C64> = self
            .h
            .mul_vec(&psi)?
            .into_iter()
            .map(|z| z * C64::new(0.0, -1.0 / self.hbar))
            .collect();
        let a = crate::linalg::dot(&self.ctarget, &psi);
        let da = crate::linalg::dot(&self.ctarget, &dpsi);
        let cpsi = self.c.matrix().mul_vec(&psi)?;
        let n = crate::linalg::dot(&psi, &cpsi).re;
        let dn = 2.0 * crate::linalg::dot(&dpsi, &cpsi).re;
        Ok((2.0 * (a.conj() * da).re * n - a.norm_sqr() * dn) / (self.tt * n * n))
    }
}

/// `F(t)` on each time of `t_grid`.
pub fn fidelity_curve(
    h: &ComplexMatrix,
    c: &MetricOperator,
    psi0: &[C64],
    target: &[C64],
    t_grid: &[f64],
    hbar: f64,
) -> Result<Vec<f64>> {
    let curve = FidelityCurve::new(h, c, psi0, target, hbar)?;
    t_grid.iter().map(|&t| curve.value(t)).collect()
}

/// Smallest `t ∈ (0, t_max]` at which `ψ(t)` reaches `target` up to phase.
///
/// Returns 0 if `ψ₀` already matches. Otherwise scans `F` on the grid with a
/// stepped propagator, golden-section searches each grid maximum above
/// `1 − COARSE_THRESHOLD` in order, then bisects on the sign of `dF/dt` to
/// pin the maximum. The first maximum with `F ≥ 1 − root_polish_tol` wins.
pub fn first_passage_time(
    h: &ComplexMatrix,
    c: &MetricOperator,
    psi0: &[C64],
    target: &[C64],
    config: &EvolutionConfig,
) -> Result<f64> {
    config.validate()?;
    let curve = FidelityCurve::new(h, c, psi0, target, config.hbar)?;
    let threshold = 1.0 - config.root_polish_tol;
    let f0 = curve.value_of(psi0)?;
    if f0 >= threshold {
        return Ok(0.0);
    }

    let n = config.grid_points;
    let dt = config.t_max / n as f64;
    let step = propagator(h, dt, config.hbar)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(f0);
    let mut psi = psi0.to_vec();
    for _ in 0..n {
        psi = step.mul_vec(&psi)?;
        values.push(curve.value_of(&psi)?);
    }

    let mut best: f64 = f0;
    for k in 1..=n {
        let left = values[k - 1];
        let right = if k < n {
            values[k + 1]
        } else {
            f64::NEG_INFINITY
        };
        if values[k] < left || values[k] < right || values[k] < 1.0 - COARSE_THRESHOLD {
            best = best.max(values[k]);
            continue;
        }
        let lo = (k - 1) as f64 * dt;
        let hi = if k < n {
            (k + 1) as f64 * dt
        } else {
            config.t_max
        };
        let t = refine_maximum(&curve, lo, hi, config)?;
        let f = curve.value(t)?;
        best = best.max(f);
        if f >= threshold {
            return Ok(t);
        }
    }
    Err(Error::NotFound {
        t_max: config.t_max,
        best_fidelity: best,
    })
}

fn refine_maximum(
    curve: &FidelityCurve<'_>,
    lo: f64,
    hi: f64,
    config: &EvolutionConfig,
) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = curve.value(x1)?;
    let mut f2 = curve.value(x2)?;
    // Function values flatten near the maximum, so golden section only narrows
    // the bracket; the derivative sign does the rest.
    while b - a > 1e-4 * (hi - lo) {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = curve.value(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = curve.value(x1)?;
        }
    }
    let mut t_best = if f1 >= f2 { x1 } else { x2 };

    let (mut a, mut b) = (a.max(lo), b.min(hi));
    let (da, db) = (curve.derivative(a)?, curve.derivative(b)?);
    if da > 0.0 && db < 0.0 {
        let width = 1e-3 * config.root_polish_tol;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if b - a <= width * m.max(1.0) || m <= a || m >= b {
                break;
            }
            if curve.derivative(m)? > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        t_best = 0.5 * (a + b);
    } else if db >= 0.0 && (hi - b).abs() == 0.0 {
        t_best = b;
    }
    Ok(t_best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, sigma_x, ONE, ZERO};
    use crate::random;
    use std::f64::consts::PI;

    #[test]
    fn evolve_at_zero_is_identity() {
        let mut rng = random::rng(30);
        let h = random::complex_matrix(&mut rng, 4);
        let v = random::complex_vector(&mut rng, 4);
        assert_eq!(evolve(&h, &v, 0.0, 1.0).unwrap(), v);
        assert!(evolve(&h, &v[..2], 1.0, 1.0).is_err());
        assert!(evolve(&h, &v, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn spin_flip_closed_form() {
        let eps = 0.8;
        let h = sigma_x().scale_real(eps);
        let psi = evolve(&h, &[ONE, ZERO], PI / (2.0 * eps), 1.0).unwrap();
        assert!(psi[0].norm() < 1e-14);
        assert!((psi[1].norm() - 1.0).abs() < 1e-14);
        for t in [0.1, 1.0, 3.3] {
            let psi = evolve(&h, &[ONE, ZERO], t, 1.0).unwrap();
            assert!((psi[0] - C64::new((eps * t).cos(), 0.0)).norm() < 1e-14);
            assert!((psi[1] - C64::new(0.0, -(eps * t).sin())).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_evolution_preserves_norm() {
        let mut rng = random::rng(31);
        let (h, _) = random::hermitian(&mut rng, 5);
        let v = random::complex_vector(&mut rng, 5);
        for t in [0.3, 2.0, 9.0] {
            let w = evolve(&h, &v, t, 1.0).unwrap();
            assert!((linalg::norm(&w) - linalg::norm(&v)).abs() < 1e-10 * linalg::norm(&v));
        }
    }

    #[test]
    fn overlap_properties() {
        let mut rng = random::rng(32);
        let phi = random::complex_vector(&mut rng, 3);
        let psi = random::complex_vector(&mut rng, 3);
        let id = MetricOperator::identity(3);
        assert_eq!(
            physical_overlap(&id, &phi, &psi).unwrap(),
            linalg::dot(&phi, &psi)
        );
        let g = random::well_conditioned(&mut rng, 3, 10.0);
        let c = MetricOperator::new(&g.adjoint() * &g, 1e-12).unwrap();
        let a = physical_overlap(&c, &phi, &psi).unwrap();
        let b = physical_overlap(&c, &psi, &phi).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
        let n = physical_overlap(&c, &psi, &psi).unwrap();
        assert!(n.re > 0.0 && n.im.abs() < 1e-12 * n.re);
    }

    #[test]
    fn first_passage_spin_flip() {
        for (eps, hbar) in [(1.0, 1.0), (0.37, 1.0), (2.0, 0.5)] {
            let h = sigma_x().scale_real(eps);
            let config = EvolutionConfig {
                hbar,
                t_max: PI * hbar / eps,
                ..Default::default()
            };
            let tau = first_passage_time(
                &h,
                &MetricOperator::identity(2),
                &[ONE, ZERO],
                &[ZERO, ONE],
                &config,
            )
            .unwrap();
            assert!((tau - PI * hbar / (2.0 * eps)).abs() < 1e-9, "{tau}");
        }
    }

    #[test]
    fn first_passage_boundaries() {
        let h = sigma_x();
        let c = MetricOperator::identity(2);
        let config = EvolutionConfig::default();
        assert_eq!(
            first_passage_time(&h, &c, &[ONE, ZERO], &[ONE, ZERO], &config).unwrap(),
            0.0
        );
        let short = EvolutionConfig {
            t_max: 1.0,
            ..config
        };
        match first_passage_time(&h, &c, &[ONE, ZERO], &[ZERO, ONE], &short) {
            Err(Error::NotFound { best_fidelity, .. }) => assert!(best_fidelity < 1.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(first_passage_time(&h, &c, &[ONE, ZERO], &[ZERO, ZERO], &config).is_err());
        let coarse = EvolutionConfig {
            grid_points: 8,
            ..config
        };
        assert!(matches!(
            first_passage_time(&h, &c, &[ONE, ZERO], &[ZERO, ONE], &coarse),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn unreachable_target() {
        // Diagonal evolution only changes phases.
        let h = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let r = first_passage_time(
            &h,
            &MetricOperator::identity(2),
            &[s, s],
            &[ONE, ZERO],
            &EvolutionConfig::default(),
        );
        assert!(matches!(r, Err(Error::NotFound { .. })));
    }

    #[test]
    fn fidelity_derivative_matches_finite_difference() {
        let mut rng = random::rng(33);
        let (h, _, g) = random::acceptable_hamiltonian(&mut rng, 3, 10.0);
        let gi = linalg::inverse(&g).unwrap();
        let c = MetricOperator::new(&gi.adjoint() * &gi, 1e-10).unwrap();
        let psi0 = random::complex_vector(&mut rng, 3);
        let target = random::complex_vector(&mut rng, 3);
        let curve = FidelityCurve::new(&h, &c, &psi0, &target, 1.3).unwrap();
        for t in [0.2, 1.1, 4.0] {
            let d = 1e-5;
            let fd = (curve.value(t + d).unwrap() - curve.value(t - d).unwrap()) / (2.0 * d);
            assert!((fd - curve.derivative(t).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn config_validation() {
        assert!(EvolutionConfig::default().validate().is_ok());
        assert!(EvolutionConfig {
            hbar: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(EvolutionConfig {
            t_max: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(EvolutionConfig {
            root_polish_tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        let grid = EvolutionConfig {
            grid_points: 16,
            t_max: 2.0,
            ..Default::default()
        }
        .t_grid();
        assert_eq!(grid.len(), 17);
        assert_eq!(grid[16], 2.0);
    }
}
