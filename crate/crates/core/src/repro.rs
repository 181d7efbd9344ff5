//! Self-checking reproductions of the worked examples.
//!
//! Each reproduction recomputes an example from scratch, compares it against
//! the published closed form or qualitative claim, and returns the computed
//! objects alongside pass/fail lines.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::acceptability::{
    self, accept, build_metric, is_hermitian_wrt, is_unitary_wrt, AcceptConfig, MetricOperator,
    REASON_COMPLEX, REASON_DEFECTIVE,
};
use crate::antilinear::{self, commutation_residual, shared_spectrum, three_level_example};
use crate::error::Result;
use crate::evolution::{
    self, alpha_basis, brach_sweep, hermitian_bound, physical_overlap, primed_frame, spin_half,
    spin_half_config, tau_formula,
};
use crate::hermitize::{hermitize, spectra_equal, transform_state, Direction};
use crate::linalg::{
    self, eig, inverse, propagator, rank, sigma_x, ComplexMatrix, C64, I, ONE, ZERO,
};
use crate::ptsym::{self, general_2x2, jordan_counterexample, satisfies_pt, ParityOperator};
use crate::random;

#[derive(Debug, Clone, Serialize)]
pub struct ReproCheck {
    pub name: String,
    pub passed: bool,
    /// The measured quantity, absent for yes/no checks.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<ReproCheck>,
    pub artifacts: Map<String, Value>,
}

struct Builder {
    name: &'static str,
    checks: Vec<ReproCheck>,
    artifacts: Map<String, Value>,
}

impl Builder {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: Vec::new(),
            artifacts: Map::new(),
        }
    }

    /// Passes when `value ≤ tolerance`.
    fn within(&mut self, name: &str, value: f64, tolerance: f64) {
        self.checks.push(ReproCheck {
            name: name.to_string(),
            passed: value <= tolerance,
            value: Some(value),
            tolerance: Some(tolerance),
        });
    }

    /// Passes when `value > threshold`.
    fn exceeds(&mut self, name: &str, value: f64, threshold: f64) {
        self.checks.push(ReproCheck {
            name: name.to_string(),
            passed: value > threshold,
            value: Some(value),
            tolerance: Some(threshold),
        });
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.checks.push(ReproCheck {
            name: name.to_string(),
            passed: ok,
            value: None,
            tolerance: None,
        });
    }

    fn artifact(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.artifacts.insert(key.to_string(), v);
    }

    fn finish(self) -> ReproReport {
        ReproReport {
            name: self.name.to_string(),
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            artifacts: self.artifacts,
        }
    }
}

fn sorted_eq(got: &[C64], want: &[C64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// `H = diag(1, i, −i)` with `A(a, b, c) = (a*, c*, b*)`.
pub fn antilinear() -> Result<ReproReport> {
    let mut r = Builder::new("antilinear");
    let (h, a) = three_level_example();

    let sys = eig(&h)?;
    r.within(
        "eig(diag(1, i, -i)) sorted to {-i, i, 1}",
        sorted_eq(&sys.values, &[-I, I, ONE]),
        1e-14,
    );
    let perm_ok = [2usize, 1, 0].iter().enumerate().all(|(col, &k)| {
        antilinear::is_parallel(&sys.vectors.column(col), &linalg::basis_vector(3, k), 1e-14)
    });
    r.holds("eigenvectors are standard basis vectors", perm_ok);

    let v = [
        C64::new(1.0, 2.0),
        C64::new(3.0, -1.0),
        C64::new(-0.5, 0.25),
    ];
    let av = a.apply(&v)?;
    let expected = [v[0].conj(), v[2].conj(), v[1].conj()];
    r.within(
        "A(a, b, c) = (a*, c*, b*)",
        linalg::vec_distance(&av, &expected),
        0.0,
    );
    r.within("A is an involution", a.involution_residual(), 1e-14);
    r.holds(
        "raw matrices do not commute",
        (&h * a.matrix()).distance(&(a.matrix() * &h)) > 0.5,
    );
    let comm = commutation_residual(&h, &a)?;
    r.within("H commutes with A", comm, 1e-12);

    let shared = shared_spectrum(&h, &a, antilinear::DEFAULT_TOL)?;
    r.within(
        "exactly one shared eigenvector",
        (shared.shared_count() as f64 - 1.0).abs(),
        0.0,
    );
    let shared_value = shared
        .records
        .iter()
        .find(|rec| rec.is_shared)
        .map(|rec| (rec.eigenvalue - ONE).norm())
        .unwrap_or(f64::INFINITY);
    r.within("shared eigenvalue is 1", shared_value, 1e-12);
    r.holds("symmetry is broken", !shared.unbroken);

    let (real, max_imag) =
        acceptability::check_real_spectrum(&h, acceptability::DEFAULT_SPECTRUM_TOL)?;
    r.holds("spectrum reported complex", !real);
    r.within("max |Im| = 1", (max_imag - 1.0).abs(), 1e-12);
    let report = accept(&h, &AcceptConfig::default());
    r.holds(
        "accept rejects with reason complex spectrum",
        !report.is_accepted() && report.reasons == [REASON_COMPLEX],
    );

    r.artifact("h", &h);
    r.artifact("antilinear", a.matrix());
    r.artifact("shared_spectrum", &shared);
    r.artifact("acceptability", &report);
    Ok(r.finish())
}

/// `P = [[1, 1], [0, −1]]`, `H = [[1, 5i], [0, 1]]`.
pub fn counterexample() -> Result<ReproReport> {
    let mut r = Builder::new("counterexample");
    let (p, h) = jordan_counterexample();

    r.within(
        "P squares to the identity",
        ptsym::parity_residual(p.matrix()),
        0.0,
    );
    r.holds("H = P conj(H) P", satisfies_pt(&h, &p, 0.0));

    let sys = eig(&h)?;
    r.within(
        "single eigenvalue 1",
        sorted_eq(&sys.values, &[ONE, ONE]),
        1e-12,
    );
    r.within(
        "one-dimensional eigenspace",
        (rank(&sys.vectors, 1e-6) as f64 - 1.0).abs(),
        0.0,
    );
    // Acting on row vectors, (0, 1)·H = (0, 1) and (0, 1)·P = −(0, 1).
    let row = [ZERO, ONE];
    let left = h.transpose().mul_vec(&row)?;
    r.within(
        "(0, 1) is the eigenvector of H",
        linalg::vec_distance(&left, &row),
        0.0,
    );
    let left_dim = 2 - rank(&(&h - &ComplexMatrix::identity(2)).transpose(), 1e-12);
    r.within("and the only one", (left_dim as f64 - 1.0).abs(), 0.0);
    let left_p = p.matrix().transpose().mul_vec(&row)?;
    r.within(
        "(0, 1) is an eigenvector of P",
        linalg::vec_distance(&left_p, &[ZERO, -ONE]),
        0.0,
    );
    r.holds(
        "column eigenvector is (1, 0)",
        antilinear::is_parallel(&sys.vectors.column(0), &[ONE, ZERO], 1e-12),
    );

    let (diagonalizable, cond) =
        acceptability::check_diagonalizable(&h, acceptability::DEFAULT_COND_CAP)?;
    r.holds("eigenvectors do not span the space", !diagonalizable);
    let report = accept(&h, &AcceptConfig::default());
    r.holds(
        "accept rejects with reason not diagonalizable",
        !report.is_accepted() && report.reasons == [REASON_DEFECTIVE],
    );
    let id = MetricOperator::identity(2);
    let drift = acceptability::max_norm_drift(&h, &id, &[5.0], &[vec![ZERO, ONE]], 1.0)?;
    r.exceeds(
        "norm drift > 1% by t = 5 with the plain inner product",
        drift,
        0.01,
    );

    r.artifact("p", p.matrix());
    r.artifact("h", &h);
    r.artifact("eigvec_cond", cond);
    r.artifact("acceptability", &report);
    r.artifact("norm_drift_t5", drift);
    Ok(r.finish())
}

/// The spin-1/2 example at one value of `α`, with `ε = 1`, `ħ = 1`.
pub fn spin_half_example(alpha: f64) -> Result<ReproReport> {
    let mut r = Builder::new("spin-half");
    let eps = 1.0;
    let h = spin_half(eps)?;
    r.within("H = sigma_x", h.distance(&sigma_x()), 0.0);
    r.holds(
        "sigma_x is a parity operator",
        ptsym::validate_parity(&sigma_x(), 0.0),
    );

    let b0 = alpha_basis(0.0)?;
    r.within(
        "B^-1(0) = diag(1, -1) is its own inverse",
        inverse(b0.b_inv())?.distance(&ComplexMatrix::from_real_diag(&[1.0, -1.0])),
        0.0,
    );

    let (hp, c, basis) = primed_frame(eps, alpha)?;
    let (s2, c2) = ((2.0 * alpha).sin(), (2.0 * alpha).cos());
    let shown_h =
        ComplexMatrix::from_rows(&[vec![-I * s2, -ONE], vec![-ONE, I * s2]])?.scale_real(eps / c2);
    let shown_c = ComplexMatrix::from_rows(&[vec![ONE, -I * s2], vec![I * s2, ONE]])?
        .scale_real(1.0 / (c2 * c2));
    let max_abs = |a: &ComplexMatrix, b: &ComplexMatrix| {
        a.entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    r.within("H' matches the closed form", max_abs(&hp, &shown_h), 1e-10);
    r.within(
        "B^dagger B matches the closed form",
        max_abs(c.matrix(), &shown_c),
        1e-10,
    );
    let built = build_metric(&hp)?;
    let (scale, resid) = built.scale_to(&shown_c);
    r.holds("built metric has positive scale", scale > 0.0);
    r.within("built metric proportional to the closed form", resid, 1e-10);

    r.holds(
        "H' has the general sigma_x-symmetric form",
        general_2x2(hp[(0, 0)], hp[(0, 1)]).distance(&hp) < 1e-12 * hp.frobenius_norm()
            && (hp[(0, 0)] - C64::new(0.0, -eps * (2.0 * alpha).tan())).norm() < 1e-12,
    );
    r.holds(
        "H' = sigma_x conj(H') sigma_x",
        satisfies_pt(&hp, &ParityOperator::sigma_x(), 1e-12),
    );

    let id = MetricOperator::identity(2);
    r.holds(
        "H' not Hermitian in the plain inner product",
        alpha == 0.0 || !is_hermitian_wrt(&hp, &id, 1e-8),
    );
    r.holds(
        "H' Hermitian with respect to B^dagger B",
        is_hermitian_wrt(&hp, &c, 1e-10),
    );
    let u = propagator(&hp, 0.7, 1.0)?;
    r.holds(
        "U' not unitary in the plain inner product",
        alpha == 0.0 || !is_unitary_wrt(&u, &id, 1e-8),
    );
    r.holds(
        "U' unitary with respect to B^dagger B",
        is_unitary_wrt(&u, &c, 1e-10),
    );

    let pair = hermitize(&hp)?;
    r.within(
        "hermitize(H') = diag(-eps, eps)",
        pair.h_herm
            .distance(&ComplexMatrix::from_real_diag(&[-eps, eps])),
        1e-10,
    );
    r.holds(
        "spectrum of H' equals that of H",
        spectra_equal(&h, &hp, 1e-10)?,
    );

    // The displayed |e1>, |e2> carry an overall sign relative to B obtained by inversion.
    let k = 1.0 / c2;
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let shown_e1 = [C64::new(-ca * k, 0.0), I * sa * k];
    let shown_e2 = [I * sa * k, C64::new(ca * k, 0.0)];
    let e1 = transform_state(&[ONE, ZERO], &basis, Direction::Backward)?;
    let e2 = transform_state(&[ZERO, ONE], &basis, Direction::Backward)?;
    let up_to_sign = |v: &[C64], w: &[C64]| linalg::vec_distance(v, w).min(vec_sum_norm(v, w));
    r.within(
        "B e1' = |e1> up to global phase",
        up_to_sign(&e1, &shown_e1),
        1e-12,
    );
    r.within(
        "B e2' = |e2> up to global phase",
        up_to_sign(&e2, &shown_e2),
        1e-12,
    );

    let mut rng = random::rng(0);
    let mut worst: f64 = 0.0;
    for _ in 0..16 {
        let psi = random::complex_vector(&mut rng, 2);
        let phi = random::complex_vector(&mut rng, 2);
        let psi_p = transform_state(&psi, &basis, Direction::Forward)?;
        let phi_p = transform_state(&phi, &basis, Direction::Forward)?;
        let lhs = physical_overlap(&c, &psi_p, &phi_p)?;
        worst = worst.max(
            (lhs - linalg::dot(&psi, &phi)).norm() / (linalg::norm(&psi) * linalg::norm(&phi)),
        );
    }
    r.within("<psi'|B^dagger B|phi'> = <psi|phi>", worst, 1e-12);

    let config = spin_half_config(eps, 1.0);
    let tau_n = evolution::first_passage_time(&hp, &c, &[ONE, ZERO], &[ZERO, ONE], &config)?;
    let tau_f = tau_formula(eps, alpha, 1.0)?;
    r.within(
        "first passage e1' -> e2' matches the formula",
        (tau_n - tau_f).abs(),
        1e-8,
    );

    r.artifact("alpha", alpha);
    r.artifact("h_prime", &hp);
    r.artifact("metric", c.matrix());
    r.artifact("built_metric", built.matrix());
    r.artifact("built_metric_scale", scale);
    r.artifact("b", basis.b());
    r.artifact("b_inv", basis.b_inv());
    r.artifact("tau_numeric", tau_n);
    r.artifact("tau_formula", tau_f);
    r.artifact("hermitian_bound", hermitian_bound(2.0 * eps, 1.0)?);
    Ok(r.finish())
}

fn vec_sum_norm(v: &[C64], w: &[C64]) -> f64 {
    v.iter()
        .zip(w)
        .map(|(a, b)| (a + b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// The `τ(α)` sweep and its limits, `ε = 1`, `ħ = 1`.
pub fn brachistochrone() -> Result<ReproReport> {
    let mut r = Builder::new("brachistochrone");
    let eps = 1.0;
    let config = spin_half_config(eps, 1.0);
    let alphas: Vec<f64> = (0..=76).map(|k| k as f64 / 100.0).collect();
    let records = brach_sweep(eps, &alphas, &config)?;

    let worst_tau = records
        .iter()
        .map(|x| (x.tau_numeric - x.tau_formula).abs())
        .fold(0.0, f64::max);
    r.within(
        "first passage matches the formula over the sweep",
        worst_tau,
        1e-8,
    );
    let worst_gap = records
        .iter()
        .map(|x| (x.gap - 2.0 * eps).abs())
        .fold(0.0, f64::max);
    r.within("gap held fixed at 2 eps", worst_gap, 1e-9);
    r.within(
        "tau(0) = pi hbar / (2 eps)",
        (tau_formula(eps, 0.0, 1.0)? - FRAC_PI_2).abs(),
        1e-15,
    );
    r.within(
        "hermitian bound pi hbar / omega at omega = 2 eps equals tau(0)",
        (hermitian_bound(2.0 * eps, 1.0)? - records[0].tau_numeric).abs(),
        1e-9,
    );
    r.within(
        "tau -> 0 as alpha -> pi/4",
        tau_formula(eps, FRAC_PI_4 - 1e-9, 1.0)?,
        1e-8,
    );
    r.holds(
        "tau beats the hermitian bound for alpha > 0",
        records
            .iter()
            .skip(1)
            .all(|x| x.tau_numeric < x.hermitian_bound),
    );

    r.artifact("records", &records);
    Ok(r.finish())
}

/// Low spectrum of `½p² + ½x² + i·x` against `n + 1`.
pub fn oscillator(n_max: usize) -> Result<ReproReport> {
    let mut r = Builder::new("oscillator");
    let spec = evolution::oscillator_spectrum(n_max, 5.min(n_max))?;
    let worst = spec.errors.iter().copied().fold(0.0, f64::max);
    r.within(
        "lowest eigenvalues within 1e-6 of 1, 2, 3, ...",
        worst,
        1e-6,
    );
    r.within("imaginary parts below 1e-8", spec.max_imag, 1e-8);
    r.artifact("spectrum", &spec);
    Ok(r.finish())
}

pub const DEFAULT_ALPHA: f64 = 0.3;
pub const DEFAULT_NMAX: usize = 64;

/// Every reproduction with default parameters.
pub fn all() -> Result<Vec<ReproReport>> {
    Ok(vec![
        antilinear()?,
        counterexample()?,
        spin_half_example(DEFAULT_ALPHA)?,
        brachistochrone()?,
        oscillator(DEFAULT_NMAX)?,
    ])
}
