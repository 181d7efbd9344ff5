//! Seeded generators for test and demonstration matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{cond, inverse, ComplexMatrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| complex_normal(rng)).collect()
}

/// Matrix with i.i.d. standard complex normal entries.
pub fn complex_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = complex_matrix(rng, dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for _ in 0..2 {
            for u in &cols {
                let p = crate::linalg::dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= p * ui;
                }
            }
        }
        cols.push(crate::linalg::normalized(&v));
    }
    ComplexMatrix::from_columns(&cols).expect("square by construction")
}

/// Random Hermitian matrix `Q·diag(d)·Q†` with the returned real spectrum `d`.
pub fn hermitian(rng: &mut impl Rng, dim: usize) -> (ComplexMatrix, Vec<f64>) {
    let q = unitary(rng, dim);
    let d: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
    let h = &(&q * &ComplexMatrix::from_real_diag(&d)) * &q.adjoint();
    // symmetrize away rounding
    let h = (&h + &h.adjoint()).scale_real(0.5);
    (h, d)
}

/// Random invertible matrix with `cond ≤ max_cond`, by rejection.
pub fn well_conditioned(rng: &mut impl Rng, dim: usize, max_cond: f64) -> ComplexMatrix {
    loop {
        let g = complex_matrix(rng, dim);
        if cond(&g) <= max_cond {
            return g;
        }
    }
}

/// Diagonalizable matrix with real spectrum: `g·diag(d)·g⁻¹`.
///
/// Returns the matrix, the spectrum, and the similarity `g`. Eigenvalues are
/// drawn with a minimum separation so they are not clustered.
pub fn acceptable_hamiltonian(
    rng: &mut impl Rng,
    dim: usize,
    max_cond: f64,
) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let g = well_conditioned(rng, dim, max_cond);
    let d = separated_reals(rng, dim, 0.05);
    let g_inv = inverse(&g).expect("conditioned by construction");
    let h = &(&g * &ComplexMatrix::from_real_diag(&d)) * &g_inv;
    (h, d, g)
}

/// `count` reals in [-5, 5) with pairwise gaps ≥ `min_gap`.
pub fn separated_reals(rng: &mut impl Rng, count: usize, min_gap: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(count);
    while out.len() < count {
        let x: f64 = rng.random_range(-5.0..5.0);
        if out.iter().all(|y| (x - y).abs() >= min_gap) {
            out.push(x);
        }
    }
    out
}
