//! LU, inverse, singular values and Cholesky for small dense complex matrices.

use super::matrix::{dot, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Condition numbers above this are treated as singular by [`inverse`].
pub const SINGULAR_COND: f64 = 1e15;

/// LU factorization with partial pivoting, `P·A = L·U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.frobenius_norm();
        for k in 0..n {
            let (p, pivot_abs) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot_abs == 0.0 || pivot_abs <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::Singular {
                    cond: f64::INFINITY,
                });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A·X = B` column by column.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = b.dim();
        let mut out = ComplexMatrix::zeros(n);
        for j in 0..n {
            let x = self.solve_vec(&b.column(j));
            out.set_column(j, &x);
        }
        out
    }
}

/// Matrix inverse via partial-pivoting LU.
///
/// Fails with the condition estimate when `cond(m)` exceeds [`SINGULAR_COND`].
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let c = cond(m);
    if !(c <= SINGULAR_COND) {
        return Err(Error::Singular { cond: c });
    }
    let lu = Lu::new(m).map_err(|_| Error::Singular { cond: c })?;
    Ok(lu.solve(&ComplexMatrix::identity(m.dim())))
}

/// Singular values (descending) and right singular vectors by one-sided Jacobi.
///
/// Column `k` of the returned matrix is the right singular vector for `sv[k]`.
pub fn svd_right(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let tol = f64::EPSILON * n as f64;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase so the 2x2 problem is real symmetric.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for set in [&mut cols, &mut vcols] {
                    let (left, right) = set.split_at_mut(q);
                    for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let bq = *b * phase;
                        let new_p = *a * c - bq * s;
                        let new_q = *a * s + bq * c;
                        *a = new_p;
                        *b = new_q;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let sorted: Vec<f64> = order.iter().map(|&k| sv[k]).collect();
    let v = ComplexMatrix::from_fn(n, |i, j| vcols[order[j]][i]);
    (sorted, v)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    svd_right(m).0
}

/// 2-norm condition number `σ_max / σ_min`.
///
/// Returns `f64::INFINITY` when the matrix is singular to working precision.
pub fn cond(m: &ComplexMatrix) -> f64 {
    if m.dim() == 0 {
        return 1.0;
    }
    let sv = singular_values(m);
    let max = sv[0];
    let min = *sv.last().unwrap();
    if max == 0.0 || min <= max * f64::EPSILON * m.dim() as f64 {
        return f64::INFINITY;
    }
    max / min
}

/// Numerical rank from the singular values with relative cutoff `rtol`.
pub fn rank(m: &ComplexMatrix, rtol: f64) -> usize {
    let sv = singular_values(m);
    let max = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > rtol * max).count()
}

/// Lower-triangular Cholesky factor `L` with `A = L·L†`; `None` when `A` is not
/// positive definite.
pub fn cholesky(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.dim();
    let mut l = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(l)
}

/// Solve `A·x = b` directly.
pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    a.check_vec(b)?;
    Ok(Lu::new(a)?.solve_vec(b))
}

/// `‖m − I‖_F`.
pub fn identity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut r = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            r += (m[(i, j)] - target).norm_sqr();
        }
    }
    r.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::I;

    #[test]
    fn inverse_of_identity() {
        let id = ComplexMatrix::identity(4);
        assert_eq!(inverse(&id).unwrap(), id);
    }

    #[test]
    fn inverse_reflection_is_self_inverse() {
        // B^{-1} at alpha = 0 is diag(1, -1).
        let m = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_eq!(inverse(&m).unwrap(), m);
    }

    #[test]
    fn singular_matrix_reports_condition() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        match inverse(&m) {
            Err(Error::Singular { cond }) => assert!(cond > SINGULAR_COND),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn condition_numbers_of_diagonals() {
        assert!((cond(&ComplexMatrix::identity(3)) - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::from_real_diag(&[10.0, 1.0]);
        assert!((cond(&d) - 10.0).abs() < 1e-12);
        let z = ComplexMatrix::zeros(2);
        assert_eq!(cond(&z), f64::INFINITY);
    }

    #[test]
    fn singular_values_of_rank_one() {
        // (1, i)ᵀ (1, 1): singular values sqrt(2)·sqrt(2) = 2 and 0.
        let m = ComplexMatrix::from_rows(&[vec![ONE, ONE], vec![I, I]]).unwrap();
        let sv = singular_values(&m);
        assert!((sv[0] - 2.0).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);
        assert_eq!(rank(&m, 1e-12), 1);
    }

    #[test]
    fn cholesky_detects_indefinite() {
        let pd =
            ComplexMatrix::from_rows(&[vec![C64::new(2.0, 0.0), I], vec![-I, C64::new(2.0, 0.0)]])
                .unwrap();
        let l = cholesky(&pd).unwrap();
        assert!((&l * &l.adjoint()).distance(&pd) < 1e-14);
        let indefinite = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(cholesky(&indefinite).is_none());
    }
}
