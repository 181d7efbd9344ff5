//! Eigendecomposition of general (non-normal) complex matrices.
//!
//! Two stages: Householder reduction to upper Hessenberg form followed by a
//! single-shift implicit QR iteration yields the complex Schur form
//! `A = Z·T·Z†`. Eigenvectors of the triangular factor are then obtained by
//! back-substitution and mapped back through `Z`.

use super::matrix::{norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Default relative tolerance used throughout the kernel.
pub const DEFAULT_RTOL: f64 = 1e-9;

const MAX_ITER_PER_EIGENVALUE: usize = 120;

/// Eigenvalues and unit-norm right eigenvectors, column `j` pairing with `values[j]`.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<C64>,
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    /// Largest `‖A·v_j − λ_j·v_j‖₂` over all pairs.
    pub fn max_residual(&self, a: &ComplexMatrix) -> f64 {
        (0..self.values.len())
            .map(|j| {
                let v = self.vectors.column(j);
                let av = a.mul_vec(&v).expect("dimension checked at construction");
                av.iter()
                    .zip(&v)
                    .map(|(x, y)| (x - self.values[j] * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Schur decomposition `A = Z·T·Z†` with `T` upper triangular and `Z` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: ComplexMatrix,
    pub z: ComplexMatrix,
}

/// Lexicographic (real part, then imaginary part) order; stable on ties.
pub fn sort_order(values: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
    });
    idx
}

pub fn sorted_eigenvalues(values: &[C64]) -> Vec<C64> {
    sort_order(values).into_iter().map(|i| values[i]).collect()
}

/// Reduce to upper Hessenberg form; returns `(H, Q)` with `A = Q·H·Q†`.
pub fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            ONE
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- P h, P = I - 2 v v†, acting on rows k+1..n
        for j in 0..n {
            let s: C64 = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= 2.0 * v[r] * s;
            }
        }
        // h <- h P and q <- q P, acting on columns k+1..n
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: C64 = (0..v.len()).map(|c| m[(i, k + 1 + c)] * v[c]).sum();
                for c in 0..v.len() {
                    m[(i, k + 1 + c)] -= 2.0 * s * v[c].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Givens rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let tr_half = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur form by Hessenberg reduction and shifted QR.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    a.validate()?;
    let n = a.dim();
    let (mut h, mut z) = hessenberg(a);
    if n <= 1 {
        return Ok(Schur { t: h, z });
    }
    let eps = f64::EPSILON;
    let anorm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while hi > 0 {
        // look for a negligible subdiagonal entry
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = anorm;
            }
            if sub <= eps * diag || sub <= f64::MIN_POSITIVE * 1e3 {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total_iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                iterations: total_iter,
                residual: h[(hi, hi - 1)].norm(),
            });
        }
        let shift = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        // implicit single-shift sweep over the active window lo..=hi
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let col_start = if k > lo { k - 1 } else { k };
            for j in col_start..n {
                let a0 = h[(k, j)];
                let a1 = h[(k + 1, j)];
                h[(k, j)] = a0 * c + s * a1;
                h[(k + 1, j)] = -s.conj() * a0 + a1 * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let a0 = h[(i, k)];
                let a1 = h[(i, k + 1)];
                h[(i, k)] = a0 * c + a1 * s.conj();
                h[(i, k + 1)] = -a0 * s + a1 * c;
            }
            for i in 0..n {
                let a0 = z[(i, k)];
                let a1 = z[(i, k + 1)];
                z[(i, k)] = a0 * c + a1 * s.conj();
                z[(i, k + 1)] = -a0 * s + a1 * c;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { t: h, z })
}

/// Right eigenvectors of an upper-triangular matrix (columns, not normalized).
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.dim();
    let small = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE * 1e3);
    let mut y = ComplexMatrix::zeros(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for j in (0..k).rev() {
            let mut s = ZERO;
            for l in j + 1..=k {
                s += t[(j, l)] * y[(l, k)];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            y[(j, k)] = -s / d;
        }
        // rescale the column to keep later sums bounded
        let m = (0..=k).map(|i| y[(i, k)].norm()).fold(0.0, f64::max);
        if m > 1e100 {
            for i in 0..=k {
                y[(i, k)] /= m;
            }
        }
    }
    y
}

/// Eigendecomposition with the default relative residual tolerance.
pub fn eig(m: &ComplexMatrix) -> Result<Eigensystem> {
    eig_with_tol(m, DEFAULT_RTOL)
}

/// Eigendecomposition; fails if any residual exceeds `rtol·‖m‖_F`.
///
/// Eigenvalues are returned sorted by real part, then imaginary part. Each
/// eigenvector column has unit Euclidean norm. For defective input the
/// returned columns are (numerically) linearly dependent; callers detect this
/// through the conditioning of the eigenvector matrix.
pub fn eig_with_tol(m: &ComplexMatrix, rtol: f64) -> Result<Eigensystem> {
    let n = m.dim();
    let Schur { t, z } = schur(m)?;
    let y = triangular_eigenvectors(&t);
    let s = &z * &y;
    let raw_values = t.diagonal();
    let order = sort_order(&raw_values);
    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(raw_values[src]);
        let col = s.column(src);
        let nrm = norm(&col);
        let col: Vec<C64> = col.iter().map(|c| c / nrm).collect();
        vectors.set_column(dst, &col);
    }
    let sys = Eigensystem { values, vectors };
    let residual = sys.max_residual(m);
    if !(residual <= rtol * m.frobenius_norm().max(f64::MIN_POSITIVE)) && residual > 0.0 {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual,
        });
    }
    Ok(sys)
}

/// Eigenvalues only, sorted lexicographically.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let Schur { t, .. } = schur(m)?;
    Ok(sorted_eigenvalues(&t.diagonal()))
}

/// Eigenbasis with degenerate eigenspaces resolved explicitly.
///
/// `clusters` groups indices (into `values` and the columns of `vectors`)
/// whose eigenvalues lie within the clustering tolerance of each other.
/// Within a cluster the columns are an orthonormal basis of the numerical
/// null space of `A − λ̄·I`, so diagonalizable matrices with repeated
/// eigenvalues are not mistaken for defective ones. `defective` is set when
/// some cluster has fewer independent eigenvectors than its multiplicity.
#[derive(Debug, Clone)]
pub struct ClusteredEigenbasis {
    pub values: Vec<C64>,
    pub vectors: ComplexMatrix,
    pub clusters: Vec<Vec<usize>>,
    pub defective: bool,
}

/// Single-linkage grouping of sorted eigenvalues within `tol`.
fn cluster_indices(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match root_slot[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_slot[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Modified Gram-Schmidt on the given columns in place.
///
/// Returns `false` if some column collapses below `drop_tol` after projection.
pub fn modified_gram_schmidt(cols: &mut [Vec<C64>], drop_tol: f64) -> bool {
    let mut independent = true;
    for k in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(k);
        let v = &mut rest[0];
        for u in done.iter() {
            let p = super::matrix::dot(u, v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= p * ui;
            }
        }
        let nv = norm(v);
        if nv <= drop_tol {
            independent = false;
            continue;
        }
        for z in v.iter_mut() {
            *z /= nv;
        }
    }
    independent
}

/// Eigendecomposition with clustering of (numerically) repeated eigenvalues.
///
/// Eigenvalues within `cluster_tol` of each other (absolute) share an
/// eigenspace whose basis is computed from the SVD null space and then
/// orthonormalized by modified Gram-Schmidt.
pub fn clustered_eigenbasis(m: &ComplexMatrix, cluster_tol: f64) -> Result<ClusteredEigenbasis> {
    let sys = eig(m)?;
    let n = m.dim();
    let clusters = cluster_indices(&sys.values, cluster_tol);
    let mut vectors = sys.vectors.clone();
    let mut defective = false;
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for cluster in clusters.iter().filter(|c| c.len() > 1) {
        let k = cluster.len();
        let mean: C64 = cluster.iter().map(|&i| sys.values[i]).sum::<C64>() / k as f64;
        let shifted = m - &ComplexMatrix::identity(n).scale(mean);
        let (sv, v) = super::decomp::svd_right(&shifted);
        let null_tol = cluster_tol.max(f64::EPSILON * scale * n as f64);
        let null_dim = sv.iter().filter(|&&s| s <= null_tol).count();
        let mut basis: Vec<Vec<C64>> = (n - k..n).map(|j| v.column(j)).collect();
        if null_dim < k {
            defective = true;
            // keep the raw eigenvectors so callers can still inspect them
            basis = cluster.iter().map(|&i| sys.vectors.column(i)).collect();
        } else if !modified_gram_schmidt(&mut basis, 1e-12) {
            defective = true;
        }
        for (slot, col) in cluster.iter().zip(&basis) {
            vectors.set_column(*slot, col);
        }
    }
    Ok(ClusteredEigenbasis {
        values: sys.values,
        vectors,
        clusters,
        defective,
    })
}
