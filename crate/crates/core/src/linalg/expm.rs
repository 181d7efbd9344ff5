//! Matrix exponential by scaling and squaring with a [13/13] Padé approximant.

use super::decomp::Lu;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm bound under which the [13/13] approximant is accurate to unit roundoff.
const THETA_13: f64 = 5.371920351148152;

// Beyond this many squarings the scaled argument no longer carries any precision.
const MAX_SQUARINGS: i32 = 64;

fn add_scaled(acc: &mut ComplexMatrix, m: &ComplexMatrix, s: f64) {
    let n = acc.dim();
    for i in 0..n {
        for j in 0..n {
            acc[(i, j)] += m[(i, j)] * s;
        }
    }
}

/// `exp(m)`.
///
/// Errors with [`Error::Overflow`] when the result is not finite in double
/// precision or `‖m‖₁` is too large to scale down. A large norm alone is not an
/// error: `exp(−i·h·t)` stays bounded for `h` similar to a real diagonal.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.validate()?;
    let n = m.dim();
    let norm = m.norm_1();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    if squarings > MAX_SQUARINGS {
        return Err(Error::Overflow { norm });
    }
    let a = m.scale_real(0.5f64.powi(squarings));
    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;

    let mut u_inner = a6.scale_real(b[13]);
    add_scaled(&mut u_inner, &a4, b[11]);
    add_scaled(&mut u_inner, &a2, b[9]);
    let mut u_tmp = &a6 * &u_inner;
    add_scaled(&mut u_tmp, &a6, b[7]);
    add_scaled(&mut u_tmp, &a4, b[5]);
    add_scaled(&mut u_tmp, &a2, b[3]);
    add_scaled(&mut u_tmp, &id, b[1]);
    let u = &a * &u_tmp;

    let mut v_inner = a6.scale_real(b[12]);
    add_scaled(&mut v_inner, &a4, b[10]);
    add_scaled(&mut v_inner, &a2, b[8]);
    let mut v = &a6 * &v_inner;
    add_scaled(&mut v, &a6, b[6]);
    add_scaled(&mut v, &a4, b[4]);
    add_scaled(&mut v, &a2, b[2]);
    add_scaled(&mut v, &id, b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let lu = Lu::new(&q).map_err(|_| Error::Overflow { norm })?;
    let mut r = lu.solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r.validate().map_err(|_| Error::Overflow { norm })?;
    Ok(r)
}

/// `exp(-i·h·t/ħ)`, the Schrödinger propagator.
pub fn propagator(h: &ComplexMatrix, t: f64, hbar: f64) -> Result<ComplexMatrix> {
    expm(&h.scale(C64::new(0.0, -t / hbar)))
}
