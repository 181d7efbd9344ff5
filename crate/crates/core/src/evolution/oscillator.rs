//! `H = ½p² + ½x² + i·x` truncated to the lowest `n_max` number states.
//!
//! Completing the square gives `½p² + ½(x + i)² + ½`, so the spectrum is
//! `n + 1`. The truncation is complex symmetric and not Hermitian, yet its low
//! eigenvalues converge to real values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, ComplexMatrix, C64};

pub const MIN_NMAX: usize = 8;

/// Matrix in the number basis, with `x = (a + a†)/√2` and `½(p² + x²) = a†a + ½`.
pub fn shifted_oscillator(n_max: usize) -> Result<ComplexMatrix> {
    if n_max < MIN_NMAX {
        return Err(Error::InvalidArgument(format!(
            "n_max must be at least {MIN_NMAX}, got {n_max}"
        )));
    }
    Ok(ComplexMatrix::from_fn(n_max, |i, j| {
        if i == j {
            C64::new(i as f64 + 0.5, 0.0)
        } else if i.abs_diff(j) == 1 {
            // ⟨n|x|n+1⟩ = √((n+1)/2)
            C64::new(0.0, (i.max(j) as f64 / 2.0).sqrt())
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Lowest eigenvalues of a truncation against the exact `n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpectrum {
    pub n_max: usize,
    pub eigenvalues: Vec<C64>,
    /// `|λₙ − (n + 1)|`.
    pub errors: Vec<f64>,
    pub max_imag: f64,
}

/// The `count` eigenvalues of smallest real part.
pub fn oscillator_spectrum(n_max: usize, count: usize) -> Result<OscillatorSpectrum> {
    let h = shifted_oscillator(n_max)?;
    if count == 0 || count > n_max {
        return Err(Error::InvalidArgument(format!(
            "count must lie in 1..={n_max}, got {count}"
        )));
    }
    let mut values = eigenvalues(&h)?;
    values.truncate(count);
    let errors = values
        .iter()
        .enumerate()
        .map(|(n, z)| (z - C64::new(n as f64 + 1.0, 0.0)).norm())
        .collect();
    let max_imag = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(OscillatorSpectrum {
        n_max,
        eigenvalues: values,
        errors,
        max_imag,
    })
}
