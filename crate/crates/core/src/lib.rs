//! Finite-dimensional non-Hermitian quantum mechanics, made executable.
//!
//! A non-Hermitian Hamiltonian that satisfies the physical-acceptability
//! criteria (real spectrum, diagonalizable, eigenvectors orthogonal under some
//! inner product, conserved probabilities) is an ordinary Hermitian
//! Hamiltonian written in a non-orthogonal basis. This crate checks those
//! criteria, constructs the metric operator and the basis change explicitly,
//! and reproduces the spin-1/2 "faster than Hermitian" evolution as a
//! coordinate effect.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex matrices, eigendecomposition, `expm`, inverse, conditioning.
//! - [`antilinear`]: operators `v ↦ M·conj(v)` and shared eigenvectors with a Hamiltonian.
//! - [`ptsym`]: the parity-time consistency condition `H = P·conj(H)·P`.
//! - [`acceptability`]: the four acceptance criteria and the metric operator.
//! - [`hermitize`]: factor an accepted Hamiltonian as a basis change of a real diagonal one.
//! - [`evolution`]: time evolution, first-passage times, the brachistochrone sweep.
//! - [`io`]: JSON matrix/vector files and CSV output.
//! - [`repro`]: self-checking reproductions of the worked examples.

pub mod acceptability;
pub mod antilinear;
pub mod error;
pub mod evolution;
pub mod hermitize;
pub mod io;
pub mod linalg;
pub mod ptsym;
pub mod random;
pub mod repro;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
