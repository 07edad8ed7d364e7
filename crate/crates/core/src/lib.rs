//! Operator radii `w_ρ` of complex matrices and the geometry they induce.
//!
//! * [`linalg`]: dense complex matrices with a Hermitian Jacobi
//!   eigensolver, plus the operator norm and its maximal singular subspace.
//! * [`radius`]: the numerical radius `w` and the ρ-radius `w_ρ` through a
//!   `2n×2n` block embedding, with attaining vectors.
//! * [`geometry`]: `w_ρ`-Birkhoff–James orthogonality and `w_ρ`-parallelism
//!   deciders with witness vectors, plus the operator-norm and
//!   numerical-radius special cases.
//! * [`oracle`]: brute-force grid and sampling verifiers.
//! * [`selftest`]: the randomized invariant suite behind `opradius selftest`.
//! * [`cli`]: command drivers behind the `opradius` binary, with the JSON
//!   matrix file and report envelope formats.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod optim;
pub mod oracle;
pub mod par;
pub mod radius;
pub mod selftest;

pub use error::{Error, Result};
pub use geometry::{OrthogonalityReport, ParallelismReport, WitnessRecord};
pub use linalg::{ComplexMatrix, ComplexScalar, ComplexVector};
pub use radius::{RadiusCertificate, RadiusOptions, RhoParam};
