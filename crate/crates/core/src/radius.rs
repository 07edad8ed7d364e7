//! Numerical radius `w(T)` and operator radii `w_ρ(A)`.
//!
//! `w(T) = max_θ λ_max(Re(e^{iθ}T))`, where `Re(M) = (M + M*)/2`. The
//! maximization over θ is a periodic grid scan plus golden-section
//! refinement of every near-maximal grid peak. For `ρ ∈ (0, 2]`,
//!
//! ```text
//! w_ρ(A) = (2/ρ) · w([[0, √(ρ(2-ρ))·A], [0, (1-ρ)·A]])
//! ```
//!
//! and the top eigenvector of the rotated Hermitian part at the maximizing
//! angle is a unit vector `z = [x; y]` with `(2/ρ)|⟨Tz, z⟩| = w_ρ(A)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigen_unchecked, hermitian_max_eigenvalue_unchecked, ComplexMatrix, ComplexScalar, ComplexVector,
};
use crate::optim::{maximize_periodic, PeriodicSearch, Refinement};

/// Default absolute tolerance on reported radii.
pub const DEFAULT_RADIUS_TOL: f64 = 1e-9;

/// Smallest accepted ρ; below it the `1/ρ` scaling of the block embedding
/// loses too many digits.
pub const RHO_FLOOR: f64 = 1e-3;

/// ρ ∈ [1e-3, 2].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RhoParam(f64);

impl TryFrom<f64> for RhoParam {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RhoParam> for f64 {
    fn from(r: RhoParam) -> f64 {
        r.0
    }
}

impl RhoParam {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value <= 2.0) {
            return Err(Error::RhoOutOfRange(value));
        }
        if value < RHO_FLOOR {
            return Err(Error::RhoIllConditioned(value));
        }
        Ok(Self(value))
    }

    /// ρ = 1: `w_1 = ‖·‖`.
    pub const ONE: RhoParam = RhoParam(1.0);
    /// ρ = 2: `w_2 = w`.
    pub const TWO: RhoParam = RhoParam(2.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// Coefficients `(√(ρ(2-ρ)), 1-ρ)` of the block embedding.
    pub fn block_coefficients(self) -> (f64, f64) {
        let r = self.0;
        ((r * (2.0 - r)).max(0.0).sqrt(), 1.0 - r)
    }

    /// Coefficients `(√((8-4ρ)/ρ), (2-2ρ)/ρ)` of the scaled witness vector.
    pub fn witness_coefficients(self) -> (f64, f64) {
        let r = self.0;
        (((8.0 - 4.0 * r) / r).max(0.0).sqrt(), (2.0 - 2.0 * r) / r)
    }

    /// `2/ρ`.
    pub fn scale(self) -> f64 {
        2.0 / self.0
    }
}

/// Tuning of the θ-maximization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusOptions {
    /// Uniform θ-grid size.
    pub grid_points: usize,
    /// Absolute margin below the grid maximum for refinement candidates.
    /// The effective margin is never below the cosine bound
    /// `gridmax·(1 - cos(h/2))`, which guarantees the grid point nearest the
    /// true maximizer is refined.
    pub margin: f64,
    /// Golden-section stopping width in θ.
    pub width_tol: f64,
    /// Relative gap under which eigenvalues count as one top eigenspace.
    pub degeneracy_tol: f64,
    /// Bracket refinement method.
    pub refinement: Refinement,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self {
            grid_points: 720,
            margin: 1e-6,
            width_tol: 1e-12,
            degeneracy_tol: 1e-8,
            refinement: Refinement::GoldenSection,
        }
    }
}

impl RadiusOptions {
    /// Coarser grid for inner loops of the optimizers. Still globally
    /// correct through the cosine margin; only the number of refined
    /// candidates grows.
    pub fn fast() -> Self {
        Self {
            grid_points: 48,
            margin: 1e-6,
            width_tol: 1e-10,
            degeneracy_tol: 1e-8,
            refinement: Refinement::Brent,
        }
    }

    fn search(&self) -> PeriodicSearch {
        let h = 2.0 * PI / self.grid_points.max(3) as f64;
        PeriodicSearch {
            grid_points: self.grid_points,
            margin: self.margin,
            rel_margin: 1.01 * (1.0 - (h / 2.0).cos()),
            width_tol: self.width_tol,
            flat_tol: 1e-11,
            refinement: self.refinement,
        }
    }
}

/// Value of a radius together with the angle and unit vector attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusCertificate {
    pub radius: f64,
    pub theta_star: f64,
    pub attaining_vector: ComplexVector,
    pub residual: f64,
}

/// `cos θ·Re(T) + sin θ·(-Im(T))`, i.e. the Hermitian part of `e^{iθ}T`,
/// with the two Hermitian pieces precomputed.
#[derive(Clone, Debug)]
pub(crate) struct RotatedHermitian {
    n: usize,
    re: Vec<ComplexScalar>,
    im: Vec<ComplexScalar>,
}

impl RotatedHermitian {
    pub(crate) fn new(t: &ComplexMatrix) -> Self {
        let n = t.rows();
        let mut re = vec![ComplexScalar::default(); n * n];
        let mut im = vec![ComplexScalar::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                let a = t[(i, j)];
                let b = t[(j, i)].conj();
                re[i * n + j] = 0.5 * (a + b);
                // -Im(T) = -(T - T*)/(2i) = i(T - T*)/2
                im[i * n + j] = c(0.0, 0.5) * (a - b);
            }
        }
        Self { n, re, im }
    }

    pub(crate) fn at(&self, theta: f64) -> ComplexMatrix {
        let (s, co) = theta.sin_cos();
        let data = self.re.iter().zip(&self.im).map(|(r, i)| r * co + i * s).collect();
        ComplexMatrix::from_raw(self.n, self.n, data)
    }

    pub(crate) fn lambda_max(&self, theta: f64) -> f64 {
        hermitian_max_eigenvalue_unchecked(&self.at(theta))
    }
}

/// Maximizers of `θ ↦ λ_max(Re(e^{iθ}T))`, best first.
pub(crate) fn theta_peaks(
    t: &ComplexMatrix,
    opts: &RadiusOptions,
) -> (RotatedHermitian, Vec<crate::optim::PeriodicPeak>) {
    let rot = RotatedHermitian::new(t);
    let peaks = maximize_periodic(|th| rot.lambda_max(th), &opts.search());
    (rot, peaks)
}

/// Numerical radius value only.
pub fn numerical_radius_value(t: &ComplexMatrix, opts: &RadiusOptions) -> Result<f64> {
    t.square_dim()?;
    if t.is_zero() {
        return Ok(0.0);
    }
    let (_, peaks) = theta_peaks(t, opts);
    Ok(peaks[0].value.max(0.0))
}

/// Numerical radius with certificate, using explicit options.
pub fn numerical_radius_with(t: &ComplexMatrix, tol: f64, opts: &RadiusOptions) -> Result<RadiusCertificate> {
    let n = t.square_dim()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    if t.is_zero() {
        return Ok(RadiusCertificate {
            radius: 0.0,
            theta_star: 0.0,
            attaining_vector: ComplexVector::basis(n, 0),
            residual: 0.0,
        });
    }
    let (rot, peaks) = theta_peaks(t, opts);
    let best = &peaks[0];
    let eig = hermitian_eigen_unchecked(&rot.at(best.theta));
    let z = eig.vectors[0].clone();
    let q = t.quadratic_form(&z)?;
    let radius = eig.values[0].max(best.value);
    Ok(RadiusCertificate {
        radius,
        theta_star: best.theta,
        residual: (q.norm() - radius).abs(),
        attaining_vector: z,
    })
}

/// Numerical radius `w(A) = sup |⟨Ax, x⟩|` with default options.
pub fn numerical_radius(a: &ComplexMatrix, tol: f64) -> Result<RadiusCertificate> {
    numerical_radius_with(a, tol, &RadiusOptions::default())
}

/// `[[0, √(ρ(2-ρ))·A], [0, (1-ρ)·A]]`.
pub fn block_embed(a: &ComplexMatrix, rho: RhoParam) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    let (s, cc) = rho.block_coefficients();
    let zero = ComplexMatrix::zeros(n, n);
    ComplexMatrix::block2(&zero, &a.scale_real(s), &zero, &a.scale_real(cc))
}

/// `w_ρ(A)` value only, for objective evaluations inside optimizers.
pub fn rho_radius_value(a: &ComplexMatrix, rho: RhoParam, opts: &RadiusOptions) -> Result<f64> {
    if a.is_zero() {
        a.square_dim()?;
        return Ok(0.0);
    }
    Ok(rho.scale() * numerical_radius_value(&block_embed(a, rho)?, opts)?)
}

/// `w_ρ(A)` with certificate; the attaining vector is the stacked `[x; y]`
/// in dimension `2n` and `radius`/`residual` are scaled by `2/ρ`.
pub fn rho_radius_with(a: &ComplexMatrix, rho: RhoParam, tol: f64, opts: &RadiusOptions) -> Result<RadiusCertificate> {
    let t = block_embed(a, rho)?;
    let cert = numerical_radius_with(&t, tol, opts)?;
    Ok(RadiusCertificate {
        radius: rho.scale() * cert.radius,
        residual: rho.scale() * cert.residual,
        ..cert
    })
}

/// `w_ρ(A)` with default options.
pub fn rho_radius(a: &ComplexMatrix, rho: RhoParam, tol: f64) -> Result<RadiusCertificate> {
    rho_radius_with(a, rho, tol, &RadiusOptions::default())
}

/// Top eigenspace of the rotated Hermitian part at one maximizing angle.
#[derive(Clone, Debug)]
pub struct AttainingSpace {
    pub theta: f64,
    /// Largest eigenvalue at `theta` (a value of `w(T)`, unscaled).
    pub value: f64,
    /// Orthonormal basis of the top eigenspace, vectors of dimension `2n`.
    pub basis: Vec<ComplexVector>,
}

/// All near-maximal angles of `T = block_embed(A, ρ)` with their top
/// eigenspaces. Plateau peaks contribute several sample angles.
pub fn attaining_spaces(
    a: &ComplexMatrix,
    rho: RhoParam,
    tol: f64,
    opts: &RadiusOptions,
) -> Result<Vec<AttainingSpace>> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix("attaining_vectors".into()));
    }
    let t = block_embed(a, rho)?;
    attaining_spaces_of(&t, tol / rho.scale(), opts)
}

/// Same as [`attaining_spaces`] for an arbitrary square `T` with an
/// unscaled tolerance.
pub fn attaining_spaces_of(t: &ComplexMatrix, tol: f64, opts: &RadiusOptions) -> Result<Vec<AttainingSpace>> {
    t.square_dim()?;
    let (rot, peaks) = theta_peaks(t, opts);
    let top = peaks[0].value;
    let mut thetas: Vec<f64> = Vec::new();
    for p in peaks.iter().filter(|p| p.value >= top - tol) {
        thetas.push(p.theta);
        thetas.extend(p.plateau.iter().copied());
    }
    let mut spaces = Vec::with_capacity(thetas.len());
    for theta in thetas {
        let eig = hermitian_eigen_unchecked(&rot.at(theta));
        if eig.values[0] < top - tol {
            continue;
        }
        let gap = opts.degeneracy_tol * eig.values[0].abs().max(1.0);
        spaces.push(AttainingSpace {
            theta,
            value: eig.values[0],
            basis: eig.top_eigenspace(gap),
        });
    }
    Ok(spaces)
}

/// Every near-maximal angle paired with each basis vector of its top
/// eigenspace, flattened.
pub fn attaining_vectors(a: &ComplexMatrix, rho: RhoParam, tol: f64) -> Result<Vec<(f64, ComplexVector)>> {
    let spaces = attaining_spaces(a, rho, tol, &RadiusOptions::default())?;
    Ok(spaces
        .into_iter()
        .flat_map(|s| {
            let theta = s.theta;
            s.basis.into_iter().map(move |z| (theta, z))
        })
        .collect())
}
