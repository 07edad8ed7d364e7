//! `w_ρ`-Birkhoff–James orthogonality and `w_ρ`-parallelism.
//!
//! `A ⊥ B` when `w_ρ(A + γB) ≥ w_ρ(A)` for every complex `γ`, and `A ∥ B`
//! when `w_ρ(A + λB) = w_ρ(A) + w_ρ(B)` for some unimodular `λ`. Both are
//! decided numerically (convex minimization over `γ`, periodic maximization
//! over `λ = e^{it}`) and then certified by witness vectors `z = [x; y]`
//! taken from the attaining eigenspaces of the block embedding.
//!
//! Notation shared by the witness conditions: with
//! `v = √(ρ(2-ρ))·x + (1-ρ)·y` and `u = (2/ρ)·v`,
//! `⟨Tz, z⟩ = ⟨Ay, v⟩` for `T = block_embed(A, ρ)`, so `|⟨Ay, u⟩| = w_ρ(A)`
//! says that `z` attains `w_ρ(A)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, cis, dot, hermitian_eigen_unchecked, max_singular_subspace, operator_norm, ComplexMatrix, ComplexScalar,
    ComplexVector, SINGULAR_SUBSPACE_TOL,
};
use crate::optim::{maximize_periodic, nelder_mead_2d, wrap_angle, PeriodicSearch, Refinement};
use crate::par;
use crate::radius::{
    attaining_spaces_of, block_embed, numerical_radius_with, rho_radius_value, AttainingSpace, RadiusOptions, RhoParam,
};

/// Number of equispaced sign-condition angles checked by default.
pub const DEFAULT_THETA_SAMPLES: usize = 16;

/// Default residual bound for witness vectors.
pub const DEFAULT_WITNESS_TOL: f64 = 1e-6;

/// Default decision tolerance `1e-7·max(1, reference)`, where the reference
/// is `w_ρ(A)` for orthogonality and `w_ρ(A) + w_ρ(B)` for parallelism.
pub fn default_tolerance(reference: f64) -> f64 {
    1e-7 * reference.abs().max(1.0)
}

/// Tuning of the deciders and witness searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryOptions {
    /// Radius evaluation inside the γ- and λ-optimizers.
    pub objective: RadiusOptions,
    /// Radius evaluation for attaining eigenspaces used by witnesses.
    pub witness: RadiusOptions,
    /// Sign-condition angles for orthogonality witnesses.
    pub theta_samples: usize,
    /// Residual bound for witness vectors.
    pub witness_tol: f64,
    /// Side of the square start grid over the γ-disk.
    pub gamma_grid: usize,
    /// Nelder–Mead stops once the simplex diameter is below this.
    pub simplex_tol: f64,
    /// Evaluation budget of the γ-minimizer.
    pub max_evaluations: usize,
    /// Grid size for the λ-maximization over the unit circle.
    pub lambda_grid: usize,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        Self {
            objective: RadiusOptions::fast(),
            witness: RadiusOptions::default(),
            theta_samples: DEFAULT_THETA_SAMPLES,
            witness_tol: DEFAULT_WITNESS_TOL,
            gamma_grid: 5,
            simplex_tol: 1e-10,
            max_evaluations: 4000,
            lambda_grid: 360,
        }
    }
}

/// Which operand, if any, is the zero matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    None,
    ZeroA,
    ZeroB,
    BothZero,
}

impl Degeneracy {
    fn of(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        match (a.is_zero(), b.is_zero()) {
            (false, false) => Self::None,
            (true, false) => Self::ZeroA,
            (false, true) => Self::ZeroB,
            (true, true) => Self::BothZero,
        }
    }
}

/// A witness vector `z = [x; y]` with its two residuals.
///
/// For orthogonality, `attainment_residual = ||⟨Ay, u⟩| - w_ρ(A)|` and
/// `sign_or_product_residual = max(0, -Re(e^{iθ}⟨v, Ay⟩⟨By, v⟩))`.
/// For parallelism, `attainment_residual` is the larger of the deficits
/// `||⟨Ay, u⟩| - w_ρ(A)|`, `||⟨By, u⟩| - w_ρ(B)|` and
/// `sign_or_product_residual = ||⟨Ay, u⟩⟨By, u⟩| - w_ρ(A)w_ρ(B)|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
    pub x: ComplexVector,
    pub y: ComplexVector,
    pub attainment_residual: f64,
    pub sign_or_product_residual: f64,
}

impl WitnessRecord {
    /// Residuals of the orthogonality conditions recomputed from `x`, `y`
    /// by inner products alone.
    pub fn recheck_orthogonality(
        &self,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        rho: RhoParam,
        base_radius: f64,
    ) -> Result<(f64, f64)> {
        let theta = self.theta.unwrap_or(0.0);
        orthogonality_residuals(a, b, rho, base_radius, theta, &self.x, &self.y)
    }

    /// Residuals of the parallelism conditions recomputed from `x`, `y`.
    pub fn recheck_parallelism(
        &self,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        rho: RhoParam,
        radius_a: f64,
        radius_b: f64,
    ) -> Result<(f64, f64)> {
        parallelism_residuals(a, b, rho, radius_a, radius_b, &self.x, &self.y)
    }

    /// Whether `‖x‖² + ‖y‖² ≤ 1 + 1e-12`.
    pub fn in_unit_ball(&self) -> bool {
        self.x.norm_sqr() + self.y.norm_sqr() <= 1.0 + 1e-12
    }
}

/// Best candidate of an unsuccessful witness search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFailure {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
    pub attainment_residual: f64,
    pub sign_or_product_residual: f64,
    /// Candidates examined.
    pub candidates: usize,
    /// Whether the attaining set had several angles or a multi-dimensional
    /// top eigenspace.
    pub degenerate_eigenspace: bool,
}

/// Result of a witness search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found(WitnessRecord),
    NotFound(WitnessFailure),
}

impl WitnessOutcome {
    pub fn record(&self) -> Option<&WitnessRecord> {
        match self {
            Self::Found(r) => Some(r),
            Self::NotFound(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

/// Decision on `A ⊥_{w_ρ} B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    pub rho: RhoParam,
    /// `w_ρ(A)`.
    pub base_radius: f64,
    /// `min_γ w_ρ(A + γB)` as found by the minimizer.
    pub min_value: f64,
    pub gamma_star: ComplexScalar,
    pub witnesses: Vec<WitnessRecord>,
    /// Sign-condition angles where no witness met the residual bound.
    pub witness_failures: Vec<WitnessFailure>,
    pub tolerance: f64,
    pub degeneracy: Degeneracy,
    /// Objective evaluations spent by the minimizer.
    pub evaluations: usize,
}

/// Decision on `A ∥_{w_ρ} B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelismReport {
    pub parallel: bool,
    pub rho: RhoParam,
    pub radius_a: f64,
    pub radius_b: f64,
    /// `w_ρ(A) + w_ρ(B)`.
    pub sum_radius: f64,
    /// `max_{|λ|=1} w_ρ(A + λB)` as found by the maximizer.
    pub max_value: f64,
    pub lambda_star: ComplexScalar,
    pub witnesses: Vec<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_failure: Option<WitnessFailure>,
    pub tolerance: f64,
    pub degeneracy: Degeneracy,
}

/// Operator-norm special cases: a vector `z` and the residual it reaches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormCheck {
    pub found: bool,
    pub z: Option<ComplexVector>,
    pub residual: f64,
}

fn check_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<usize> {
    let n = a.square_dim()?;
    let m = b.square_dim()?;
    if n != m {
        return Err(Error::DimensionMismatch(format!("A is {n}x{n} but B is {m}x{m}")));
    }
    Ok(n)
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive and finite"
        )))
    }
}

/// `u = √((8-4ρ)/ρ)·x + ((2-2ρ)/ρ)·y`.
pub fn scaled_witness_vector(x: &ComplexVector, y: &ComplexVector, rho: RhoParam) -> Result<ComplexVector> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "x has dimension {} but y has {}",
            x.dim(),
            y.dim()
        )));
    }
    let (p, q) = rho.witness_coefficients();
    Ok(x.scale_real(p).axpy(c(q, 0.0), y))
}

/// `v = √(ρ(2-ρ))·x + (1-ρ)·y`, so that `u = (2/ρ)·v`.
fn block_witness_vector(x: &ComplexVector, y: &ComplexVector, rho: RhoParam) -> ComplexVector {
    let (s, cc) = rho.block_coefficients();
    x.scale_real(s).axpy(c(cc, 0.0), y)
}

fn orthogonality_residuals(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    base_radius: f64,
    theta: f64,
    x: &ComplexVector,
    y: &ComplexVector,
) -> Result<(f64, f64)> {
    let u = scaled_witness_vector(x, y, rho)?;
    let v = block_witness_vector(x, y, rho);
    let ay = a.mul_vec(y)?;
    let by = b.mul_vec(y)?;
    let attain = (dot(ay.as_slice(), u.as_slice()).norm() - base_radius).abs();
    let sign = cis(theta) * dot(v.as_slice(), ay.as_slice()) * dot(by.as_slice(), v.as_slice());
    Ok((attain, (-sign.re).max(0.0)))
}

fn parallelism_residuals(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    radius_a: f64,
    radius_b: f64,
    x: &ComplexVector,
    y: &ComplexVector,
) -> Result<(f64, f64)> {
    let u = scaled_witness_vector(x, y, rho)?;
    let pa = dot(a.mul_vec(y)?.as_slice(), u.as_slice()).norm();
    let pb = dot(b.mul_vec(y)?.as_slice(), u.as_slice()).norm();
    let attain = (pa - radius_a).abs().max((pb - radius_b).abs());
    Ok((attain, (pa * pb - radius_a * radius_b).abs()))
}

/// Candidate vectors of one attaining eigenspace in search order: basis
/// vectors, then pairwise combinations `cos α·b_i + sin α·e^{iβ}·b_j` on a
/// 16-point phase/weight grid.
fn eigenspace_candidates(space: &AttainingSpace) -> Vec<ComplexVector> {
    const WEIGHTS: [f64; 4] = [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, 7.0 * PI / 16.0];
    const PHASES: [f64; 4] = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
    let basis = &space.basis;
    let mut out: Vec<ComplexVector> = basis.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for &alpha in &WEIGHTS {
                for &beta in &PHASES {
                    let z = basis[i]
                        .scale_real(alpha.cos())
                        .axpy(cis(beta) * alpha.sin(), &basis[j]);
                    if let Some(z) = z.normalized() {
                        out.push(z);
                    }
                }
            }
        }
    }
    out
}

/// Unit vector of the eigenspace maximizing `Re(e^{iφ}⟨Sz, z⟩)` for a
/// square `S`, found as the top eigenvector of the compression of the
/// Hermitian part of `e^{iφ}S` to the eigenspace.
fn best_in_space(space: &AttainingSpace, s: &ComplexMatrix, phi: f64) -> Option<ComplexVector> {
    let k = space.basis.len();
    let rot = cis(phi);
    let images: Vec<ComplexVector> = space.basis.iter().map(|v| s.mul_vec(v).expect("square")).collect();
    let mut h = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            // (V* S V)_{ij} = ⟨S v_j, v_i⟩
            let m_ij = dot(images[j].as_slice(), space.basis[i].as_slice());
            let m_ji = dot(images[i].as_slice(), space.basis[j].as_slice());
            h[(i, j)] = 0.5 * (rot * m_ij + (rot * m_ji).conj());
        }
    }
    let eig = hermitian_eigen_unchecked(&h);
    let coeffs = eig.vectors[0].as_slice();
    let mut z = ComplexVector::zeros(space.basis[0].dim());
    for (cf, v) in coeffs.iter().zip(&space.basis) {
        z = z.axpy(*cf, v);
    }
    z.normalized()
}

fn is_degenerate(spaces: &[AttainingSpace]) -> bool {
    spaces.len() > 1 || spaces.iter().any(|s| s.basis.len() > 1)
}

/// Context shared by the orthogonality witness searches of one pair.
struct OrthogonalityWitnessContext<'a> {
    a: &'a ComplexMatrix,
    b: &'a ComplexMatrix,
    rho: RhoParam,
    base_radius: f64,
    spaces: Vec<AttainingSpace>,
    t_a: ComplexMatrix,
    t_b: ComplexMatrix,
}

impl<'a> OrthogonalityWitnessContext<'a> {
    fn new(a: &'a ComplexMatrix, b: &'a ComplexMatrix, rho: RhoParam, tol: f64, opts: &RadiusOptions) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroMatrix("find_orthogonality_witness needs A ≠ 0".into()));
        }
        let t_a = block_embed(a, rho)?;
        let t_b = block_embed(b, rho)?;
        let spaces = attaining_spaces_of(&t_a, tol / rho.scale(), opts)?;
        let base_radius = rho.scale() * spaces.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            a,
            b,
            rho,
            base_radius,
            spaces,
            t_a,
            t_b,
        })
    }

    fn search(&self, theta: f64, tol: f64) -> Result<WitnessOutcome> {
        let n = self.a.rows();
        let mut best: Option<(f64, f64)> = None;
        let mut count = 0;
        let mut try_z = |z: &ComplexVector| -> Result<Option<WitnessRecord>> {
            count += 1;
            let (x, y) = z.halves();
            let (att, sign) = orthogonality_residuals(self.a, self.b, self.rho, self.base_radius, theta, &x, &y)?;
            if att <= tol && sign <= tol {
                return Ok(Some(WitnessRecord {
                    theta: Some(theta),
                    x,
                    y,
                    attainment_residual: att,
                    sign_or_product_residual: sign,
                }));
            }
            if best.is_none_or(|(ba, bs)| att.max(sign) < ba.max(bs)) {
                best = Some((att, sign));
            }
            Ok(None)
        };
        for space in &self.spaces {
            for z in eigenspace_candidates(space) {
                if let Some(r) = try_z(&z)? {
                    return Ok(WitnessOutcome::Found(r));
                }
            }
        }
        // The sign term is Re(e^{iθ}·conj⟨T_A z, z⟩·⟨T_B z, z⟩); on one
        // eigenspace ⟨T_A z, z⟩ has a fixed phase, so the best z there is a
        // top eigenvector of a compressed Hermitian part.
        for space in &self.spaces {
            let qa = self.t_a.quadratic_form(&space.basis[0])?;
            let phi = theta - qa.arg();
            if let Some(z) = best_in_space(space, &self.t_b, phi) {
                if let Some(r) = try_z(&z)? {
                    return Ok(WitnessOutcome::Found(r));
                }
            }
        }
        let (att, sign) = best.unwrap_or((f64::INFINITY, f64::INFINITY));
        debug_assert_eq!(n * 2, self.t_a.rows());
        Ok(WitnessOutcome::NotFound(WitnessFailure {
            theta: Some(theta),
            attainment_residual: att,
            sign_or_product_residual: sign,
            candidates: count,
            degenerate_eigenspace: is_degenerate(&self.spaces),
        }))
    }
}

/// Searches the attaining vectors of `block_embed(A, ρ)` for `z = [x; y]`
/// with `|⟨Ay, u⟩| = w_ρ(A)` and `Re(e^{iθ}⟨v, Ay⟩⟨By, v⟩) ≥ 0`, both within
/// `tol`. Basis vectors come first, then the combination grid, then the
/// optimal vector of each eigenspace for this θ.
pub fn find_orthogonality_witness(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    theta: f64,
    tol: f64,
) -> Result<WitnessOutcome> {
    check_pair(a, b)?;
    let tol = check_tol(tol)?;
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta".into()));
    }
    let ctx = OrthogonalityWitnessContext::new(a, b, rho, tol, &RadiusOptions::default())?;
    ctx.search(wrap_angle(theta), tol)
}

/// Minimizes `γ ↦ w_ρ(A + γB)` and decides `A ⊥_{w_ρ} B` with default
/// options. `tol = None` selects [`default_tolerance`] of `w_ρ(A)`.
pub fn is_orthogonal(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    tol: Option<f64>,
) -> Result<OrthogonalityReport> {
    is_orthogonal_with(a, b, rho, tol, &GeometryOptions::default())
}

/// [`is_orthogonal`] with explicit options.
pub fn is_orthogonal_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    tol: Option<f64>,
    opts: &GeometryOptions,
) -> Result<OrthogonalityReport> {
    let n = check_pair(a, b)?;
    let degeneracy = Degeneracy::of(a, b);
    let base_radius = rho_radius_value(a, rho, &opts.objective)?;
    let tolerance = check_tol(tol.unwrap_or_else(|| default_tolerance(base_radius)))?;

    let (min_value, gamma_star, evaluations) = match degeneracy {
        Degeneracy::None => minimize_gamma(a, b, rho, base_radius, opts)?,
        _ => (base_radius, c(0.0, 0.0), 0),
    };
    let min_value = min_value.min(base_radius);
    let orthogonal = min_value >= base_radius - tolerance;

    let mut witnesses = Vec::new();
    let mut witness_failures = Vec::new();
    if orthogonal && !a.is_zero() {
        let ctx = OrthogonalityWitnessContext::new(a, b, rho, opts.witness_tol, &opts.witness)?;
        let k = opts.theta_samples.max(1);
        let outcomes = par::map_range(k, |j| ctx.search(2.0 * PI * j as f64 / k as f64, opts.witness_tol));
        for outcome in outcomes {
            match outcome? {
                WitnessOutcome::Found(r) => witnesses.push(r),
                WitnessOutcome::NotFound(f) => witness_failures.push(f),
            }
        }
    }
    debug_assert!(witnesses.iter().all(|w| w.x.dim() == n));
    Ok(OrthogonalityReport {
        orthogonal,
        rho,
        base_radius,
        min_value,
        gamma_star,
        witnesses,
        witness_failures,
        tolerance,
        degeneracy,
        evaluations,
    })
}

/// Grid start plus restarted Nelder–Mead on the disk `|γ| ≤ 2w_ρ(A)/w_ρ(B)`;
/// outside it `w_ρ(A + γB) ≥ |γ|w_ρ(B) - w_ρ(A) > w_ρ(A)`.
fn minimize_gamma(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    base_radius: f64,
    opts: &GeometryOptions,
) -> Result<(f64, ComplexScalar, usize)> {
    let radius_b = rho_radius_value(b, rho, &opts.objective)?;
    let bound = 2.0 * base_radius / radius_b;
    let objective = |g: [f64; 2]| -> f64 {
        let m = a.add_scaled(c(g[0], g[1]), b).expect("same shape");
        rho_radius_value(&m, rho, &opts.objective).expect("square")
    };
    let side = opts.gamma_grid.max(2);
    let points: Vec<[f64; 2]> = (0..side * side)
        .map(|k| {
            let (i, j) = (k / side, k % side);
            let t = |m: usize| -bound + 2.0 * bound * m as f64 / (side - 1) as f64;
            [t(i), t(j)]
        })
        .filter(|p| p[0].hypot(p[1]) <= bound * (1.0 + 1e-12))
        .chain(std::iter::once([0.0, 0.0]))
        .collect();
    let values = par::map_slice(&points, |p| objective(*p));
    let (start, start_value) =
        points.iter().zip(&values).fold(
            ([0.0, 0.0], f64::INFINITY),
            |acc, (p, &v)| if v < acc.1 { (*p, v) } else { acc },
        );
    let step = (bound / (side - 1) as f64).max(opts.simplex_tol * 10.0);
    let run = nelder_mead_2d(objective, start, step, opts.simplex_tol, opts.max_evaluations);
    let (point, value) = if run.value <= start_value {
        (run.point, run.value)
    } else {
        (start, start_value)
    };
    Ok((value, c(point[0], point[1]), points.len() + run.evaluations))
}

/// Maximizer of `t ↦ w_ρ(A + e^{it}B)`: grid scan refined wherever the grid
/// is within the Lipschitz margin `w_ρ(B)·h/2` of its maximum.
fn maximize_lambda(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    radius_b: f64,
    opts: &GeometryOptions,
) -> (f64, f64) {
    let grid = opts.lambda_grid.max(3);
    let h = 2.0 * PI / grid as f64;
    let search = PeriodicSearch {
        grid_points: grid,
        margin: radius_b * h / 2.0,
        rel_margin: 0.0,
        width_tol: 1e-10,
        flat_tol: 1e-11,
        refinement: Refinement::Brent,
    };
    let objective = |t: f64| {
        let m = a.add_scaled(cis(t), b).expect("same shape");
        rho_radius_value(&m, rho, &opts.objective).expect("square")
    };
    let peaks = maximize_periodic(objective, &search);
    (peaks[0].theta, peaks[0].value)
}

/// Maximizes `w_ρ(A + λB)` over `|λ| = 1` and decides `A ∥_{w_ρ} B` with
/// default options. `tol = None` selects [`default_tolerance`] of
/// `w_ρ(A) + w_ρ(B)`.
pub fn is_parallel(a: &ComplexMatrix, b: &ComplexMatrix, rho: RhoParam, tol: Option<f64>) -> Result<ParallelismReport> {
    is_parallel_with(a, b, rho, tol, &GeometryOptions::default())
}

/// [`is_parallel`] with explicit options.
pub fn is_parallel_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    tol: Option<f64>,
    opts: &GeometryOptions,
) -> Result<ParallelismReport> {
    check_pair(a, b)?;
    let degeneracy = Degeneracy::of(a, b);
    let radius_a = rho_radius_value(a, rho, &opts.objective)?;
    let radius_b = rho_radius_value(b, rho, &opts.objective)?;
    let sum_radius = radius_a + radius_b;
    let tolerance = check_tol(tol.unwrap_or_else(|| default_tolerance(sum_radius)))?;

    if degeneracy != Degeneracy::None {
        return Ok(ParallelismReport {
            parallel: true,
            rho,
            radius_a,
            radius_b,
            sum_radius,
            max_value: sum_radius,
            lambda_star: c(1.0, 0.0),
            witnesses: Vec::new(),
            witness_failure: None,
            tolerance,
            degeneracy,
        });
    }
    let (t_star, max_value) = maximize_lambda(a, b, rho, radius_b, opts);
    let lambda_star = cis(t_star);
    let parallel = max_value >= sum_radius - tolerance;
    let mut witnesses = Vec::new();
    let mut witness_failure = None;
    if parallel {
        match parallelism_witness_at(
            a,
            b,
            rho,
            lambda_star,
            radius_a,
            radius_b,
            opts.witness_tol,
            &opts.witness,
        )? {
            WitnessOutcome::Found(r) => witnesses.push(r),
            WitnessOutcome::NotFound(f) => witness_failure = Some(f),
        }
    }
    Ok(ParallelismReport {
        parallel,
        rho,
        radius_a,
        radius_b,
        sum_radius,
        max_value,
        lambda_star,
        witnesses,
        witness_failure,
        tolerance,
        degeneracy,
    })
}

#[allow(clippy::too_many_arguments)]
fn parallelism_witness_at(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    lambda: ComplexScalar,
    radius_a: f64,
    radius_b: f64,
    tol: f64,
    opts: &RadiusOptions,
) -> Result<WitnessOutcome> {
    let sum = a.add_scaled(lambda, b)?;
    let t = block_embed(&sum, rho)?;
    let spaces = attaining_spaces_of(&t, tol / rho.scale(), opts)?;
    let mut best: Option<(f64, f64)> = None;
    let mut count = 0;
    for space in &spaces {
        for z in eigenspace_candidates(space) {
            count += 1;
            let (x, y) = z.halves();
            let (att, prod) = parallelism_residuals(a, b, rho, radius_a, radius_b, &x, &y)?;
            if prod <= tol {
                return Ok(WitnessOutcome::Found(WitnessRecord {
                    theta: None,
                    x,
                    y,
                    attainment_residual: att,
                    sign_or_product_residual: prod,
                }));
            }
            if best.is_none_or(|(_, bp)| prod < bp) {
                best = Some((att, prod));
            }
        }
    }
    let (att, prod) = best.unwrap_or((f64::INFINITY, f64::INFINITY));
    Ok(WitnessOutcome::NotFound(WitnessFailure {
        theta: None,
        attainment_residual: att,
        sign_or_product_residual: prod,
        candidates: count,
        degenerate_eigenspace: is_degenerate(&spaces),
    }))
}

/// Searches attaining vectors of `block_embed(A + λ*B, ρ)`, with `λ*` the
/// maximizer of `w_ρ(A + λB)`, for `z` with
/// `|⟨Ay, u⟩⟨By, u⟩| = w_ρ(A)w_ρ(B)` within `tol`.
pub fn find_parallelism_witness(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    tol: f64,
) -> Result<WitnessOutcome> {
    check_pair(a, b)?;
    let tol = check_tol(tol)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroMatrix(
            "find_parallelism_witness needs A ≠ 0 and B ≠ 0".into(),
        ));
    }
    let opts = GeometryOptions::default();
    let radius_a = rho_radius_value(a, rho, &opts.objective)?;
    let radius_b = rho_radius_value(b, rho, &opts.objective)?;
    let (t_star, _) = maximize_lambda(a, b, rho, radius_b, &opts);
    parallelism_witness_at(a, b, rho, cis(t_star), radius_a, radius_b, tol, &opts.witness)
}

/// Looks for a unit `z` in the maximal singular subspace of `A` with
/// `⟨Az, Bz⟩ = 0`, i.e. operator-norm orthogonality `A ⊥ B`.
///
/// With `V` an orthonormal basis of that subspace, `⟨Az, Bz⟩ = ⟨Mc, c⟩` for
/// `z = Vc` and `M = V*B*AV`, so the question is whether `0` lies in the
/// numerical range of `M`. Its distance to `0` is
/// `max(0, -min_φ λ_max(Re(e^{iφ}M)))`; when it vanishes a zero of the
/// quadratic form is built from boundary points of the range by the
/// two-vector reduction behind the Toeplitz–Hausdorff theorem.
/// `found` means `|⟨Az, Bz⟩| ≤ tol·‖A‖‖B‖`.
pub fn bhatia_semrl_check(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<NormCheck> {
    check_pair(a, b)?;
    let tol = check_tol(tol)?;
    let basis = max_singular_subspace(a, SINGULAR_SUBSPACE_TOL)?;
    if b.is_zero() {
        return Ok(NormCheck {
            found: true,
            z: Some(basis[0].clone()),
            residual: 0.0,
        });
    }
    let scale = operator_norm(a) * operator_norm(b);
    let k = basis.len();
    let az: Vec<ComplexVector> = basis.iter().map(|v| a.mul_vec(v)).collect::<Result<_>>()?;
    let bz: Vec<ComplexVector> = basis.iter().map(|v| b.mul_vec(v)).collect::<Result<_>>()?;
    let mut m = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = dot(az[j].as_slice(), bz[i].as_slice());
        }
    }
    let coeffs = zero_of_quadratic_form(&m);
    let mut z = ComplexVector::zeros(a.rows());
    for (cf, v) in coeffs.as_slice().iter().zip(&basis) {
        z = z.axpy(*cf, v);
    }
    let z = z.normalized().unwrap_or_else(|| basis[0].clone());
    let value = dot(a.mul_vec(&z)?.as_slice(), b.mul_vec(&z)?.as_slice()).norm();
    Ok(NormCheck {
        found: value <= tol * scale,
        z: Some(z),
        residual: value,
    })
}

/// Unit `c` minimizing `|⟨Mc, c⟩|`: an exact zero when `0` is in the
/// numerical range of `M`, otherwise the boundary point nearest `0`.
fn zero_of_quadratic_form(m: &ComplexMatrix) -> ComplexVector {
    let k = m.rows();
    if k == 1 {
        return ComplexVector::basis(1, 0);
    }
    let top = |phi: f64| -> (f64, ComplexVector) {
        let eig = hermitian_eigen_unchecked(&m.rotated_hermitian_part(phi));
        (eig.values[0], eig.vectors[0].clone())
    };
    let value = |v: &ComplexVector| m.quadratic_form(v).expect("square");

    // Support function minimum: the nearest boundary point to 0.
    let search = PeriodicSearch {
        grid_points: 256,
        margin: 0.0,
        rel_margin: 1e-3,
        width_tol: 1e-13,
        flat_tol: 1e-13,
        refinement: Refinement::Brent,
    };
    let peaks = maximize_periodic(|phi| -top(phi).0, &search);
    let (support_min, nearest) = top(peaks[0].theta);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    if support_min < -1e-13 * scale {
        return nearest;
    }

    // 0 is in the range: sample boundary points and look for a segment or a
    // fan triangle of the sampled polygon that contains it.
    let samples = 256;
    let mut pts: Vec<(ComplexScalar, ComplexVector)> = (0..samples)
        .map(|j| {
            let (_, v) = top(2.0 * PI * j as f64 / samples as f64);
            (value(&v), v)
        })
        .collect();
    pts.push((value(&nearest), nearest.clone()));
    let mut best = pts
        .iter()
        .min_by(|p, q| p.0.norm().total_cmp(&q.0.norm()))
        .map(|p| p.1.clone())
        .expect("samples");
    let mut best_norm = value(&best).norm();
    // Keeps the better candidate and returns the incumbent residual.
    let mut consider = |v: Option<ComplexVector>| -> f64 {
        if let Some(v) = v {
            let r = value(&v).norm();
            if r < best_norm {
                best_norm = r;
                best = v;
            }
        }
        best_norm
    };
    let cross = |p: ComplexScalar, q: ComplexScalar| p.re * q.im - p.im * q.re;
    let eps = 1e-12 * scale;

    let p0 = pts[0].0;
    for j in 1..pts.len() - 1 {
        let (p1, p2) = (pts[j].0, pts[j + 1].0);
        let d1 = cross(p1 - p0, -p0);
        let d2 = cross(p2 - p1, -p1);
        let d3 = cross(p0 - p2, -p2);
        let has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
        let has_pos = d1 > eps || d2 > eps || d3 > eps;
        if has_neg && has_pos {
            continue;
        }
        // Point q on [p1, p2] collinear with p0 and 0, then 0 on [p0, q].
        let denom = cross(p0, p2 - p1);
        if denom.abs() <= eps * scale {
            continue;
        }
        let s = (-cross(p0, p1) / denom).clamp(0.0, 1.0);
        let q = p1 + (p2 - p1) * s;
        if let Some(r) = segment_point(m, &pts[j].1, &pts[j + 1].1, q) {
            if consider(segment_point(m, &pts[0].1, &r, c(0.0, 0.0))) <= eps {
                break;
            }
        }
    }
    // Degenerate (segment-shaped) ranges: 0 between two sampled points.
    if consider(None) <= eps {
        return best;
    }
    'pairs: for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (p, q) = (pts[i].0, pts[j].0);
            if cross(p, q).abs() <= eps * scale
                && (p.re * q.re + p.im * q.im) <= 0.0
                && consider(segment_point(m, &pts[i].1, &pts[j].1, c(0.0, 0.0))) <= eps
            {
                break 'pairs;
            }
        }
    }
    best
}

/// Given unit `p`, `q` with `⟨Mp, p⟩ = w1`, `⟨Mq, q⟩ = w2` and `target` on
/// the segment `[w1, w2]`, a unit `c` in their span with
/// `⟨Mc, c⟩ = target`.
fn segment_point(
    m: &ComplexMatrix,
    p: &ComplexVector,
    q: &ComplexVector,
    target: ComplexScalar,
) -> Option<ComplexVector> {
    let shifted = |v: &ComplexVector| m.quadratic_form(v).expect("square") - target * v.norm_sqr();
    let n1 = shifted(p);
    let n2 = shifted(q);
    if n1.norm() == 0.0 {
        return Some(p.clone());
    }
    if n2.norm() == 0.0 {
        return Some(q.clone());
    }
    // Rotate so that the value at p is real positive; the value at q is
    // then (nearly) real negative.
    let rot = cis(-n1.arg());
    let (r1, r2) = (n1.norm(), (rot * n2).re);
    if r2 >= 0.0 {
        return None;
    }
    let mq = m.mul_vec(q).ok()?;
    let mp = m.mul_vec(p).ok()?;
    // Cross terms of the shifted form ⟨(M - target)c, c⟩.
    let a = rot * (dot(mq.as_slice(), p.as_slice()) - target * dot(q.as_slice(), p.as_slice()));
    let b = rot * (dot(mp.as_slice(), q.as_slice()) - target * dot(p.as_slice(), q.as_slice()));
    let diff = a - b.conj();
    let psi = if diff.norm() > 0.0 { -diff.arg() } else { 0.0 };
    let beta = (cis(psi) * a + cis(-psi) * b).re;
    // r1 + β·t + r2·t² = 0 has exactly one positive root since r1·r2 < 0.
    let disc = (beta * beta - 4.0 * r1 * r2).max(0.0);
    let t = (-beta - disc.sqrt()) / (2.0 * r2);
    p.axpy(cis(psi) * t, q).normalized()
}

/// Looks for a unit `z` with `|⟨Az, Bz⟩| = ‖A‖‖B‖` within `tol`, i.e.
/// operator-norm parallelism `A ∥ B`. The global maximum of `|⟨Az, Bz⟩|` is
/// the numerical radius of `B*A`; maximal singular vectors of `A` and of
/// `B` are tried as well and the best candidate is kept.
pub fn norm_parallel_check(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<NormCheck> {
    check_pair(a, b)?;
    let tol = check_tol(tol)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroMatrix("norm_parallel_check needs A ≠ 0 and B ≠ 0".into()));
    }
    let target = operator_norm(a) * operator_norm(b);
    let mut candidates = max_singular_subspace(a, SINGULAR_SUBSPACE_TOL)?;
    candidates.extend(max_singular_subspace(b, SINGULAR_SUBSPACE_TOL)?);
    let bsa = b.adjoint().matmul(a)?;
    candidates.push(numerical_radius_with(&bsa, 1e-12, &RadiusOptions::default())?.attaining_vector);
    let mut best: Option<(f64, ComplexVector)> = None;
    for z in candidates {
        let value = dot(a.mul_vec(&z)?.as_slice(), b.mul_vec(&z)?.as_slice()).norm();
        let residual = (value - target).abs();
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, z));
        }
    }
    let (residual, z) = best.expect("nonempty candidates");
    Ok(NormCheck {
        found: residual <= tol,
        z: Some(z),
        residual,
    })
}

/// Drops `x` from a ρ = 2 witness: `y` alone satisfies the reduced
/// conditions `|⟨Ay, y⟩| = w(A)` and `Re(e^{iθ}⟨y, Ay⟩⟨By, y⟩) ≥ 0`.
fn reduce_orthogonality_witness(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    base: f64,
    w: &WitnessRecord,
) -> Result<WitnessRecord> {
    let y = w.y.normalized().unwrap_or_else(|| w.y.clone());
    let ay = a.mul_vec(&y)?;
    let by = b.mul_vec(&y)?;
    let q = dot(ay.as_slice(), y.as_slice());
    let sign = cis(w.theta.unwrap_or(0.0)) * dot(y.as_slice(), ay.as_slice()) * dot(by.as_slice(), y.as_slice());
    Ok(WitnessRecord {
        theta: w.theta,
        x: ComplexVector::zeros(y.dim()),
        attainment_residual: (q.norm() - base).abs(),
        sign_or_product_residual: (-sign.re).max(0.0),
        y,
    })
}

/// Numerical-radius orthogonality: [`is_orthogonal`] at ρ = 2 with
/// witnesses reported as a single vector `y` (and `x = 0`).
pub fn numerical_radius_orthogonal(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<OrthogonalityReport> {
    let mut report = is_orthogonal(a, b, RhoParam::TWO, tol)?;
    let base = report.base_radius;
    report.witnesses = report
        .witnesses
        .iter()
        .map(|w| reduce_orthogonality_witness(a, b, base, w))
        .collect::<Result<_>>()?;
    Ok(report)
}

/// Numerical-radius parallelism: [`is_parallel`] at ρ = 2 with the witness
/// reported as a single vector `y`.
pub fn numerical_radius_parallel(a: &ComplexMatrix, b: &ComplexMatrix, tol: Option<f64>) -> Result<ParallelismReport> {
    let mut report = is_parallel(a, b, RhoParam::TWO, tol)?;
    let (wa, wb) = (report.radius_a, report.radius_b);
    report.witnesses = report
        .witnesses
        .iter()
        .map(|w| {
            let y = w.y.normalized().unwrap_or_else(|| w.y.clone());
            let pa = dot(a.mul_vec(&y)?.as_slice(), y.as_slice()).norm();
            let pb = dot(b.mul_vec(&y)?.as_slice(), y.as_slice()).norm();
            Ok(WitnessRecord {
                theta: None,
                x: ComplexVector::zeros(y.dim()),
                attainment_residual: (pa - wa).abs().max((pb - wb).abs()),
                sign_or_product_residual: (pa * pb - wa * wb).abs(),
                y,
            })
        })
        .collect::<Result<_>>()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::diag_real(v)
    }

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    fn rho(v: f64) -> RhoParam {
        RhoParam::new(v).unwrap()
    }

    #[test]
    fn scaled_witness_vector_examples() {
        let x = ComplexVector::from_real(&[0.3, -1.0]).unwrap();
        let y = ComplexVector::new(vec![c(0.5, 2.0), c(-1.0, 0.25)]).unwrap();
        let u = scaled_witness_vector(&x, &y, RhoParam::TWO).unwrap();
        assert!(u.max_abs_diff(&y.scale_real(-1.0)) < 1e-15);
        let u = scaled_witness_vector(&x, &y, RhoParam::ONE).unwrap();
        assert!(u.max_abs_diff(&x.scale_real(2.0)) < 1e-15);
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        let u = scaled_witness_vector(&e1, &e2, rho(0.5)).unwrap();
        let want = ComplexVector::from_real(&[12f64.sqrt(), 2.0]).unwrap();
        assert!(u.max_abs_diff(&want) < 1e-14);
        assert!(scaled_witness_vector(&e1, &ComplexVector::basis(3, 0), rho(1.0)).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let r = is_orthogonal(&diag(&[1.0, -1.0]), &ComplexMatrix::identity(2), RhoParam::ONE, None).unwrap();
        assert!(r.orthogonal);
        assert!((r.min_value - 1.0).abs() < 1e-9);
        assert!(r.gamma_star.norm() < 1e-6);
        assert_eq!(r.witnesses.len(), DEFAULT_THETA_SAMPLES);

        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.5), c(0.2, 0.0)], vec![c(0.0, -1.0), c(0.3, 0.3)]]).unwrap();
        let r = is_orthogonal(&a, &ComplexMatrix::zeros(2, 2), rho(0.7), None).unwrap();
        assert!(r.orthogonal);
        assert_eq!(r.degeneracy, Degeneracy::ZeroB);
        assert_eq!(r.min_value, r.base_radius);
        assert!(r.witness_failures.is_empty());

        let r = is_orthogonal(&a, &a, rho(1.3), None).unwrap();
        assert!(!r.orthogonal);
        assert!((r.gamma_star - c(-1.0, 0.0)).norm() < 1e-6, "{:?}", r.gamma_star);
        assert!(r.min_value < 1e-8);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn orthogonality_rejects_mismatch() {
        let e = is_orthogonal(
            &ComplexMatrix::identity(2),
            &ComplexMatrix::identity(3),
            RhoParam::ONE,
            None,
        );
        assert!(matches!(e, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn orthogonality_witness_examples() {
        let a = diag(&[1.0, -1.0]);
        let id = ComplexMatrix::identity(2);
        let out = find_orthogonality_witness(&a, &id, RhoParam::TWO, 0.0, 1e-9).unwrap();
        let w = out.record().expect("found");
        assert!(w.attainment_residual <= 1e-9 && w.sign_or_product_residual <= 1e-9);
        for k in 0..8 {
            let theta = k as f64 * PI / 4.0;
            let out = find_orthogonality_witness(&a, &id, RhoParam::ONE, theta, 1e-6).unwrap();
            let w = out.record().expect("found");
            let (att, sign) = w.recheck_orthogonality(&a, &id, RhoParam::ONE, 1.0).unwrap();
            assert!(att <= 1e-6 && sign <= 1e-6);
            assert!(w.in_unit_ball());
        }
        let out = find_orthogonality_witness(&nilpotent(), &ComplexMatrix::zeros(2, 2), rho(0.4), 1.0, 1e-6).unwrap();
        assert_eq!(out.record().unwrap().sign_or_product_residual, 0.0);
        assert!(find_orthogonality_witness(&ComplexMatrix::zeros(2, 2), &a, RhoParam::ONE, 0.0, 1e-6).is_err());
    }

    #[test]
    fn parallelism_examples() {
        let a = diag(&[1.0, 0.0]).add_scaled(I, &diag(&[0.0, 1.0])).unwrap();
        let b = a.scale_real(2.0);
        let r = is_parallel(&a, &b, rho(0.6), None).unwrap();
        assert!(r.parallel);
        assert!((r.lambda_star - c(1.0, 0.0)).norm() < 1e-6);
        assert!(r.max_value <= r.sum_radius + 1e-9);
        assert_eq!(r.witnesses.len(), 1);

        let r = is_parallel(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), RhoParam::ONE, None).unwrap();
        assert!(!r.parallel);
        assert!((r.max_value - 1.0).abs() < 1e-9);

        let r = is_parallel(&diag(&[1.0, -1.0]), &ComplexMatrix::identity(2), RhoParam::ONE, None).unwrap();
        assert!(r.parallel);
        assert!((r.max_value - 2.0).abs() < 1e-7);
        assert!((r.lambda_star.re.abs() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn parallelism_witness_examples() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), I]);
        let out = find_parallelism_witness(&a, &a.scale_real(2.0), RhoParam::TWO, 1e-6).unwrap();
        let w = out.record().expect("found");
        let (_, prod) = w
            .recheck_parallelism(&a, &a.scale_real(2.0), RhoParam::TWO, 1.0, 2.0)
            .unwrap();
        assert!(prod < 1e-6);

        let id = ComplexMatrix::identity(2);
        let out = find_parallelism_witness(&diag(&[1.0, -1.0]), &id, RhoParam::ONE, 1e-6).unwrap();
        assert!(out.is_found());

        let out = find_parallelism_witness(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), RhoParam::ONE, 1e-6).unwrap();
        assert!(!out.is_found());
    }

    #[test]
    fn bhatia_semrl_examples() {
        let id = ComplexMatrix::identity(2);
        let r = bhatia_semrl_check(&diag(&[1.0, -1.0]), &id, 1e-9).unwrap();
        assert!(r.found, "{r:?}");
        let z = r.z.unwrap();
        assert!((z.as_slice()[0].norm() - z.as_slice()[1].norm()).abs() < 1e-9);

        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(0.5, 0.0), c(-1.0, 0.0)]]).unwrap();
        let r = bhatia_semrl_check(&a, &ComplexMatrix::zeros(2, 2), 1e-9).unwrap();
        assert!(r.found && r.residual == 0.0);

        let r = bhatia_semrl_check(&diag(&[2.0, 1.0]), &id, 1e-9).unwrap();
        assert!(!r.found);
        assert!((r.residual - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bhatia_semrl_on_interior_zero() {
        // Unitary A: every vector is maximal and M = B*A. With B = A·D for
        // D close to diag of the cube roots of unity, 0 lies strictly inside
        // the numerical range of M.
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), I, c(-1.0, 0.0)]);
        let w = cis(2.0 * PI / 3.0);
        let d = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.1, 0.05), c(0.0, 0.0)],
            vec![c(0.0, 0.02), w, c(0.05, 0.0)],
            vec![c(0.03, 0.0), c(0.0, 0.0), w * w],
        ])
        .unwrap();
        let b = a.matmul(&d).unwrap();
        let r = bhatia_semrl_check(&a, &b, 1e-9).unwrap();
        assert!(r.found, "{r:?}");
    }

    #[test]
    fn norm_parallel_examples() {
        let id = ComplexMatrix::identity(2);
        let r = norm_parallel_check(&diag(&[1.0, -1.0]), &id, 1e-9).unwrap();
        assert!(r.found);
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(0.5, 0.0), c(-1.0, 0.0)]]).unwrap();
        let r = norm_parallel_check(&a, &a.scale_real(2.0), 1e-9).unwrap();
        assert!(r.found, "{r:?}");
        let r = norm_parallel_check(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 1e-9).unwrap();
        assert!(!r.found);
        assert!((r.residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn numerical_radius_special_cases() {
        let r = numerical_radius_orthogonal(&diag(&[1.0, -1.0]), &ComplexMatrix::identity(2), None).unwrap();
        assert!(r.orthogonal);
        for w in &r.witnesses {
            assert_eq!(w.x.norm(), 0.0);
            assert!(w.attainment_residual < 1e-6 && w.sign_or_product_residual < 1e-6);
        }
        let b = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(numerical_radius_orthogonal(&nilpotent(), &b, None).unwrap().orthogonal);
        let a = diag(&[2.0, 0.5]);
        assert!(!numerical_radius_orthogonal(&a, &a, None).unwrap().orthogonal);
        let r = numerical_radius_parallel(&a, &a.scale_real(3.0), None).unwrap();
        assert!(r.parallel);
        assert!(r.witnesses[0].sign_or_product_residual < 1e-6);
    }
}
