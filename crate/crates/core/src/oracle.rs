//! Brute-force verifiers for the radius and geometry modules, plus the
//! seeded random generators used to drive them.
//!
//! The oracles trade speed for transparency: a polar grid over the γ-disk,
//! an equispaced grid over the unit circle, and random sampling of the unit
//! sphere with a monotone ascent. Each comes with an explicit resolution
//! bound derived from a Lipschitz constant, and [`cross_check`] compares an
//! oracle with the corresponding decider under that bound.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{is_orthogonal_with, is_parallel_with, GeometryOptions, OrthogonalityReport, ParallelismReport};
use crate::linalg::{
    c, cis, dot, max_singular_subspace, operator_norm, qr_unitary, ComplexMatrix, ComplexScalar, ComplexVector,
    SINGULAR_SUBSPACE_TOL,
};
use crate::par;
use crate::radius::{rho_radius_value, rho_radius_with, RadiusOptions, RhoParam, DEFAULT_RADIUS_TOL};

/// Default λ-grid size for [`grid_max_lambda`].
pub const DEFAULT_LAMBDA_POINTS: usize = 720;

/// Seed used by [`sphere_radius_estimate`].
pub const SPHERE_SEED: u64 = 0x5eed_0f5a_3b1e;

/// Polar grid over the disk `|γ| ≤ radius_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial_points: usize,
    pub angular_points: usize,
    /// `None` selects `2·w_ρ(A)/w_ρ(B)`.
    pub radius_bound: Option<f64>,
    /// Successive polar grids of a quarter of the size centred on the best
    /// point so far, each covering the previous cell. They can only lower
    /// the value; the resolution bound refers to the first grid.
    pub zoom_levels: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radial_points: 64,
            angular_points: 128,
            radius_bound: None,
            zoom_levels: 2,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_points == 0 || self.angular_points == 0 {
            return Err(Error::InvalidParameter(
                "grid needs at least one radial and one angular point".into(),
            ));
        }
        if let Some(r) = self.radius_bound {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "grid radius bound {r} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Largest distance from a point of the disk of radius `bound` to the
    /// nearest grid point.
    pub fn covering_radius(&self, bound: f64) -> f64 {
        let dr = bound / (2.0 * self.radial_points as f64);
        let arc = bound * (PI / self.angular_points as f64).min(2.0);
        dr.hypot(arc)
    }

    fn points(&self, center: ComplexScalar, bound: f64) -> Vec<ComplexScalar> {
        let mut pts = Vec::with_capacity(self.radial_points * self.angular_points + 1);
        pts.push(center);
        for i in 1..=self.radial_points {
            let r = bound * i as f64 / self.radial_points as f64;
            for j in 0..self.angular_points {
                pts.push(center + cis(2.0 * PI * j as f64 / self.angular_points as f64) * r);
            }
        }
        pts
    }
}

/// Minimum of `w_ρ(A + γB)` over a polar grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaGridMin {
    pub gamma: ComplexScalar,
    pub value: f64,
    /// `w_ρ(B)` times the covering radius of the first grid: the true
    /// minimum is at least `value - resolution`.
    pub resolution: f64,
    pub radius_bound: f64,
    pub evaluations: usize,
}

fn objective_options() -> RadiusOptions {
    RadiusOptions::fast()
}

/// `min_γ w_ρ(A + γB)` over the polar grid `grid`, as `(γ, value)`.
pub fn grid_min_gamma(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    grid: &GridSpec,
) -> Result<(ComplexScalar, f64)> {
    let r = grid_min_gamma_detailed(a, b, rho, grid)?;
    Ok((r.gamma, r.value))
}

/// [`grid_min_gamma`] with its resolution bound.
pub fn grid_min_gamma_detailed(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    grid: &GridSpec,
) -> Result<GammaGridMin> {
    grid.validate()?;
    a.check_same_shape(b)?;
    a.square_dim()?;
    if b.is_zero() {
        return Err(Error::ZeroMatrix("grid_min_gamma needs B ≠ 0".into()));
    }
    let opts = objective_options();
    let wa = rho_radius_value(a, rho, &opts)?;
    let wb = rho_radius_value(b, rho, &opts)?;
    let bound = grid.radius_bound.unwrap_or(if wa > 0.0 { 2.0 * wa / wb } else { 1.0 });
    let eval =
        |g: &ComplexScalar| rho_radius_value(&a.add_scaled(*g, b).expect("same shape"), rho, &opts).expect("square");

    let mut best = (c(0.0, 0.0), f64::INFINITY);
    let mut evaluations = 0;
    let mut level = *grid;
    let mut center = c(0.0, 0.0);
    let mut level_bound = bound;
    for zoom in 0..=grid.zoom_levels {
        let pts = level.points(center, level_bound);
        let values = par::map_slice(&pts, eval);
        evaluations += pts.len();
        for (g, v) in pts.iter().zip(values) {
            if v < best.1 {
                best = (*g, v);
            }
        }
        if zoom == grid.zoom_levels {
            break;
        }
        level_bound = 2.0 * level.covering_radius(level_bound);
        center = best.0;
        level.radial_points = (grid.radial_points / 4).max(4);
        level.angular_points = (grid.angular_points / 4).max(8);
    }
    Ok(GammaGridMin {
        gamma: best.0,
        value: best.1,
        resolution: wb * grid.covering_radius(bound),
        radius_bound: bound,
        evaluations,
    })
}

/// `max_{|λ|=1} w_ρ(A + λB)` over `angular_points` equispaced `λ`, as
/// `(λ, value)`. The true maximum exceeds the grid value by at most
/// `w_ρ(B)·π/angular_points`.
pub fn grid_max_lambda(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    angular_points: usize,
) -> Result<(ComplexScalar, f64)> {
    a.check_same_shape(b)?;
    a.square_dim()?;
    if angular_points == 0 {
        return Err(Error::InvalidParameter("angular_points must be positive".into()));
    }
    let opts = objective_options();
    let lambdas: Vec<ComplexScalar> = (0..angular_points)
        .map(|j| cis(2.0 * PI * j as f64 / angular_points as f64))
        .collect();
    let values = par::map_slice(&lambdas, |l| {
        rho_radius_value(&a.add_scaled(*l, b).expect("same shape"), rho, &opts).expect("square")
    });
    let (mut best_l, mut best_v) = (lambdas[0], values[0]);
    for (l, v) in lambdas.iter().zip(values) {
        if v > best_v {
            best_l = *l;
            best_v = v;
        }
    }
    Ok((best_l, best_v))
}

/// Lower bound on `w(T)` by sampling: see [`sphere_radius_estimate_seeded`].
pub fn sphere_radius_estimate(t: &ComplexMatrix, samples: usize, refine_steps: usize) -> Result<f64> {
    sphere_radius_estimate_seeded(t, samples, refine_steps, SPHERE_SEED)
}

/// Max of `|⟨Tz, z⟩|` over `samples` random unit vectors, each improved by
/// `refine_steps` ascent steps `z ← normalize(H_φ z + ‖T‖z)` with
/// `H_φ = (e^{-iφ}T + e^{iφ}T*)/2` and `φ = arg⟨Tz, z⟩`.
///
/// The shift by `‖T‖` makes `H_φ + ‖T‖` positive semidefinite, so each step
/// cannot decrease `Re(e^{-iφ}⟨Tz, z⟩)` and hence not `|⟨Tz, z⟩|`. Samples
/// are drawn in sequence from one seeded stream, so the estimate is
/// monotone in `samples`.
pub fn sphere_radius_estimate_seeded(t: &ComplexMatrix, samples: usize, refine_steps: usize, seed: u64) -> Result<f64> {
    let n = t.square_dim()?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if t.is_zero() {
        return Ok(0.0);
    }
    let shift = operator_norm(t);
    let ts = t.adjoint();
    let mut sampler = Sampler::new(seed);
    let starts: Vec<ComplexVector> = (0..samples).map(|_| sampler.unit_vector(n)).collect();
    let best = par::map_slice(&starts, |z0| {
        let mut z = z0.clone();
        let mut best = 0.0_f64;
        for step in 0..=refine_steps {
            let tz = t.mul_vec(&z).expect("square");
            let q = dot(tz.as_slice(), z.as_slice());
            best = best.max(q.norm());
            if step == refine_steps {
                break;
            }
            let phase = if q.norm() > 0.0 { q / q.norm() } else { c(1.0, 0.0) };
            let tsz = ts.mul_vec(&z).expect("square");
            // (e^{-iφ}Tz + e^{iφ}T*z)/2 + ‖T‖z
            let next = tz
                .scale(phase.conj() * 0.5)
                .axpy(phase * 0.5, &tsz)
                .axpy(c(shift, 0.0), &z);
            match next.normalized() {
                Some(v) => z = v,
                None => break,
            }
        }
        best
    });
    Ok(best.into_iter().fold(0.0, f64::max))
}

/// Buzano's inequality `|⟨Ay, x⟩⟨x, By⟩| ≤ (‖Ay‖‖By‖ + |⟨Ay, By⟩|)/2` for a
/// unit `x`, checked with `1e-10` slack relative to the right-hand side.
pub fn buzano_check(a: &ComplexMatrix, b: &ComplexMatrix, x: &ComplexVector, y: &ComplexVector) -> Result<bool> {
    a.check_same_shape(b)?;
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(norm));
    }
    let ay = a.mul_vec(y)?;
    let by = b.mul_vec(y)?;
    if x.dim() != ay.dim() {
        return Err(Error::DimensionMismatch(format!(
            "x has dimension {} but Ay has {}",
            x.dim(),
            ay.dim()
        )));
    }
    let lhs = (dot(ay.as_slice(), x.as_slice()) * dot(x.as_slice(), by.as_slice())).norm();
    let rhs = 0.5 * (ay.norm() * by.norm() + dot(ay.as_slice(), by.as_slice()).norm());
    Ok(lhs <= rhs + 1e-10 * rhs.max(1.0))
}

/// Which decider [`cross_check`] exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Orthogonal,
    Parallel,
}

/// Agreement between a decider and its grid oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub agrees: bool,
    pub mode: Mode,
    /// Grid minimum over γ or grid maximum over λ.
    pub oracle_value: f64,
    /// `min_value` or `max_value` of the decider.
    pub main_value: f64,
    /// `|oracle_value - main_value|`.
    pub discrepancy: f64,
    pub oracle_decision: bool,
    pub main_decision: bool,
    /// Decider tolerance plus grid resolution bound.
    pub allowance: f64,
    pub resolution: f64,
}

/// Compares an orthogonality report with the γ-grid oracle. The oracle
/// calls the pair orthogonal when its grid minimum stays at or above
/// `w_ρ(A) - tol`; values may differ by at most `tol` plus the grid
/// resolution.
pub fn verify_orthogonality(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    report: &OrthogonalityReport,
    grid: &GridSpec,
) -> Result<OracleVerdict> {
    let tol = report.tolerance;
    let (oracle_value, resolution) = if b.is_zero() {
        (report.base_radius, 0.0)
    } else {
        let g = grid_min_gamma_detailed(a, b, report.rho, grid)?;
        (g.value, g.resolution)
    };
    let oracle_decision = oracle_value >= report.base_radius - tol;
    let discrepancy = (oracle_value - report.min_value).abs();
    let allowance = tol + resolution;
    Ok(OracleVerdict {
        agrees: oracle_decision == report.orthogonal && discrepancy <= allowance,
        mode: Mode::Orthogonal,
        oracle_value,
        main_value: report.min_value,
        discrepancy,
        oracle_decision,
        main_decision: report.orthogonal,
        allowance,
        resolution,
    })
}

/// Compares a parallelism report with the λ-grid oracle. For an exactly
/// parallel pair the grid maximum falls short of the sum by at most
/// `(w_ρ(A) + w_ρ(B))·h²/32` (`h` the grid step), so the oracle calls the
/// pair parallel when its maximum reaches `sum - tol` minus that amount.
/// Values may differ by at most `tol` plus the Lipschitz bound `w_ρ(B)·h/2`.
pub fn verify_parallelism(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    report: &ParallelismReport,
    angular_points: usize,
) -> Result<OracleVerdict> {
    let tol = report.tolerance;
    let (_, oracle_value) = grid_max_lambda(a, b, report.rho, angular_points)?;
    let h = 2.0 * PI / angular_points as f64;
    let curvature_gap = report.sum_radius * h * h / 32.0;
    let oracle_decision = oracle_value >= report.sum_radius - tol - curvature_gap;
    let resolution = report.radius_b * h / 2.0;
    let discrepancy = (oracle_value - report.max_value).abs();
    let allowance = tol + resolution;
    Ok(OracleVerdict {
        agrees: oracle_decision == report.parallel && discrepancy <= allowance,
        mode: Mode::Parallel,
        oracle_value,
        main_value: report.max_value,
        discrepancy,
        oracle_decision,
        main_decision: report.parallel,
        allowance,
        resolution,
    })
}

/// Runs the decider for `mode` with default tolerance and options, then its
/// oracle. The λ-grid uses `grid.angular_points`.
pub fn cross_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: RhoParam,
    mode: Mode,
    grid: &GridSpec,
) -> Result<OracleVerdict> {
    let opts = GeometryOptions::default();
    match mode {
        Mode::Orthogonal => {
            let report = is_orthogonal_with(a, b, rho, None, &opts)?;
            verify_orthogonality(a, b, &report, grid)
        }
        Mode::Parallel => {
            let report = is_parallel_with(a, b, rho, None, &opts)?;
            verify_parallelism(a, b, &report, grid.angular_points.max(DEFAULT_LAMBDA_POINTS))
        }
    }
}

/// Seeded generator of the matrix classes used by the test suites.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Complex standard normal: real and imaginary parts `N(0, 1/2)`.
    pub fn complex_normal(&mut self) -> ComplexScalar {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn dim(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// ρ uniform on `[0.1, 2]`.
    pub fn rho(&mut self) -> RhoParam {
        RhoParam::new(self.uniform(0.1, 2.0)).expect("in range")
    }

    pub fn vector(&mut self, n: usize) -> ComplexVector {
        ComplexVector::new((0..n).map(|_| self.complex_normal()).collect()).expect("finite")
    }

    pub fn unit_vector(&mut self, n: usize) -> ComplexVector {
        loop {
            if let Some(v) = self.vector(n).normalized() {
                return v;
            }
        }
    }

    /// Entries i.i.d. complex standard normal.
    pub fn matrix(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::new(n, n, (0..n * n).map(|_| self.complex_normal()).collect()).expect("finite")
    }

    /// Unitary from the QR factorization of a Gaussian matrix.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        loop {
            if let Ok(q) = qr_unitary(&self.matrix(n)) {
                return q;
            }
        }
    }

    /// `U·diag(d)·U*` with Gaussian `d`.
    pub fn normal_matrix(&mut self, n: usize) -> ComplexMatrix {
        let d: Vec<ComplexScalar> = (0..n).map(|_| self.complex_normal()).collect();
        let u = self.unitary(n);
        conjugate(&u, &ComplexMatrix::diag(&d))
    }

    /// `U·[[0, C], [0, 0]]·U*` with a Gaussian `⌊n/2⌋ × ⌈n/2⌉` block `C`,
    /// so the square vanishes.
    pub fn nilpotent(&mut self, n: usize) -> ComplexMatrix {
        let k = n / 2;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..k {
            for j in k..n {
                m[(i, j)] = self.complex_normal();
            }
        }
        let u = self.unitary(n);
        conjugate(&u, &m)
    }

    /// Commuting normal pair `U·diag(a)·U*`, `U·diag(b)·U*` whose largest
    /// moduli sit at the same index, which makes them `w_ρ`-parallel for
    /// every ρ.
    pub fn parallel_normal_pair(&mut self, n: usize) -> (ComplexMatrix, ComplexMatrix) {
        let u = self.unitary(n);
        let diag = |s: &mut Self| -> Vec<ComplexScalar> {
            let mut d: Vec<ComplexScalar> = (0..n).map(|_| s.complex_normal()).collect();
            let top = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
            d[0] = cis(d[0].arg()) * (1.5 * top + 0.1);
            d
        };
        let a = diag(self);
        let b = diag(self);
        (
            conjugate(&u, &ComplexMatrix::diag(&a)),
            conjugate(&u, &ComplexMatrix::diag(&b)),
        )
    }

    /// `U·diag(s)·V*`, `U·diag(t)·V*` with the largest singular values at the
    /// same index and `t` carrying a phase, which makes them parallel in
    /// the operator norm.
    pub fn norm_parallel_pair(&mut self, n: usize) -> (ComplexMatrix, ComplexMatrix) {
        let u = self.unitary(n);
        let v = self.unitary(n);
        let mut s: Vec<ComplexScalar> = (0..n).map(|_| c(self.uniform(0.1, 1.0), 0.0)).collect();
        let mut t: Vec<ComplexScalar> = (0..n).map(|_| c(self.uniform(0.1, 1.0), 0.0)).collect();
        s[0] = c(1.5, 0.0);
        t[0] = cis(self.uniform(0.0, 2.0 * PI)) * 1.5;
        let vs = v.adjoint();
        let make = |d: &[ComplexScalar]| {
            u.matmul(&ComplexMatrix::diag(d))
                .and_then(|m| m.matmul(&vs))
                .expect("square")
        };
        (make(&s), make(&t))
    }
}

/// `U·M·U*`.
pub fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(m).and_then(|x| x.matmul(&u.adjoint())).expect("square")
}

/// `B' = B - (⟨By, v⟩/(‖y‖²‖v‖²))·v·y*`, where `z = [x; y]` attains
/// `w_ρ(A)` and `v = √(ρ(2-ρ))·x + (1-ρ)·y`. Then `⟨B'y, v⟩ = 0`, so the
/// sign condition holds at every θ for this single `z` and `A ⊥_{w_ρ} B'`.
pub fn orthogonal_partner(a: &ComplexMatrix, b: &ComplexMatrix, rho: RhoParam) -> Result<ComplexMatrix> {
    a.check_same_shape(b)?;
    if a.is_zero() {
        return Err(Error::ZeroMatrix("orthogonal_partner needs A ≠ 0".into()));
    }
    let cert = rho_radius_with(a, rho, DEFAULT_RADIUS_TOL, &RadiusOptions::default())?;
    let (x, y) = cert.attaining_vector.halves();
    let (s, cc) = rho.block_coefficients();
    let v = x.scale_real(s).axpy(c(cc, 0.0), &y);
    let coef = dot(b.mul_vec(&y)?.as_slice(), v.as_slice()) / (y.norm_sqr() * v.norm_sqr());
    b.add_scaled(-coef, &ComplexMatrix::outer(&v, &y))
}

/// `B' = B - (⟨Bv₁, Av₁⟩/‖Av₁‖²)·(Av₁)·v₁*` for a maximal right singular
/// vector `v₁` of `A`; then `⟨Av₁, B'v₁⟩ = 0`, so `A ⊥ B'` in the operator
/// norm.
pub fn norm_orthogonal_partner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_shape(b)?;
    let v1 = max_singular_subspace(a, SINGULAR_SUBSPACE_TOL)?.swap_remove(0);
    let av = a.mul_vec(&v1)?;
    let coef = dot(b.mul_vec(&v1)?.as_slice(), av.as_slice()) / av.norm_sqr();
    b.add_scaled(-coef, &ComplexMatrix::outer(&av, &v1))
}
