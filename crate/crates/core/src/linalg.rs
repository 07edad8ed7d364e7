//! Dense complex linear algebra: matrices, vectors, Hermitian eigenproblems
//! and singular values.
//!
//! Everything here works on small dense operands (dimension up to a few
//! dozen). The Hermitian eigensolver is a cyclic complex Jacobi iteration,
//! which is deterministic and accurate to a few ulps of `‖H‖` at these sizes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complex scalar. Public operations never accept non-finite parts.
pub type ComplexScalar = Complex64;

/// Imaginary unit.
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Relative tolerance accepted when checking that an input is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default relative gap used to group near-maximal singular values.
pub const SINGULAR_SUBSPACE_TOL: f64 = 1e-8;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of `‖H‖_F`.
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

pub(crate) fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

pub(crate) fn cis(theta: f64) -> ComplexScalar {
    Complex64::from_polar(1.0, theta)
}

fn all_finite(data: &[ComplexScalar]) -> bool {
    data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// A finite complex vector.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ComplexScalar>", into = "Vec<ComplexScalar>")]
pub struct ComplexVector {
    data: Vec<ComplexScalar>,
}

impl TryFrom<Vec<ComplexScalar>> for ComplexVector {
    type Error = Error;

    fn try_from(data: Vec<ComplexScalar>) -> Result<Self> {
        Self::new(data)
    }
}

impl From<ComplexVector> for Vec<ComplexScalar> {
    fn from(v: ComplexVector) -> Self {
        v.data
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

impl ComplexVector {
    pub fn new(data: Vec<ComplexScalar>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty("vector".into()));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("vector".into()));
        }
        Ok(Self { data })
    }

    /// Internal constructor for data produced by arithmetic on finite inputs.
    pub(crate) fn from_vec(data: Vec<ComplexScalar>) -> Self {
        debug_assert!(!data.is_empty());
        Self { data }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec(vec![Complex64::default(); dim])
    }

    /// The `k`-th standard basis vector of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = c(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self::from_vec(self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_vec(self.data.iter().map(|z| z * s).collect())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: ComplexScalar, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        Self::from_vec(self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect())
    }

    /// Stack `[self; lower]`.
    pub fn stack(&self, lower: &Self) -> Self {
        let mut data = self.data.clone();
        data.extend_from_slice(&lower.data);
        Self::from_vec(data)
    }

    /// Split an even-dimensional vector into its upper and lower halves.
    pub fn halves(&self) -> (Self, Self) {
        assert!(self.dim().is_multiple_of(2), "halves of odd-dimensional vector");
        let (x, y) = self.data.split_at(self.dim() / 2);
        (Self::from_vec(x.to_vec()), Self::from_vec(y.to_vec()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Hilbert-space inner product, linear in the first argument:
/// `⟨u, v⟩ = Σ u_i · conj(v_i)`.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Result<ComplexScalar> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of vectors of dimension {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(dot(&u.data, &v.data))
}

#[inline]
pub(crate) fn dot(u: &[ComplexScalar], v: &[ComplexScalar]) -> ComplexScalar {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexScalar>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexScalar>,
}

impl TryFrom<RawMatrix> for ComplexMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        Self::new(raw.rows, raw.cols, raw.data)
    }
}

impl From<ComplexMatrix> for RawMatrix {
    fn from(m: ComplexMatrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data,
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("matrix".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<ComplexScalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Build from nested rows.
    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<ComplexScalar>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![Complex64::default(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![c(1.0, 0.0); n])
    }

    pub fn diag(entries: &[ComplexScalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (k, &z) in entries.iter().enumerate() {
            m[(k, k)] = z;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        Self::diag(&entries.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    /// Outer product `u v*`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        let (r, k) = (u.dim(), v.dim());
        let mut data = Vec::with_capacity(r * k);
        for a in u.as_slice() {
            for b in v.as_slice() {
                data.push(a * b.conj());
            }
        }
        Self::from_raw(r, k, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let k = columns.len();
        let n = columns.first().map_or(0, ComplexVector::dim);
        if columns.iter().any(|col| col.dim() != n) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut m = Self::zeros(n.max(1), k.max(1));
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.as_slice().iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[ComplexScalar] {
        &self.data
    }

    /// Dimension of a square matrix, or an error naming the shape.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: ComplexScalar, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect(),
        ))
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::default() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of dimension {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(ComplexVector::from_vec(self.apply(v.as_slice())))
    }

    pub(crate) fn apply(&self, v: &[ComplexScalar]) -> Vec<ComplexScalar> {
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨M z, z⟩`.
    pub fn quadratic_form(&self, z: &ComplexVector) -> Result<ComplexScalar> {
        let mz = self.mul_vec(z)?;
        inner(&mz, z)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == Complex64::default())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self*`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.rows.min(self.cols);
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Hermitian part of `e^{iθ} self`, i.e. `(e^{iθ}T + e^{-iθ}T*)/2`.
    pub fn rotated_hermitian_part(&self, theta: f64) -> Self {
        let n = self.rows;
        let w = cis(theta);
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = 0.5 * (w * self[(i, j)] + (w * self[(j, i)]).conj());
            }
        }
        out
    }

    /// `[[A, B], [C, D]]` from four equal square blocks.
    pub fn block2(a: &Self, b: &Self, cc: &Self, d: &Self) -> Result<Self> {
        let n = a.square_dim()?;
        for m in [b, cc, d] {
            a.check_same_shape(m)?;
        }
        let mut out = Self::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = a[(i, j)];
                out[(i, j + n)] = b[(i, j)];
                out[(i + n, j)] = cc[(i, j)];
                out[(i + n, j + n)] = d[(i, j)];
            }
        }
        Ok(out)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(c(1.0, 0.0), rhs).expect("matrix add shape")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(c(-1.0, 0.0), rhs).expect("matrix sub shape")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix mul shape")
    }
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblems
// ---------------------------------------------------------------------------

/// An eigenvalue of a Hermitian matrix with a unit eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: ComplexVector,
}

/// Full spectral decomposition, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexVector>,
}

impl HermitianEigen {
    pub fn max_pair(&self) -> EigenPair {
        EigenPair {
            value: self.values[0],
            vector: self.vectors[0].clone(),
        }
    }

    /// Eigenvectors whose eigenvalue lies within `gap` of the largest one.
    pub fn top_eigenspace(&self, gap: f64) -> Vec<ComplexVector> {
        let top = self.values[0];
        self.values
            .iter()
            .zip(&self.vectors)
            .take_while(|(v, _)| **v >= top - gap)
            .map(|(_, vec)| vec.clone())
            .collect()
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<usize> {
    let n = h.square_dim()?;
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(n)
}

/// Copy of `h` with the Hermitian symmetrization `(H + H*)/2` applied.
fn symmetrized(h: &ComplexMatrix) -> Vec<ComplexScalar> {
    let n = h.rows;
    let mut a = vec![Complex64::default(); n * n];
    for i in 0..n {
        a[i * n + i] = c(h[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = 0.5 * (h[(i, j)] + h[(j, i)].conj());
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    a
}

fn off_diagonal_norm(a: &[ComplexScalar], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += a[i * n + j].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

/// Cyclic complex Jacobi on a Hermitian row-major `n×n` buffer. On return
/// the diagonal of `a` holds the eigenvalues; if `v` is given it
/// accumulates the unitary whose columns are the eigenvectors.
fn jacobi(a: &mut [ComplexScalar], n: usize, mut v: Option<&mut [ComplexScalar]>) {
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 || n == 1 {
        return;
    }
    let threshold = JACOBI_TOL * scale;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(a, n) < threshold {
            return;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let h = a[p * n + q];
                let habs = h.norm();
                if habs <= f64::MIN_POSITIVE * scale {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * habs);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let ph = h / habs;
                let ph_c = ph.conj();
                // G = [[c, s], [-s·conj(ph), c·conj(ph)]] on coordinates (p, q).
                let g_qp = -sn * ph_c;
                let g_qq = cs * ph_c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * cs + akq * g_qp;
                    a[k * n + q] = akp * sn + akq * g_qq;
                }
                let gs_pq = -sn * ph;
                let gs_qq = cs * ph;
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * cs + aqk * gs_pq;
                    a[q * n + k] = apk * sn + aqk * gs_qq;
                }
                a[p * n + q] = Complex64::default();
                a[q * n + p] = Complex64::default();
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * cs + vkq * g_qp;
                        v[k * n + q] = vkp * sn + vkq * g_qq;
                    }
                }
            }
        }
    }
}

/// Eigen-decomposition of a matrix already known to be Hermitian. No
/// validation beyond symmetrization.
pub(crate) fn hermitian_eigen_unchecked(h: &ComplexMatrix) -> HermitianEigen {
    let n = h.rows;
    let mut a = symmetrized(h);
    let mut v = vec![Complex64::default(); n * n];
    for i in 0..n {
        v[i * n + i] = c(1.0, 0.0);
    }
    jacobi(&mut a, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let col = ComplexVector::from_vec((0..n).map(|i| v[i * n + k]).collect());
            // Columns of a unitary are unit already; renormalize away drift.
            col.normalized().unwrap_or(col)
        })
        .collect();
    HermitianEigen { values, vectors }
}

/// Largest eigenvalue only, through the tridiagonal QL route.
pub(crate) fn hermitian_max_eigenvalue_unchecked(h: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues_tridiagonal(h)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Eigenvalues only, through Jacobi without eigenvector accumulation.
#[cfg(test)]
pub(crate) fn hermitian_eigenvalues_jacobi(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows;
    let mut a = symmetrized(h);
    jacobi(&mut a, n, None);
    (0..n).map(|k| a[k * n + k].re).collect()
}

/// Eigenvalues of a Hermitian matrix by Householder reduction to a real
/// symmetric tridiagonal matrix followed by implicit QL. Much cheaper than
/// Jacobi when no eigenvectors are needed. Unsorted.
pub(crate) fn hermitian_eigenvalues_tridiagonal(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows;
    let mut a = symmetrized(h);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![Complex64::default(); n];
    let mut p = vec![Complex64::default(); n];
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let xnorm = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        d[k] = a[k * n + k].re;
        if xnorm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { c(1.0, 0.0) };
        let alpha = -phase * xnorm;
        // v = x - alpha e1, normalized; indices relative to k+1.
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        v[0] -= alpha;
        let vnorm = v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        e[k] = xnorm;
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v[..m] {
            *z /= vnorm;
        }
        // p = A22 v, K = v* p, q = p - K v, A22 -= 2(v q* + q v*).
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            p[i] = row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum();
        }
        let kk: f64 = v[..m].iter().zip(&p[..m]).map(|(x, y)| (x.conj() * y).re).sum();
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        for i in 0..m {
            for j in 0..m {
                a[(k + 1 + i) * n + k + 1 + j] -= 2.0 * (v[i] * p[j].conj() + p[i] * v[j].conj());
            }
        }
    }
    d[n - 1] = a[(n - 1) * n + n - 1].re;
    e[n - 1] = 0.0;
    tridiagonal_ql(&mut d, &mut e);
    d
}

/// Implicit QL eigenvalues of the symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e[i]` coupling `i` and `i+1`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut cs, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = cs * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                cs = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cs * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cs * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Full eigen-decomposition of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    Ok(hermitian_eigen_unchecked(h))
}

/// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
pub fn hermitian_eig_max(h: &ComplexMatrix) -> Result<EigenPair> {
    Ok(hermitian_eigen(h)?.max_pair())
}

// ---------------------------------------------------------------------------
// Singular values
// ---------------------------------------------------------------------------

/// `A* A`, exactly Hermitian by construction.
pub(crate) fn gram(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.cols;
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = Complex64::default();
            for k in 0..a.rows {
                s += a[(k, i)].conj() * a[(k, j)];
            }
            g[(i, j)] = s;
            g[(j, i)] = s.conj();
        }
        g[(i, i)].im = 0.0;
    }
    g
}

/// Largest singular value `σ_max(A) = ‖A‖`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    hermitian_max_eigenvalue_unchecked(&gram(a)).max(0.0).sqrt()
}

/// Orthonormal basis of the right singular subspace belonging to singular
/// values `σ` with `σ² ≥ (1 - tol)·σ_max²`.
pub fn max_singular_subspace(a: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexVector>> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix("max_singular_subspace".into()));
    }
    if !(0.0..1.0).contains(&tol) {
        return Err(Error::InvalidParameter(format!("subspace tol {tol} not in [0, 1)")));
    }
    let eig = hermitian_eigen_unchecked(&gram(a));
    let top = eig.values[0];
    Ok(eig.top_eigenspace(tol * top))
}

/// Modified Gram-Schmidt QR; returns the unitary factor with the phases of
/// `R`'s diagonal normalized to be positive real.
pub fn qr_unitary(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    let mut cols: Vec<Vec<ComplexScalar>> = (0..n).map(|j| a.column(j).data).collect();
    for j in 0..n {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let r = dot(&rest[0], qk);
            for (x, q) in rest[0].iter_mut().zip(qk) {
                *x -= r * q;
            }
        }
        let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm <= 1e-300 {
            return Err(Error::InvalidParameter("rank-deficient QR input".into()));
        }
        for x in &mut cols[j] {
            *x /= nrm;
        }
    }
    let mut q = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            q[(i, j)] = *z;
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn m(rows: &[Vec<(f64, f64)>]) -> ComplexMatrix {
        let rows: Vec<Vec<ComplexScalar>> = rows.iter().map(|r| r.iter().map(|&(a, b)| c(a, b)).collect()).collect();
        ComplexMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let n = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&n), expected);

        let i1 = m(&[vec![(0.0, 1.0)]]);
        assert_eq!(adjoint(&i1), m(&[vec![(0.0, -1.0)]]));

        let h = m(&[vec![(2.0, 0.0), (1.0, -3.0)], vec![(1.0, 3.0), (-1.0, 0.0)]]);
        assert_eq!(adjoint(&h), h);
        assert_eq!(adjoint(&adjoint(&n)), n);
    }

    #[test]
    fn inner_examples() {
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        assert_eq!(inner(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(inner(&e1, &e2).unwrap(), c(0.0, 0.0));
        let v = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(inner(&v, &v).unwrap(), c(2.0, 0.0));
        // linear in the first slot, conjugate-linear in the second
        assert_eq!(inner(&v.scale(I), &e2).unwrap(), c(-1.0, 0.0));
        assert_eq!(inner(&e2, &v.scale(I)).unwrap(), c(-1.0, 0.0).conj());
        assert!(matches!(
            inner(&e1, &ComplexVector::basis(3, 0)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn eig_max_examples() {
        let id = ComplexMatrix::identity(2);
        let p = hermitian_eig_max(&id).unwrap();
        assert!(close(p.value, 1.0, 1e-15));
        assert!(close(p.vector.norm(), 1.0, 1e-12));

        let d = ComplexMatrix::diag_real(&[2.0, 5.0]);
        let p = hermitian_eig_max(&d).unwrap();
        assert!(close(p.value, 5.0, 1e-15));
        assert!(close(p.vector.as_slice()[1].norm(), 1.0, 1e-12));

        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let p = hermitian_eig_max(&x).unwrap();
        assert!(close(p.value, 1.0, 1e-14));
        let v = p.vector.as_slice();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(v[0].norm(), h, 1e-12) && close(v[1].norm(), h, 1e-12));
        assert!((v[0] - v[1]).norm() < 1e-12);
    }

    #[test]
    fn eig_complex_hermitian_residual() {
        let h = m(&[
            vec![(1.0, 0.0), (2.0, 1.0), (0.0, -1.5)],
            vec![(2.0, -1.0), (-3.0, 0.0), (0.5, 0.5)],
            vec![(0.0, 1.5), (0.5, -0.5), (0.25, 0.0)],
        ]);
        let eig = hermitian_eigen(&h).unwrap();
        let trace: f64 = eig.values.iter().sum();
        assert!(close(trace, 1.0 - 3.0 + 0.25, 1e-12));
        for (lam, v) in eig.values.iter().zip(&eig.vectors) {
            let hv = h.mul_vec(v).unwrap();
            let r = hv.axpy(c(-lam, 0.0), v).norm();
            assert!(r <= 1e-10 * (1.0 + operator_norm(&h)), "residual {r}");
        }
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn tridiagonal_ql_matches_jacobi() {
        let mut seed = 7u64;
        let mut r = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in 1..=9 {
            for _ in 0..20 {
                let a = ComplexMatrix::new(n, n, (0..n * n).map(|_| c(r(), r())).collect()).unwrap();
                let h = &a + &a.adjoint();
                let mut jac = hermitian_eigenvalues_jacobi(&h);
                let mut ql = hermitian_eigenvalues_tridiagonal(&h);
                jac.sort_by(f64::total_cmp);
                ql.sort_by(f64::total_cmp);
                for (x, y) in jac.iter().zip(&ql) {
                    assert!((x - y).abs() < 1e-12 * (1.0 + h.frobenius_norm()), "n={n}: {x} vs {y}");
                }
            }
        }
        // repeated eigenvalues and an already-diagonal input
        let d = ComplexMatrix::diag_real(&[3.0, 3.0, -1.0, 3.0]);
        let mut ql = hermitian_eigenvalues_tridiagonal(&d);
        ql.sort_by(f64::total_cmp);
        assert_eq!(ql, vec![-1.0, 3.0, 3.0, 3.0]);
    }

    #[test]
    fn eig_rejects_bad_input() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig_max(&rect), Err(Error::NotSquare { .. })));
        let nh = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig_max(&nh), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn operator_norm_examples() {
        let n = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(close(operator_norm(&n), 1.0, 1e-14));
        let d = ComplexMatrix::diag(&[c(3.0, 0.0), c(0.0, 4.0)]);
        assert!(close(operator_norm(&d), 4.0, 1e-14));
        let ones = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(close(operator_norm(&ones), 2.0, 1e-14));
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn max_singular_subspace_examples() {
        let d = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert_eq!(max_singular_subspace(&d, SINGULAR_SUBSPACE_TOL).unwrap().len(), 2);

        let d = ComplexMatrix::diag_real(&[2.0, 1.0]);
        let s = max_singular_subspace(&d, SINGULAR_SUBSPACE_TOL).unwrap();
        assert_eq!(s.len(), 1);
        assert!(close(s[0].as_slice()[0].norm(), 1.0, 1e-12));

        let n = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let s = max_singular_subspace(&n, SINGULAR_SUBSPACE_TOL).unwrap();
        assert_eq!(s.len(), 1);
        assert!(close(s[0].as_slice()[1].norm(), 1.0, 1e-12));

        assert!(matches!(
            max_singular_subspace(&ComplexMatrix::zeros(2, 2), 1e-8),
            Err(Error::ZeroMatrix(_))
        ));
    }

    #[test]
    fn constructors_validate() {
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexVector::new(vec![]).is_err());
        assert!(ComplexVector::new(vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn qr_gives_unitary() {
        let a = m(&[
            vec![(1.0, 0.5), (2.0, 0.0), (0.0, 1.0)],
            vec![(0.0, -1.0), (1.0, 1.0), (3.0, 0.0)],
            vec![(2.0, 0.0), (0.0, 0.0), (1.0, -2.0)],
        ]);
        let q = qr_unitary(&a).unwrap();
        let qq = &q.adjoint() * &q;
        assert!(qq.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);
    }
}
