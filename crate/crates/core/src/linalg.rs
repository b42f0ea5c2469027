//! Dense complex linear algebra at desk scale.
//!
//! Everything here works on small row-major [`Matrix`] values: adjoints,
//! products, a cyclic Jacobi eigensolver for Hermitian matrices, range bases
//! and the restricted minimum of a generalized Rayleigh quotient over a
//! Hermitian pencil `(S, M)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Column vector in `ℂ^d`.
pub type Vector = Vec<Complex64>;

/// Jacobi sweep cap.
pub const MAX_SWEEPS: usize = 100;

/// Entrywise asymmetry beyond which a matrix is rejected as non-Hermitian
/// (scaled by `max(1, max |h_ij|)`).
pub const HERMITIAN_REJECT_TOL: f64 = 1e-8;

/// Eigenvalues below `-PSD_TOL · max(1, λ_max)` make a matrix "not PSD".
pub const PSD_TOL: f64 = 1e-8;

/// Default relative numerical-rank threshold, applied to the largest
/// eigenvalue of `M M*`.
pub const DEFAULT_RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("entry count {found} does not match {rows}x{cols}")]
    BadLength {
        rows: usize,
        cols: usize,
        found: usize,
    },
}

/// Dense row-major complex matrix. All entries are finite.
///
/// Zero-sized dimensions are only produced by [`orthonormal_range_basis`]
/// for a zero input (a basis with no columns).
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadLength {
                rows,
                cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from a list of rows. Every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::BadLength {
                rows: r,
                cols: c,
                found: bad.len(),
            });
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self, LinalgError> {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::ShapeMismatch {
                    expected: (rows, 1),
                    found: (col.len(), 1),
                });
            }
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Matrix::new(rows, columns.len(), m.data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, factor: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.cols, 1),
                found: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::ShapeMismatch {
                expected: self.shape(),
                found: rhs.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest entrywise deviation `|h_ij - conj(h_ji)|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first argument.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

pub fn adjoint(m: &Matrix) -> Matrix {
    m.adjoint()
}

/// Eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Off-diagonal Frobenius norm at termination.
    pub residual: f64,
}

impl HermitianSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Eigenpairs of a Hermitian matrix; `vectors` holds unit eigenvectors as
/// columns, in the same (ascending) order as `values`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub residual: f64,
}

/// Convergence threshold used when callers do not pick one:
/// `1e-12 · (1 + ‖H‖_F)`.
pub fn default_eig_tol(h: &Matrix) -> f64 {
    1e-12 * (1.0 + h.frobenius_norm())
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(H + H*)/2` first; asymmetry larger than
/// [`HERMITIAN_REJECT_TOL`] (relative to the largest entry, floored at 1) is
/// rejected. Each rotation first removes the phase of the pivot `h_pq` with a
/// diagonal unitary and then applies a real Givens rotation, so the iteration
/// is the classical real Jacobi method lifted to `ℂ^n`.
pub fn hermitian_eigen(h: &Matrix, tol: f64) -> Result<HermitianEigen, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NonSquare {
            rows: h.rows,
            cols: h.cols,
        });
    }
    let n = h.rows;
    let asym = h.hermitian_asymmetry();
    if asym > HERMITIAN_REJECT_TOL * h.max_abs().max(1.0) {
        return Err(LinalgError::NotHermitian { asymmetry: asym });
    }

    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = if i == j {
                Complex64::new(h[(i, i)].re, 0.0)
            } else {
                (h[(i, j)] + h[(j, i)].conj()) * 0.5
            };
        }
    }
    let mut v = Matrix::identity(n);

    let mut residual = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while residual > tol {
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let phase = g / g_abs;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = 0.5 * (2.0 * g_abs).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // U = diag(1, conj(phase)) · [[c, s], [-s, c]] on coordinates (p, q)
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                // A ← A U
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * u_pp + aiq * u_qp;
                    a[i * n + q] = aip * u_pq + aiq * u_qq;
                }
                // A ← U* A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * u_pp + viq * u_qp;
                    v[(i, q)] = vip * u_pq + viq * u_qq;
                }
            }
        }
        residual = off_diagonal_norm(&a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen {
        values,
        vectors,
        residual,
    })
}

/// Ascending eigenvalues of a Hermitian matrix; see [`hermitian_eigen`].
pub fn hermitian_eigenvalues(h: &Matrix, tol: f64) -> Result<HermitianSpectrum, LinalgError> {
    let eig = hermitian_eigen(h, tol)?;
    Ok(HermitianSpectrum {
        eigenvalues: eig.values,
        residual: eig.residual,
    })
}

/// Orthonormal basis (as columns) of `range(M)`, from the eigenvectors of
/// `M M*` whose eigenvalues exceed `rank_tol`.
///
/// `rank_tol = None` uses `DEFAULT_RANK_RTOL · λ_max(M M*)`. A zero matrix
/// yields a basis with no columns.
pub fn orthonormal_range_basis(m: &Matrix, rank_tol: Option<f64>) -> Result<Matrix, LinalgError> {
    let gram = m.matmul(&m.adjoint())?;
    let eig = hermitian_eigen(&gram, default_eig_tol(&gram))?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    let tol = rank_tol.unwrap_or(DEFAULT_RANK_RTOL * top.max(0.0));
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] > tol)
        .collect();
    let mut basis = Matrix::zeros(m.rows, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        for i in 0..m.rows {
            basis[(i, dst)] = eig.vectors[(i, src)];
        }
    }
    Ok(basis)
}

fn check_psd(h: &Matrix) -> Result<HermitianEigen, LinalgError> {
    let eig = hermitian_eigen(h, default_eig_tol(h))?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    let bottom = eig.values.first().copied().unwrap_or(0.0);
    if bottom < -PSD_TOL * top.abs().max(1.0) {
        return Err(LinalgError::NotPsd { eigenvalue: bottom });
    }
    Ok(eig)
}

/// `inf { ⟨S f, f⟩ / ⟨M f, f⟩ : M f ≠ 0 }` for Hermitian PSD `S`, `M`.
///
/// The pencil is restricted to an orthonormal basis `U` of `range(M)`; the
/// result is the least eigenvalue of `(U*MU)^{-1/2} (U*SU) (U*MU)^{-1/2}`.
/// Returns `+∞` when `M` has numerical rank zero (the infimum is over an
/// empty set).
pub fn pencil_min_ratio(s: &Matrix, m: &Matrix, rank_tol: Option<f64>) -> Result<f64, LinalgError> {
    if !s.is_square() {
        return Err(LinalgError::NonSquare {
            rows: s.rows,
            cols: s.cols,
        });
    }
    if s.shape() != m.shape() {
        return Err(LinalgError::ShapeMismatch {
            expected: s.shape(),
            found: m.shape(),
        });
    }
    check_psd(s)?;
    check_psd(m)?;

    let u = orthonormal_range_basis(m, rank_tol)?;
    if u.cols == 0 {
        return Ok(f64::INFINITY);
    }
    let ua = u.adjoint();
    let m_r = ua.matmul(m)?.matmul(&u)?;
    let s_r = ua.matmul(s)?.matmul(&u)?;

    let eig = hermitian_eigen(&m_r, default_eig_tol(&m_r))?;
    let r = u.cols;
    let mut inv_sqrt = Matrix::zeros(r, r);
    for (idx, &mu) in eig.values.iter().enumerate() {
        // Every retained direction has μ > 0 up to roundoff.
        let w = 1.0 / mu.max(f64::MIN_POSITIVE).sqrt();
        for i in 0..r {
            for j in 0..r {
                inv_sqrt[(i, j)] += eig.vectors[(i, idx)] * eig.vectors[(j, idx)].conj() * w;
            }
        }
    }
    let c = inv_sqrt.matmul(&s_r)?.matmul(&inv_sqrt)?;
    let spec = hermitian_eigenvalues(&c, default_eig_tol(&c))?;
    Ok(spec.min())
}
