//! Vector frames and Θ-frames in `ℂ^d`.
//!
//! Optimal bounds are spectral: the ordinary bounds of a family are the
//! extreme eigenvalues of its frame operator `S = Σ_k f_k f_k*`. For a
//! Θ-frame the upper bound is unchanged and the lower bound is the least
//! generalized Rayleigh quotient of the pencil `(S, ΘΘ*)` (or `(S, Θ*Θ)`
//! under [`ThetaSide::Direct`]).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, default_eig_tol, hermitian_eigenvalues, inner, Matrix, Vector};

/// Default threshold for "is a frame": the optimal lower bound must exceed it.
pub const VERDICT_EPS: f64 = 1e-9;

/// Which operator appears in the lower Θ-frame inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaSide {
    /// `A ‖Θ* f‖² ≤ Σ_k |⟨f, f_k⟩|²`
    #[default]
    Adjoint,
    /// `A ‖Θ f‖² ≤ Σ_k |⟨f, f_k⟩|²`
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConfig {
    pub verdict_eps: f64,
    pub theta_side: ThetaSide,
}

impl Default for FrameConfig {
    fn default() -> Self {
        FrameConfig {
            verdict_eps: VERDICT_EPS,
            theta_side: ThetaSide::Adjoint,
        }
    }
}

/// A finite, ordered, non-empty family of vectors in `ℂ^dim`.
/// Duplicates are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFrame {
    dim: usize,
    vectors: Vec<Vector>,
}

impl VectorFrame {
    pub fn new(dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptyFrame);
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite vector entry".into()));
            }
        }
        Ok(VectorFrame { dim, vectors })
    }

    pub fn from_real(dim: usize, vectors: &[&[f64]]) -> Result<Self> {
        VectorFrame::new(
            dim,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn standard_basis(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|i| {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[i] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        VectorFrame { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Same family with every vector mapped through `m`.
    pub fn map(&self, m: &Matrix) -> Result<VectorFrame> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        VectorFrame::new(m.rows(), vectors)
    }
}

/// The operator Θ of a Θ-frame: a square endomorphism of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTheta {
    matrix: Matrix,
    identity: bool,
}

impl OperatorTheta {
    /// An explicit matrix. Even an identity matrix passed here goes through
    /// the pencil computation; use [`OperatorTheta::identity`] for the
    /// ordinary-frame specialization.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(linalg::LinalgError::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            }
            .into());
        }
        Ok(OperatorTheta {
            matrix,
            identity: false,
        })
    }

    pub fn identity(dim: usize) -> Self {
        OperatorTheta {
            matrix: Matrix::identity(dim),
            identity: true,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The Gram operator `ΘΘ*` (adjoint side) or `Θ*Θ` (direct side) whose
    /// quadratic form is the lower-bound reference `‖Θ* f‖²` or `‖Θ f‖²`.
    pub fn reference_operator(&self, side: ThetaSide) -> Matrix {
        let (a, b) = match side {
            ThetaSide::Adjoint => (&self.matrix, self.matrix.adjoint()),
            ThetaSide::Direct => (&self.matrix.adjoint(), self.matrix.clone()),
        };
        a.matmul(&b).expect("square theta")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
}

impl FrameBounds {
    fn new(lower: f64, upper: f64, cfg: &FrameConfig) -> Self {
        // roundoff can push a zero eigenvalue slightly negative
        let lower = lower.max(0.0);
        let upper = upper.max(0.0);
        FrameBounds {
            lower,
            upper,
            is_frame: lower > cfg.verdict_eps,
        }
    }
}

/// `S = Σ_k f_k f_k*`.
pub fn frame_operator(frame: &VectorFrame) -> Matrix {
    let d = frame.dim;
    let mut s = Matrix::zeros(d, d);
    for v in &frame.vectors {
        for i in 0..d {
            for j in 0..d {
                s[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    s
}

/// `Σ_k |⟨f, f_k⟩|²`.
pub fn analysis_energy(frame: &VectorFrame, f: &[Complex64]) -> Result<f64> {
    if f.len() != frame.dim {
        return Err(Error::DimensionMismatch {
            expected: frame.dim,
            found: f.len(),
        });
    }
    Ok(frame.vectors.iter().map(|v| inner(f, v).norm_sqr()).sum())
}

/// Optimal bounds from the frame operator alone (Θ = I).
pub(crate) fn bounds_of_operator(s: &Matrix, cfg: &FrameConfig) -> Result<FrameBounds> {
    let spec = hermitian_eigenvalues(s, default_eig_tol(s))?;
    Ok(FrameBounds::new(spec.min(), spec.max(), cfg))
}

/// Optimal Θ-relative bounds from a frame (or g-frame) operator.
pub(crate) fn theta_bounds_of_operator(
    s: &Matrix,
    theta: &OperatorTheta,
    cfg: &FrameConfig,
) -> Result<FrameBounds> {
    if theta.dim() != s.rows() {
        return Err(Error::DimensionMismatch {
            expected: s.rows(),
            found: theta.dim(),
        });
    }
    if theta.is_identity() {
        return bounds_of_operator(s, cfg);
    }
    if theta.matrix.is_zero() {
        return Err(Error::ZeroTheta);
    }
    let reference = theta.reference_operator(cfg.theta_side);
    let lower = linalg::pencil_min_ratio(s, &reference, None)?;
    if lower.is_infinite() {
        // Θ is numerically zero
        return Err(Error::ZeroTheta);
    }
    let upper = hermitian_eigenvalues(s, default_eig_tol(s))?.max();
    Ok(FrameBounds::new(lower, upper, cfg))
}

pub fn frame_bounds(frame: &VectorFrame, cfg: &FrameConfig) -> Result<FrameBounds> {
    bounds_of_operator(&frame_operator(frame), cfg)
}

pub fn theta_frame_bounds(
    frame: &VectorFrame,
    theta: &OperatorTheta,
    cfg: &FrameConfig,
) -> Result<FrameBounds> {
    theta_bounds_of_operator(&frame_operator(frame), theta, cfg)
}
