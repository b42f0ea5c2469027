//! Seeded random instance generators.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::frames::{frame_bounds, FrameConfig, OperatorTheta, VectorFrame};
use crate::gframes::{theta_gframe_bounds, GFrame, LocalFrameSet};
use crate::linalg::{default_eig_tol, hermitian_eigenvalues, Matrix, Vector};

use super::instance::Instance;

/// Generated g-frames keep their optimal Θ-g lower bound above this, well
/// clear of the verdict threshold.
pub const HYPOTHESIS_FLOOR: f64 = 1e-6;

const MAX_ATTEMPTS: usize = 10_000;

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    (0..dim).map(|_| random_complex(rng)).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::new(
        rows,
        cols,
        (0..rows * cols).map(|_| random_complex(rng)).collect(),
    )
    .expect("finite entries")
}

fn spectral_norm(m: &Matrix) -> f64 {
    let gram = m.matmul(&m.adjoint()).expect("square");
    hermitian_eigenvalues(&gram, default_eig_tol(&gram))
        .expect("Hermitian Gram matrix")
        .max()
        .max(0.0)
        .sqrt()
}

/// `count ≥ dim` random vectors rescaled so the optimal bounds lie in
/// `[1/2, 2]`: draws are rejected until `B/A ≤ 4`, then scaled by
/// `(AB)^{-1/4}`, which maps the bounds to `(√(A/B), √(B/A))`.
pub fn random_local_frame<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> VectorFrame {
    assert!(
        count >= dim,
        "a frame of C^{dim} needs at least {dim} vectors"
    );
    let cfg = FrameConfig::default();
    loop {
        let frame = VectorFrame::new(dim, (0..count).map(|_| random_vector(rng, dim)).collect())
            .expect("shapes");
        let b = frame_bounds(&frame, &cfg).expect("eigensolver");
        if b.lower > 0.0 && b.upper <= 4.0 * b.lower {
            let scale = Complex64::new((b.lower * b.upper).powf(-0.25), 0.0);
            let vectors = frame
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| z * scale).collect())
                .collect();
            return VectorFrame::new(dim, vectors).expect("shapes");
        }
    }
}

/// A single unit-modulus scalar: an orthonormal basis of `ℂ¹`.
pub fn random_onb_1d<R: Rng + ?Sized>(rng: &mut R) -> VectorFrame {
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    VectorFrame::new(1, vec![vec![Complex64::from_polar(1.0, phase)]]).expect("1-dim")
}

/// Identity, a random full matrix, or a random rank-deficient matrix, each
/// with probability 1/3; explicit matrices are normalized to spectral norm 1.
pub fn random_theta<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> OperatorTheta {
    let raw = match rng.gen_range(0..3) {
        0 => return OperatorTheta::identity(dim),
        1 => random_matrix(rng, dim, dim),
        _ => {
            let rank = if dim > 1 { rng.gen_range(1..dim) } else { 1 };
            random_matrix(rng, dim, rank)
                .matmul(&random_matrix(rng, rank, dim))
                .expect("shapes")
        }
    };
    let norm = spectral_norm(&raw);
    OperatorTheta::new(raw.scale(Complex64::new(1.0 / norm, 0.0))).expect("square")
}

fn is_theta_gframe(g: &GFrame, theta: &OperatorTheta) -> bool {
    theta_gframe_bounds(g, theta, &FrameConfig::default()).is_ok_and(|b| b.lower > HYPOTHESIS_FLOOR)
}

/// Ω's operators as a permutation of Λ's when the permuted local dimensions
/// still fit the inner index sizes; `None` otherwise.
fn permuted_operators<R: Rng + ?Sized>(
    rng: &mut R,
    lambda_ops: &[Matrix],
    sizes: &[usize],
) -> Option<Vec<Matrix>> {
    let mut perm: Vec<usize> = (0..lambda_ops.len()).collect();
    perm.shuffle(rng);
    let ops: Vec<Matrix> = perm.iter().map(|&p| lambda_ops[p].clone()).collect();
    ops.iter()
        .zip(sizes)
        .all(|(op, &s)| op.rows() <= s)
        .then_some(ops)
}

/// Hypothesis-satisfying instance with `d ≤ 4`, `n ≤ 3`, `|K_j| ≤ 2` and
/// local frame bounds in `[1/2, 2]`. About a third of the draws reuse Λ's
/// operators in permuted order for Ω, which makes non-woven pairs common.
pub fn random_theorem_instance<R: Rng + ?Sized>(rng: &mut R) -> Instance {
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let dims_f: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(1..=s)).collect();
        let max_d = dims_f.iter().sum::<usize>().min(4);
        let d = rng.gen_range(1..=max_d);
        let theta = random_theta(rng, d);
        let lambda_ops: Vec<Matrix> = dims_f.iter().map(|&dj| random_matrix(rng, dj, d)).collect();
        let permuted = if rng.gen_bool(1.0 / 3.0) {
            permuted_operators(rng, &lambda_ops, &sizes)
        } else {
            None
        };
        let omega_ops = permuted.unwrap_or_else(|| {
            sizes
                .iter()
                .map(|&s| {
                    let dj = rng.gen_range(1..=s);
                    random_matrix(rng, dj, d)
                })
                .collect()
        });
        let lambda = GFrame::new(d, lambda_ops).expect("shapes");
        let omega = GFrame::new(d, omega_ops).expect("shapes");
        if !is_theta_gframe(&lambda, &theta) || !is_theta_gframe(&omega, &theta) {
            continue;
        }
        let local = |g: &GFrame, rng: &mut R| {
            LocalFrameSet::new(
                g.local_dims()
                    .iter()
                    .zip(&sizes)
                    .map(|(&dj, &s)| random_local_frame(rng, dj, s))
                    .collect(),
            )
            .expect("non-empty")
        };
        let local_f = local(&lambda, rng);
        let local_g = local(&omega, rng);
        return Instance::new(theta, lambda, omega, local_f, local_g).expect("consistent shapes");
    }
    panic!("no hypothesis-satisfying instance after {MAX_ATTEMPTS} attempts");
}

/// Instance with `|K_j| = 1` (hence `d_j = 1`), `d ≤ 4`, `n ≤ 4`. Local
/// frames are single nonzero scalars; no frame hypothesis is imposed.
pub fn random_singleton_instance<R: Rng + ?Sized>(rng: &mut R) -> Instance {
    let d = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=4);
    let theta = random_theta(rng, d);
    let rows = |rng: &mut R| (0..n).map(|_| random_matrix(rng, 1, d)).collect::<Vec<_>>();
    let lambda = GFrame::new(d, rows(rng)).expect("shapes");
    let omega_ops = if rng.gen_bool(0.25) {
        permuted_operators(rng, lambda.operators(), &vec![1; n]).expect("rows fit")
    } else {
        rows(rng)
    };
    let omega = GFrame::new(d, omega_ops).expect("shapes");
    let scalar = |rng: &mut R| {
        let modulus = rng.gen_range(0.5f64..2.0).sqrt();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        VectorFrame::new(1, vec![vec![Complex64::from_polar(modulus, phase)]]).expect("1-dim")
    };
    let local_f = LocalFrameSet::new((0..n).map(|_| scalar(rng)).collect()).expect("non-empty");
    let local_g = LocalFrameSet::new((0..n).map(|_| scalar(rng)).collect()).expect("non-empty");
    Instance::new(theta, lambda, omega, local_f, local_g).expect("consistent shapes")
}

/// Hypothesis-satisfying instance with rank-one functionals `Λ_j, Ω_j`,
/// `|K_j| = 1` and orthonormal local bases of `ℂ¹`.
pub fn random_corollary_instance<R: Rng + ?Sized>(rng: &mut R) -> Instance {
    for _ in 0..MAX_ATTEMPTS {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d..=4);
        let theta = random_theta(rng, d);
        let lambda_ops: Vec<Matrix> = (0..n).map(|_| random_matrix(rng, 1, d)).collect();
        let omega_ops = if rng.gen_bool(0.5) {
            permuted_operators(rng, &lambda_ops, &vec![1; n]).expect("rows fit")
        } else {
            (0..n).map(|_| random_matrix(rng, 1, d)).collect()
        };
        let lambda = GFrame::new(d, lambda_ops).expect("shapes");
        let omega = GFrame::new(d, omega_ops).expect("shapes");
        if !is_theta_gframe(&lambda, &theta) || !is_theta_gframe(&omega, &theta) {
            continue;
        }
        let local_f =
            LocalFrameSet::new((0..n).map(|_| random_onb_1d(rng)).collect()).expect("non-empty");
        let local_g =
            LocalFrameSet::new((0..n).map(|_| random_onb_1d(rng)).collect()).expect("non-empty");
        return Instance::new(theta, lambda, omega, local_f, local_g).expect("consistent shapes");
    }
    panic!("no hypothesis-satisfying instance after {MAX_ATTEMPTS} attempts");
}

const LATTICE: [(f64, f64); 5] = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)];

fn lattice_entry<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let (re, im) = LATTICE[rng.gen_range(0..LATTICE.len())];
    Complex64::new(re, im)
}

fn lattice_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::new(
        rows,
        cols,
        (0..rows * cols).map(|_| lattice_entry(rng)).collect(),
    )
    .expect("finite")
}

fn lattice_local_frame<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> VectorFrame {
    let cfg = FrameConfig::default();
    loop {
        let frame = VectorFrame::new(
            dim,
            (0..count)
                .map(|_| (0..dim).map(|_| lattice_entry(rng)).collect())
                .collect(),
        )
        .expect("shapes");
        if frame_bounds(&frame, &cfg).expect("eigensolver").is_frame {
            return frame;
        }
    }
}

/// Instance with entries drawn from `{0, ±1, ±i}` and `Θ = I`. Integer
/// lattices produce exactly parallel or vanishing induced vectors often,
/// which is what element-wise selections need to lose the frame property.
pub fn lattice_instance<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    inner_sizes: &[usize],
) -> Instance {
    let side = |rng: &mut R| {
        let dims: Vec<usize> = inner_sizes.iter().map(|&s| rng.gen_range(1..=s)).collect();
        let ops = dims
            .iter()
            .map(|&dj| lattice_matrix(rng, dj, dim))
            .collect();
        let local = dims
            .iter()
            .zip(inner_sizes)
            .map(|(&dj, &s)| lattice_local_frame(rng, dj, s))
            .collect();
        (
            GFrame::new(dim, ops).expect("shapes"),
            LocalFrameSet::new(local).expect("non-empty"),
        )
    };
    let (lambda, local_f) = side(rng);
    let (omega, local_g) = side(rng);
    Instance::new(
        OperatorTheta::identity(dim),
        lambda,
        omega,
        local_f,
        local_g,
    )
    .expect("consistent shapes")
}
