//! g-frames `{Λ_j : ℂ^d → ℂ^{d_j}}`, local frames for the spaces `ℂ^{d_j}`,
//! and the induced sequences `{Λ_j* f_jk}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{
    frame_bounds, theta_bounds_of_operator, FrameBounds, FrameConfig, OperatorTheta, VectorFrame,
};
use crate::linalg::{Matrix, Vector};

/// A finite g-frame candidate: operators `Λ_j` of shape `d_j × d`, outer
/// index set `{1..n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GFrame {
    ambient_dim: usize,
    operators: Vec<Matrix>,
}

impl GFrame {
    pub fn new(ambient_dim: usize, operators: Vec<Matrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidArgument(
                "a g-frame needs at least one operator".into(),
            ));
        }
        for op in &operators {
            if op.cols() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: op.cols(),
                });
            }
            if op.rows() == 0 {
                return Err(Error::InvalidArgument("operator with zero rows".into()));
            }
        }
        Ok(GFrame {
            ambient_dim,
            operators,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    /// Number of operators `n`.
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Local dimensions `d_j`.
    pub fn local_dims(&self) -> Vec<usize> {
        self.operators.iter().map(Matrix::rows).collect()
    }

    /// `{Λ_j}_{j∈σ} ∪ {Ω_j}_{j∉σ}`, with `sigma[j]` selecting `self`.
    pub fn mixed(&self, other: &GFrame, sigma: &[bool]) -> Result<GFrame> {
        check_gpair(self, other)?;
        let operators = sigma
            .iter()
            .zip(self.operators.iter().zip(&other.operators))
            .map(|(&take_self, (a, b))| if take_self { a.clone() } else { b.clone() })
            .collect();
        GFrame::new(self.ambient_dim, operators)
    }
}

pub(crate) fn check_gpair(a: &GFrame, b: &GFrame) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::AmbientDimMismatch {
            left: a.ambient_dim,
            right: b.ambient_dim,
        });
    }
    if a.len() != b.len() {
        return Err(Error::OuterCountMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Per-j local frames `{f_jk}_{k∈K_j}`, the j-th living in `ℂ^{d_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFrameSet {
    frames: Vec<VectorFrame>,
}

impl LocalFrameSet {
    pub fn new(frames: Vec<VectorFrame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InvalidArgument(
                "a local frame set needs at least one frame".into(),
            ));
        }
        Ok(LocalFrameSet { frames })
    }

    pub fn frames(&self) -> &[VectorFrame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Inner index set sizes `|K_j|`.
    pub fn inner_sizes(&self) -> Vec<usize> {
        self.frames.iter().map(VectorFrame::len).collect()
    }

    /// Checks that this set pairs with `g`: same count, j-th frame in `ℂ^{d_j}`.
    pub fn check_pairs_with(&self, g: &GFrame) -> Result<()> {
        if self.len() != g.len() {
            return Err(Error::OuterCountMismatch {
                left: g.len(),
                right: self.len(),
            });
        }
        for (frame, op) in self.frames.iter().zip(g.operators()) {
            if frame.dim() != op.rows() {
                return Err(Error::DimensionMismatch {
                    expected: op.rows(),
                    found: frame.dim(),
                });
            }
        }
        Ok(())
    }
}

/// A flattened induced sequence with its `(j, k)` provenance.
///
/// Stored grouped by outer index; inner indices are the positions
/// `0..|K_j|` within each group, so they are always contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedFamily {
    ambient_dim: usize,
    groups: Vec<Vec<Vector>>,
}

/// One element `(j, k, v)` of an [`IndexedFamily`]; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyElement<'a> {
    pub outer: usize,
    pub inner: usize,
    pub vector: &'a [Complex64],
}

impl IndexedFamily {
    pub fn new(ambient_dim: usize, groups: Vec<Vec<Vector>>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::EmptyFrame);
        }
        for group in &groups {
            if group.is_empty() {
                return Err(Error::InvalidArgument("empty inner index set".into()));
            }
            for v in group {
                if v.len() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        found: v.len(),
                    });
                }
            }
        }
        Ok(IndexedFamily {
            ambient_dim,
            groups,
        })
    }

    /// One element per outer index.
    pub fn singletons(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        IndexedFamily::new(ambient_dim, vectors.into_iter().map(|v| vec![v]).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn outer_count(&self) -> usize {
        self.groups.len()
    }

    pub fn inner_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn groups(&self) -> &[Vec<Vector>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elements in lexicographic `(j, k)` order.
    pub fn elements(&self) -> impl Iterator<Item = FamilyElement<'_>> {
        self.groups.iter().enumerate().flat_map(|(outer, group)| {
            group
                .iter()
                .enumerate()
                .map(move |(inner, v)| FamilyElement {
                    outer,
                    inner,
                    vector: v.as_slice(),
                })
        })
    }

    pub fn to_frame(&self) -> VectorFrame {
        VectorFrame::new(
            self.ambient_dim,
            self.groups.iter().flatten().cloned().collect(),
        )
        .expect("validated on construction")
    }
}

/// `S_g = Σ_j Λ_j* Λ_j`.
pub fn gframe_operator(g: &GFrame) -> Matrix {
    let d = g.ambient_dim;
    let mut s = Matrix::zeros(d, d);
    for op in &g.operators {
        let term = op.adjoint().matmul(op).expect("d_j x d operator");
        s = s.add(&term).expect("d x d");
    }
    s
}

pub fn theta_gframe_bounds(
    g: &GFrame,
    theta: &OperatorTheta,
    cfg: &FrameConfig,
) -> Result<FrameBounds> {
    theta_bounds_of_operator(&gframe_operator(g), theta, cfg)
}

/// The induced sequence `{Λ_j* f_jk}`, ordered lexicographically in `(j, k)`.
pub fn induce(g: &GFrame, local: &LocalFrameSet) -> Result<IndexedFamily> {
    local.check_pairs_with(g)?;
    let groups = g
        .operators
        .iter()
        .zip(&local.frames)
        .map(|(op, frame)| {
            let adj = op.adjoint();
            frame
                .vectors()
                .iter()
                .map(|f| adj.mul_vec(f).map_err(Error::from))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    IndexedFamily::new(g.ambient_dim, groups)
}

/// Uniform local bounds `(α, β)`: the least optimal lower bound and the
/// greatest optimal upper bound across all local frames.
pub fn local_frame_bounds(local: &LocalFrameSet, cfg: &FrameConfig) -> Result<(f64, f64)> {
    let mut alpha = f64::INFINITY;
    let mut beta = 0.0f64;
    for frame in &local.frames {
        let b = frame_bounds(frame, cfg)?;
        alpha = alpha.min(b.lower);
        beta = beta.max(b.upper);
    }
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{analysis_energy, theta_frame_bounds};
    use crate::linalg::{inner, norm_sqr};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> FrameConfig {
        FrameConfig::default()
    }

    fn row(x: f64, y: f64) -> Matrix {
        Matrix::from_real_rows(&[&[x, y]]).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows * cols)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Matrix::new(rows, cols, data).unwrap()
    }

    fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
        (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    /// Random g-frame on ℂ^d with local frames of 1..=3 vectors per j.
    fn random_pair(rng: &mut ChaCha8Rng) -> (GFrame, LocalFrameSet) {
        let d = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=3);
        let mut ops = Vec::new();
        let mut frames = Vec::new();
        for _ in 0..n {
            let dj = rng.gen_range(1..=3);
            ops.push(random_matrix(rng, dj, d));
            let count = rng.gen_range(1..=3);
            frames.push(
                VectorFrame::new(dj, (0..count).map(|_| random_vector(rng, dj)).collect()).unwrap(),
            );
        }
        (
            GFrame::new(d, ops).unwrap(),
            LocalFrameSet::new(frames).unwrap(),
        )
    }

    #[test]
    fn gframe_operator_examples() {
        let g = GFrame::new(2, vec![Matrix::identity(2)]).unwrap();
        assert_eq!(gframe_operator(&g), Matrix::identity(2));
        let g = GFrame::new(2, vec![row(1.0, 0.0), row(0.0, 1.0)]).unwrap();
        assert_eq!(gframe_operator(&g), Matrix::identity(2));
        assert!(matches!(
            GFrame::new(2, vec![Matrix::identity(3)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gframe_operator_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let (g, _) = random_pair(&mut rng);
            let f = random_vector(&mut rng, g.ambient_dim());
            let quad = inner(&gframe_operator(&g).mul_vec(&f).unwrap(), &f).re;
            let direct: f64 = g
                .operators()
                .iter()
                .map(|op| norm_sqr(&op.mul_vec(&f).unwrap()))
                .sum();
            assert!((quad - direct).abs() <= 1e-10 * direct.max(1.0));
        }
    }

    #[test]
    fn theta_gframe_bounds_examples() {
        let g = GFrame::new(2, vec![Matrix::identity(2)]).unwrap();
        let b = theta_gframe_bounds(&g, &OperatorTheta::identity(2), &cfg()).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));

        // Oracle on range(Θ) = span{e1}: ‖Λf‖²/‖Θ*f‖² = |f1|²/|f1|² = 1.
        let p = Matrix::diag_real(&[1.0, 0.0]);
        let g = GFrame::new(2, vec![p.clone()]).unwrap();
        let b = theta_gframe_bounds(&g, &OperatorTheta::new(p).unwrap(), &cfg()).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);

        let g = GFrame::new(2, vec![row(1.0, 0.0)]).unwrap();
        let b = theta_gframe_bounds(&g, &OperatorTheta::identity(2), &cfg()).unwrap();
        assert_eq!(b.lower, 0.0);
        assert!(!b.is_frame);
    }

    #[test]
    fn induce_examples() {
        let g = GFrame::new(2, vec![Matrix::identity(2)]).unwrap();
        let local = LocalFrameSet::new(vec![VectorFrame::standard_basis(2)]).unwrap();
        let fam = induce(&g, &local).unwrap();
        let elems: Vec<_> = fam
            .elements()
            .map(|e| (e.outer, e.inner, e.vector.to_vec()))
            .collect();
        assert_eq!(
            elems,
            vec![
                (0, 0, vec![c(1.0, 0.0), c(0.0, 0.0)]),
                (0, 1, vec![c(0.0, 0.0), c(1.0, 0.0)])
            ]
        );

        let g = GFrame::new(2, vec![Matrix::diag_real(&[2.0, 0.0])]).unwrap();
        let fam = induce(&g, &local).unwrap();
        assert_eq!(
            fam.groups()[0],
            vec![
                vec![c(2.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0)]
            ]
        );

        let bad = LocalFrameSet::new(vec![VectorFrame::standard_basis(3)]).unwrap();
        assert!(matches!(
            induce(&g, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn induced_energy_matches_local_energies() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let (g, local) = random_pair(&mut rng);
            let fam = induce(&g, &local).unwrap();
            let f = random_vector(&mut rng, g.ambient_dim());
            let lhs = analysis_energy(&fam.to_frame(), &f).unwrap();
            let rhs: f64 = g
                .operators()
                .iter()
                .zip(local.frames())
                .map(|(op, frame)| analysis_energy(frame, &op.mul_vec(&f).unwrap()).unwrap())
                .sum();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
            // per-j adjoint identity
            for (j, (op, frame)) in g.operators().iter().zip(local.frames()).enumerate() {
                let induced: f64 = fam.groups()[j]
                    .iter()
                    .map(|v| inner(&f, v).norm_sqr())
                    .sum();
                let local_e = analysis_energy(frame, &op.mul_vec(&f).unwrap()).unwrap();
                assert!((induced - local_e).abs() <= 1e-10 * local_e.max(1.0));
            }
        }
    }

    #[test]
    fn sandwich_and_onb_collapse() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let (g, local) = random_pair(&mut rng);
            let (alpha, beta) = local_frame_bounds(&local, &cfg()).unwrap();
            let fam = induce(&g, &local).unwrap().to_frame();
            let s_g = gframe_operator(&g);
            for _ in 0..5 {
                let f = random_vector(&mut rng, g.ambient_dim());
                let g_energy = inner(&s_g.mul_vec(&f).unwrap(), &f).re;
                let e = analysis_energy(&fam, &f).unwrap();
                assert!(alpha * g_energy <= e + 1e-9);
                assert!(e <= beta * g_energy + 1e-9);
            }

            let onb = LocalFrameSet::new(
                g.local_dims()
                    .into_iter()
                    .map(VectorFrame::standard_basis)
                    .collect(),
            )
            .unwrap();
            let theta = OperatorTheta::identity(g.ambient_dim());
            let induced =
                theta_frame_bounds(&induce(&g, &onb).unwrap().to_frame(), &theta, &cfg()).unwrap();
            let gb = theta_gframe_bounds(&g, &theta, &cfg()).unwrap();
            assert!((induced.lower - gb.lower).abs() < 1e-9);
            assert!((induced.upper - gb.upper).abs() < 1e-9);
        }
    }

    #[test]
    fn local_bounds_examples() {
        let onbs = LocalFrameSet::new(vec![
            VectorFrame::standard_basis(2),
            VectorFrame::standard_basis(1),
        ])
        .unwrap();
        assert_eq!(local_frame_bounds(&onbs, &cfg()).unwrap(), (1.0, 1.0));
        // second frame: diag(1/2, 2) as an orthogonal family
        let skewed =
            VectorFrame::from_real(2, &[&[0.5f64.sqrt(), 0.0], &[0.0, 2f64.sqrt()]]).unwrap();
        let set = LocalFrameSet::new(vec![VectorFrame::standard_basis(2), skewed]).unwrap();
        let (a, b) = local_frame_bounds(&set, &cfg()).unwrap();
        assert!((a - 0.5).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn local_bounds_match_per_frame_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let (_, local) = random_pair(&mut rng);
            let (a, b) = local_frame_bounds(&local, &cfg()).unwrap();
            let per: Vec<_> = local
                .frames()
                .iter()
                .map(|f| frame_bounds(f, &cfg()).unwrap())
                .collect();
            assert!(per.iter().all(|p| p.lower >= a && p.upper <= b));
            assert!(per.iter().any(|p| p.lower == a) && per.iter().any(|p| p.upper == b));
        }
    }

    #[test]
    fn mixed_gframe_selects_per_index() {
        let a = GFrame::new(2, vec![row(1.0, 0.0), row(0.0, 1.0)]).unwrap();
        let b = GFrame::new(2, vec![row(0.0, 1.0), row(1.0, 0.0)]).unwrap();
        let m = a.mixed(&b, &[true, false]).unwrap();
        assert_eq!(m.operators(), &[row(1.0, 0.0), row(1.0, 0.0)]);
        let short = GFrame::new(2, vec![row(1.0, 0.0)]).unwrap();
        assert!(matches!(
            a.mixed(&short, &[true]),
            Err(Error::OuterCountMismatch { .. })
        ));
    }
}
