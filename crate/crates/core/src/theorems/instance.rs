use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{OperatorTheta, VectorFrame};
use crate::gframes::{induce, GFrame, IndexedFamily, LocalFrameSet};
use crate::linalg::Matrix;

/// A full hypothesis set: Θ, two g-frames and a local frame set for each.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: Option<String>,
    pub seed: Option<u64>,
    theta: OperatorTheta,
    lambda: GFrame,
    omega: GFrame,
    local_f: LocalFrameSet,
    local_g: LocalFrameSet,
}

impl Instance {
    pub fn new(
        theta: OperatorTheta,
        lambda: GFrame,
        omega: GFrame,
        local_f: LocalFrameSet,
        local_g: LocalFrameSet,
    ) -> Result<Self> {
        let d = theta.dim();
        for g in [&lambda, &omega] {
            if g.ambient_dim() != d {
                return Err(Error::AmbientDimMismatch {
                    left: d,
                    right: g.ambient_dim(),
                });
            }
        }
        if lambda.len() != omega.len() {
            return Err(Error::OuterCountMismatch {
                left: lambda.len(),
                right: omega.len(),
            });
        }
        local_f.check_pairs_with(&lambda)?;
        local_g.check_pairs_with(&omega)?;
        Ok(Instance {
            name: None,
            seed: None,
            theta,
            lambda,
            omega,
            local_f,
            local_g,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    /// Outer index count `n`.
    pub fn outer_count(&self) -> usize {
        self.lambda.len()
    }

    pub fn theta(&self) -> &OperatorTheta {
        &self.theta
    }

    pub fn lambda(&self) -> &GFrame {
        &self.lambda
    }

    pub fn omega(&self) -> &GFrame {
        &self.omega
    }

    pub fn local_f(&self) -> &LocalFrameSet {
        &self.local_f
    }

    pub fn local_g(&self) -> &LocalFrameSet {
        &self.local_g
    }

    /// Same instance with Θ replaced.
    pub fn with_theta(&self, theta: OperatorTheta) -> Result<Instance> {
        let mut out = Instance::new(
            theta,
            self.lambda.clone(),
            self.omega.clone(),
            self.local_f.clone(),
            self.local_g.clone(),
        )?;
        out.name = self.name.clone();
        out.seed = self.seed;
        Ok(out)
    }

    /// `{Λ_j* f_jk}`.
    pub fn induced_f(&self) -> IndexedFamily {
        induce(&self.lambda, &self.local_f).expect("validated on construction")
    }

    /// `{Ω_j* g_jk}`.
    pub fn induced_g(&self) -> IndexedFamily {
        induce(&self.omega, &self.local_g).expect("validated on construction")
    }
}

fn unit(i: usize, d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// `d = 2`, `n = 1`, `Θ = I`, `Λ_1 = Ω_1 = I`, local frames `{e1, e2}` and
/// `{e2, e1}`.
///
/// Both induced families are the same orthonormal basis, so the pair is
/// woven under outer partitions with bounds (1, 1); the element-wise
/// selection `σ_1 = {1}` yields `{e1, e1}`, so it is not woven element-wise.
pub fn canonical_gap_instance() -> Instance {
    let ident = GFrame::new(2, vec![Matrix::identity(2)]).expect("2x2");
    let local_f = LocalFrameSet::new(vec![
        VectorFrame::new(2, vec![unit(0, 2), unit(1, 2)]).expect("2-dim")
    ])
    .expect("one frame");
    let local_g = LocalFrameSet::new(vec![
        VectorFrame::new(2, vec![unit(1, 2), unit(0, 2)]).expect("2-dim")
    ])
    .expect("one frame");
    Instance::new(
        OperatorTheta::identity(2),
        ident.clone(),
        ident,
        local_f,
        local_g,
    )
    .expect("consistent shapes")
    .with_name("canonical-gap")
}

/// `Λ = {row(1 0), row(0 1)}`, `Ω` with the rows swapped, local spaces `ℂ¹`
/// with basis `{1}`, `Θ = I`. Not woven under any definition.
pub fn swapped_functional_instance() -> Instance {
    let row = |x: f64, y: f64| Matrix::from_real_rows(&[&[x, y]]).expect("1x2");
    let lambda = GFrame::new(2, vec![row(1.0, 0.0), row(0.0, 1.0)]).expect("1x2 rows");
    let omega = GFrame::new(2, vec![row(0.0, 1.0), row(1.0, 0.0)]).expect("1x2 rows");
    let onb = || LocalFrameSet::new(vec![VectorFrame::standard_basis(1); 2]).expect("two frames");
    Instance::new(OperatorTheta::identity(2), lambda, omega, onb(), onb())
        .expect("consistent shapes")
        .with_name("swapped-functionals")
}

/// `Λ = Ω = {I on ℂ²}` with the standard basis locally.
pub fn identical_identity_instance() -> Instance {
    let ident = GFrame::new(2, vec![Matrix::identity(2)]).expect("2x2");
    let onb = || LocalFrameSet::new(vec![VectorFrame::standard_basis(2)]).expect("one frame");
    Instance::new(
        OperatorTheta::identity(2),
        ident.clone(),
        ident,
        onb(),
        onb(),
    )
    .expect("consistent shapes")
    .with_name("identical-identity")
}
