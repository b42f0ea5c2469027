//! Executable checks of the weaving equivalences on concrete instances.
//!
//! * [`verify_theorem1`]: g-frame weaving ⇔ outer-partition weaving of the
//!   induced sequences, with the bound sandwich
//!   `min(α,α′)·A_g ≤ A_ind` and `B_ind ≤ max(β,β′)·B_g`.
//! * [`verify_remark_equivalence`]: with singleton inner index sets the
//!   outer-partition and element-wise definitions coincide family by family.
//! * [`verify_corollary1`] / [`specialize_identity`]: with orthonormal
//!   one-dimensional local bases, g-frame weaving ⇔ element-wise weaving,
//!   with equal universal bounds; Θ = I reduces everything to ordinary frames.
//! * [`canonical_gap_instance`] / [`search_gap`]: instances woven under
//!   outer partitions but not element-wise.

mod generate;
mod instance;
mod search;

use std::cmp::Ordering;

pub use generate::{
    lattice_instance, random_corollary_instance, random_local_frame, random_onb_1d,
    random_singleton_instance, random_theorem_instance, random_theta, HYPOTHESIS_FLOOR,
};
pub use instance::{
    canonical_gap_instance, identical_identity_instance, swapped_functional_instance, Instance,
};
pub use search::{search_gap, GapHit, GapSearch, GapSearchParams};

use crate::error::{Error, Result};
use crate::frames::{frame_bounds, theta_frame_bounds, OperatorTheta, VectorFrame};
use crate::gframes::{local_frame_bounds, theta_gframe_bounds};
use crate::linalg::{Matrix, Vector};
use crate::weaving::{
    check_gwoven, check_woven_def1, check_woven_def3, weave_def1, weave_def3, Def3Selection,
    WeaveOptions, WeavingReport,
};

/// Half-width of the band around the verdict threshold in which optimal
/// lower bounds are treated as inconclusive.
pub const MARGIN_EPS: f64 = 1e-6;

/// Bounds below `ZERO_FLOOR · max(1, upper)` are numerically zero: the
/// family is rank-deficient relative to Θ and the verdict is not marginal.
pub const ZERO_FLOOR: f64 = 1e-12;

/// Absolute slack of the g-frame/induced-sequence bound sandwich.
pub const SANDWICH_SLACK: f64 = 1e-8;

/// Tolerance for bound equality between the two definitions with singleton
/// inner index sets.
pub const REMARK_BOUND_TOL: f64 = 1e-12;

/// Tolerance for bound equality in the orthonormal-basis corollary.
pub const COROLLARY_BOUND_TOL: f64 = 1e-9;

/// Tolerance for "local frame is an orthonormal basis".
pub const ONB_TOL: f64 = 1e-10;

/// Tolerance between Θ = I pencil bounds and ordinary frame bounds.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimId {
    Theorem1,
    RemarkEquivalence,
    Corollary1,
    IdentitySpecialization,
}

impl ClaimId {
    pub fn name(self) -> &'static str {
        match self {
            ClaimId::Theorem1 => "theorem1",
            ClaimId::RemarkEquivalence => "remark-equivalence",
            ClaimId::Corollary1 => "corollary1",
            ClaimId::IdentitySpecialization => "identity-specialization",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Hypotheses hold, no margin flag, equivalence and every inequality hold.
    Verified,
    /// Hypotheses hold and a verdict mismatch or a failed inequality was
    /// found away from the margin.
    Refuted,
    /// Inequalities hold but some lower bound sits in the margin band, so the
    /// verdict comparison is not asserted.
    Marginal,
    HypothesesNotMet,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Marginal => "marginal",
            Status::HypothesesNotMet => "hypotheses-not-met",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

/// `lhs ≤ rhs + slack`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        BoundCheck {
            name: name.into(),
            lhs,
            rhs,
            slack,
            passed: lhs <= rhs + slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledReport {
    pub label: String,
    pub report: WeavingReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub claim: ClaimId,
    pub status: Status,
    pub hypotheses: Vec<HypothesisCheck>,
    /// `None` when hypotheses were not met.
    pub left_verdict: Option<bool>,
    pub right_verdict: Option<bool>,
    /// Both verdicts computed and equal.
    pub equivalence_holds: bool,
    pub inequalities: Vec<BoundCheck>,
    pub margin_flag: bool,
    pub witness: Option<String>,
    pub reports: Vec<LabeledReport>,
}

impl TheoremReport {
    fn hypotheses_not_met(claim: ClaimId, hypotheses: Vec<HypothesisCheck>) -> Self {
        TheoremReport {
            claim,
            status: Status::HypothesesNotMet,
            hypotheses,
            left_verdict: None,
            right_verdict: None,
            equivalence_holds: false,
            inequalities: Vec::new(),
            margin_flag: false,
            witness: None,
            reports: Vec::new(),
        }
    }

    fn conclude(
        claim: ClaimId,
        hypotheses: Vec<HypothesisCheck>,
        left: LabeledReport,
        right: LabeledReport,
        inequalities: Vec<BoundCheck>,
        verdict_eps: f64,
    ) -> Self {
        let margin_flag = [&left.report, &right.report]
            .iter()
            .any(|r| is_marginal(r, verdict_eps));
        let equivalence_holds = left.report.woven == right.report.woven;
        let inequalities_hold = inequalities.iter().all(|c| c.passed);
        let status = if !inequalities_hold {
            Status::Refuted
        } else if margin_flag {
            Status::Marginal
        } else if equivalence_holds {
            Status::Verified
        } else {
            Status::Refuted
        };
        let witness = [&left, &right].iter().find(|l| !l.report.woven).map(|l| {
            format!(
                "{}: {} (lower {:e})",
                l.label, l.report.witness, l.report.witness_lower
            )
        });
        TheoremReport {
            claim,
            status,
            hypotheses,
            left_verdict: Some(left.report.woven),
            right_verdict: Some(right.report.woven),
            equivalence_holds,
            inequalities,
            margin_flag,
            witness,
            reports: vec![left, right],
        }
    }

    pub fn report(&self, label: &str) -> Option<&WeavingReport> {
        self.reports
            .iter()
            .find(|l| l.label == label)
            .map(|l| &l.report)
    }
}

/// True when the universal lower bound lies within [`MARGIN_EPS`] of the
/// verdict threshold without being numerically zero.
pub fn is_marginal(report: &WeavingReport, verdict_eps: f64) -> bool {
    let zero = ZERO_FLOOR * report.universal_upper.max(1.0);
    report.universal_lower > zero && (report.universal_lower - verdict_eps).abs() < MARGIN_EPS
}

fn labeled(label: &str, report: WeavingReport) -> LabeledReport {
    LabeledReport {
        label: label.to_string(),
        report,
    }
}

/// Θ-g-frame property of Λ and Ω and the frame property of every local frame.
fn standard_hypotheses(inst: &Instance, opts: &WeaveOptions) -> Result<Vec<HypothesisCheck>> {
    let cfg = &opts.frame;
    let mut checks = Vec::new();
    for (name, g) in [("lambda", inst.lambda()), ("omega", inst.omega())] {
        let b = theta_gframe_bounds(g, inst.theta(), cfg)?;
        checks.push(HypothesisCheck {
            name: format!("{name} is a theta-g-frame"),
            passed: b.is_frame,
            value: b.lower,
        });
    }
    for (name, local) in [("local_f", inst.local_f()), ("local_g", inst.local_g())] {
        for (j, frame) in local.frames().iter().enumerate() {
            let b = frame_bounds(frame, cfg)?;
            checks.push(HypothesisCheck {
                name: format!("{name}[{j}] is a frame"),
                passed: b.is_frame,
                value: b.lower,
            });
        }
    }
    Ok(checks)
}

/// g-frame weaving versus outer-partition weaving of the induced sequences.
pub fn verify_theorem1(inst: &Instance, opts: &WeaveOptions) -> Result<TheoremReport> {
    let hypotheses = standard_hypotheses(inst, opts)?;
    if hypotheses.iter().any(|h| !h.passed) {
        return Ok(TheoremReport::hypotheses_not_met(
            ClaimId::Theorem1,
            hypotheses,
        ));
    }
    let gw = check_gwoven(inst.lambda(), inst.omega(), inst.theta(), opts)?;
    let d1 = check_woven_def1(&inst.induced_f(), &inst.induced_g(), inst.theta(), opts)?;
    let (alpha, beta) = local_frame_bounds(inst.local_f(), &opts.frame)?;
    let (alpha2, beta2) = local_frame_bounds(inst.local_g(), &opts.frame)?;
    let inequalities = vec![
        BoundCheck::new(
            "min(alpha, alpha') * A_g <= A_ind",
            alpha.min(alpha2) * gw.universal_lower,
            d1.universal_lower,
            SANDWICH_SLACK,
        ),
        BoundCheck::new(
            "B_ind <= max(beta, beta') * B_g",
            d1.universal_upper,
            beta.max(beta2) * gw.universal_upper,
            SANDWICH_SLACK,
        ),
    ];
    Ok(TheoremReport::conclude(
        ClaimId::Theorem1,
        hypotheses,
        labeled("gframe", gw),
        labeled("def1", d1),
        inequalities,
        opts.frame.verdict_eps,
    ))
}

fn cmp_vectors(a: &Vector, b: &Vector) -> Ordering {
    a.iter()
        .flat_map(|z| [z.re, z.im])
        .zip(b.iter().flat_map(|z| [z.re, z.im]))
        .map(|(x, y)| x.total_cmp(&y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Vectors of a family in canonical (entrywise lexicographic) order.
pub fn canonical_multiset(frame: &VectorFrame) -> Vec<Vector> {
    let mut v = frame.vectors().to_vec();
    v.sort_by(cmp_vectors);
    v
}

fn require_singletons(inst: &Instance) -> Result<()> {
    for (name, local) in [("local_f", inst.local_f()), ("local_g", inst.local_g())] {
        if let Some(j) = local.inner_sizes().iter().position(|&s| s != 1) {
            return Err(Error::Precondition(format!(
                "{name}[{j}] has {} elements; singleton inner index sets required",
                local.inner_sizes()[j]
            )));
        }
    }
    Ok(())
}

/// Outer-partition versus element-wise weaving when every inner index set
/// is a singleton.
///
/// Besides comparing the two reports, every element-wise selection's family
/// is compared literally with the family of the outer partition
/// `σ = {j : σ_j = K_j}`: with `|K_j| = 1` each `σ_j` is either `K_j` or
/// `∅`, so the two families must coincide.
pub fn verify_remark_equivalence(inst: &Instance, opts: &WeaveOptions) -> Result<TheoremReport> {
    require_singletons(inst)?;
    let f = inst.induced_f();
    let g = inst.induced_g();
    let d1 = check_woven_def1(&f, &g, inst.theta(), opts)?;
    let d3 = check_woven_def3(&f, &g, inst.theta(), opts)?;

    let n = f.outer_count();
    let sizes = f.inner_sizes();
    let mut mismatches = 0usize;
    for index in 0..(1u64 << n) {
        let sel = Def3Selection {
            sigma: (0..n).map(|j| vec![(index >> j) & 1 == 1]).collect(),
        };
        debug_assert_eq!(sel.sigma.iter().map(Vec::len).collect::<Vec<_>>(), sizes);
        let w3 = weave_def3(&f, &g, &sel)?;
        let w1 = weave_def1(&f, &g, &sel.full_blocks())?;
        if canonical_multiset(&w3) != canonical_multiset(&w1) {
            mismatches += 1;
        }
    }

    let inequalities = vec![
        BoundCheck::new(
            "|lower(def1) - lower(def3)|",
            (d1.universal_lower - d3.universal_lower).abs(),
            0.0,
            REMARK_BOUND_TOL,
        ),
        BoundCheck::new(
            "|upper(def1) - upper(def3)|",
            (d1.universal_upper - d3.universal_upper).abs(),
            0.0,
            REMARK_BOUND_TOL,
        ),
        BoundCheck::new("family mismatches", mismatches as f64, 0.0, 0.0),
    ];
    let mut report = TheoremReport::conclude(
        ClaimId::RemarkEquivalence,
        Vec::new(),
        labeled("def1", d1),
        labeled("def3", d3),
        inequalities,
        opts.frame.verdict_eps,
    );
    // Both checkers see the very same families, so the verdicts must agree
    // exactly; the margin band does not apply.
    if report.inequalities.iter().all(|c| c.passed) {
        report.status = if report.equivalence_holds {
            Status::Verified
        } else {
            Status::Refuted
        };
    }
    Ok(report)
}

fn corollary_preconditions(inst: &Instance, opts: &WeaveOptions) -> Result<()> {
    require_singletons(inst)?;
    for (name, local) in [("local_f", inst.local_f()), ("local_g", inst.local_g())] {
        for (j, frame) in local.frames().iter().enumerate() {
            let b = frame_bounds(frame, &opts.frame)?;
            if (b.lower - 1.0).abs() > ONB_TOL || (b.upper - 1.0).abs() > ONB_TOL {
                return Err(Error::Precondition(format!(
                    "{name}[{j}] is not an orthonormal basis (bounds {} {})",
                    b.lower, b.upper
                )));
            }
        }
    }
    Ok(())
}

/// g-frame weaving versus element-wise weaving of the induced sequences for
/// orthonormal one-dimensional local bases.
///
/// The report also carries the outer-partition report (label `def1`) so
/// callers can check the refinement order between the two definitions.
pub fn verify_corollary1(inst: &Instance, opts: &WeaveOptions) -> Result<TheoremReport> {
    corollary_preconditions(inst, opts)?;
    let hypotheses = standard_hypotheses(inst, opts)?;
    if hypotheses.iter().any(|h| !h.passed) {
        return Ok(TheoremReport::hypotheses_not_met(
            ClaimId::Corollary1,
            hypotheses,
        ));
    }
    let f = inst.induced_f();
    let g = inst.induced_g();
    let gw = check_gwoven(inst.lambda(), inst.omega(), inst.theta(), opts)?;
    let d3 = check_woven_def3(&f, &g, inst.theta(), opts)?;
    let d1 = check_woven_def1(&f, &g, inst.theta(), opts)?;
    let inequalities = vec![
        BoundCheck::new(
            "|A_g - A_def3|",
            (gw.universal_lower - d3.universal_lower).abs(),
            0.0,
            COROLLARY_BOUND_TOL,
        ),
        BoundCheck::new(
            "|B_g - B_def3|",
            (gw.universal_upper - d3.universal_upper).abs(),
            0.0,
            COROLLARY_BOUND_TOL,
        ),
    ];
    let mut report = TheoremReport::conclude(
        ClaimId::Corollary1,
        hypotheses,
        labeled("gframe", gw),
        labeled("def3", d3),
        inequalities,
        opts.frame.verdict_eps,
    );
    report.reports.push(labeled("def1", d1));
    Ok(report)
}

/// Re-runs [`verify_corollary1`] with Θ replaced by the identity matrix and
/// checks, on every element-wise selection, that the Θ-frame bounds computed
/// through the pencil agree with the ordinary frame bounds.
pub fn specialize_identity(inst: &Instance, opts: &WeaveOptions) -> Result<TheoremReport> {
    corollary_preconditions(inst, opts)?;
    let explicit_identity = OperatorTheta::new(Matrix::identity(inst.dim()))?;
    let special = inst.with_theta(explicit_identity.clone())?;
    let mut report = verify_corollary1(&special, opts)?;
    report.claim = ClaimId::IdentitySpecialization;
    if report.status == Status::HypothesesNotMet {
        return Ok(report);
    }

    let f = special.induced_f();
    let g = special.induced_g();
    let n = f.outer_count();
    let mut worst_lower = 0.0f64;
    let mut worst_upper = 0.0f64;
    let mut verdict_mismatches = 0usize;
    for index in 0..(1u64 << n) {
        let sel = Def3Selection {
            sigma: (0..n).map(|j| vec![(index >> j) & 1 == 1]).collect(),
        };
        let family = weave_def3(&f, &g, &sel)?;
        let via_theta = theta_frame_bounds(&family, &explicit_identity, &opts.frame)?;
        let plain = frame_bounds(&family, &opts.frame)?;
        worst_lower = worst_lower.max((via_theta.lower - plain.lower).abs());
        worst_upper = worst_upper.max((via_theta.upper - plain.upper).abs());
        if via_theta.is_frame != plain.is_frame {
            verdict_mismatches += 1;
        }
    }
    report.inequalities.extend([
        BoundCheck::new("max |A_theta=I - A_frame|", worst_lower, 0.0, IDENTITY_TOL),
        BoundCheck::new("max |B_theta=I - B_frame|", worst_upper, 0.0, IDENTITY_TOL),
        BoundCheck::new(
            "theta=I vs frame verdict mismatches",
            verdict_mismatches as f64,
            0.0,
            0.0,
        ),
    ]);
    if report.inequalities.iter().any(|c| !c.passed) {
        report.status = Status::Refuted;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{FrameConfig, ThetaSide};
    use crate::weaving::WeaveMode;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn opts() -> WeaveOptions {
        WeaveOptions::default()
    }

    fn e(i: usize) -> Vector {
        let mut v = vec![Complex64::new(0.0, 0.0); 2];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn canonical_gap_certificates() {
        let inst = canonical_gap_instance();
        let f = inst.induced_f();
        let g = inst.induced_g();
        let theta = inst.theta();
        let d1 = check_woven_def1(&f, &g, theta, &opts()).unwrap();
        assert!(d1.woven);
        assert_eq!(d1.selections_checked, 2);
        assert_eq!((d1.universal_lower, d1.universal_upper), (1.0, 1.0));

        let d3 = check_woven_def3(&f, &g, theta, &opts()).unwrap();
        assert!(!d3.woven);
        assert_eq!(d3.selections_checked, 4);
        assert_eq!(d3.witness.to_def3().sigma, vec![vec![true, false]]);
        assert_eq!(
            weave_def3(&f, &g, &d3.witness.to_def3()).unwrap().vectors(),
            &[e(0), e(0)]
        );
        assert!(d3.witness_lower < 1e-12);

        assert!(
            check_gwoven(inst.lambda(), inst.omega(), theta, &opts())
                .unwrap()
                .woven
        );
    }

    #[test]
    fn canonical_gap_theorem_and_remark() {
        let inst = canonical_gap_instance();
        let r = verify_theorem1(&inst, &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!((r.left_verdict, r.right_verdict), (Some(true), Some(true)));
        assert!(r.equivalence_holds);

        assert!(matches!(
            verify_remark_equivalence(&inst, &opts()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            verify_corollary1(&inst, &opts()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn canonical_gap_stable_under_theta_side() {
        let inst = canonical_gap_instance();
        for side in [ThetaSide::Adjoint, ThetaSide::Direct] {
            let o = WeaveOptions {
                frame: FrameConfig {
                    theta_side: side,
                    ..FrameConfig::default()
                },
                ..opts()
            };
            let f = inst.induced_f();
            let g = inst.induced_g();
            assert!(check_woven_def1(&f, &g, inst.theta(), &o).unwrap().woven);
            assert!(!check_woven_def3(&f, &g, inst.theta(), &o).unwrap().woven);
            assert!(
                check_gwoven(inst.lambda(), inst.omega(), inst.theta(), &o)
                    .unwrap()
                    .woven
            );
        }
    }

    #[test]
    fn theorem1_examples() {
        let r = verify_theorem1(&identical_identity_instance(), &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        for label in ["gframe", "def1"] {
            let rep = r.report(label).unwrap();
            assert!(rep.woven);
            assert_eq!((rep.universal_lower, rep.universal_upper), (1.0, 1.0));
        }

        let r = verify_theorem1(&swapped_functional_instance(), &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(
            (r.left_verdict, r.right_verdict),
            (Some(false), Some(false))
        );
        assert!(!r.margin_flag);
        assert!(r.witness.is_some());
    }

    #[test]
    fn theorem1_hypothesis_failure() {
        // Λ = {row(1 0)} is not a g-frame for ℂ²
        let row = Matrix::from_real_rows(&[&[1.0, 0.0]]).unwrap();
        let g = crate::gframes::GFrame::new(2, vec![row]).unwrap();
        let local =
            crate::gframes::LocalFrameSet::new(vec![VectorFrame::standard_basis(1)]).unwrap();
        let inst = Instance::new(
            OperatorTheta::identity(2),
            g.clone(),
            g,
            local.clone(),
            local,
        )
        .unwrap();
        let r = verify_theorem1(&inst, &opts()).unwrap();
        assert_eq!(r.status, Status::HypothesesNotMet);
        assert_eq!(r.left_verdict, None);
        assert!(!r.hypotheses[0].passed);
    }

    #[test]
    fn remark_examples() {
        let r = verify_remark_equivalence(&swapped_functional_instance(), &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(
            (r.left_verdict, r.right_verdict),
            (Some(false), Some(false))
        );
        let d1 = r.report("def1").unwrap();
        let d3 = r.report("def3").unwrap();
        assert_eq!(d1.witness.bits, d3.witness.bits);

        let same = swapped_functional_instance();
        let ident = Instance::new(
            same.theta().clone(),
            same.lambda().clone(),
            same.lambda().clone(),
            same.local_f().clone(),
            same.local_f().clone(),
        )
        .unwrap();
        let r = verify_remark_equivalence(&ident, &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.left_verdict, Some(true));
        let d1 = r.report("def1").unwrap();
        assert_eq!((d1.universal_lower, d1.universal_upper), (1.0, 1.0));
    }

    #[test]
    fn corollary_examples() {
        let r = verify_corollary1(&swapped_functional_instance(), &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(
            (r.left_verdict, r.right_verdict),
            (Some(false), Some(false))
        );

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let inst = random_corollary_instance(&mut rng);
            let r = verify_corollary1(&inst, &opts()).unwrap();
            assert!(
                matches!(r.status, Status::Verified | Status::Marginal),
                "{r:?}"
            );
            let s = specialize_identity(&inst, &opts()).unwrap();
            assert!(
                matches!(s.status, Status::Verified | Status::Marginal),
                "{s:?}"
            );
            assert_eq!(s.claim, ClaimId::IdentitySpecialization);
        }

        // non-ONB local frame
        let inst = random_singleton_instance(&mut ChaCha8Rng::seed_from_u64(1));
        assert!(matches!(
            verify_corollary1(&inst, &opts()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn identity_specialization_examples() {
        let r = specialize_identity(&swapped_functional_instance(), &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.left_verdict, Some(false));

        let base = swapped_functional_instance();
        let same = Instance::new(
            base.theta().clone(),
            base.lambda().clone(),
            base.lambda().clone(),
            base.local_f().clone(),
            base.local_f().clone(),
        )
        .unwrap();
        let r = specialize_identity(&same, &opts()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!((r.left_verdict, r.right_verdict), (Some(true), Some(true)));
    }

    #[test]
    fn theorem1_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut woven = 0;
        for _ in 0..40 {
            let inst = random_theorem_instance(&mut rng);
            let r = verify_theorem1(&inst, &opts()).unwrap();
            assert!(r.inequalities.iter().all(|c| c.passed), "{r:?}");
            if !r.margin_flag {
                assert_eq!(r.status, Status::Verified);
            }
            woven += usize::from(r.left_verdict == Some(true));
        }
        assert!(woven > 0 && woven < 40);
    }

    #[test]
    fn witness_mode_is_recorded() {
        let inst = canonical_gap_instance();
        let d3 =
            check_woven_def3(&inst.induced_f(), &inst.induced_g(), inst.theta(), &opts()).unwrap();
        assert_eq!(d3.mode, WeaveMode::Def3);
    }
}
