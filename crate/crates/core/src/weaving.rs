//! Exhaustive weaving checks.
//!
//! Three notions are decided here, each by enumerating every admissible
//! selection and computing optimal Θ-frame (or Θ-g-frame) bounds of the
//! woven family:
//!
//! * **outer-partition weaving**: for `σ ⊆ {1..n}`, take the whole j-th
//!   block of `F` when `j ∈ σ` and the whole j-th block of `G` otherwise.
//!   Inner index sets of `F` and `G` may differ.
//! * **element-wise weaving**: inside every outer index j, pick `F`'s
//!   element at each `k ∈ σ_j` and `G`'s element at each `k ∉ σ_j`. Requires
//!   identical inner index sets.
//! * **g-frame weaving**: `{Λ_j}_{j∈σ} ∪ {Ω_j}_{j∉σ}` for every `σ`.
//!
//! Selections are encoded as a flat bit vector (one bit per outer index, or
//! one bit per `(j, k)` element in lexicographic order); bit `e` has weight
//! `2^e`. Enumeration runs over `0..2^bits` in that encoding and ties for the
//! witness are broken towards the smallest encoded value, so reports do not
//! depend on how the rayon pool schedules evaluations.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{theta_frame_bounds, FrameBounds, FrameConfig, OperatorTheta, VectorFrame};
use crate::gframes::{check_gpair, theta_gframe_bounds, GFrame, IndexedFamily};

/// Default cap on the number of selections an exact check may enumerate.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// Selections whose lower bound is within this of the minimum tie for witness.
pub const WITNESS_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeaveMode {
    /// Outer-partition weaving of two indexed families.
    Def1,
    /// Element-wise weaving of two indexed families.
    Def3,
    /// Weaving of two g-frames.
    GFrame,
}

impl WeaveMode {
    pub fn name(self) -> &'static str {
        match self {
            WeaveMode::Def1 => "def1",
            WeaveMode::Def3 => "def3",
            WeaveMode::GFrame => "gframe",
        }
    }
}

impl fmt::Display for WeaveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeaveOptions {
    pub frame: FrameConfig,
    pub cap: u64,
    /// Keep per-selection bounds in the report.
    pub full_table: bool,
}

impl Default for WeaveOptions {
    fn default() -> Self {
        WeaveOptions {
            frame: FrameConfig::default(),
            cap: DEFAULT_CAP,
            full_table: false,
        }
    }
}

/// `σ ⊆ {1..n}`; `sigma[j]` is true when block j comes from the first family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Def1Selection {
    pub sigma: Vec<bool>,
}

impl Def1Selection {
    /// From 0-based outer indices.
    pub fn from_indices(n: usize, members: &[usize]) -> Self {
        let mut sigma = vec![false; n];
        for &j in members {
            sigma[j] = true;
        }
        Def1Selection { sigma }
    }

    pub fn all(n: usize) -> Self {
        Def1Selection {
            sigma: vec![true; n],
        }
    }

    pub fn none(n: usize) -> Self {
        Def1Selection {
            sigma: vec![false; n],
        }
    }
}

/// `(σ_j)_j` with `σ_j ⊆ K_j`; `sigma[j][k]` is true when element (j, k)
/// comes from the first family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Def3Selection {
    pub sigma: Vec<Vec<bool>>,
}

impl Def3Selection {
    /// Canonical form of a `(τ_0, {σ_j}_{j∈τ_0})` pair: `σ_j` is kept for
    /// `j ∈ τ_0` and replaced by `∅` elsewhere.
    pub fn from_tau(tau0: &[bool], sigma: Vec<Vec<bool>>) -> Self {
        let sigma = sigma
            .into_iter()
            .zip(tau0)
            .map(|(s, &in_tau)| if in_tau { s } else { vec![false; s.len()] })
            .collect();
        Def3Selection { sigma }
    }

    /// The element-wise selection reproducing an outer partition:
    /// `σ_j = K_j` for `j ∈ σ`, `∅` otherwise.
    pub fn from_def1(sel: &Def1Selection, inner_sizes: &[usize]) -> Self {
        Def3Selection {
            sigma: sel
                .sigma
                .iter()
                .zip(inner_sizes)
                .map(|(&take, &size)| vec![take; size])
                .collect(),
        }
    }

    pub fn all(inner_sizes: &[usize]) -> Self {
        Def3Selection {
            sigma: inner_sizes.iter().map(|&s| vec![true; s]).collect(),
        }
    }

    pub fn none(inner_sizes: &[usize]) -> Self {
        Def3Selection {
            sigma: inner_sizes.iter().map(|&s| vec![false; s]).collect(),
        }
    }

    /// `{j : σ_j = K_j}`.
    pub fn full_blocks(&self) -> Def1Selection {
        Def1Selection {
            sigma: self.sigma.iter().map(|s| s.iter().all(|&b| b)).collect(),
        }
    }
}

/// A selection in flat encoding, together with the block sizes needed to
/// interpret it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    pub mode: WeaveMode,
    /// Bits per outer index: all 1 for def1/gframe, `|K_j|` for def3.
    pub group_sizes: Vec<usize>,
    pub bits: Vec<bool>,
}

impl Selection {
    fn from_index(mode: WeaveMode, group_sizes: &[usize], index: u64) -> Self {
        let nbits: usize = group_sizes.iter().sum();
        Selection {
            mode,
            group_sizes: group_sizes.to_vec(),
            bits: (0..nbits).map(|e| (index >> e) & 1 == 1).collect(),
        }
    }

    /// Canonical flat bitstring, element order.
    pub fn bitstring(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn complement(&self) -> Selection {
        Selection {
            bits: self.bits.iter().map(|b| !b).collect(),
            ..self.clone()
        }
    }

    pub fn to_def1(&self) -> Def1Selection {
        Def1Selection {
            sigma: self.bits.clone(),
        }
    }

    pub fn to_def3(&self) -> Def3Selection {
        let mut rest = self.bits.as_slice();
        let mut sigma = Vec::with_capacity(self.group_sizes.len());
        for &size in &self.group_sizes {
            let (head, tail) = rest.split_at(size);
            sigma.push(head.to_vec());
            rest = tail;
        }
        Def3Selection { sigma }
    }

    /// Order of the flat encoding (bit `e` weighs `2^e`).
    pub fn encoding_cmp(&self, other: &Selection) -> Ordering {
        encoding_cmp(&self.bits, &other.bits)
    }
}

fn encoding_cmp(a: &[bool], b: &[bool]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn fmt_set(members: impl Iterator<Item = usize>) -> String {
    let items: Vec<String> = members.map(|m| (m + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for Selection {
    /// `σ={1,3}` for outer selections, `j:1 σ_1={2}; j:2 σ_2={}` for
    /// element-wise ones (1-based).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            WeaveMode::Def1 | WeaveMode::GFrame => {
                write!(
                    f,
                    "σ={}",
                    fmt_set(
                        self.bits
                            .iter()
                            .enumerate()
                            .filter(|(_, &b)| b)
                            .map(|(j, _)| j)
                    )
                )
            }
            WeaveMode::Def3 => {
                let parts: Vec<String> = self
                    .to_def3()
                    .sigma
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        format!(
                            "j:{} σ_{}={}",
                            j + 1,
                            j + 1,
                            fmt_set(s.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k))
                        )
                    })
                    .collect();
                f.write_str(&parts.join("; "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionBounds {
    pub selection: Selection,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeavingReport {
    pub mode: WeaveMode,
    pub selections_checked: u64,
    /// Minimum over selections of the optimal lower bound.
    pub universal_lower: f64,
    /// Maximum over selections of the optimal upper bound.
    pub universal_upper: f64,
    pub woven: bool,
    /// Selection attaining `universal_lower`.
    pub witness: Selection,
    pub witness_lower: f64,
    /// Set for sampled reports: `woven == true` then only means no
    /// counterexample was sampled.
    pub approximate: bool,
    pub per_selection: Option<Vec<SelectionBounds>>,
}

fn check_families(f: &IndexedFamily, g: &IndexedFamily) -> Result<()> {
    if f.ambient_dim() != g.ambient_dim() {
        return Err(Error::AmbientDimMismatch {
            left: f.ambient_dim(),
            right: g.ambient_dim(),
        });
    }
    if f.outer_count() != g.outer_count() {
        return Err(Error::OuterCountMismatch {
            left: f.outer_count(),
            right: g.outer_count(),
        });
    }
    Ok(())
}

fn check_inner_sets(f: &IndexedFamily, g: &IndexedFamily) -> Result<()> {
    for (j, (a, b)) in f.inner_sizes().into_iter().zip(g.inner_sizes()).enumerate() {
        if a != b {
            return Err(Error::InnerIndexMismatch {
                outer: j + 1,
                left: a,
                right: b,
            });
        }
    }
    Ok(())
}

fn check_cap(bits: usize, cap: u64) -> Result<u64> {
    if bits >= 64 || (1u64 << bits) > cap {
        return Err(Error::EnumerationCapExceeded { bits, cap });
    }
    Ok(1u64 << bits)
}

fn selection_shape_error(expected: usize, found: usize) -> Error {
    Error::InvalidArgument(format!(
        "selection covers {found} indices, expected {expected}"
    ))
}

/// `{F_jk}_{j∈σ} ∪ {G_jk}_{j∉σ}` in `(j, k)` order.
pub fn weave_def1(
    f: &IndexedFamily,
    g: &IndexedFamily,
    sel: &Def1Selection,
) -> Result<VectorFrame> {
    check_families(f, g)?;
    if sel.sigma.len() != f.outer_count() {
        return Err(selection_shape_error(f.outer_count(), sel.sigma.len()));
    }
    Ok(weave_def1_unchecked(f, g, &sel.sigma))
}

fn weave_def1_unchecked(f: &IndexedFamily, g: &IndexedFamily, sigma: &[bool]) -> VectorFrame {
    let vectors = sigma
        .iter()
        .zip(f.groups().iter().zip(g.groups()))
        .flat_map(|(&from_f, (fb, gb))| if from_f { fb.iter() } else { gb.iter() })
        .cloned()
        .collect();
    VectorFrame::new(f.ambient_dim(), vectors).expect("non-empty blocks")
}

/// For each j: `F_jk` for `k ∈ σ_j`, `G_jk` for `k ∉ σ_j`, in `(j, k)` order.
pub fn weave_def3(
    f: &IndexedFamily,
    g: &IndexedFamily,
    sel: &Def3Selection,
) -> Result<VectorFrame> {
    check_families(f, g)?;
    check_inner_sets(f, g)?;
    if sel.sigma.len() != f.outer_count() {
        return Err(selection_shape_error(f.outer_count(), sel.sigma.len()));
    }
    for (s, size) in sel.sigma.iter().zip(f.inner_sizes()) {
        if s.len() != size {
            return Err(selection_shape_error(size, s.len()));
        }
    }
    let flat: Vec<bool> = sel.sigma.iter().flatten().copied().collect();
    Ok(weave_def3_unchecked(f, g, &flat))
}

fn weave_def3_unchecked(f: &IndexedFamily, g: &IndexedFamily, flat: &[bool]) -> VectorFrame {
    let vectors = f
        .groups()
        .iter()
        .flatten()
        .zip(g.groups().iter().flatten())
        .zip(flat)
        .map(|((fv, gv), &from_f)| if from_f { fv.clone() } else { gv.clone() })
        .collect();
    VectorFrame::new(f.ambient_dim(), vectors).expect("non-empty blocks")
}

/// The three-part union as written for a `(τ_0, {σ_j}_{j∈τ_0})` pair:
/// `{F_jk}_{j∈τ_0, k∈σ_j} ∪ {G_jk}_{j∈τ_0, k∉σ_j} ∪ {G_jk}_{j∉τ_0}`.
///
/// Element order follows the three parts, so it generally differs from
/// [`weave_def3`] on the canonical selection; the two agree as multisets.
pub fn weave_def3_tau(
    f: &IndexedFamily,
    g: &IndexedFamily,
    tau0: &[bool],
    sigma: &[Vec<bool>],
) -> Result<VectorFrame> {
    check_families(f, g)?;
    check_inner_sets(f, g)?;
    let n = f.outer_count();
    if tau0.len() != n || sigma.len() != n {
        return Err(selection_shape_error(n, tau0.len().min(sigma.len())));
    }
    let mut vectors = Vec::new();
    for j in (0..n).filter(|&j| tau0[j]) {
        for (k, v) in f.groups()[j].iter().enumerate() {
            if sigma[j][k] {
                vectors.push(v.clone());
            }
        }
    }
    for j in (0..n).filter(|&j| tau0[j]) {
        for (k, v) in g.groups()[j].iter().enumerate() {
            if !sigma[j][k] {
                vectors.push(v.clone());
            }
        }
    }
    for j in (0..n).filter(|&j| !tau0[j]) {
        vectors.extend(g.groups()[j].iter().cloned());
    }
    VectorFrame::new(f.ambient_dim(), vectors)
}

struct Evaluated {
    bits: Vec<bool>,
    bounds: FrameBounds,
}

fn aggregate(
    mode: WeaveMode,
    group_sizes: &[usize],
    entries: Vec<Evaluated>,
    opts: &WeaveOptions,
    approximate: bool,
) -> WeavingReport {
    let universal_lower = entries
        .iter()
        .map(|e| e.bounds.lower)
        .fold(f64::INFINITY, f64::min);
    let universal_upper = entries.iter().map(|e| e.bounds.upper).fold(0.0, f64::max);
    let witness = entries
        .iter()
        .filter(|e| e.bounds.lower <= universal_lower + WITNESS_TIE_TOL)
        .min_by(|a, b| encoding_cmp(&a.bits, &b.bits))
        .expect("at least one selection");
    let make = |bits: &[bool]| Selection {
        mode,
        group_sizes: group_sizes.to_vec(),
        bits: bits.to_vec(),
    };
    let witness_sel = make(&witness.bits);
    let witness_lower = witness.bounds.lower;
    let per_selection = opts.full_table.then(|| {
        entries
            .iter()
            .map(|e| SelectionBounds {
                selection: make(&e.bits),
                lower: e.bounds.lower,
                upper: e.bounds.upper,
            })
            .collect()
    });
    WeavingReport {
        mode,
        selections_checked: entries.len() as u64,
        universal_lower,
        universal_upper,
        woven: universal_lower > opts.frame.verdict_eps,
        witness: witness_sel,
        witness_lower,
        approximate,
        per_selection,
    }
}

fn exhaustive<E>(
    mode: WeaveMode,
    group_sizes: &[usize],
    opts: &WeaveOptions,
    eval: E,
) -> Result<WeavingReport>
where
    E: Fn(&[bool]) -> Result<FrameBounds> + Sync,
{
    let nbits: usize = group_sizes.iter().sum();
    let total = check_cap(nbits, opts.cap)?;
    let entries = (0..total)
        .into_par_iter()
        .map(|index| {
            let bits = Selection::from_index(mode, group_sizes, index).bits;
            eval(&bits).map(|bounds| Evaluated { bits, bounds })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(mode, group_sizes, entries, opts, false))
}

fn sampled<E>(
    mode: WeaveMode,
    group_sizes: &[usize],
    sample_count: usize,
    seed: u64,
    opts: &WeaveOptions,
    eval: E,
) -> Result<WeavingReport>
where
    E: Fn(&[bool]) -> Result<FrameBounds> + Sync,
{
    if sample_count == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let nbits: usize = group_sizes.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selections = vec![vec![false; nbits], vec![true; nbits]];
    selections.extend((0..sample_count).map(|_| (0..nbits).map(|_| rng.gen::<bool>()).collect()));
    let entries = selections
        .into_par_iter()
        .map(|bits| eval(&bits).map(|bounds| Evaluated { bits, bounds }))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(mode, group_sizes, entries, opts, true))
}

/// Outer-partition weaving check over all `2^n` subsets `σ`.
pub fn check_woven_def1(
    f: &IndexedFamily,
    g: &IndexedFamily,
    theta: &OperatorTheta,
    opts: &WeaveOptions,
) -> Result<WeavingReport> {
    check_families(f, g)?;
    let sizes = vec![1; f.outer_count()];
    exhaustive(WeaveMode::Def1, &sizes, opts, |bits| {
        theta_frame_bounds(&weave_def1_unchecked(f, g, bits), theta, &opts.frame)
    })
}

/// Element-wise weaving check over all `2^(Σ|K_j|)` selections.
pub fn check_woven_def3(
    f: &IndexedFamily,
    g: &IndexedFamily,
    theta: &OperatorTheta,
    opts: &WeaveOptions,
) -> Result<WeavingReport> {
    check_families(f, g)?;
    check_inner_sets(f, g)?;
    let sizes = f.inner_sizes();
    exhaustive(WeaveMode::Def3, &sizes, opts, |bits| {
        theta_frame_bounds(&weave_def3_unchecked(f, g, bits), theta, &opts.frame)
    })
}

/// g-frame weaving check over all `2^n` subsets `σ`.
pub fn check_gwoven(
    lambda: &GFrame,
    omega: &GFrame,
    theta: &OperatorTheta,
    opts: &WeaveOptions,
) -> Result<WeavingReport> {
    check_gpair(lambda, omega)?;
    let sizes = vec![1; lambda.len()];
    exhaustive(WeaveMode::GFrame, &sizes, opts, |bits| {
        theta_gframe_bounds(&lambda.mixed(omega, bits)?, theta, &opts.frame)
    })
}

/// The two objects being woven.
#[derive(Debug, Clone, Copy)]
pub enum WeavePair<'a> {
    Families(&'a IndexedFamily, &'a IndexedFamily),
    GFrames(&'a GFrame, &'a GFrame),
}

/// Exact check dispatched on `mode`.
pub fn check_woven(
    pair: WeavePair<'_>,
    theta: &OperatorTheta,
    mode: WeaveMode,
    opts: &WeaveOptions,
) -> Result<WeavingReport> {
    match (mode, pair) {
        (WeaveMode::Def1, WeavePair::Families(f, g)) => check_woven_def1(f, g, theta, opts),
        (WeaveMode::Def3, WeavePair::Families(f, g)) => check_woven_def3(f, g, theta, opts),
        (WeaveMode::GFrame, WeavePair::GFrames(l, o)) => check_gwoven(l, o, theta, opts),
        _ => Err(Error::InvalidArgument(format!(
            "mode {mode} does not apply to this pair"
        ))),
    }
}

/// Seeded random sample of selections plus the all-first and all-second
/// selections. A non-woven verdict is conclusive (the witness is a real
/// selection); a woven one only says no counterexample was sampled.
pub fn sample_woven(
    pair: WeavePair<'_>,
    theta: &OperatorTheta,
    mode: WeaveMode,
    sample_count: usize,
    seed: u64,
    opts: &WeaveOptions,
) -> Result<WeavingReport> {
    match (mode, pair) {
        (WeaveMode::Def1, WeavePair::Families(f, g)) => {
            check_families(f, g)?;
            let sizes = vec![1; f.outer_count()];
            sampled(mode, &sizes, sample_count, seed, opts, |bits| {
                theta_frame_bounds(&weave_def1_unchecked(f, g, bits), theta, &opts.frame)
            })
        }
        (WeaveMode::Def3, WeavePair::Families(f, g)) => {
            check_families(f, g)?;
            check_inner_sets(f, g)?;
            let sizes = f.inner_sizes();
            sampled(mode, &sizes, sample_count, seed, opts, |bits| {
                theta_frame_bounds(&weave_def3_unchecked(f, g, bits), theta, &opts.frame)
            })
        }
        (WeaveMode::GFrame, WeavePair::GFrames(l, o)) => {
            check_gpair(l, o)?;
            let sizes = vec![1; l.len()];
            sampled(mode, &sizes, sample_count, seed, opts, |bits| {
                theta_gframe_bounds(&l.mixed(o, bits)?, theta, &opts.frame)
            })
        }
        _ => Err(Error::InvalidArgument(format!(
            "mode {mode} does not apply to this pair"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::frame_bounds;
    use crate::linalg::{Matrix, Vector};
    use num_complex::Complex64;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(i: usize, d: usize) -> Vector {
        let mut v = vec![c(0.0, 0.0); d];
        v[i] = c(1.0, 0.0);
        v
    }

    fn id2() -> OperatorTheta {
        OperatorTheta::identity(2)
    }

    fn opts() -> WeaveOptions {
        WeaveOptions::default()
    }

    fn table_opts() -> WeaveOptions {
        WeaveOptions {
            full_table: true,
            ..opts()
        }
    }

    /// n = 1, K_1 = {1, 2}: F = {e1, e2}, G = {e2, e1}.
    fn swapped_block() -> (IndexedFamily, IndexedFamily) {
        (
            IndexedFamily::new(2, vec![vec![e(0, 2), e(1, 2)]]).unwrap(),
            IndexedFamily::new(2, vec![vec![e(1, 2), e(0, 2)]]).unwrap(),
        )
    }

    /// n = 2 singletons: F = {e1, e2}, G = {e2, e1}.
    fn swapped_singletons() -> (IndexedFamily, IndexedFamily) {
        (
            IndexedFamily::singletons(2, vec![e(0, 2), e(1, 2)]).unwrap(),
            IndexedFamily::singletons(2, vec![e(1, 2), e(0, 2)]).unwrap(),
        )
    }

    fn random_family(rng: &mut ChaCha8Rng, d: usize, sizes: &[usize]) -> IndexedFamily {
        let groups = sizes
            .iter()
            .map(|&s| {
                (0..s)
                    .map(|_| {
                        (0..d)
                            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        IndexedFamily::new(d, groups).unwrap()
    }

    #[test]
    fn weave_def1_examples() {
        let (f, _) = swapped_singletons();
        let same = IndexedFamily::singletons(2, vec![e(0, 2), e(1, 2)]).unwrap();
        let w = weave_def1(&f, &same, &Def1Selection::from_indices(2, &[0])).unwrap();
        assert_eq!(w.vectors(), &[e(0, 2), e(1, 2)]);

        let (f, g) = swapped_singletons();
        assert_eq!(
            weave_def1(&f, &g, &Def1Selection::none(2)).unwrap(),
            g.to_frame()
        );
        assert_eq!(
            weave_def1(&f, &g, &Def1Selection::all(2)).unwrap(),
            f.to_frame()
        );

        // inner sizes 2 and 3 at the same j are fine for outer partitions
        let f2 = IndexedFamily::new(2, vec![vec![e(0, 2), e(1, 2)]]).unwrap();
        let g3 = IndexedFamily::new(2, vec![vec![e(0, 2), e(1, 2), e(0, 2)]]).unwrap();
        assert_eq!(
            weave_def1(&f2, &g3, &Def1Selection::none(1)).unwrap().len(),
            3
        );
    }

    #[test]
    fn weave_def1_errors() {
        let (f, _) = swapped_singletons();
        let three = IndexedFamily::singletons(3, vec![e(0, 3), e(1, 3)]).unwrap();
        assert!(matches!(
            weave_def1(&f, &three, &Def1Selection::none(2)),
            Err(Error::AmbientDimMismatch { .. })
        ));
        let short = IndexedFamily::singletons(2, vec![e(0, 2)]).unwrap();
        assert!(matches!(
            weave_def1(&f, &short, &Def1Selection::none(2)),
            Err(Error::OuterCountMismatch { .. })
        ));
    }

    #[test]
    fn check_def1_examples() {
        let (f, _) = swapped_singletons();
        let r = check_woven_def1(&f, &f, &id2(), &opts()).unwrap();
        assert!(r.woven);
        assert_eq!((r.universal_lower, r.universal_upper), (1.0, 1.0));

        // brute force over 4 subsets: σ={1} → {e1, e1}, σ={2} → {e2, e2}
        let (f, g) = swapped_singletons();
        let r = check_woven_def1(&f, &g, &id2(), &opts()).unwrap();
        assert!(!r.woven);
        assert_eq!(r.selections_checked, 4);
        assert_eq!(r.universal_lower, 0.0);
        assert_eq!(r.witness.to_def1(), Def1Selection::from_indices(2, &[0]));
        assert_eq!(r.witness.to_string(), "σ={1}");

        // n = 1 with a 2-element block: only σ = ∅ and σ = {1}
        let (f, g) = swapped_block();
        let r = check_woven_def1(&f, &g, &id2(), &opts()).unwrap();
        assert!(r.woven);
        assert_eq!(r.selections_checked, 2);
        assert_eq!((r.universal_lower, r.universal_upper), (1.0, 1.0));
    }

    #[test]
    fn weave_def3_examples() {
        let (f, g) = swapped_block();
        let sizes = f.inner_sizes();
        assert_eq!(
            weave_def3(&f, &g, &Def3Selection::all(&sizes)).unwrap(),
            f.to_frame()
        );
        assert_eq!(
            weave_def3(&f, &g, &Def3Selection::none(&sizes)).unwrap(),
            g.to_frame()
        );
        let sel = Def3Selection {
            sigma: vec![vec![true, false]],
        };
        assert_eq!(
            weave_def3(&f, &g, &sel).unwrap().vectors(),
            &[e(0, 2), e(0, 2)]
        );
    }

    #[test]
    fn weave_def3_rejects_mismatched_inner_sets() {
        let f2 = IndexedFamily::new(2, vec![vec![e(0, 2), e(1, 2)]]).unwrap();
        let g3 = IndexedFamily::new(2, vec![vec![e(0, 2), e(1, 2), e(0, 2)]]).unwrap();
        let err = weave_def3(&f2, &g3, &Def3Selection::none(&[2])).unwrap_err();
        assert_eq!(
            err,
            Error::InnerIndexMismatch {
                outer: 1,
                left: 2,
                right: 3
            }
        );
        assert!(matches!(
            check_woven_def3(&f2, &g3, &id2(), &opts()),
            Err(Error::InnerIndexMismatch { .. })
        ));
        // the outer-partition checker accepts the same pair
        assert!(check_woven_def1(&f2, &g3, &id2(), &opts()).is_ok());
    }

    #[test]
    fn tau_form_matches_canonical_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let sizes = [2, 1, 3];
        let f = random_family(&mut rng, 3, &sizes);
        let g = random_family(&mut rng, 3, &sizes);
        for _ in 0..50 {
            let tau0: Vec<bool> = (0..3).map(|_| rng.gen()).collect();
            let sigma: Vec<Vec<bool>> = sizes
                .iter()
                .map(|&s| (0..s).map(|_| rng.gen()).collect())
                .collect();
            let literal = weave_def3_tau(&f, &g, &tau0, &sigma).unwrap();
            let canonical = weave_def3(&f, &g, &Def3Selection::from_tau(&tau0, sigma)).unwrap();
            let sort = |fr: &VectorFrame| {
                let mut v = fr.vectors().to_vec();
                v.sort_by(|a, b| {
                    a.iter()
                        .flat_map(|z| [z.re, z.im])
                        .zip(b.iter().flat_map(|z| [z.re, z.im]))
                        .map(|(x, y)| x.total_cmp(&y))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                });
                v
            };
            assert_eq!(sort(&literal), sort(&canonical));
        }
    }

    #[test]
    fn check_def3_examples() {
        let (f, _) = swapped_block();
        let r = check_woven_def3(&f, &f, &id2(), &opts()).unwrap();
        assert!(r.woven);
        assert_eq!((r.universal_lower, r.universal_upper), (1.0, 1.0));

        // the gap: 4 element-wise selections, σ_1 = {1} gives {e1, e1}
        let (f, g) = swapped_block();
        let r = check_woven_def3(&f, &g, &id2(), &opts()).unwrap();
        assert!(!r.woven);
        assert_eq!(r.selections_checked, 4);
        assert_eq!(r.universal_lower, 0.0);
        assert_eq!(r.witness.to_def3().sigma, vec![vec![true, false]]);
        assert_eq!(r.witness.to_string(), "j:1 σ_1={1}");
        assert_eq!(
            weave_def3(&f, &g, &r.witness.to_def3()).unwrap().vectors(),
            &[e(0, 2), e(0, 2)]
        );
        assert!(check_woven_def1(&f, &g, &id2(), &opts()).unwrap().woven);

        // singleton inner sets: same report as the outer-partition check
        let (f, g) = swapped_singletons();
        let r1 = check_woven_def1(&f, &g, &id2(), &opts()).unwrap();
        let r3 = check_woven_def3(&f, &g, &id2(), &opts()).unwrap();
        assert_eq!(r1.woven, r3.woven);
        assert_eq!(r1.universal_lower, r3.universal_lower);
        assert_eq!(r1.universal_upper, r3.universal_upper);
        assert_eq!(r1.witness.bits, r3.witness.bits);
    }

    #[test]
    fn check_gwoven_examples() {
        let row = |x: f64, y: f64| Matrix::from_real_rows(&[&[x, y]]).unwrap();
        let lambda = GFrame::new(2, vec![row(1.0, 0.0), row(0.0, 1.0)]).unwrap();
        let r = check_gwoven(&lambda, &lambda, &id2(), &opts()).unwrap();
        assert!(r.woven);
        assert_eq!((r.universal_lower, r.universal_upper), (1.0, 1.0));

        let omega = GFrame::new(2, vec![row(0.0, 1.0), row(1.0, 0.0)]).unwrap();
        let r = check_gwoven(&lambda, &omega, &id2(), &opts()).unwrap();
        assert!(!r.woven);
        assert_eq!(r.witness.to_string(), "σ={1}");

        let ident = GFrame::new(2, vec![Matrix::identity(2)]).unwrap();
        let r = check_gwoven(&ident, &ident, &id2(), &opts()).unwrap();
        assert!(r.woven && r.universal_lower == 1.0 && r.universal_upper == 1.0);

        let three = GFrame::new(3, vec![Matrix::identity(3)]).unwrap();
        assert!(matches!(
            check_gwoven(&ident, &three, &id2(), &opts()),
            Err(Error::AmbientDimMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_cap() {
        let (f, g) = swapped_block();
        let tight = WeaveOptions { cap: 2, ..opts() };
        assert!(check_woven_def1(&f, &g, &id2(), &tight).is_ok());
        assert_eq!(
            check_woven_def3(&f, &g, &id2(), &tight).unwrap_err(),
            Error::EnumerationCapExceeded { bits: 2, cap: 2 }
        );
    }

    #[test]
    fn sampling() {
        let (f, g) = swapped_block();
        let pair = WeavePair::Families(&f, &g);
        let r = sample_woven(pair, &id2(), WeaveMode::Def3, 64, 5, &opts()).unwrap();
        assert!(r.approximate && !r.woven);
        assert_eq!(r.selections_checked, 66);
        // the witness is a genuine zero-bound selection
        let wb = frame_bounds(
            &weave_def3(&f, &g, &r.witness.to_def3()).unwrap(),
            &FrameConfig::default(),
        )
        .unwrap();
        assert!(wb.lower < 1e-12);
        assert_eq!(
            r,
            sample_woven(pair, &id2(), WeaveMode::Def3, 64, 5, &opts()).unwrap()
        );

        let same = sample_woven(
            WeavePair::Families(&f, &f),
            &id2(),
            WeaveMode::Def3,
            3,
            1,
            &opts(),
        )
        .unwrap();
        assert!(same.woven && same.universal_lower == 1.0 && same.universal_upper == 1.0);

        assert!(sample_woven(pair, &id2(), WeaveMode::Def3, 0, 1, &opts()).is_err());
        assert!(sample_woven(pair, &id2(), WeaveMode::GFrame, 3, 1, &opts()).is_err());
    }

    #[test]
    fn boundary_selections_match_family_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cfg = FrameConfig::default();
        for _ in 0..10 {
            let sizes = [1, 2, 2];
            let f = random_family(&mut rng, 2, &sizes);
            let g = random_family(&mut rng, 2, &sizes);
            let bf = frame_bounds(&f.to_frame(), &cfg).unwrap();
            let bg = frame_bounds(&g.to_frame(), &cfg).unwrap();
            for report in [
                check_woven_def1(&f, &g, &id2(), &table_opts()).unwrap(),
                check_woven_def3(&f, &g, &id2(), &table_opts()).unwrap(),
            ] {
                let table = report.per_selection.unwrap();
                let all_f = table
                    .iter()
                    .find(|s| s.selection.bits.iter().all(|&b| b))
                    .unwrap();
                let all_g = table
                    .iter()
                    .find(|s| s.selection.bits.iter().all(|&b| !b))
                    .unwrap();
                assert!(
                    (all_f.lower - bf.lower).abs() < 1e-12
                        && (all_f.upper - bf.upper).abs() < 1e-12
                );
                assert!(
                    (all_g.lower - bg.lower).abs() < 1e-12
                        && (all_g.upper - bg.upper).abs() < 1e-12
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn shape() -> impl Strategy<Value = (usize, Vec<usize>, u64)> {
            (
                1usize..=3,
                prop::collection::vec(1usize..=3, 1..=3),
                any::<u64>(),
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn def3_refines_def1((d, sizes, seed) in shape()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let f = random_family(&mut rng, d, &sizes);
                let g = random_family(&mut rng, d, &sizes);
                let theta = OperatorTheta::identity(d);
                let r1 = check_woven_def1(&f, &g, &theta, &table_opts()).unwrap();
                let r3 = check_woven_def3(&f, &g, &theta, &table_opts()).unwrap();
                prop_assert!(r3.universal_lower <= r1.universal_lower + 1e-12);
                prop_assert!(r3.universal_upper >= r1.universal_upper - 1e-12);
                prop_assert!(!r3.woven || r1.woven);

                // every outer-partition family is produced by an element-wise selection
                let t3 = r3.per_selection.as_ref().unwrap();
                for row in r1.per_selection.as_ref().unwrap() {
                    let lifted = Def3Selection::from_def1(&row.selection.to_def1(), &sizes);
                    prop_assert_eq!(
                        weave_def3(&f, &g, &lifted).unwrap(),
                        weave_def1(&f, &g, &row.selection.to_def1()).unwrap()
                    );
                    let flat: Vec<bool> = lifted.sigma.iter().flatten().copied().collect();
                    let hit = t3.iter().find(|s| s.selection.bits == flat).unwrap();
                    prop_assert_eq!(hit.lower, row.lower);
                }

                // witness attains the universal lower bound
                for r in [&r1, &r3] {
                    prop_assert!((r.witness_lower - r.universal_lower).abs() <= 1e-12);
                    prop_assert_eq!(r.woven, r.universal_lower > 1e-9);
                }

                // union upper bound never exceeds B_F + B_G
                let cfg = FrameConfig::default();
                let bf = frame_bounds(&f.to_frame(), &cfg).unwrap().upper;
                let bg = frame_bounds(&g.to_frame(), &cfg).unwrap().upper;
                prop_assert!(r3.universal_upper <= bf + bg + 1e-9);
            }

            #[test]
            fn swap_symmetry((d, sizes, seed) in shape()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let f = random_family(&mut rng, d, &sizes);
                let g = random_family(&mut rng, d, &sizes);
                let theta = OperatorTheta::identity(d);
                let fwd = check_woven_def3(&f, &g, &theta, &table_opts()).unwrap();
                let back = check_woven_def3(&g, &f, &theta, &table_opts()).unwrap();
                prop_assert!((fwd.universal_lower - back.universal_lower).abs() <= 1e-12);
                prop_assert!((fwd.universal_upper - back.universal_upper).abs() <= 1e-12);
                let table = fwd.per_selection.as_ref().unwrap();
                let mirrored = back.witness.complement();
                let row = table.iter().find(|s| s.selection.bits == mirrored.bits).unwrap();
                prop_assert!((row.lower - fwd.universal_lower).abs() <= 1e-12);
            }

            #[test]
            fn singleton_reports_agree((d, n, seed) in (1usize..=3, 1usize..=4, any::<u64>())) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sizes = vec![1; n];
                let f = random_family(&mut rng, d, &sizes);
                let g = random_family(&mut rng, d, &sizes);
                let theta = OperatorTheta::identity(d);
                let r1 = check_woven_def1(&f, &g, &theta, &opts()).unwrap();
                let r3 = check_woven_def3(&f, &g, &theta, &opts()).unwrap();
                prop_assert_eq!(r1.woven, r3.woven);
                prop_assert_eq!(r1.universal_lower, r3.universal_lower);
                prop_assert_eq!(r1.universal_upper, r3.universal_upper);
                prop_assert_eq!(r1.witness.bits, r3.witness.bits);
            }
        }
    }

    #[test]
    fn reports_are_schedule_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let sizes = [2, 2, 3];
        let f = random_family(&mut rng, 2, &sizes);
        let g = random_family(&mut rng, 2, &sizes);
        let base = check_woven_def3(&f, &g, &id2(), &table_opts()).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = single.install(|| check_woven_def3(&f, &g, &id2(), &table_opts()).unwrap());
        assert_eq!(base, serial);
    }
}
