use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::weaving::{check_woven_def1, check_woven_def3, WeaveOptions, WeavingReport};

use super::generate::lattice_instance;
use super::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSearchParams {
    pub dim: usize,
    pub n: usize,
    /// `|K_j|` for each of the `n` outer indices.
    pub inner_sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

/// An instance woven under outer partitions but not element-wise, with
/// both reports as certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct GapHit {
    pub trial: usize,
    pub instance: Instance,
    pub def1: WeavingReport,
    pub def3: WeavingReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapSearch {
    pub params: GapSearchParams,
    /// Ordered by trial index.
    pub hits: Vec<GapHit>,
    /// Trials whose enumeration exceeded the cap.
    pub skipped: usize,
}

enum Trial {
    Hit(Box<GapHit>),
    Miss,
    Skipped,
}

fn run_trial(params: &GapSearchParams, trial: usize, opts: &WeaveOptions) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(trial as u64);
    let instance = lattice_instance(&mut rng, params.dim, &params.inner_sizes)
        .with_name(format!("gap-trial-{trial}"))
        .with_seed(params.seed);
    let f = instance.induced_f();
    let g = instance.induced_g();
    let outcome = check_woven_def1(&f, &g, instance.theta(), opts)
        .and_then(|d1| Ok((d1, check_woven_def3(&f, &g, instance.theta(), opts)?)));
    match outcome {
        Ok((def1, def3)) if def1.woven && !def3.woven => Ok(Trial::Hit(Box::new(GapHit {
            trial,
            instance,
            def1,
            def3,
        }))),
        Ok(_) => Ok(Trial::Miss),
        Err(Error::EnumerationCapExceeded { .. }) => Ok(Trial::Skipped),
        Err(e) => Err(e),
    }
}

/// Seeded search for outer-partition/element-wise gap instances.
///
/// Trial `t` draws from a ChaCha8 stream `t` of `seed`, so the result does
/// not depend on thread scheduling. Instances have lattice entries and
/// `Θ = I`.
pub fn search_gap(params: &GapSearchParams, opts: &WeaveOptions) -> Result<GapSearch> {
    if params.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if params.dim == 0 || params.n == 0 {
        return Err(Error::InvalidArgument("dim and n must be positive".into()));
    }
    if params.inner_sizes.len() != params.n {
        return Err(Error::InvalidArgument(format!(
            "{} inner sizes given for n = {}",
            params.inner_sizes.len(),
            params.n
        )));
    }
    if params.inner_sizes.contains(&0) {
        return Err(Error::InvalidArgument(
            "inner sizes must be positive".into(),
        ));
    }
    let outcomes = (0..params.trials)
        .into_par_iter()
        .map(|t| run_trial(params, t, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut hits = Vec::new();
    let mut skipped = 0;
    for outcome in outcomes {
        match outcome {
            Trial::Hit(h) => hits.push(*h),
            Trial::Skipped => skipped += 1,
            Trial::Miss => {}
        }
    }
    Ok(GapSearch {
        params: params.clone(),
        hits,
        skipped,
    })
}
