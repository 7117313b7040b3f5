//! Differential fuzzing of a compiled network against the geometric oracle.
//!
//! Samples are drawn uniformly from the padded bounding box of the stored
//! hulls with a seeded ChaCha stream, so a run is reproducible from
//! `(network, samples, epsilon, seed)`. Points closer than `epsilon` to any
//! cut hyperplane are rejected and redrawn: there the tolerance rule, not
//! the construction, decides the label.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluator::classify;
use crate::geometry::{lifted_norm, nearest_cut_distance, ClassLabel, Polytope};
use crate::network::ChainNetwork;
use crate::oracle::oracle_classify;

/// Give up after drawing this many candidates per requested sample.
const MAX_DRAWS_PER_SAMPLE: usize = 100;

/// Mismatches kept in a report for diagnosis.
const KEPT_MISMATCHES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzConfig {
    pub samples: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            epsilon: 1e-6,
            seed: 42,
        }
    }
}

/// Per-axis `[lo, hi]` of all hull vertices, padded by 10% of the extent.
pub fn sampling_box(hulls: &[Polytope]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = hulls.first().ok_or(Error::EmptyInput)?.dimension();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for v in hulls.iter().flat_map(|h| &h.vertices) {
        for d in 0..n {
            lo[d] = lo[d].min(v[d]);
            hi[d] = hi[d].max(v[d]);
        }
    }
    for d in 0..n {
        let extent = hi[d] - lo[d];
        let pad = if extent > 0.0 { 0.1 * extent } else { 0.5 };
        lo[d] -= pad;
        hi[d] += pad;
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub points: Vec<Vec<f64>>,
    pub drawn: usize,
    pub skipped_near_cut: usize,
    pub skipped_out_of_domain: usize,
}

/// Draws until `cfg.samples` points are at least `epsilon` from every cut
/// (and inside `domain_bound`, when given), or the draw budget runs out.
pub fn draw_samples(
    hulls: &[Polytope],
    domain_bound: Option<f64>,
    cfg: &FuzzConfig,
) -> Result<SampleSet> {
    let (lo, hi) = sampling_box(hulls)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut set = SampleSet {
        points: Vec::with_capacity(cfg.samples),
        drawn: 0,
        skipped_near_cut: 0,
        skipped_out_of_domain: 0,
    };
    let budget = cfg.samples.saturating_mul(MAX_DRAWS_PER_SAMPLE);
    while set.points.len() < cfg.samples && set.drawn < budget {
        set.drawn += 1;
        let x: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&a, &b)| rng.gen_range(a..=b))
            .collect();
        if domain_bound.is_some_and(|b| lifted_norm(&x) > b) {
            set.skipped_out_of_domain += 1;
        } else if nearest_cut_distance(hulls, &x)? < cfg.epsilon {
            set.skipped_near_cut += 1;
        } else {
            set.points.push(x);
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub point: Vec<f64>,
    pub network: Result<ClassLabel>,
    pub oracle: Result<ClassLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzReport {
    pub requested: usize,
    pub compared: usize,
    pub agreed: usize,
    pub drawn: usize,
    pub skipped_near_cut: usize,
    pub skipped_out_of_domain: usize,
    /// The first few disagreements, in sample order.
    pub mismatches: Vec<Mismatch>,
}

impl FuzzReport {
    /// Every requested sample was compared and all of them agreed.
    pub fn is_clean(&self) -> bool {
        self.compared == self.requested && self.agreed == self.compared
    }
}

/// Compares `classify` against `oracle_classify` at every point.
pub fn compare_at(
    net: &ChainNetwork,
    hulls: &[Polytope],
    points: &[Vec<f64>],
) -> (usize, Vec<Mismatch>) {
    let outcomes: Vec<Option<Mismatch>> = points
        .par_iter()
        .map(|x| {
            let network = classify(net, x);
            let oracle = oracle_classify(hulls, x);
            match (&network, &oracle) {
                (Ok(a), Ok(b)) if a == b => None,
                _ => Some(Mismatch {
                    point: x.clone(),
                    network,
                    oracle,
                }),
            }
        })
        .collect();
    let agreed = outcomes.iter().filter(|m| m.is_none()).count();
    let kept = outcomes
        .into_iter()
        .flatten()
        .take(KEPT_MISMATCHES)
        .collect();
    (agreed, kept)
}

/// Fuzzes `net` against the oracle built from its own stored hulls.
pub fn verify(net: &ChainNetwork, cfg: &FuzzConfig) -> Result<FuzzReport> {
    let hulls = net.hulls.as_deref().ok_or(Error::MissingHulls)?;
    let set = draw_samples(hulls, Some(net.domain_bound), cfg)?;
    let (agreed, mismatches) = compare_at(net, hulls, &set.points);
    Ok(FuzzReport {
        requested: cfg.samples,
        compared: set.points.len(),
        agreed,
        drawn: set.drawn,
        skipped_near_cut: set.skipped_near_cut,
        skipped_out_of_domain: set.skipped_out_of_domain,
        mismatches,
    })
}
