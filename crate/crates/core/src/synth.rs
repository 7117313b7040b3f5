//! Random planar datasets for fuzzing, property tests and benchmarks.

use rand::Rng;

use crate::geometry::{ClassLabel, LabeledPoint};
use crate::peeling::Dataset;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    /// Each class gets a uniform count in `1..=max_per_class`.
    pub max_per_class: usize,
    /// Probability that a point is repeated with the opposite label.
    pub conflict_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            max_per_class: 200,
            conflict_rate: 0.01,
        }
    }
}

/// Uniform points in `[0, 1]^2` with injected cross-class duplicates.
pub fn random_dataset<R: Rng + ?Sized>(rng: &mut R, cfg: &SynthConfig) -> Dataset {
    let mut points = Vec::new();
    for label in [ClassLabel::Pos, ClassLabel::Neg] {
        let count = rng.gen_range(1..=cfg.max_per_class);
        for _ in 0..count {
            points.push(LabeledPoint::new(
                vec![rng.gen::<f64>(), rng.gen::<f64>()],
                label,
            ));
        }
    }
    let originals = points.len();
    for i in 0..originals {
        if rng.gen_bool(cfg.conflict_rate) {
            let p = &points[i];
            points.push(LabeledPoint::new(p.coords.clone(), p.label.opposite()));
        }
    }
    Dataset {
        points,
        dimension: 2,
        positive_class: ClassLabel::Pos,
    }
}
