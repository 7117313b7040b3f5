//! Alternating nested hulls `R_1 ⊇ R_2 ⊇ ...`.
//!
//! `R_1` is the hull of every point of the designated positive class. Each
//! following region is the hull of the opposite-class points that lie
//! (closed, with [`TAU`](crate::geometry::TAU)) inside the previous region.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{ClassLabel, LabeledPoint, Polytope};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub points: Vec<LabeledPoint>,
    pub dimension: usize,
    /// Class whose hull forms `R_1`.
    pub positive_class: ClassLabel,
}

impl Dataset {
    /// Checks that every point has `dimension` finite coordinates.
    pub fn new(
        points: Vec<LabeledPoint>,
        dimension: usize,
        positive_class: ClassLabel,
    ) -> Result<Self> {
        for p in &points {
            if p.coords.len() != dimension {
                return Err(Error::Dimension {
                    expected: dimension,
                    found: p.coords.len(),
                });
            }
            if p.coords.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            points,
            dimension,
            positive_class,
        })
    }

    pub fn with_positive_class(mut self, positive_class: ClassLabel) -> Self {
        self.positive_class = positive_class;
        self
    }

    pub fn class_count(&self, label: ClassLabel) -> usize {
        self.points.iter().filter(|p| p.label == label).count()
    }

    /// Largest lifted norm `|(x, 1)|` over all points.
    pub fn max_lifted_norm(&self) -> f64 {
        self.points
            .iter()
            .map(|p| crate::geometry::lifted_norm(&p.coords))
            .fold(0.0, f64::max)
    }
}

/// Bit-level key; `-0.0` and `0.0` compare equal as coordinates.
fn coord_key(coords: &[f64]) -> Vec<u64> {
    coords.iter().map(|c| (c + 0.0).to_bits()).collect()
}

/// Removes every coordinate vector that carries both labels and collapses
/// within-class duplicates, keeping first-occurrence order.
pub fn dedup(d: &Dataset) -> Result<Dataset> {
    let mut labels: HashMap<Vec<u64>, (bool, bool)> = HashMap::new();
    for p in &d.points {
        let seen = labels.entry(coord_key(&p.coords)).or_default();
        match p.label {
            ClassLabel::Pos => seen.0 = true,
            ClassLabel::Neg => seen.1 = true,
        }
    }

    let mut emitted = std::collections::HashSet::new();
    let points: Vec<LabeledPoint> = d
        .points
        .iter()
        .filter(|p| {
            let key = coord_key(&p.coords);
            labels[&key] != (true, true) && emitted.insert(key)
        })
        .cloned()
        .collect();

    if points.is_empty() && !d.points.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(Dataset {
        points,
        dimension: d.dimension,
        positive_class: d.positive_class,
    })
}

/// Builds the nested region sequence for a deduplicated planar dataset.
///
/// Candidates for `R_{k+2}` are drawn from the candidates of `R_k` that lie
/// inside `R_{k+1}`; this matches "opposite-class points inside `R_{k+1}`"
/// because `R_{k+1} ⊆ R_k`, and it bounds the depth by the point count.
pub fn peel(d: &Dataset) -> Result<Vec<Polytope>> {
    if d.dimension != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: d.dimension,
        });
    }
    let mut class = d.positive_class;
    let mut candidates: Vec<&[f64]> = d
        .points
        .iter()
        .filter(|p| p.label == class)
        .map(|p| p.coords.as_slice())
        .collect();
    if candidates.is_empty() {
        return Err(Error::EmptyPositiveClass);
    }
    let mut other: Vec<&[f64]> = d
        .points
        .iter()
        .filter(|p| p.label != class)
        .map(|p| p.coords.as_slice())
        .collect();

    let mut hulls: Vec<Polytope> = Vec::new();
    loop {
        let level = hulls.len() + 1;
        let region = Polytope::hull_2d(&candidates, class, level)?;

        let inside = other
            .iter()
            .copied()
            .filter(|x| region.contains(x).expect("dimension checked"))
            .collect::<Vec<_>>();

        // From level 2 on, `other` holds the candidates of R_{k-1}; if all of
        // them survive, R_{k+1} would repeat R_{k-1} forever.
        if level >= 2 && !inside.is_empty() && inside.len() == other.len() {
            return Err(Error::NoProgress(level));
        }

        hulls.push(region);
        if inside.is_empty() {
            break;
        }
        other = std::mem::replace(&mut candidates, inside);
        class = class.opposite();
    }
    Ok(hulls)
}
