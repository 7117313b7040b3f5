//! Direct halfspace reference classifiers for nested regions.
//!
//! These never touch the compiled units; they evaluate region membership
//! straight from the stored cuts, so a disagreement with the chain network
//! points at the compiler or the evaluator.

use crate::error::{Error, Result};
use crate::geometry::{ClassLabel, Polytope};

/// Largest `k` with `x ∈ R_k`, or 0 when `x` lies outside `R_1`.
///
/// Membership must form a prefix of the sequence; any gap is `NotNested`.
pub fn deepest_region(hulls: &[Polytope], x: &[f64]) -> Result<usize> {
    let mut depth = 0;
    for (i, hull) in hulls.iter().enumerate() {
        if hull.contains(x)? {
            if depth != i {
                return Err(Error::NotNested(format!(
                    "point {x:?} lies in R{} but not in R{}",
                    i + 1,
                    depth + 1
                )));
            }
            depth = i + 1;
        }
    }
    Ok(depth)
}

/// Odd depth means the class that generated `R_1`; even or zero the other.
pub fn oracle_classify(hulls: &[Polytope], x: &[f64]) -> Result<ClassLabel> {
    let outer = hulls.first().ok_or(Error::EmptyInput)?.generator_class;
    let depth = deepest_region(hulls, x)?;
    Ok(if depth % 2 == 1 {
        outer
    } else {
        outer.opposite()
    })
}

/// Membership in `R_1 - (R_2 - (R_3 - ...))` by direct recursion.
pub fn alternating_membership(hulls: &[Polytope], x: &[f64]) -> Result<bool> {
    fn rest(hulls: &[Polytope], x: &[f64], outer_contains: bool) -> Result<bool> {
        let Some((first, tail)) = hulls.split_first() else {
            return Ok(false);
        };
        let inside = first.contains(x)?;
        if inside && !outer_contains {
            return Err(Error::NotNested(format!(
                "point {x:?} lies in R{} only",
                first.level
            )));
        }
        let inner = rest(tail, x, inside)?;
        Ok(inside && !inner)
    }
    rest(hulls, x, true)
}
