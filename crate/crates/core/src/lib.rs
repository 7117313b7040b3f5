//! Compile a labeled two-class point set into a width-one chain of threshold
//! perceptrons.
//!
//! The pipeline is [`dedup`] → [`peel`] (alternating nested convex hulls) →
//! [`compile`] (one chain module per region, innermost first) → [`forward`].
//! The [`oracle`] module classifies straight from the hulls and the
//! [`differential`] harness checks the two against each other.

pub mod differential;
pub mod error;
pub mod evaluator;
pub mod geometry;
pub mod io;
pub mod network;
pub mod oracle;
pub mod peeling;
pub mod synth;

pub use error::{Error, Result};
pub use evaluator::{classify, forward, unit_step, EvalTrace};
pub use geometry::{
    convex_hull_2d, cuts_from_hull, degenerate_cuts, nearest_cut_distance, polytope_contains,
    ClassLabel, Cut, LabeledPoint, Polytope, TAU,
};
pub use network::{
    compile, compile_polytope_module, default_bound, scale_cut, validate, ChainNetwork, Diagnostic,
    Unit, UnitKind, SATURATION,
};
pub use oracle::{alternating_membership, deepest_region, oracle_classify};
pub use peeling::{dedup, peel, Dataset};

/// `dedup → peel → compile` with the given bound, or the default bound.
pub fn build_network(d: &Dataset, bound: Option<f64>) -> Result<ChainNetwork> {
    let clean = dedup(d)?;
    let hulls = peel(&clean)?;
    compile(&hulls, bound.unwrap_or_else(|| default_bound(&clean)))
}
