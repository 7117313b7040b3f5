//! Forward pass through a [`ChainNetwork`], one bit per unit.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot, lift, ClassLabel, TAU};
use crate::network::{ChainNetwork, Unit, UnitKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTrace {
    /// `b_1 .. b_m`, one per unit.
    pub bits: Vec<bool>,
    /// Per module, the index of the first CUT unit that fired.
    pub fired_unit: Vec<Option<usize>>,
    pub label: ClassLabel,
}

impl EvalTrace {
    pub fn output(&self) -> bool {
        self.bits.last().copied().unwrap_or(false)
    }

    /// Bits as `0`/`1` separated by spaces.
    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { "1" } else { "0" })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Fires iff `data_weights . x~ + bit_weight * b > TAU`.
///
/// `b` is ignored for a unit without a bit weight.
#[inline]
pub fn unit_step(u: &Unit, lifted: &[f64], b: bool) -> Result<bool> {
    if lifted.len() != u.data_weights.len() {
        return Err(Error::Dimension {
            expected: u.data_weights.len(),
            found: lifted.len(),
        });
    }
    debug_assert_eq!(lifted.last(), Some(&1.0));
    Ok(fires(u, lifted, b))
}

#[inline]
fn fires(u: &Unit, lifted: &[f64], b: bool) -> bool {
    let mut sum = dot(&u.data_weights, lifted);
    if let (Some(w), true) = (u.bit_weight, b) {
        sum += w;
    }
    sum > TAU
}

fn lift_checked(net: &ChainNetwork, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != net.dimension {
        return Err(Error::Dimension {
            expected: net.dimension,
            found: x.len(),
        });
    }
    let lifted = lift(x);
    let norm = dot(&lifted, &lifted).sqrt();
    if norm.is_nan() || norm > net.domain_bound {
        return Err(Error::DomainBoundExceeded {
            norm,
            bound: net.domain_bound,
        });
    }
    Ok(lifted)
}

fn decode(net: &ChainNetwork, bit: bool) -> ClassLabel {
    if bit {
        net.positive_class
    } else {
        net.positive_class.opposite()
    }
}

/// Runs every unit on `x~`, threading the single bit through the chain.
pub fn forward(net: &ChainNetwork, x: &[f64]) -> Result<EvalTrace> {
    let lifted = lift_checked(net, x)?;
    let mut bits = Vec::with_capacity(net.units.len());
    let mut fired_unit = Vec::new();
    let mut module_fired = None;
    let mut bit = false;
    for (i, u) in net.units.iter().enumerate() {
        bit = fires(u, &lifted, bit);
        bits.push(bit);
        match u.kind {
            UnitKind::Cut if bit && module_fired.is_none() => module_fired = Some(i),
            UnitKind::Cut => {}
            UnitKind::Inverter => fired_unit.push(module_fired.take()),
        }
    }
    if net.units.last().is_some_and(|u| u.kind == UnitKind::Cut) {
        fired_unit.push(module_fired);
    }
    Ok(EvalTrace {
        bits,
        fired_unit,
        label: decode(net, bit),
    })
}

/// Same decision as [`forward`] without recording the trace.
pub fn classify(net: &ChainNetwork, x: &[f64]) -> Result<ClassLabel> {
    let lifted = lift_checked(net, x)?;
    let bit = net.units.iter().fold(false, |b, u| fires(u, &lifted, b));
    Ok(decode(net, bit))
}

/// Order-preserving parallel [`forward`].
pub fn forward_batch<P: AsRef<[f64]> + Sync>(
    net: &ChainNetwork,
    points: &[P],
) -> Vec<Result<EvalTrace>> {
    points
        .par_iter()
        .map(|p| forward(net, p.as_ref()))
        .collect()
}

/// Order-preserving parallel [`classify`].
pub fn classify_batch<P: AsRef<[f64]> + Sync>(
    net: &ChainNetwork,
    points: &[P],
) -> Vec<Result<ClassLabel>> {
    points
        .par_iter()
        .map(|p| classify(net, p.as_ref()))
        .collect()
}
