//! Compilation of nested regions into a width-one chain of threshold units.
//!
//! Every unit reads the lifted input `x~` (the shortcut) plus at most one bit
//! from its predecessor. A region module is one CUT unit per facet followed by
//! an inverter; once any CUT fires, the saturation weight forces every later
//! CUT of the module to fire, and the inverter turns "never fired" into
//! "inside". Modules run innermost region first.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::geometry::{ClassLabel, Cut, Polytope, TAU};
use crate::peeling::Dataset;

/// Weight on the bit channel of every CUT unit after the first.
///
/// Scaled data terms lie in `[-1/2, 1/2]`, so an incoming 1 always lifts the
/// sum to at least `1.5`.
pub const SATURATION: f64 = 2.0;

/// Bias of an inverter; it fires iff `0.5 - b > TAU`.
pub const INVERTER_BIAS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitKind {
    Cut,
    Inverter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unit {
    pub kind: UnitKind,
    /// Applied to `x~`; length `n + 1`.
    pub data_weights: Vec<f64>,
    /// Applied to the previous unit's bit; `None` only for the first unit.
    pub bit_weight: Option<f64>,
}

impl Unit {
    pub fn cut(data_weights: Vec<f64>, bit_weight: Option<f64>) -> Self {
        Self {
            kind: UnitKind::Cut,
            data_weights,
            bit_weight,
        }
    }

    pub fn inverter(dimension: usize) -> Self {
        let mut data_weights = vec![0.0; dimension + 1];
        data_weights[dimension] = INVERTER_BIAS;
        Self {
            kind: UnitKind::Inverter,
            data_weights,
            bit_weight: Some(-1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainNetwork {
    pub dimension: usize,
    /// Largest accepted `|x~|`; the saturation argument only holds inside it.
    pub domain_bound: f64,
    pub saturation: f64,
    /// Innermost module first.
    pub units: Vec<Unit>,
    pub positive_class: ClassLabel,
    pub hulls: Option<Vec<Polytope>>,
}

impl ChainNetwork {
    /// Unit index ranges of each region module, each ending at an inverter.
    ///
    /// Trailing CUT units without an inverter form a final partial module.
    pub fn modules(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, u) in self.units.iter().enumerate() {
            if u.kind == UnitKind::Inverter {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        if start < self.units.len() {
            out.push(start..self.units.len());
        }
        out
    }
}

/// Twice the largest lifted norm in the dataset.
pub fn default_bound(d: &Dataset) -> f64 {
    2.0 * d.max_lifted_norm()
}

fn check_bound(bound: f64) -> Result<()> {
    if bound > 0.0 && bound.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidBound(bound))
    }
}

/// Rescales a cut by `alpha = 1 / (2 |w| B)` so that `|alpha w . x~| <= 1/2`
/// whenever `|x~| <= B`. The hyperplane itself does not move.
pub fn scale_cut(c: &Cut, bound: f64) -> Result<Cut> {
    check_bound(bound)?;
    let norm = c.weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroWeight);
    }
    let alpha = 1.0 / (2.0 * norm * bound);
    Ok(Cut::new(c.weights.iter().map(|w| alpha * w).collect()))
}

/// Emits the CUT units of `p` followed by one inverter. The module's output
/// bit is 1 iff `x` is inside `p` and the incoming bit is 0.
pub fn compile_polytope_module(
    p: &Polytope,
    bound: f64,
    has_incoming_bit: bool,
) -> Result<Vec<Unit>> {
    if p.cuts.is_empty() {
        return Err(Error::DegenerateHull(format!(
            "region {} has no cuts",
            p.level
        )));
    }
    let mut units = Vec::with_capacity(p.cuts.len() + 1);
    for (i, cut) in p.cuts.iter().enumerate() {
        let scaled = scale_cut(cut, bound)?;
        let bit_weight = (i > 0 || has_incoming_bit).then_some(SATURATION);
        units.push(Unit::cut(scaled.weights, bit_weight));
    }
    units.push(Unit::inverter(p.dimension()));
    Ok(units)
}

fn check_sequence(hulls: &[Polytope]) -> Result<()> {
    let first = hulls.first().ok_or(Error::EmptyInput)?;
    let n = first.dimension();
    for (i, h) in hulls.iter().enumerate() {
        if h.level != i + 1 {
            return Err(Error::NotNested(format!(
                "region at position {} has level {}",
                i + 1,
                h.level
            )));
        }
        if let Some(bad) = h.cuts.iter().find(|c| c.dimension() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: bad.dimension(),
            });
        }
    }
    for pair in hulls.windows(2) {
        let (outer, inner) = (&pair[0], &pair[1]);
        if inner.generator_class != outer.generator_class.opposite() {
            return Err(Error::NotAlternating(format!(
                "R{} and R{} are both {}",
                outer.level, inner.level, inner.generator_class
            )));
        }
        for v in &inner.vertices {
            if !outer.contains(v)? {
                return Err(Error::NotNested(format!(
                    "vertex {:?} of R{} lies outside R{}",
                    v, inner.level, outer.level
                )));
            }
        }
    }
    Ok(())
}

/// Chains the modules `R_m, R_{m-1}, .., R_1` so that the final bit is 1 iff
/// `x ∈ R_1 - R_2 + R_3 - ...`.
pub fn compile(hulls: &[Polytope], bound: f64) -> Result<ChainNetwork> {
    check_bound(bound)?;
    check_sequence(hulls)?;
    let mut units = Vec::with_capacity(hulls.iter().map(|h| h.cuts.len() + 1).sum());
    for (i, hull) in hulls.iter().rev().enumerate() {
        units.extend(compile_polytope_module(hull, bound, i > 0)?);
    }
    Ok(ChainNetwork {
        dimension: hulls[0].dimension(),
        domain_bound: bound,
        saturation: SATURATION,
        units,
        positive_class: hulls[0].generator_class,
        hulls: Some(hulls.to_vec()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    EmptyNetwork,
    InvalidBound(f64),
    InsufficientSaturation(f64),
    FirstUnitHasBit,
    MissingBitWeight {
        unit: usize,
    },
    WrongBitWeight {
        unit: usize,
        found: f64,
    },
    MalformedInverter {
        unit: usize,
    },
    MissingTerminalInverter,
    WeightDimension {
        unit: usize,
        expected: usize,
        found: usize,
    },
    ScaledNormExceeded {
        unit: usize,
        norm: f64,
        limit: f64,
    },
    UnitCountMismatch {
        expected: usize,
        found: usize,
    },
}

impl Diagnostic {
    pub fn code(&self) -> &'static str {
        match self {
            Diagnostic::EmptyNetwork => "EmptyNetwork",
            Diagnostic::InvalidBound(_) => "InvalidBound",
            Diagnostic::InsufficientSaturation(_) => "InsufficientSaturation",
            Diagnostic::FirstUnitHasBit => "FirstUnitHasBit",
            Diagnostic::MissingBitWeight { .. } => "MissingBitWeight",
            Diagnostic::WrongBitWeight { .. } => "WrongBitWeight",
            Diagnostic::MalformedInverter { .. } => "MalformedInverter",
            Diagnostic::MissingTerminalInverter => "MissingTerminalInverter",
            Diagnostic::WeightDimension { .. } => "WeightDimension",
            Diagnostic::ScaledNormExceeded { .. } => "ScaledNormExceeded",
            Diagnostic::UnitCountMismatch { .. } => "UnitCountMismatch",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyNetwork => write!(f, "network has no units"),
            Diagnostic::InvalidBound(b) => write!(f, "domain bound {b} is not positive and finite"),
            Diagnostic::InsufficientSaturation(s) => {
                write!(f, "saturation {s} does not exceed 1/2")
            }
            Diagnostic::FirstUnitHasBit => write!(f, "first unit has a bit weight"),
            Diagnostic::MissingBitWeight { unit } => write!(f, "unit {unit} has no bit weight"),
            Diagnostic::WrongBitWeight { unit, found } => {
                write!(
                    f,
                    "unit {unit} has bit weight {found}, expected the saturation weight"
                )
            }
            Diagnostic::MalformedInverter { unit } => {
                write!(f, "unit {unit} is not a well-formed inverter")
            }
            Diagnostic::MissingTerminalInverter => write!(f, "last unit is not an inverter"),
            Diagnostic::WeightDimension {
                unit,
                expected,
                found,
            } => {
                write!(
                    f,
                    "unit {unit} has {found} data weights, expected {expected}"
                )
            }
            Diagnostic::ScaledNormExceeded { unit, norm, limit } => {
                write!(f, "unit {unit} weight norm {norm} exceeds 1/(2B) = {limit}")
            }
            Diagnostic::UnitCountMismatch { expected, found } => {
                write!(f, "hulls imply {expected} units, network has {found}")
            }
        }
    }
}

/// Checks every structural invariant of a chain network; empty iff valid.
pub fn validate(net: &ChainNetwork) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let bound_ok = net.domain_bound > 0.0 && net.domain_bound.is_finite();
    if !bound_ok {
        out.push(Diagnostic::InvalidBound(net.domain_bound));
    }
    if !net.saturation.is_finite() || net.saturation - 0.5 <= TAU {
        out.push(Diagnostic::InsufficientSaturation(net.saturation));
    }
    if net.units.is_empty() {
        out.push(Diagnostic::EmptyNetwork);
        return out;
    }

    let limit = 1.0 / (2.0 * net.domain_bound);
    let expected_len = net.dimension + 1;
    let inverter = Unit::inverter(net.dimension);
    for (i, u) in net.units.iter().enumerate() {
        if u.data_weights.len() != expected_len {
            out.push(Diagnostic::WeightDimension {
                unit: i,
                expected: expected_len,
                found: u.data_weights.len(),
            });
            continue;
        }
        match (i, u.kind, u.bit_weight) {
            (0, _, Some(_)) => out.push(Diagnostic::FirstUnitHasBit),
            (0, UnitKind::Inverter, None) => out.push(Diagnostic::MalformedInverter { unit: i }),
            (0, UnitKind::Cut, None) => {}
            (_, _, None) => out.push(Diagnostic::MissingBitWeight { unit: i }),
            (_, UnitKind::Inverter, Some(_)) => {
                if *u != inverter {
                    out.push(Diagnostic::MalformedInverter { unit: i });
                }
            }
            (_, UnitKind::Cut, Some(w)) => {
                if w != net.saturation {
                    out.push(Diagnostic::WrongBitWeight { unit: i, found: w });
                }
            }
        }
        if u.kind == UnitKind::Cut && bound_ok {
            let norm = u.data_weights.iter().map(|w| w * w).sum::<f64>().sqrt();
            if norm > limit * (1.0 + 1e-9) {
                out.push(Diagnostic::ScaledNormExceeded {
                    unit: i,
                    norm,
                    limit,
                });
            }
        }
    }
    if net.units.last().map(|u| u.kind) != Some(UnitKind::Inverter) {
        out.push(Diagnostic::MissingTerminalInverter);
    }
    if let Some(hulls) = &net.hulls {
        let expected: usize = hulls.iter().map(|h| h.cuts.len() + 1).sum();
        if expected != net.units.len() {
            out.push(Diagnostic::UnitCountMismatch {
                expected,
                found: net.units.len(),
            });
        }
    }
    out
}
