//! Planar convex hulls, homogeneous halfspace cuts and polytope membership.
//!
//! A [`Cut`] stores `n + 1` weights `(w_1, .., w_n, -theta)`. A point `x` is
//! lifted to `x~ = (x_1, .., x_n, 1)` and lies *outside* the cut iff
//! `w . x~ > TAU`. Membership in a [`Polytope`] is closed: a point is inside
//! iff it is not outside any of its cuts.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on raw (unnormalized) cut products.
///
/// Shared by hull membership and the unit firing rule so that the compiled
/// network and the geometric oracle place boundary points identically.
pub const TAU: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Pos,
    Neg,
}

impl ClassLabel {
    pub fn opposite(self) -> Self {
        match self {
            ClassLabel::Pos => ClassLabel::Neg,
            ClassLabel::Neg => ClassLabel::Pos,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Pos => "pos",
            ClassLabel::Neg => "neg",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub coords: Vec<f64>,
    pub label: ClassLabel,
}

impl LabeledPoint {
    pub fn new(coords: Vec<f64>, label: ClassLabel) -> Self {
        Self { coords, label }
    }
}

/// Appends the constant 1 so thresholds fold into the last weight.
pub fn lift(x: &[f64]) -> Vec<f64> {
    let mut lifted = Vec::with_capacity(x.len() + 1);
    lifted.extend_from_slice(x);
    lifted.push(1.0);
    lifted
}

/// Euclidean norm of the lifted vector `(x, 1)`.
pub fn lifted_norm(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() + 1.0).sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

/// One linear cut in homogeneous form. The positive side is the exterior.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub weights: Vec<f64>,
}

impl Cut {
    pub fn new(weights: Vec<f64>) -> Self {
        debug_assert!(
            weights.len() >= 2,
            "a cut needs at least one data weight and a bias"
        );
        Self { weights }
    }

    /// Dimension `n` of the input space (one less than the weight count).
    pub fn dimension(&self) -> usize {
        self.weights.len() - 1
    }

    /// `w . x~` for an un-lifted point `x`.
    ///
    /// Summation order matches a plain dot product with the lifted vector.
    #[inline]
    pub fn value(&self, x: &[f64]) -> f64 {
        let (bias, normal) = self.weights.split_last().expect("cut has weights");
        dot(normal, x) + bias
    }

    #[inline]
    pub fn is_outside(&self, x: &[f64]) -> bool {
        self.value(x) > TAU
    }

    /// Euclidean norm of the normal part `(w_1, .., w_n)`.
    pub fn normal_norm(&self) -> f64 {
        let (_, normal) = self.weights.split_last().expect("cut has weights");
        normal.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Euclidean distance from `x` to the cut hyperplane.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.value(x).abs() / self.normal_norm()
    }
}

/// One nesting level `R_k`: a convex region and the class whose points spanned it.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub vertices: Vec<Vec<f64>>,
    pub cuts: Vec<Cut>,
    pub generator_class: ClassLabel,
    /// 1-based position in the nesting sequence.
    pub level: usize,
}

impl Polytope {
    /// Builds the closed convex hull of planar `points`, falling back to
    /// exact cap cuts when the hull is a single point or a segment.
    pub fn hull_2d<P: AsRef<[f64]>>(
        points: &[P],
        generator_class: ClassLabel,
        level: usize,
    ) -> Result<Self> {
        let hull = convex_hull_2d(points)?;
        let cuts = if hull.len() >= 3 {
            cuts_from_hull(&hull)?
        } else {
            degenerate_cuts(&hull)?
        };
        Ok(Self {
            vertices: hull.iter().map(|v| v.to_vec()).collect(),
            cuts,
            generator_class,
            level,
        })
    }

    pub fn dimension(&self) -> usize {
        self.cuts
            .first()
            .map_or_else(|| self.vertices.first().map_or(0, Vec::len), Cut::dimension)
    }

    /// Closed membership: `w . x~ <= TAU` for every cut.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let n = self.dimension();
        if x.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: x.len(),
            });
        }
        Ok(self.cuts.iter().all(|c| !c.is_outside(x)))
    }
}

/// Convenience wrapper around [`Polytope::contains`].
pub fn polytope_contains(p: &Polytope, x: &[f64]) -> Result<bool> {
    p.contains(x)
}

fn planar(p: &[f64]) -> Result<[f64; 2]> {
    match *p {
        // `+ 0.0` folds -0.0 into 0.0 so lexicographic order matches `==`.
        [x, y] if x.is_finite() && y.is_finite() => Ok([x + 0.0, y + 0.0]),
        [_, _] => Err(Error::NonFinite),
        _ => Err(Error::Dimension {
            expected: 2,
            found: p.len(),
        }),
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn lexicographic(a: &[f64; 2], b: &[f64; 2]) -> Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

/// Andrew's monotone chain.
///
/// Returns the hull counterclockwise, starting at the lexicographically
/// smallest point, with collinear vertices dropped. One distinct input point
/// yields that point; collinear inputs yield the two extreme endpoints.
pub fn convex_hull_2d<P: AsRef<[f64]>>(points: &[P]) -> Result<Vec<[f64; 2]>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts = points
        .iter()
        .map(|p| planar(p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    pts.sort_by(lexicographic);
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }

    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    // the last point closes the loop back to the first
    hull.pop();
    Ok(hull)
}

/// Twice the signed area of a closed polygon.
fn doubled_area(vertices: &[[f64; 2]]) -> f64 {
    vertices
        .iter()
        .zip(vertices.iter().cycle().skip(1))
        .map(|(a, b)| a[0] * b[1] - b[0] * a[1])
        .sum()
}

/// One outward cut per edge `a -> b` of a counterclockwise polygon:
/// `(b_y - a_y, a_x - b_x, a_y * b_x - a_x * b_y)`.
pub fn cuts_from_hull(vertices: &[[f64; 2]]) -> Result<Vec<Cut>> {
    if vertices.len() < 3 {
        return Err(Error::DegenerateHull(format!(
            "{} vertices",
            vertices.len()
        )));
    }
    if doubled_area(vertices) <= 0.0 {
        return Err(Error::DegenerateHull("zero or negative area".into()));
    }
    Ok(vertices
        .iter()
        .zip(vertices.iter().cycle().skip(1))
        .map(|(a, b)| Cut::new(vec![b[1] - a[1], a[0] - b[0], a[1] * b[0] - a[0] * b[1]]))
        .collect())
}

/// Cuts whose closed intersection is exactly a point or a segment.
///
/// A point `p` gets the four axis-aligned cuts through it. A segment `a-b`
/// gets both orientations of its supporting line plus an end cap at `a`
/// and at `b`.
pub fn degenerate_cuts(vertices: &[[f64; 2]]) -> Result<Vec<Cut>> {
    match *vertices {
        [p] => Ok(vec![
            Cut::new(vec![1.0, 0.0, -p[0]]),
            Cut::new(vec![-1.0, 0.0, p[0]]),
            Cut::new(vec![0.0, 1.0, -p[1]]),
            Cut::new(vec![0.0, -1.0, p[1]]),
        ]),
        [a, b] => {
            let d = [b[0] - a[0], b[1] - a[1]];
            if d == [0.0, 0.0] {
                return degenerate_cuts(&[a]);
            }
            let normal = [-d[1], d[0]];
            let offset = normal[0] * a[0] + normal[1] * a[1];
            Ok(vec![
                Cut::new(vec![normal[0], normal[1], -offset]),
                Cut::new(vec![-normal[0], -normal[1], offset]),
                Cut::new(vec![-d[0], -d[1], d[0] * a[0] + d[1] * a[1]]),
                Cut::new(vec![d[0], d[1], -(d[0] * b[0] + d[1] * b[1])]),
            ])
        }
        _ => Err(Error::DegenerateHull(format!(
            "cap cuts need 1 or 2 vertices, got {}",
            vertices.len()
        ))),
    }
}

/// Distance from `x` to the nearest cut hyperplane of any hull.
pub fn nearest_cut_distance(hulls: &[Polytope], x: &[f64]) -> Result<f64> {
    if hulls.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut best = f64::INFINITY;
    for hull in hulls {
        let n = hull.dimension();
        if x.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: x.len(),
            });
        }
        for cut in &hull.cuts {
            best = best.min(cut.distance(x));
        }
    }
    Ok(best)
}
