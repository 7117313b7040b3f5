//! Static SVG of the decision region, hull outlines and training points.

use std::fmt::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluator::classify;
use crate::geometry::{ClassLabel, Polytope};
use crate::network::ChainNetwork;
use crate::peeling::Dataset;

const CANVAS: f64 = 512.0;

/// Square window in problem coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min: [f64; 2],
    pub size: f64,
}

impl Viewport {
    /// Bounding box of `points`, padded by 10% and squared up.
    pub fn around<'a>(points: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        if !lo[0].is_finite() {
            return Self {
                min: [-1.0, -1.0],
                size: 2.0,
            };
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let pad = if extent > 0.0 { 0.1 * extent } else { 0.5 };
        let size = extent + 2.0 * pad;
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        Self {
            min: [center[0] - size / 2.0, center[1] - size / 2.0],
            size,
        }
    }

    /// Center of grid cell `(col, row)`; row 0 is the bottom row.
    pub fn cell_center(&self, col: usize, row: usize, resolution: usize) -> [f64; 2] {
        let step = self.size / resolution as f64;
        [
            self.min[0] + (col as f64 + 0.5) * step,
            self.min[1] + (row as f64 + 0.5) * step,
        ]
    }

    fn canvas_xy(&self, p: &[f64]) -> (f64, f64) {
        let s = CANVAS / self.size;
        ((p[0] - self.min[0]) * s, CANVAS - (p[1] - self.min[1]) * s)
    }
}

/// Network decision at every cell center, row-major from the bottom row.
/// `None` marks cells outside the network's domain bound.
pub fn decision_grid(
    net: &ChainNetwork,
    view: &Viewport,
    resolution: usize,
) -> Vec<Option<ClassLabel>> {
    (0..resolution * resolution)
        .into_par_iter()
        .map(|i| {
            classify(
                net,
                &view.cell_center(i % resolution, i / resolution, resolution),
            )
            .ok()
        })
        .collect()
}

fn region_fill(label: Option<ClassLabel>) -> &'static str {
    match label {
        Some(ClassLabel::Pos) => "#cfe0fa",
        Some(ClassLabel::Neg) => "#fbefc6",
        None => "#e4e4e4",
    }
}

fn ink(label: ClassLabel) -> &'static str {
    match label {
        ClassLabel::Pos => "#1f5fbf",
        ClassLabel::Neg => "#c98d00",
    }
}

/// Viewport covering the stored hulls and the dataset.
pub fn default_viewport(hulls: &[Polytope], dataset: Option<&Dataset>) -> Viewport {
    let hull_pts = hulls
        .iter()
        .flat_map(|h| h.vertices.iter().map(Vec::as_slice));
    let data_pts = dataset
        .into_iter()
        .flat_map(|d| d.points.iter().map(|p| p.coords.as_slice()));
    Viewport::around(hull_pts.chain(data_pts))
}

pub fn render_svg(
    net: &ChainNetwork,
    dataset: Option<&Dataset>,
    resolution: usize,
) -> Result<String> {
    if net.dimension != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: net.dimension,
        });
    }
    if let Some(d) = dataset {
        if d.dimension != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: d.dimension,
            });
        }
    }
    if resolution == 0 {
        return Err(Error::EmptyInput);
    }
    let hulls = net.hulls.as_deref().unwrap_or(&[]);
    let view = default_viewport(hulls, dataset);
    let grid = decision_grid(net, &view, resolution);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );

    let cell = CANVAS / resolution as f64;
    let _ = writeln!(
        svg,
        r#"<g id="decision-region" shape-rendering="crispEdges">"#
    );
    for (i, label) in grid.iter().enumerate() {
        let (col, row) = (i % resolution, i / resolution);
        let class = label.map_or("outside", ClassLabel::as_str);
        let _ = writeln!(
            svg,
            r#"<rect class="cell {class}" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
            col as f64 * cell,
            CANVAS - (row + 1) as f64 * cell,
            cell,
            cell,
            region_fill(*label)
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g id="hulls" fill="none" stroke-width="1.5">"#);
    for h in hulls {
        let pts: Vec<String> = h
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = view.canvas_xy(v);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon class="hull level-{} {}" points="{}" stroke="{}"/>"#,
            h.level,
            h.generator_class,
            pts.join(" "),
            ink(h.generator_class)
        );
    }
    let _ = writeln!(svg, "</g>");

    if let Some(d) = dataset {
        let _ = writeln!(svg, r#"<g id="points">"#);
        for p in &d.points {
            let (x, y) = view.canvas_xy(&p.coords);
            let _ = writeln!(
                svg,
                r#"<circle class="point {}" cx="{x:.3}" cy="{y:.3}" r="3" fill="{}"/>"#,
                p.label,
                ink(p.label)
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::forward;
    use crate::geometry::{ClassLabel::*, LabeledPoint};
    use crate::network::compile;
    use crate::peeling::{dedup, peel};

    fn nested_squares() -> Dataset {
        let pts = [
            (0.0, 0.0, Pos),
            (4.0, 0.0, Pos),
            (4.0, 4.0, Pos),
            (0.0, 4.0, Pos),
            (2.0, 2.0, Pos),
            (1.0, 1.0, Neg),
            (3.0, 1.0, Neg),
            (3.0, 3.0, Neg),
            (1.0, 3.0, Neg),
        ];
        Dataset::new(
            pts.iter()
                .map(|&(x, y, l)| LabeledPoint::new(vec![x, y], l))
                .collect(),
            2,
            Pos,
        )
        .unwrap()
    }

    fn build(d: &Dataset) -> ChainNetwork {
        let d = dedup(d).unwrap();
        compile(&peel(&d).unwrap(), crate::network::default_bound(&d)).unwrap()
    }

    #[test]
    fn nested_squares_structure() {
        let d = nested_squares();
        let svg = render_svg(&build(&d), Some(&d), 64).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert_eq!(svg.matches(r#"<rect class="cell"#).count(), 64 * 64);
        assert_eq!(svg.matches("<circle").count(), 9);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn triangle_is_two_colored() {
        let pts = [(0.0, 0.0, Pos), (1.0, 0.0, Pos), (0.0, 1.0, Pos)];
        let d = Dataset::new(
            pts.iter()
                .map(|&(x, y, l)| LabeledPoint::new(vec![x, y], l))
                .collect(),
            2,
            Pos,
        )
        .unwrap();
        let svg = render_svg(&build(&d), Some(&d), 32).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains(r#"class="cell pos""#));
        assert!(svg.contains(r#"class="cell neg""#));
        assert!(!svg.contains(r#"class="cell outside""#));
    }

    #[test]
    fn raster_matches_forward_at_cell_centers() {
        let d = nested_squares();
        let net = build(&d);
        let view = default_viewport(net.hulls.as_ref().unwrap(), Some(&d));
        let res = 40;
        let grid = decision_grid(&net, &view, res);
        for (i, cell) in grid.iter().enumerate() {
            let c = view.cell_center(i % res, i / res, res);
            assert_eq!(*cell, forward(&net, &c).ok().map(|t| t.label));
        }
    }

    #[test]
    fn rejects_non_planar() {
        let tri = Polytope {
            vertices: vec![vec![0.0; 3]],
            cuts: vec![crate::geometry::Cut::new(vec![1.0, 0.0, 0.0, 0.0])],
            generator_class: Pos,
            level: 1,
        };
        let net = compile(&[tri], 4.0).unwrap();
        assert_eq!(
            render_svg(&net, None, 8),
            Err(Error::Dimension {
                expected: 2,
                found: 3
            })
        );
    }
}
