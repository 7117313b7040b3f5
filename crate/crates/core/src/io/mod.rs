//! Dataset CSV, network JSON and SVG rendering.

mod dataset;
mod network_file;
mod svg;

pub use dataset::{load_dataset, load_dataset_path, load_points, write_dataset, write_labels};
pub use network_file::{
    load_network, network_from_json, network_to_json, save_network, HullRecord, NetworkFile,
    UnitKindTag, UnitRecord, FORMAT_VERSION,
};
pub use svg::{decision_grid, default_viewport, render_svg, Viewport};
