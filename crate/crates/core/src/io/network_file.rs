//! JSON network files (`format_version` 1).
//!
//! Reals are written in shortest round-trip form and parsed back exactly, so
//! `load(save(net)) == net` bit for bit. Schema checks happen here; semantic
//! checks (saturation, first-unit bit, ...) are left to
//! [`validate`](crate::network::validate).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ClassLabel, Cut, Polytope};
use crate::network::{ChainNetwork, Unit, UnitKind};

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKindTag {
    Cut,
    Inverter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitRecord {
    pub kind: UnitKindTag,
    pub data_weights: Vec<f64>,
    // present-but-null, never omitted
    #[serde(deserialize_with = "Option::deserialize")]
    pub bit_weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HullRecord {
    pub generator_class: ClassLabel,
    pub vertices: Vec<Vec<f64>>,
    pub cuts: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub format_version: i64,
    pub dimension: usize,
    pub domain_bound: f64,
    pub saturation: f64,
    pub positive_class: ClassLabel,
    pub units: Vec<UnitRecord>,
    #[serde(default)]
    pub hulls: Option<Vec<HullRecord>>,
}

impl From<&ChainNetwork> for NetworkFile {
    fn from(net: &ChainNetwork) -> Self {
        let units = net
            .units
            .iter()
            .map(|u| UnitRecord {
                kind: match u.kind {
                    UnitKind::Cut => UnitKindTag::Cut,
                    UnitKind::Inverter => UnitKindTag::Inverter,
                },
                data_weights: u.data_weights.clone(),
                bit_weight: u.bit_weight,
            })
            .collect();
        let hulls = net.hulls.as_ref().map(|hs| {
            hs.iter()
                .map(|h| HullRecord {
                    generator_class: h.generator_class,
                    vertices: h.vertices.clone(),
                    cuts: h.cuts.iter().map(|c| c.weights.clone()).collect(),
                })
                .collect()
        });
        NetworkFile {
            format_version: FORMAT_VERSION,
            dimension: net.dimension,
            domain_bound: net.domain_bound,
            saturation: net.saturation,
            positive_class: net.positive_class,
            units,
            hulls,
        }
    }
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        msg: msg.into(),
    }
}

impl TryFrom<NetworkFile> for ChainNetwork {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        let n = file.dimension;
        if n == 0 {
            return Err(schema("dimension", "must be at least 1"));
        }
        let mut units = Vec::with_capacity(file.units.len());
        for (i, u) in file.units.into_iter().enumerate() {
            if u.data_weights.len() != n + 1 {
                return Err(schema(
                    format!("units[{i}].data_weights"),
                    format!("expected {} entries, found {}", n + 1, u.data_weights.len()),
                ));
            }
            let kind = match u.kind {
                UnitKindTag::Cut => UnitKind::Cut,
                UnitKindTag::Inverter => UnitKind::Inverter,
            };
            units.push(Unit {
                kind,
                data_weights: u.data_weights,
                bit_weight: u.bit_weight,
            });
        }

        let hulls = match file.hulls {
            None => None,
            Some(records) => {
                let mut hulls = Vec::with_capacity(records.len());
                for (k, h) in records.into_iter().enumerate() {
                    if h.vertices.is_empty() {
                        return Err(schema(format!("hulls[{k}].vertices"), "empty"));
                    }
                    if h.cuts.is_empty() {
                        return Err(schema(format!("hulls[{k}].cuts"), "empty"));
                    }
                    if let Some(j) = h.vertices.iter().position(|v| v.len() != n) {
                        return Err(schema(
                            format!("hulls[{k}].vertices[{j}]"),
                            format!("expected {n} entries"),
                        ));
                    }
                    if let Some(j) = h.cuts.iter().position(|c| c.len() != n + 1) {
                        return Err(schema(
                            format!("hulls[{k}].cuts[{j}]"),
                            format!("expected {} entries", n + 1),
                        ));
                    }
                    hulls.push(Polytope {
                        vertices: h.vertices,
                        cuts: h.cuts.into_iter().map(Cut::new).collect(),
                        generator_class: h.generator_class,
                        level: k + 1,
                    });
                }
                Some(hulls)
            }
        };

        Ok(ChainNetwork {
            dimension: n,
            domain_bound: file.domain_bound,
            saturation: file.saturation,
            units,
            positive_class: file.positive_class,
            hulls,
        })
    }
}

pub fn network_to_json(net: &ChainNetwork) -> String {
    serde_json::to_string_pretty(&NetworkFile::from(net)).expect("network file serializes")
}

pub fn network_from_json(text: &str) -> Result<ChainNetwork> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        msg: e.to_string(),
    })?;
    match value.get("format_version") {
        None => return Err(schema("format_version", "missing field")),
        Some(v) => match v.as_i64() {
            Some(FORMAT_VERSION) => {}
            Some(other) => return Err(Error::Version(other)),
            None => {
                return Err(schema(
                    "format_version",
                    format!("expected an integer, found {v}"),
                ))
            }
        },
    }
    let file: NetworkFile = serde_path_to_error::deserialize(value)
        .map_err(|e| schema(e.path().to_string(), e.inner().to_string()))?;
    file.try_into()
}

pub fn save_network(net: &ChainNetwork, path: impl AsRef<Path>) -> Result<()> {
    let mut text = network_to_json(net);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_network(path: impl AsRef<Path>) -> Result<ChainNetwork> {
    network_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{compile, validate, Diagnostic};

    fn triangle_net() -> ChainNetwork {
        let tri =
            Polytope::hull_2d(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], ClassLabel::Pos, 1).unwrap();
        compile(&[tri], 2.0).unwrap()
    }

    #[test]
    fn triangle_schema_instance() {
        let json = network_to_json(&triangle_net());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["positive_class"], "pos");
        let units = v["units"].as_array().unwrap();
        assert_eq!(units.len(), 4);
        assert_eq!(units[0]["kind"], "cut");
        assert!(units[0]["bit_weight"].is_null());
        assert_eq!(units[0]["bit_weight"], serde_json::Value::Null);
        assert!(units[0].as_object().unwrap().contains_key("bit_weight"));
        assert_eq!(units[3]["kind"], "inverter");
        assert_eq!(units[3]["bit_weight"], -1.0);
        assert_eq!(v["hulls"][0]["cuts"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn round_trip_is_exact() {
        let net = triangle_net();
        assert_eq!(network_from_json(&network_to_json(&net)).unwrap(), net);
    }

    #[test]
    fn first_unit_bit_is_schema_valid_but_flagged() {
        let json = network_to_json(&triangle_net());
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v["units"][0]["bit_weight"] = 2.0.into();
        let net = network_from_json(&v.to_string()).unwrap();
        assert_eq!(validate(&net), vec![Diagnostic::FirstUnitHasBit]);
    }

    #[test]
    fn version_and_schema_errors() {
        let json = network_to_json(&triangle_net());
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();

        v["format_version"] = 2.into();
        assert_eq!(network_from_json(&v.to_string()), Err(Error::Version(2)));

        v["format_version"] = 1.into();
        v["units"][2]["kind"] = "relu".into();
        match network_from_json(&v.to_string()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "units[2].kind"),
            other => panic!("{other:?}"),
        }

        v["units"][2]["kind"] = "cut".into();
        v["units"][1].as_object_mut().unwrap().remove("bit_weight");
        match network_from_json(&v.to_string()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "units[1]"),
            other => panic!("{other:?}"),
        }

        v["units"][1]["bit_weight"] = 2.0.into();
        v["units"][1]["data_weights"] = serde_json::json!([0.1, 0.2]);
        match network_from_json(&v.to_string()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "units[1].data_weights"),
            other => panic!("{other:?}"),
        }

        assert!(matches!(
            network_from_json("{\"units\": []}"),
            Err(Error::Schema { .. })
        ));
        assert!(matches!(network_from_json("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn hulls_may_be_absent() {
        let mut net = triangle_net();
        net.hulls = None;
        let json = network_to_json(&net);
        assert_eq!(network_from_json(&json).unwrap(), net);
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v.as_object_mut().unwrap().remove("hulls");
        assert_eq!(network_from_json(&v.to_string()).unwrap(), net);
    }
}
