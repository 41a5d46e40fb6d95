//! Self-describing map document: nested coordinate arrays in meters plus
//! optional embedded planner defaults. JSON keeps the format diffable and
//! round-trips f64 coordinates losslessly.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use coverage_core::geom::{Point, PolygonWithHoles, Ring};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    /// Always "meters"; maps are assumed already projected locally.
    pub units: String,
    pub outer: Vec<[f64; 2]>,
    #[serde(default)]
    pub holes: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defaults: Option<MapDefaults>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct MapDefaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<[f64; 2]>,
}

impl MapFile {
    pub fn from_pwh(pwh: &PolygonWithHoles, defaults: Option<MapDefaults>) -> MapFile {
        let ring_coords = |r: &Ring| r.vertices().iter().map(|p| [p.x, p.y]).collect();
        MapFile {
            units: "meters".to_string(),
            outer: ring_coords(pwh.outer()),
            holes: pwh.holes().iter().map(ring_coords).collect(),
            defaults,
        }
    }

    pub fn to_pwh(&self) -> coverage_core::Result<PolygonWithHoles> {
        if self.units != "meters" {
            return Err(coverage_core::Error::InvalidParameter(format!(
                "unsupported units {:?}; maps must be in meters",
                self.units
            )));
        }
        let ring = |coords: &Vec<[f64; 2]>| {
            Ring::new(coords.iter().map(|&[x, y]| Point::new(x, y)).collect())
        };
        let outer = ring(&self.outer)?;
        let holes = self.holes.iter().map(ring).collect::<coverage_core::Result<Vec<_>>>()?;
        PolygonWithHoles::new(outer, holes)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("map serialization");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> anyhow::Result<MapFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading map {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing map {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, self.to_json())
            .with_context(|| format!("writing map {}", path.display()))
    }
}
