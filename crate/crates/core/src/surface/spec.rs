//! Surface description files.
//!
//! ```json
//! { "pants": 1,
//!   "gluings": [[[0, 0], [0, 1], 3.0, 0.5]],
//!   "boundaries": [[0, 2, 2.5]],
//!   "resolution": 0.1 }
//! ```
//!
//! or `{ "disk": { "radius": 1.0, "metric": "hyperbolic" }, "resolution": 0.05 }`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

use super::build::{build_surface, disk_mesh, SurfaceBuild};
use super::graph::{FnCoordinates, PantsGraph, Slot};
use super::mesh::{Metric, TriangleMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiskMetric {
    Hyperbolic,
    Euclidean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub radius: f64,
    #[serde(default = "default_metric")]
    pub metric: DiskMetric,
}

fn default_metric() -> DiskMetric {
    DiskMetric::Hyperbolic
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pants: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gluings: Vec<([usize; 2], [usize; 2], f64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundaries: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskSpec>,
    pub resolution: f64,
}

/// A parsed surface ready to mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Pants { graph: PantsGraph, coords: FnCoordinates },
    Disk { radius: f64, metric: Metric },
}

impl SurfaceSpec {
    /// Parse JSON text; errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        // serde_json already ends its messages with the position.
        serde_json::from_str(text).map_err(|e| LabError::Parse(e.to_string()))
    }

    pub fn from_pants(
        name: &str,
        graph: &PantsGraph,
        coords: &FnCoordinates,
        resolution: f64,
    ) -> Self {
        SurfaceSpec {
            name: Some(name.to_string()),
            pants: Some(graph.pants),
            gluings: graph
                .gluings
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    ([a.pants, a.cuff], [b.pants, b.cuff], coords.cuff_lengths[i], coords.twists[i])
                })
                .collect(),
            boundaries: graph
                .boundary_slots
                .iter()
                .zip(&coords.boundary_lengths)
                .map(|(s, &l)| (s.pants, s.cuff, l))
                .collect(),
            disk: None,
            resolution,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn surface(&self) -> Result<Surface> {
        match (&self.disk, self.pants) {
            (Some(d), None) if self.gluings.is_empty() && self.boundaries.is_empty() => {
                Ok(Surface::Disk {
                    radius: d.radius,
                    metric: match d.metric {
                        DiskMetric::Hyperbolic => Metric::Hyperbolic,
                        DiskMetric::Euclidean => Metric::Euclidean,
                    },
                })
            }
            (None, Some(pants)) => {
                let graph = PantsGraph {
                    pants,
                    gluings: self
                        .gluings
                        .iter()
                        .map(|(a, b, _, _)| (Slot::new(a[0], a[1]), Slot::new(b[0], b[1])))
                        .collect(),
                    boundary_slots: self.boundaries.iter().map(|b| Slot::new(b.0, b.1)).collect(),
                };
                let coords = FnCoordinates {
                    cuff_lengths: self.gluings.iter().map(|g| g.2).collect(),
                    twists: self.gluings.iter().map(|g| g.3).collect(),
                    boundary_lengths: self.boundaries.iter().map(|b| b.2).collect(),
                };
                graph.validate()?;
                graph.check_coordinates(&coords)?;
                Ok(Surface::Pants { graph, coords })
            }
            _ => Err(LabError::Parse(
                "a surface spec needs either `pants` with gluings/boundaries or a `disk`".into(),
            )),
        }
    }
}

impl Surface {
    pub fn mesh(&self, resolution: f64) -> Result<TriangleMesh> {
        match self {
            Surface::Pants { graph, coords } => Ok(build_surface(graph, coords, resolution)?.mesh),
            Surface::Disk { radius, metric } => disk_mesh(*radius, *metric, resolution),
        }
    }

    pub fn build(&self, resolution: f64) -> Result<Option<SurfaceBuild>> {
        match self {
            Surface::Pants { graph, coords } => build_surface(graph, coords, resolution).map(Some),
            Surface::Disk { .. } => Ok(None),
        }
    }

    /// `(genus, boundary count)`.
    pub fn topology(&self) -> Result<(usize, usize)> {
        match self {
            Surface::Pants { graph, .. } => graph.validate(),
            Surface::Disk { .. } => Ok((0, 1)),
        }
    }

    /// Exact area `2 pi (2g - 2 + n)` for pants surfaces; the disk area
    /// in its own metric.
    pub fn exact_area(&self) -> Result<f64> {
        use std::f64::consts::PI;
        match self {
            Surface::Pants { graph, .. } => Ok(2.0 * PI * graph.pants as f64),
            Surface::Disk { radius, metric: Metric::Hyperbolic } => Ok(2.0 * PI * (radius.cosh() - 1.0)),
            Surface::Disk { radius, metric: Metric::Euclidean } => Ok(PI * radius * radius),
        }
    }

    pub fn exact_boundary_lengths(&self) -> Vec<f64> {
        use std::f64::consts::PI;
        match self {
            Surface::Pants { coords, .. } => coords.boundary_lengths.clone(),
            Surface::Disk { radius, metric: Metric::Hyperbolic } => vec![2.0 * PI * radius.sinh()],
            Surface::Disk { radius, metric: Metric::Euclidean } => vec![2.0 * PI * radius],
        }
    }
}
