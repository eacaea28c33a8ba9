//! Triangulated hyperbolic surfaces built from pants decompositions.

pub mod build;
pub mod corpus;
pub mod graph;
pub mod mesh;
pub mod spec;

pub use build::{build_mesh, build_surface, disk_mesh, disk_mesh_level, hexagon_chart, SurfaceBuild};
pub use graph::{FnCoordinates, PantsGraph, Slot, SlotRole};
pub use mesh::{flat_area, Chart, Metric, Placement, TriangleMesh};
pub use spec::{DiskMetric, DiskSpec, Surface, SurfaceSpec};
