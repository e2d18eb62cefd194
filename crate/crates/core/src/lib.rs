//! Geodesic flow on polycube translation 3-manifolds.

pub mod arithmetic;
pub mod ergodic_lab;
pub mod geodesic;
pub mod lattice_manifold;
pub mod splitting;

pub use arithmetic::{Component, ContinuedFraction, Direction, DirectionSpec, Frac};
pub use ergodic_lab::{CensusReport, IntervalUnion, PowerChain, Rect, RectangleUnionRegion};
pub use geodesic::{Flow, ManifoldPoint, Orientation, YPoint};
pub use lattice_manifold::{Axis, FaceRef, Manifest, Polycube3Manifold, PolysquareSurface, Side};
