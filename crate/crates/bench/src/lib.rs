//! Benchmark fixtures shared by the bench targets.

use polycube::lattice_manifold::gallery;
use polycube::{Polycube3Manifold, YPoint};

/// Manifolds of increasing size: the L-solid, a walled cover, and the cover
/// magnified twice.
pub fn manifolds() -> Vec<(&'static str, Polycube3Manifold)> {
    let cover = gallery::walled_column_cover().expect("valid cover");
    let magnified = polycube::lattice_manifold::magnify(&cover, 2).expect("valid magnification");
    vec![("l_solid", gallery::l_solid()), ("cover", cover), ("magnified", magnified)]
}

pub fn start() -> YPoint {
    YPoint { cube: 0, x: 0.123_456_789, z: 0.314_159_265 }
}
