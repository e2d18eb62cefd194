//! The shipped manifests rebuild exactly the gallery manifolds.

use polycube::lattice_manifold::{build_manifold, gallery, Manifest};
use polycube::Axis;
use std::path::PathBuf;

fn gallery_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gallery")
}

#[test]
fn manifests_match_builders() {
    for (key, built) in gallery::manifests() {
        let path = gallery_dir().join(format!("{key}.json"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let loaded = build_manifold(&Manifest::from_json(&text).unwrap()).unwrap();
        assert_eq!(loaded.name, built.name, "{key}");
        assert_eq!(loaded.cube_count(), built.cube_count(), "{key}");
        assert_eq!(loaded.labels(), built.labels(), "{key}");
        for c in 0..built.cube_count() {
            assert_eq!(loaded.origin(c), built.origin(c), "{key}");
            for axis in Axis::ALL {
                assert_eq!(loaded.next(axis, c), built.next(axis, c), "{key} cube {c} axis {axis:?}");
            }
        }
    }
}

#[test]
fn street_wrap_default_reproduces_products() {
    // the compact form without overrides gives the same L-solid
    let text = r#"{"name":"l-solid","cubes":[[0,0,0],[0,1,0],[1,0,0]],"labels":[2,1,3]}"#;
    let compact = build_manifold(&Manifest::from_json(text).unwrap()).unwrap();
    let built = gallery::l_solid();
    for c in 0..3 {
        for axis in Axis::ALL {
            assert_eq!(compact.next(axis, c), built.next(axis, c));
        }
    }
}
