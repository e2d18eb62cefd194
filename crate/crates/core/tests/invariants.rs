use polycube::arithmetic::{gap_spectrum, Component, ContinuedFraction};
use polycube::ergodic_lab::{multiplicity_profile, IntervalUnion, Rect, RectangleUnionRegion};
use polycube::geodesic::GeodesicError;
use polycube::lattice_manifold::gallery;
use polycube::{Direction, Flow, Orientation, YPoint};
use proptest::prelude::*;

// room for the rounding in arc endpoints
const SLACK: f64 = 1e-15;

fn arcs() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((0.0..1.0f64, 0.0..0.4f64), 0..5).prop_map(|v| IntervalUnion::new(v.into_iter().map(|(a, l)| (a, a + l))))
}

fn manifold_index() -> impl Strategy<Value = usize> {
    0..gallery::manifests().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetric_difference_is_a_metric(a in arcs(), b in arcs(), c in arcs()) {
        let d = |u: &IntervalUnion, w: &IntervalUnion| u.symm_diff(w).measure();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + SLACK);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= SLACK);
        prop_assert!(d(&a, &a) <= SLACK);
    }

    #[test]
    fn measure_is_additive(a in arcs(), b in arcs()) {
        let lhs = a.union(&b).measure() + a.intersection(&b).measure();
        prop_assert!((lhs - a.measure() - b.measure()).abs() <= 4.0 * SLACK);
        prop_assert!((a.complement().measure() + a.measure() - 1.0).abs() <= SLACK);
    }

    #[test]
    fn rotation_preserves_measure(a in arcs(), t in -2.0..2.0f64) {
        let moved = a.translate(t);
        prop_assert!((moved.measure() - a.measure()).abs() <= 1e-14);
        prop_assert!(moved.arc_count() <= a.arc_count() + 1);
        let back = moved.translate(-t);
        prop_assert!(back.symm_diff(&a).measure() <= 1e-14);
    }

    #[test]
    fn steps_are_reversible(idx in manifold_index(), x in 0.0..1.0f64, z in 0.0..1.0f64, n in 1usize..50) {
        let (_, m) = &gallery::manifests()[idx];
        let flow = Flow::from_direction(m, &Direction::golden_silver()).unwrap();
        let start = YPoint { cube: (x * 1e6) as usize % m.cube_count(), x, z };
        let mut p = start;
        for _ in 0..n {
            match flow.y_step(p, Orientation::Forward) {
                Ok(next) => p = next,
                Err(GeodesicError::SingularHit { .. }) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        for _ in 0..n {
            p = flow.y_step(p, Orientation::Backward).unwrap();
        }
        prop_assert_eq!(p.cube, start.cube);
        let circle = |a: f64, b: f64| { let d = a - b; (d - d.round()).abs() };
        prop_assert!(circle(p.x, start.x) < 1e-12 && circle(p.z, start.z) < 1e-12);
    }

    /// The `d` fibre points over a torus point go to the `d` fibre points over
    /// its shift, so the multiplicity of a set equals that of its image.
    #[test]
    fn fibres_are_permuted(idx in manifold_index(), x in 0.0..1.0f64, z in 0.0..1.0f64, cut in 0.05..0.95f64) {
        let (_, m) = &gallery::manifests()[idx];
        let d = m.cube_count();
        let flow = Flow::from_direction(m, &Direction::golden_silver()).unwrap();
        let images: Vec<YPoint> = match (0..d).map(|cube| flow.y_step(YPoint { cube, x, z }, Orientation::Forward)).collect() {
            Ok(v) => v,
            Err(_) => return Ok(()),
        };
        let mut cubes: Vec<usize> = images.iter().map(|p| p.cube).collect();
        cubes.sort_unstable();
        cubes.dedup();
        prop_assert_eq!(cubes.len(), d);
        prop_assert!(images.iter().all(|p| p.x == images[0].x && p.z == images[0].z));

        // a region made of the first faces' left parts and its forward image
        let mut w = RectangleUnionRegion::empty(d);
        let mut image = RectangleUnionRegion::empty(d);
        for (cube, p) in images.iter().enumerate().take(d.div_ceil(2)) {
            w.faces[cube].push(Rect::UNIT);
            image.faces[p.cube].push(Rect::UNIT);
        }
        let before = multiplicity_profile(&w, (x * cut, z));
        let after = multiplicity_profile(&image, (images[0].x, images[0].z));
        prop_assert_eq!(before, after);
    }

    #[test]
    fn gap_spectrum_tiles_the_circle(q in prop::collection::vec(1u64..=6, 20), k in 1usize..10) {
        let alpha = Component::from_cf(ContinuedFraction::new(0, q, vec![]).unwrap());
        let g = gap_spectrum(&alpha, k).unwrap();
        let total: f64 = g.gaps.iter().map(|x| x.length * x.count as f64).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert_eq!(g.gaps.iter().map(|x| x.count).sum::<u64>(), g.q_k1);
    }

    #[test]
    fn residues_are_antisymmetric(n in -1_000_000i64..1_000_000) {
        let alpha = Component::from_cf(ContinuedFraction::golden());
        prop_assert_eq!(alpha.residue(n).0.wrapping_add(alpha.residue(-n).0), 0);
    }
}
