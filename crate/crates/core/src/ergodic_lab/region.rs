//! Rectangle unions on Y-faces and box unions in cubes.

use super::intervals::IntervalUnion;
use crate::geodesic::{OrbitTrace, YPoint};
use crate::lattice_manifold::Polycube3Manifold;
use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle `(x0, x1) × (z0, z1)` in face coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub z0: f64,
    pub z1: f64,
}

impl Rect {
    pub fn new(x: (f64, f64), z: (f64, f64)) -> Self {
        Rect { x0: x.0, x1: x.1, z0: z.0, z1: z.1 }
    }

    pub const UNIT: Rect = Rect { x0: 0.0, x1: 1.0, z0: 0.0, z1: 1.0 };

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0).max(0.0) * (self.z1 - self.z0).max(0.0)
    }

    pub fn contains(&self, x: f64, z: f64) -> bool {
        self.x0 <= x && x < self.x1 && self.z0 <= z && z < self.z1
    }

    fn clip(&self, other: &Rect) -> Option<Rect> {
        let r = Rect {
            x0: self.x0.max(other.x0),
            x1: self.x1.min(other.x1),
            z0: self.z0.max(other.z0),
            z1: self.z1.min(other.z1),
        };
        (r.x1 > r.x0 && r.z1 > r.z0).then_some(r)
    }
}

/// Per-face lists of rectangles, indexed by cube. Overlapping input is
/// allowed; set operations go through the common refinement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleUnionRegion {
    pub faces: Vec<Vec<Rect>>,
}

/// Cells of the grid spanned by the edges of `lists` inside `window`.
fn refinement(window: &Rect, lists: &[&[Rect]]) -> Vec<Rect> {
    let clipped: Vec<Rect> = lists.iter().flat_map(|l| l.iter().filter_map(|r| r.clip(window))).collect();
    let mut xs: Vec<f64> = clipped.iter().flat_map(|r| [r.x0, r.x1]).chain([window.x0, window.x1]).collect();
    let mut zs: Vec<f64> = clipped.iter().flat_map(|r| [r.z0, r.z1]).chain([window.z0, window.z1]).collect();
    for v in [&mut xs, &mut zs] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let mut cells = Vec::with_capacity((xs.len() - 1) * (zs.len() - 1));
    for wx in xs.windows(2) {
        for wz in zs.windows(2) {
            cells.push(Rect::new((wx[0], wx[1]), (wz[0], wz[1])));
        }
    }
    cells
}

fn covers(list: &[Rect], cell: &Rect) -> bool {
    let (mx, mz) = (0.5 * (cell.x0 + cell.x1), 0.5 * (cell.z0 + cell.z1));
    list.iter().any(|r| r.contains(mx, mz))
}

impl RectangleUnionRegion {
    pub fn empty(d: usize) -> Self {
        RectangleUnionRegion { faces: vec![Vec::new(); d] }
    }

    pub fn full(d: usize) -> Self {
        RectangleUnionRegion { faces: vec![vec![Rect::UNIT]; d] }
    }

    /// The same rectangles on every one of `d` faces.
    pub fn uniform(d: usize, rects: &[Rect]) -> Self {
        RectangleUnionRegion { faces: vec![rects.to_vec(); d] }
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, face: usize, x: f64, z: f64) -> bool {
        self.faces[face].iter().any(|r| r.contains(x, z))
    }

    pub fn contains_point(&self, q: YPoint) -> bool {
        self.contains(q.cube, q.x, q.z)
    }

    /// Disjoint rectangles covering the same set on each face.
    pub fn normalized(&self) -> Self {
        self.combine(&RectangleUnionRegion::empty(self.faces.len()), |a, _| a)
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let faces = self
            .faces
            .iter()
            .zip(&other.faces)
            .map(|(a, b)| {
                refinement(&Rect::UNIT, &[a, b])
                    .into_iter()
                    .filter(|c| keep(covers(a, c), covers(b, c)))
                    .collect()
            })
            .collect();
        RectangleUnionRegion { faces }
    }

    pub fn complement(&self) -> Self {
        self.combine(&RectangleUnionRegion::empty(self.faces.len()), |a, _| !a)
    }

    pub fn symm_diff(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a != b)
    }

    pub fn area(&self, face: usize) -> f64 {
        self.area_in(face, &Rect::UNIT)
    }

    /// `λ₂(region ∩ window)` on one face.
    pub fn area_in(&self, face: usize, window: &Rect) -> f64 {
        let list = &self.faces[face];
        refinement(window, &[list]).iter().filter(|c| covers(list, c)).map(Rect::area).sum()
    }

    /// Whether the open `window` meets the boundary of the region, up to null
    /// sets: both the region and its complement occupy positive area in it.
    pub fn straddles(&self, face: usize, window: &Rect) -> bool {
        let list = &self.faces[face];
        let (mut inside, mut outside) = (false, false);
        for c in refinement(window, &[list]) {
            if c.area() <= 0.0 {
                continue;
            }
            if covers(list, &c) {
                inside = true;
            } else {
                outside = true;
            }
            if inside && outside {
                return true;
            }
        }
        false
    }

    /// x-coordinates of the z-parallel edges on a face, with 0 and 1.
    pub fn x_breaks(&self, face: usize) -> Vec<f64> {
        let mut xs: Vec<f64> = self.faces[face].iter().flat_map(|r| [r.x0, r.x1]).chain([0.0, 1.0]).filter(|x| (0.0..=1.0).contains(x)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// Open x-strips of a face avoiding every z-parallel rectangle edge; the
    /// z-cross-section is constant on each.
    pub fn safe_strips(&self, face: usize) -> Vec<(f64, f64)> {
        self.x_breaks(face).windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// `{z : (x, z) ∈ region}` on one face.
pub fn z_cross_section(region: &RectangleUnionRegion, face: usize, x: f64) -> IntervalUnion {
    IntervalUnion::new(region.faces[face].iter().filter(|r| r.x0 <= x && x < r.x1).map(|r| (r.z0, r.z1)))
}

/// `f_region(p)`: how many of the `d` fibre points over the torus point
/// `p = (x, z)` lie in the region. Meant for product manifolds, where every
/// Y-face projects onto the whole torus.
pub fn multiplicity_profile(region: &RectangleUnionRegion, p: (f64, f64)) -> usize {
    (0..region.face_count()).filter(|&f| region.contains(f, p.0, p.1)).count()
}

/// Box `[x0,x1) × [y0,y1) × [z0,z1)` in local cube coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

/// Per-cube unions of boxes: a volumetric region of the manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub cubes: Vec<Vec<Box3>>,
}

impl BoxRegion {
    pub fn empty(cubes: usize) -> Self {
        BoxRegion { cubes: vec![Vec::new(); cubes] }
    }

    /// Cells of a `res³` grid in each cube that a traced flow line passes
    /// through. Segments between consecutive hits are sampled at `1/(4res)`.
    pub fn occupied(m: &Polycube3Manifold, trace: &OrbitTrace, res: usize) -> Self {
        let mut seen = vec![vec![false; res * res * res]; m.cube_count()];
        let v = trace.direction;
        let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let step = 1.0 / (4.0 * res as f64 * speed);
        let mut prev_time = 0.0;
        let mut from = trace.start;
        for hit in &trace.events {
            let dt = hit.time - prev_time;
            let n = (dt / step).ceil().max(1.0) as usize;
            for s in 0..n {
                let t = dt * (s as f64 + 0.5) / n as f64;
                let idx = [0, 1, 2].map(|a| (((from.local[a] + v[a] * t) * res as f64) as usize).min(res - 1));
                seen[from.cube][(idx[0] * res + idx[1]) * res + idx[2]] = true;
            }
            prev_time = hit.time;
            from = hit.point;
        }
        let h = 1.0 / res as f64;
        let cubes = seen
            .into_iter()
            .map(|cells| {
                cells
                    .iter()
                    .enumerate()
                    .filter(|(_, &on)| on)
                    .map(|(i, _)| {
                        let idx = [i / (res * res), (i / res) % res, i % res];
                        Box3 { lo: idx.map(|c| c as f64 * h), hi: idx.map(|c| (c + 1) as f64 * h) }
                    })
                    .collect()
            })
            .collect();
        BoxRegion { cubes }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    /// `ψ(x, y)`: measure of the z-line inside the region
    pub psi: f64,
    /// `[1/d, (d−1)/d]`, where a flow-invariant proper subset must sit
    pub band: (f64, f64),
    pub in_band: bool,
}

/// `ψ(x, y) = ∫ χ(x, y, z) dz` along the z-fibre of `cube` at local `(x, y)`.
/// `z_samples = 0` integrates exactly; otherwise midpoints are averaged.
pub fn cross_section_fraction(region: &BoxRegion, cube: usize, x: f64, y: f64, z_samples: usize) -> CrossSection {
    let boxes: Vec<&Box3> = region.cubes[cube]
        .iter()
        .filter(|b| b.lo[0] <= x && x < b.hi[0] && b.lo[1] <= y && y < b.hi[1])
        .collect();
    let psi = if z_samples == 0 {
        IntervalUnion::new(boxes.iter().map(|b| (b.lo[2], b.hi[2]))).measure()
    } else {
        let hit = (0..z_samples)
            .filter(|&i| {
                let z = (i as f64 + 0.5) / z_samples as f64;
                boxes.iter().any(|b| b.lo[2] <= z && z < b.hi[2])
            })
            .count();
        hit as f64 / z_samples as f64
    };
    let d = region.cubes.len() as f64;
    let band = (1.0 / d, (d - 1.0) / d);
    CrossSection { psi, band, in_band: band.0 <= psi && psi <= band.1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cross_section_of_one_rectangle() {
        let r = RectangleUnionRegion { faces: vec![vec![Rect::new((0.2, 0.4), (0.3, 0.7))]] };
        assert_eq!(z_cross_section(&r, 0, 0.3).arcs(), &[(0.3, 0.7)]);
        assert!(z_cross_section(&r, 0, 0.5).is_empty());
        assert_eq!(z_cross_section(&RectangleUnionRegion::full(1), 0, 0.5).arcs(), &[(0.0, 1.0)]);
    }

    #[test]
    fn sections_constant_on_safe_strips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rects: Vec<Rect> = (0..10)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.gen(), rng.gen());
                let (c, e): (f64, f64) = (rng.gen(), rng.gen());
                Rect::new((a.min(b), a.max(b)), (c.min(e), c.max(e)))
            })
            .collect();
        let region = RectangleUnionRegion { faces: vec![rects] };
        for (lo, hi) in region.safe_strips(0) {
            let reference = z_cross_section(&region, 0, 0.5 * (lo + hi));
            for i in 0..100 {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
                assert_eq!(z_cross_section(&region, 0, x), reference);
            }
        }
    }

    #[test]
    fn multiplicity_with_complement() {
        let left = RectangleUnionRegion::uniform(3, &[Rect::new((0.0, 0.5), (0.0, 1.0))]);
        assert_eq!(multiplicity_profile(&left, (0.25, 0.6)), 3);
        assert_eq!(multiplicity_profile(&left, (0.75, 0.6)), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let odd = RectangleUnionRegion {
            faces: vec![vec![Rect::new((0.1, 0.6), (0.2, 0.9))], vec![], vec![Rect::new((0.3, 0.35), (0.0, 1.0)), Rect::new((0.0, 0.5), (0.4, 0.5))]],
        };
        let comp = odd.complement();
        for _ in 0..1000 {
            let p = (rng.gen(), rng.gen());
            assert_eq!(multiplicity_profile(&odd, p) + multiplicity_profile(&comp, p), 3);
        }
    }

    #[test]
    fn exact_areas() {
        let a = RectangleUnionRegion { faces: vec![vec![Rect::new((0.0, 0.5), (0.0, 1.0)), Rect::new((0.25, 0.75), (0.0, 0.5))]] };
        assert!((a.area(0) - 0.625).abs() < 1e-15);
        let b = RectangleUnionRegion { faces: vec![vec![Rect::new((0.01, 0.51), (0.0, 1.0))]] };
        let s = RectangleUnionRegion { faces: vec![vec![Rect::new((0.0, 0.5), (0.0, 1.0))]] }.symm_diff(&b);
        assert!((s.area(0) - 0.02).abs() < 1e-15);
        assert!(b.straddles(0, &Rect::new((0.0, 0.02), (0.1, 0.2))));
        assert!(!b.straddles(0, &Rect::new((0.1, 0.2), (0.1, 0.2))));
        assert!(!b.straddles(0, &Rect::new((0.6, 0.7), (0.1, 0.2))));
    }

    #[test]
    fn cube_fractions() {
        let lower = BoxRegion { cubes: vec![vec![Box3 { lo: [0.0; 3], hi: [1.0, 1.0, 0.5] }]; 3] };
        let c = cross_section_fraction(&lower, 1, 0.3, 0.8, 0);
        assert_eq!(c.psi, 0.5);
        assert!(c.in_band);
        let one = BoxRegion { cubes: vec![vec![Box3 { lo: [0.0; 3], hi: [1.0; 3] }], vec![], vec![]] };
        assert_eq!(cross_section_fraction(&one, 0, 0.5, 0.5, 64).psi, 1.0);
        assert_eq!(cross_section_fraction(&one, 2, 0.5, 0.5, 0).psi, 0.0);
    }
}
