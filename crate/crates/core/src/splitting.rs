//! Splitting of small rectangles at singular preimages and the resulting
//! splitting permutation.
//!
//! Every Y-face carries the z-parallel line `x* = ⌈α⌉ − α` whose forward flow
//! runs into the z-edge at the top right of the cube reached. A thin
//! rectangle `R_σ` around that line splits into a left and a right half; two
//! applications of `T` send the halves to Y-faces, and the permutation pairs
//! the left half of one rectangle with the right half of another when both
//! land on the same face.

use crate::arithmetic::{special_interval, ArithmeticError, Direction, IntervalOnTorus, IntervalVariant};
use crate::geodesic::{Flow, GeodesicError, YPoint};
use crate::lattice_manifold::{count_vertex_classes, product_with_circle, Axis, FaceRef, Polycube3Manifold, PolysquareSurface, Side};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplittingError {
    #[error("two left halves land on the face labelled {face}")]
    AmbiguousPairing { face: usize },
    #[error("probes on face {face} kept hitting singular edges")]
    ProbeExhausted { face: usize },
    #[error("magnification {n} must exceed max(α, 1 + 2β) = {bound}")]
    MagnificationTooSmall { n: u64, bound: f64 },
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    Lattice(#[from] crate::lattice_manifold::LatticeError),
}

impl SplittingError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::AmbiguousPairing { .. } => "AmbiguousPairing",
            Self::ProbeExhausted { .. } => "ProbeExhausted",
            Self::MagnificationTooSmall { .. } => "MagnificationTooSmall",
            Self::Geodesic(e) => e.name(),
            Self::Arithmetic(e) => e.name(),
            Self::Lattice(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SplittingError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    /// runs along z at fixed `x`
    ZParallel,
    /// runs along x at fixed `z`
    XParallel,
}

/// Part of a Y-face whose forward flow reaches a singular edge before the
/// next Y-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreimageSegment {
    pub face: usize,
    pub kind: SegmentKind,
    /// fixed coordinate (`x` for z-parallel segments)
    pub at: f64,
    /// range of the free coordinate
    pub range: (f64, f64),
    pub edge_class: usize,
}

/// `⌈a⌉ − a`: the transverse offset whose unit step ends on an integer.
pub fn preimage_offset(a: f64) -> f64 {
    let x = a.ceil() - a;
    if x >= 1.0 {
        0.0
    } else {
        x
    }
}

/// Cube occupied just before the Y-plane at `t = 1`, applying the first `nx`
/// x-crossings and `nz` z-crossings in time order.
fn cube_before_top(m: &Polycube3Manifold, q: YPoint, alpha: f64, beta: f64, nx: u64, nz: u64) -> usize {
    let (mut i, mut j) = (1u64, 1u64);
    let mut cube = q.cube;
    while i <= nx || j <= nz {
        let tx = if i <= nx { (i as f64 - q.x) / alpha } else { f64::INFINITY };
        let tz = if j <= nz { (j as f64 - q.z) / beta } else { f64::INFINITY };
        if tx <= tz {
            cube = m.next(Axis::X, cube);
            i += 1;
        } else {
            cube = m.next(Axis::Z, cube);
            j += 1;
        }
    }
    cube
}

/// Per-face list of segments mapped by the flow into singular edges.
///
/// Only edges parallel to x or z have axis-parallel preimages; y-parallel
/// singular edges would give oblique lines and are not reported.
pub fn singular_preimages(m: &Polycube3Manifold, alpha: f64, beta: f64) -> Vec<Vec<PreimageSegment>> {
    let (xs, zs) = (preimage_offset(alpha), preimage_offset(beta));
    let (fa, fb) = (alpha.fract(), beta.fract());
    let pieces = |f: f64| -> Vec<(f64, f64)> {
        if f == 0.0 {
            vec![(0.0, 1.0)]
        } else {
            vec![(0.0, 1.0 - f), (1.0 - f, 1.0)]
        }
    };
    let mut out = Vec::with_capacity(m.cube_count());
    for c in 0..m.cube_count() {
        let mut segs = Vec::new();
        // the flow from x* reaches x = ⌈α⌉ exactly at t = 1
        let nx_z = (alpha.ceil() as u64).saturating_sub(1);
        for (lo, hi) in pieces(fb) {
            let z = 0.5 * (lo + hi);
            let nz = (z + beta).floor() as u64;
            let top = cube_before_top(m, YPoint { cube: c, x: xs, z }, alpha, beta, nx_z, nz);
            if m.is_singular_slot(top, Axis::Z, 3) {
                segs.push(PreimageSegment {
                    face: c,
                    kind: SegmentKind::ZParallel,
                    at: xs,
                    range: (lo, hi),
                    edge_class: m.edge_class_of(top, Axis::Z, 3),
                });
            }
        }
        let nz_x = (beta.ceil() as u64).saturating_sub(1);
        for (lo, hi) in pieces(fa) {
            let x = 0.5 * (lo + hi);
            let nx = (x + alpha).floor() as u64;
            let top = cube_before_top(m, YPoint { cube: c, x, z: zs }, alpha, beta, nx, nz_x);
            if m.is_singular_slot(top, Axis::X, 3) {
                segs.push(PreimageSegment {
                    face: c,
                    kind: SegmentKind::XParallel,
                    at: zs,
                    range: (lo, hi),
                    edge_class: m.edge_class_of(top, Axis::X, 3),
                });
            }
        }
        out.push(segs);
    }
    out
}

/// Sizes of the rectangles `R_σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConfig {
    /// x-width is `0.4·‖q_k α‖`
    pub k: usize,
    /// z-extent is the special interval of `β` at level `h`, index 1
    pub h: usize,
    /// probe halvings allowed after a singular hit
    pub retries: u32,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { k: 3, h: 3, retries: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRectangle {
    pub face: FaceRef,
    pub x_interval: IntervalOnTorus,
    pub z_interval: IntervalOnTorus,
}

impl SplitRectangle {
    pub fn area(&self) -> f64 {
        self.x_interval.len() * self.z_interval.len()
    }
}

/// The image of one half under `T²`: landing face and coordinate box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfImage {
    pub face: usize,
    pub x: (f64, f64),
    pub z: (f64, f64),
}

impl HalfImage {
    pub fn area(&self) -> f64 {
        (self.x.1 - self.x.0) * (self.z.1 - self.z.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitHalves {
    /// label of the face carrying `R_σ`
    pub sigma: usize,
    pub rect: SplitRectangle,
    /// labels of the faces reached by the left and right halves
    pub left_face: usize,
    pub right_face: usize,
    pub left: HalfImage,
    pub right: HalfImage,
    /// distance of the probes from the preimage line
    pub probe_offset: f64,
}

fn rectangle(m: &Polycube3Manifold, v: &Direction, sigma: usize, cfg: &SplitConfig) -> Result<SplitRectangle> {
    let cube = m.cube_with_label(sigma).expect("label in range");
    let qk = v.alpha.denominators(cfg.k)?[cfg.k];
    let width = 0.4 * v.alpha.frac.mul_int(qk as i64).norm();
    let center = preimage_offset(v.alpha.value);
    let z_interval = special_interval(&v.beta, cfg.h, 1, IntervalVariant::Short)?;
    Ok(SplitRectangle {
        face: FaceRef { cube, axis: Axis::Y, side: Side::Low },
        x_interval: IntervalOnTorus::symmetric(center, width / 2.0),
        z_interval: IntervalOnTorus { exact: None, ..z_interval },
    })
}

/// Map a half box by `T²` through corner samples inset by `inset`.
fn image_of_box(flow: &Flow, cube: usize, x: (f64, f64), z: (f64, f64), inset: f64) -> Result<HalfImage> {
    let (mut xl, mut xh, mut zl, mut zh) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    let mut face = None;
    for (px, pz) in [(x.0 + inset, z.0 + inset), (x.1 - inset, z.1 - inset), (x.0 + inset, z.1 - inset), (x.1 - inset, z.0 + inset)] {
        let q = flow.y_map(YPoint { cube, x: px.rem_euclid(1.0), z: pz.rem_euclid(1.0) }, 2)?;
        if *face.get_or_insert(q.cube) != q.cube {
            face = Some(usize::MAX);
        }
        xl = xl.min(q.x);
        xh = xh.max(q.x);
        zl = zl.min(q.z);
        zh = zh.max(q.z);
    }
    // extend back by the inset so the box is comparable with the source
    Ok(HalfImage { face: face.unwrap_or(usize::MAX), x: (xl - inset, xh + inset), z: (zl - inset, zh + inset) })
}

/// Where `T²` sends the two halves of `R_σ`.
pub fn split_halves_image(m: &Polycube3Manifold, v: &Direction, sigma: usize, cfg: &SplitConfig) -> Result<SplitHalves> {
    let flow = Flow::from_direction(m, v)?;
    split_halves_with(&flow, m, v, sigma, cfg)
}

fn split_halves_with(flow: &Flow, m: &Polycube3Manifold, v: &Direction, sigma: usize, cfg: &SplitConfig) -> Result<SplitHalves> {
    let rect = rectangle(m, v, sigma, cfg)?;
    let cube = rect.face.cube;
    let xc = rect.x_interval.center;
    let w = rect.x_interval.len();
    let zc = rect.z_interval.center;
    let mut offset = w / 4.0;
    for _ in 0..=cfg.retries {
        let probe = |dx: f64| flow.y_map(YPoint { cube, x: xc + dx, z: zc }, 2);
        match (probe(-offset), probe(offset)) {
            (Ok(l), Ok(r)) => {
                let zr = (rect.z_interval.lo(), rect.z_interval.hi());
                let inset = w * 1e-3;
                let left = image_of_box(flow, cube, (xc - w / 2.0, xc), zr, inset)?;
                let right = image_of_box(flow, cube, (xc, xc + w / 2.0), zr, inset)?;
                return Ok(SplitHalves {
                    sigma,
                    rect,
                    left_face: m.labels()[l.cube],
                    right_face: m.labels()[r.cube],
                    left,
                    right,
                    probe_offset: offset,
                });
            }
            (Err(GeodesicError::SingularHit { .. }), _) | (_, Err(GeodesicError::SingularHit { .. })) => offset /= 2.0,
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    Err(SplittingError::ProbeExhausted { face: sigma })
}

/// Pairs on one face: the owner of the left half and of the right half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePair {
    pub face: usize,
    pub left_owner: usize,
    pub right_owner: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingPermutation {
    pub pairs: Vec<FacePair>,
    /// `permutation[ρ′ − 1] = ρ″`
    pub permutation: Vec<usize>,
    /// each cycle starts at its largest label; cycles by leading label, descending
    pub cycles: Vec<Vec<usize>>,
}

impl SplittingPermutation {
    pub fn from_map(permutation: Vec<usize>, pairs: Vec<FacePair>) -> Self {
        let cycles = cycles_of(&permutation);
        SplittingPermutation { pairs, permutation, cycles }
    }

    /// The cycles rendered as `3→1→2→3`.
    pub fn cycle_strings(&self) -> Vec<String> {
        self.cycles
            .iter()
            .map(|c| {
                let mut parts: Vec<String> = c.iter().map(|l| l.to_string()).collect();
                parts.push(c[0].to_string());
                parts.join("→")
            })
            .collect()
    }

    /// Same cycles as `other`, allowing each to be written from any start.
    pub fn matches_cycles(&self, expected: &[Vec<usize>]) -> bool {
        let norm = |cs: &[Vec<usize>]| {
            let mut out: Vec<Vec<usize>> = cs
                .iter()
                .map(|c| {
                    let k = c.iter().enumerate().max_by_key(|(_, &l)| l).map_or(0, |(i, _)| i);
                    c[k..].iter().chain(&c[..k]).copied().collect()
                })
                .collect();
            out.sort();
            out
        };
        norm(&self.cycles) == norm(expected)
    }
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let d = perm.len();
    let mut seen = vec![false; d + 1];
    let mut cycles = Vec::new();
    for start in (1..=d).rev() {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut l = start;
        while !seen[l] {
            seen[l] = true;
            c.push(l);
            l = perm[l - 1];
        }
        cycles.push(c);
    }
    cycles
}

pub fn splitting_permutation(m: &Polycube3Manifold, v: &Direction, cfg: &SplitConfig) -> Result<SplittingPermutation> {
    Ok(splitting_with_halves(m, v, cfg)?.0)
}

/// The permutation together with the per-face half images it was built from.
pub fn splitting_with_halves(
    m: &Polycube3Manifold,
    v: &Direction,
    cfg: &SplitConfig,
) -> Result<(SplittingPermutation, Vec<SplitHalves>)> {
    let flow = Flow::from_direction(m, v)?;
    let d = m.cube_count();
    let halves: Vec<SplitHalves> =
        (1..=d).map(|sigma| split_halves_with(&flow, m, v, sigma, cfg)).collect::<Result<_>>()?;
    let mut left_at = vec![0usize; d + 1];
    let mut right_at = vec![0usize; d + 1];
    for h in &halves {
        if left_at[h.left_face] != 0 {
            return Err(SplittingError::AmbiguousPairing { face: h.left_face });
        }
        left_at[h.left_face] = h.sigma;
        if right_at[h.right_face] != 0 {
            return Err(SplittingError::AmbiguousPairing { face: h.right_face });
        }
        right_at[h.right_face] = h.sigma;
    }
    let mut perm = vec![0; d];
    let mut pairs = Vec::with_capacity(d);
    for face in 1..=d {
        let (l, r) = (left_at[face], right_at[face]);
        perm[l - 1] = r;
        pairs.push(FacePair { face, left_owner: l, right_owner: r });
    }
    Ok((SplittingPermutation::from_map(perm, pairs), halves))
}

/// Largest deviation from the reunion property: on every face the two half
/// images abut along a z-parallel line and share the z-range of `R_σ`.
pub fn reunion_defect(halves: &[SplitHalves]) -> f64 {
    let mut worst: f64 = 0.0;
    for l in halves {
        let Some(r) = halves.iter().find(|r| r.right_face == l.left_face) else {
            return f64::INFINITY;
        };
        if l.left.face != r.right.face {
            return f64::INFINITY;
        }
        let w = l.rect.x_interval.len();
        worst = worst
            .max((l.left.x.1 - r.right.x.0).abs())
            .max((l.left.x.1 - l.left.x.0 - w / 2.0).abs())
            .max((r.right.x.1 - r.right.x.0 - w / 2.0).abs())
            .max((l.left.z.0 - r.right.z.0).abs())
            .max((l.left.z.1 - r.right.z.1).abs());
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStructure {
    /// ascending
    pub lengths: Vec<usize>,
    pub is_single_cycle: bool,
    pub max_cycle_len: usize,
    /// some cycle is longer than `d/2`
    pub exceeds_half: bool,
}

pub fn cycle_structure(perm: &SplittingPermutation) -> CycleStructure {
    let mut lengths: Vec<usize> = perm.cycles.iter().map(Vec::len).collect();
    lengths.sort_unstable();
    let d = perm.permutation.len();
    let max_cycle_len = lengths.last().copied().unwrap_or(0);
    CycleStructure { is_single_cycle: lengths.len() == 1, max_cycle_len, exceeds_half: 2 * max_cycle_len > d, lengths }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub name: String,
    pub vertex_classes: usize,
    pub one_vertex: bool,
    pub single_cycle: bool,
    pub agree: bool,
}

/// One vertex class on the surface iff the product has a single-cycle
/// splitting permutation.
pub fn vertex_criterion_check(surface: &PolysquareSurface, v: &Direction, cfg: &SplitConfig) -> Result<CriterionReport> {
    let vertex_classes = count_vertex_classes(surface);
    let m = product_with_circle(surface, Axis::Z)?;
    let perm = splitting_permutation(&m, v, cfg)?;
    let single_cycle = perm.cycles.len() == 1;
    let one_vertex = vertex_classes == 1;
    Ok(CriterionReport { name: surface.name.clone(), vertex_classes, one_vertex, single_cycle, agree: one_vertex == single_cycle })
}

/// Anchors of the faces used on a magnified array, in magnified coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub n: u64,
    pub s: u64,
    /// bottom left vertex of the face one unit below the wall top
    pub p1: [i64; 3],
    /// bottom left vertex of the face holding the longer part of the image segment
    pub p2_star: [i64; 3],
    /// `x` of the segment mapped onto the wall top
    pub segment_x: f64,
    pub segment_s1_len: f64,
    pub segment_s2_star_len: f64,
}

pub fn frame_spec(alpha: f64, beta: f64, s: u64, n: u64) -> Result<FrameSpec> {
    let nf = n as f64;
    let bound = alpha.max(1.0 + 2.0 * beta);
    if nf <= bound {
        return Err(SplittingError::MagnificationTooSmall { n, bound });
    }
    let two_b = 2.0 * beta;
    let frac = two_b - two_b.floor();
    let z2 = if frac < 0.5 { two_b.floor() } else { 1.0 + two_b.floor() } as i64;
    let len = frac.max(1.0 - frac);
    Ok(FrameSpec {
        n,
        s,
        p1: [(nf - alpha).floor() as i64, n as i64 - 1, 0],
        // the published formula; the face geometry alone would suggest ⌊n+α⌋
        p2_star: [(nf + alpha).floor() as i64 + 1, n as i64 + 1, z2],
        segment_x: nf - alpha,
        segment_s1_len: len,
        segment_s2_star_len: len,
    })
}
