//! Straight-line flow in direction `(α, 1, β)` on a polycube manifold.
//!
//! The flow is parametrized by `y`, so Y-plane crossings happen at unit time
//! steps. Points never carry global coordinates: each transition applies one
//! gluing and renormalizes the local coordinates into `[0, 1)`.

use crate::arithmetic::Direction;
use crate::lattice_manifold::{Axis, FaceRef, Polycube3Manifold, Side};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt::Write as _;
use thiserror::Error;

/// Default flow-transverse distance below which an edge counts as hit.
pub const EPS_SING: f64 = 1e-9;

const STALL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("step {step}: flow passes within tolerance of singular {edge_axis}-edge class {edge_class} in cube {cube}")]
    SingularHit { step: i64, cube: usize, edge_class: usize, edge_axis: Axis },
    #[error("parameter step below 1e-14")]
    NumericalStall,
    #[error("direction components must be positive and finite, got ({0}, {1})")]
    InvalidDirection(f64, f64),
    #[error("local coordinates {0:?} outside [0,1)")]
    InvalidPoint([f64; 3]),
}

impl GeodesicError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SingularHit { .. } => "SingularHit",
            Self::NumericalStall => "NumericalStall",
            Self::InvalidDirection(..) => "InvalidDirection",
            Self::InvalidPoint(_) => "InvalidPoint",
        }
    }

    fn at_step(self, step: i64) -> Self {
        match self {
            Self::SingularHit { cube, edge_class, edge_axis, .. } => {
                Self::SingularHit { step, cube, edge_class, edge_axis }
            }
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, GeodesicError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldPoint {
    pub cube: usize,
    pub local: [f64; 3],
}

impl ManifoldPoint {
    pub fn new(cube: usize, local: [f64; 3]) -> Result<Self> {
        if local.iter().any(|c| !(0.0..1.0).contains(c)) {
            return Err(GeodesicError::InvalidPoint(local));
        }
        Ok(ManifoldPoint { cube, local })
    }

    /// Point with the given global coordinates, if some cube contains it.
    pub fn locate(m: &Polycube3Manifold, global: [f64; 3]) -> Option<Self> {
        let o = global.map(|g| g.floor() as i64);
        let cube = m.cube_at(o)?;
        Some(ManifoldPoint { cube, local: [0, 1, 2].map(|i| global[i] - o[i] as f64) })
    }
}

/// A point on the bottom Y-face of `cube`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct YPoint {
    pub cube: usize,
    pub x: f64,
    pub z: f64,
}

impl YPoint {
    pub fn point(self) -> ManifoldPoint {
        ManifoldPoint { cube: self.cube, local: [self.x, 0.0, self.z] }
    }

    /// Uniform sample over the union of Y-faces.
    pub fn random<R: Rng>(m: &Polycube3Manifold, rng: &mut R) -> Self {
        YPoint { cube: rng.gen_range(0..m.cube_count()), x: rng.gen(), z: rng.gen() }
    }
}

/// `({x}, {z})`: the position on the unit torus below a Y-face point.
pub fn project_torus(q: YPoint) -> (f64, f64) {
    (q.x, q.z)
}

/// Projection of a point given by global coordinates.
pub fn project_global(global: [f64; 3]) -> (f64, f64) {
    (global[0].rem_euclid(1.0), global[2].rem_euclid(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitEvent {
    pub face: FaceRef,
    pub point: ManifoldPoint,
    /// cumulative flow parameter
    pub time: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    Budget,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub start: ManifoldPoint,
    pub direction: [f64; 3],
    pub events: Vec<HitEvent>,
    /// indices into `events` of the hits on bottom Y-faces
    pub y_hits: Vec<usize>,
    pub terminated_by: Termination,
}

impl OrbitTrace {
    /// Rows `step,cube,face_axis,face_side,x,y,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,cube,face_axis,face_side,x,y,z\n");
        for (i, e) in self.events.iter().enumerate() {
            let side = match e.face.side {
                Side::Low => "low",
                Side::High => "high",
            };
            let [x, y, z] = e.point.local;
            let _ = writeln!(out, "{i},{},{},{side},{x:e},{y:e},{z:e}", e.point.cube, e.face.axis);
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
struct Event {
    t: f64,
    axis: u8,
    apply: bool,
    high: bool,
}

type Events = SmallVec<[Event; 8]>;

/// The flow of one direction on one manifold.
#[derive(Clone, Debug)]
pub struct Flow<'m> {
    pub manifold: &'m Polycube3Manifold,
    pub alpha: f64,
    pub beta: f64,
    pub eps_sing: f64,
    inv: [f64; 3],
    /// time tolerance for a pair of crossings, indexed by the edge axis
    tol: [f64; 3],
    tol_max: f64,
}

impl<'m> Flow<'m> {
    pub fn new(manifold: &'m Polycube3Manifold, alpha: f64, beta: f64) -> Result<Self> {
        Self::with_eps(manifold, alpha, beta, EPS_SING)
    }

    pub fn from_direction(manifold: &'m Polycube3Manifold, v: &Direction) -> Result<Self> {
        Self::new(manifold, v.alpha.value, v.beta.value)
    }

    pub fn with_eps(manifold: &'m Polycube3Manifold, alpha: f64, beta: f64, eps_sing: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(GeodesicError::InvalidDirection(alpha, beta));
        }
        let v = [alpha, 1.0, beta];
        let pair = |a: usize, b: usize| eps_sing * (v[a] * v[a] + v[b] * v[b]).sqrt() / (v[a] * v[b]);
        let tol = [pair(1, 2), pair(0, 2), pair(0, 1)];
        Ok(Flow {
            manifold,
            alpha,
            beta,
            eps_sing,
            inv: [1.0 / alpha, 1.0, 1.0 / beta],
            tol,
            tol_max: tol.iter().copied().fold(0.0, f64::max),
        })
    }

    pub fn velocity(&self) -> [f64; 3] {
        [self.alpha, 1.0, self.beta]
    }

    /// Walk the sorted events, checking near-coincident crossings of two
    /// faces against the edge they share, and return the final cube.
    #[inline]
    fn run_events(&self, mut cube: usize, ev: &mut Events) -> Result<usize> {
        // insertion sort, stable; the lists are tiny
        for i in 1..ev.len() {
            let mut j = i;
            while j > 0 && ev[j - 1].t > ev[j].t {
                ev.swap(j - 1, j);
                j -= 1;
            }
        }
        let m = self.manifold;
        for i in 0..ev.len() {
            let e = ev[i];
            if let Some(&f) = ev.get(i + 1) {
                if f.axis != e.axis && (e.apply || f.apply) {
                    let edge = 3 - e.axis - f.axis;
                    if f.t - e.t < self.tol[edge as usize] {
                        let edge_axis = Axis::from_index(edge as usize);
                        let (b, _) = edge_axis.others();
                        let (eb, ed) = if e.axis == b as u8 { (e, f) } else { (f, e) };
                        let slot = eb.high as u8 + 2 * ed.high as u8;
                        if m.is_singular_slot(cube, edge_axis, slot) {
                            return Err(GeodesicError::SingularHit {
                                step: 0,
                                cube,
                                edge_class: m.edge_class_of(cube, edge_axis, slot),
                                edge_axis,
                            });
                        }
                    }
                }
            }
            if e.apply {
                let a = Axis::from_index(e.axis as usize);
                cube = if e.high { m.next(a, cube) } else { m.prev(a, cube) };
            }
        }
        Ok(cube)
    }

    /// Crossings of the integer planes of one transverse axis during a
    /// forward unit step from coordinate `c`.
    #[inline]
    fn forward_crossings(&self, ev: &mut Events, axis: u8, c: f64, s: f64) {
        let inv = self.inv[axis as usize];
        if c * inv < self.tol_max {
            ev.push(Event { t: -c * inv, axis, apply: false, high: false });
        }
        let n = s.floor();
        let mut k = 1.0;
        while k <= n {
            ev.push(Event { t: (k - c) * inv, axis, apply: true, high: true });
            k += 1.0;
        }
        let t = (n + 1.0 - c) * inv;
        if t - 1.0 < self.tol_max {
            ev.push(Event { t, axis, apply: false, high: true });
        }
    }

    #[inline]
    fn backward_crossings(&self, ev: &mut Events, axis: u8, c: f64, s: f64) {
        let inv = self.inv[axis as usize];
        if (1.0 - c) * inv < self.tol_max {
            ev.push(Event { t: (c - 1.0) * inv, axis, apply: false, high: true });
        }
        let n = s.floor();
        let mut k = 0.0;
        while k > n {
            ev.push(Event { t: (c - k) * inv, axis, apply: true, high: false });
            k -= 1.0;
        }
        let t = (c - n) * inv;
        if t - 1.0 < self.tol_max {
            ev.push(Event { t, axis, apply: false, high: false });
        }
    }

    /// One application of `T` (forward) or `T⁻¹` (backward).
    #[inline]
    pub fn y_step(&self, q: YPoint, orientation: Orientation) -> Result<YPoint> {
        let mut ev = Events::new();
        match orientation {
            Orientation::Forward => {
                let (sx, sz) = (q.x + self.alpha, q.z + self.beta);
                ev.push(Event { t: 0.0, axis: 1, apply: false, high: false });
                self.forward_crossings(&mut ev, 0, q.x, sx);
                self.forward_crossings(&mut ev, 2, q.z, sz);
                ev.push(Event { t: 1.0, axis: 1, apply: true, high: true });
                let cube = self.run_events(q.cube, &mut ev)?;
                Ok(YPoint { cube, x: sx - sx.floor(), z: sz - sz.floor() })
            }
            Orientation::Backward => {
                let (sx, sz) = (q.x - self.alpha, q.z - self.beta);
                ev.push(Event { t: 0.0, axis: 1, apply: true, high: false });
                self.backward_crossings(&mut ev, 0, q.x, sx);
                self.backward_crossings(&mut ev, 2, q.z, sz);
                ev.push(Event { t: 1.0, axis: 1, apply: false, high: false });
                let cube = self.run_events(q.cube, &mut ev)?;
                Ok(YPoint { cube, x: sx - sx.floor(), z: sz - sz.floor() })
            }
        }
    }

    /// `T^steps(q)`; negative `steps` iterate the inverse.
    pub fn y_map(&self, q: YPoint, steps: i64) -> Result<YPoint> {
        let orientation = if steps >= 0 { Orientation::Forward } else { Orientation::Backward };
        let mut p = q;
        for i in 1..=steps.unsigned_abs() as i64 {
            p = self.y_step(p, orientation).map_err(|e| e.at_step(i * steps.signum()))?;
        }
        Ok(p)
    }

    /// The next face crossing from an arbitrary point.
    ///
    /// Forward: the hit is reported on the low face of the cube entered.
    /// Backward: faces the point already lies on are crossed first, then the
    /// flow runs back to the next low face of the current cube, which is
    /// reported without crossing it. Time is elapsed parameter in both cases.
    pub fn next_hit(&self, p: ManifoldPoint, orientation: Orientation) -> Result<HitEvent> {
        let m = self.manifold;
        let v = self.velocity();
        match orientation {
            Orientation::Forward => {
                let times = [0, 1, 2].map(|a| (1.0 - p.local[a]) * self.inv[a]);
                let (a1, a2) = first_two(&times);
                let t = times[a1];
                if t < STALL {
                    return Err(GeodesicError::NumericalStall);
                }
                if a2 != usize::MAX && times[a2] - t < self.tol[3 - a1 - a2] {
                    self.check_edge(p.cube, a1, a2, true, true)?;
                }
                let mut local = [0, 1, 2].map(|a| clamp_unit(p.local[a] + v[a] * t));
                local[a1] = 0.0;
                let axis = Axis::from_index(a1);
                let cube = m.next(axis, p.cube);
                Ok(HitEvent {
                    face: FaceRef { cube, axis, side: Side::Low },
                    point: ManifoldPoint { cube, local },
                    time: t,
                })
            }
            Orientation::Backward => {
                let mut local = p.local;
                let mut cube = p.cube;
                let on: SmallVec<[usize; 3]> = (0..3).filter(|&a| local[a] == 0.0).collect();
                if on.len() >= 2 {
                    self.check_edge(cube, on[0], on[1], false, false)?;
                }
                for &a in &on {
                    cube = m.prev(Axis::from_index(a), cube);
                    local[a] = 1.0;
                }
                let times = [0, 1, 2].map(|a| local[a] * self.inv[a]);
                let (a1, a2) = first_two(&times);
                let s = times[a1];
                if s < STALL {
                    return Err(GeodesicError::NumericalStall);
                }
                if a2 != usize::MAX && times[a2] - s < self.tol[3 - a1 - a2] {
                    self.check_edge(cube, a1, a2, false, false)?;
                }
                let mut out = [0, 1, 2].map(|a| clamp_unit(local[a] - v[a] * s));
                out[a1] = 0.0;
                Ok(HitEvent {
                    face: FaceRef { cube, axis: Axis::from_index(a1), side: Side::Low },
                    point: ManifoldPoint { cube, local: out },
                    time: s,
                })
            }
        }
    }

    fn check_edge(&self, cube: usize, a: usize, b: usize, high_a: bool, high_b: bool) -> Result<()> {
        let edge_axis = Axis::from_index(3 - a - b);
        let (first, _) = edge_axis.others();
        let (hb, hd) = if first.index() == a { (high_a, high_b) } else { (high_b, high_a) };
        let slot = hb as u8 + 2 * hd as u8;
        if self.manifold.is_singular_slot(cube, edge_axis, slot) {
            return Err(GeodesicError::SingularHit {
                step: 0,
                cube,
                edge_class: self.manifold.edge_class_of(cube, edge_axis, slot),
                edge_axis,
            });
        }
        Ok(())
    }

    /// Forward face crossings until `max_hits` or a singular edge.
    pub fn trace(&self, start: ManifoldPoint, max_hits: usize) -> OrbitTrace {
        let mut events = Vec::with_capacity(max_hits.min(1 << 20));
        let mut y_hits = Vec::new();
        let mut p = start;
        let mut time = 0.0;
        let mut terminated_by = Termination::Budget;
        while events.len() < max_hits {
            match self.next_hit(p, Orientation::Forward) {
                Ok(mut hit) => {
                    time += hit.time;
                    hit.time = time;
                    if hit.face.axis == Axis::Y {
                        y_hits.push(events.len());
                    }
                    p = hit.point;
                    events.push(hit);
                }
                Err(_) => {
                    terminated_by = Termination::Singular;
                    break;
                }
            }
        }
        OrbitTrace { start, direction: self.velocity(), events, y_hits, terminated_by }
    }

    /// Orbit of `T` on the torus: `n` projected points starting from `T(q)`,
    /// or the index of the step that hit a singular edge.
    pub fn projected_orbit(&self, q: YPoint, n: usize) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(n);
        let mut p = q;
        for i in 0..n {
            p = self.y_step(p, Orientation::Forward).map_err(|e| e.at_step(i as i64 + 1))?;
            out.push(project_torus(p));
        }
        Ok(out)
    }
}

/// Indices of the smallest and second smallest entries.
fn first_two(t: &[f64; 3]) -> (usize, usize) {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| t[a].total_cmp(&t[b]));
    (idx[0], idx[1])
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0f64.next_down())
}

/// Run `f` over `items` on all available cores, preserving order.
pub fn parallel_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || part.iter().map(f).collect::<Vec<U>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
