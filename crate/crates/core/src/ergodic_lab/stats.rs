//! Orbit statistics: box discrepancy, Birkhoff averages and the overlap
//! identity `∫ λ(A ∩ (A+t)) dt = λ(A)²`.

use super::region::{Rect, RectangleUnionRegion};
use super::{ErgodicError, Result};
use crate::geodesic::{Flow, GeodesicError, Orientation, YPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// `n` successive images `T(q), T²(q), ...`.
pub fn y_orbit(flow: &Flow, q: YPoint, n: usize) -> std::result::Result<Vec<YPoint>, GeodesicError> {
    let mut out = Vec::with_capacity(n);
    let mut p = q;
    for _ in 0..n {
        p = flow.y_step(p, Orientation::Forward)?;
        out.push(p);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub grid: usize,
    /// sup over faces and anchored grid boxes
    pub discrepancy: f64,
    /// the same sup restricted to each face, indexed by cube
    pub per_face: Vec<f64>,
    /// `(cube, a, b)` of the worst box `[0, a/g) × [0, b/g)`
    pub worst_box: (usize, usize, usize),
}

/// Orbit points on `faces` Y-faces against anchored boxes `[0, a/g) × [0, b/g)`
/// on each face, whose normalized volume is `ab / (g² · faces)`.
pub fn box_discrepancy(points: &[YPoint], faces: usize, grid: usize) -> Result<DiscrepancyReport> {
    let needed = 100 * grid * grid;
    if grid == 0 || points.len() < needed {
        return Err(ErgodicError::InsufficientSamples { needed, got: points.len() });
    }
    let g = grid;
    let mut counts = vec![vec![0u64; g * g]; faces];
    for p in points {
        let a = ((p.x * g as f64) as usize).min(g - 1);
        let b = ((p.z * g as f64) as usize).min(g - 1);
        counts[p.cube][a * g + b] += 1;
    }
    let n = points.len() as f64;
    let mut per_face = vec![0.0; faces];
    let mut worst = (0.0, (0, 0, 0));
    for (f, c) in counts.iter().enumerate() {
        // 2-D prefix sums over the cells
        let mut pre = vec![0u64; (g + 1) * (g + 1)];
        for a in 0..g {
            for b in 0..g {
                pre[(a + 1) * (g + 1) + b + 1] = c[a * g + b] + pre[a * (g + 1) + b + 1] + pre[(a + 1) * (g + 1) + b] - pre[a * (g + 1) + b];
            }
        }
        for a in 1..=g {
            for b in 1..=g {
                let freq = pre[a * (g + 1) + b] as f64 / n;
                let vol = (a * b) as f64 / (g * g * faces) as f64;
                let dev = (freq - vol).abs();
                if dev > per_face[f] {
                    per_face[f] = dev;
                }
                if dev > worst.0 {
                    worst = (dev, (f, a, b));
                }
            }
        }
    }
    Ok(DiscrepancyReport { n: points.len(), grid, discrepancy: worst.0, per_face, worst_box: worst.1 })
}

/// Discrepancy of each prefix of length in `checkpoints` (too-short prefixes
/// are skipped).
pub fn discrepancy_curve(points: &[YPoint], faces: usize, grid: usize, checkpoints: &[usize]) -> Vec<(usize, f64)> {
    checkpoints
        .iter()
        .filter(|&&n| n <= points.len())
        .filter_map(|&n| box_discrepancy(&points[..n], faces, grid).ok().map(|r| (n, r.discrepancy)))
        .collect()
}

/// `N,discrepancy` rows for external plotting.
pub fn curve_csv(curve: &[(usize, f64)]) -> String {
    let mut s = String::from("N,discrepancy\n");
    for (n, d) in curve {
        let _ = writeln!(s, "{n},{d:.16e}");
    }
    s
}

/// Fraction of orbit points inside the region.
pub fn birkhoff_average(points: &[YPoint], region: &RectangleUnionRegion) -> Result<f64> {
    if points.is_empty() {
        return Err(ErgodicError::InvalidParameter("empty orbit".into()));
    }
    Ok(points.iter().filter(|p| region.contains_point(**p)).count() as f64 / points.len() as f64)
}

/// Orbit points landing in `rect` on any face.
pub fn box_visits(points: &[YPoint], rect: &Rect) -> usize {
    points.iter().filter(|p| rect.contains(p.x, p.z)).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapCheck {
    /// estimate of `∫ λ₂(A ∩ (A+t)) dt`
    pub lhs: f64,
    /// `λ₂(A)²`
    pub rhs: f64,
    pub std_err: f64,
}

impl OverlapCheck {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.lhs - self.rhs).abs() <= sigmas * self.std_err + 1e-12
    }
}

/// Length of `[a0,a1) ∩ ([b0,b1) + s)` on the circle.
fn circle_overlap(a0: f64, a1: f64, b0: f64, b1: f64, s: f64) -> f64 {
    (-1..=1)
        .map(|k| {
            let off = s + k as f64;
            ((a1).min(b1 + off) - a0.max(b0 + off)).max(0.0)
        })
        .sum()
}

/// `∫ λ₂(A ∩ (A+t)) dt` over the torus, estimated on a `resolution²` grid of
/// translations with one random offset; `λ₂(A ∩ (A+t))` is exact at each `t`.
/// The standard error is the sample deviation over `√n`.
pub fn overlap_identity_check(a: &[Rect], resolution: usize, seed: u64) -> Result<OverlapCheck> {
    if resolution == 0 {
        return Err(ErgodicError::InvalidParameter("resolution must be positive".into()));
    }
    let cells = RectangleUnionRegion { faces: vec![a.to_vec()] }.normalized().faces.remove(0);
    let area: f64 = cells.iter().map(Rect::area).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ox, oz): (f64, f64) = (rng.gen(), rng.gen());
    let h = 1.0 / resolution as f64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..resolution {
        for k in 0..resolution {
            let (tx, tz) = ((i as f64 + ox) * h, (k as f64 + oz) * h);
            let mut f = 0.0;
            for r in &cells {
                for s in &cells {
                    let ox = circle_overlap(r.x0, r.x1, s.x0, s.x1, tx);
                    if ox > 0.0 {
                        f += ox * circle_overlap(r.z0, r.z1, s.z0, s.z1, tz);
                    }
                }
            }
            sum += f;
            sum_sq += f * f;
        }
    }
    let n = (resolution * resolution) as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok(OverlapCheck { lhs: mean, rhs: area * area, std_err: (var / n).sqrt() })
}
