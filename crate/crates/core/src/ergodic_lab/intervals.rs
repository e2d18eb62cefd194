//! Finite unions of arcs on the unit circle.

use super::{ErgodicError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Disjoint, sorted, non-adjacent half-open arcs `[lo, hi)` inside `[0, 1]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    arcs: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalUnion { arcs: vec![(0.0, 1.0)] }
    }

    /// Union of arcs `[lo, hi)` read mod 1; an arc of length at least one is
    /// the whole circle, and `hi < lo` is read as wrapping through 0.
    pub fn new(arcs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pieces = Vec::new();
        for (lo, hi) in arcs {
            let mut len = hi - lo;
            if len < 0.0 {
                len += 1.0;
            }
            if len <= 0.0 {
                continue;
            }
            if len >= 1.0 {
                pieces.push((0.0, 1.0));
                continue;
            }
            let a = lo.rem_euclid(1.0);
            let b = a + len;
            if b <= 1.0 {
                pieces.push((a, b));
            } else {
                pieces.push((a, 1.0));
                pieces.push((0.0, b - 1.0));
            }
        }
        Self::from_pieces(pieces)
    }

    fn from_pieces(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|&(a, b)| b > a);
        pieces.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut arcs: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match arcs.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => arcs.push((a, b)),
            }
        }
        IntervalUnion { arcs }
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    /// Number of maximal arcs on the circle; an arc through 0 counts once.
    pub fn arc_count(&self) -> usize {
        let n = self.arcs.len();
        if n >= 2 && self.arcs[0].0 == 0.0 && self.arcs[n - 1].1 == 1.0 {
            n - 1
        } else {
            n
        }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let x = x.rem_euclid(1.0);
        self.arcs.iter().any(|&(a, b)| a <= x && x < b)
    }

    pub fn translate(&self, shift: f64) -> Self {
        Self::new(self.arcs.iter().map(|&(a, b)| (a + shift, a + shift + (b - a))))
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut at = 0.0;
        for &(a, b) in &self.arcs {
            out.push((at, a));
            at = b;
        }
        out.push((at, 1.0));
        Self::from_pieces(out)
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let mut cuts: Vec<f64> = [0.0, 1.0].into_iter().chain(self.arcs.iter().chain(&other.arcs).flat_map(|&(a, b)| [a, b])).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .filter(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                keep(self.contains(mid), other.contains(mid))
            })
            .map(|w| (w[0], w[1]))
            .collect();
        Self::from_pieces(pieces)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn symm_diff(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a != b)
    }

    /// `a_n = ∫_U e^{-2πinx} dx` as `(re, im)`.
    pub fn fourier_coefficient(&self, n: i64) -> (f64, f64) {
        if n == 0 {
            return (self.measure(), 0.0);
        }
        let w = 2.0 * PI * n as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for &(a, b) in &self.arcs {
            // ∫ cos(wx) - i sin(wx) over [a, b)
            re += ((w * b).sin() - (w * a).sin()) / w;
            im += ((w * b).cos() - (w * a).cos()) / w;
        }
        (re, im)
    }
}

/// `λ₁(u △ w)`.
pub fn symm_diff_measure(u: &IntervalUnion, w: &IntervalUnion) -> f64 {
    u.symm_diff(w).measure()
}

pub fn translate(u: &IntervalUnion, shift: f64) -> IntervalUnion {
    u.translate(shift)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalCheck {
    pub exact_lhs: f64,
    pub truncated_rhs: f64,
    pub tail_bound: f64,
}

impl ParsevalCheck {
    pub fn within_bound(&self) -> bool {
        (self.exact_lhs - self.truncated_rhs).abs() <= self.tail_bound
    }
}

/// Compare `λ(U_σ △ (shift + U₁))` with its Fourier series truncated at
/// `|n| ≤ n_max`.
///
/// Each coefficient of an indicator with `A` arcs is at most `A/(π|n|)`, so
/// the omitted terms sum to at most `2J²/(π² n_max)` with `J` the total
/// arc count of both sets.
pub fn fourier_parseval_check(u_sigma: &IntervalUnion, u1: &IntervalUnion, shift: f64, n_max: u64) -> Result<ParsevalCheck> {
    if n_max == 0 {
        return Err(ErgodicError::InvalidParameter("n_max must be at least 1".into()));
    }
    let exact_lhs = symm_diff_measure(u_sigma, &u1.translate(shift));
    let mut rhs = 0.0;
    for n in -(n_max as i64)..=n_max as i64 {
        let (ar, ai) = u_sigma.fourier_coefficient(n);
        let (br, bi) = u1.fourier_coefficient(n);
        // e^{-2πinu}·b
        let (c, s) = ((2.0 * PI * n as f64 * shift).cos(), -(2.0 * PI * n as f64 * shift).sin());
        let (tr, ti) = (c * br - s * bi, c * bi + s * br);
        rhs += (ar - tr).powi(2) + (ai - ti).powi(2);
    }
    let j = (u_sigma.arc_count() + u1.arc_count()) as f64;
    let tail_bound = 2.0 * j * j / (PI * PI * n_max as f64);
    Ok(ParsevalCheck { exact_lhs, truncated_rhs: rhs, tail_bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub threshold: f64,
    /// fraction of sampled shifts separating every `U_σ` from `u + U₁`
    pub measure: f64,
    /// three-sigma binomial band of the estimate
    pub band: f64,
    pub meets_half: bool,
}

/// Sampled measure of shifts `u` with `λ(U_σ △ (u + U₁)) ≥ λ(U₁)(1−λ(U₁))/(32d²)`
/// for every `σ`. `u_list[0]` is `U₁`; samples are midpoints of a uniform grid.
pub fn shift_separation_measure(u_list: &[IntervalUnion], samples: usize) -> Result<SeparationReport> {
    let u1 = u_list.first().ok_or(ErgodicError::DegenerateU1)?;
    let l = u1.measure();
    if l <= 0.0 || l >= 1.0 {
        return Err(ErgodicError::DegenerateU1);
    }
    if samples == 0 {
        return Err(ErgodicError::InvalidParameter("samples must be positive".into()));
    }
    let d = u_list.len() as f64;
    let threshold = l * (1.0 - l) / (32.0 * d * d);
    let hits = (0..samples)
        .filter(|&i| {
            let shifted = u1.translate((i as f64 + 0.5) / samples as f64);
            u_list.iter().all(|u| symm_diff_measure(u, &shifted) >= threshold)
        })
        .count();
    let p = hits as f64 / samples as f64;
    let band = 3.0 * (p * (1.0 - p) / samples as f64).sqrt() + 1.0 / samples as f64;
    Ok(SeparationReport { threshold, measure: p, band, meets_half: p >= 0.5 - band })
}
