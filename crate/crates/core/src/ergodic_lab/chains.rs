//! Power chains of special rectangles, the defective-chain census and the
//! half-strip chains.

use super::region::{Rect, RectangleUnionRegion};
use super::{ErgodicError, Result};
use crate::arithmetic::{Direction, IntervalFamily, IntervalOnTorus, IntervalVariant};
use crate::geodesic::{parallel_map, Flow, Orientation, YPoint};
use crate::lattice_manifold::{Axis, FaceRef, Polycube3Manifold, Side};
use crate::splitting::SplitRectangle;
use serde::{Deserialize, Serialize};

/// Relative inset of the traced sample points from the member boundary.
const INSET: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainMember {
    /// analytic position: `J_k(±(1+i))` in x, `J'_h(·)` in z, on the face
    /// reached by the traced centre
    pub rect: SplitRectangle,
    /// box spanned by the traced sample points, when the chain has not split
    /// before this member
    pub traced: Option<Rect>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerChain {
    /// label of the starting face
    pub sigma: usize,
    pub k: usize,
    pub h: usize,
    pub j: u64,
    pub orientation: Orientation,
    pub members: Vec<ChainMember>,
    pub splitting_free: bool,
}

impl PowerChain {
    /// Largest area deviation of traced members from `|J_k|·|J'_h|`.
    pub fn area_deviation(&self) -> f64 {
        let Some(first) = self.members.first() else { return 0.0 };
        let a = first.rect.area();
        self.members.iter().filter_map(|m| m.traced).map(|r| (r.area() - a).abs()).fold(0.0, f64::max)
    }
}

fn to_rect(x: &IntervalOnTorus, z: &IntervalOnTorus) -> Rect {
    Rect::new((x.lo(), x.hi()), (z.lo(), z.hi()))
}

/// Shared per-run data: interval families and the flow.
struct ChainContext<'m> {
    m: &'m Polycube3Manifold,
    flow: Flow<'m>,
    xs: IntervalFamily,
    zs: IntervalFamily,
    k: usize,
    h: usize,
    q: u64,
    q_prime: u64,
}

impl<'m> ChainContext<'m> {
    fn new(m: &'m Polycube3Manifold, v: &Direction, k: usize, h: usize) -> Result<Self> {
        let xs = IntervalFamily::new(&v.alpha, k, IntervalVariant::Short)?;
        let zs = IntervalFamily::new(&v.beta, h, IntervalVariant::Short)?;
        let (q, q_prime) = (xs.q_next, zs.q_next);
        Ok(ChainContext { m, flow: Flow::from_direction(m, v)?, xs, zs, k, h, q, q_prime })
    }

    fn j_range(&self, orientation: Orientation) -> (u64, u64) {
        match orientation {
            Orientation::Forward => (1, self.q_prime.saturating_sub(self.q)),
            Orientation::Backward => (self.q + 1, self.q_prime),
        }
    }

    /// Interval indices of member `i`.
    fn indices(&self, orientation: Orientation, j: u64, i: u64) -> (i64, i64) {
        let (i, j) = (i as i64, j as i64);
        match orientation {
            Orientation::Forward => (1 + i, j + i),
            Orientation::Backward => (-(1 + i), j - 2 - i),
        }
    }

    fn chain(&self, sigma: usize, j: u64, orientation: Orientation) -> Result<PowerChain> {
        let (lo, hi) = self.j_range(orientation);
        if j < lo || j > hi {
            return Err(ErgodicError::IndexOutOfRange { what: "j", index: j as i64, lo: lo as i64, hi: hi as i64 });
        }
        let cube = self.m.cube_with_label(sigma).ok_or(ErgodicError::IndexOutOfRange {
            what: "sigma",
            index: sigma as i64,
            lo: 1,
            hi: self.m.cube_count() as i64,
        })?;
        let count = self.q - 1;
        let interval = |i: u64| -> Result<(IntervalOnTorus, IntervalOnTorus)> {
            let (a, b) = self.indices(orientation, j, i);
            Ok((self.xs.get(a)?, self.zs.get(b)?))
        };
        let (x0, z0) = interval(0)?;
        let r0 = to_rect(&x0, &z0);
        let (dx, dz) = (INSET * (r0.x1 - r0.x0), INSET * (r0.z1 - r0.z0));
        let mut pts: Vec<YPoint> = [
            (0.5 * (r0.x0 + r0.x1), 0.5 * (r0.z0 + r0.z1)),
            (r0.x0 + dx, r0.z0 + dz),
            (r0.x1 - dx, r0.z0 + dz),
            (r0.x0 + dx, r0.z1 - dz),
            (r0.x1 - dx, r0.z1 - dz),
        ]
        .iter()
        .map(|&(x, z)| YPoint { cube, x, z })
        .collect();
        let mut rigid = true;
        let mut members = Vec::with_capacity(count as usize);
        for i in 0..count {
            if i > 0 {
                let stepped: std::result::Result<Vec<YPoint>, _> = pts.iter().map(|p| self.flow.y_step(*p, orientation)).collect();
                pts = match stepped {
                    Ok(next) => next,
                    Err(e) if pts.len() == 1 => return Err(e.into()),
                    // a corner ran into a singular edge: only the centre is followed
                    Err(_) => {
                        rigid = false;
                        vec![self.flow.y_step(pts[0], orientation)?]
                    }
                };
            }
            let (x, z) = interval(i)?;
            let traced = if rigid && pts.len() == 5 {
                let c = &pts[1..];
                let same_face = pts.iter().all(|p| p.cube == pts[0].cube);
                let (xl, xh) = c.iter().fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.x), h.max(p.x)));
                let (zl, zh) = c.iter().fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.z), h.max(p.z)));
                let width_kept = ((xh - xl) - (r0.x1 - r0.x0 - 2.0 * dx)).abs() < 1e-9 && ((zh - zl) - (r0.z1 - r0.z0 - 2.0 * dz)).abs() < 1e-9;
                if same_face && width_kept {
                    Some(Rect::new((xl - dx, xh + dx), (zl - dz, zh + dz)))
                } else {
                    rigid = false;
                    pts.truncate(1);
                    None
                }
            } else {
                None
            };
            members.push(ChainMember {
                rect: SplitRectangle {
                    face: FaceRef { cube: pts[0].cube, axis: Axis::Y, side: Side::Low },
                    x_interval: x,
                    z_interval: z,
                },
                traced,
            });
        }
        Ok(PowerChain { sigma, k: self.k, h: self.h, j, orientation, members, splitting_free: rigid })
    }
}

/// The chain of `(σ, j)`: `q_{k+1} − 1` images of the special rectangle
/// `J_k(±1) × J'_h(·)` on the face labelled `sigma` under `T` (forward) or
/// `T⁻¹` (backward). Forward chains take `1 ≤ j ≤ q'_{h+1} − q_{k+1}`,
/// backward chains `q_{k+1} < j ≤ q'_{h+1}`.
pub fn power_chain(
    m: &Polycube3Manifold,
    v: &Direction,
    sigma: usize,
    k: usize,
    h: usize,
    j: u64,
    orientation: Orientation,
) -> Result<PowerChain> {
    ChainContext::new(m, v, k, h)?.chain(sigma, j, orientation)
}

/// Smallest `h` with `q'_{h+1} ≥ ratio · q`.
pub fn auto_level(v: &Direction, q: u64, ratio: u64) -> Result<usize> {
    let target = q.saturating_mul(ratio);
    for h in 0.. {
        let qs = v.beta.denominators(h + 1)?;
        if qs[h + 1] >= target {
            return Ok(h);
        }
    }
    unreachable!()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusParams {
    pub k: usize,
    /// `None` picks the smallest level reaching `ratio`
    pub h: Option<usize>,
    pub epsilon: f64,
    pub ratio: u64,
}

impl Default for CensusParams {
    fn default() -> Self {
        CensusParams { k: 4, h: None, epsilon: 1e-4, ratio: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationCensus {
    pub chains: u64,
    /// members meeting the boundary of `𝒲₁`
    pub lambda: u64,
    /// members where `𝒲 △ 𝒲₁` has density at least `δ`
    pub omega: u64,
    /// chains made only of bad members
    pub defective: u64,
    pub splitting_free: u64,
    /// `defective / chains`
    pub proportion: f64,
    /// the proportion bound with `c₁ = Λ/(q + q')`, generalized to `d` faces
    pub bound: f64,
    pub inequality_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub k: usize,
    pub h: usize,
    pub q: u64,
    pub q_prime: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub forward: OrientationCensus,
    pub backward: OrientationCensus,
    /// `j` usable in both orientations with no defective chain on any face
    pub good_j: Vec<u64>,
}

impl CensusReport {
    /// `Δ(q − 1) ≤ Λ + Ω` in both orientations.
    pub fn inequality_holds(&self) -> bool {
        self.forward.inequality_holds && self.backward.inequality_holds
    }
}

struct ChainVerdict {
    lambda: u64,
    omega: u64,
    defective: bool,
    splitting_free: bool,
}

fn judge(chain: &PowerChain, w1: &RectangleUnionRegion, diff: &RectangleUnionRegion, delta: f64) -> ChainVerdict {
    let (mut lambda, mut omega, mut bad) = (0, 0, 0);
    for member in &chain.members {
        let face = member.rect.face.cube;
        let r = to_rect(&member.rect.x_interval, &member.rect.z_interval);
        let touches = w1.straddles(face, &r);
        let dense = diff.area_in(face, &r) >= delta * r.area();
        lambda += touches as u64;
        omega += dense as u64;
        bad += (touches || dense) as u64;
    }
    ChainVerdict { lambda, omega, defective: bad == chain.members.len() as u64, splitting_free: chain.splitting_free }
}

/// Count bad members and defective chains for every face and admissible `j`.
///
/// Regions are indexed by cube. `w_surrogate` stands in for the invariant set
/// so that `𝒲 △ 𝒲₁` is an explicit rectangle union; `δ = 9√ε`.
pub fn defective_census(
    m: &Polycube3Manifold,
    v: &Direction,
    w1: &RectangleUnionRegion,
    w_surrogate: &RectangleUnionRegion,
    params: &CensusParams,
) -> Result<CensusReport> {
    let d = m.cube_count();
    if w1.face_count() != d || w_surrogate.face_count() != d {
        return Err(ErgodicError::InvalidParameter(format!("regions must have {d} faces")));
    }
    if !(params.epsilon > 0.0) {
        return Err(ErgodicError::InvalidParameter("epsilon must be positive".into()));
    }
    let q = v.alpha.denominators(params.k + 1)?[params.k + 1];
    let h = match params.h {
        Some(h) => h,
        None => auto_level(v, q, params.ratio)?,
    };
    let ctx = ChainContext::new(m, v, params.k, h)?;
    if ctx.q_prime <= 2 * ctx.q {
        return Err(ErgodicError::InvalidParameter(format!(
            "need q'_(h+1) = {} > 2 q_(k+1) = {}",
            ctx.q_prime,
            2 * ctx.q
        )));
    }
    let delta = 9.0 * params.epsilon.sqrt();
    let diff = w_surrogate.symm_diff(w1);
    let labels: Vec<usize> = (1..=d).collect();

    let run = |orientation: Orientation| -> Result<(OrientationCensus, Vec<Vec<bool>>)> {
        let (lo, hi) = ctx.j_range(orientation);
        let jobs: Vec<(usize, u64)> = labels.iter().flat_map(|&s| (lo..=hi).map(move |j| (s, j))).collect();
        let verdicts = parallel_map(&jobs, |&(s, j)| ctx.chain(s, j, orientation).map(|c| judge(&c, w1, &diff, delta)));
        let mut defective_at = vec![vec![false; (hi + 1) as usize]; d + 1];
        let mut c = OrientationCensus {
            chains: jobs.len() as u64,
            lambda: 0,
            omega: 0,
            defective: 0,
            splitting_free: 0,
            proportion: 0.0,
            bound: 0.0,
            inequality_holds: false,
        };
        for (&(s, j), verdict) in jobs.iter().zip(verdicts) {
            let verdict = verdict?;
            c.lambda += verdict.lambda;
            c.omega += verdict.omega;
            c.defective += verdict.defective as u64;
            c.splitting_free += verdict.splitting_free as u64;
            defective_at[s][j as usize] = verdict.defective;
        }
        let (qf, qpf, df) = (ctx.q as f64, ctx.q_prime as f64, d as f64);
        c.proportion = c.defective as f64 / c.chains as f64;
        let c1 = c.lambda as f64 / (qf + qpf);
        c.bound = c1 * (qf + qpf) / (df * (qpf - qf) * (qf - 1.0)) + params.epsilon.sqrt() * (qpf - 1.0) / (df * (qpf - qf));
        c.inequality_holds = c.defective * (ctx.q - 1) <= c.lambda + c.omega;
        assert!(c.inequality_holds, "a defective chain has only bad members");
        Ok((c, defective_at))
    };
    let (forward, fwd_bad) = run(Orientation::Forward)?;
    let (backward, bwd_bad) = run(Orientation::Backward)?;
    let good_j = (ctx.q + 1..=ctx.q_prime - ctx.q)
        .filter(|&j| labels.iter().all(|&s| !fwd_bad[s][j as usize] && !bwd_bad[s][j as usize]))
        .collect();
    Ok(CensusReport { k: params.k, h, q: ctx.q, q_prime: ctx.q_prime, epsilon: params.epsilon, delta, forward, backward, good_j })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfStripVerdict {
    pub i: u64,
    /// no member of the chain of `J⁻_k(i)` straddles an integer
    pub minus_free: bool,
    pub plus_free: bool,
    /// first step at which the full strip `J_k(i)` straddles an integer
    pub first_split: Option<u64>,
    /// the same verdicts from traced strips on the face labelled 1
    pub traced_minus_free: bool,
    pub traced_plus_free: bool,
}

impl HalfStripVerdict {
    pub fn disjunction(&self) -> bool {
        self.minus_free || self.plus_free
    }
}

/// Verdicts for the half strips `J^±_k(i) × [0,1)` followed for `n_steps`
/// applications of `T`, with `q_k ≤ n_steps < q_{k+1}`.
///
/// The arithmetic verdict tracks `{(i+n)α}` exactly mod 1: the image of a
/// half strip splits when its x-interval contains an integer. The traced
/// verdict follows inset edge points of each half at two heights and asks
/// that they stay on one face a fixed width apart; it can only be more
/// lenient, since not every integer crossing meets a singular edge.
pub fn half_strip_chains(m: &Polycube3Manifold, v: &Direction, i: u64, k: usize, n_steps: u64) -> Result<HalfStripVerdict> {
    let qs = v.alpha.denominators(k + 1)?;
    let (q_k, q_next) = (qs[k], qs[k + 1]);
    if i == 0 || i >= q_next {
        return Err(ErgodicError::IndexOutOfRange { what: "i", index: i as i64, lo: 1, hi: q_next as i64 - 1 });
    }
    if n_steps < q_k || n_steps >= q_next {
        return Err(ErgodicError::IndexOutOfRange { what: "n_steps", index: n_steps as i64, lo: q_k as i64, hi: q_next as i64 - 1 });
    }
    let r = v.alpha.frac.mul_int(q_k as i64).dist_raw() / 2;
    let (mut minus_free, mut plus_free, mut first_split) = (true, true, None);
    for n in 1..=n_steps {
        let c = v.alpha.residue((i + n) as i64).0;
        let minus = c < r;
        let plus = c > u128::MAX - r;
        minus_free &= !minus;
        plus_free &= !plus;
        if (minus || plus) && first_split.is_none() {
            first_split = Some(n);
        }
    }

    let flow = Flow::from_direction(m, v)?;
    let cube = m.cube_with_label(1).expect("label 1 exists");
    let c = v.alpha.residue(i as i64).to_f64();
    let half = crate::arithmetic::Frac(r).to_f64();
    let traced = |lo: f64| -> bool {
        let inset = INSET * half;
        let width = half - 2.0 * inset;
        for z in [0.25, 0.75] {
            let mut a = YPoint { cube, x: (lo + inset).rem_euclid(1.0), z };
            let mut b = YPoint { cube, x: (lo + half - inset).rem_euclid(1.0), z };
            for _ in 0..n_steps {
                match (flow.y_step(a, Orientation::Forward), flow.y_step(b, Orientation::Forward)) {
                    (Ok(na), Ok(nb)) => {
                        let gap = (nb.x - na.x).rem_euclid(1.0);
                        if na.cube != nb.cube || (gap - width).abs() > 1e-9 {
                            return false;
                        }
                        (a, b) = (na, nb);
                    }
                    _ => return false,
                }
            }
        }
        true
    };
    Ok(HalfStripVerdict {
        i,
        minus_free,
        plus_free,
        first_split,
        traced_minus_free: traced(c - half),
        traced_plus_free: traced(c),
    })
}
