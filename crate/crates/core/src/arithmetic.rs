//! Continued fractions, Kronecker directions and the special intervals built
//! from convergent denominators.
//!
//! Residues `{ℓα}` are computed in 128-bit fixed point ([`Frac`]) so that
//! gap spectra and interval families are exact lattice arithmetic rather than
//! accumulated floating error.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithmeticError {
    #[error("input is within 1e-12 of the rational {p}/{q}")]
    Rational { p: u64, q: u64 },
    #[error("float precision certifies {certified} partial quotients, {requested} requested")]
    PrecisionExhausted { certified: usize, requested: usize },
    #[error("index {index} outside the admissible range 1..={max}")]
    IndexOutOfRange { index: i64, max: u64 },
    #[error("continued fraction provides only {available} partial quotients, {requested} needed")]
    NotEnoughQuotients { available: usize, requested: usize },
    #[error("convergent denominator overflows 64 bits at index {0}")]
    Overflow(usize),
    #[error("found {found} of {count} near returns below m = {budget}")]
    SearchBudgetExceeded { found: usize, count: usize, budget: u64 },
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("cannot parse component spec `{0}`")]
    Parse(String),
}

impl ArithmeticError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Rational { .. } => "Rational",
            Self::PrecisionExhausted { .. } => "PrecisionExhausted",
            Self::IndexOutOfRange { .. } => "IndexOutOfRange",
            Self::NotEnoughQuotients { .. } => "NotEnoughQuotients",
            Self::Overflow(_) => "Overflow",
            Self::SearchBudgetExceeded { .. } => "SearchBudgetExceeded",
            Self::InvalidContinuedFraction(_) => "InvalidContinuedFraction",
            Self::InvalidDirection(_) => "InvalidDirection",
            Self::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, ArithmeticError>;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;
const TWO_POW_128: f64 = TWO_POW_64 * TWO_POW_64;

/// A point of the circle `R/Z` stored as `n / 2^128`.
///
/// Addition and integer multiples wrap, which is exactly reduction mod 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac(pub u128);

impl Frac {
    pub const ZERO: Frac = Frac(0);

    /// Fractional part of `x`; every bit of the float is kept.
    pub fn from_f64(x: f64) -> Self {
        let f = x.rem_euclid(1.0);
        let scaled = f * TWO_POW_64;
        if scaled >= TWO_POW_64 {
            Frac(u128::MAX)
        } else {
            let hi = scaled.floor();
            let lo = ((scaled - hi) * TWO_POW_64) as u128;
            Frac(((hi as u128) << 64) | lo)
        }
    }

    /// `floor(2^128 · {p/q})`.
    pub fn from_ratio(p: u128, q: u128) -> Self {
        assert!(q > 0 && q <= 1u128 << 64, "denominator outside 1..=2^64");
        let r = p % q;
        let hi = (r << 64) / q;
        let rem = (r << 64) % q;
        let lo = (rem << 64) / q;
        Frac((hi << 64) | lo)
    }

    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / TWO_POW_128;
        if v >= 1.0 {
            1.0 - f64::EPSILON / 2.0
        } else {
            v
        }
    }

    pub fn mul_int(self, n: i64) -> Self {
        Frac(self.0.wrapping_mul(n as i128 as u128))
    }

    /// Raw distance to the nearest integer, in units of 2^-128.
    pub fn dist_raw(self) -> u128 {
        self.0.min(self.0.wrapping_neg())
    }

    /// `‖·‖`, the distance to the nearest integer.
    pub fn norm(self) -> f64 {
        self.dist_raw() as f64 / TWO_POW_128
    }
}

impl std::ops::Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        Frac(self.0.wrapping_add(rhs.0))
    }
}

impl std::ops::Sub for Frac {
    type Output = Frac;
    fn sub(self, rhs: Frac) -> Frac {
        Frac(self.0.wrapping_sub(rhs.0))
    }
}

impl std::ops::Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac(self.0.wrapping_neg())
    }
}

/// `[a0; a1, a2, ..., aK, (p1, ..., pr)]` with an optional periodic tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub a0: u64,
    pub quotients: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub periodic: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(a0: u64, quotients: Vec<u64>, periodic: Vec<u64>) -> Result<Self> {
        if quotients.is_empty() && periodic.is_empty() {
            return Err(ArithmeticError::InvalidContinuedFraction(
                "at least one partial quotient is required".into(),
            ));
        }
        if quotients.iter().chain(&periodic).any(|&a| a == 0) {
            return Err(ArithmeticError::InvalidContinuedFraction(
                "partial quotients a_k (k >= 1) must be positive".into(),
            ));
        }
        Ok(ContinuedFraction { a0, quotients, periodic })
    }

    /// `(√5−1)/2 = [0; 1, 1, 1, ...]`
    pub fn golden() -> Self {
        ContinuedFraction { a0: 0, quotients: vec![], periodic: vec![1] }
    }

    /// `√2−1 = [0; 2, 2, 2, ...]`
    pub fn sqrt2_minus_1() -> Self {
        ContinuedFraction { a0: 0, quotients: vec![], periodic: vec![2] }
    }

    /// `√3−1 = [0; 1, 2, 1, 2, ...]`
    pub fn sqrt3_minus_1() -> Self {
        ContinuedFraction { a0: 0, quotients: vec![], periodic: vec![1, 2] }
    }

    pub fn is_infinite(&self) -> bool {
        !self.periodic.is_empty()
    }

    /// Number of available partial quotients, `None` when periodic.
    pub fn available(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.quotients.len())
        }
    }

    /// `a_k` for `k >= 1`.
    pub fn quotient(&self, k: usize) -> Option<u64> {
        if k == 0 {
            return Some(self.a0);
        }
        let i = k - 1;
        if i < self.quotients.len() {
            Some(self.quotients[i])
        } else if self.periodic.is_empty() {
            None
        } else {
            let j = (i - self.quotients.len()) % self.periodic.len();
            Some(self.periodic[j])
        }
    }

    /// Deepest convergent whose denominator stays below 2^62, as `(p, q)` of
    /// the fractional part.
    fn deep_convergent(&self) -> (u128, u128) {
        let (mut p_prev, mut q_prev) = (1u128, 0u128);
        let (mut p, mut q) = (0u128, 1u128);
        let mut k = 1;
        while let Some(a) = self.quotient(k) {
            let a = a as u128;
            let (pn, qn) = match (a.checked_mul(p), a.checked_mul(q)) {
                (Some(ap), Some(aq)) => (ap + p_prev, aq + q_prev),
                _ => break,
            };
            if qn >= 1u128 << 62 {
                break;
            }
            p_prev = p;
            q_prev = q;
            p = pn;
            q = qn;
            k += 1;
        }
        (p, q)
    }

    /// Fractional part in fixed point, through the deepest convergent with
    /// `q < 2^62`; the error is below `1/q²`.
    pub fn frac(&self) -> Frac {
        let (p, q) = self.deep_convergent();
        Frac::from_ratio(p, q)
    }

    pub fn value(&self) -> f64 {
        self.a0 as f64 + self.frac().to_f64()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", self.a0)?;
        let mut parts: Vec<String> = self.quotients.iter().map(|a| a.to_string()).collect();
        if !self.periodic.is_empty() {
            let tail: Vec<String> = self.periodic.iter().map(|a| a.to_string()).collect();
            parts.push(format!("({})", tail.join(",")));
        }
        write!(f, "{}]", parts.join(","))
    }
}

fn cf_of_ratio(mut num: u128, mut den: u128, max_terms: usize) -> Vec<u64> {
    // expansion of num/den with num < den, so a0 = 0 is implicit
    let mut out = Vec::new();
    while num != 0 && out.len() < max_terms {
        let a = den / num;
        let r = den % num;
        out.push(a.min(u64::MAX as u128) as u64);
        den = num;
        num = r;
    }
    out
}

/// Exact dyadic value of a float in (0, 1) as `n / 2^113`.
fn dyadic(x: f64) -> Option<u128> {
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        return None;
    }
    let mant = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    // x = mant * 2^(exp - 1075)
    let shift = 113 + exp - 1075;
    if shift < 0 {
        return None;
    }
    Some((mant as u128) << shift)
}

/// Partial quotients of a float, certified against the float's own rounding.
///
/// Floats are a convenience path: inputs within a few ulps of a rational with
/// denominator below 10^6 are rejected as [`ArithmeticError::Rational`].
pub fn cf_expand(x: f64, depth: usize) -> Result<ContinuedFraction> {
    if !(x.is_finite() && x > 0.0) {
        return Err(ArithmeticError::InvalidDirection(format!("{x} is not a positive real")));
    }
    let a0 = x.floor();
    let f = x - a0;
    let a0 = a0 as u64;
    if f == 0.0 {
        return Err(ArithmeticError::Rational { p: a0, q: 1 });
    }
    for q in 1u64..1_000_000 {
        let qf = q as f64 * f;
        let p = qf.round();
        if (qf - p).abs() < q as f64 * 8.0 * f64::EPSILON {
            return Err(ArithmeticError::Rational { p: p as u64 + a0 * q, q });
        }
    }
    let mut lo = f;
    let mut hi = f;
    for _ in 0..4 {
        lo = lo.next_down();
        hi = hi.next_up();
    }
    let den = 1u128 << 113;
    let (Some(nlo), Some(nhi)) = (dyadic(lo), dyadic(hi)) else {
        return Err(ArithmeticError::PrecisionExhausted { certified: 0, requested: depth });
    };
    let clo = cf_of_ratio(nlo, den, 200);
    let chi = cf_of_ratio(nhi, den, 200);
    let common = clo.iter().zip(&chi).take_while(|(a, b)| a == b).count();
    let certified = common.saturating_sub(1);
    if depth > certified {
        return Err(ArithmeticError::PrecisionExhausted { certified, requested: depth });
    }
    ContinuedFraction::new(a0, clo[..depth].to_vec(), vec![])
}

/// Number of partial quotients a float certifies.
pub fn certified_depth(x: f64) -> usize {
    match cf_expand(x, usize::MAX) {
        Err(ArithmeticError::PrecisionExhausted { certified, .. }) => certified,
        _ => 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub k: usize,
    pub p: u64,
    pub q: u64,
}

/// Convergents `p_k/q_k` of the fractional part for `k = 1..=k_max`.
pub fn convergents(cf: &ContinuedFraction, k_max: usize) -> Result<Vec<Convergent>> {
    let mut out = Vec::with_capacity(k_max);
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p, mut q) = (0u64, 1u64);
    for k in 1..=k_max {
        let a = cf.quotient(k).ok_or(ArithmeticError::NotEnoughQuotients {
            available: cf.quotients.len(),
            requested: k_max,
        })?;
        let pn = a
            .checked_mul(p)
            .and_then(|v| v.checked_add(p_prev))
            .ok_or(ArithmeticError::Overflow(k))?;
        let qn = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .ok_or(ArithmeticError::Overflow(k))?;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        out.push(Convergent { k, p, q });
    }
    Ok(out)
}

/// `q_0, q_1, ..., q_{k_max}` with `q_0 = 1`.
pub fn denominators(cf: &ContinuedFraction, k_max: usize) -> Result<Vec<u64>> {
    let mut qs = vec![1];
    qs.extend(convergents(cf, k_max)?.into_iter().map(|c| c.q));
    Ok(qs)
}

/// How a direction component was specified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentSpec {
    Cf {
        cf: Vec<u64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        periodic: Vec<u64>,
    },
    Float {
        float: f64,
    },
}

impl ComponentSpec {
    /// Accepts `golden`, `sqrt2-1`, `sqrt3-1`, bracket notation such as
    /// `[0;2,(1,3)]` (parenthesised tail repeats), or a decimal float.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let named = match t {
            "golden" => Some(ContinuedFraction::golden()),
            "sqrt2-1" | "silver" => Some(ContinuedFraction::sqrt2_minus_1()),
            "sqrt3-1" => Some(ContinuedFraction::sqrt3_minus_1()),
            _ => None,
        };
        if let Some(cf) = named {
            return Ok(ComponentSpec::from_cf(&cf));
        }
        if let Some(body) = t.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let err = || ArithmeticError::Parse(s.to_string());
            let (head, rest) = body.split_once(';').ok_or_else(err)?;
            let a0: u64 = head.trim().parse().map_err(|_| err())?;
            let (plain, tail) = match rest.split_once('(') {
                Some((p, tl)) => (p, Some(tl.strip_suffix(')').ok_or_else(err)?)),
                None => (rest, None),
            };
            let nums = |part: &str| -> Result<Vec<u64>> {
                part.split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<u64>().map_err(|_| err()))
                    .collect()
            };
            let mut cf = vec![a0];
            cf.extend(nums(plain)?);
            let periodic = match tail {
                Some(tl) => nums(tl)?,
                None => vec![],
            };
            return Ok(ComponentSpec::Cf { cf, periodic });
        }
        let x: f64 = t.parse().map_err(|_| ArithmeticError::Parse(s.to_string()))?;
        Ok(ComponentSpec::Float { float: x })
    }

    pub fn from_cf(cf: &ContinuedFraction) -> Self {
        let mut v = vec![cf.a0];
        v.extend(&cf.quotients);
        ComponentSpec::Cf { cf: v, periodic: cf.periodic.clone() }
    }
}

impl fmt::Display for ComponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentSpec::Cf { cf, periodic } => {
                let c = ContinuedFraction {
                    a0: cf.first().copied().unwrap_or(0),
                    quotients: cf.iter().skip(1).copied().collect(),
                    periodic: periodic.clone(),
                };
                write!(f, "{c}")
            }
            ComponentSpec::Float { float } => write!(f, "{float:?}"),
        }
    }
}

/// One coordinate of a direction: CF data plus fixed-point and float values.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub cf: ContinuedFraction,
    pub frac: Frac,
    pub value: f64,
    pub spec: ComponentSpec,
}

impl Component {
    pub fn from_cf(cf: ContinuedFraction) -> Self {
        let frac = cf.frac();
        let value = cf.a0 as f64 + frac.to_f64();
        let spec = ComponentSpec::from_cf(&cf);
        Component { cf, frac, value, spec }
    }

    pub fn from_float(x: f64) -> Result<Self> {
        let certified = match cf_expand(x, usize::MAX) {
            Err(ArithmeticError::PrecisionExhausted { certified, .. }) => certified,
            Err(e) => return Err(e),
            Ok(_) => unreachable!("unbounded depth cannot be certified"),
        };
        let cf = cf_expand(x, certified.max(1))?;
        Ok(Component { cf, frac: Frac::from_f64(x), value: x, spec: ComponentSpec::Float { float: x } })
    }

    pub fn from_spec(spec: &ComponentSpec) -> Result<Self> {
        match spec {
            ComponentSpec::Cf { cf, periodic } => {
                let (&a0, rest) = cf
                    .split_first()
                    .ok_or_else(|| ArithmeticError::InvalidContinuedFraction("empty list".into()))?;
                Ok(Component::from_cf(ContinuedFraction::new(a0, rest.to_vec(), periodic.clone())?))
            }
            ComponentSpec::Float { float } => Component::from_float(*float),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Component::from_spec(&ComponentSpec::parse(s)?)
    }

    /// `q_0..=q_{k_max}` of this component.
    pub fn denominators(&self, k_max: usize) -> Result<Vec<u64>> {
        denominators(&self.cf, k_max)
    }

    /// `{nα}` in fixed point.
    pub fn residue(&self, n: i64) -> Frac {
        self.frac.mul_int(n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionSpec {
    pub alpha: ComponentSpec,
    pub beta: ComponentSpec,
}

/// Kronecker direction `v = (α, 1, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub alpha: Component,
    pub beta: Component,
}

impl Direction {
    pub fn new(alpha: Component, beta: Component) -> Result<Self> {
        if !(alpha.value > 0.0 && beta.value > 0.0) {
            return Err(ArithmeticError::InvalidDirection("alpha and beta must be positive".into()));
        }
        Ok(Direction { alpha, beta })
    }

    pub fn from_spec(spec: &DirectionSpec) -> Result<Self> {
        Direction::new(Component::from_spec(&spec.alpha)?, Component::from_spec(&spec.beta)?)
    }

    /// Golden ratio conjugate paired with √2−1, the default test direction.
    pub fn golden_silver() -> Self {
        Direction {
            alpha: Component::from_cf(ContinuedFraction::golden()),
            beta: Component::from_cf(ContinuedFraction::sqrt2_minus_1()),
        }
    }

    pub fn spec(&self) -> DirectionSpec {
        DirectionSpec { alpha: self.alpha.spec.clone(), beta: self.beta.spec.clone() }
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.alpha.value, 1.0, self.beta.value]
    }
}

/// `‖qα‖` for a direction component.
pub fn nearest_int_dist(q: u64, alpha: &Component) -> f64 {
    alpha.frac.mul_int(q as i64).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub length: f64,
    /// length in units of 2^-128; equal gaps are bit-identical
    #[serde(skip)]
    pub raw: u128,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSpectrum {
    pub k: usize,
    pub q_k: u64,
    pub q_k1: u64,
    /// distinct gaps in increasing order
    pub gaps: Vec<Gap>,
}

/// Gaps between the sorted points `{ℓα}`, `ℓ = 0..q_{k+1}-1`.
pub fn gap_spectrum(alpha: &Component, k: usize) -> Result<GapSpectrum> {
    let qs = alpha.denominators(k + 1)?;
    let (q_k, q_k1) = (qs[k], qs[k + 1]);
    let mut pts: Vec<u128> = (0..q_k1).map(|l| alpha.frac.mul_int(l as i64).0).collect();
    pts.sort_unstable();
    let mut diffs: Vec<u128> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    diffs.push(pts[0].wrapping_sub(pts[pts.len() - 1]));
    if pts.len() == 1 {
        diffs = vec![u128::MAX];
    }
    diffs.sort_unstable();
    let mut gaps: Vec<Gap> = Vec::new();
    for d in diffs {
        match gaps.last_mut() {
            Some(g) if g.raw == d => g.count += 1,
            _ => gaps.push(Gap { length: Frac(d).to_f64(), raw: d, count: 1 }),
        }
    }
    Ok(GapSpectrum { k, q_k, q_k1, gaps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalVariant {
    /// halfwidth `‖q_k α‖/2` around `{iα}`
    Short,
    /// reaches halfway to both neighbours in the partition `{ℓβ}, ℓ < q_{h+1}`
    Extended,
}

/// Open arc `(center − left, center + right)` on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalOnTorus {
    pub center: f64,
    pub left: f64,
    pub right: f64,
    #[serde(skip)]
    pub exact: Option<ExactArc>,
}

/// The same arc in fixed point with doubled reaches: the endpoints are
/// `c − l/2` and `c + r/2`, so halving never rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactArc {
    pub center: Frac,
    pub left2: u128,
    pub right2: u128,
}

impl IntervalOnTorus {
    pub fn symmetric(center: f64, halfwidth: f64) -> Self {
        IntervalOnTorus { center, left: halfwidth, right: halfwidth, exact: None }
    }

    pub fn lo(&self) -> f64 {
        self.center - self.left
    }

    pub fn hi(&self) -> f64 {
        self.center + self.right
    }

    pub fn len(&self) -> f64 {
        self.left + self.right
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }

    /// Open-interval membership of `x` mod 1.
    pub fn contains(&self, x: f64) -> bool {
        let d = (x - self.center).rem_euclid(1.0);
        if d == 0.0 {
            return self.left > 0.0 && self.right > 0.0;
        }
        d < self.right || 1.0 - d < self.left
    }
}

/// All special intervals of one level, sharing one sorted partition.
#[derive(Clone, Debug)]
pub struct IntervalFamily {
    pub level: usize,
    pub variant: IntervalVariant,
    pub q_level: u64,
    pub q_next: u64,
    frac: Frac,
    halfwidth_raw: u128,
    /// `(position, ℓ)` sorted by position, only for the extended variant
    partition: Vec<(u128, u64)>,
    rank: Vec<u32>,
}

impl IntervalFamily {
    pub fn new(comp: &Component, level: usize, variant: IntervalVariant) -> Result<Self> {
        let qs = comp.denominators(level + 1)?;
        let (q_level, q_next) = (qs[level], qs[level + 1]);
        let halfwidth_raw = comp.frac.mul_int(q_level as i64).dist_raw();
        let (mut partition, mut rank) = (Vec::new(), Vec::new());
        if variant == IntervalVariant::Extended {
            partition = (0..q_next).map(|l| (comp.frac.mul_int(l as i64).0, l)).collect();
            partition.sort_unstable();
            rank = vec![0; q_next as usize];
            for (r, &(_, l)) in partition.iter().enumerate() {
                rank[l as usize] = r as u32;
            }
        }
        Ok(IntervalFamily { level, variant, q_level, q_next, frac: comp.frac, halfwidth_raw, partition, rank })
    }

    /// Largest admissible `|index|`.
    pub fn max_index(&self) -> u64 {
        self.q_next - 1
    }

    pub fn get(&self, index: i64) -> Result<IntervalOnTorus> {
        let max = self.max_index();
        if index == 0 || index.unsigned_abs() > max {
            return Err(ArithmeticError::IndexOutOfRange { index, max });
        }
        let center = self.frac.mul_int(index);
        let (left2, right2) = match self.variant {
            IntervalVariant::Short => (self.halfwidth_raw, self.halfwidth_raw),
            IntervalVariant::Extended => {
                let l = index.rem_euclid(self.q_next as i64) as usize;
                // negative indices are only meaningful through their residue class
                let n = self.partition.len();
                let r = self.rank[l] as usize;
                let left_pt = self.partition[(r + n - 1) % n].0;
                let right_pt = self.partition[(r + 1) % n].0;
                (center.0.wrapping_sub(left_pt), right_pt.wrapping_sub(center.0))
            }
        };
        let exact = ExactArc { center, left2, right2 };
        Ok(IntervalOnTorus {
            center: center.to_f64(),
            left: left2 as f64 / TWO_POW_128 / 2.0,
            right: right2 as f64 / TWO_POW_128 / 2.0,
            exact: Some(exact),
        })
    }

    /// The intervals for indices `1..=max_index()`.
    pub fn all(&self) -> Vec<IntervalOnTorus> {
        (1..=self.max_index() as i64).map(|i| self.get(i).expect("index in range")).collect()
    }
}

/// `J_k(α; i)` (short) or the extended variant, for `1 ≤ |i| ≤ q_{k+1} − 1`.
pub fn special_interval(
    comp: &Component,
    level: usize,
    index: i64,
    variant: IntervalVariant,
) -> Result<IntervalOnTorus> {
    IntervalFamily::new(comp, level, variant)?.get(index)
}

/// Exact checks of the short-family properties: pairwise disjoint, inside
/// `(0,1)`, total length above 1/3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyProperties {
    pub disjoint: bool,
    pub interior: bool,
    pub total_exceeds_third: bool,
}

/// Compare `a + b` with `2d` without overflow.
fn cmp_sum_double(a: u128, b: u128, d: u128) -> std::cmp::Ordering {
    let (s, cs) = a.overflowing_add(b);
    let (t, ct) = d.overflowing_add(d);
    (cs, s).cmp(&(ct, t))
}

pub fn family_properties(family: &IntervalFamily) -> FamilyProperties {
    use std::cmp::Ordering::{Greater, Less};
    let arcs: Vec<ExactArc> = family.all().iter().map(|a| a.exact.expect("exact arc")).collect();
    // l/2 < c and r/2 < 1 − c
    let interior = arcs.iter().all(|a| {
        let c = a.center.0;
        c != 0 && cmp_sum_double(a.left2, 0, c) == Less && cmp_sum_double(a.right2, 0, c.wrapping_neg()) == Less
    });
    let mut sorted = arcs.clone();
    sorted.sort_by_key(|a| a.center.0);
    let n = sorted.len();
    let disjoint = n < 2
        || (0..n).all(|i| {
            let (u, v) = (&sorted[i], &sorted[(i + 1) % n]);
            cmp_sum_double(u.right2, v.left2, v.center.0.wrapping_sub(u.center.0)) != Greater
        });
    // doubled total as hi·2^64 + lo; compare 3·total/2 with 2^128
    let mask = u64::MAX as u128;
    let (mut hi, mut lo) = (0u128, 0u128);
    for a in &arcs {
        for x in [a.left2, a.right2] {
            hi += x >> 64;
            lo += x & mask;
        }
    }
    hi += lo >> 64;
    lo &= mask;
    let (hi3, lo3) = (3 * hi + ((3 * lo) >> 64), (3 * lo) & mask);
    let total_exceeds_third = hi3 > 1 << 65 || (hi3 == 1 << 65 && lo3 > 0);
    FamilyProperties { disjoint, interior, total_exceeds_third }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum KroneckerVerdict {
    KroneckerUpToBound { bound: u64, tol: f64 },
    RelationFound { m: i64, n: i64, k: i64 },
}

/// Bounded scan for `|mα + nβ + k| < tol` with `max(|m|,|n|) ≤ bound`.
///
/// Shells of increasing `max(|m|,|n|)` are scanned with `m` ascending, then `n`
/// ascending; `(m, n)` and `(−m, −n)` are the same relation, so `m > 0` or
/// `m = 0, n > 0` only.
pub fn kronecker_check(alpha: &Component, beta: &Component, coeff_bound: u64, tol: f64) -> KroneckerVerdict {
    let b = coeff_bound as i64;
    for s in 1..=b {
        for m in 0..=s {
            for n in -s..=s {
                if m.abs().max(n.abs()) != s || (m == 0 && n <= 0) {
                    continue;
                }
                let r = alpha.frac.mul_int(m) + beta.frac.mul_int(n);
                if r.norm() < tol {
                    let total = m as f64 * alpha.value + n as f64 * beta.value;
                    return KroneckerVerdict::RelationFound { m, n, k: -(total.round() as i64) };
                }
            }
        }
    }
    KroneckerVerdict::KroneckerUpToBound { bound: coeff_bound, tol }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearReturns {
    pub eps1: f64,
    pub m: Vec<u64>,
    /// star discrepancy of `{m_j β}` over the returned prefix
    pub discrepancy: f64,
}

/// First `count` integers `m ≥ 1` with `‖mα‖ < ε₁`, with the star discrepancy
/// of `{m β}` along them.
pub fn near_return_subsequence(
    alpha: &Component,
    beta: &Component,
    eps1: f64,
    count: usize,
    budget: u64,
) -> Result<NearReturns> {
    if !(eps1 > 0.0 && eps1 <= 0.5) {
        return Err(ArithmeticError::InvalidDirection(format!("eps1 = {eps1} outside (0, 1/2]")));
    }
    let threshold = (eps1 * TWO_POW_128) as u128;
    let mut ms = Vec::with_capacity(count);
    let mut m = 0u64;
    let mut pos = Frac::ZERO;
    while ms.len() < count {
        m += 1;
        if m > budget {
            return Err(ArithmeticError::SearchBudgetExceeded { found: ms.len(), count, budget });
        }
        pos = pos + alpha.frac;
        if pos.dist_raw() < threshold {
            ms.push(m);
        }
    }
    let pts: Vec<f64> = ms.iter().map(|&m| beta.frac.mul_int(m as i64).to_f64()).collect();
    Ok(NearReturns { eps1, discrepancy: star_discrepancy_1d(&pts), m: ms })
}

/// `D*_N = sup_t |#{x_i < t}/N − t|` of points in `[0,1)`.
pub fn star_discrepancy_1d(points: &[f64]) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| ((i as f64 + 1.0) / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max)
}
