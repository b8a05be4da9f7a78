//! Exact exponent geometry: the restriction pentagon Δ(n), the exponent
//! α(p₁,p₂,ε), the regions of the (1/p₁, 1/p₂) square and the boundedness
//! thresholds for the bilinear Bochner-Riesz means.
//!
//! Exponents are handled through their reciprocals, so ∞ is simply 0.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::analysis::NormExponents;
use crate::error::{invalid, Error, Result};

pub type Q = Ratio<i128>;

fn q(a: i128, b: i128) -> Q {
    Q::new(a, b)
}

fn int(a: i128) -> Q {
    Q::from_integer(a)
}

fn half() -> Q {
    q(1, 2)
}

/// Parses "3", "3/2", "0.75" or "inf" as an exponent and returns its
/// reciprocal.
pub fn parse_inverse(s: &str) -> Result<Q> {
    let s = s.trim();
    if matches!(s, "inf" | "infinity" | "∞") {
        return Ok(Q::zero());
    }
    let value = parse_rational(s)?;
    if value <= Q::zero() {
        return Err(invalid(format!("exponent must be positive, got {s}")));
    }
    Ok(value.recip())
}

/// Parses "a/b", an integer, or a finite decimal exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || invalid(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().map_err(|_| bad())?;
        let b: i128 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(q(a, b));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: i128 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = 10i128.pow(frac.len() as u32);
        let f: i128 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let magnitude = w.abs() * scale + f;
        return Ok(q(if negative { -magnitude } else { magnitude }, scale));
    }
    s.parse::<i128>().map(int).map_err(|_| bad())
}

fn show_exponent(inv: Q) -> String {
    if inv.is_zero() {
        "inf".into()
    } else {
        let p = inv.recip();
        if p.is_integer() {
            p.numer().to_string()
        } else {
            format!("{}/{}", p.numer(), p.denom())
        }
    }
}

pub fn show_rational(v: Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// (p₁, p₂, p) with p₁, p₂ ∈ [1, ∞] and 1/p = 1/p₁ + 1/p₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentTriple {
    inv_p1: Q,
    inv_p2: Q,
}

impl ExponentTriple {
    pub fn from_inverses(inv_p1: Q, inv_p2: Q) -> Result<Self> {
        for v in [inv_p1, inv_p2] {
            if v < Q::zero() || v > Q::one() {
                return Err(invalid(format!(
                    "1/p_i must lie in [0, 1], got {}",
                    show_rational(v)
                )));
            }
        }
        Ok(Self { inv_p1, inv_p2 })
    }

    pub fn inv_p1(&self) -> Q {
        self.inv_p1
    }

    pub fn inv_p2(&self) -> Q {
        self.inv_p2
    }

    pub fn inv_p(&self) -> Q {
        self.inv_p1 + self.inv_p2
    }

    /// The same triple with the inputs exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            inv_p1: self.inv_p2,
            inv_p2: self.inv_p1,
        }
    }

    pub fn p1_string(&self) -> String {
        show_exponent(self.inv_p1)
    }

    pub fn p2_string(&self) -> String {
        show_exponent(self.inv_p2)
    }

    pub fn p_string(&self) -> String {
        show_exponent(self.inv_p())
    }
}

impl FromStr for ExponentTriple {
    type Err = Error;

    /// "p1,p2" or "p1,p2,p"; a given p must satisfy the Hölder relation.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(invalid(format!("expected p1,p2[,p], got {s:?}")));
        }
        let t = Self::from_inverses(parse_inverse(parts[0])?, parse_inverse(parts[1])?)?;
        if let Some(p) = parts.get(2) {
            if parse_inverse(p)? != t.inv_p() {
                return Err(invalid(format!("{s:?} violates 1/p = 1/p1 + 1/p2")));
            }
        }
        Ok(t)
    }
}

impl fmt::Display for ExponentTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.p1_string(),
            self.p2_string(),
            self.p_string()
        )
    }
}

impl From<ExponentTriple> for NormExponents {
    fn from(t: ExponentTriple) -> Self {
        let exponent = |inv: Q| {
            if inv.is_zero() {
                f64::INFINITY
            } else {
                1.0 / inv.to_f64().expect("finite")
            }
        };
        NormExponents {
            p1: exponent(t.inv_p1),
            p2: exponent(t.inv_p2),
            p: exponent(t.inv_p()),
        }
    }
}

/// a_n = (n+1)/2n.
pub fn a_n(n: u32) -> Q {
    let n = n as i128;
    q(n + 1, 2 * n)
}

/// b_n = (n+1)/2n + (n-1)/(n²+n).
pub fn b_n(n: u32) -> Q {
    let m = n as i128;
    a_n(n) + q(m - 1, m * m + m)
}

/// Membership of (1/p, 1/q) in the pentagon Δ(n) with the two closed
/// segments removed. Always false for n < 2.
pub fn delta_region(n: u32, inv_p: Q, inv_q: Q) -> bool {
    if n < 2 {
        return false;
    }
    let m = n as i128;
    Q::zero() <= inv_q
        && inv_q <= inv_p
        && inv_p <= Q::one()
        && inv_p - inv_q >= q(2, m + 1)
        && inv_p > a_n(n)
        && inv_q < q(m - 1, 2 * m)
}

/// α on the closed square [a_n, 1]², with a_n read as part of the open
/// first interval.
fn alpha_closure(n: u32, x1: Q, x2: Q, eps: Q) -> Q {
    let m = n as i128;
    let b = b_n(n);
    let base = q(2, m + 1) - q(m - 1, 2 * m);
    match (x1 < b, x2 < b) {
        (true, true) => q(4, m + 1),
        (true, false) => base + x2 + eps,
        (false, true) => base + x1 + eps,
        (false, false) => x1 + x2 - q(m - 1, m) + eps,
    }
}

/// α(p₁, p₂, ε) from the reciprocals, for a_n < 1/p_i ≤ 1. The case
/// boundaries are (a_n, b_n) open and [b_n, 1] closed.
pub fn alpha(n: u32, inv_p1: Q, inv_p2: Q, eps: Q) -> Result<Q> {
    if n < 2 {
        return Err(invalid("alpha is defined for n >= 2"));
    }
    if eps < Q::zero() {
        return Err(invalid("eps must be >= 0"));
    }
    let a = a_n(n);
    for v in [inv_p1, inv_p2] {
        if v <= a || v > Q::one() {
            return Err(invalid(format!(
                "1/p_i = {} must lie in ({}, 1]",
                show_rational(v),
                show_rational(a)
            )));
        }
    }
    Ok(alpha_closure(n, inv_p1, inv_p2, eps))
}

/// One-sided values of α (ε = 0) across the line 1/p₁ = b_n at the sample
/// values of 1/p₂. Each entry is (1/p₂, limit from inside (a_n, b_n), value
/// at b_n); only entries where the two differ are returned. By symmetry the
/// same list describes the line 1/p₂ = b_n.
pub fn alpha_boundary_jumps(n: u32, samples: &[Q]) -> Vec<(Q, Q, Q)> {
    let m = n as i128;
    let b = b_n(n);
    samples
        .iter()
        .map(|&y| {
            // On (a_n, b_n) in the first slot α does not depend on 1/p₁.
            let left = if y < b {
                q(4, m + 1)
            } else {
                q(2, m + 1) - q(m - 1, 2 * m) + y
            };
            (y, left, alpha_closure(n, b, y, Q::zero()))
        })
        .filter(|(_, l, r)| l != r)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Region {
    I,
    II,
    III,
    IV,
    V,
    Shaded,
    VI,
    VII,
    Outside,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::V => "V",
            Region::Shaded => "shaded",
            Region::VI => "VI",
            Region::VII => "VII",
            Region::Outside => "outside",
        }
    }
}

/// θ and 1/q for the interpolation between (1/2, 1/2) and the segment
/// {(a_n, y) : y ∈ (a_n, 1]}, in sorted coordinates lo ≤ hi.
fn region_vi_parameters(n: u32, lo: Q, hi: Q) -> Option<(Q, Q)> {
    let a = a_n(n);
    if !(lo > half() && lo < a) {
        return None;
    }
    let theta = (lo - half()) / (a - half());
    let y = (hi - (Q::one() - theta) / int(2)) / theta;
    (y > a && y <= Q::one()).then_some((theta, y))
}

/// Which region of the figure contains (1/p, 1/q); `Outside` for n < 2.
pub fn region_classify(n: u32, inv_p: Q, inv_q: Q) -> Region {
    if n < 2
        || [inv_p, inv_q]
            .iter()
            .any(|v| *v < Q::zero() || *v > Q::one())
    {
        return Region::Outside;
    }
    let (lo, hi) = if inv_p <= inv_q {
        (inv_p, inv_q)
    } else {
        (inv_q, inv_p)
    };
    let s = lo + hi;
    let (a, b) = (a_n(n), b_n(n));
    if s <= Q::one() {
        return if hi > half() {
            Region::III
        } else if s >= half() {
            Region::I
        } else {
            Region::II
        };
    }
    if lo >= b {
        Region::IV
    } else if lo >= a && hi >= b {
        Region::V
    } else if lo >= a {
        Region::Shaded
    } else if region_vi_parameters(n, lo, hi).is_some() {
        Region::VI
    } else {
        Region::VII
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    BoundedIf,
    UnboundedIf,
    Unknown,
}

/// A statement about S^δ at one triple.
///
/// `BoundedIf`: bounded for δ > threshold (δ ≥ threshold when inclusive).
/// `UnboundedIf`: unbounded for δ ≤ threshold (δ < threshold when not
/// inclusive). `Unknown`: open at δ = threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(serialize_with = "serialize_rational")]
    pub threshold: Q,
    pub inclusive: bool,
    pub source: &'static str,
    pub region: Option<Region>,
    /// "interpolated", "part-2 interpolated", "non-sharp", …
    pub note: Option<&'static str>,
}

fn serialize_rational<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&show_rational(*v))
}

impl Verdict {
    fn bounded(threshold: Q, source: &'static str) -> Self {
        Self {
            status: Status::BoundedIf,
            threshold,
            inclusive: false,
            source,
            region: None,
            note: None,
        }
    }

    fn unbounded(threshold: Q, source: &'static str) -> Self {
        Self {
            status: Status::UnboundedIf,
            threshold,
            inclusive: true,
            source,
            region: None,
            note: None,
        }
    }

    fn with_region(mut self, region: Region) -> Self {
        self.region = Some(region);
        self
    }

    fn with_note(mut self, note: &'static str) -> Self {
        self.note = Some(note);
        self
    }

    /// "δ > 1/2", "δ ≤ 0", …
    pub fn condition(&self) -> String {
        let op = match (self.status, self.inclusive) {
            (Status::BoundedIf, false) => ">",
            (Status::BoundedIf, true) => ">=",
            (Status::UnboundedIf, true) => "<=",
            (Status::UnboundedIf, false) => "<",
            (Status::Unknown, _) => "=",
        };
        format!("delta {op} {}", show_rational(self.threshold))
    }
}

/// True when some δ ≥ 0 is claimed both bounded by `b` and unbounded by `u`.
pub fn contradicts(b: &Verdict, u: &Verdict) -> bool {
    if b.status != Status::BoundedIf || u.status != Status::UnboundedIf {
        return false;
    }
    let (lower, lower_closed) = if b.threshold < Q::zero() {
        (Q::zero(), true)
    } else {
        (b.threshold, b.inclusive)
    };
    match lower.cmp(&u.threshold) {
        Ordering::Less => true,
        Ordering::Equal => lower_closed && u.inclusive,
        Ordering::Greater => false,
    }
}

/// Every known verdict at `triple`, sorted by threshold.
pub fn critical_delta(n: u32, triple: &ExponentTriple) -> Vec<Verdict> {
    let m = n as i128;
    let (x1, x2) = (triple.inv_p1, triple.inv_p2);
    let s = triple.inv_p();
    let mut out = Vec::new();

    out.push(Verdict::bounded(int(m) - half(), "kernel integrability"));
    let necessary = int(m) * (s - Q::one()) - half();
    if necessary >= Q::zero() {
        out.push(Verdict::unbounded(necessary, "kernel non-integrability"));
    }
    // Unboundedness on (p,∞,p), (∞,p,p) and (p,p',1).
    let dual_line = |x: Q| int(m) * (x - half()).abs() - half();
    if x2.is_zero() || x1.is_zero() || s == Q::one() {
        let x = if x2.is_zero() {
            x1
        } else if x1.is_zero() {
            x2
        } else {
            x1
        };
        let t = dual_line(x);
        if t >= Q::zero() {
            out.push(Verdict::unbounded(t, "dual-line counterexample"));
        }
    }

    if n == 1 {
        one_dimensional(x1, x2, s, &mut out);
    } else {
        higher_dimensional(n, triple, &mut out);
    }

    out.sort_by(|a, b| {
        a.threshold
            .cmp(&b.threshold)
            .then_with(|| (a.status as u8).cmp(&(b.status as u8)))
            .then_with(|| a.source.cmp(b.source))
    });
    out
}

fn one_dimensional(x1: Q, x2: Q, s: Q, out: &mut Vec<Verdict>) {
    let zero = Q::zero();
    let strict_local =
        x1 > zero && x1 < half() && x2 > zero && x2 < half() && s > half() && s < Q::one();
    if strict_local {
        let mut v = Verdict::bounded(zero, "one-dimensional local L2");
        v.inclusive = true;
        out.push(v);
        return;
    }
    let endpoint = (x1 == half() && x2 == half())
        || (x1 == half() && x2.is_zero())
        || (x1.is_zero() && x2 == half());
    if endpoint {
        out.push(Verdict::bounded(zero, "one-dimensional endpoint"));
    }
    if s <= Q::one() {
        out.push(Verdict::bounded(zero, "one-dimensional Banach triangle"));
        if x1.is_zero() || x2.is_zero() || s == Q::one() {
            out.push(Verdict::unbounded(zero, "one-dimensional Banach boundary"));
        } else {
            out.push(Verdict {
                status: Status::Unknown,
                threshold: zero,
                inclusive: true,
                source: "one-dimensional Banach interior",
                region: None,
                note: Some("open at delta = 0"),
            });
        }
    }
}

fn higher_dimensional(n: u32, triple: &ExponentTriple, out: &mut Vec<Verdict>) {
    let m = int(n as i128);
    let (x1, x2) = (triple.inv_p1, triple.inv_p2);
    let a = a_n(n);

    if x1 > a && x2 > a {
        let al = alpha_closure(n, x1, x2, Q::zero());
        out.push(Verdict::bounded(m * al - Q::one(), "restriction method"));
    }
    if let Some(t) = restriction_with_embedding(n, x1, x2) {
        out.push(Verdict::bounded(t, "restriction method with embedding"));
    }
    if x1 == half() && x2 == half() {
        out.push(Verdict::bounded(Q::zero(), "L2 x L2 -> L1"));
        out.push(Verdict::unbounded(Q::zero(), "L2 x L2 -> L1"));
    }
    if (x1 == half() && x2.is_zero()) || (x1.is_zero() && x2 == half()) {
        out.push(Verdict::bounded((m - Q::one()) / int(2), "L2 x Linf -> L2"));
    }
    if (x1 == Q::one() && x2.is_zero()) || (x1.is_zero() && x2 == Q::one()) {
        out.push(Verdict::bounded(m / int(2), "L1 x Linf -> L1"));
    }
    if let Some(v) = region_verdict(n, x1, x2) {
        out.push(v);
    }
    if let Some(t) = interpolation_envelope(n, x1, x2) {
        out.push(Verdict::bounded(t, "anchor interpolation").with_note("interpolated"));
    }
}

/// Smallest nα(q₁,q₂) - 1 over 1 ≤ q_i < 2n/(n+1), q_i ≤ p_i with
/// 1/q₁ + 1/q₂ - 1/p ≤ α(q₁,q₂). Both α and 1/q₁+1/q₂-α are nondecreasing in
/// each 1/q_i, so the corner (max(1/p_i, a_n)) decides; a clamped coordinate
/// is an infimum and needs the constraint to hold strictly.
fn restriction_with_embedding(n: u32, x1: Q, x2: Q) -> Option<Q> {
    let a = a_n(n);
    let y1 = x1.max(a);
    let y2 = x2.max(a);
    let clamped = x1 <= a || x2 <= a;
    let al = alpha_closure(n, y1, y2, Q::zero());
    let slack = x1 + x2 - (y1 + y2 - al);
    let feasible = if clamped {
        slack > Q::zero()
    } else {
        slack >= Q::zero()
    };
    feasible.then(|| int(n as i128) * al - Q::one())
}

fn region_verdict(n: u32, x1: Q, x2: Q) -> Option<Verdict> {
    let m = int(n as i128);
    let region = region_classify(n, x1, x2);
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    let s = lo + hi;
    let r_dual = Q::one() - s;
    let delta1 = m * (hi - half()) - (m - Q::one()) * r_dual / int(2);
    let delta2 = || m * alpha_closure(n, hi, lo, Q::zero()) - Q::one();
    let verdict = match region {
        Region::I => Verdict::bounded((m - Q::one()) * r_dual, "local L2 region"),
        Region::II => Verdict::bounded(
            (m - Q::one()) / int(2) + m * (r_dual - half()),
            "Banach region",
        ),
        Region::III => Verdict::bounded(m * (half() - lo) - r_dual, "Banach region"),
        Region::IV => {
            let t = if lo <= hi + r_dual / m {
                delta2()
            } else {
                delta1
            };
            Verdict::bounded(t, "non-Banach region")
        }
        Region::V => {
            let nn = n as i128;
            let t = if s >= q(3 * nn - 1, nn * nn - 1) + Q::one() {
                delta2()
            } else {
                delta1
            };
            Verdict::bounded(t, "non-Banach region")
        }
        Region::Shaded => Verdict::bounded(delta1, "non-Banach region"),
        Region::VI => {
            let (theta, y) = region_vi_parameters(n, lo, hi)?;
            let t = theta * (m * alpha_closure(n, a_n(n), y, Q::zero()) - Q::one());
            Verdict::bounded(t, "non-Banach region").with_note("part-2 interpolated")
        }
        Region::VII => {
            Verdict::bounded(region_vii(n, lo, hi)?, "non-Banach region").with_note("non-sharp")
        }
        Region::Outside => return None,
    };
    Some(verdict.with_region(region))
}

/// Interpolation between (1/2, 1/2) at 0 and the segment from (1, 0) at n/2
/// to (1, a_n) at 2n/(n+1) + (n-1)/2, linear along the segment.
fn region_vii(n: u32, lo: Q, hi: Q) -> Option<Q> {
    let m = int(n as i128);
    let a = a_n(n);
    // (hi, lo) = (1-θ)(1/2, 1/2) + θ(1, y).
    let theta = (hi - half()) / half();
    if theta <= Q::zero() {
        return None;
    }
    let y = (lo - (Q::one() - theta) / int(2)) / theta;
    if y < Q::zero() || y > a {
        return None;
    }
    let start = m / int(2);
    let end = int(2) * m / (m + Q::one()) + (m - Q::one()) / int(2);
    Some(theta * (start + (end - start) * y / a))
}

fn anchors(n: u32) -> Vec<((Q, Q), Q)> {
    let m = int(n as i128);
    let h = half();
    vec![
        ((h, h), Q::zero()),
        ((Q::one(), Q::zero()), m / int(2)),
        ((Q::zero(), Q::one()), m / int(2)),
        ((h, Q::zero()), (m - Q::one()) / int(2)),
        ((Q::zero(), h), (m - Q::one()) / int(2)),
        ((Q::one(), Q::one()), m - h),
        ((Q::zero(), Q::zero()), m - h),
    ]
}

/// Minimum over anchor pairs and triangles containing the point of the
/// barycentric combination of the anchor thresholds.
pub fn interpolation_envelope(n: u32, x1: Q, x2: Q) -> Option<Q> {
    if n < 2 {
        return None;
    }
    let pts = anchors(n);
    let mut best: Option<Q> = None;
    let mut offer = |v: Q| {
        if best.map_or(true, |b| v < b) {
            best = Some(v);
        }
    };
    for (i, &(p, dp)) in pts.iter().enumerate() {
        if p == (x1, x2) {
            offer(dp);
        }
        for &(r, dr) in &pts[i + 1..] {
            if let Some(t) = segment_parameter(p, r, (x1, x2)) {
                offer(dp + (dr - dp) * t);
            }
        }
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if let Some((u, v, w)) = barycentric(pts[i].0, pts[j].0, pts[k].0, (x1, x2)) {
                    offer(u * pts[i].1 + v * pts[j].1 + w * pts[k].1);
                }
            }
        }
    }
    best
}

fn segment_parameter(p: (Q, Q), r: (Q, Q), x: (Q, Q)) -> Option<Q> {
    let d = (r.0 - p.0, r.1 - p.1);
    let e = (x.0 - p.0, x.1 - p.1);
    if d.0 * e.1 - d.1 * e.0 != Q::zero() {
        return None;
    }
    let t = if !d.0.is_zero() { e.0 / d.0 } else { e.1 / d.1 };
    (t >= Q::zero() && t <= Q::one()).then_some(t)
}

fn barycentric(a: (Q, Q), b: (Q, Q), c: (Q, Q), x: (Q, Q)) -> Option<(Q, Q, Q)> {
    let det = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
    if det.is_zero() {
        return None;
    }
    let v = ((x.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (x.1 - a.1)) / det;
    let w = ((b.0 - a.0) * (x.1 - a.1) - (x.0 - a.0) * (b.1 - a.1)) / det;
    let u = Q::one() - v - w;
    (u >= Q::zero() && v >= Q::zero() && w >= Q::zero()).then_some((u, v, w))
}

/// The pairs (bounded, unbounded) that claim opposite outcomes for some δ ≥ 0.
pub fn contradictions(verdicts: &[Verdict]) -> Vec<(Verdict, Verdict)> {
    let mut found = Vec::new();
    for b in verdicts.iter().filter(|v| v.status == Status::BoundedIf) {
        for u in verdicts.iter().filter(|v| v.status == Status::UnboundedIf) {
            if contradicts(b, u) {
                found.push((b.clone(), u.clone()));
            }
        }
    }
    found
}

/// The lowest bounded threshold and the highest unbounded threshold.
pub fn summarize(verdicts: &[Verdict]) -> (Option<&Verdict>, Option<&Verdict>) {
    let bounded = verdicts
        .iter()
        .filter(|v| v.status == Status::BoundedIf)
        .min_by(|a, b| {
            a.threshold
                .cmp(&b.threshold)
                .then(b.inclusive.cmp(&a.inclusive))
        });
    let unbounded = verdicts
        .iter()
        .filter(|v| v.status == Status::UnboundedIf)
        .max_by(|a, b| a.threshold.cmp(&b.threshold));
    (bounded, unbounded)
}

/// (1/p₁, 1/p₂) on the lattice {0, step, 2·step, …, 1}².
pub fn lattice(step: Q) -> Result<Vec<ExponentTriple>> {
    if step <= Q::zero() || step > Q::one() {
        return Err(invalid("lattice step must lie in (0, 1]"));
    }
    let count = (Q::one() / step).floor().to_integer();
    let mut out = Vec::new();
    for i in 0..=count {
        for j in 0..=count {
            out.push(ExponentTriple::from_inverses(step * int(i), step * int(j))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exponents() {
        assert_eq!(parse_inverse("inf").unwrap(), Q::zero());
        assert_eq!(parse_inverse("3/2").unwrap(), q(2, 3));
        assert_eq!(parse_rational("0.75").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        let t: ExponentTriple = "2,inf,2".parse().unwrap();
        assert_eq!(t.to_string(), "2,inf,2");
        assert!("2,2,2".parse::<ExponentTriple>().is_err());
        assert!("1/2,2".parse::<ExponentTriple>().is_err());
    }

    #[test]
    fn vii_meets_the_segment_endpoints() {
        // At θ = 1 the chain reproduces the two segment end values.
        let n = 2;
        assert_eq!(region_vii(n, Q::zero(), Q::one()), Some(Q::one()));
        assert_eq!(region_vii(n, a_n(n), Q::one()), Some(q(11, 6)));
    }
}
