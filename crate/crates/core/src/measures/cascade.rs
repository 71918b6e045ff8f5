//! Log-space evaluation of self-similar ("cascade") measures on the unit interval.
//!
//! A cascade assigns, at every level, a list of disjoint sub-intervals (branches) of the
//! current cell with the conditional probability of each. IFS measures repeat the same
//! branch list at every level; digit-product measures use the `b` digit cells with a law
//! that may change from level to level. Everything here works in unit coordinates
//! `u ∈ [0, 1]` (the caller maps `λ = 2πu`) and returns natural-log masses, so cells far
//! below `f64::MIN_POSITIVE` are still represented exactly.

use rand::Rng;

use crate::math::{ln_or_neg_inf, log_add};

const NEG_INF: f64 = f64::NEG_INFINITY;

/// Hard cap on descent depth. Inputs are `f64`, so in base 2 every coordinate runs out of
/// digits after ~1100 levels; the cap only guards degenerate inputs.
pub(crate) const MAX_LEVELS: usize = 4096;

/// Terms smaller than the running total by this many nats are below `f64` resolution.
const NEGLIGIBLE: f64 = 40.0;

/// Widths below this are handled by exact descent instead of by subtracting endpoints.
const TINY: f64 = 1e-6;

/// Tolerance for deciding that two branch endpoints coincide.
const EDGE_EPS: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Branch {
    pub offset: f64,
    pub scale: f64,
    pub prob: f64,
}

impl Branch {
    #[inline]
    pub fn hi(&self) -> f64 {
        self.offset + self.scale
    }
}

/// Branch lists per level, sorted by offset and pairwise disjoint.
pub(crate) trait Cascade {
    fn branches(&self, level: usize) -> &[Branch];
}

/// `ln ν_level([0, u))`.
pub(crate) fn ln_below<C: Cascade + ?Sized>(c: &C, mut level: usize, mut u: f64) -> f64 {
    let mut acc = NEG_INF;
    let mut prefix = 0.0;
    for _ in 0..MAX_LEVELS {
        if u <= 0.0 {
            return acc;
        }
        if u >= 1.0 {
            return log_add(acc, prefix);
        }
        let mut full = 0.0;
        let mut inside = None;
        for b in c.branches(level) {
            if b.hi() <= u {
                full += b.prob;
            } else if b.offset < u {
                inside = Some(*b);
            }
        }
        if full > 0.0 {
            acc = log_add(acc, prefix + full.ln());
        }
        match inside {
            Some(b) if b.prob > 0.0 => {
                prefix += b.prob.ln();
                u = (u - b.offset) / b.scale;
                level += 1;
            }
            _ => return acc,
        }
        if acc.is_finite() && prefix < acc - NEGLIGIBLE {
            return acc;
        }
    }
    log_add(acc, prefix + ln_or_neg_inf(u))
}

/// `ln ν_level([u, 1])`.
pub(crate) fn ln_above<C: Cascade + ?Sized>(c: &C, mut level: usize, mut u: f64) -> f64 {
    let mut acc = NEG_INF;
    let mut prefix = 0.0;
    for _ in 0..MAX_LEVELS {
        if u <= 0.0 {
            return log_add(acc, prefix);
        }
        if u >= 1.0 {
            return acc;
        }
        let mut full = 0.0;
        let mut inside = None;
        for b in c.branches(level) {
            if b.offset >= u {
                full += b.prob;
            } else if b.hi() > u {
                inside = Some(*b);
            }
        }
        if full > 0.0 {
            acc = log_add(acc, prefix + full.ln());
        }
        match inside {
            Some(b) if b.prob > 0.0 => {
                prefix += b.prob.ln();
                u = (u - b.offset) / b.scale;
                level += 1;
            }
            _ => return acc,
        }
        if acc.is_finite() && prefix < acc - NEGLIGIBLE {
            return acc;
        }
    }
    log_add(acc, prefix + ln_or_neg_inf(1.0 - u))
}

/// `ln ν_level([1 − w, 1])`, exact for widths far below the resolution of `1 − w`.
pub(crate) fn ln_top<C: Cascade + ?Sized>(c: &C, mut level: usize, mut w: f64) -> f64 {
    let mut prefix = 0.0;
    for _ in 0..MAX_LEVELS {
        if w <= 0.0 {
            return NEG_INF;
        }
        if w >= 1.0 {
            return prefix;
        }
        if w > TINY {
            return prefix + ln_above(c, level, 1.0 - w);
        }
        let Some(last) = c.branches(level).last().copied() else {
            return NEG_INF;
        };
        let gap = 1.0 - last.hi();
        if gap.abs() <= EDGE_EPS && w <= last.scale {
            if last.prob <= 0.0 {
                return NEG_INF;
            }
            prefix += last.prob.ln();
            w /= last.scale;
            level += 1;
        } else if gap >= w {
            return NEG_INF;
        } else {
            return prefix + ln_above(c, level, 1.0 - w);
        }
    }
    NEG_INF
}

/// `ln ν_level([a, b))` for `0 ≤ a ≤ b ≤ 1`.
pub(crate) fn ln_between<C: Cascade + ?Sized>(c: &C, mut level: usize, mut a: f64, mut b: f64) -> f64 {
    let mut prefix = 0.0;
    for _ in 0..MAX_LEVELS {
        if b <= a {
            return NEG_INF;
        }
        if a <= 0.0 {
            return prefix + ln_below(c, level, b);
        }
        if b >= 1.0 {
            return prefix + ln_above(c, level, a);
        }
        let brs = c.branches(level);
        if let Some(x) = brs.iter().find(|x| x.offset <= a && b <= x.hi()) {
            if x.prob <= 0.0 {
                return NEG_INF;
            }
            prefix += x.prob.ln();
            a = (a - x.offset) / x.scale;
            b = (b - x.offset) / x.scale;
            level += 1;
            continue;
        }
        let mut acc = NEG_INF;
        let mut full = 0.0;
        for x in brs {
            if x.prob <= 0.0 {
                continue;
            }
            let (lo, hi) = (x.offset, x.hi());
            if hi <= a || lo >= b {
                continue;
            }
            if lo >= a && hi <= b {
                full += x.prob;
            } else if lo < a {
                acc = log_add(acc, x.prob.ln() + ln_above(c, level + 1, (a - lo) / x.scale));
            } else {
                acc = log_add(acc, x.prob.ln() + ln_below(c, level + 1, (b - lo) / x.scale));
            }
        }
        if full > 0.0 {
            acc = log_add(acc, full.ln());
        }
        return prefix + acc;
    }
    prefix + ln_or_neg_inf(b - a)
}

/// `ln ν_level((center − r, center + r))`, clipped to the unit cell.
///
/// Radii far below the spacing of `f64` values near `center` are handled by descending into
/// the branch that contains the whole ball; only once the ball is comparable to the current
/// cell are endpoints formed explicitly. A ball that straddles a branch edge is split at the
/// edge so that each half is measured from an exactly known endpoint.
pub(crate) fn ln_ball<C: Cascade + ?Sized>(c: &C, mut level: usize, mut center: f64, mut r: f64) -> f64 {
    let mut prefix = 0.0;
    for _ in 0..MAX_LEVELS {
        if r <= 0.0 {
            return NEG_INF;
        }
        if r >= TINY {
            let a = (center - r).max(0.0);
            let b = (center + r).min(1.0);
            return prefix + ln_between(c, level, a, b);
        }
        let brs = c.branches(level);
        if let Some(x) = brs.iter().find(|x| center - x.offset >= r && x.hi() - center >= r) {
            if x.prob <= 0.0 {
                return NEG_INF;
            }
            prefix += x.prob.ln();
            center = (center - x.offset) / x.scale;
            r /= x.scale;
            level += 1;
            continue;
        }

        let mut edges: Vec<f64> = Vec::new();
        let mut push = |e: f64| {
            if (center - e).abs() < r && !edges.iter().any(|&q| (q - e).abs() <= EDGE_EPS) {
                edges.push(e);
            }
        };
        push(0.0);
        push(1.0);
        for x in brs {
            push(x.offset);
            push(x.hi());
        }
        match edges.len() {
            // inside a gap
            0 => return NEG_INF,
            1 => {}
            _ => {
                let a = (center - r).max(0.0);
                let b = (center + r).min(1.0);
                return prefix + ln_between(c, level, a, b);
            }
        }
        let e = edges[0];
        let d = center - e;
        let left_width = r - d;
        let right_width = r + d;
        let mut acc = NEG_INF;
        if e > EDGE_EPS {
            if let Some(x) = brs.iter().find(|x| (x.hi() - e).abs() <= EDGE_EPS && x.prob > 0.0) {
                let w = (left_width / x.scale).min(1.0);
                acc = log_add(acc, x.prob.ln() + ln_top(c, level + 1, w));
            }
        }
        if e < 1.0 - EDGE_EPS {
            if let Some(x) = brs.iter().find(|x| (x.offset - e).abs() <= EDGE_EPS && x.prob > 0.0) {
                let w = (right_width / x.scale).min(1.0);
                acc = log_add(acc, x.prob.ln() + ln_below(c, level + 1, w));
            }
        }
        return prefix + acc;
    }
    NEG_INF
}

/// Minimal `u` with `F(u) ≥ x`; with `strict`, the infimum of `u` with `F(u) > x` instead
/// (the right end of a plateau of `F`).
pub(crate) fn quantile<C: Cascade + ?Sized>(c: &C, x: f64, strict: bool) -> f64 {
    let mut x = x.clamp(0.0, 1.0);
    let mut pos = 0.0;
    let mut scale = 1.0;
    for level in 0..MAX_LEVELS {
        if (x <= 0.0 && !strict) || scale < MIN_SCALE {
            break;
        }
        let brs = c.branches(level);
        let mut cum = 0.0;
        let mut chosen = None;
        for b in brs.iter().filter(|b| b.prob > 0.0) {
            let reached = if strict { cum + b.prob > x } else { cum + b.prob >= x };
            if reached {
                chosen = Some(*b);
                break;
            }
            cum += b.prob;
        }
        let b = match chosen {
            Some(b) => b,
            // x is at (or by rounding above) the total mass; the last branch holds the answer
            None => {
                let b = *brs.iter().rev().find(|b| b.prob > 0.0).expect("cascade level without mass");
                cum = 1.0 - b.prob;
                b
            }
        };
        x = ((x - cum) / b.prob).clamp(0.0, 1.0);
        pos += scale * b.offset;
        scale *= b.scale;
    }
    pos
}

/// Stop refining sample positions once cylinders are narrower than this.
pub(crate) const MIN_SCALE: f64 = 1.0 / (1u64 << 62) as f64;

/// Draws one point by choosing a branch per level. The visited branch indices are appended
/// to `path` when given.
pub(crate) fn sample_point<C: Cascade + ?Sized, R: Rng + ?Sized>(
    c: &C,
    rng: &mut R,
    mut path: Option<&mut Vec<usize>>,
) -> f64 {
    let mut pos = 0.0;
    let mut scale = 1.0;
    let mut level = 0;
    while scale >= MIN_SCALE && level < MAX_LEVELS {
        let brs = c.branches(level);
        let draw: f64 = rng.random();
        let mut cum = 0.0;
        let mut idx = None;
        for (i, b) in brs.iter().enumerate() {
            if b.prob <= 0.0 {
                continue;
            }
            cum += b.prob;
            idx = Some(i);
            if draw < cum {
                break;
            }
        }
        let i = idx.expect("cascade level without mass");
        if let Some(p) = path.as_deref_mut() {
            p.push(i);
        }
        pos += scale * brs[i].offset;
        scale *= brs[i].scale;
        level += 1;
    }
    pos
}
