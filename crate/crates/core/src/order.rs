//! Dominance verdicts for the usual stochastic, hazard rate, and reversed
//! hazard rate orders over a certified truncated support.

use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;

pub const DEFAULT_COMPARE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    St,
    Hr,
    Rhr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    FirstDominates,
    SecondDominates,
    Equal,
    Crossing,
}

/// How far to sweep the support before the remaining tail is negligible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub tail_epsilon: f64,
    pub hard_cap: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tail_epsilon: 1e-12,
            hard_cap: 10_000,
        }
    }
}

impl TruncationPolicy {
    pub fn with_epsilon(tail_epsilon: f64) -> Self {
        Self {
            tail_epsilon,
            ..Self::default()
        }
    }
}

/// The truncation certificate embedded in every verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub tail_epsilon: f64,
    pub k_max: u32,
    pub cap_reached: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginPoint {
    pub k: u32,
    pub margin: f64,
}

/// Outcome of a pointwise dominance sweep. Uniformly nonnegative margins
/// (beyond tolerance) mean the first distribution dominates in the relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub direction: Direction,
    /// Support points at which the margin sign flips (the k of the new sign).
    pub crossings: Vec<u32>,
    pub margins: Vec<MarginPoint>,
    /// Points excluded from hr/rhr margins because the tail or head there is
    /// degenerate (below the hazard floor).
    pub skipped: Vec<u32>,
    pub k_max: u32,
    pub tolerance: f64,
    pub truncation: Truncation,
}

/// Smallest k with survival below `tail_epsilon` for both distributions, or
/// the hard cap (flagged in the verdict) if never reached.
pub fn truncation_point<A, B>(a: &A, b: &B, policy: &TruncationPolicy) -> (u32, bool)
where
    A: DiscreteDistribution + ?Sized,
    B: DiscreteDistribution + ?Sized,
{
    let log_eps = policy.tail_epsilon.ln();
    for k in 0..policy.hard_cap {
        if a.log_survival(i64::from(k)) < log_eps && b.log_survival(i64::from(k)) < log_eps {
            return (k, false);
        }
    }
    (policy.hard_cap, true)
}

/// Pointwise hazard at k: P(X = k) / P(X >= k). For k >= 1 this is the
/// `hazard` step taken at k - 1; at k = 0 the denominator is 1, so the value
/// is pmf(0) and never degenerate. Sweeping this at every support point keeps
/// the hr chain anchored at P(X >= 0) = 1, so hr dominance implies st
/// dominance; starting the chain at the first `hazard` step would silently
/// drop the comparison of the two masses at zero.
fn point_hazard<D: DiscreteDistribution + ?Sized>(d: &D, k: u32) -> Option<f64> {
    if k == 0 {
        return Some(d.cdf(0));
    }
    d.hazard(k - 1).ok()
}

/// Sweep the relation's pointwise margin over 0..=k_max and classify.
///
/// Margin conventions: st: S_a(k) - S_b(k); hr: r_b(k) - r_a(k) with the
/// pointwise hazard P(X = k) / P(X >= k); rhr: r~_a(k) - r~_b(k). Margins
/// within +-tol are neutral and never create crossings.
pub fn compare<A, B>(
    a: &A,
    b: &B,
    relation: Relation,
    policy: &TruncationPolicy,
    tol: f64,
) -> OrderVerdict
where
    A: DiscreteDistribution + ?Sized,
    B: DiscreteDistribution + ?Sized,
{
    let (k_max, cap_reached) = truncation_point(a, b, policy);
    let mut margins = Vec::with_capacity(k_max as usize + 1);
    let mut skipped = Vec::new();
    for k in 0..=k_max {
        let margin = match relation {
            Relation::St => Some(a.survival(i64::from(k)) - b.survival(i64::from(k))),
            Relation::Hr => match (point_hazard(a, k), point_hazard(b, k)) {
                (Some(ra), Some(rb)) => Some(rb - ra),
                _ => None,
            },
            Relation::Rhr => match (a.reversed_hazard(k), b.reversed_hazard(k)) {
                (Ok(ra), Ok(rb)) => Some(ra - rb),
                _ => None,
            },
        };
        match margin {
            Some(m) => margins.push(MarginPoint { k, margin: m }),
            None => skipped.push(k),
        }
    }

    let mut crossings = Vec::new();
    let mut last_sign = 0i8;
    let mut any_pos = false;
    let mut any_neg = false;
    for p in &margins {
        let sign = if p.margin > tol {
            1
        } else if p.margin < -tol {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                crossings.push(p.k);
            }
            last_sign = sign;
            any_pos |= sign > 0;
            any_neg |= sign < 0;
        }
    }
    let direction = match (any_pos, any_neg) {
        (true, true) => Direction::Crossing,
        (true, false) => Direction::FirstDominates,
        (false, true) => Direction::SecondDominates,
        (false, false) => Direction::Equal,
    };

    OrderVerdict {
        relation,
        direction,
        crossings,
        margins,
        skipped,
        k_max,
        tolerance: tol,
        truncation: Truncation {
            tail_epsilon: policy.tail_epsilon,
            k_max,
            cap_reached,
        },
    }
}
