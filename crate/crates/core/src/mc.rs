//! Monte Carlo cross-validation of the exact extreme-distribution formulas.
//!
//! The sampler deliberately never touches the exact product formulas: it
//! composes per-component inversion samplers with min/max only, so agreement
//! with the exact cdf is evidence rather than tautology.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDistribution, Extreme, ExtremeSpec, Family, Statistic};

/// Tally of sampled extreme values over {0, 1, ..., k_max}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub counts: Vec<u64>,
    pub n_samples: u64,
    pub seed: u64,
}

impl EmpiricalDistribution {
    pub fn k_max(&self) -> u32 {
        self.counts.len().saturating_sub(1) as u32
    }

    /// Empirical P(X <= k).
    pub fn cdf(&self, k: u32) -> f64 {
        let upto: u64 = self
            .counts
            .iter()
            .take(k as usize + 1)
            .sum();
        upto as f64 / self.n_samples as f64
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, &c)| k as f64 * c as f64)
            .sum();
        total / self.n_samples as f64
    }
}

/// Poisson draw by sequential cdf inversion from 0.
fn sample_poisson<R: Rng>(mu: f64, rng: &mut R) -> u64 {
    let u: f64 = rng.gen();
    let mut term = (-mu).exp();
    let mut cum = term;
    let mut k = 0u64;
    // u < 1, and cum -> 1, so this terminates; the guard caps pathological
    // rounding at the far tail.
    while u >= cum && k < 100_000 {
        k += 1;
        term *= mu / k as f64;
        cum += term;
        if term == 0.0 {
            break;
        }
    }
    k
}

/// Geometric draw (failures before first success) by direct inversion.
fn sample_geometric<R: Rng>(q: f64, rng: &mut R) -> u64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    (u.ln() / q.ln()).floor() as u64
}

/// Sample the specified extreme `n_samples` times and tally the outcomes.
/// Deterministic in `seed`.
pub fn sample_extreme(spec: &ExtremeSpec, n_samples: u64, seed: u64) -> EmpiricalDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: Vec<u64> = Vec::new();
    for _ in 0..n_samples {
        let mut value: Option<u64> = None;
        for &p in spec.params.values() {
            let draw = match spec.params.family() {
                Family::Poisson => sample_poisson(p, &mut rng),
                Family::Geometric => sample_geometric(p, &mut rng),
            };
            value = Some(match (value, spec.statistic) {
                (None, _) => draw,
                (Some(v), Statistic::Min) => v.min(draw),
                (Some(v), Statistic::Max) => v.max(draw),
            });
        }
        let v = value.expect("nonempty parameter vector") as usize;
        if v >= counts.len() {
            counts.resize(v + 1, 0);
        }
        counts[v] += 1;
    }
    EmpiricalDistribution {
        counts,
        n_samples,
        seed,
    }
}

/// sup over k <= k_max of |empirical cdf(k) - exact cdf(k)|.
pub fn ks_distance(emp: &EmpiricalDistribution, spec: &ExtremeSpec) -> f64 {
    let exact = Extreme::new(spec.clone());
    let mut cum = 0u64;
    let mut sup: f64 = 0.0;
    for (k, &c) in emp.counts.iter().enumerate() {
        cum += c;
        let ecdf = cum as f64 / emp.n_samples as f64;
        sup = sup.max((ecdf - exact.cdf(k as i64)).abs());
    }
    sup
}

/// Dvoretzky-Kiefer-Wolfowitz band: sqrt(ln(2/delta) / (2 n)).
pub fn dkw_bound(n_samples: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n_samples as f64)).sqrt()
}
