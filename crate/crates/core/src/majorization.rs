//! Majorization predicates, constructive pair generation via T-transforms,
//! and a finite-difference Schur-Ostrowski sign check for the symmetric
//! product functions that drive the extreme-order-statistic comparisons.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{poisson_cdf, poisson_pmf, poisson_survival, Family};
use crate::error::{Error, Result};

pub const DEFAULT_MAJORIZATION_TOL: f64 = 1e-10;

/// A pair of equal-sum vectors with `x` majorizing `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// True when the pair was produced by a chain of T-transforms, which
    /// guarantees the majorization relation by construction.
    pub certified: bool,
}

/// Does `x` majorize `y`? Decreasing-order partial sums of `x` must dominate
/// those of `y` within `+tol`, with totals equal within `tol`.
pub fn majorizes(x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("empty vectors".into()));
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| b.total_cmp(a));
    ys.sort_by(|a, b| b.total_cmp(a));
    let mut px = 0.0;
    let mut py = 0.0;
    for i in 0..xs.len() - 1 {
        px += xs[i];
        py += ys[i];
        if px + tol < py {
            return Ok(false);
        }
    }
    px += xs[xs.len() - 1];
    py += ys[ys.len() - 1];
    Ok((px - py).abs() <= tol)
}

/// Replace coordinates i and j by convex combinations of themselves:
/// y_i = lambda x_i + (1-lambda) x_j and symmetrically for y_j.
/// The result is always majorized by `x`.
pub fn t_transform(x: &[f64], i: usize, j: usize, lambda: f64) -> Result<Vec<f64>> {
    if i >= x.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: x.len(),
        });
    }
    if j >= x.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: x.len(),
        });
    }
    if i == j {
        return Err(Error::InvalidParameter("t_transform requires i != j".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    let mut y = x.to_vec();
    y[i] = lambda * x[i] + (1.0 - lambda) * x[j];
    y[j] = (1.0 - lambda) * x[i] + lambda * x[j];
    Ok(y)
}

/// Family-specific draw range for the pair generator.
fn draw_range(family: Family) -> (f64, f64) {
    match family {
        Family::Poisson => (0.05, 30.0),
        Family::Geometric => (0.05, 0.995),
    }
}

/// Draw `x` uniformly in the family's range and derive `y` by `k_transforms`
/// successive random T-transforms. Deterministic in `seed`.
pub fn random_majorization_pair(
    n: usize,
    family: Family,
    k_transforms: usize,
    seed: u64,
) -> Result<MajorizationPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_majorization_pair_with(n, family, k_transforms, &mut rng)
}

/// As [`random_majorization_pair`] but drawing from a caller-owned stream,
/// for campaigns that derive one stream per trial.
pub fn random_majorization_pair_with<R: Rng>(
    n: usize,
    family: Family,
    k_transforms: usize,
    rng: &mut R,
) -> Result<MajorizationPair> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "majorization pairs need n >= 2, got {n}"
        )));
    }
    if k_transforms < 1 {
        return Err(Error::InvalidParameter(
            "k_transforms must be >= 1".into(),
        ));
    }
    let (lo, hi) = draw_range(family);
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
    let y = chain_t_transforms(&x, k_transforms, rng)?;
    Ok(MajorizationPair {
        x,
        y,
        certified: true,
    })
}

/// Apply `k` random T-transforms to `x`.
pub(crate) fn chain_t_transforms<R: Rng>(
    x: &[f64],
    k: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = x.len();
    let mut y = x.to_vec();
    for _ in 0..k {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        y = t_transform(&y, i, j, lambda)?;
    }
    Ok(y)
}

/// A symmetric function of a real vector, with its open domain interval.
pub trait SymmetricFunction {
    fn eval(&self, z: &[f64]) -> f64;

    /// The open interval the coordinates live in.
    fn domain(&self) -> (f64, f64);
}

/// prod_i F_i(r) for Poisson components: the cdf of the maximum at fixed r.
#[derive(Debug, Clone, Copy)]
pub struct PoissonMaxCdf {
    pub r: u32,
}

impl SymmetricFunction for PoissonMaxCdf {
    fn eval(&self, z: &[f64]) -> f64 {
        z.iter().map(|&mu| poisson_cdf(self.r, mu).unwrap()).product()
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

impl PoissonMaxCdf {
    /// Closed-form partial derivative: -pmf(r, z_i) * prod_{k != i} F_k(r).
    pub fn partial(&self, z: &[f64], i: usize) -> f64 {
        let rest: f64 = z
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &mu)| poisson_cdf(self.r, mu).unwrap())
            .product();
        -poisson_pmf(self.r, z[i]).unwrap() * rest
    }
}

/// prod_i S_i(r) for Poisson components: the survival of the minimum at
/// fixed r.
#[derive(Debug, Clone, Copy)]
pub struct PoissonMinSurvival {
    pub r: u32,
}

impl SymmetricFunction for PoissonMinSurvival {
    fn eval(&self, z: &[f64]) -> f64 {
        z.iter()
            .map(|&mu| poisson_survival(self.r, mu).unwrap())
            .product()
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

impl PoissonMinSurvival {
    /// Closed-form partial derivative: +pmf(r, z_i) * prod_{k != i} S_k(r).
    pub fn partial(&self, z: &[f64], i: usize) -> f64 {
        let rest: f64 = z
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &mu)| poisson_survival(self.r, mu).unwrap())
            .product();
        poisson_pmf(self.r, z[i]).unwrap() * rest
    }
}

/// prod_i (1 - q_i^{u+1}): the cdf of the geometric maximum at fixed u.
#[derive(Debug, Clone, Copy)]
pub struct GeometricMaxCdf {
    pub u: u32,
}

impl SymmetricFunction for GeometricMaxCdf {
    fn eval(&self, z: &[f64]) -> f64 {
        let e = f64::from(self.u) + 1.0;
        z.iter().map(|&q| 1.0 - q.powf(e)).product()
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
}

impl GeometricMaxCdf {
    /// Closed-form partial derivative:
    /// -(u+1) q_i^u * prod_{k != i} (1 - q_k^{u+1}).
    pub fn partial(&self, z: &[f64], i: usize) -> f64 {
        let e = f64::from(self.u) + 1.0;
        let rest: f64 = z
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &q)| 1.0 - q.powf(e))
            .product();
        -e * z[i].powf(e - 1.0) * rest
    }
}

/// The Schur-Ostrowski quantity (z_i - z_j)(df/dz_i - df/dz_j) with partials
/// by central differences at step `h`. A sign that stays <= 0 over the domain
/// is evidence of Schur-concavity.
pub fn schur_ostrowski_check<F: SymmetricFunction + ?Sized>(
    f: &F,
    z: &[f64],
    i: usize,
    j: usize,
    h: f64,
) -> Result<f64> {
    if i >= z.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: z.len(),
        });
    }
    if j >= z.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: z.len(),
        });
    }
    let (lo, hi) = f.domain();
    for &idx in &[i, j] {
        let margin = (z[idx] - lo).min(hi - z[idx]);
        if h >= margin {
            return Err(Error::StepTooLarge { step: h, margin });
        }
    }
    let di = central_difference(f, z, i, h);
    let dj = central_difference(f, z, j, h);
    Ok((z[i] - z[j]) * (di - dj))
}

/// Default step for [`schur_ostrowski_check`]: 1e-5 * max(1, |z_i|).
pub fn default_step(zi: f64) -> f64 {
    1e-5 * zi.abs().max(1.0)
}

fn central_difference<F: SymmetricFunction + ?Sized>(
    f: &F,
    z: &[f64],
    i: usize,
    h: f64,
) -> f64 {
    let mut hi = z.to_vec();
    let mut lo = z.to_vec();
    hi[i] += h;
    lo[i] -= h;
    (f.eval(&hi) - f.eval(&lo)) / (2.0 * h)
}
