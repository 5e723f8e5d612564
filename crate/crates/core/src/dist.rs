//! Exact evaluation of Poisson and geometric components and of the
//! distribution, survival, hazard, and reversed hazard functions of the
//! minimum and maximum of heterogeneous independent components.
//!
//! Products over components are accumulated in log space throughout, so the
//! far tail of a minimum (products of survivals down to 1e-300 and below)
//! stays accurate instead of underflowing factor by factor.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Survival values at or below this floor make the discrete hazard a ratio of
/// noise; hazard evaluation refuses such points.
pub const HAZARD_FLOOR: f64 = 1e-250;

/// ln(HAZARD_FLOOR)
const LOG_HAZARD_FLOOR: f64 = -575.646_273_248_511_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Poisson,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Min,
    Max,
}

/// A validated parameter vector: Poisson rates `mu_i > 0` or geometric
/// survival parameters `q_i` strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParamVector", into = "RawParamVector")]
pub struct ParamVector {
    family: Family,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParamVector {
    family: Family,
    values: Vec<f64>,
}

impl TryFrom<RawParamVector> for ParamVector {
    type Error = Error;
    fn try_from(raw: RawParamVector) -> Result<Self> {
        ParamVector::new(raw.family, raw.values)
    }
}

impl From<ParamVector> for RawParamVector {
    fn from(p: ParamVector) -> Self {
        RawParamVector {
            family: p.family,
            values: p.values,
        }
    }
}

impl ParamVector {
    pub fn new(family: Family, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "parameter vector must have length >= 1".into(),
            ));
        }
        for &v in &values {
            match family {
                Family::Poisson => check_mu(v)?,
                Family::Geometric => check_q(v)?,
            }
        }
        Ok(Self { family, values })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Identifies one extreme order statistic: which extreme of which components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeSpec {
    pub params: ParamVector,
    pub statistic: Statistic,
}

impl ExtremeSpec {
    pub fn new(family: Family, statistic: Statistic, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            params: ParamVector::new(family, values)?,
            statistic,
        })
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Poisson rate must be finite and > 0, got {mu}"
        )));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "geometric parameter must lie strictly in (0, 1), got {q}"
        )));
    }
    Ok(())
}

/// Kahan-Babuska compensated accumulator for ascending partial sums.
#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ln P(X = r) for X ~ Poisson(mu): r ln(mu) - mu - ln Gamma(r + 1).
pub fn poisson_log_pmf(r: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(f64::from(r) * mu.ln() - mu - ln_gamma(f64::from(r) + 1.0))
}

/// P(X = r) for X ~ Poisson(mu), evaluated in log space.
pub fn poisson_pmf(r: u32, mu: f64) -> Result<f64> {
    Ok(poisson_log_pmf(r, mu)?.exp())
}

/// P(X <= r) for X ~ Poisson(mu): ascending compensated partial sum of the
/// pmf, which agrees with the regularized upper incomplete gamma integral.
pub fn poisson_cdf(r: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let mut sum = KahanSum::default();
    let mut term = (-mu).exp();
    if term > 0.0 {
        for k in 0..=r {
            if k > 0 {
                term *= mu / f64::from(k);
            }
            sum.add(term);
        }
    } else {
        // e^{-mu} underflows (mu beyond ~745): sum the terms in log space.
        for k in 0..=r {
            sum.add(poisson_log_pmf(k, mu)?.exp());
        }
    }
    Ok(sum.value().min(1.0))
}

/// ln P(X <= r).
pub fn poisson_log_cdf(r: u32, mu: f64) -> Result<f64> {
    let cdf = poisson_cdf(r, mu)?;
    if cdf > 0.0 {
        return Ok(cdf.ln());
    }
    // Every linear-space term underflowed; log-sum-exp over the terms.
    let logs: Vec<f64> = (0..=r).map(|k| poisson_log_pmf(k, mu).unwrap()).collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|&l| (l - m).exp()).sum();
    Ok(m + s.ln())
}

/// ln P(X > r), accurate deep into the tail.
///
/// While the survival is still O(1) this is ln(1 - cdf), which keeps the
/// complement identity exact; once the survival drops below ~1e-2 the tail
/// series `pmf(r+1) * (1 + mu/(r+2) + mu^2/((r+2)(r+3)) + ...)` takes over
/// with its leading factor kept in log space.
pub fn poisson_log_survival(r: u32, mu: f64) -> Result<f64> {
    let cdf = poisson_cdf(r, mu)?;
    if cdf <= 0.99 {
        return Ok((-cdf).ln_1p());
    }
    let lp = poisson_log_pmf(r + 1, mu)?;
    let mut series = KahanSum::default();
    series.add(1.0);
    let mut term = 1.0_f64;
    let mut k = f64::from(r) + 2.0;
    loop {
        term *= mu / k;
        series.add(term);
        k += 1.0;
        if term < series.value() * 1e-18 {
            break;
        }
    }
    Ok(lp + series.value().ln())
}

/// P(X > r).
pub fn poisson_survival(r: u32, mu: f64) -> Result<f64> {
    let cdf = poisson_cdf(r, mu)?;
    if cdf <= 0.99 {
        Ok(1.0 - cdf)
    } else {
        Ok(poisson_log_survival(r, mu)?.exp())
    }
}

/// The ratio e^{-mu} mu^r / (integral of e^{-t} t^r dt from mu to infinity),
/// which is exactly pmf(r, mu) / cdf(r, mu). Increasing in mu for fixed r.
pub fn poisson_gamma_hazard(r: u32, mu: f64) -> Result<f64> {
    Ok((poisson_log_pmf(r, mu)? - poisson_log_cdf(r, mu)?).exp())
}

/// P(X = u) = (1 - q) q^u for X geometric with survival q^{u+1}.
pub fn geometric_pmf(u: u32, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((1.0 - q) * (f64::from(u) * q.ln()).exp())
}

/// ln P(X > u) = (u + 1) ln q.
pub fn geometric_log_survival(u: u32, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok((f64::from(u) + 1.0) * q.ln())
}

/// P(X <= u) = 1 - q^{u+1}.
pub fn geometric_cdf(u: u32, q: f64) -> Result<f64> {
    Ok(-geometric_log_survival(u, q)?.exp_m1())
}

/// The hazard rate of the minimum of heterogeneous geometric components,
/// constant in u: 1 - prod q_i.
pub fn min_geometric_hazard(params: &ParamVector) -> Result<f64> {
    if params.family() != Family::Geometric {
        return Err(Error::InvalidParameter(
            "min_geometric_hazard requires a geometric parameter vector".into(),
        ));
    }
    let log_prod: f64 = params.values().iter().map(|&q| q.ln()).sum();
    Ok(-log_prod.exp_m1())
}

/// Evaluation interface over the support {0, 1, 2, ...}.
///
/// `log_cdf` and `log_survival` are the required primitives; everything else
/// derives from them in log space. Arguments are `i64` so that the boundary
/// conventions cdf(-1) = 0 and survival(-1) = 1 fall out naturally.
pub trait DiscreteDistribution {
    /// ln P(X <= k); `NEG_INFINITY` for k < 0.
    fn log_cdf(&self, k: i64) -> f64;

    /// ln P(X > k); 0.0 for k < 0.
    fn log_survival(&self, k: i64) -> f64;

    fn cdf(&self, k: i64) -> f64 {
        self.log_cdf(k).exp()
    }

    fn survival(&self, k: i64) -> f64 {
        self.log_survival(k).exp()
    }

    fn pmf(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        (self.cdf(k) - self.cdf(k - 1)).max(0.0)
    }

    /// Discrete hazard (survival-decrement convention):
    /// r(u) = (S(u) - S(u+1)) / S(u).
    fn hazard(&self, u: u32) -> Result<f64> {
        let ls = self.log_survival(i64::from(u));
        if ls <= LOG_HAZARD_FLOOR {
            return Err(Error::DegenerateTail {
                k: u,
                floor: HAZARD_FLOOR,
            });
        }
        let v = -(self.log_survival(i64::from(u) + 1) - ls).exp_m1();
        Ok(v.clamp(0.0, 1.0))
    }

    /// Discrete reversed hazard: r~(u) = P(X = u) / P(X <= u).
    fn reversed_hazard(&self, u: u32) -> Result<f64> {
        let lc = self.log_cdf(i64::from(u));
        if lc <= LOG_HAZARD_FLOOR {
            return Err(Error::DegenerateHead {
                k: u,
                floor: HAZARD_FLOOR,
            });
        }
        let v = -(self.log_cdf(i64::from(u) - 1) - lc).exp_m1();
        Ok(v.clamp(0.0, 1.0))
    }
}

/// r(u) = (S(u) - S(u+1)) / S(u) for any discrete distribution.
pub fn hazard_at<D: DiscreteDistribution + ?Sized>(dist: &D, u: u32) -> Result<f64> {
    dist.hazard(u)
}

/// r~(u) = P(X = u) / P(X <= u) for any discrete distribution.
pub fn reversed_hazard_at<D: DiscreteDistribution + ?Sized>(dist: &D, u: u32) -> Result<f64> {
    dist.reversed_hazard(u)
}

/// The distribution of the minimum or maximum of the specified components.
#[derive(Debug, Clone, PartialEq)]
pub struct Extreme {
    spec: ExtremeSpec,
}

impl Extreme {
    pub fn new(spec: ExtremeSpec) -> Self {
        Self { spec }
    }

    pub fn from_parts(family: Family, statistic: Statistic, values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(ExtremeSpec::new(family, statistic, values)?))
    }

    pub fn spec(&self) -> &ExtremeSpec {
        &self.spec
    }

    fn component_log_cdf(&self, k: i64) -> f64 {
        if k < 0 {
            return f64::NEG_INFINITY;
        }
        let k = k as u32;
        self.spec
            .params
            .values()
            .iter()
            .map(|&p| match self.spec.params.family() {
                Family::Poisson => poisson_log_cdf(k, p).unwrap(),
                Family::Geometric => {
                    let ls = geometric_log_survival(k, p).unwrap();
                    (-ls.exp_m1()).ln()
                }
            })
            .sum()
    }

    fn component_log_survival(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let k = k as u32;
        self.spec
            .params
            .values()
            .iter()
            .map(|&p| match self.spec.params.family() {
                Family::Poisson => poisson_log_survival(k, p).unwrap(),
                Family::Geometric => geometric_log_survival(k, p).unwrap(),
            })
            .sum()
    }
}

impl DiscreteDistribution for Extreme {
    fn log_cdf(&self, k: i64) -> f64 {
        match self.spec.statistic {
            // F_{n:n}(k) = prod F_i(k)
            Statistic::Max => self.component_log_cdf(k),
            // F_{1:n}(k) = 1 - prod S_i(k)
            Statistic::Min => {
                let ls = self.component_log_survival(k);
                if ls == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (-ls.exp_m1()).ln()
                }
            }
        }
    }

    fn log_survival(&self, k: i64) -> f64 {
        match self.spec.statistic {
            // S_{n:n}(k) = 1 - prod F_i(k)
            Statistic::Max => {
                let lc = self.component_log_cdf(k);
                if lc == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (-lc.exp_m1()).ln()
                }
            }
            // S_{1:n}(k) = prod S_i(k)
            Statistic::Min => self.component_log_survival(k),
        }
    }

    fn cdf(&self, k: i64) -> f64 {
        match self.spec.statistic {
            Statistic::Max => self.component_log_cdf(k).exp(),
            Statistic::Min => -self.component_log_survival(k).exp_m1(),
        }
    }

    fn survival(&self, k: i64) -> f64 {
        match self.spec.statistic {
            Statistic::Max => -self.component_log_cdf(k).exp_m1(),
            Statistic::Min => self.component_log_survival(k).exp(),
        }
    }

    fn pmf(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        match self.spec.statistic {
            Statistic::Max => (self.cdf(k) - self.cdf(k - 1)).max(0.0),
            Statistic::Min => (self.survival(k - 1) - self.survival(k)).max(0.0),
        }
    }
}

/// F_{n:n}(k) (Max) or F_{1:n}(k) (Min) for the given spec.
pub fn extreme_cdf(spec: &ExtremeSpec, k: u32) -> f64 {
    Extreme::new(spec.clone()).cdf(i64::from(k))
}

/// The survival dual of [`extreme_cdf`].
pub fn extreme_survival(spec: &ExtremeSpec, k: u32) -> f64 {
    Extreme::new(spec.clone()).survival(i64::from(k))
}
