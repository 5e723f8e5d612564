//! Exact distributions of extreme order statistics (minimum, maximum) from
//! heterogeneous independent Poisson and geometric random variables, with
//! stochastic-order dominance checking, majorization utilities, randomized
//! theorem verification, counterexample reproduction and search, and a
//! Monte Carlo cross-validation oracle.

pub mod dist;
pub mod error;
pub mod majorization;
pub mod mc;
pub mod order;
pub mod verify;

pub use dist::{
    extreme_cdf, extreme_survival, geometric_cdf, geometric_log_survival, geometric_pmf,
    hazard_at, min_geometric_hazard, poisson_cdf, poisson_gamma_hazard, poisson_log_cdf,
    poisson_log_pmf, poisson_log_survival, poisson_pmf, poisson_survival, reversed_hazard_at,
    DiscreteDistribution, Extreme, ExtremeSpec, Family, ParamVector, Statistic, HAZARD_FLOOR,
};
pub use error::{Error, Result};
pub use majorization::{
    default_step, majorizes, random_majorization_pair, schur_ostrowski_check, t_transform,
    GeometricMaxCdf, MajorizationPair, PoissonMaxCdf, PoissonMinSurvival, SymmetricFunction,
    DEFAULT_MAJORIZATION_TOL,
};
pub use mc::{dkw_bound, ks_distance, sample_extreme, EmpiricalDistribution};
pub use order::{
    compare, truncation_point, Direction, MarginPoint, OrderVerdict, Relation, Truncation,
    TruncationPolicy, DEFAULT_COMPARE_TOL,
};
pub use verify::{
    reproduce_counterexample, search_counterexamples, verify_theorem, verify_theorem_with,
    CeValue, CounterexampleId, CounterexampleReport, SearchHit, SearchOutcome, TheoremId,
    TheoremReport, TrialFailure,
};
