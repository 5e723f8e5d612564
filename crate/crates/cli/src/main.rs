//! Command-line surface over the ordstat library: exact distribution tables,
//! dominance verdicts, theorem campaigns, counterexample tooling, and the
//! Monte Carlo cross-check, all with machine-readable output.
//!
//! Exit codes: 0 success/dominance, 2 usage error, 3 ordering violation (or
//! failed check) — stable for CI scripting.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ordstat::{
    compare, dkw_bound, ks_distance, reproduce_counterexample, sample_extreme,
    search_counterexamples, verify_theorem_with, CounterexampleId, CounterexampleReport,
    Direction, DiscreteDistribution, Extreme, ExtremeSpec, Family, OrderVerdict, Relation,
    SearchOutcome, Statistic, TheoremId, TheoremReport, TruncationPolicy, DEFAULT_COMPARE_TOL,
};

const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "ordstat", version, about = "Extreme order statistics of heterogeneous Poisson and geometric samples: exact distributions, stochastic-order checks, and verification campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Poisson,
    Geometric,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Poisson => Family::Poisson,
            FamilyArg::Geometric => Family::Geometric,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Min,
    Max,
}

impl From<StatArg> for Statistic {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Min => Statistic::Min,
            StatArg::Max => Statistic::Max,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    St,
    Hr,
    Rhr,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::St => Relation::St,
            RelationArg::Hr => Relation::Hr,
            RelationArg::Rhr => Relation::Rhr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct SpecArgs {
    /// Component family
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Which extreme of the components
    #[arg(long = "stat", value_enum)]
    statistic: StatArg,
    /// Comma-separated component parameters, e.g. 8,0.8,0.1
    #[arg(long)]
    params: String,
}

impl SpecArgs {
    fn build(&self) -> ExtremeSpec {
        let values = parse_params(&self.params);
        match ExtremeSpec::new(self.family.into(), self.statistic.into(), values) {
            Ok(s) => s,
            Err(e) => usage_error(&e.to_string()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate cdf, survival, pmf, hazard, and reversed hazard over a range
    Dist {
        #[command(flatten)]
        spec: SpecArgs,
        /// Inclusive support range, e.g. 0..10
        #[arg(long, default_value = "0..20")]
        k: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Decide st/hr/rhr dominance between two specs of the same shape
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        /// Parameters of the second distribution
        #[arg(long = "params-b")]
        params_b: String,
        #[arg(long, value_enum)]
        relation: RelationArg,
        /// Tail truncation threshold
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        /// Neutral band around zero for margin signs
        #[arg(long, default_value_t = DEFAULT_COMPARE_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run a randomized verification campaign for one theorem
    Theorem {
        /// T3_1 | T3_2 | T3_3 | T3_4
        id: String,
        #[arg(long)]
        trials: Option<u64>,
        /// Inclusive range of component counts, e.g. 2..6 (default 2..6)
        #[arg(long = "n-range")]
        n_range: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        /// Dump any theorem-violating trial as a JSON fixture into this directory
        #[arg(long = "quarantine-dir")]
        quarantine_dir: Option<PathBuf>,
        /// JSON file with {"trials":..,"seed":..,"n_range":[a,b]}; flags override
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Reproduce a known counterexample or search for new ones
    Counterexample {
        #[command(subcommand)]
        action: CeAction,
    },
    /// Cross-validate the exact cdf against Monte Carlo sampling
    McCheck {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// DKW band confidence parameter
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CeAction {
    /// Recompute the quoted values of CE3_1, CE3_2, or CE3_3
    Reproduce {
        id: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Randomized search for order-violating majorization pairs
    Search {
        #[arg(long, value_enum)]
        relation: RelationArg,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long = "stat", value_enum)]
        statistic: StatArg,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file with {"budget":..,"seed":..}; flags override
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

fn parse_params(s: &str) -> Vec<f64> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .unwrap_or_else(|_| usage_error(&format!("invalid parameter '{p}'")))
        })
        .collect()
}

/// "a..b", inclusive on both ends.
fn parse_range(s: &str) -> (u64, u64) {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        usage_error(&format!("invalid range '{s}', expected a..b"));
    }
    let a = parts[0]
        .parse()
        .unwrap_or_else(|_| usage_error(&format!("invalid range bound '{}'", parts[0])));
    let b = parts[1]
        .parse()
        .unwrap_or_else(|_| usage_error(&format!("invalid range bound '{}'", parts[1])));
    if a > b {
        usage_error(&format!("empty range '{s}'"));
    }
    (a, b)
}

/// RFC 3339 rendering of SOURCE_DATE_EPOCH, defaulting to the epoch itself so
/// reports are byte-identical across repeat runs.
fn timestamp() -> String {
    let secs: i64 = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0);
    let days = secs.div_euclid(86_400);
    let rem = secs.rem_euclid(86_400);
    let (h, m, s) = (rem / 3600, rem % 3600 / 60, rem % 60);
    // civil-from-days (Howard Hinnant's algorithm)
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { y + 1 } else { y };
    format!("{year:04}-{month:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    command: String,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    timestamp: String,
    payload: T,
}

fn emit_json<T: Serialize>(command: &str, seed: Option<u64>, payload: &T) {
    let envelope = Envelope {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        timestamp: timestamp(),
        payload,
    };
    println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
}

/// Full round-trip precision for CSV cells: 17 significant digits.
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct DistRow {
    k: u32,
    cdf: f64,
    survival: f64,
    pmf: f64,
    hazard: Option<f64>,
    rhazard: Option<f64>,
}

#[derive(Serialize)]
struct DistPayload {
    spec: ExtremeSpec,
    rows: Vec<DistRow>,
}

fn cmd_dist(spec: ExtremeSpec, k: &str, format: Format) -> u8 {
    let (lo, hi) = parse_range(k);
    let d = Extreme::new(spec.clone());
    let rows: Vec<DistRow> = (lo..=hi)
        .map(|k| {
            let k = u32::try_from(k).unwrap_or_else(|_| usage_error("support point too large"));
            DistRow {
                k,
                cdf: d.cdf(i64::from(k)),
                survival: d.survival(i64::from(k)),
                pmf: d.pmf(i64::from(k)),
                hazard: d.hazard(k).ok(),
                rhazard: d.reversed_hazard(k).ok(),
            }
        })
        .collect();
    let payload = DistPayload { spec, rows };
    match format {
        Format::Json => emit_json("dist", None, &payload),
        Format::Csv => {
            println!("k,cdf,survival,pmf,hazard,rhazard");
            for r in &payload.rows {
                let opt = |v: Option<f64>| v.map(sig17).unwrap_or_default();
                println!(
                    "{},{},{},{},{},{}",
                    r.k,
                    sig17(r.cdf),
                    sig17(r.survival),
                    sig17(r.pmf),
                    opt(r.hazard),
                    opt(r.rhazard)
                );
            }
        }
        Format::Table => {
            println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}", "k", "cdf", "surv", "pmf", "hazard", "rhazard");
            for r in &payload.rows {
                let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
                println!(
                    "{:>6} {:>10.6} {:>10.6} {:>10.6} {:>10} {:>10}",
                    r.k, r.cdf, r.survival, r.pmf, opt(r.hazard), opt(r.rhazard)
                );
            }
        }
    }
    0
}

#[derive(Serialize)]
struct ComparePayload {
    spec_a: ExtremeSpec,
    spec_b: ExtremeSpec,
    verdict: OrderVerdict,
}

fn cmd_compare(
    spec_a: ExtremeSpec,
    params_b: &str,
    relation: Relation,
    epsilon: f64,
    tol: f64,
    format: Format,
) -> u8 {
    let values_b = parse_params(params_b);
    let spec_b = match ExtremeSpec::new(spec_a.params.family(), spec_a.statistic, values_b) {
        Ok(s) => s,
        Err(e) => usage_error(&e.to_string()),
    };
    if !(epsilon > 0.0 && epsilon < 1.0) {
        usage_error("epsilon must lie in (0, 1)");
    }
    let a = Extreme::new(spec_a.clone());
    let b = Extreme::new(spec_b.clone());
    let policy = TruncationPolicy::with_epsilon(epsilon);
    let verdict = compare(&a, &b, relation, &policy, tol);
    let crossing = verdict.direction == Direction::Crossing;
    let payload = ComparePayload {
        spec_a,
        spec_b,
        verdict,
    };
    match format {
        Format::Json => emit_json("compare", None, &payload),
        Format::Csv => {
            println!("k,margin");
            for p in &payload.verdict.margins {
                println!("{},{}", p.k, sig17(p.margin));
            }
        }
        Format::Table => {
            let v = &payload.verdict;
            println!("relation:  {:?}", v.relation);
            println!("direction: {:?}", v.direction);
            println!("k_max:     {} (epsilon {:e})", v.k_max, v.truncation.tail_epsilon);
            if !v.crossings.is_empty() {
                println!("crossings: {:?}", v.crossings);
            }
            if !v.skipped.is_empty() {
                println!("skipped:   {} degenerate points", v.skipped.len());
            }
        }
    }
    if crossing {
        EXIT_VIOLATION
    } else {
        0
    }
}

#[derive(serde::Deserialize, Default)]
struct CampaignConfig {
    trials: Option<u64>,
    seed: Option<u64>,
    n_range: Option<(usize, usize)>,
    budget: Option<u64>,
}

fn load_config(path: &Option<PathBuf>) -> CampaignConfig {
    match path {
        None => CampaignConfig::default(),
        Some(p) => {
            let text = fs::read_to_string(p)
                .unwrap_or_else(|e| usage_error(&format!("cannot read {}: {e}", p.display())));
            serde_json::from_str(&text)
                .unwrap_or_else(|e| usage_error(&format!("bad config {}: {e}", p.display())))
        }
    }
}

fn cmd_theorem(
    id: &str,
    trials: u64,
    n_range: &str,
    seed: u64,
    epsilon: f64,
    quarantine_dir: &Option<PathBuf>,
    format: Format,
) -> u8 {
    let id = TheoremId::parse(id)
        .unwrap_or_else(|| usage_error(&format!("unknown theorem id '{id}'")));
    let (lo, hi) = parse_range(n_range);
    if !(2..=8).contains(&lo) || !(2..=8).contains(&hi) {
        usage_error("n-range must lie within 2..8");
    }
    if trials < 1 {
        usage_error("trials must be >= 1");
    }
    let policy = TruncationPolicy::with_epsilon(epsilon);
    let report: TheoremReport =
        verify_theorem_with(id, trials, (lo as usize, hi as usize), seed, &policy)
            .unwrap_or_else(|e| usage_error(&e.to_string()));
    if let Some(dir) = quarantine_dir {
        if !report.failures.is_empty() {
            fs::create_dir_all(dir)
                .unwrap_or_else(|e| usage_error(&format!("cannot create {}: {e}", dir.display())));
            for f in &report.failures {
                let path = dir.join(format!("{id:?}_trial{}.json", f.trial));
                fs::write(&path, serde_json::to_string_pretty(f).unwrap())
                    .unwrap_or_else(|e| usage_error(&format!("cannot write {}: {e}", path.display())));
            }
        }
    }
    match format {
        Format::Json => emit_json("theorem", Some(seed), &report),
        Format::Csv => {
            println!("theorem,trials,failures,worst_margin,seed");
            println!(
                "{:?},{},{},{},{}",
                report.theorem,
                report.trials,
                report.failures.len(),
                sig17(report.worst_margin),
                report.seed
            );
        }
        Format::Table => {
            println!("theorem:      {:?}", report.theorem);
            println!("trials:       {}", report.trials);
            println!("failures:     {}", report.failures.len());
            println!("worst margin: {:.6e}", report.worst_margin);
            println!("seed:         {}", report.seed);
        }
    }
    if report.failures.is_empty() {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_reproduce(id: &str, format: Format) -> u8 {
    let id = CounterexampleId::parse(id)
        .unwrap_or_else(|| usage_error(&format!("unknown counterexample id '{id}'")));
    let report: CounterexampleReport =
        reproduce_counterexample(id).unwrap_or_else(|e| usage_error(&e.to_string()));
    match format {
        Format::Json => emit_json("counterexample-reproduce", None, &report),
        Format::Csv => {
            println!("k,expected,actual,within_tol");
            for v in &report.values {
                println!("{},{},{},{}", v.k, sig17(v.expected), sig17(v.actual), v.within_tol);
            }
        }
        Format::Table => {
            println!("counterexample: {:?} ({:?} {:?}, {:?})", report.id, report.family, report.statistic, report.relation);
            println!("x: {:?}", report.x);
            println!("y: {:?}", report.y);
            for v in &report.values {
                println!(
                    "  k={:<3} expected {:>12.7} actual {:>13.8}  {}",
                    v.k,
                    v.expected,
                    v.actual,
                    if v.within_tol { "ok" } else { "MISMATCH" }
                );
            }
            println!("majorization holds: {}", report.majorization_holds);
            println!("sign change:        {}", report.sign_change);
            println!("note: {}", report.convention_note);
            println!("pass: {}", report.pass);
        }
    }
    if report.pass {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_search(
    relation: Relation,
    family: Family,
    statistic: Statistic,
    budget: u64,
    seed: u64,
    format: Format,
) -> u8 {
    if budget < 1 {
        usage_error("budget must be >= 1");
    }
    let outcome: SearchOutcome = search_counterexamples(relation, family, statistic, budget, seed)
        .unwrap_or_else(|e| usage_error(&e.to_string()));
    match format {
        Format::Json => emit_json("counterexample-search", Some(seed), &outcome),
        Format::Csv => {
            println!("trial,n,first_crossing");
            for h in &outcome.hits {
                println!("{},{},{}", h.trial, h.pair.x.len(), h.verdict.crossings[0]);
            }
        }
        Format::Table => {
            println!(
                "search {:?} {:?} {:?}: {} hits in {} trials (seed {})",
                outcome.relation, outcome.family, outcome.statistic,
                outcome.hits.len(), outcome.budget, outcome.seed
            );
            for h in &outcome.hits {
                println!("  trial {:<6} x={:?} y={:?} crossings={:?}", h.trial, h.pair.x, h.pair.y, h.verdict.crossings);
            }
        }
    }
    if outcome.hits.is_empty() {
        0
    } else {
        EXIT_VIOLATION
    }
}

#[derive(Serialize)]
struct McPayload {
    spec: ExtremeSpec,
    n_samples: u64,
    seed: u64,
    delta: f64,
    ks_distance: f64,
    dkw_bound: f64,
    pass: bool,
}

fn cmd_mc_check(spec: ExtremeSpec, samples: u64, seed: u64, delta: f64, format: Format) -> u8 {
    if samples < 1 {
        usage_error("samples must be >= 1");
    }
    if !(delta > 0.0 && delta < 1.0) {
        usage_error("delta must lie in (0, 1)");
    }
    let emp = sample_extreme(&spec, samples, seed);
    let ks = ks_distance(&emp, &spec);
    let bound = dkw_bound(samples, delta);
    let payload = McPayload {
        spec,
        n_samples: samples,
        seed,
        delta,
        ks_distance: ks,
        dkw_bound: bound,
        pass: ks < bound,
    };
    match format {
        Format::Json => emit_json("mc-check", Some(seed), &payload),
        Format::Csv => {
            println!("n_samples,seed,ks_distance,dkw_bound,pass");
            println!(
                "{},{},{},{},{}",
                payload.n_samples,
                payload.seed,
                sig17(payload.ks_distance),
                sig17(payload.dkw_bound),
                payload.pass
            );
        }
        Format::Table => {
            println!("samples:     {}", payload.n_samples);
            println!("ks distance: {:.6e}", payload.ks_distance);
            println!("dkw bound:   {:.6e} (delta {:e})", payload.dkw_bound, payload.delta);
            println!("pass:        {}", payload.pass);
        }
    }
    if payload.pass {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Dist { spec, k, format } => cmd_dist(spec.build(), &k, format),
        Command::Compare {
            spec,
            params_b,
            relation,
            epsilon,
            tol,
            format,
        } => cmd_compare(spec.build(), &params_b, relation.into(), epsilon, tol, format),
        Command::Theorem {
            id,
            trials,
            n_range,
            seed,
            epsilon,
            quarantine_dir,
            config,
            format,
        } => {
            let cfg = load_config(&config);
            let trials = trials.or(cfg.trials).unwrap_or(1000);
            let seed = seed.or(cfg.seed).unwrap_or(42);
            let n_range = n_range
                .or_else(|| cfg.n_range.map(|(a, b)| format!("{a}..{b}")))
                .unwrap_or_else(|| "2..6".to_string());
            cmd_theorem(&id, trials, &n_range, seed, epsilon, &quarantine_dir, format)
        }
        Command::Counterexample { action } => match action {
            CeAction::Reproduce { id, format } => cmd_reproduce(&id, format),
            CeAction::Search {
                relation,
                family,
                statistic,
                budget,
                seed,
                config,
                format,
            } => {
                let cfg = load_config(&config);
                cmd_search(
                    relation.into(),
                    family.into(),
                    statistic.into(),
                    budget.or(cfg.budget).unwrap_or(10_000),
                    seed.or(cfg.seed).unwrap_or(7),
                    format,
                )
            }
        },
        Command::McCheck {
            spec,
            samples,
            seed,
            delta,
            format,
        } => cmd_mc_check(spec.build(), samples, seed, delta, format),
    };
    ExitCode::from(code)
}
