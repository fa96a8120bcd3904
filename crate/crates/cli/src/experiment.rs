use std::path::{Path, PathBuf};

use anticonc_core::analysis::{hypercontractivity_check, minimal_t, mnv_trend, random_harmonic};
use anticonc_core::poly::parse_rational;
use anticonc_core::ramsey::{alpha, find_unavoidable_pattern, mixed_degree_sets, monochromatic_clique, Color, TwoColoring};
use anticonc_core::structure::{greedy_experiment, matching_probability_experiment, GreedyVariant};
use anticonc_core::{complete_bipartite, rng, Hypergraph, RandomModel};
use clap::ValueEnum;
use rand::Rng as _;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::load_graph;
use crate::output::Report;
use crate::{read_file, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    Matching,
    Greedy,
    MnvTrend,
    Hypercontractivity,
    Patterns,
}

impl ExperimentName {
    fn label(self) -> &'static str {
        match self {
            ExperimentName::Matching => "matching",
            ExperimentName::Greedy => "greedy",
            ExperimentName::MnvTrend => "mnv-trend",
            ExperimentName::Hypercontractivity => "hypercontractivity",
            ExperimentName::Patterns => "patterns",
        }
    }
}

/// Input graph of an experiment. Random graphs use their own seed, or one
/// derived from the run seed when omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    CompleteBipartite { a: usize, b: usize, r: usize },
    Random { n: usize, r: usize, p: f64, seed: Option<u64> },
    /// Text graph file; relative paths resolve against the config file.
    File { path: PathBuf },
}

impl Default for GraphSpec {
    fn default() -> Self {
        GraphSpec::CompleteBipartite { a: 32, b: 32, r: 2 }
    }
}

impl GraphSpec {
    fn build(&self, run_seed: u64, base: &Path) -> Result<Hypergraph, CliError> {
        match self {
            GraphSpec::CompleteBipartite { a, b, r } => Ok(complete_bipartite(*a, *b, *r)?),
            GraphSpec::Random { n, r, p, seed } => {
                let seed = seed.unwrap_or_else(|| derived_seed(run_seed));
                Ok(Hypergraph::random(*n, *r, RandomModel::Uniform(*p), seed)?)
            }
            GraphSpec::File { path } => load_graph(&base.join(path)),
        }
    }
}

/// A seed for auxiliary objects, taken from a stream no experiment uses.
fn derived_seed(seed: u64) -> u64 {
    rng::stream(seed, u64::MAX).random()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct MatchingConfig {
    seed: Option<u64>,
    graph: GraphSpec,
    samples: usize,
    threshold: f64,
}

impl Default for MatchingConfig {
    fn default() -> Self {
        MatchingConfig { seed: None, graph: GraphSpec::default(), samples: 200, threshold: 1.0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GreedyConfig {
    seed: Option<u64>,
    graph: GraphSpec,
    variant: String,
    runs: usize,
    /// Reported fraction of runs with final matching at least this size.
    matching_threshold: f64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            seed: None,
            graph: GraphSpec::default(),
            variant: "avoid_high_degree".into(),
            runs: 500,
            matching_threshold: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct MnvConfig {
    seed: Option<u64>,
    ranks: Vec<usize>,
    per_bucket: usize,
    trials: u64,
}

impl Default for MnvConfig {
    fn default() -> Self {
        MnvConfig { seed: None, ranks: vec![1, 2, 4, 8, 16], per_bucket: 200, trials: 100_000 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct HyperConfig {
    seed: Option<u64>,
    ns: Vec<usize>,
    per_n: usize,
    degree: usize,
    p: f64,
    q: f64,
}

impl Default for HyperConfig {
    fn default() -> Self {
        HyperConfig { seed: None, ns: vec![6, 8, 10], per_n: 10, degree: 3, p: 0.5, q: 4.0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PatternsConfig {
    seed: Option<u64>,
    r: usize,
    n: usize,
    colorings: usize,
    p_red: f64,
    /// Part size for the unavoidable-pattern search.
    t: usize,
    /// Rational `ε` for the mixed-degree threshold `α_r(ε)·n`.
    eps: String,
    clique: usize,
}

impl Default for PatternsConfig {
    fn default() -> Self {
        PatternsConfig { seed: None, r: 3, n: 12, colorings: 5, p_red: 0.5, t: 2, eps: "1/5".into(), clique: 4 }
    }
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => toml::from_str(&read_file(p)?).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
    }
}

/// Seed precedence: `--seed`, then the config, then a fresh random one.
fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> u64 {
    flag.or(config).unwrap_or_else(rand::random)
}

fn echo<T: Serialize>(config: &T, seed: u64) -> Value {
    let mut v = serde_json::to_value(config).expect("configs serialize");
    v["seed"] = json!(seed);
    v
}

fn f(x: f64) -> String {
    format!("{x}")
}

pub fn run(name: ExperimentName, path: Option<&Path>, seed_flag: Option<u64>) -> Result<Report, CliError> {
    let base = path.and_then(Path::parent).unwrap_or(Path::new("."));
    let command = format!("experiment {}", name.label());
    let (seed, config, result, columns, rows) = match name {
        ExperimentName::Matching => {
            let c: MatchingConfig = load_config(path)?;
            let seed = resolve_seed(seed_flag, c.seed);
            let g = c.graph.build(seed, base)?;
            let report = matching_probability_experiment(&g, c.samples, c.threshold, seed)?;
            let rows = report.histogram.iter().map(|(s, n)| vec![s.to_string(), n.to_string()]).collect();
            (seed, echo(&c, seed), report.to_json(), vec!["matching_size", "samples"], rows)
        }
        ExperimentName::Greedy => {
            let c: GreedyConfig = load_config(path)?;
            let seed = resolve_seed(seed_flag, c.seed);
            let variant: GreedyVariant = c.variant.parse()?;
            let g = c.graph.build(seed, base)?;
            let s = greedy_experiment(&g, variant, c.runs, seed)?;
            let result = json!({
                "variant": s.variant.name(),
                "runs": s.runs,
                "t_budget": s.t_budget,
                "steps": s.steps,
                "successes": s.successes,
                "success_rate": s.success_rate(),
                "matching_threshold": c.matching_threshold,
                "fraction_at_least": s.fraction_at_least(c.matching_threshold),
                "matching_sizes": s.matching_sizes,
            });
            let rows = s.matching_sizes.iter().enumerate().map(|(i, m)| vec![i.to_string(), m.to_string()]).collect();
            (seed, echo(&c, seed), result, vec!["run", "matching_size"], rows)
        }
        ExperimentName::MnvTrend => {
            let c: MnvConfig = load_config(path)?;
            let seed = resolve_seed(seed_flag, c.seed);
            let buckets = mnv_trend(&c.ranks, c.per_bucket, c.trials, seed)?;
            let rows = buckets
                .iter()
                .map(|b| {
                    let lo = b.max_point_probs.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = b.max_point_probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    vec![b.rank.to_string(), b.max_point_probs.len().to_string(), f(b.median), f(lo), f(hi)]
                })
                .collect();
            let result = json!({"buckets": buckets});
            (seed, echo(&c, seed), result, vec!["rank", "polynomials", "median", "min", "max"], rows)
        }
        ExperimentName::Hypercontractivity => {
            let c: HyperConfig = load_config(path)?;
            let seed = resolve_seed(seed_flag, c.seed);
            let mut rows = Vec::new();
            let mut checks = Vec::new();
            for (a, &n) in c.ns.iter().enumerate() {
                let k = (c.p * n as f64).round() as usize;
                let t = minimal_t(n, c.p, c.q);
                for i in 0..c.per_n {
                    let g = random_harmonic(n, k, c.degree, rng::stream(seed, (a as u64) << 32 | i as u64).random())?;
                    let rep = hypercontractivity_check(&g, n, c.p, t, c.q)?;
                    rows.push(vec![n.to_string(), i.to_string(), f(t), f(rep.lhs), f(rep.rhs), f(rep.margin), rep.holds.to_string()]);
                    checks.push(json!({"n": n, "index": i, "t": t, "report": rep}));
                }
            }
            let violations = checks.iter().filter(|c| c["report"]["holds"] == json!(false)).count();
            let result = json!({"checks": checks, "violations": violations});
            (seed, echo(&c, seed), result, vec!["n", "index", "t", "lhs", "rhs", "margin", "holds"], rows)
        }
        ExperimentName::Patterns => {
            let c: PatternsConfig = load_config(path)?;
            let seed = resolve_seed(seed_flag, c.seed);
            let eps = parse_rational(&c.eps).ok_or_else(|| CliError::Config(format!("eps: not a rational: {:?}", c.eps)))?;
            let a = alpha(c.r, &eps);
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for i in 0..c.colorings {
                let col = TwoColoring::random(c.r, c.n, c.p_red, rng::stream(seed, i as u64).random())?;
                let mixed = mixed_degree_sets(&col, &a)?.len();
                let pattern = if c.r == 3 { find_unavoidable_pattern(&col, c.t)? } else { None };
                let clique = monochromatic_clique(&col, c.clique)?;
                let (red, blue) = (col.count(Color::Red), col.count(Color::Blue));
                rows.push(vec![
                    i.to_string(),
                    red.to_string(),
                    blue.to_string(),
                    mixed.to_string(),
                    pattern.is_some().to_string(),
                    clique.map(|s| s.to_string()).unwrap_or_default(),
                ]);
                items.push(json!({
                    "index": i,
                    "red": red,
                    "blue": blue,
                    "mixed_degree_sets": mixed,
                    "pattern": pattern.map(|w| w.parts.iter().map(|p| p.labels()).collect::<Vec<_>>()),
                    "clique": clique.map(|s| s.labels()),
                }));
            }
            let result = json!({"alpha": a.to_string(), "colorings": items});
            (seed, echo(&c, seed), result, vec!["index", "red", "blue", "mixed_sets", "pattern_found", "clique"], rows)
        }
    };
    Ok(Report { command, seed, config, result, columns, rows })
}
