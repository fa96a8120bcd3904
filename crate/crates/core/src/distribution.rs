//! Distribution of `X_{G,k}`, the number of edges induced by a uniformly
//! random `k`-subset of the vertices.
//!
//! The exact path enumerates all `C(n, k)` subsets. Subsets are grouped into
//! blocks by their largest few elements; inside a block the remaining
//! elements run through a revolving-door order so each step swaps one vertex
//! and the edge count is updated from the two affected stars.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::combin::{binom, binom_big, bit, bits, revolving_door, subsets, top_blocks};
use crate::error::{invalid, precondition, Error, Result};
use crate::exec::{chunk_ranges, map_blocks};
use crate::hypergraph::Hypergraph;
use crate::rng;

/// Environment variable overriding the default enumeration cap.
pub const BUDGET_ENV: &str = "ANTICONC_BUDGET";

const DEFAULT_BUDGET: u128 = 10_000_000_000;

/// Cap on the number of points any exhaustive enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_points: u128,
}

impl Budget {
    pub fn new(max_points: u128) -> Budget {
        Budget { max_points }
    }

    /// Default cap, overridden by `ANTICONC_BUDGET` when it parses.
    pub fn from_env() -> Budget {
        let max_points = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Budget { max_points }
    }

    pub fn check(&self, what: &'static str, required: u128) -> Result<()> {
        if required > self.max_points {
            Err(Error::Budget { what, required, limit: self.max_points })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::from_env()
    }
}

/// Counts edges inside vertex masks, with an O(1) path for graphs.
#[derive(Clone, Debug)]
pub(crate) struct EdgeCounter {
    r: usize,
    adj: Vec<u128>,
    stars: Vec<Vec<u128>>,
    edges: Vec<u128>,
}

impl EdgeCounter {
    pub(crate) fn new(g: &Hypergraph) -> EdgeCounter {
        let mut stars = vec![Vec::new(); g.n()];
        if g.r() != 2 {
            for &e in g.edges() {
                for v in bits(e) {
                    stars[v].push(e);
                }
            }
        }
        EdgeCounter {
            r: g.r(),
            adj: if g.r() == 2 { g.adjacency() } else { Vec::new() },
            stars,
            edges: g.edges().to_vec(),
        }
    }

    /// Number of edges inside `set`.
    pub(crate) fn count(&self, set: u128) -> usize {
        if self.r == 2 {
            let twice: u32 = bits(set).map(|v| (self.adj[v] & set).count_ones()).sum();
            (twice / 2) as usize
        } else {
            self.edges.iter().filter(|&&e| e & !set == 0).count()
        }
    }

    /// Number of edges inside `set` that contain `v` (which must be in `set`).
    pub(crate) fn containing(&self, v: usize, set: u128) -> usize {
        if self.r == 2 {
            (self.adj[v] & set).count_ones() as usize
        } else {
            self.stars[v].iter().filter(|&&e| e & !set == 0).count()
        }
    }
}

/// Exact distribution of `X_{G,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Nonzero counts only, keyed by the number of induced edges.
    pub counts: BTreeMap<usize, BigUint>,
    pub total: BigUint,
}

impl DistributionTable {
    pub fn count(&self, ell: usize) -> BigUint {
        self.counts.get(&ell).cloned().unwrap_or_default()
    }

    pub fn probability(&self, ell: usize) -> BigRational {
        BigRational::new(BigInt::from(self.count(ell)), BigInt::from(self.total.clone()))
    }

    /// `max_ℓ Pr(X = ℓ)` together with the smallest maximizing `ℓ`.
    pub fn max_point_probability(&self) -> (usize, BigRational) {
        let (ell, _) = self
            .counts
            .iter()
            .fold((0usize, BigUint::zero()), |best, (&l, c)| if *c > best.1 { (l, c.clone()) } else { best });
        (ell, self.probability(ell))
    }

    pub fn max_edges(&self) -> u128 {
        binom(self.k, self.r)
    }

    pub fn to_json(&self) -> Value {
        let mut counts = Map::new();
        for (ell, c) in &self.counts {
            counts.insert(ell.to_string(), Value::String(c.to_string()));
        }
        json!({
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "total": self.total.to_string(),
            "counts": counts,
        })
    }

    pub fn from_json(value: &Value) -> Result<DistributionTable> {
        let field = |name: &str| value.get(name).ok_or_else(|| invalid(format!("missing field {name:?}")));
        let int = |name: &str| -> Result<usize> {
            field(name)?
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| invalid(format!("field {name:?} is not an integer")))
        };
        let big = |v: &Value| -> Result<BigUint> {
            v.as_str()
                .and_then(|s| s.parse::<BigUint>().ok())
                .ok_or_else(|| invalid("counts must be decimal strings"))
        };
        let mut counts = BTreeMap::new();
        let obj = field("counts")?.as_object().ok_or_else(|| invalid("counts is not an object"))?;
        for (key, v) in obj {
            let ell = key.parse::<usize>().map_err(|_| invalid(format!("bad count key {key:?}")))?;
            let c = big(v)?;
            if !c.is_zero() {
                counts.insert(ell, c);
            }
        }
        Ok(DistributionTable { n: int("n")?, k: int("k")?, r: int("r")?, total: big(field("total")?)?, counts })
    }

    /// CSV with a header; `comments` become leading `#` lines.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str("ell,count,probability\n");
        for (ell, c) in &self.counts {
            let p = self.probability(*ell).to_f64().unwrap_or(f64::NAN);
            out.push_str(&format!("{ell},{c},{p}\n"));
        }
        out
    }
}

/// `ℓ* = min{ℓ, C(k,r) − ℓ}`.
pub fn ell_star(k: usize, r: usize, ell: usize) -> u128 {
    let top = binom(k, r);
    (ell as u128).min(top.saturating_sub(ell as u128))
}

/// Number of fixed top elements per block: enough blocks to spread across
/// threads, none for tiny enumerations.
fn block_top(n: usize, k: usize) -> usize {
    if binom(n, k) < 1 << 16 {
        return 0;
    }
    let mut top = 1;
    while top < k && binom(n, top) < 512 {
        top += 1;
    }
    top
}

pub fn exact_distribution(g: &Hypergraph, k: usize) -> Result<DistributionTable> {
    exact_distribution_with(g, k, Budget::from_env())
}

pub fn exact_distribution_with(g: &Hypergraph, k: usize, budget: Budget) -> Result<DistributionTable> {
    let n = g.n();
    if k > n {
        return Err(invalid(format!("k = {k} exceeds n = {n}")));
    }
    budget.check("exact distribution", binom(n, k))?;
    let counter = EdgeCounter::new(g);
    let width = (binom(k, g.r()).min(g.edge_count() as u128) as usize) + 1;
    let blocks = top_blocks(n, k, block_top(n, k));
    let hists = map_blocks(blocks.len(), |b| {
        let (fixed, low) = blocks[b];
        block_histogram(&counter, fixed, low, k - fixed.count_ones() as usize, width)
    });
    let mut merged = vec![0u128; width];
    for h in hists {
        for (acc, c) in merged.iter_mut().zip(h) {
            *acc += c as u128;
        }
    }
    let counts = merged
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(ell, c)| (ell, BigUint::from(c)))
        .collect();
    Ok(DistributionTable { n, k, r: g.r(), counts, total: binom_big(n, k) })
}

fn block_histogram(counter: &EdgeCounter, fixed: u128, low: usize, free: usize, width: usize) -> Vec<u64> {
    let elems: Vec<usize> = (0..low).collect();
    let mut hist = vec![0u64; width];
    let mut prev: Option<(u128, usize)> = None;
    revolving_door(&elems, free, fixed, &mut |mask| {
        let c = match prev {
            None => counter.count(mask),
            Some((pm, pc)) => {
                let diff = pm ^ mask;
                let out = (pm & diff).trailing_zeros() as usize;
                let inn = (mask & diff).trailing_zeros() as usize;
                pc - counter.containing(out, pm) + counter.containing(inn, mask)
            }
        };
        hist[c] += 1;
        prev = Some((mask, c));
    });
    hist
}

/// `Pr(X_{G,k} = ℓ)` as an exact rational.
pub fn point_probability(g: &Hypergraph, k: usize, ell: usize) -> Result<BigRational> {
    Ok(exact_distribution(g, k)?.probability(ell))
}

const MC_BLOCK: u64 = 1 << 14;

/// Histogram of `X_{G,k}` over `trials` independent uniform `k`-subsets.
/// Trials are split into fixed blocks, each with its own random stream.
pub fn monte_carlo_histogram(g: &Hypergraph, k: usize, trials: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if k > g.n() {
        return Err(invalid(format!("k = {k} exceeds n = {}", g.n())));
    }
    let counter = EdgeCounter::new(g);
    let ranges = chunk_ranges(trials, MC_BLOCK);
    let parts = map_blocks(ranges.len(), |b| {
        let (start, end) = ranges[b];
        let mut rng = rng::stream(seed, b as u64);
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in start..end {
            let set = rng::random_subset_mask(&mut rng, g.n(), k);
            *hist.entry(counter.count(set)).or_default() += 1;
        }
        hist
    });
    let mut merged = BTreeMap::new();
    for part in parts {
        for (ell, c) in part {
            *merged.entry(ell).or_default() += c;
        }
    }
    Ok(merged)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_hits(hits: u64, trials: u64) -> Estimate {
        let p = hits as f64 / trials as f64;
        Estimate { estimate: p, stderr: (p * (1.0 - p) / trials as f64).sqrt(), hits, trials }
    }
}

pub fn monte_carlo_probability(g: &Hypergraph, k: usize, ell: usize, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let hist = monte_carlo_histogram(g, k, trials, seed)?;
    Ok(Estimate::from_hits(hist.get(&ell).copied().unwrap_or(0), trials))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalMode {
    /// Every labeled graph whose degree sequence is non-increasing.
    Exhaustive,
    /// Edge-toggle local search from random starts.
    HillClimb { restarts: usize, max_rounds: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub best_probability: BigRational,
    pub witness: Hypergraph,
    pub exhaustive: bool,
}

/// Largest supported vertex count for exhaustive extremal search.
pub const EXHAUSTIVE_MAX_N: usize = 8;

/// `I(n,k,ℓ)` for graphs: the largest `Pr(X_{G,k} = ℓ)` over `n`-vertex `G`.
pub fn extremal_search(n: usize, k: usize, ell: usize, mode: ExtremalMode, seed: u64) -> Result<ExtremalResult> {
    if k > n {
        return Err(invalid(format!("k = {k} exceeds n = {n}")));
    }
    let sets: Vec<u128> = subsets(n, k).collect();
    let (hits, edges, exhaustive) = match mode {
        ExtremalMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return Err(Error::Budget {
                    what: "exhaustive extremal search",
                    required: 1u128 << binom(n, 2).min(127),
                    limit: 1u128 << binom(EXHAUSTIVE_MAX_N, 2),
                });
            }
            let (h, e) = exhaustive_extremal(n, ell, &sets);
            (h, e, true)
        }
        ExtremalMode::HillClimb { restarts, max_rounds } => {
            Budget::from_env().check("hill-climb extremal search", binom(n, k))?;
            let (h, e) = hill_climb(n, ell, &sets, restarts.max(1), max_rounds, seed);
            (h, e, false)
        }
    };
    let witness = Hypergraph::new(2, n, edges)?;
    Ok(ExtremalResult {
        n,
        k,
        ell,
        best_probability: BigRational::new(BigInt::from(hits), BigInt::from(sets.len())),
        witness,
        exhaustive,
    })
}

fn hits_for(adj: &[u128], sets: &[u128], ell: usize) -> usize {
    sets.iter()
        .filter(|&&s| {
            let twice: u32 = bits(s).map(|v| (adj[v] & s).count_ones()).sum();
            twice as usize == 2 * ell
        })
        .count()
}

fn edges_of(adj: &[u128]) -> Vec<u128> {
    let mut out = Vec::new();
    for (u, &row) in adj.iter().enumerate() {
        for v in bits(row) {
            if v > u {
                out.push(bit(u) | bit(v));
            }
        }
    }
    out
}

/// Enumerates labeled graphs with `deg(1) ≥ deg(2) ≥ … ≥ deg(n)`; every
/// graph is isomorphic to one of these. Rows are filled in vertex order, so
/// vertex `i`'s degree is final once row `i` is placed.
fn exhaustive_extremal(n: usize, ell: usize, sets: &[u128]) -> (usize, Vec<u128>) {
    if n <= 1 {
        let adj = vec![0u128; n];
        return (hits_for(&adj, sets, ell), Vec::new());
    }
    let first_rows = 1usize << (n - 1);
    let results = map_blocks(first_rows, |row0| {
        let mut adj = vec![0u128; n];
        for j in 1..n {
            if row0 >> (j - 1) & 1 == 1 {
                adj[0] |= bit(j);
                adj[j] |= bit(0);
            }
        }
        let mut best = (0usize, Vec::new());
        if feasible_after_row(&adj, 0) {
            fill_rows(&mut adj, 1, n, ell, sets, &mut best, &mut false);
        }
        best
    });
    let mut best = (0usize, Vec::new());
    let mut seen = false;
    for (h, adj) in results {
        if adj.is_empty() {
            continue;
        }
        if !seen || h > best.0 {
            best = (h, adj);
            seen = true;
        }
    }
    (best.0, edges_of(&best.1))
}

fn degree(adj: &[u128], v: usize) -> u32 {
    adj[v].count_ones()
}

fn feasible_after_row(adj: &[u128], i: usize) -> bool {
    let d = degree(adj, i);
    if i > 0 && degree(adj, i - 1) < d {
        return false;
    }
    (i + 1..adj.len()).all(|j| degree(adj, j) <= d)
}

fn fill_rows(
    adj: &mut Vec<u128>,
    i: usize,
    n: usize,
    ell: usize,
    sets: &[u128],
    best: &mut (usize, Vec<u128>),
    seen: &mut bool,
) {
    if i + 1 >= n {
        if i < n && !feasible_after_row(adj, i) {
            return;
        }
        let h = hits_for(adj, sets, ell);
        if !*seen || h > best.0 {
            *best = (h, adj.clone());
            *seen = true;
        }
        return;
    }
    let free = n - i - 1;
    for row in 0..1usize << free {
        for j in 0..free {
            if row >> j & 1 == 1 {
                let v = i + 1 + j;
                adj[i] |= bit(v);
                adj[v] |= bit(i);
            }
        }
        if feasible_after_row(adj, i) {
            fill_rows(adj, i + 1, n, ell, sets, best, seen);
        }
        for j in 0..free {
            let v = i + 1 + j;
            adj[i] &= !bit(v);
            adj[v] &= !bit(i);
        }
    }
}

fn hill_climb(
    n: usize,
    ell: usize,
    sets: &[u128],
    restarts: usize,
    max_rounds: usize,
    seed: u64,
) -> (usize, Vec<u128>) {
    use rand::seq::SliceRandom;
    use rand::Rng as _;

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let runs = map_blocks(restarts, |run| {
        let mut rng = rng::stream(seed, run as u64);
        let mut adj = vec![0u128; n];
        for &(u, v) in &pairs {
            if rng.random_bool(0.5) {
                adj[u] |= bit(v);
                adj[v] |= bit(u);
            }
        }
        let mut score = hits_for(&adj, sets, ell);
        let mut order = pairs.clone();
        for _ in 0..max_rounds {
            order.shuffle(&mut rng);
            let mut improved = false;
            for &(u, v) in &order {
                adj[u] ^= bit(v);
                adj[v] ^= bit(u);
                let s = hits_for(&adj, sets, ell);
                if s > score {
                    score = s;
                    improved = true;
                } else {
                    adj[u] ^= bit(v);
                    adj[v] ^= bit(u);
                }
            }
            if !improved || score == sets.len() {
                break;
            }
        }
        (score, adj)
    });
    let mut best = runs[0].clone();
    for run in runs.into_iter().skip(1) {
        if run.0 > best.0 {
            best = run;
        }
    }
    (best.0, edges_of(&best.1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationCheck {
    /// `E X` exactly.
    pub expected: BigRational,
    /// `exp(−t²/(8 Σ deg(x)²))` with `t = |ℓ − E X|`.
    pub bound: f64,
    pub applicable: bool,
}

/// Upper bound on `Pr(X_{G,k} = ℓ)` for graphs on `2k` vertices when `ℓ` is
/// at least a `(1 ± ε)` factor away from the mean.
pub fn concentration_regime_check(g: &Hypergraph, k: usize, ell: usize, eps: f64) -> Result<ConcentrationCheck> {
    if g.r() != 2 || g.n() != 2 * k {
        return Err(precondition("concentration check needs a graph on 2k vertices"));
    }
    let n = g.n();
    let expected = if k < 2 {
        BigRational::zero()
    } else {
        BigRational::new(
            BigInt::from(g.edge_count()) * BigInt::from(binom_big(n - 2, k - 2)),
            BigInt::from(binom_big(n, k)),
        )
    };
    let mean = expected.to_f64().unwrap_or(f64::NAN);
    let l = ell as f64;
    let applicable = l >= (1.0 + eps) * mean || l <= (1.0 - eps) * mean;
    let lipschitz: Vec<f64> = g.vertex_degrees().iter().map(|&d| d as f64).collect();
    let bound = crate::slice::concentration_tail_bound(&lipschitz, (l - mean).abs());
    Ok(ConcentrationCheck { expected, bound, applicable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{complete_bipartite, RandomModel};
    use num_traits::One;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn naive(g: &Hypergraph, k: usize) -> BTreeMap<usize, BigUint> {
        let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
        for s in subsets(g.n(), k) {
            *out.entry(g.count_within(s)).or_default() += 1u32;
        }
        out
    }

    #[test]
    fn spec_tables() {
        let t = exact_distribution(&Hypergraph::complete(2, 4), 3).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(3, BigUint::from(4u32))]));
        assert_eq!(t.total, BigUint::from(4u32));

        let k22 = complete_bipartite(2, 2, 2).unwrap();
        let t = exact_distribution(&k22, 2).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(0, 2u32.into()), (1, 4u32.into())]));
        assert_eq!(t.probability(1), q(2, 3));

        // Two of the five 4-subsets contain the edge.
        let single = Hypergraph::from_edge_lists(3, 5, &[vec![1, 2, 3]]).unwrap();
        let t = exact_distribution(&single, 4).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(0, 3u32.into()), (1, 2u32.into())]));
    }

    #[test]
    fn point_probabilities() {
        let e = Hypergraph::empty(2, 6);
        assert!(point_probability(&e, 3, 0).unwrap().is_one());
        assert!(point_probability(&e, 3, 1).unwrap().is_zero());
        let k22 = complete_bipartite(2, 2, 2).unwrap();
        assert_eq!(point_probability(&k22, 2, 1).unwrap(), q(2, 3));
    }

    #[test]
    fn blocked_enumeration_matches_naive() {
        for (n, r, k, seed) in [(20, 2, 8, 1), (20, 3, 8, 2), (19, 4, 9, 3), (22, 2, 11, 4)] {
            let g = Hypergraph::random(n, r, RandomModel::Uniform(0.4), seed).unwrap();
            assert!(block_top(n, k) > 0);
            let t = exact_distribution(&g, k).unwrap();
            assert_eq!(t.counts, naive(&g, k), "n={n} r={r} k={k}");
        }
    }

    #[test]
    fn edge_cases() {
        let g = Hypergraph::complete(3, 5);
        let t = exact_distribution(&g, 0).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(0, 1u32.into())]));
        let t = exact_distribution(&g, 2).unwrap();
        assert_eq!(t.counts, BTreeMap::from([(0, 10u32.into())]));
        assert!(exact_distribution(&g, 6).is_err());
        let err = exact_distribution_with(&g, 2, Budget::new(3)).unwrap_err();
        assert!(matches!(err, Error::Budget { required: 10, limit: 3, .. }));
    }

    #[test]
    fn json_and_csv() {
        let k22 = complete_bipartite(2, 2, 2).unwrap();
        let t = exact_distribution(&k22, 2).unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(text, r#"{"n":4,"k":2,"r":2,"total":"6","counts":{"0":"2","1":"4"}}"#);
        assert_eq!(DistributionTable::from_json(&t.to_json()).unwrap(), t);
        let csv = t.to_csv(&["seed 0".into()]);
        assert_eq!(csv.lines().nth(1), Some("ell,count,probability"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn monte_carlo_examples() {
        let k4 = Hypergraph::complete(2, 6);
        let est = monte_carlo_probability(&k4, 3, 3, 1000, 7).unwrap();
        assert_eq!((est.estimate, est.stderr), (1.0, 0.0));
        let e = Hypergraph::empty(2, 6);
        assert_eq!(monte_carlo_probability(&e, 3, 1, 1000, 7).unwrap().estimate, 0.0);

        let k22 = complete_bipartite(2, 2, 2).unwrap();
        let est = monte_carlo_probability(&k22, 2, 1, 100_000, 11).unwrap();
        assert!((est.estimate - 2.0 / 3.0).abs() <= 4.0 * est.stderr);
        assert!(monte_carlo_probability(&k22, 2, 1, 0, 11).is_err());
    }

    #[test]
    fn extremal_examples() {
        // A random pair of K_4 is always an edge, so K_{2,2}'s 2/3 is not extremal.
        let r = extremal_search(4, 2, 1, ExtremalMode::Exhaustive, 0).unwrap();
        assert!(r.best_probability.is_one());
        assert_eq!(r.witness, Hypergraph::complete(2, 4));
        let r = extremal_search(4, 3, 1, ExtremalMode::Exhaustive, 0).unwrap();
        assert_eq!(exact_distribution(&r.witness, 3).unwrap().probability(1), r.best_probability);
        assert_eq!(r.best_probability, q(1, 1));

        for n in 2..=5 {
            let r = extremal_search(n, n, 1, ExtremalMode::Exhaustive, 0).unwrap();
            assert!(r.best_probability.is_one());
        }
        let i5 = extremal_search(5, 2, 1, ExtremalMode::Exhaustive, 0).unwrap();
        let i6 = extremal_search(6, 2, 1, ExtremalMode::Exhaustive, 0).unwrap();
        assert!(i5.best_probability >= i6.best_probability);

        let hc = extremal_search(6, 3, 1, ExtremalMode::HillClimb { restarts: 8, max_rounds: 20 }, 5).unwrap();
        let ex = extremal_search(6, 3, 1, ExtremalMode::Exhaustive, 0).unwrap();
        assert!(hc.best_probability <= ex.best_probability);
        assert_eq!(exact_distribution(&hc.witness, 3).unwrap().probability(1), hc.best_probability);
        assert!(extremal_search(9, 3, 1, ExtremalMode::Exhaustive, 0).is_err());
    }

    #[test]
    fn concentration_examples() {
        let g = Hypergraph::random(16, 2, RandomModel::Uniform(0.5), 9).unwrap();
        let t = exact_distribution(&g, 8).unwrap();
        let mean = (g.edge_count() as f64) * 56.0 / 240.0;
        let c = concentration_regime_check(&g, 8, mean.round() as usize, 0.1).unwrap();
        assert!(!c.applicable);
        for ell in 0..=28 {
            let c = concentration_regime_check(&g, 8, ell, 0.1).unwrap();
            if c.applicable {
                assert!(t.probability(ell).to_f64().unwrap() <= c.bound);
            }
        }
        let e = Hypergraph::empty(2, 8);
        let c = concentration_regime_check(&e, 4, 1, 0.1).unwrap();
        assert!(c.applicable && c.expected.is_zero() && c.bound >= 0.0);
    }
}
