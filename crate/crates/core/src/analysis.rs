//! Analysis of multilinear polynomials on the slice and on the cube:
//! harmonic projection, homogeneous parts and the `H_t` semigroup, moment
//! and anticoncentration checks, rank via matchings, and average
//! sensitivity of threshold functions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng as _;
use serde::Serialize;

use crate::combin::{binom, bit, bits, low_mask, subsets};
use crate::distribution::{exact_distribution, Budget};
use crate::error::{invalid, precondition, Error, Result};
use crate::exec::{chunk_ranges, map_blocks};
use crate::hypergraph::Hypergraph;
use crate::matching::{greedy_matching, maximum_matching};
use crate::poly::MultilinearPolynomial;
use crate::rng;

/// Largest linear system the harmonic projection will set up.
const MAX_HARMONIC_UNKNOWNS: usize = 4096;

/// The harmonic multilinear polynomial of degree at most
/// `min{deg f, k, n − k}` that agrees with `f` on every point of `BL(n,k)`.
///
/// The coefficients solve the linear system made of the slice-point values
/// and the harmonicity equations `Σ_{i∉J} c_{J∪{i}} = 0`. The system is
/// solved modulo word-sized primes, lifted by CRT and rational
/// reconstruction, and the candidate is accepted only after an exact check.
pub fn harmonic_project(f: &MultilinearPolynomial, n: usize, k: usize) -> Result<MultilinearPolynomial> {
    if f.m() > n {
        return Err(invalid(format!("polynomial has {} variables but n = {n}", f.m())));
    }
    if k > n {
        return Err(invalid(format!("no slice BL({n},{k})")));
    }
    let budget = Budget::from_env();
    budget.check("harmonic projection", binom(n, k))?;
    let deg = f.degree().min(k).min(n - k);
    let basis: Vec<u128> = (0..=deg).flat_map(|d| subsets(n, d)).collect();
    if basis.len() > MAX_HARMONIC_UNKNOWNS {
        return Err(Error::Budget {
            what: "harmonic projection unknowns",
            required: basis.len() as u128,
            limit: MAX_HARMONIC_UNKNOWNS as u128,
        });
    }
    let points: Vec<u128> = subsets(n, k).collect();
    let denom = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let scale = BigRational::from_integer(denom.clone());
    let rhs: Vec<BigInt> = points.iter().map(|&x| (f.eval_bits(x) * &scale).to_integer()).collect();

    let index: HashMap<u128, usize> = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    // Each row lists the columns with coefficient 1; the last entry of the
    // augmented row is the right-hand side.
    let mut rows: Vec<(Vec<usize>, usize)> = Vec::new();
    for (pi, &x) in points.iter().enumerate() {
        let cols = basis.iter().enumerate().filter(|(_, &m)| m & !x == 0).map(|(i, _)| i).collect();
        rows.push((cols, pi + 1));
    }
    for &j in basis.iter().filter(|m| (m.count_ones() as usize) < deg) {
        let cols = (0..n).filter(|&i| j & bit(i) == 0).map(|i| index[&(j | bit(i))]).collect();
        rows.push((cols, 0));
    }

    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); basis.len()];
    for p in primes_below(1u64 << 62).take(64) {
        let Some(sol) = solve_mod(&rows, &rhs, basis.len(), p) else {
            continue;
        };
        let pb = BigInt::from(p);
        let inv = BigInt::from(modpow(mod_big(&modulus, p), p - 2, p));
        for (r, s) in residues.iter_mut().zip(sol) {
            // r ≡ r (mod M), r ≡ s (mod p).
            let diff = (BigInt::from(s) - &*r).mod_floor(&pb);
            let t = (diff * &inv).mod_floor(&pb);
            *r += &modulus * t;
        }
        modulus *= &pb;
        let candidate: Option<Vec<BigRational>> = residues.iter().map(|r| rational_reconstruct(r, &modulus)).collect();
        if let Some(coeffs) = candidate {
            let g = MultilinearPolynomial::from_terms(
                n,
                basis.iter().zip(coeffs).map(|(&m, c)| (m, c / BigRational::from_integer(denom.clone()))),
            )?;
            if g.is_harmonic() && points.iter().all(|&x| g.eval_bits(x) == f.eval_bits(x)) {
                return Ok(g);
            }
        }
    }
    Err(Error::Degenerate("harmonic projection did not converge".into()))
}

fn mod_big(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced below p")
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn modpow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &b in &BASES {
        let mut x = modpow(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    (1..start / 2).map(move |i| start - 2 * i + 1).filter(|&c| is_prime(c))
}

/// Unique solution of the sparse 0/1 system modulo `p`, or `None` when the
/// reduced system is singular or inconsistent.
fn solve_mod(rows: &[(Vec<usize>, usize)], rhs: &[BigInt], unknowns: usize, p: u64) -> Option<Vec<u64>> {
    let width = unknowns + 1;
    let mut mat: Vec<Vec<u64>> = rows
        .iter()
        .map(|(cols, b)| {
            let mut row = vec![0u64; width];
            for &c in cols {
                row[c] = 1;
            }
            if *b > 0 {
                row[unknowns] = mod_big(&rhs[b - 1], p);
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..unknowns {
        let pivot = (rank..mat.len()).find(|&r| mat[r][col] != 0)?;
        mat.swap(rank, pivot);
        let inv = modpow(mat[rank][col], p - 2, p);
        for v in mat[rank][col..].iter_mut() {
            *v = mulmod(*v, inv, p);
        }
        let pivot_row = mat[rank].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for c in col..width {
                if pivot_row[c] != 0 {
                    row[c] = (row[c] + p - mulmod(factor, pivot_row[c], p)) % p;
                }
            }
        }
        rank += 1;
    }
    if mat[rank..].iter().any(|row| row[unknowns] != 0) {
        return None;
    }
    Some(mat[..unknowns].iter().map(|row| row[unknowns]).collect())
}

/// Smallest-height rational congruent to `u` modulo `m`, if one exists
/// with numerator and denominator at most `sqrt(m/2)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// `g^{=0}, g^{=1}, …, g^{=deg g}`.
pub fn homogeneous_parts(g: &MultilinearPolynomial) -> Vec<MultilinearPolynomial> {
    (0..=g.degree()).map(|d| g.homogeneous_part(d)).collect()
}

/// Eigenvalue rate of the degree-`i` part: `2i(n+1−i)/(n(n−1))`.
pub fn ht_rate(n: usize, i: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    2.0 * i as f64 * (n + 1 - i) as f64 / (n as f64 * (n - 1) as f64)
}

/// `H_t g`, kept as exact homogeneous parts with real scale factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledParts {
    pub n: usize,
    pub t: f64,
    /// `(degree, exp(−t·rate), part)`.
    pub parts: Vec<(usize, f64, MultilinearPolynomial)>,
}

impl ScaledParts {
    pub fn eval_bits(&self, x: u128) -> f64 {
        neumaier_sum(self.parts.iter().map(|(_, s, p)| s * p.eval_bits(x).to_f64().unwrap_or(f64::NAN)))
    }
}

pub fn apply_ht(g: &MultilinearPolynomial, t: f64, n: usize) -> ScaledParts {
    let parts = homogeneous_parts(g)
        .into_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| (i, (-t * ht_rate(n, i)).exp(), p))
        .collect();
    ScaledParts { n, t, parts }
}

/// Compensated summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `ρ = −2/(n ln 2 ln(p(1−p)))`.
pub fn hypercontractive_rho(n: usize, p: f64) -> f64 {
    -2.0 / (n as f64 * std::f64::consts::LN_2 * (p * (1.0 - p)).ln())
}

/// Smallest `t` with `q − 1 ≤ e^{2ρt}`.
pub fn minimal_t(n: usize, p: f64, q: f64) -> f64 {
    ((q - 1.0).ln() / (2.0 * hypercontractive_rho(n, p))).max(0.0)
}

/// Relative tolerance on `E|H_t g|^q ^{2/q} ≤ E g²`.
pub const HYPERCONTRACTIVE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypercontractivityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub rho: f64,
    pub hypothesis_ok: bool,
    /// `rhs − lhs`.
    pub margin: f64,
}

/// Compares `E[|H_t g(ξ)|^q]^{2/q}` with `E[g(ξ)²]` over all of `BL(n, pn)`.
/// `E[g²]` is exact; the `q`-th moment uses compensated double precision.
pub fn hypercontractivity_check(g: &MultilinearPolynomial, n: usize, p: f64, t: f64, q: f64) -> Result<HypercontractivityReport> {
    let k = (p * n as f64).round();
    if !(p > 0.0 && p < 1.0) || (p * n as f64 - k).abs() > 1e-9 {
        return Err(precondition(format!("p n must be an integer with 0 < p < 1 (p = {p}, n = {n})")));
    }
    if !g.is_harmonic() {
        return Err(precondition("hypercontractivity needs a harmonic polynomial"));
    }
    if q < 2.0 || t < 0.0 {
        return Err(precondition("need q >= 2 and t >= 0"));
    }
    let k = k as usize;
    Budget::from_env().check("hypercontractivity enumeration", binom(n, k))?;
    let rho = hypercontractive_rho(n, p);
    let hypothesis_ok = q - 1.0 <= (2.0 * rho * t).exp() * (1.0 + 1e-12);
    let ht = apply_ht(g, t, n);
    let points: Vec<u128> = subsets(n, k).collect();
    let count = BigInt::from(points.len());
    let second: BigRational = points.iter().map(|&x| {
        let v = g.eval_bits(x);
        &v * &v
    }).sum::<BigRational>() / BigRational::from_integer(count);
    let rhs = second.to_f64().unwrap_or(f64::NAN);
    let power = |v: f64| if q.fract() == 0.0 { v.abs().powi(q as i32) } else { v.abs().powf(q) };
    let moment = neumaier_sum(points.iter().map(|&x| power(ht.eval_bits(x)))) / points.len() as f64;
    let lhs = moment.powf(2.0 / q);
    let holds = lhs <= rhs + HYPERCONTRACTIVE_TOL * rhs;
    Ok(HypercontractivityReport { lhs, rhs, holds, rho, hypothesis_ok, margin: rhs - lhs })
}

/// Harmonic projection onto `BL(n,k)` of a random polynomial with integer
/// coefficients in `-3..=3` on every set of size at most `degree`.
pub fn random_harmonic(n: usize, k: usize, degree: usize, seed: u64) -> Result<MultilinearPolynomial> {
    let mut rng = rng::stream(seed, 0);
    let terms: Vec<(u128, BigRational)> = (0..=degree.min(n))
        .flat_map(|d| subsets(n, d))
        .map(|m| (m, BigRational::from_integer(rng.random_range(-3i64..=3).into())))
        .collect();
    harmonic_project(&MultilinearPolynomial::from_terms(n, terms)?, n, k)
}

/// Exact values of `f` on every point of `BL(n,k)`.
pub fn slice_values(f: &MultilinearPolynomial, n: usize, k: usize) -> Result<Vec<BigRational>> {
    if f.m() > n || k > n {
        return Err(invalid(format!("polynomial on {} variables does not live on BL({n},{k})", f.m())));
    }
    Budget::from_env().check("slice enumeration", binom(n, k))?;
    Ok(subsets(n, k).map(|x| f.eval_bits(x)).collect())
}

/// `E Z⁴ / (E Z²)²` for `Z = f(ξ) − E f(ξ)` on `BL(n,k)`.
pub fn fourth_moment_ratio(f: &MultilinearPolynomial, n: usize, k: usize) -> Result<BigRational> {
    fourth_moment_of(&slice_values(f, n, k)?)
}

fn fourth_moment_of(values: &[BigRational]) -> Result<BigRational> {
    let count = BigRational::from_integer(BigInt::from(values.len()));
    let mean = values.iter().sum::<BigRational>() / &count;
    let (mut m2, mut m4) = (BigRational::zero(), BigRational::zero());
    for v in values {
        let z = v - &mean;
        let z2 = &z * &z;
        m4 += &z2 * &z2;
        m2 += z2;
    }
    if m2.is_zero() {
        return Err(Error::Degenerate("zero variance".into()));
    }
    // Both moments share the 1/count normalization once squared out.
    Ok(m4 * count / (&m2 * &m2))
}

fn max_point_probability(values: &[BigRational]) -> BigRational {
    let mut freq: HashMap<&BigRational, usize> = HashMap::new();
    for v in values {
        *freq.entry(v).or_default() += 1;
    }
    let top = freq.values().copied().max().unwrap_or(0);
    BigRational::new(top.into(), values.len().max(1).into())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourthMomentReport {
    pub b: BigRational,
    pub max_point_prob: BigRational,
    /// `max_ℓ Pr(Z = ℓ) ≤ 1 − 1/(2^{4/3} b)`, decided exactly.
    pub holds: bool,
}

/// Checks `Pr(Z ≠ ℓ) ≥ 1/(2^{4/3} b)` for every `ℓ`, with `b` the fourth
/// moment ratio, via the equivalent `16((1 − P)b)³ ≥ 1`.
pub fn fourth_moment_anticoncentration(f: &MultilinearPolynomial, n: usize, k: usize) -> Result<FourthMomentReport> {
    let values = slice_values(f, n, k)?;
    let b = fourth_moment_of(&values)?;
    let max_point_prob = max_point_probability(&values);
    let slack = (BigRational::one() - &max_point_prob) * &b;
    let holds = BigRational::from_integer(16.into()) * &slack * &slack * &slack >= BigRational::one();
    Ok(FourthMomentReport { b, max_point_prob, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundLabel {
    /// The explicit constant is established for induced edge counts.
    InducedCount,
    /// Same constant applied to an arbitrary polynomial.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakAnticoncentration {
    /// `1 − 2^{−4/3}·3^{−16d}` as a double (rounds to 1 for large `d`).
    pub bound: f64,
    pub exact_max_point_prob: BigRational,
    /// `max_ℓ Pr = ℓ ≤ 1 − 2^{−4/3}3^{−16d}`, decided exactly.
    pub holds: bool,
    pub degree: usize,
    pub label: BoundLabel,
}

fn weak_bound(max_point_prob: BigRational, d: usize, label: BoundLabel) -> WeakAnticoncentration {
    let eps = 2f64.powf(-4.0 / 3.0) * 3f64.powi(-16 * d as i32);
    let gap = BigRational::one() - &max_point_prob;
    let lhs = BigRational::from_integer(16.into())
        * &gap
        * &gap
        * &gap
        * BigRational::from_integer(BigInt::from(3u32).pow(48 * d as u32));
    WeakAnticoncentration { bound: 1.0 - eps, holds: lhs >= BigRational::one(), exact_max_point_prob: max_point_prob, degree: d, label }
}

/// Weak anticoncentration of `f(ξ)` on `BL(n, n/2)` with `d = deg f`.
pub fn weak_anticoncentration_bound(f: &MultilinearPolynomial, n: usize) -> Result<WeakAnticoncentration> {
    if n % 2 == 1 {
        return Err(precondition("weak anticoncentration is stated on BL(n, n/2)"));
    }
    let values = slice_values(f, n, n / 2)?;
    if values.iter().all(|v| *v == values[0]) {
        return Err(Error::Degenerate("f is constant on the slice".into()));
    }
    Ok(weak_bound(max_point_probability(&values), f.degree(), BoundLabel::Heuristic))
}

/// The same bound for `X_{G,k}` on `2k` vertices with `d = r`.
pub fn weak_anticoncentration_for_graph(g: &Hypergraph, k: usize) -> Result<WeakAnticoncentration> {
    if g.n() != 2 * k {
        return Err(precondition("the graph must have 2k vertices"));
    }
    let table = exact_distribution(g, k)?;
    if table.counts.len() < 2 {
        return Err(Error::Degenerate("X is constant".into()));
    }
    Ok(weak_bound(table.max_point_probability().1, g.r(), BoundLabel::InducedCount))
}

/// A matching among the index sets of the nonzero degree-`d` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub d: usize,
    pub matching: Vec<u128>,
    /// True when the matching is known to be maximum.
    pub exact: bool,
}

impl RankCertificate {
    pub fn rank_lower_bound(&self) -> usize {
        self.matching.len()
    }

    /// The matched sets as 1-based index lists.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.matching.iter().map(|&m| bits(m).map(|i| i + 1).collect()).collect()
    }
}

fn sorted_sets(f: &MultilinearPolynomial, d: usize, keep: impl Fn(&BigRational) -> bool) -> Vec<u128> {
    f.terms_sorted()
        .into_iter()
        .filter(|(idx, c)| idx.len() == d && keep(c))
        .map(|(idx, _)| idx.iter().fold(0u128, |m, &i| m | bit(i - 1)))
        .collect()
}

/// Rank of `f` in degree `d`: exact maximum matching for `d ≤ 2`, greedy
/// maximal matching in lexicographic order for `d ≥ 3`.
pub fn compute_rank(f: &MultilinearPolynomial, d: usize) -> RankCertificate {
    if d == 0 {
        return RankCertificate { d, matching: Vec::new(), exact: true };
    }
    let sets = sorted_sets(f, d, |_| true);
    match d {
        1 => RankCertificate { d, matching: sets, exact: true },
        2 => {
            let edges: Vec<(usize, usize)> =
                sets.iter().map(|&m| (m.trailing_zeros() as usize, 127 - m.leading_zeros() as usize)).collect();
            let matching = maximum_matching(f.m().max(1), &edges).into_iter().map(|(u, v)| bit(u) | bit(v)).collect();
            RankCertificate { d, matching, exact: true }
        }
        _ => RankCertificate { d, matching: greedy_matching(&sets), exact: false },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FallbackRank {
    pub r: usize,
    /// `m_d`, the largest degree-`d` coefficient in absolute value.
    pub m_d: BigRational,
    /// Greedy matching of `H′(r)`, of size at least `r`.
    pub matching: Vec<u128>,
}

/// The `H′` fallback: the largest `r` such that the `(d−1)`-sets `S` with
/// `|f_S| ≥ r·m_d` contain a greedy matching of size `r`. When `m_d = 0` the
/// threshold becomes `|f_S| > 0`. Greedy matching size is not monotone in
/// `r`, so every candidate `r` is tried.
pub fn fallback_rank(f: &MultilinearPolynomial, d: usize) -> FallbackRank {
    let m_d = f.max_abs_coefficient(d);
    if d == 0 {
        return FallbackRank { r: 0, m_d, matching: Vec::new() };
    }
    let candidates = sorted_sets(f, d - 1, |c| !c.is_zero()).len();
    let mut best = FallbackRank { r: 0, m_d: m_d.clone(), matching: Vec::new() };
    for r in 1..=candidates {
        let threshold = &m_d * BigRational::from_integer(r.into());
        let sets = sorted_sets(f, d - 1, |c| if m_d.is_zero() { !c.is_zero() } else { c.abs() >= threshold });
        let matching = greedy_matching(&sets);
        if matching.len() >= r {
            best = FallbackRank { r, m_d: m_d.clone(), matching };
        }
    }
    best
}

/// Integer-valued evaluation of `f` on sign vectors.
struct SignEvaluator {
    terms: Vec<(u128, i64)>,
}

impl SignEvaluator {
    fn new(f: &MultilinearPolynomial) -> Result<SignEvaluator> {
        let (terms, _) = f.integer_form().ok_or_else(|| invalid("coefficients too large for fast evaluation"))?;
        Ok(SignEvaluator { terms })
    }

    fn eval(&self, neg: u128) -> i64 {
        self.terms.iter().map(|&(m, c)| if (m & neg).count_ones() & 1 == 1 { -c } else { c }).sum()
    }

    fn spread(&self) -> i64 {
        self.terms.iter().map(|&(_, c)| c.abs()).sum()
    }
}

/// Value histogram; dense when the value range is small.
struct Histogram {
    offset: i64,
    dense: Vec<u64>,
    sparse: HashMap<i64, u64>,
}

impl Histogram {
    fn new(spread: i64) -> Histogram {
        let dense = if spread <= 1 << 20 { vec![0; 2 * spread as usize + 1] } else { Vec::new() };
        Histogram { offset: spread, dense, sparse: HashMap::new() }
    }

    fn add(&mut self, v: i64) {
        if self.dense.is_empty() {
            *self.sparse.entry(v).or_default() += 1;
        } else {
            self.dense[(v + self.offset) as usize] += 1;
        }
    }

    fn max(&self) -> u64 {
        self.dense.iter().copied().max().unwrap_or(0).max(self.sparse.values().copied().max().unwrap_or(0))
    }

    fn merge(&mut self, other: Histogram) {
        for (a, b) in self.dense.iter_mut().zip(other.dense) {
            *a += b;
        }
        for (v, c) in other.sparse {
            *self.sparse.entry(v).or_default() += c;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MnvReport {
    pub rank: usize,
    pub max_point_prob: f64,
    /// `√rank · max_point_prob`.
    pub scaled: f64,
    pub trials: u64,
}

const MNV_BLOCK: u64 = 1 << 14;

/// Empirical `max_ℓ Pr(f(γ) = ℓ)` over uniform `γ ∈ {−1,1}^m`, paired with
/// the rank of `f` in its top degree.
pub fn mnv_rank_report(f: &MultilinearPolynomial, trials: u64, seed: u64) -> Result<MnvReport> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let eval = SignEvaluator::new(f)?;
    let mask = low_mask(f.m());
    let ranges = chunk_ranges(trials, MNV_BLOCK);
    let parts = map_blocks(ranges.len(), |b| {
        let (start, end) = ranges[b];
        let mut rng = rng::stream(seed, b as u64);
        let mut hist = Histogram::new(eval.spread());
        for _ in start..end {
            hist.add(eval.eval(rng.random::<u128>() & mask));
        }
        hist
    });
    let mut hist = Histogram::new(eval.spread());
    for part in parts {
        hist.merge(part);
    }
    let rank = compute_rank(f, f.degree()).rank_lower_bound();
    let max_point_prob = hist.max() as f64 / trials as f64;
    Ok(MnvReport { rank, max_point_prob, scaled: (rank as f64).sqrt() * max_point_prob, trials })
}

/// Random homogeneous quadratic with ±1 coefficients and rank exactly `rank`.
///
/// Variables `0..rank` are centres and variable `rank + i` is a private leaf
/// of centre `i`. Every other pair touching a centre is an edge with
/// probability 1/2. The centres cover every edge and the private leaves give
/// a matching of size `rank`, so the maximum matching has size `rank`.
/// There are `3 · rank` variables.
pub fn random_rank_quadratic(rank: usize, seed: u64) -> Result<MultilinearPolynomial> {
    let m = 3 * rank;
    if rank == 0 || m > 128 {
        return Err(invalid(format!("rank must be in 1..=42, got {rank}")));
    }
    let mut rng = rng::stream(seed, 0);
    let mut terms: Vec<(i64, [usize; 2])> = Vec::new();
    for c in 0..rank {
        for v in c + 1..m {
            if v == rank + c || rng.random_bool(0.5) {
                terms.push((if rng.random_bool(0.5) { 1 } else { -1 }, [c + 1, v + 1]));
            }
        }
    }
    let refs: Vec<(i64, &[usize])> = terms.iter().map(|(c, e)| (*c, &e[..])).collect();
    MultilinearPolynomial::from_int_terms(m, &refs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MnvBucket {
    pub rank: usize,
    /// Per-polynomial empirical maximum point probabilities, in sample order.
    pub max_point_probs: Vec<f64>,
    pub median: f64,
}

/// For each rank, samples `per_bucket` polynomials from
/// [`random_rank_quadratic`] and estimates their maximum point probability
/// from `trials` sign vectors each.
pub fn mnv_trend(ranks: &[usize], per_bucket: usize, trials: u64, seed: u64) -> Result<Vec<MnvBucket>> {
    if per_bucket == 0 {
        return Err(invalid("at least one polynomial per bucket is required"));
    }
    let mut out = Vec::with_capacity(ranks.len());
    for (b, &rank) in ranks.iter().enumerate() {
        let mut probs = Vec::with_capacity(per_bucket);
        for i in 0..per_bucket {
            let mut gen = rng::stream(seed, (b as u64) << 32 | i as u64);
            let f = random_rank_quadratic(rank, gen.random())?;
            probs.push(mnv_rank_report(&f, trials, gen.random())?.max_point_prob);
        }
        let mut sorted = probs.clone();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { (sorted[mid - 1] + sorted[mid]) / 2.0 };
        out.push(MnvBucket { rank, max_point_probs: probs, median });
    }
    Ok(out)
}

/// Exact `max_ℓ Pr(f(γ) = ℓ)` by enumerating `{−1,1}^m`.
pub fn exact_sign_max_point_prob(f: &MultilinearPolynomial) -> Result<BigRational> {
    let m = f.m();
    Budget::from_env().check("sign-vector enumeration", 1u128 << m.min(127))?;
    let eval = SignEvaluator::new(f)?;
    let total = 1u64 << m;
    let ranges = chunk_ranges(total, 1 << 16);
    let parts = map_blocks(ranges.len(), |b| {
        let (start, end) = ranges[b];
        let mut hist = Histogram::new(eval.spread());
        for neg in start..end {
            hist.add(eval.eval(neg as u128));
        }
        hist
    });
    let mut hist = Histogram::new(eval.spread());
    for part in parts {
        hist.merge(part);
    }
    Ok(BigRational::new(hist.max().into(), total.into()))
}

/// Largest `m` accepted by [`average_sensitivity`].
pub const MAX_SENSITIVITY_VARS: usize = 24;

/// Average sensitivity of `x ↦ 1[p(x) > 0]` on `{−1,1}^m`; inputs with
/// `p(x) = 0` map to 0.
pub fn average_sensitivity(p: &MultilinearPolynomial, m: usize) -> Result<BigRational> {
    let m = m.max(p.m());
    if m > MAX_SENSITIVITY_VARS {
        return Err(Error::Budget {
            what: "average sensitivity enumeration",
            required: 1u128 << m.min(127),
            limit: 1u128 << MAX_SENSITIVITY_VARS,
        });
    }
    let eval = SignEvaluator::new(p)?;
    let total = 1u64 << m;
    let ranges = chunk_ranges(total, 1 << 16);
    let values: Vec<bool> = map_blocks(ranges.len(), |b| {
        let (start, end) = ranges[b];
        (start..end).map(|neg| eval.eval(neg as u128) > 0).collect::<Vec<bool>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let flips: u64 = map_blocks(ranges.len(), |b| {
        let (start, end) = ranges[b];
        let mut count = 0u64;
        for x in start..end {
            for i in 0..m {
                let y = x | 1 << i;
                if y != x && values[x as usize] != values[y as usize] {
                    count += 1;
                }
            }
        }
        count
    })
    .into_iter()
    .sum();
    // Each differing pair is seen once; it counts for both endpoints.
    Ok(BigRational::new(BigInt::from(2 * flips), BigInt::from(total)))
}
