//! The slice `BL(n,k)` and its coupling with a random permutation and
//! independent signs.
//!
//! Permutations are stored 0-based: `sigma[i]` is the image of `i`. Sign
//! vectors are passed around as the mask `neg` of coordinates equal to −1.
//! Given `(σ, γ)` with `h = n/2`, position `σ(i)` is selected when `γ_i = 1`
//! and position `σ(i + h)` when `γ_i = −1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::combin::{bit, bits, low_mask, subsets};
use crate::distribution::{Budget, EdgeCounter};
use crate::error::{invalid, precondition, Result};
use crate::hypergraph::Hypergraph;
use crate::poly::{walsh_interpolate, MultilinearPolynomial};
use crate::rng;

/// A 0/1 sequence of length `n`, stored as the mask of its ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SliceVector {
    pub n: usize,
    pub ones: u128,
}

impl SliceVector {
    pub fn k(&self) -> usize {
        self.ones.count_ones() as usize
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.n).map(|i| (self.ones >> i & 1) as u8).collect()
    }
}

/// Uniform sample from `BL(n,k)`.
pub fn sample_slice(n: usize, k: usize, seed: u64) -> Result<SliceVector> {
    if k > n || n > 128 {
        return Err(invalid(format!("no slice BL({n},{k})")));
    }
    let mut rng = rng::stream(seed, 0);
    Ok(SliceVector { n, ones: rng::random_subset_mask(&mut rng, n, k) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSample {
    pub sigma: Vec<usize>,
    pub gamma: Vec<i8>,
    pub xi: SliceVector,
}

#[derive(Serialize, Deserialize)]
struct CouplingJson {
    sigma: Vec<usize>,
    gamma: Vec<i8>,
}

impl CouplingSample {
    /// Validates `sigma` (0-based) and `gamma` and derives `ξ`.
    pub fn new(sigma: Vec<usize>, gamma: Vec<i8>) -> Result<CouplingSample> {
        check_permutation(&sigma)?;
        let n = sigma.len();
        if n % 2 == 1 {
            return Err(precondition(format!("the coupling needs even n, got {n}")));
        }
        if gamma.len() != n / 2 || gamma.iter().any(|&g| g != 1 && g != -1) {
            return Err(invalid(format!("gamma must have {} entries, each ±1", n / 2)));
        }
        let neg = neg_mask(&gamma);
        let xi = SliceVector { n, ones: coupled_xi(&sigma, neg) };
        Ok(CouplingSample { sigma, gamma, xi })
    }

    pub fn neg(&self) -> u128 {
        neg_mask(&self.gamma)
    }

    /// `{"sigma":[…1-based…],"gamma":[±1…]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CouplingJson { sigma: self.sigma.iter().map(|s| s + 1).collect(), gamma: self.gamma.clone() })
            .expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<CouplingSample> {
        let raw: CouplingJson =
            serde_json::from_value(value.clone()).map_err(|e| invalid(format!("coupling sample: {e}")))?;
        if raw.sigma.contains(&0) {
            return Err(invalid("sigma entries are 1-based"));
        }
        CouplingSample::new(raw.sigma.iter().map(|s| s - 1).collect(), raw.gamma)
    }
}

/// Parses a 1-based permutation from JSON: either a bare array or an object
/// with a `sigma` field.
pub fn permutation_from_json(value: &serde_json::Value) -> Result<Vec<usize>> {
    let arr = value.get("sigma").unwrap_or(value);
    let one_based: Vec<usize> =
        serde_json::from_value(arr.clone()).map_err(|e| invalid(format!("permutation: {e}")))?;
    if one_based.contains(&0) {
        return Err(invalid("permutation entries are 1-based"));
    }
    let sigma: Vec<usize> = one_based.iter().map(|s| s - 1).collect();
    check_permutation(&sigma)?;
    Ok(sigma)
}

pub fn check_permutation(sigma: &[usize]) -> Result<()> {
    let n = sigma.len();
    if n > 128 {
        return Err(invalid("permutations are limited to 128 points"));
    }
    let seen = sigma.iter().fold(0u128, |m, &s| if s < n { m | bit(s) } else { m });
    if seen != low_mask(n) {
        return Err(invalid("not a permutation"));
    }
    Ok(())
}

fn neg_mask(gamma: &[i8]) -> u128 {
    gamma.iter().enumerate().filter(|(_, &g)| g == -1).fold(0u128, |m, (i, _)| m | bit(i))
}

/// Ones of `ξ` for permutation `sigma` and sign mask `neg`.
pub fn coupled_xi(sigma: &[usize], neg: u128) -> u128 {
    let h = sigma.len() / 2;
    (0..h).fold(0u128, |m, i| m | bit(if neg & bit(i) == 0 { sigma[i] } else { sigma[i + h] }))
}

pub fn random_permutation(rng: &mut rng::Rng, n: usize) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    sigma
}

/// Uniform `σ` and independent uniform signs.
pub fn sample_coupled(n: usize, seed: u64) -> Result<CouplingSample> {
    if n % 2 == 1 {
        return Err(precondition(format!("the coupling needs even n, got {n}")));
    }
    let mut rng = rng::stream(seed, 0);
    let sigma = random_permutation(&mut rng, n);
    let gamma = (0..n / 2).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    CouplingSample::new(sigma, gamma)
}

/// Number of edges of `g` induced by the `ξ` of `(σ, γ)`.
pub fn evaluate_coupled(g: &Hypergraph, sigma: &[usize], neg: u128) -> Result<usize> {
    check_coupling_shape(g, sigma)?;
    Ok(g.count_within(coupled_xi(sigma, neg)))
}

fn check_coupling_shape(g: &Hypergraph, sigma: &[usize]) -> Result<()> {
    check_permutation(sigma)?;
    if sigma.len() != g.n() {
        return Err(invalid(format!("permutation has {} points but the graph has {}", sigma.len(), g.n())));
    }
    if g.n() % 2 == 1 {
        return Err(precondition(format!("the coupling needs even n, got {}", g.n())));
    }
    Ok(())
}

/// Coefficients of `γ^I` for `|I| ∈ {d, d−1}` (with `d = r`) of the coupled
/// polynomial `X(γ)` given `σ`, carrying the `2^{−d}` normalization:
/// `g_I = 2^{−d} Σ_b (−1)^{|b|} a({σ(i_j + b_j h)})`, where `a(R)` counts
/// the edges containing `R`. Lower-degree coefficients are not produced.
pub fn extract_coefficients(g: &Hypergraph, sigma: &[usize]) -> Result<MultilinearPolynomial> {
    check_coupling_shape(g, sigma)?;
    let d = g.r();
    let h = g.n() / 2;
    let mut low_degrees: HashMap<u128, i64> = HashMap::new();
    for &e in g.edges() {
        for v in bits(e) {
            *low_degrees.entry(e & !bit(v)).or_default() += 1;
        }
    }
    let a = |set: u128| -> i64 {
        match set.count_ones() as usize {
            c if c == d => g.contains(set) as i64,
            _ => low_degrees.get(&set).copied().unwrap_or(0),
        }
    };
    let denom = BigInt::from(1u64) << d;
    let mut out = MultilinearPolynomial::zero(h);
    for q in [d, d - 1] {
        for index in subsets(h, q) {
            let idx: Vec<usize> = bits(index).collect();
            let mut total = 0i64;
            for b in 0..1usize << q {
                let r = idx.iter().enumerate().fold(0u128, |m, (j, &i)| m | bit(sigma[i + (b >> j & 1) * h]));
                let sign = if b.count_ones() % 2 == 1 { -1 } else { 1 };
                total += sign * a(r);
            }
            out.add_term(index, BigRational::new(total.into(), denom.clone()));
        }
    }
    Ok(out)
}

/// Rescales 2^{-d}-normalized coefficients of degree-`d` data by `2^d`,
/// giving the integer combinations of degrees used in the 3-graph analysis.
pub fn unnormalized(p: &MultilinearPolynomial, d: usize) -> MultilinearPolynomial {
    p.scale(&BigRational::from_integer(BigInt::from(1u64) << d))
}

/// The full coupled polynomial, by interpolation over all `2^{n/2}` sign
/// vectors.
pub fn coupled_polynomial(g: &Hypergraph, sigma: &[usize]) -> Result<MultilinearPolynomial> {
    check_coupling_shape(g, sigma)?;
    let h = g.n() / 2;
    Budget::from_env().check("coupled polynomial interpolation", 1u128 << h.min(127))?;
    let counter = EdgeCounter::new(g);
    let values: Vec<i64> = (0..1u128 << h).map(|neg| counter.count(coupled_xi(sigma, neg)) as i64).collect();
    Ok(walsh_interpolate(h, &values))
}

/// `exp(−t²/(8 Σ c_i²))`, the tail bound for `f(ξ) − E f(ξ) ≥ t` when
/// flipping coordinate `i` changes `f` by at most `c_i`.
pub fn concentration_tail_bound(lipschitz: &[f64], t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let s: f64 = lipschitz.iter().map(|c| c * c).sum();
    if s == 0.0 {
        return 0.0;
    }
    (-t * t / (8.0 * s)).exp()
}
