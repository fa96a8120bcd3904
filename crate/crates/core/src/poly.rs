//! Sparse multilinear polynomials with exact rational coefficients.
//!
//! Monomials are `u128` masks over variables `0..m`; the text format and
//! [`MultilinearPolynomial::terms_sorted`] use 1-based indices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combin::{bit, bits};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultilinearPolynomial {
    m: usize,
    coeffs: BTreeMap<u128, BigRational>,
}

impl MultilinearPolynomial {
    pub fn zero(m: usize) -> MultilinearPolynomial {
        MultilinearPolynomial { m, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: BigRational) -> MultilinearPolynomial {
        let mut p = MultilinearPolynomial::zero(m);
        p.add_term(0, c);
        p
    }

    /// Builds from `(monomial mask, coefficient)` pairs, summing repeats.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (u128, BigRational)>) -> Result<MultilinearPolynomial> {
        let mut p = MultilinearPolynomial::zero(m);
        for (mask, c) in terms {
            if m < 128 && mask >> m != 0 {
                return Err(invalid(format!("monomial {mask:#b} uses a variable beyond {m}")));
            }
            p.add_term(mask, c);
        }
        Ok(p)
    }

    /// Integer-coefficient convenience constructor with 1-based index lists.
    pub fn from_int_terms(m: usize, terms: &[(i64, &[usize])]) -> Result<MultilinearPolynomial> {
        let mut out = Vec::with_capacity(terms.len());
        for &(c, idx) in terms {
            out.push((index_mask(idx, m)?, BigRational::from_integer(c.into())));
        }
        MultilinearPolynomial::from_terms(m, out)
    }

    pub fn add_term(&mut self, mask: u128, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(mask).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, mask: u128) -> BigRational {
        self.coeffs.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u128, &BigRational)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    /// Terms ordered by degree, then lexicographically by 1-based indices.
    pub fn terms_sorted(&self) -> Vec<(Vec<usize>, BigRational)> {
        let mut out: Vec<(Vec<usize>, BigRational)> =
            self.coeffs.iter().map(|(&m, c)| (bits(m).map(|i| i + 1).collect(), c.clone())).collect();
        out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Largest `|I|` with a nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// `f^{=d}`.
    pub fn homogeneous_part(&self, d: usize) -> MultilinearPolynomial {
        MultilinearPolynomial {
            m: self.m,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.count_ones() as usize == d).map(|(&m, c)| (m, c.clone())).collect(),
        }
    }

    /// `m_d`: the largest `|f_S|` over `|S| = d`.
    pub fn max_abs_coefficient(&self, d: usize) -> BigRational {
        self.coeffs
            .iter()
            .filter(|(m, _)| m.count_ones() as usize == d)
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Value at the 0/1 point whose ones are `x`.
    pub fn eval_bits(&self, x: u128) -> BigRational {
        self.coeffs.iter().filter(|(&m, _)| m & !x == 0).map(|(_, c)| c).sum()
    }

    /// Value at the ±1 point where the variables in `neg` are −1.
    pub fn eval_signs(&self, neg: u128) -> BigRational {
        self.coeffs
            .iter()
            .map(|(&m, c)| if (m & neg).count_ones() % 2 == 1 { -c.clone() } else { c.clone() })
            .sum()
    }

    pub fn scale(&self, factor: &BigRational) -> MultilinearPolynomial {
        let mut out = MultilinearPolynomial::zero(self.m);
        for (&m, c) in &self.coeffs {
            out.add_term(m, c * factor);
        }
        out
    }

    pub fn add(&self, other: &MultilinearPolynomial) -> MultilinearPolynomial {
        let mut out = self.clone();
        out.m = self.m.max(other.m);
        for (&m, c) in &other.coeffs {
            out.add_term(m, c.clone());
        }
        out
    }

    /// `Σ_i ∂f/∂x_i` as a formal polynomial.
    pub fn derivative_sum(&self) -> MultilinearPolynomial {
        let mut out = MultilinearPolynomial::zero(self.m);
        for (&m, c) in &self.coeffs {
            for i in bits(m) {
                out.add_term(m & !bit(i), c.clone());
            }
        }
        out
    }

    pub fn is_harmonic(&self) -> bool {
        self.derivative_sum().is_zero()
    }

    /// Integer form: `f = terms / denom` with every numerator fitting `i64`.
    pub fn integer_form(&self) -> Option<(Vec<(u128, i64)>, BigInt)> {
        let denom = self.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (&m, c) in &self.coeffs {
            let v = (c * BigRational::from_integer(denom.clone())).to_integer();
            terms.push((m, v.to_i64()?));
        }
        Some((terms, denom))
    }

    pub fn parse_text(text: &str) -> Result<MultilinearPolynomial> {
        let mut terms = Vec::new();
        let mut m = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let coeff = parse_rational(toks.next().unwrap_or_default())
                .ok_or_else(|| Error::Parse { line: line_no, message: format!("bad coefficient in {line:?}") })?;
            let mut mask = 0u128;
            for tok in toks {
                let i: usize = tok
                    .parse()
                    .ok()
                    .filter(|&i| (1..=128).contains(&i))
                    .ok_or_else(|| Error::Parse { line: line_no, message: format!("bad variable index {tok:?}") })?;
                if mask & bit(i - 1) != 0 {
                    return Err(Error::Parse { line: line_no, message: format!("variable {i} repeated") });
                }
                mask |= bit(i - 1);
                m = m.max(i);
            }
            terms.push((mask, coeff));
        }
        MultilinearPolynomial::from_terms(m, terms)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (idx, c) in self.terms_sorted() {
            out.push_str(&c.to_string());
            for i in idx {
                out.push_str(&format!(" {i}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for MultilinearPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<MultilinearPolynomial> {
        MultilinearPolynomial::parse_text(s)
    }
}

pub(crate) fn index_mask(idx: &[usize], m: usize) -> Result<u128> {
    let mut mask = 0u128;
    for &i in idx {
        if i == 0 || i > m {
            return Err(invalid(format!("variable index {i} outside 1..={m}")));
        }
        mask |= bit(i - 1);
    }
    Ok(mask)
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Coefficients of the multilinear interpolant of `values` over `{−1,1}^h`,
/// where `values[neg]` is the value at the point whose −1 entries are `neg`.
pub fn walsh_interpolate(h: usize, values: &[i64]) -> MultilinearPolynomial {
    assert_eq!(values.len(), 1 << h);
    let mut a: Vec<i128> = values.iter().map(|&v| v as i128).collect();
    let mut len = 1;
    while len < a.len() {
        for start in (0..a.len()).step_by(2 * len) {
            for i in start..start + len {
                let (x, y) = (a[i], a[i + len]);
                a[i] = x + y;
                a[i + len] = x - y;
            }
        }
        len *= 2;
    }
    let denom = BigInt::one() << h;
    let mut p = MultilinearPolynomial::zero(h);
    for (mask, v) in a.into_iter().enumerate() {
        p.add_term(mask as u128, BigRational::new(BigInt::from(v), denom.clone()));
    }
    p
}
