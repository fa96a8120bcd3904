//! Small combinatorial helpers shared by the enumeration code.

use num_bigint::BigUint;

/// `C(n, k)` as a `u128`, saturating at `u128::MAX`.
pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => {
                let big = binom_big(n, k);
                return u128::try_from(big).unwrap_or(u128::MAX);
            }
        }
    }
    acc
}

pub fn binom_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

pub fn bit(i: usize) -> u128 {
    1u128 << i
}

pub fn low_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Iterates over the set bits of a mask, lowest first.
pub fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// All `k`-subsets of `0..n` in colex order (Gosper's hack).
pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = u128> {
    let limit = low_mask(n);
    let mut cur = if k <= n { Some(low_mask(k)) } else { None };
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == 0 {
            None
        } else {
            let c = out & out.wrapping_neg();
            match out.checked_add(c) {
                Some(r) => {
                    let next = (((r ^ out) >> 2) / c) | r;
                    (next & !limit == 0).then_some(next)
                }
                None => None,
            }
        };
        Some(out)
    })
}

/// Visits all `k`-subsets of `elems` in revolving-door order: consecutive
/// subsets differ by removing one element and adding another.
pub fn revolving_door(elems: &[usize], k: usize, base: u128, f: &mut impl FnMut(u128)) {
    fn go(elems: &[usize], n: usize, k: usize, rev: bool, base: u128, f: &mut impl FnMut(u128)) {
        if k == 0 {
            f(base);
            return;
        }
        if k == n {
            f(elems[..n].iter().fold(base, |m, &e| m | bit(e)));
            return;
        }
        let top = base | bit(elems[n - 1]);
        if rev {
            go(elems, n - 1, k - 1, false, top, f);
            go(elems, n - 1, k, true, base, f);
        } else {
            go(elems, n - 1, k, false, base, f);
            go(elems, n - 1, k - 1, true, top, f);
        }
    }
    if k <= elems.len() {
        go(elems, elems.len(), k, false, base, f);
    }
}

/// Splits the `k`-subsets of `0..n` into blocks by their `top` largest
/// elements. Each block is `(fixed, low)`: the subsets are `fixed` plus any
/// `k - top` elements of `0..low`. Blocks come in colex order of `fixed`.
pub fn top_blocks(n: usize, k: usize, top: usize) -> Vec<(u128, usize)> {
    let top = top.min(k);
    if top == 0 {
        return vec![(0, n)];
    }
    subsets(n, top)
        .filter_map(|fixed| {
            let low = fixed.trailing_zeros() as usize;
            (low >= k - top).then_some((fixed, low))
        })
        .collect()
}

/// Colex rank of a set given as a bitmask.
pub fn colex_rank(mask: u128) -> usize {
    bits(mask)
        .enumerate()
        .map(|(i, c)| binom(c, i + 1) as usize)
        .sum()
}

/// Inverse of [`colex_rank`] for sets of size `k`.
pub fn colex_unrank(mut rank: u128, k: usize) -> u128 {
    let mut mask = 0u128;
    for i in (1..=k).rev() {
        // Largest c with C(c, i) <= rank.
        let mut c = i - 1;
        while binom(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binom(c, i);
        mask |= bit(c);
    }
    mask
}
