use std::collections::BTreeMap;

use anticonc_core::analysis::{harmonic_project, homogeneous_parts};
use anticonc_core::distribution::exact_distribution;
use anticonc_core::poly::MultilinearPolynomial;
use anticonc_core::ramsey::TwoColoring;
use anticonc_core::slice::{coupled_xi, evaluate_coupled, extract_coefficients, random_permutation};
use anticonc_core::structure::{
    build_auxiliary_h, count_good_tuples, f_membership, run_greedy_procedure, GreedyVariant,
};
use anticonc_core::{rng, Hypergraph, RandomModel};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

fn graph(max_n: usize, r: usize) -> impl Strategy<Value = Hypergraph> {
    (r..=max_n, 0.0f64..=1.0, any::<u64>())
        .prop_map(move |(n, p, seed)| Hypergraph::random(n, r, RandomModel::Uniform(p), seed).unwrap())
}

fn even_graph(max_half: usize, r: usize) -> impl Strategy<Value = (Hypergraph, Vec<usize>)> {
    (2..=max_half, 0.0f64..=1.0, any::<u64>()).prop_map(move |(h, p, seed)| {
        let g = Hypergraph::random(2 * h, r, RandomModel::Uniform(p), seed).unwrap();
        let sigma = random_permutation(&mut rng::stream(seed, 1), 2 * h);
        (g, sigma)
    })
}

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distribution_matches_subset_loop(g in graph(10, 2), k in 0usize..=10) {
        let k = k.min(g.n());
        let table = exact_distribution(&g, k).unwrap();
        let mut naive: BTreeMap<usize, BigUint> = BTreeMap::new();
        for s in 0u128..1 << g.n() {
            if s.count_ones() as usize == k {
                *naive.entry(g.edges().iter().filter(|&&e| e & !s == 0).count()).or_default() += 1u32;
            }
        }
        prop_assert_eq!(table.counts, naive);
        prop_assert_eq!(table.total, BigUint::from(binom(g.n(), k)));
    }

    #[test]
    fn complement_mirrors_distribution(g in graph(9, 3), k in 3usize..=9) {
        let k = k.min(g.n());
        let a = exact_distribution(&g, k).unwrap();
        let b = exact_distribution(&g.complement(), k).unwrap();
        let top = binom(k, 3) as usize;
        for (ell, c) in &a.counts {
            prop_assert_eq!(&b.count(top - ell), c);
        }
    }

    #[test]
    fn text_format_round_trips(g in graph(12, 3)) {
        prop_assert_eq!(Hypergraph::parse_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn coloring_text_round_trips(n in 3usize..=10, p in 0.0f64..=1.0, seed: u64) {
        let c = TwoColoring::random(3, n, p, seed).unwrap();
        prop_assert_eq!(TwoColoring::parse_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn coupled_xi_lies_on_the_middle_slice((g, sigma) in even_graph(6, 2), neg: u64) {
        let h = g.n() / 2;
        let neg = neg as u128 & ((1 << h) - 1);
        let xi = coupled_xi(&sigma, neg);
        prop_assert_eq!(xi.count_ones() as usize, h);
        let x = evaluate_coupled(&g, &sigma, neg).unwrap();
        prop_assert!(x as u64 <= binom(h, 2));
    }

    #[test]
    fn auxiliary_graph_is_complement_invariant((g, sigma) in even_graph(6, 3)) {
        let a = build_auxiliary_h(&g, &sigma).unwrap();
        let b = build_auxiliary_h(&g.complement(), &sigma).unwrap();
        prop_assert_eq!(a.edges, b.edges);
    }

    #[test]
    fn top_coefficients_flip_sign_under_complement((g, sigma) in even_graph(5, 2)) {
        let a = extract_coefficients(&g, &sigma).unwrap();
        let b = extract_coefficients(&g.complement(), &sigma).unwrap();
        for (mask, c) in a.terms() {
            if mask.count_ones() == 2 {
                prop_assert_eq!(b.coefficient(mask), -c.clone());
            }
        }
    }

    #[test]
    fn signed_sum_is_antisymmetric(g in graph(9, 3), seed: u64) {
        prop_assume!(g.n() >= 6);
        let perm = random_permutation(&mut rng::stream(seed, 0), g.n());
        let t: Vec<usize> = perm[..6].iter().map(|v| v + 1).collect();
        let s = f_membership(&g, [t[0], t[1], t[2], t[3], t[4], t[5]]).unwrap().sum;
        for swapped in [[t[1], t[0], t[2], t[3], t[4], t[5]], [t[0], t[1], t[3], t[2], t[4], t[5]], [t[0], t[1], t[2], t[3], t[5], t[4]]] {
            prop_assert_eq!(f_membership(&g, swapped).unwrap().sum, -s);
        }
        let c = f_membership(&g.complement(), [t[0], t[1], t[2], t[3], t[4], t[5]]).unwrap().sum;
        prop_assert_eq!(c, -s);
    }

    #[test]
    fn good_tuples_are_complement_invariant(g in graph(8, 3)) {
        prop_assert_eq!(count_good_tuples(&g).unwrap(), count_good_tuples(&g.complement()).unwrap());
    }

    #[test]
    fn greedy_matching_lives_in_h(p in 0.3f64..=0.7, seed: u64, avoid: bool) {
        let g = Hypergraph::random(64, 2, RandomModel::Uniform(p), seed).unwrap();
        let variant = if avoid { GreedyVariant::AvoidHighDegree } else { GreedyVariant::HighDegree };
        let Ok(trace) = run_greedy_procedure(&g, variant, seed) else { return Ok(()); };
        prop_assert_eq!(trace.successes(), trace.matching.len());
        let h = build_auxiliary_h(&g, &trace.sigma).unwrap();
        let mut used = 0u128;
        for &(i, j) in &trace.matching {
            let e = 1u128 << (i - 1) | 1u128 << (j - 1);
            prop_assert!(h.edges.contains(&e));
            prop_assert_eq!(used & e, 0);
            used |= e;
        }
    }

    #[test]
    fn projection_agrees_and_decomposes(seed: u64, n in 4usize..=7, degree in 1usize..=3) {
        let k = n / 2;
        let mut r = rng::stream(seed, 0);
        use rand::Rng as _;
        let terms: Vec<(u128, BigRational)> = (0u128..1 << n)
            .filter(|m| m.count_ones() as usize <= degree)
            .map(|m| (m, BigRational::from_integer(r.random_range(-2i64..=2).into())))
            .collect();
        let f = MultilinearPolynomial::from_terms(n, terms).unwrap();
        let g = harmonic_project(&f, n, k).unwrap();
        prop_assert!(g.is_harmonic());
        for x in (0u128..1 << n).filter(|x| x.count_ones() as usize == k) {
            prop_assert_eq!(g.eval_bits(x), f.eval_bits(x));
        }
        let sum = homogeneous_parts(&g).iter().fold(MultilinearPolynomial::zero(n), |acc, p| acc.add(p));
        prop_assert_eq!(sum, g);
    }

    #[test]
    fn polynomial_text_round_trips(seed: u64, m in 1usize..=8) {
        let mut r = rng::stream(seed, 0);
        use rand::Rng as _;
        let terms: Vec<(u128, BigRational)> = (0..6)
            .map(|_| (r.random_range(0u128..1 << m), BigRational::new(r.random_range(-9i64..=9).into(), r.random_range(1i64..=5).into())))
            .collect();
        let f = MultilinearPolynomial::from_terms(m, terms).unwrap();
        let back = MultilinearPolynomial::parse_text(&f.to_text()).unwrap();
        prop_assert_eq!(back.terms_sorted(), f.terms_sorted());
    }
}
