//! Property suites: combinatorial counts against independent oracles, and
//! the algebraic laws of the cocycle evaluators on random inputs.

use proptest::prelude::*;

use thnorm_core::cocycle::{or3, theta_direct, theta_reduced, Configuration};
use thnorm_core::ordercomb::{
    canonicalize_cyclic, dihedral_orbit, enumerate_weak_orders, enumerate_x_patterns,
    perm_parity_by_inversions, reduced_perm_table, RankVector, WeakOrderIter,
};
use thnorm_core::rat::Rat;

/// Fubini numbers by the binomial recurrence a(m) = sum_k C(m,k) a(m-k).
fn fubini_oracle(m: usize) -> u64 {
    let mut a = vec![0u64; m + 1];
    a[0] = 1;
    for i in 1..=m {
        let mut binom = 1u64;
        for k in 1..=i {
            binom = binom * (i as u64 - k as u64 + 1) / k as u64;
            a[i] += binom * a[i - k];
        }
    }
    a[m]
}

#[test]
fn weak_order_counts_match_fubini_recurrence() {
    let expected = [1u64, 3, 13, 75, 541, 4683, 47293];
    for (i, &want) in expected.iter().enumerate() {
        let m = i + 1;
        assert_eq!(fubini_oracle(m), want);
        let count = WeakOrderIter::new(m).unwrap().count() as u64;
        assert_eq!(count, want, "m={m}");
    }
    // one size beyond the table, streamed
    assert_eq!(WeakOrderIter::new(8).unwrap().count() as u64, fubini_oracle(8));
}

#[test]
fn weak_orders_match_bruteforce_filter() {
    // independent enumeration for small m: all vectors in {1..m}^m that are
    // surjective onto 1..=max
    for m in 1..=5usize {
        let mut brute: Vec<Vec<u8>> = Vec::new();
        let total = (m as u64).pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<u8> = (0..m)
                .map(|_| {
                    let digit = (c % m as u64) as u8 + 1;
                    c /= m as u64;
                    digit
                })
                .collect();
            let k = *v.iter().max().unwrap();
            let surjective = (1..=k).all(|r| v.contains(&r));
            if surjective {
                brute.push(v);
            }
        }
        brute.sort();
        let listed: Vec<Vec<u8>> = enumerate_weak_orders(m)
            .unwrap()
            .into_iter()
            .map(|rv| rv.ranks().to_vec())
            .collect();
        assert_eq!(listed, brute, "m={m}");
    }
}

#[test]
fn weak_orders_have_no_duplicates_up_to_seven() {
    let all = enumerate_weak_orders(7).unwrap();
    assert_eq!(all.len(), 47293);
    for w in all.windows(2) {
        assert!(w[0] < w[1], "duplicate or misordered: {:?}", w[0]);
    }
}

#[test]
fn orbit_sizes_sum_to_fubini() {
    for m in [5usize, 7] {
        for use_reflection in [false, true] {
            let classes: Vec<RankVector> = enumerate_weak_orders(m)
                .unwrap()
                .into_iter()
                .filter(|rv| canonicalize_cyclic(rv, use_reflection) == *rv)
                .collect();
            let total: u64 = classes
                .iter()
                .map(|c| dihedral_orbit(c, use_reflection).len() as u64)
                .sum();
            assert_eq!(total, fubini_oracle(m), "m={m} reflection={use_reflection}");
        }
    }
}

#[test]
fn x_pattern_counts() {
    for n in 1..=5usize {
        assert_eq!(enumerate_x_patterns(n).unwrap().len(), 1 << (2 * n));
    }
}

#[test]
fn reduced_table_constraints_and_signs() {
    for n in [2usize, 3] {
        let table = reduced_perm_table(n).unwrap();
        let quarter: usize = (1..=2 * n + 1).product::<usize>() / 4;
        assert_eq!(table.rows.len(), quarter);
        for row in &table.rows {
            assert_eq!(row.sign, perm_parity_by_inversions(&row.perm));
        }
    }
}

fn arb_rank_vector(m: usize) -> impl Strategy<Value = RankVector> {
    prop::collection::vec(1..=m as u8, m)
        .prop_map(|values| RankVector::from_values(&values).unwrap())
}

fn arb_configuration(n: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(arb_rank_vector(2 * n + 1), n)
        .prop_map(|factors| Configuration::new(factors).unwrap())
}

fn arb_point_perm(m: usize) -> impl Strategy<Value = Vec<u8>> {
    Just((0..m as u8).collect::<Vec<u8>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn or3_is_cyclic_and_antisymmetric(a in 1u8..=7, b in 1u8..=7, c in 1u8..=7) {
        prop_assert_eq!(or3(a, b, c), or3(b, c, a));
        prop_assert_eq!(or3(a, b, c), -or3(b, a, c));
        if a == b || b == c || a == c {
            prop_assert_eq!(or3(a, b, c), 0);
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_orbit_constant(
        rv in arb_rank_vector(7),
        pick in any::<prop::sample::Index>(),
        use_reflection in any::<bool>(),
    ) {
        let canon = canonicalize_cyclic(&rv, use_reflection);
        prop_assert_eq!(canonicalize_cyclic(&canon, use_reflection), canon.clone());
        let orbit = dihedral_orbit(&rv, use_reflection);
        let image = &orbit[pick.index(orbit.len())];
        prop_assert_eq!(canonicalize_cyclic(image, use_reflection), canon);
    }

    #[test]
    fn reduced_equals_direct(cfg in arb_configuration(3)) {
        prop_assert_eq!(theta_reduced(&cfg).unwrap(), theta_direct(&cfg).unwrap());
    }

    #[test]
    fn reduced_equals_direct_two_factors(cfg in arb_configuration(2)) {
        prop_assert_eq!(theta_reduced(&cfg).unwrap(), theta_direct(&cfg).unwrap());
    }

    #[test]
    fn alternation_sign_law(cfg in arb_configuration(3), perm in arb_point_perm(7)) {
        let sign = perm_parity_by_inversions(&perm);
        let permuted = cfg.permute_points(&perm).unwrap();
        let base = theta_direct(&cfg).unwrap();
        let expected = if sign == 1 { base } else { base.neg() };
        prop_assert_eq!(theta_direct(&permuted).unwrap(), expected);
    }

    #[test]
    fn factor_permutation_invariance(cfg in arb_configuration(3), which in 0usize..6) {
        let orders: [[usize; 3]; 6] =
            [[0,1,2],[0,2,1],[1,0,2],[1,2,0],[2,0,1],[2,1,0]];
        let swapped = cfg.permute_factors(&orders[which]).unwrap();
        prop_assert_eq!(theta_direct(&swapped).unwrap(), theta_direct(&cfg).unwrap());
    }

    #[test]
    fn value_range_and_denominator(cfg in arb_configuration(3)) {
        let v = theta_direct(&cfg).unwrap();
        prop_assert!(v.abs() <= Rat::ONE);
        prop_assert_eq!(5040 % v.denom(), 0);
    }

    #[test]
    fn coboundary_vanishes_on_six_points(
        factors in prop::collection::vec(arb_rank_vector(6), 2)
    ) {
        // 2 factors, 6 = 2n+2 points: alternating omission sum must vanish
        let mut sum = Rat::ZERO;
        for omit in 0..6 {
            let sub: Vec<RankVector> = factors
                .iter()
                .map(|f| {
                    let kept: Vec<u8> = f
                        .ranks()
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != omit)
                        .map(|(_, &r)| r)
                        .collect();
                    RankVector::from_values(&kept).unwrap()
                })
                .collect();
            let v = theta_direct(&Configuration::new(sub).unwrap()).unwrap();
            sum = if omit % 2 == 0 {
                sum.checked_add(&v).unwrap()
            } else {
                sum.checked_add(&v.neg()).unwrap()
            };
        }
        prop_assert!(sum.is_zero());
    }
}
