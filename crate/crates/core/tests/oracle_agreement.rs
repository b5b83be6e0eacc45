use fq_minors::formulas::{count_rank_matrices, gaussian_binomial, prob_free_minor, prob_full_col_rank};
use fq_minors::minor::{find_minor, SearchLimits};
use fq_minors::oracle::{brute_force_minor, exact_event_prob, exact_minor_prob, DEFAULT_CAP};
use fq_minors::sampler::Event;
use fq_minors::{Field, Matroid};
use num_bigint::BigUint;

fn f2() -> Field {
    Field::new(2).unwrap()
}

#[test]
fn two_by_two_binary_counts() {
    // 16 matrices: 1 zero, 6 invertible, 9 of rank one.
    assert_eq!(count_rank_matrices(2, 2, 2, 0).unwrap(), BigUint::from(1u32));
    assert_eq!(count_rank_matrices(2, 2, 2, 1).unwrap(), BigUint::from(9u32));
    assert_eq!(count_rank_matrices(2, 2, 2, 2).unwrap(), BigUint::from(6u32));
    assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigUint::from(35u32));
}

#[test]
fn free_minor_probabilities_match_enumeration() {
    let free1 = Matroid::catalog("free:1").unwrap();
    let free2 = Matroid::catalog("free:2").unwrap();
    let p1 = exact_minor_prob(&f2(), 2, 2, &free1, DEFAULT_CAP).unwrap();
    let p2 = exact_minor_prob(&f2(), 2, 2, &free2, DEFAULT_CAP).unwrap();
    assert_eq!(p1.exact.to_string(), "15/16");
    assert_eq!(p2.exact.to_string(), "3/8");
    assert_eq!(prob_free_minor(2, 2, 2, 1).unwrap().value, p1.exact);
    assert_eq!(prob_free_minor(2, 2, 2, 2).unwrap().value, p2.exact);
}

#[test]
fn full_rank_event_matches_formula() {
    for (m, n) in [(1, 1), (3, 2), (3, 3), (4, 2), (4, 4)] {
        let oracle = exact_event_prob(&f2(), m, n, Event::FullColumnRank, DEFAULT_CAP).unwrap();
        assert_eq!(oracle.exact, prob_full_col_rank(m, n, 2).unwrap(), "m={m} n={n}");
    }
}

#[test]
fn search_agrees_with_brute_force_on_catalog() {
    let names = ["U:1,2", "U:1,3", "U:2,3", "U:2,4", "free:2", "loops:2", "MK4", "F7"];
    for host in names {
        for target in names {
            let h = Matroid::catalog(host).unwrap();
            let t = Matroid::catalog(target).unwrap();
            if h.ground_size() > 7 {
                continue;
            }
            let searched = find_minor(&h, &t, SearchLimits::default()).is_found();
            assert_eq!(searched, brute_force_minor(&h, &t).is_some(), "{target} in {host}");
        }
    }
}
