mod common;

use circfam::analysis::*;
use circfam::constructions::{mid_p_factors, small_p_factors};
use circfam::{circulant, BoolMatrix, CirculantSpec, Error};
use common::*;
use proptest::prelude::*;

fn from_dense(m: &Dense) -> BoolMatrix {
    BoolMatrix::from_rows(m).unwrap()
}

fn positions(rows: usize, cols: usize, mask: u32) -> Vec<(usize, usize)> {
    (0..rows * cols)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i / cols, i % cols))
        .collect()
}

#[test]
fn isolation_checker_exhaustive_up_to_three() {
    for n in 1..=3usize {
        let cells = n * n;
        for bits in 0u32..(1 << cells) {
            let m: Dense = (0..n)
                .map(|r| (0..n).map(|c| bits >> (r * n + c) & 1 == 1).collect())
                .collect();
            let host = from_dense(&m);
            for mask in 0u32..(1 << cells) {
                let set = IsolationSet::new(positions(n, n, mask));
                assert_eq!(
                    is_isolation_set(&host, &set).unwrap(),
                    isolation_oracle(&m, &set.positions),
                    "matrix {bits:b} positions {mask:b}"
                );
            }
        }
    }
}

#[test]
fn isolation_checker_order_four_permutations() {
    // every matrix of order 4 against every permutation-shaped position set
    let perms: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = vec![a, b, c, d];
                        let mut s = v.clone();
                        s.sort();
                        s.dedup();
                        if s.len() == 4 {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out
    };
    for bits in 0u32..(1 << 16) {
        let m: Dense = (0..4)
            .map(|r| (0..4).map(|c| bits >> (r * 4 + c) & 1 == 1).collect())
            .collect();
        let host = from_dense(&m);
        for perm in perms.iter().step_by(5) {
            let pos: Vec<(usize, usize)> = perm.iter().enumerate().map(|(r, &c)| (r, c)).collect();
            let set = IsolationSet::new(pos);
            assert_eq!(
                is_isolation_set(&host, &set).unwrap(),
                isolation_oracle(&m, &set.positions)
            );
        }
    }
}

fn dense_matrix(max: usize) -> impl Strategy<Value = Dense> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r)
    })
}

proptest! {
    #[test]
    fn isolation_checker_random(m in dense_matrix(8), picks in proptest::collection::vec((0usize..8, 0usize..8), 0..8)) {
        let rows = m.len();
        let cols = m[0].len();
        let pos: Vec<(usize, usize)> = picks.into_iter().map(|(r, c)| (r % rows, c % cols)).collect();
        let host = from_dense(&m);
        prop_assert_eq!(is_isolation_set(&host, &IsolationSet::new(pos.clone())).unwrap(), isolation_oracle(&m, &pos));
    }

    #[test]
    fn isolation_bound_is_exact_on_small_matrices(m in dense_matrix(4)) {
        let host = from_dense(&m);
        let ones: usize = m.iter().flatten().filter(|&&b| b).count();
        prop_assume!(ones <= 14);
        let bound = max_isolation_lower_bound(&host, None);
        prop_assert!(bound.exhausted);
        prop_assert_eq!(bound.size, max_isolation_oracle(&m));
        prop_assert!(isolation_oracle(&m, &bound.best.positions));
    }

    #[test]
    fn all_one_perimeter_matches_brute_force(m in dense_matrix(6)) {
        prop_assert_eq!(max_all_one_perimeter(&from_dense(&m)), max_all_one_perimeter_oracle(&m));
    }
}

#[test]
fn circulant_isolation_is_full_when_q_is_large() {
    for n in 2..=20 {
        for p in 1..n {
            let q = n - p;
            if q + 1 < p {
                continue;
            }
            let host = circulant(CirculantSpec { p, q }).unwrap();
            assert!(is_isolation_set(&host, &IsolationSet::diagonal(n)).unwrap());
            let bound = max_isolation_lower_bound(&host, None);
            assert_eq!((bound.size, bound.exhausted), (n, true), "p={p} q={q}");
        }
    }
}

#[test]
fn all_one_claim_for_every_small_circulant() {
    for n in 2..=ALL_ONE_ORDER_CAP {
        for p in 1..n {
            let spec = CirculantSpec { p, q: n - p };
            assert!(all_one_submatrix_check(spec).unwrap(), "p={p} q={}", n - p);
            if n <= 8 {
                let m = circulant_oracle(p, n - p);
                assert!(max_all_one_perimeter_oracle(&m) <= p + 1);
            }
        }
    }
    assert!(matches!(
        all_one_submatrix_check(CirculantSpec { p: 1, q: 14 }),
        Err(Error::Cap { .. })
    ));
}

#[test]
fn audits_of_construction_factors_are_clean() {
    for t in 2..=6usize {
        for p in 1..2 * t {
            for q in (p.saturating_sub(1)).max(1)..=6 {
                let (x, y) = small_p_factors(t, p, q, q + 2 * t - 1).unwrap();
                let audit = audit_decomposition(&x, &y, CirculantSpec { p, q }).unwrap();
                assert!(
                    audit.is_clean(),
                    "t={t} p={p} q={q}: {:?}",
                    audit.violations
                );
                let sum: usize = audit.records.iter().map(|r| r.x_ones + r.y_ones).sum();
                assert_eq!(audit.total_ones, sum);
            }
        }
    }
    for t in 2..=5 {
        for p in 2 * t..=t * t {
            for q in 1..=4 {
                let (x, y) = mid_p_factors(t, p, q).unwrap();
                let audit = audit_decomposition(&x, &y, CirculantSpec { p, q }).unwrap();
                assert!(
                    audit.is_clean(),
                    "t={t} p={p} q={q}: {:?}",
                    audit.violations
                );
            }
        }
    }
}

#[test]
fn audit_accepts_redundant_indices_and_rejects_wrong_products() {
    // index 2 repeats index 0 of I_2
    let x = BoolMatrix::from_rows(&[vec![true, false, true], vec![false, true, false]]).unwrap();
    let y =
        BoolMatrix::from_rows(&[vec![true, false], vec![false, true], vec![true, false]]).unwrap();
    let audit = audit_decomposition(&x, &y, CirculantSpec { p: 1, q: 1 }).unwrap();
    assert!(audit.is_clean());
    assert_eq!((audit.r, audit.total_ones), (3, 6));

    let x =
        BoolMatrix::from_rows(&[vec![true, true], vec![false, true], vec![false, false]]).unwrap();
    let y = BoolMatrix::from_rows(&[vec![true, false, false], vec![false, true, false]]).unwrap();
    assert!(matches!(
        audit_decomposition(&x, &y, CirculantSpec { p: 1, q: 2 }),
        Err(Error::NotADecomposition { p: 1, q: 2 })
    ));
}

#[test]
fn audit_bound_is_tight_on_a_full_block() {
    // extra index covering rows {1,2} x cols {0,1}, an all-one block of C_{3,1}
    let c = circulant(CirculantSpec { p: 3, q: 1 }).unwrap();
    let x = BoolMatrix::from_fn(4, 5, |r, col| {
        if col < 4 {
            c.get(r, col)
        } else {
            r == 1 || r == 2
        }
    });
    let y = BoolMatrix::from_fn(5, 4, |r, col| if r < 4 { r == col } else { col < 2 });
    assert_eq!(x.bool_product(&y).unwrap(), c);
    let audit = audit_decomposition(&x, &y, CirculantSpec { p: 3, q: 1 }).unwrap();
    assert_eq!(
        audit.records[4],
        IndexRecord {
            x_ones: 2,
            y_ones: 2
        }
    );
    assert!(audit.is_clean(), "{:?}", audit.violations);
    let json = serde_json::to_value(&audit.violations).unwrap();
    assert_eq!(json, serde_json::json!([]));
}

#[test]
fn q_bound_check_refuses_outside_its_range() {
    use circfam::constructions::{construct_mid_p, construct_small_p};
    let mid = construct_mid_p(2, 4, 3).unwrap().certificate();
    assert!(matches!(check_theorem2(&mid), Err(Error::Range { .. })));
    for t in 2..=4usize {
        for p in 1..2 * t {
            for q in p.saturating_sub(1).max(1)..=5 {
                let k = q + 2 * t - 1;
                let cert = construct_small_p(t, p, q, k).unwrap().certificate();
                assert!(check_theorem2(&cert).unwrap());
            }
        }
    }
}

#[test]
fn frankl_kalai_cap_values() {
    for t in 1..=8 {
        for q in 1..=5 {
            assert_eq!(frankl_kalai_cap(t, q), binom(2 * t, t) + q - 1);
        }
    }
}
