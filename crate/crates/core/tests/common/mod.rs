//! Reference implementations used as oracles. They follow the definitions
//! literally (nested `Vec<Vec<bool>>`, `BTreeSet` members) and share no code
//! with the library beyond conversion helpers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use circfam::{BoolMatrix, Certificate, FamilyPair};

pub type Dense = Vec<Vec<bool>>;

/// First column is `p` ones then `q` zeros; each row is the previous one
/// shifted cyclically one place to the right.
pub fn circulant_oracle(p: usize, q: usize) -> Dense {
    let n = p + q;
    let mut first_row = vec![false; n];
    // first row: entry (0, c) equals column c's top, which is the first
    // column read upward cyclically
    let first_col: Vec<bool> = (0..n).map(|r| r < p).collect();
    for (c, cell) in first_row.iter_mut().enumerate() {
        *cell = first_col[(n - c) % n];
    }
    let mut rows = vec![first_row];
    for _ in 1..n {
        let prev = rows.last().unwrap();
        let mut next = vec![false; n];
        for c in 0..n {
            next[(c + 1) % n] = prev[c];
        }
        rows.push(next);
    }
    rows
}

pub fn product_oracle(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|c| (0..inner).any(|i| row[i] && b[i][c]))
                .collect()
        })
        .collect()
}

/// Row `r` of the result is row `(r + shift) mod n` of `m`.
pub fn rotate_oracle(m: &Dense, shift: usize) -> Dense {
    let n = m.len();
    (0..n).map(|r| m[(r + shift) % n].clone()).collect()
}

pub fn dense(m: &BoolMatrix) -> Dense {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
        .collect()
}

pub fn sets(lists: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    lists.iter().map(|l| l.iter().copied().collect()).collect()
}

pub fn intersections_oracle(rows: &[BTreeSet<usize>], cols: &[BTreeSet<usize>]) -> Dense {
    rows.iter()
        .map(|f| {
            cols.iter()
                .map(|g| f.intersection(g).next().is_some())
                .collect()
        })
        .collect()
}

pub fn pair_intersections(pair: &FamilyPair) -> Dense {
    intersections_oracle(
        &sets(&pair.rows().to_lists()),
        &sets(&pair.cols().to_lists()),
    )
}

/// Full oracle check of a certificate: sizes, uniformity, range, and the
/// intersection pattern against the rotated circulant.
pub fn certificate_holds(cert: &Certificate) -> bool {
    let n = cert.p + cert.q;
    let ok_member = |m: &Vec<usize>| {
        let s: BTreeSet<usize> = m.iter().copied().collect();
        s.len() == cert.t && m.len() == cert.t && s.iter().all(|&e| (1..=cert.k).contains(&e))
    };
    if cert.rows.len() != n || cert.cols.len() != n {
        return false;
    }
    if !cert.rows.iter().chain(&cert.cols).all(ok_member) {
        return false;
    }
    let target = rotate_oracle(&circulant_oracle(cert.p, cert.q), cert.shift % n);
    intersections_oracle(&sets(&cert.rows), &sets(&cert.cols)) == target
}

pub fn distinct(lists: &[Vec<usize>]) -> bool {
    let s = sets(lists);
    let unique: BTreeSet<&BTreeSet<usize>> = s.iter().collect();
    unique.len() == s.len()
}

/// Definition-level isolation check.
pub fn isolation_oracle(m: &Dense, positions: &[(usize, usize)]) -> bool {
    for (i, &(r1, c1)) in positions.iter().enumerate() {
        if !m[r1][c1] {
            return false;
        }
        for (j, &(r2, c2)) in positions.iter().enumerate() {
            if i == j {
                continue;
            }
            if r1 == r2 || c1 == c2 {
                return false;
            }
            let minor = [m[r1][c1], m[r1][c2], m[r2][c1], m[r2][c2]];
            if minor.iter().all(|&b| b) {
                return false;
            }
        }
    }
    true
}

/// Largest isolation set by trying every subset of the ones.
pub fn max_isolation_oracle(m: &Dense) -> usize {
    let ones: Vec<(usize, usize)> = m
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(c, _)| (r, c))
        })
        .collect();
    assert!(ones.len() <= 20, "oracle limited to 20 ones");
    let mut best = 0;
    for mask in 0u32..(1 << ones.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..ones.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ones[i])
            .collect();
        if isolation_oracle(m, &chosen) {
            best = size;
        }
    }
    best
}

/// Largest `i + j` over all-one `i x j` submatrices, by trying every pair of
/// row and column subsets.
pub fn max_all_one_perimeter_oracle(m: &Dense) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut best = 0;
    for rmask in 1u32..(1 << rows) {
        for cmask in 1u32..(1 << cols) {
            let all = (0..rows)
                .filter(|r| rmask >> r & 1 == 1)
                .all(|r| (0..cols).filter(|c| cmask >> c & 1 == 1).all(|c| m[r][c]));
            if all {
                best = best.max((rmask.count_ones() + cmask.count_ones()) as usize);
            }
        }
    }
    best
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
