//! Isolation sets, all-one submatrices, decomposition audits and the
//! upper bounds that any embedding must respect.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boolmat::{circulant, is_cyclic_variant, BoolMatrix, CirculantSpec};
use crate::combin::binom;
use crate::error::{Error, Result};
use crate::families::{Certificate, Verdict};

/// Largest order accepted by [`all_one_submatrix_check`].
pub const ALL_ONE_ORDER_CAP: usize = 14;

/// Ones of a host matrix, no two in a common row, column or 2x2 all-one minor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationSet {
    pub positions: Vec<(usize, usize)>,
}

impl IsolationSet {
    pub fn new(positions: Vec<(usize, usize)>) -> Self {
        IsolationSet { positions }
    }

    /// The main diagonal of an `n x n` matrix.
    pub fn diagonal(n: usize) -> Self {
        IsolationSet {
            positions: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

pub fn is_isolation_set(host: &BoolMatrix, set: &IsolationSet) -> Result<bool> {
    for &(r, c) in &set.positions {
        if r >= host.rows() || c >= host.cols() {
            return Err(Error::InvalidArgument(format!(
                "position ({r}, {c}) outside a {}x{} host",
                host.rows(),
                host.cols()
            )));
        }
    }
    let ps = &set.positions;
    for (idx, &(r1, c1)) in ps.iter().enumerate() {
        if !host.get(r1, c1) {
            return Ok(false);
        }
        for &(r2, c2) in &ps[idx + 1..] {
            if r1 == r2 || c1 == c2 || (host.get(r1, c2) && host.get(r2, c1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationBound {
    pub size: usize,
    /// The search tree was fully explored (or the trivial upper bound was
    /// reached), so `size` is the maximum.
    pub exhausted: bool,
    pub nodes: u64,
    pub best: IsolationSet,
}

struct IsolationSearch<'a> {
    host: &'a BoolMatrix,
    rows: usize,
    words: usize,
    cap: usize,
    budget: Option<u64>,
    nodes: u64,
    aborted: bool,
    chosen: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
}

impl IsolationSearch<'_> {
    fn candidates(&self, r: usize, used: &[u64]) -> Vec<u64> {
        let mut mask: Vec<u64> = self
            .host
            .row_words(r)
            .iter()
            .zip(used)
            .map(|(h, u)| h & !u)
            .collect();
        for &(r1, c1) in &self.chosen {
            if self.host.get(r, c1) {
                for (m, h) in mask.iter_mut().zip(self.host.row_words(r1)) {
                    *m &= !h;
                }
            }
        }
        mask
    }

    fn dfs(&mut self, r: usize, used: &mut Vec<u64>) {
        if self.aborted || self.best.len() >= self.cap {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if r == self.rows || self.chosen.len() + (self.rows - r) <= self.best.len() {
            return;
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.aborted = true;
            return;
        }
        let mask = self.candidates(r, used);
        for w in 0..self.words {
            let mut bits = mask[w];
            while bits != 0 {
                let c = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                used[w] |= 1 << (c % 64);
                self.chosen.push((r, c));
                self.dfs(r + 1, used);
                self.chosen.pop();
                used[w] &= !(1 << (c % 64));
                if self.aborted || self.best.len() >= self.cap {
                    return;
                }
            }
        }
        // leave row r out
        self.dfs(r + 1, used);
    }
}

/// Branch and bound over rows: each row contributes one compatible one or
/// nothing. Reaching `min(rows, cols)` ends the search as exact.
pub fn max_isolation_lower_bound(host: &BoolMatrix, budget: Option<u64>) -> IsolationBound {
    let cap = host.rows().min(host.cols());
    let mut search = IsolationSearch {
        host,
        rows: host.rows(),
        words: host.row_words(0).len(),
        cap,
        budget,
        nodes: 0,
        aborted: false,
        chosen: Vec::new(),
        best: Vec::new(),
    };
    let mut used = vec![0u64; search.words];
    search.dfs(0, &mut used);
    let exhausted = !search.aborted || search.best.len() >= cap;
    IsolationBound {
        size: search.best.len(),
        exhausted,
        nodes: search.nodes,
        best: IsolationSet::new(search.best),
    }
}

/// Largest `i + j` over all-one `i x j` submatrices (0 for the zero matrix).
///
/// Every all-one submatrix sits inside one whose columns are the common ones
/// of its rows, so a search over row subsets with running column
/// intersections covers them all.
pub fn max_all_one_perimeter(m: &BoolMatrix) -> usize {
    fn walk(m: &BoolMatrix, next: usize, size: usize, common: &[u64], best: &mut usize) {
        let width: usize = common.iter().map(|w| w.count_ones() as usize).sum();
        if width == 0 {
            return;
        }
        if size > 0 {
            *best = (*best).max(size + width);
        }
        // even taking every remaining row cannot beat the best
        if size + (m.rows() - next) + width <= *best {
            return;
        }
        for r in next..m.rows() {
            let narrowed: Vec<u64> = common
                .iter()
                .zip(m.row_words(r))
                .map(|(a, b)| a & b)
                .collect();
            walk(m, r + 1, size + 1, &narrowed, best);
        }
    }
    let full = BoolMatrix::ones(1, m.cols());
    let mut best = 0;
    walk(m, 0, 0, full.row_words(0), &mut best);
    best
}

/// Every all-one `i x j` submatrix of `C_{p,q}` has `i + j <= p + 1`.
pub fn all_one_submatrix_check(spec: CirculantSpec) -> Result<bool> {
    if spec.p == 0 || spec.q == 0 {
        return Err(Error::InvalidSpec(format!(
            "p = {}, q = {}",
            spec.p, spec.q
        )));
    }
    let n = spec.n();
    if n > ALL_ONE_ORDER_CAP {
        return Err(Error::Cap {
            order: n,
            cap: ALL_ONE_ORDER_CAP,
        });
    }
    Ok(max_all_one_perimeter(&circulant(spec)?) <= spec.p + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRecord {
    /// Ones in column `i` of `X`.
    pub x_ones: usize,
    /// Ones in row `i` of `Y`.
    pub y_ones: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// One side has more than `p` ones but the other is nonzero.
    Overfull {
        index: usize,
        x_ones: usize,
        y_ones: usize,
    },
    /// Both sides nonzero with `|x_i| + |y_i| > p + 1`.
    PairSum {
        index: usize,
        x_ones: usize,
        y_ones: usize,
    },
    /// Fewer than `n` indices with both sides nonzero.
    TooFewPairs { found: usize, required: usize },
    /// More ones than `(p + 1) n + (r - n) n`.
    TooManyOnes { total: usize, bound: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overfull {
                index,
                x_ones,
                y_ones,
            } => {
                write!(f, "index {index}: |x| = {x_ones}, |y| = {y_ones}, one side exceeds p while the other is nonzero")
            }
            Violation::PairSum {
                index,
                x_ones,
                y_ones,
            } => {
                write!(
                    f,
                    "index {index}: |x| + |y| = {} exceeds p + 1",
                    x_ones + y_ones
                )
            }
            Violation::TooFewPairs { found, required } => {
                write!(
                    f,
                    "{found} indices with both sides nonzero, need {required}"
                )
            }
            Violation::TooManyOnes { total, bound } => write!(f, "{total} ones exceed {bound}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionAudit {
    pub r: usize,
    pub spec: CirculantSpec,
    /// Cyclic variant the product realizes.
    pub shift: usize,
    pub records: Vec<IndexRecord>,
    pub total_ones: usize,
    pub violations: Vec<Violation>,
}

impl DecompositionAudit {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structure forced on any factorization `X * Y` of a cyclic
/// variant of `C_{p,q}`. The pair-count and total-ones bounds apply only
/// when `q >= p - 1`.
pub fn audit_decomposition(
    x: &BoolMatrix,
    y: &BoolMatrix,
    spec: CirculantSpec,
) -> Result<DecompositionAudit> {
    let product = x.bool_product(y)?;
    let shift = is_cyclic_variant(&product, spec).ok_or(Error::NotADecomposition {
        p: spec.p,
        q: spec.q,
    })?;
    let (n, p, r) = (spec.n(), spec.p, x.cols());
    let records: Vec<IndexRecord> = (0..r)
        .map(|i| IndexRecord {
            x_ones: x.col_ones(i),
            y_ones: y.row_ones(i),
        })
        .collect();
    let total_ones = records.iter().map(|rec| rec.x_ones + rec.y_ones).sum();
    let mut violations = Vec::new();
    for (index, rec) in records.iter().enumerate() {
        let (x_ones, y_ones) = (rec.x_ones, rec.y_ones);
        if (x_ones > p && y_ones > 0) || (y_ones > p && x_ones > 0) {
            violations.push(Violation::Overfull {
                index,
                x_ones,
                y_ones,
            });
        }
        if x_ones > 0 && y_ones > 0 && x_ones + y_ones > p + 1 {
            violations.push(Violation::PairSum {
                index,
                x_ones,
                y_ones,
            });
        }
    }
    if spec.q + 1 >= p {
        let found = records
            .iter()
            .filter(|rec| rec.x_ones > 0 && rec.y_ones > 0)
            .count();
        if found < n {
            violations.push(Violation::TooFewPairs { found, required: n });
        }
        let bound = (p + 1) * n + r.saturating_sub(n) * n;
        if total_ones > bound {
            violations.push(Violation::TooManyOnes {
                total: total_ones,
                bound,
            });
        }
    }
    Ok(DecompositionAudit {
        r,
        spec,
        shift,
        records,
        total_ones,
        violations,
    })
}

/// For a verified embedding with `1 <= p <= 2t - 1` and `q >= p - 1`, reports
/// whether `q <= k - 2t + 1`. Refuses certificates outside that range or
/// that fail verification.
pub fn check_theorem2(cert: &Certificate) -> Result<bool> {
    let (t, p, q, k) = (cert.t, cert.p, cert.q, cert.k);
    if t == 0 || p == 0 || p > 2 * t - 1 {
        return Err(Error::range("1 ≤ p ≤ 2t - 1", format!("p = {p}, t = {t}")));
    }
    if q + 1 < p {
        return Err(Error::range("q ≥ p - 1", format!("p = {p}, q = {q}")));
    }
    match cert.verify()? {
        Verdict::Pass { .. } => Ok(q + 2 * t <= k + 1),
        Verdict::CellMismatch { row, col, .. } => {
            Err(Error::Unverified(format!("cell ({row}, {col}) differs")))
        }
        Verdict::Malformed(why) => Err(Error::Unverified(why)),
    }
}

/// `binom(2t, t) + q - 1`: no `C_{p,q}` of larger order embeds for this `t`.
pub fn frankl_kalai_cap(t: usize, q: usize) -> usize {
    binom(2 * t, t).expect("binom(2t, t) fits in usize") + q - 1
}

/// The JSON summary emitted by the `analyze` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub r: usize,
    pub total_ones: usize,
    pub violations: Vec<Violation>,
    /// Whether the isolation search behind `isolation` ran to completion.
    pub exhausted: bool,
    pub isolation: usize,
    pub all_one_ok: Option<bool>,
    pub theorem2: Option<bool>,
}
