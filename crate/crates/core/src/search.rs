//! Exhaustive decision procedure for "does `C_{p,q}` occur as a submatrix of
//! `A_{k,t}`?".
//!
//! The search assigns column members `B_0, B_1, ...` in order. Row members
//! never enter the search tree: once the columns are fixed, each row only
//! needs *some* `t`-subset that avoids every column it must miss and meets
//! every column it must hit, and different rows do not constrain each other.
//! Every row therefore carries a bitset of still-feasible `t`-subsets, which
//! is narrowed as columns are placed; an empty bitset prunes the branch.
//!
//! Two symmetries are broken, both optional:
//!
//! * relabeling: elements that no constraint distinguishes enter the column
//!   list in first-use order, so a new element is always the smallest unused one;
//! * rotation: a simultaneous cyclic shift of rows and columns maps a
//!   circulant target to itself, so the column list is rotated until
//!   `|B_0 ∩ B_1|` is the largest of the cyclically consecutive overlaps
//!   `|B_j ∩ B_{j+1}|`. The overlap sizes do not depend on labels, which keeps
//!   this compatible with the relabeling rule.

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::boolmat::{circulant, BoolMatrix, CirculantSpec};
use crate::combin::{binom, k_subsets};
use crate::error::{Error, Result};
use crate::families::{intersection_matrix, Certificate, FamilyPair, SetFamily, Subset};

/// Largest ground set the search handles (members are 64-bit masks).
pub const MAX_GROUND: usize = 64;
/// Largest order `p + q` accepted.
pub const MAX_ORDER: usize = 64;
/// Largest number of candidate `t`-subsets, `binom(k, t)`.
pub const MAX_UNIVERSE: usize = 1 << 13;

/// Environment variable consulted for the worker count when no explicit
/// count is given.
pub const WORKERS_ENV: &str = "CIRCFAM_WORKERS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub relabel: bool,
    pub rotation: bool,
}

impl Symmetry {
    pub const ALL: Symmetry = Symmetry {
        relabel: true,
        rotation: true,
    };
    pub const NONE: Symmetry = Symmetry {
        relabel: false,
        rotation: false,
    };
}

impl Default for Symmetry {
    fn default() -> Self {
        Symmetry::ALL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Witness,
    Nonexistent,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Witness => "witness",
            Status::Nonexistent => "nonexistent",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: Status,
    pub witness: Option<FamilyPair>,
    pub nodes: u64,
    pub exhausted: bool,
    pub elapsed: Duration,
}

/// Does the canonical circulant, rotated by `target_shift`, embed in `A_{k,t}`?
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub k: usize,
    pub t: usize,
    pub spec: CirculantSpec,
    pub target_shift: usize,
    pub symmetry: Symmetry,
    pub limits: SearchLimits,
    /// `None` reads [`WORKERS_ENV`], falling back to the available parallelism.
    pub workers: Option<usize>,
    /// Explore first-level branches serially in canonical order, so the
    /// reported witness does not depend on thread scheduling.
    pub deterministic: bool,
}

impl SearchProblem {
    pub fn new(k: usize, t: usize, p: usize, q: usize) -> Result<Self> {
        let problem = SearchProblem {
            k,
            t,
            spec: CirculantSpec { p, q },
            target_shift: 0,
            symmetry: Symmetry::ALL,
            limits: SearchLimits::default(),
            workers: None,
            deterministic: false,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        let (k, t, p, q) = (self.k, self.t, self.spec.p, self.spec.q);
        if t == 0 {
            return Err(Error::range("t ≥ 1", format!("t = {t}")));
        }
        if p == 0 || q == 0 {
            return Err(Error::range("p, q > 0", format!("p = {p}, q = {q}")));
        }
        if k < 2 * t {
            return Err(Error::range(
                "k ≥ 2t",
                format!("k = {k}, t = {t}: A_(k,t) is all-one"),
            ));
        }
        let cap = binom(2 * t, t).unwrap_or(usize::MAX);
        if p >= cap {
            return Err(Error::range(
                "p ≤ binom(2t, t) - 1",
                format!("p = {p}, binom({}, {t}) = {cap}", 2 * t),
            ));
        }
        if k > MAX_GROUND {
            return Err(Error::Cap {
                order: k,
                cap: MAX_GROUND,
            });
        }
        if p + q > MAX_ORDER {
            return Err(Error::Cap {
                order: p + q,
                cap: MAX_ORDER,
            });
        }
        let universe = binom(k, t).unwrap_or(usize::MAX);
        if universe > MAX_UNIVERSE {
            return Err(Error::range(
                format!("binom(k, t) ≤ {MAX_UNIVERSE}"),
                format!("binom({k}, {t}) = {universe}"),
            ));
        }
        Ok(())
    }

    pub fn target(&self) -> Result<BoolMatrix> {
        circulant(self.spec)?.rotate_rows(self.target_shift as i64)
    }

    pub fn certificate(&self, witness: &FamilyPair) -> Certificate {
        Certificate::from_pair(witness, self.spec, self.target_shift)
    }
}

pub fn resolve_workers(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(WORKERS_ENV).ok()?.parse().ok())
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
        .max(1)
}

pub fn decide_embedding(problem: &SearchProblem) -> Result<SearchOutcome> {
    problem.validate()?;
    let mut query = EmbeddingQuery::new(problem.k, problem.t, problem.target()?)?;
    query.relabel = problem.symmetry.relabel;
    query.rotation = problem.symmetry.rotation;
    let workers = if problem.deterministic {
        1
    } else {
        resolve_workers(problem.workers)
    };
    query.run(problem.limits, workers)
}

/// A general embedding query: find `t`-subsets of `[k]` for rows and columns
/// whose intersection pattern is exactly `target`, optionally forcing some
/// elements into or out of particular members.
#[derive(Clone, Debug)]
pub struct EmbeddingQuery {
    k: usize,
    t: usize,
    target: BoolMatrix,
    row_require: Vec<u64>,
    row_forbid: Vec<u64>,
    col_require: Vec<u64>,
    col_forbid: Vec<u64>,
    pub relabel: bool,
    pub rotation: bool,
}

impl EmbeddingQuery {
    pub fn new(k: usize, t: usize, target: BoolMatrix) -> Result<Self> {
        if t == 0 || k < t {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= t <= k, got t = {t}, k = {k}"
            )));
        }
        if k > MAX_GROUND {
            return Err(Error::Cap {
                order: k,
                cap: MAX_GROUND,
            });
        }
        let universe = binom(k, t).unwrap_or(usize::MAX);
        if universe > MAX_UNIVERSE {
            return Err(Error::range(
                format!("binom(k, t) ≤ {MAX_UNIVERSE}"),
                format!("binom({k}, {t}) = {universe}"),
            ));
        }
        let (rows, cols) = (target.rows(), target.cols());
        Ok(EmbeddingQuery {
            k,
            t,
            target,
            row_require: vec![0; rows],
            row_forbid: vec![0; rows],
            col_require: vec![0; cols],
            col_forbid: vec![0; cols],
            relabel: true,
            rotation: false,
        })
    }

    fn bit(&self, element: usize) -> u64 {
        assert!(
            element >= 1 && element <= self.k,
            "element {element} outside [1, {}]",
            self.k
        );
        1u64 << (element - 1)
    }

    pub fn require_in_row(&mut self, row: usize, element: usize) {
        self.row_require[row] |= self.bit(element);
    }

    pub fn forbid_in_row(&mut self, row: usize, element: usize) {
        self.row_forbid[row] |= self.bit(element);
    }

    pub fn require_in_col(&mut self, col: usize, element: usize) {
        self.col_require[col] |= self.bit(element);
    }

    pub fn forbid_in_col(&mut self, col: usize, element: usize) {
        self.col_forbid[col] |= self.bit(element);
    }

    /// Elements mentioned by no require/forbid constraint.
    fn free_elements(&self) -> u64 {
        let all = if self.k == 64 {
            u64::MAX
        } else {
            (1u64 << self.k) - 1
        };
        let touched = self
            .row_require
            .iter()
            .chain(&self.row_forbid)
            .chain(&self.col_require)
            .chain(&self.col_forbid)
            .fold(0, |acc, m| acc | m);
        all & !touched
    }

    fn constrained(&self) -> bool {
        self.free_elements().count_ones() as usize != self.k
    }

    fn rotation_allowed(&self) -> bool {
        let n = self.target.rows();
        self.target.is_square()
            && !self.constrained()
            && (0..n).all(|r| {
                (0..n).all(|c| self.target.get(r, c) == self.target.get((r + 1) % n, (c + 1) % n))
            })
    }

    pub fn run(&self, limits: SearchLimits, workers: usize) -> Result<SearchOutcome> {
        if self.rotation && !self.rotation_allowed() {
            return Err(Error::InvalidArgument(
                "rotation symmetry needs a shift-invariant target without element constraints"
                    .into(),
            ));
        }
        let start = Instant::now();
        let tables = Tables::build(self);
        let shared = Shared {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            budget_hit: AtomicBool::new(false),
            witness: Mutex::new(None),
            limits,
            start,
        };

        let prefixes = tables.first_level(self);
        if prefixes.is_empty() {
            // Only possible when some column domain is empty or the first
            // level prunes everything.
            return Ok(SearchOutcome {
                status: Status::Nonexistent,
                witness: None,
                nodes: 1,
                exhausted: true,
                elapsed: start.elapsed(),
            });
        }

        let next = AtomicUsize::new(0);
        let run_worker = || {
            let mut w = Worker::new(self, &tables, &shared);
            loop {
                if shared.stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(prefix) = prefixes.get(i) else { break };
                if let Some(found) = w.explore(prefix) {
                    let mut slot = shared.witness.lock().unwrap();
                    if slot.is_none() {
                        *slot = Some(found);
                    }
                    shared.stop.store(true, Ordering::Relaxed);
                    break;
                }
            }
        };
        let workers = workers.clamp(1, prefixes.len());
        if workers == 1 {
            run_worker();
        } else {
            std::thread::scope(|s| {
                for _ in 0..workers {
                    s.spawn(run_worker);
                }
            });
        }

        let nodes = shared.nodes.load(Ordering::Relaxed) + 1;
        let witness = shared.witness.into_inner().unwrap();
        let budget_hit = shared.budget_hit.load(Ordering::Relaxed);
        let (status, exhausted) = match (&witness, budget_hit) {
            (Some(_), _) => (Status::Witness, false),
            (None, false) => (Status::Nonexistent, true),
            (None, true) => (Status::Inconclusive, false),
        };
        let witness = witness
            .map(|(rows, cols)| self.to_pair(&tables, &rows, &cols))
            .transpose()?;
        if let Some(pair) = &witness {
            // Never trust search state: re-derive the matrix from the sets.
            if intersection_matrix(pair) != self.target {
                return Err(Error::Unverified(
                    "search produced a pair whose intersection matrix differs from the target"
                        .into(),
                ));
            }
        }
        Ok(SearchOutcome {
            status,
            witness,
            nodes,
            exhausted,
            elapsed: start.elapsed(),
        })
    }

    fn to_pair(&self, tables: &Tables, rows: &[usize], cols: &[usize]) -> Result<FamilyPair> {
        let to_family = |idx: &[usize]| {
            let members = idx
                .iter()
                .map(|&u| {
                    let mask = tables.universe[u];
                    let elems: Vec<usize> = (0..self.k)
                        .filter(|e| mask >> e & 1 == 1)
                        .map(|e| e + 1)
                        .collect();
                    Subset::from_elements(self.k, &elems)
                })
                .collect::<Result<Vec<_>>>()?;
            SetFamily::new(self.k, self.t, members)
        };
        FamilyPair::new(to_family(rows)?, to_family(cols)?)
    }
}

/// Precomputed candidate tables shared read-only by all workers.
struct Tables {
    /// Every `t`-subset of `[k]` as a mask, lexicographic by element list.
    universe: Vec<u64>,
    words: usize,
    /// `hits[u]`: bitset of candidates meeting candidate `u`.
    hits: Vec<u64>,
    row_domain: Vec<u64>,
    col_domain: Vec<u64>,
    /// Target row `i` restricted to columns, as `target_bits[i * cols + j]`.
    target_bits: Vec<bool>,
    rows: usize,
    cols: usize,
    free: u64,
}

impl Tables {
    fn build(q: &EmbeddingQuery) -> Tables {
        let universe: Vec<u64> = k_subsets(q.k, q.t)
            .into_iter()
            .map(|s| s.into_iter().fold(0u64, |m, e| m | 1 << e))
            .collect();
        let u = universe.len();
        let words = u.div_ceil(64);
        let mut hits = vec![0u64; u * words];
        for (a, &ma) in universe.iter().enumerate() {
            for (b, &mb) in universe.iter().enumerate() {
                if ma & mb != 0 {
                    hits[a * words + b / 64] |= 1 << (b % 64);
                }
            }
        }
        let domain = |require: u64, forbid: u64| {
            let mut d = vec![0u64; words];
            for (i, &m) in universe.iter().enumerate() {
                if m & require == require && m & forbid == 0 {
                    d[i / 64] |= 1 << (i % 64);
                }
            }
            d
        };
        let (rows, cols) = (q.target.rows(), q.target.cols());
        let row_domain = (0..rows)
            .flat_map(|i| domain(q.row_require[i], q.row_forbid[i]))
            .collect();
        let col_domain = (0..cols)
            .flat_map(|j| domain(q.col_require[j], q.col_forbid[j]))
            .collect();
        let target_bits = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| q.target.get(i, j))
            .collect();
        Tables {
            universe,
            words,
            hits,
            row_domain,
            col_domain,
            target_bits,
            rows,
            cols,
            free: if q.relabel { q.free_elements() } else { 0 },
        }
    }

    /// Candidate choices for columns 0 and 1 that survive the first checks.
    /// Each becomes an independent unit of work.
    fn first_level(&self, q: &EmbeddingQuery) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let depth = self.cols.min(2);
        let mut stack: Vec<usize> = Vec::new();
        self.enumerate_prefixes(q, depth, &mut stack, &mut out);
        out
    }

    fn enumerate_prefixes(
        &self,
        q: &EmbeddingQuery,
        depth: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let j = stack.len();
        if j == depth {
            out.push(stack.clone());
            return;
        }
        for u in iter_bits(&self.col_domain[j * self.words..(j + 1) * self.words]) {
            if self.admissible(q, stack, u) {
                stack.push(u);
                self.enumerate_prefixes(q, depth, stack, out);
                stack.pop();
            }
        }
    }

    /// Symmetry and distinctness checks for placing candidate `u` at column
    /// `stack.len()` after the columns in `stack`.
    #[inline]
    fn admissible(&self, q: &EmbeddingQuery, stack: &[usize], u: usize) -> bool {
        let j = stack.len();
        let b = self.universe[u];
        if stack.contains(&u) {
            return false;
        }
        if self.free != 0 {
            let used = stack.iter().fold(0u64, |m, &v| m | self.universe[v]);
            let fresh_pool = self.free & !used;
            let fresh = b & fresh_pool;
            let m = fresh.count_ones();
            if fresh != lowest_bits(fresh_pool, m) {
                return false;
            }
        }
        if q.rotation && j >= 2 {
            let d0 = (self.universe[stack[0]] & self.universe[stack[1]]).count_ones();
            let d = (self.universe[stack[j - 1]] & b).count_ones();
            if d > d0 {
                return false;
            }
            if j == self.cols - 1 && (b & self.universe[stack[0]]).count_ones() > d0 {
                return false;
            }
        }
        true
    }
}

#[inline]
fn lowest_bits(mut pool: u64, m: u32) -> u64 {
    let mut out = 0;
    for _ in 0..m {
        if pool == 0 {
            break;
        }
        let low = pool & pool.wrapping_neg();
        out |= low;
        pool &= pool - 1;
    }
    out
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
    witness: Mutex<Option<(Vec<usize>, Vec<usize>)>>,
    limits: SearchLimits,
    start: Instant,
}

struct Worker<'a> {
    q: &'a EmbeddingQuery,
    tab: &'a Tables,
    shared: &'a Shared,
    /// Row candidate bitsets, one layer per placed column.
    layers: Vec<Vec<u64>>,
    cols: Vec<usize>,
    local_nodes: u64,
    flush_every: u64,
}

const NODE_FLUSH: u64 = 1024;

impl<'a> Worker<'a> {
    fn new(q: &'a EmbeddingQuery, tab: &'a Tables, shared: &'a Shared) -> Self {
        let mut layers = vec![vec![0u64; tab.rows * tab.words]; tab.cols + 1];
        layers[0].copy_from_slice(&tab.row_domain);
        Worker {
            q,
            tab,
            shared,
            layers,
            cols: Vec::with_capacity(tab.cols),
            local_nodes: 0,
            flush_every: shared
                .limits
                .max_nodes
                .map_or(NODE_FLUSH, |m| (m / 16).clamp(1, NODE_FLUSH)),
        }
    }

    fn explore(&mut self, prefix: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        self.cols.clear();
        for &u in prefix {
            if !self.place(u) {
                self.flush();
                return None;
            }
        }
        let found = self.dfs();
        self.flush();
        found
    }

    fn flush(&mut self) {
        self.shared
            .nodes
            .fetch_add(self.local_nodes, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn out_of_budget(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes >= self.flush_every {
            self.flush();
            let lim = &self.shared.limits;
            let over_nodes = lim
                .max_nodes
                .is_some_and(|m| self.shared.nodes.load(Ordering::Relaxed) >= m);
            let over_time = lim
                .max_time
                .is_some_and(|t| self.shared.start.elapsed() >= t);
            if over_nodes || over_time {
                self.shared.budget_hit.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
        self.shared.stop.load(Ordering::Relaxed)
    }

    /// Places candidate `u` at the next column, narrowing every row. Returns
    /// false (leaving the column unplaced) if some row runs out of candidates.
    fn place(&mut self, u: usize) -> bool {
        let j = self.cols.len();
        let w = self.tab.words;
        let hits = &self.tab.hits[u * w..(u + 1) * w];
        let (lo, hi) = self.layers.split_at_mut(j + 1);
        let (prev, next) = (&lo[j], &mut hi[0]);
        for i in 0..self.tab.rows {
            let must_hit = self.tab.target_bits[i * self.tab.cols + j];
            let src = &prev[i * w..(i + 1) * w];
            let dst = &mut next[i * w..(i + 1) * w];
            let mut any = 0u64;
            for x in 0..w {
                let h = if must_hit { hits[x] } else { !hits[x] };
                dst[x] = src[x] & h;
                any |= dst[x];
            }
            if any == 0 {
                return false;
            }
        }
        self.cols.push(u);
        true
    }

    fn dfs(&mut self) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.out_of_budget() {
            return None;
        }
        let j = self.cols.len();
        if j == self.tab.cols {
            return self.assemble_rows().map(|rows| (rows, self.cols.clone()));
        }
        let w = self.tab.words;
        let domain = &self.tab.col_domain[j * w..(j + 1) * w];
        for u in iter_bits(domain) {
            if !self.tab.admissible(self.q, &self.cols, u) {
                continue;
            }
            if self.place(u) {
                if let Some(found) = self.dfs() {
                    return Some(found);
                }
                self.cols.pop();
            }
            if self.shared.stop.load(Ordering::Relaxed) {
                return None;
            }
        }
        None
    }

    /// Picks, for each row, the least feasible candidate not already taken by
    /// an earlier row. Rows of a circulant target are pairwise different, so
    /// their feasible sets are disjoint and the greedy choice never collides.
    fn assemble_rows(&self) -> Option<Vec<usize>> {
        let w = self.tab.words;
        let layer = &self.layers[self.tab.cols];
        let mut chosen: Vec<usize> = Vec::with_capacity(self.tab.rows);
        for i in 0..self.tab.rows {
            let pick = iter_bits(&layer[i * w..(i + 1) * w]).find(|u| !chosen.contains(u))?;
            chosen.push(pick);
        }
        Some(chosen)
    }
}

/// Search for the base level of the recursive `q = 2` construction: families
/// of 3-subsets realizing `C_{8,2}` with first row `(0,0,1,..,1)` and marker
/// elements `a`, `b` placed as the recursion requires (`h = 5`, 1-based):
/// `a` in exactly `G_1..G_5` and `F_6..F_9`, `b` in exactly `G_6..G_10` and
/// `F_1..F_4`.
pub fn recursive_q2_base_query(k: usize, a: usize, b: usize) -> Result<EmbeddingQuery> {
    let n = 10;
    let h = n / 2;
    if a == b || a == 0 || b == 0 || a > k || b > k {
        return Err(Error::InvalidArgument(format!(
            "bad markers a = {a}, b = {b} for k = {k}"
        )));
    }
    let target = circulant(CirculantSpec { p: 8, q: 2 })?.rotate_rows(n as i64 - 1)?;
    let mut query = EmbeddingQuery::new(k, 3, target)?;
    for j in 0..n {
        let (inside, outside) = if j < h { (a, b) } else { (b, a) };
        query.require_in_col(j, inside);
        query.forbid_in_col(j, outside);
    }
    for i in 0..n {
        // 0-based: rows 0..h-1 carry b, rows h..n-2 carry a, rows h-1 and n-1 neither
        match i {
            i if i < h - 1 => {
                query.require_in_row(i, b);
                query.forbid_in_row(i, a);
            }
            i if i >= h && i < n - 1 => {
                query.require_in_row(i, a);
                query.forbid_in_row(i, b);
            }
            _ => {
                query.forbid_in_row(i, a);
                query.forbid_in_row(i, b);
            }
        }
    }
    Ok(query)
}

/// One cell of a sweep, as streamed in JSON lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub k: usize,
    pub t: usize,
    pub p: usize,
    pub q: usize,
    /// `witness`, `nonexistent`, `inconclusive`, or `error`.
    pub status: String,
    pub nodes: u64,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub witness: Option<Certificate>,
}

impl SweepRecord {
    pub fn key(&self) -> (usize, usize, usize, usize) {
        (self.k, self.t, self.p, self.q)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    pub symmetry: Option<Symmetry>,
    pub limits: SearchLimits,
    pub workers: Option<usize>,
    pub deterministic: bool,
}

/// Runs `decide_embedding` over every `(p, q, k)` cell, in order `p`, `q`, `k`.
/// Cells for which `skip` returns true are not run (resuming a sweep).
/// Witnesses are re-verified from the certificate before being recorded.
pub fn sweep(
    t: usize,
    p_range: RangeInclusive<usize>,
    q_range: RangeInclusive<usize>,
    k_range: RangeInclusive<usize>,
    options: &SweepOptions,
    skip: impl Fn(usize, usize, usize) -> bool,
    mut on_record: impl FnMut(&SweepRecord),
) -> Vec<SweepRecord> {
    let mut table = Vec::new();
    for p in p_range {
        for q in q_range.clone() {
            for k in k_range.clone() {
                if skip(p, q, k) {
                    continue;
                }
                let record = sweep_cell(k, t, p, q, options);
                on_record(&record);
                table.push(record);
            }
        }
    }
    table
}

fn sweep_cell(k: usize, t: usize, p: usize, q: usize, options: &SweepOptions) -> SweepRecord {
    let start = Instant::now();
    let mut record = SweepRecord {
        k,
        t,
        p,
        q,
        status: String::new(),
        nodes: 0,
        seconds: 0.0,
        error: None,
        witness: None,
    };
    let outcome = SearchProblem::new(k, t, p, q).and_then(|mut problem| {
        if let Some(sym) = options.symmetry {
            problem.symmetry = sym;
        }
        problem.limits = options.limits;
        problem.workers = options.workers;
        problem.deterministic = options.deterministic;
        let outcome = decide_embedding(&problem)?;
        let cert = outcome.witness.as_ref().map(|w| problem.certificate(w));
        Ok((outcome, cert))
    });
    match outcome {
        Ok((outcome, cert)) => {
            record.nodes = outcome.nodes;
            record.status = outcome.status.to_string();
            if let Some(cert) = cert {
                match cert.verify() {
                    Ok(v) if v.is_pass() => record.witness = Some(cert),
                    Ok(v) => {
                        record.status = "error".into();
                        record.error = Some(format!("witness failed re-verification: {v:?}"));
                    }
                    Err(e) => {
                        record.status = "error".into();
                        record.error = Some(e.to_string());
                    }
                }
            }
        }
        Err(e) => {
            record.status = "error".into();
            record.error = Some(e.to_string());
        }
    }
    record.seconds = start.elapsed().as_secs_f64();
    record
}
