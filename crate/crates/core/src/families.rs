//! `t`-uniform set families over `[k] = {1, ..., k}` and their intersection
//! matrices, plus the JSON certificate every command reads and writes.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boolmat::{circulant, BoolMatrix, CirculantSpec};
use crate::error::{Error, Result};

/// A subset of `[k]`, stored as a bitmask where bit `e - 1` marks element `e`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    k: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(k: usize) -> Self {
        Subset {
            k,
            words: vec![0; k.div_ceil(64).max(1)],
        }
    }

    /// Elements are 1-based and must lie in `1..=k`; repeats are rejected.
    pub fn from_elements(k: usize, elements: &[usize]) -> Result<Self> {
        let mut s = Self::empty(k);
        for &e in elements {
            if e == 0 || e > k {
                return Err(Error::InvalidArgument(format!(
                    "element {e} outside the ground set [1, {k}]"
                )));
            }
            if s.contains(e) {
                return Err(Error::InvalidArgument(format!("element {e} repeated")));
            }
            s.insert(e);
        }
        Ok(s)
    }

    #[inline]
    pub fn ground(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e >= 1 && e <= self.k && (self.words[(e - 1) / 64] >> ((e - 1) % 64)) & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        assert!(e >= 1 && e <= self.k, "element {e} outside [1, {}]", self.k);
        self.words[(e - 1) / 64] |= 1 << ((e - 1) % 64);
    }

    pub fn remove(&mut self, e: usize) {
        if e >= 1 && e <= self.k {
            self.words[(e - 1) / 64] &= !(1 << ((e - 1) % 64));
        }
    }

    pub fn with(mut self, e: usize) -> Self {
        self.insert(e);
        self
    }

    /// The same elements viewed over a larger ground set `[k]`.
    pub fn widen(&self, k: usize) -> Self {
        assert!(k >= self.k, "cannot shrink a ground set");
        let mut s = Self::empty(k);
        for e in self.elements() {
            s.insert(e);
        }
        s
    }

    /// Exchanges the roles of elements `a` and `b`.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let (has_a, has_b) = (self.contains(a), self.contains(b));
        let mut s = self.clone();
        if has_a != has_b {
            if has_a {
                s.remove(a);
                s.insert(b);
            } else {
                s.remove(b);
                s.insert(a);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn elements(&self) -> Vec<usize> {
        (1..=self.k).filter(|&e| self.contains(e)).collect()
    }

    /// Characteristic vector of length `k`.
    pub fn characteristic(&self) -> Vec<bool> {
        (1..=self.k).map(|e| self.contains(e)).collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

/// An ordered list of `t`-subsets of `[k]`. Order matters: position `i`
/// labels row or column `i` of an intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    k: usize,
    t: usize,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(k: usize, t: usize, members: Vec<Subset>) -> Result<Self> {
        for (i, m) in members.iter().enumerate() {
            if m.ground() != k {
                return Err(Error::InvalidArgument(format!(
                    "member {i} is over [{}], family is over [{k}]",
                    m.ground()
                )));
            }
            if m.len() != t {
                return Err(Error::Uniformity {
                    row: i,
                    found: m.len(),
                    expected: t,
                });
            }
        }
        Ok(SetFamily { k, t, members })
    }

    pub fn from_lists(k: usize, t: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| Subset::from_elements(k, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, t, members)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when no member is repeated.
    pub fn is_distinct(&self) -> bool {
        let mut sorted: Vec<&Subset> = self.members.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Same members regardless of order (multiplicity counts).
    pub fn same_members(&self, other: &SetFamily) -> bool {
        let mut a: Vec<&Subset> = self.members.iter().collect();
        let mut b: Vec<&Subset> = other.members.iter().collect();
        a.sort();
        b.sort();
        self.k == other.k && a == b
    }

    /// Stacks characteristic vectors as rows: `len x k`.
    pub fn row_matrix(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.len(), self.k, |i, e| self.members[i].contains(e + 1))
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(Subset::elements).collect()
    }
}

/// Row family and column family over a common `[k]` with a common `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPair {
    rows: SetFamily,
    cols: SetFamily,
}

impl FamilyPair {
    pub fn new(rows: SetFamily, cols: SetFamily) -> Result<Self> {
        if rows.k != cols.k || rows.t != cols.t {
            return Err(Error::InvalidArgument(format!(
                "row family is over [{}] with t = {}, column family over [{}] with t = {}",
                rows.k, rows.t, cols.k, cols.t
            )));
        }
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidArgument("families must be nonempty".into()));
        }
        Ok(FamilyPair { rows, cols })
    }

    pub fn rows(&self) -> &SetFamily {
        &self.rows
    }

    pub fn cols(&self) -> &SetFamily {
        &self.cols
    }

    pub fn k(&self) -> usize {
        self.rows.k
    }

    pub fn t(&self) -> usize {
        self.rows.t
    }

    /// Factor matrices `(X, Y)` with `X * Y = intersection_matrix(self)`:
    /// `X` stacks row-member characteristic vectors as rows, `Y` stacks
    /// column-member characteristic vectors as columns.
    pub fn factors(&self) -> (BoolMatrix, BoolMatrix) {
        (self.rows.row_matrix(), self.cols.row_matrix().transpose())
    }

    /// Largest element used by any member.
    pub fn max_element(&self) -> usize {
        self.rows
            .members
            .iter()
            .chain(&self.cols.members)
            .filter_map(|m| m.elements().last().copied())
            .max()
            .unwrap_or(0)
    }
}

/// Intersection matrix of two member lists: `(i, j)` is 1 iff they meet.
pub fn intersection_matrix_of(rows: &[Subset], cols: &[Subset]) -> Result<BoolMatrix> {
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::InvalidArgument("families must be nonempty".into()));
    }
    Ok(BoolMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        rows[i].intersects(&cols[j])
    }))
}

pub fn intersection_matrix(pair: &FamilyPair) -> BoolMatrix {
    BoolMatrix::from_fn(pair.rows.len(), pair.cols.len(), |i, j| {
        pair.rows.members[i].intersects(&pair.cols.members[j])
    })
}

/// Reads row `i` of `x` as the `i`-th member; every row must have `t` ones.
pub fn family_from_matrix_rows(x: &BoolMatrix, t: usize) -> Result<SetFamily> {
    let k = x.cols();
    let members = (0..x.rows())
        .map(|r| {
            let found = x.row_ones(r);
            if found != t {
                return Err(Error::Uniformity {
                    row: r,
                    found,
                    expected: t,
                });
            }
            let mut s = Subset::empty(k);
            for c in x.ones_in_row(r) {
                s.insert(c + 1);
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(k, t, members)
}

pub fn is_q_almost_cross_intersecting(pair: &FamilyPair, q: usize) -> bool {
    if pair.rows.len() != pair.cols.len() {
        return false;
    }
    let m = intersection_matrix(pair);
    let n = m.rows();
    (0..n).all(|i| n - m.row_ones(i) == q && n - m.col_ones(i) == q)
}

/// The family-pair certificate document.
///
/// `shift` records which cyclic variant of the canonical `C_{p,q}` the pair
/// realizes: the intersection matrix equals `rotate_rows(C_{p,q}, shift)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub t: usize,
    pub p: usize,
    pub q: usize,
    pub shift: usize,
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
}

/// Outcome of checking a certificate against its declared target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass {
        p: usize,
        q: usize,
        shift: usize,
    },
    /// The intersection matrix differs from the target at `(row, col)`.
    CellMismatch {
        row: usize,
        col: usize,
        expected: bool,
    },
    /// Matrix is right but a member is not a `t`-subset of `[k]`.
    Malformed(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

impl Certificate {
    pub fn from_pair(pair: &FamilyPair, spec: CirculantSpec, shift: usize) -> Self {
        Certificate {
            k: pair.k(),
            t: pair.t(),
            p: spec.p,
            q: spec.q,
            shift,
            rows: pair.rows.to_lists(),
            cols: pair.cols.to_lists(),
        }
    }

    pub fn spec(&self) -> Result<CirculantSpec> {
        CirculantSpec::new(self.p, self.q)
    }

    pub fn to_pair(&self) -> Result<FamilyPair> {
        FamilyPair::new(
            SetFamily::from_lists(self.k, self.t, &self.rows)?,
            SetFamily::from_lists(self.k, self.t, &self.cols)?,
        )
    }

    /// Target matrix: the canonical circulant rotated by `shift`.
    pub fn target(&self) -> Result<BoolMatrix> {
        let spec = self.spec()?;
        circulant(spec)?.rotate_rows(self.shift as i64)
    }

    /// Checks the intersection matrix cell by cell first, then uniformity,
    /// so a damaged member is reported by the first cell it breaks.
    pub fn verify(&self) -> Result<Verdict> {
        let n = self.p + self.q;
        if self.rows.len() != n || self.cols.len() != n {
            return Ok(Verdict::Malformed(format!(
                "expected {n} rows and columns, found {} and {}",
                self.rows.len(),
                self.cols.len()
            )));
        }
        let to_subsets = |lists: &[Vec<usize>]| {
            lists
                .iter()
                .map(|l| Subset::from_elements(self.k, l))
                .collect::<Result<Vec<_>>>()
        };
        let rows = match to_subsets(&self.rows) {
            Ok(r) => r,
            Err(e) => return Ok(Verdict::Malformed(format!("row family: {e}"))),
        };
        let cols = match to_subsets(&self.cols) {
            Ok(c) => c,
            Err(e) => return Ok(Verdict::Malformed(format!("column family: {e}"))),
        };
        let actual = intersection_matrix_of(&rows, &cols)?;
        let target = self.target()?;
        if let Some((row, col)) = actual.first_difference(&target) {
            return Ok(Verdict::CellMismatch {
                row,
                col,
                expected: target.get(row, col),
            });
        }
        if let Err(e) = self.to_pair() {
            return Ok(Verdict::Malformed(e.to_string()));
        }
        Ok(Verdict::Pass {
            p: self.p,
            q: self.q,
            shift: self.shift,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }

    /// Pretty JSON with one member per line.
    pub fn to_json_string(&self) -> String {
        self.to_json_indented(0) + "\n"
    }

    pub(crate) fn to_json_indented(&self, indent: usize) -> String {
        let pad = " ".repeat(indent);
        let members = |lists: &[Vec<usize>]| {
            let lines: Vec<String> = lists
                .iter()
                .map(|m| {
                    let items: Vec<String> = m.iter().map(usize::to_string).collect();
                    format!("{pad}    [{}]", items.join(", "))
                })
                .collect();
            lines.join(",\n")
        };
        format!(
            "{{\n{pad}  \"k\": {},\n{pad}  \"t\": {},\n{pad}  \"p\": {},\n{pad}  \"q\": {},\n{pad}  \"shift\": {},\n\
             {pad}  \"rows\": [\n{}\n{pad}  ],\n{pad}  \"cols\": [\n{}\n{pad}  ]\n{pad}}}",
            self.k,
            self.t,
            self.p,
            self.q,
            self.shift,
            members(&self.rows),
            members(&self.cols),
        )
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, self.to_json_string().as_bytes())
    }
}
