//! Explicit constructions of family pairs realizing `C_{p,q}`.
//!
//! Each constructor returns a [`ConstructionReport`] carrying the pair, the
//! cyclic variant it realizes (`shift`), and how much of the ground set it
//! actually uses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boolmat::{circulant, is_cyclic_variant, BoolMatrix, CirculantSpec};
use crate::combin::{binom, k_subsets};
use crate::error::{Error, Result};
use crate::families::{
    family_from_matrix_rows, intersection_matrix, Certificate, FamilyPair, SetFamily, Subset,
};
use crate::search::{recursive_q2_base_query, SearchLimits, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SmallP,
    MidP,
    Blowup,
    RecursiveQ2,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::SmallP => "small-p",
            Method::MidP => "mid-p",
            Method::Blowup => "blowup",
            Method::RecursiveQ2 => "recursive-q2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub pair: FamilyPair,
    pub spec: CirculantSpec,
    /// The intersection matrix is `rotate_rows(C_{p,q}, shift)`.
    pub shift: usize,
    pub k_used: usize,
    pub method: Method,
    /// Human-readable derivation steps (chosen parameters, block layout).
    pub trace: Vec<String>,
}

impl ConstructionReport {
    /// Recomputes the intersection matrix and checks it against the declared variant.
    pub fn verify(&self) -> bool {
        is_cyclic_variant(&intersection_matrix(&self.pair), self.spec) == Some(self.shift)
            && self.k_used <= self.pair.k()
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::from_pair(&self.pair, self.spec, self.shift)
    }

    pub fn order(&self) -> usize {
        self.spec.n()
    }
}

fn square(spec: CirculantSpec) -> Result<BoolMatrix> {
    circulant(spec)
}

/// Returns `(C_{i,z-i}, C_{j,z-j}, C_{i,z-i} * C_{j,z-j})`; the product is
/// `C_{i+j-1, z-i-j+1}`.
pub fn circulant_factor_identity(
    i: usize,
    j: usize,
    z: usize,
) -> Result<(BoolMatrix, BoolMatrix, BoolMatrix)> {
    if i == 0 || j == 0 || i + j - 1 > z {
        return Err(Error::range(
            "i, j ≥ 1 and i + j - 1 ≤ z",
            format!("i = {i}, j = {j}, z = {z}"),
        ));
    }
    let a = square(CirculantSpec { p: i, q: z - i })?;
    let b = square(CirculantSpec { p: j, q: z - j })?;
    let product = a.bool_product(&b)?;
    Ok((a, b, product))
}

/// Factor split used for `1 <= p <= 2t-1`: `i = min(t, p)`, `j = p + 1 - i`.
pub fn small_p_split(t: usize, p: usize) -> (usize, usize) {
    let i = t.min(p);
    (i, p + 1 - i)
}

/// Factor matrices for the small-`p` construction over `[k]`:
/// `X = [C_{i,n-i} | O_{n,t-j} | J_{n,t-i} | 0]` and
/// `Y = [C_{j,n-j} ; J_{t-j,n} ; O_{t-i,n} ; 0]`, padded with zero columns
/// (rows) up to `k`.
pub fn small_p_factors(t: usize, p: usize, q: usize, k: usize) -> Result<(BoolMatrix, BoolMatrix)> {
    check_small_p(t, p, q, k)?;
    let n = p + q;
    let (i, j) = small_p_split(t, p);
    let ci = CirculantSpec { p: i, q: n - i };
    let cj = CirculantSpec { p: j, q: n - j };
    // ground layout: [n circulant positions | t-j filler | t-i filler]
    let filler_j = n..n + (t - j);
    let filler_i = n + (t - j)..n + (t - j) + (t - i);
    let x = BoolMatrix::from_fn(n, k, |r, c| {
        if c < n {
            ci.entry(r, c)
        } else {
            filler_i.contains(&c)
        }
    });
    let y = BoolMatrix::from_fn(k, n, |r, c| {
        if r < n {
            cj.entry(r, c)
        } else {
            filler_j.contains(&r)
        }
    });
    Ok((x, y))
}

fn check_small_p(t: usize, p: usize, q: usize, k: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::range("t ≥ 1", format!("t = {t}")));
    }
    if k < 2 * t {
        return Err(Error::range("k ≥ 2t", format!("k = {k}, t = {t}")));
    }
    if p < 1 || p > 2 * t - 1 {
        return Err(Error::range("1 ≤ p ≤ 2t - 1", format!("p = {p}, t = {t}")));
    }
    if q < 1 || q + 2 * t > k + 1 {
        return Err(Error::range(
            "1 ≤ q ≤ k - 2t + 1",
            format!("q = {q}, k = {k}, t = {t}"),
        ));
    }
    Ok(())
}

/// Canonical `C_{p,q}` from two circulant factors, for `1 <= p <= 2t-1` and
/// `1 <= q <= k-2t+1`. Uses `q + 2t - 1` ground elements.
pub fn construct_small_p(t: usize, p: usize, q: usize, k: usize) -> Result<ConstructionReport> {
    let (x, y) = small_p_factors(t, p, q, k)?;
    let (i, j) = small_p_split(t, p);
    let n = p + q;
    let rows = family_from_matrix_rows(&x, t)?;
    let cols = family_from_matrix_rows(&y.transpose(), t)?;
    let k_used = q + 2 * t - 1;
    Ok(ConstructionReport {
        pair: FamilyPair::new(rows, cols)?,
        spec: CirculantSpec { p, q },
        shift: 0,
        k_used,
        method: Method::SmallP,
        trace: vec![
            format!("split i = {i}, j = {j} (i + j - 1 = {p})"),
            format!("C_({i},{}) * C_({j},{}) = C_({p},{q})", n - i, n - j),
            format!(
                "ground layout: 1..={n} circulant, {} column filler, {} row filler",
                t - j,
                t - i
            ),
            format!("k_used = q + 2t - 1 = {k_used} <= k = {k}"),
        ],
    })
}

/// Layout of the generating row of `X` in the mid-`p` construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MidPGenerator {
    /// `floor(p / t)`
    pub blocks: usize,
    /// `p mod t`
    pub remainder: usize,
    /// `(0, .., 0, 1)` of length `t`
    pub unit: Vec<bool>,
    pub row: Vec<bool>,
}

fn check_mid_p(t: usize, p: usize, q: usize) -> Result<()> {
    if t < 2 {
        return Err(Error::range("t ≥ 2", format!("t = {t}")));
    }
    if p < 2 * t {
        return Err(Error::range("p ≥ 2t", format!("p = {p}, t = {t}")));
    }
    if p > t * t {
        return Err(Error::range("p ≤ t²", format!("p = {p}, t^2 = {}", t * t)));
    }
    if q == 0 {
        return Err(Error::range("q > 0", "q = 0"));
    }
    Ok(())
}

/// First row of `X`: `q` zeros, `blocks - 1` copies of the unit vector, then
/// either `blocks - 1` zeros and `t - blocks + 1` ones (no remainder), or
/// `blocks` zeros, `t - blocks` ones and a final `remainder`-long `(0,..,0,1)`.
pub fn mid_p_generator(t: usize, p: usize, q: usize) -> Result<MidPGenerator> {
    check_mid_p(t, p, q)?;
    let (blocks, remainder) = (p / t, p % t);
    let unit: Vec<bool> = (0..t).map(|i| i == t - 1).collect();
    let mut row = vec![false; q];
    for _ in 0..blocks - 1 {
        row.extend(&unit);
    }
    if remainder == 0 {
        row.extend(std::iter::repeat_n(false, blocks - 1));
        row.extend(std::iter::repeat_n(true, t - blocks + 1));
    } else {
        row.extend(std::iter::repeat_n(false, blocks));
        row.extend(std::iter::repeat_n(true, t - blocks));
        row.extend((0..remainder).map(|i| i == remainder - 1));
    }
    debug_assert_eq!(row.len(), p + q);
    debug_assert_eq!(row.iter().filter(|&&b| b).count(), t);
    Ok(MidPGenerator {
        blocks,
        remainder,
        unit,
        row,
    })
}

/// Circulant factors for `2t <= p <= t^2`: `X` is generated by its first row
/// (each row the previous shifted right), `Y` by its first column of `t`
/// ones followed by `p + q - t` zeros.
pub fn mid_p_factors(t: usize, p: usize, q: usize) -> Result<(BoolMatrix, BoolMatrix)> {
    let generator = mid_p_generator(t, p, q)?;
    let n = p + q;
    let x = BoolMatrix::from_fn(n, n, |r, c| generator.row[(c + n - r) % n]);
    let y = BoolMatrix::from_fn(n, n, |r, c| (r + n - c) % n < t);
    Ok((x, y))
}

/// `C_{p,q}` with first row `q` zeros then `p` ones (shift `n - 1`), over
/// `[p + q]`, for `2t <= p <= t^2`.
pub fn construct_mid_p(t: usize, p: usize, q: usize) -> Result<ConstructionReport> {
    let generator = mid_p_generator(t, p, q)?;
    let (x, y) = mid_p_factors(t, p, q)?;
    let n = p + q;
    let rows = family_from_matrix_rows(&x, t)?;
    let cols = family_from_matrix_rows(&y.transpose(), t)?;
    let row_text: String = generator
        .row
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    Ok(ConstructionReport {
        pair: FamilyPair::new(rows, cols)?,
        spec: CirculantSpec { p, q },
        shift: n - 1,
        k_used: n,
        method: Method::MidP,
        trace: vec![
            format!(
                "floor(p/t) = {}, p mod t = {}",
                generator.blocks, generator.remainder
            ),
            format!("first row of X: {row_text}"),
            format!("Y generated by {t} ones followed by {} zeros", n - t),
            format!(
                "realizes the variant with first row 0^{q} 1^{p} (shift {})",
                n - 1
            ),
        ],
    })
}

/// `C_{p,q}` with `p = q (binom(2t/q, t/q) - 1)` from `q` interleaved copies
/// of the crown-graph realization by all `(t/q)`-subsets of `[2t/q]`.
///
/// Copy `i` owns elements `2(t/q) i + 1 ..= 2(t/q)(i + 1)`; the `t - t/q`
/// shared row padding elements follow at `2t + 1 ..= 3t - t/q`.
pub fn construct_blowup(t: usize, q: usize) -> Result<ConstructionReport> {
    if q == 0 {
        return Err(Error::range("q > 0", "q = 0"));
    }
    if t < q {
        return Err(Error::range("t ≥ q", format!("t = {t}, q = {q}")));
    }
    if !t.is_multiple_of(q) {
        return Err(Error::Divisibility { t, q });
    }
    let s = t / q;
    let half = k_subsets(2 * s, s);
    let blocks = half.len();
    let n = q * blocks;
    let p = n - q;
    let k_used = 3 * t - s;
    let copy_element = |copy: usize, local: usize| 2 * s * copy + local + 1;

    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let (copy, block) = (r % q, r / q);
        let mut m = Subset::empty(k_used);
        for &e in &half[block] {
            m.insert(copy_element(copy, e));
        }
        for e in 2 * t + 1..=k_used {
            m.insert(e);
        }
        rows.push(m);
    }
    let mut cols = Vec::with_capacity(n);
    for c in 0..n {
        let mut m = Subset::empty(k_used);
        for copy in 0..q {
            // block of column c inside row class `copy`; its zero rows are
            // exactly those whose block index equals this one
            let block = ((c + n - copy - 1) % n) / q;
            for e in (0..2 * s).filter(|e| !half[block].contains(e)) {
                m.insert(copy_element(copy, e));
            }
        }
        cols.push(m);
    }
    let pair = FamilyPair::new(
        SetFamily::new(k_used, t, rows)?,
        SetFamily::new(k_used, t, cols)?,
    )?;
    Ok(ConstructionReport {
        pair,
        spec: CirculantSpec { p, q },
        shift: 0,
        k_used,
        method: Method::Blowup,
        trace: vec![
            format!("t/q = {s}, binom({}, {s}) = {blocks}", 2 * s),
            format!("p = q * (binom - 1) = {p}, order {n}"),
            format!(
                "{q} disjoint copies of [{}] plus {} row padding elements",
                2 * s,
                t - s
            ),
            format!("k_used = 3t - t/q = {k_used}"),
        ],
    })
}

/// A pair realizing `C_{p,2}` (first row `(0,0,1,..,1)`) with marker elements
/// `a` and `b` placed as the recursive construction needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPair {
    pub a: usize,
    pub b: usize,
    pub certificate: Certificate,
}

impl MarkedPair {
    pub fn to_json_string(&self) -> String {
        format!(
            "{{\n  \"a\": {},\n  \"b\": {},\n  \"certificate\": {}\n}}\n",
            self.a,
            self.b,
            self.certificate.to_json_indented(2)
        )
    }
}

const BASE_FIXTURE: &str = include_str!("../fixtures/recursive_q2_base.json");

/// The frozen `t = 3` base case (`C_{8,2}`, markers 8 and 9).
pub fn recursive_q2_base() -> Result<MarkedPair> {
    let base: MarkedPair = serde_json::from_str(BASE_FIXTURE)?;
    Ok(base)
}

/// Finds a base case from scratch: the smallest `k >= 9` admitting one, with
/// markers `a = 8`, `b = 9`. Deterministic, so it reproduces the fixture.
pub fn search_recursive_q2_base(limits: SearchLimits) -> Result<Option<MarkedPair>> {
    let (a, b) = (8, 9);
    for k in 9..=16 {
        let outcome = recursive_q2_base_query(k, a, b)?.run(limits, 1)?;
        match outcome.status {
            Status::Witness => {
                let pair = outcome.witness.expect("witness status carries a pair");
                let spec = CirculantSpec { p: 8, q: 2 };
                return Ok(Some(MarkedPair {
                    a,
                    b,
                    certificate: Certificate::from_pair(&pair, spec, spec.n() - 1),
                }));
            }
            Status::Nonexistent => continue,
            Status::Inconclusive => return Ok(None),
        }
    }
    Ok(None)
}

/// Checks the marker placement on a pair of order `n = 2h`:
/// `a` lies in exactly `G_1..G_h` and `F_{h+1}..F_{n-1}`, `b` in exactly
/// `G_{h+1}..G_n` and `F_1..F_{h-1}` (1-based).
pub fn check_marker_discipline(
    pair: &FamilyPair,
    a: usize,
    b: usize,
) -> std::result::Result<(), String> {
    let n = pair.rows().len();
    if !n.is_multiple_of(2) || pair.cols().len() != n {
        return Err(format!("order {n} is not even"));
    }
    let h = n / 2;
    for (j, g) in pair.cols().members().iter().enumerate() {
        let (want_a, want_b) = (j < h, j >= h);
        if g.contains(a) != want_a || g.contains(b) != want_b {
            return Err(format!(
                "column member G_{} = {g:?} breaks marker placement",
                j + 1
            ));
        }
    }
    for (i, f) in pair.rows().members().iter().enumerate() {
        let want_a = i >= h && i < n - 1;
        let want_b = i < h - 1;
        if f.contains(a) != want_a || f.contains(b) != want_b {
            return Err(format!(
                "row member F_{} = {f:?} breaks marker placement",
                i + 1
            ));
        }
    }
    Ok(())
}

/// One doubling step: from families of `(t-1)`-sets realizing
/// `C_{p_{t-1},2}` with markers `a, b`, builds `t`-sets realizing
/// `C_{p_t,2}` with fresh markers `c = k + 1`, `d = k + 2`.
fn double(pair: &FamilyPair, a: usize, b: usize) -> Result<(FamilyPair, usize, usize)> {
    let k = pair.k() + 2;
    let (c, d) = (k - 1, k);
    let m = pair.rows().len();
    let rows = pair.rows().members();
    let cols = pair.cols().members();

    let mut f_new = Vec::with_capacity(2 * m);
    for (i, f) in rows.iter().enumerate() {
        let extra = if i + 1 < m { d } else { a };
        f_new.push(f.widen(k).with(extra));
    }
    for (i, f) in rows.iter().enumerate() {
        let extra = if i + 1 < m { c } else { b };
        f_new.push(f.swapped(a, b).widen(k).with(extra));
    }
    let mut g_new = Vec::with_capacity(2 * m);
    for g in cols {
        g_new.push(g.widen(k).with(c));
    }
    for g in cols {
        g_new.push(g.swapped(a, b).widen(k).with(d));
    }
    let t = pair.t() + 1;
    let next = FamilyPair::new(SetFamily::new(k, t, f_new)?, SetFamily::new(k, t, g_new)?)?;
    Ok((next, c, d))
}

/// `C_{p,2}` with `p = 2^t + 2^{t-2} - 2` for `t >= 3`, in the variant with
/// first row `(0,0,1,..,1)` (shift `n - 1`). The ground set grows by two
/// elements per level above the frozen `t = 3` base.
pub fn construct_recursive_q2(t: usize) -> Result<ConstructionReport> {
    if t < 3 {
        return Err(Error::range("t ≥ 3", format!("t = {t}")));
    }
    if t > 20 {
        return Err(Error::range(
            "t ≤ 20",
            format!("order 2^t + 2^(t-2) too large for t = {t}"),
        ));
    }
    let base = recursive_q2_base()?;
    let mut pair = base.certificate.to_pair()?;
    let (mut a, mut b) = (base.a, base.b);
    let mut trace = vec![format!(
        "base t = 3: C_(8,2) over [{}], markers a = {a}, b = {b}",
        pair.k()
    )];
    for level in 4..=t {
        let (next, c, d) = double(&pair, a, b)?;
        pair = next;
        a = c;
        b = d;
        trace.push(format!(
            "t = {level}: order {}, new markers c = {c}, d = {d}",
            pair.rows().len()
        ));
    }
    let n = pair.rows().len();
    let p = (1usize << t) + (1usize << (t - 2)) - 2;
    debug_assert_eq!(n, p + 2);
    let k_used = pair.k();
    trace.push(format!("k_used = {k_used}; final markers a = {a}, b = {b}"));
    Ok(ConstructionReport {
        pair,
        spec: CirculantSpec { p, q: 2 },
        shift: n - 1,
        k_used,
        method: Method::RecursiveQ2,
        trace,
    })
}

/// Final marker elements of `construct_recursive_q2(t)`.
pub fn recursive_q2_markers(t: usize) -> Result<(usize, usize)> {
    let base = recursive_q2_base()?;
    if t <= 3 {
        return Ok((base.a, base.b));
    }
    let k = base.certificate.k + 2 * (t - 3);
    Ok((k - 1, k))
}

/// Builds the pair for `method` from CLI-style parameters.
pub fn construct(
    method: Method,
    t: usize,
    p: Option<usize>,
    q: Option<usize>,
    k: Option<usize>,
) -> Result<ConstructionReport> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::InvalidArgument(format!("method {method} needs -{name}")))
    };
    let report = match method {
        Method::SmallP => construct_small_p(t, need(p, "p")?, need(q, "q")?, need(k, "k")?)?,
        Method::MidP => construct_mid_p(t, need(p, "p")?, need(q, "q")?)?,
        Method::Blowup => construct_blowup(t, need(q, "q")?)?,
        Method::RecursiveQ2 => construct_recursive_q2(t)?,
    };
    // p / q given for methods that derive them must agree
    if let Some(p) = p {
        if p != report.spec.p {
            return Err(Error::range(
                format!("p = {} for {method} at these parameters", report.spec.p),
                format!("p = {p} requested"),
            ));
        }
    }
    if let Some(q) = q {
        if q != report.spec.q {
            return Err(Error::range(
                format!("q = {} for {method}", report.spec.q),
                format!("q = {q} requested"),
            ));
        }
    }
    if let Some(k) = k {
        if k < report.k_used {
            return Err(Error::range(
                format!("k ≥ {} for {method}", report.k_used),
                format!("k = {k}"),
            ));
        }
    }
    Ok(report)
}

/// `binom(2t/q, t/q)` when defined; used by callers to predict blowup sizes.
pub fn blowup_order(t: usize, q: usize) -> Option<usize> {
    if q == 0 || !t.is_multiple_of(q) {
        return None;
    }
    Some(q * binom(2 * t / q, t / q)?)
}
