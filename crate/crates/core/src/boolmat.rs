//! Dense Boolean matrices and the circulant family `C_{p,q}`.
//!
//! Rows are packed into 64-bit words so the Boolean product reduces to
//! word-wide OR of selected rows. Bits past `cols` in the last word of a row
//! are always zero, which lets equality compare the raw words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// A dense 0/1 matrix with at least one row and one column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BoolMatrix {
    /// All-zero matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        let stride = words_for(cols);
        BoolMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| r == c)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from explicit rows. All rows must have the same
    /// non-zero length.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidArgument("matrix has no rows".into()));
        };
        let cols = first.as_ref().len();
        if cols == 0 {
            return Err(Error::InvalidArgument("matrix has no columns".into()));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {r} has length {}, expected {cols}",
                    row.len()
                )));
            }
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        let w = &mut self.data[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// Packed words of row `r`, least significant bit first.
    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn column(&self, c: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_ones(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn col_ones(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.ones_in_row(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn ones_in_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(r).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    /// Boolean product: `(a*b)(r, c) = OR_m a(r, m) AND b(m, c)`.
    pub fn bool_product(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let stride = out.stride;
        for r in 0..self.rows {
            let dst = r * stride;
            for m in self.ones_in_row(r) {
                let src = other.row_words(m);
                for (d, s) in out.data[dst..dst + stride].iter_mut().zip(src) {
                    *d |= *s;
                }
            }
        }
        Ok(out)
    }

    /// Cyclic row rotation: row `r` of the result is row `(r + shift) mod n`
    /// of `self`. Only defined for square matrices.
    pub fn rotate_rows(&self, shift: i64) -> Result<BoolMatrix> {
        if !self.is_square() {
            return Err(Error::InvalidArgument(format!(
                "rotate_rows needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let s = shift.rem_euclid(n as i64) as usize;
        let mut out = Self::zeros(n, n);
        for r in 0..n {
            let src = (r + s) % n;
            let stride = self.stride;
            out.data[r * stride..(r + 1) * stride].copy_from_slice(self.row_words(src));
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<BoolMatrix> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidArgument("empty submatrix selection".into()));
        }
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::InvalidArgument(format!("row {r} out of bounds")));
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::InvalidArgument(format!("column {c} out of bounds")));
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j])
        }))
    }

    /// First position (row-major) where the two matrices differ.
    pub fn first_difference(&self, other: &BoolMatrix) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| self.get(r, c) != other.get(r, c))
    }

    /// One line per row of `'0'`/`'1'` characters, each line ending in `\n`.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BoolMatrix> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .enumerate()
                .map(|(col, ch)| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::parse(
                        format!("line {}, column {}", ln + 1, col + 1),
                        format!("unexpected character {other:?}"),
                    )),
                })
                .collect::<Result<Vec<bool>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    /// Plain PBM (`P1`): header, `width height`, then one row per line with
    /// bits separated by single spaces.
    pub fn to_pbm(&self) -> String {
        let mut s = format!("P1\n{} {}\n", self.cols, self.rows);
        for r in 0..self.rows {
            let line: Vec<&str> = (0..self.cols)
                .map(|c| if self.get(r, c) { "1" } else { "0" })
                .collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_pbm(text: &str) -> Result<BoolMatrix> {
        // Strip comments, then tokenize. Bits in P1 may be packed without separators.
        let mut tokens = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            tokens.extend(line.split_whitespace());
        }
        let mut it = tokens.into_iter();
        if it.next() != Some("P1") {
            return Err(Error::parse("header", "expected magic number P1"));
        }
        let mut dim = |what: &str| -> Result<usize> {
            it.next()
                .ok_or_else(|| Error::parse("header", format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::parse("header", format!("bad {what}: {e}")))
        };
        let width = dim("width")?;
        let height = dim("height")?;
        if width == 0 || height == 0 {
            return Err(Error::parse("header", "zero dimension"));
        }
        let bits: Vec<bool> = it
            .flat_map(|tok| tok.chars())
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    "raster",
                    format!("unexpected character {other:?}"),
                )),
            })
            .collect::<Result<_>>()?;
        if bits.len() != width * height {
            return Err(Error::parse(
                "raster",
                format!("expected {} bits, found {}", width * height, bits.len()),
            ));
        }
        Ok(Self::from_fn(height, width, |r, c| bits[r * width + c]))
    }

    pub fn to_json_doc(&self) -> MatrixDoc {
        MatrixDoc {
            rows: self.rows,
            cols: self.cols,
            data: self.to_text().lines().map(str::to_owned).collect(),
        }
    }

    pub fn from_json_doc(doc: &MatrixDoc) -> Result<BoolMatrix> {
        let m = Self::from_text(&doc.data.join("\n"))?;
        if m.rows != doc.rows || m.cols != doc.cols {
            return Err(Error::parse(
                "data",
                format!(
                    "declared {}x{} but data is {}x{}",
                    doc.rows, doc.cols, m.rows, m.cols
                ),
            ));
        }
        Ok(m)
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.rows, self.cols)?;
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// JSON form of a matrix: `{"rows": .., "cols": .., "data": ["0101", ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<String>,
}

/// The parameters of `C_{p,q}`: `p` ones followed by `q` zeros in the
/// generator column, order `n = p + q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CirculantSpec {
    pub p: usize,
    pub q: usize,
}

impl CirculantSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::InvalidSpec("order p + q must be at least 1".into()));
        }
        Ok(CirculantSpec { p, q })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Generator column: `p` ones then `q` zeros.
    pub fn generator(&self) -> Vec<bool> {
        (0..self.n()).map(|i| i < self.p).collect()
    }

    /// Entry `(r, c)` of the canonical matrix.
    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> bool {
        let n = self.n();
        (r + n - c % n) % n < self.p
    }
}

/// The canonical circulant `C_{p,q}`: entry `(r, c)` is `gen[(r - c) mod n]`,
/// so the first column is the generator and each row is the previous one
/// shifted right by one position.
pub fn circulant(spec: CirculantSpec) -> Result<BoolMatrix> {
    let n = spec.n();
    if n == 0 {
        return Err(Error::InvalidSpec("order p + q must be at least 1".into()));
    }
    Ok(BoolMatrix::from_fn(n, n, |r, c| spec.entry(r, c)))
}

/// Returns the shift `s` with `a == rotate_rows(circulant(spec), s)`, if any.
pub fn is_cyclic_variant(a: &BoolMatrix, spec: CirculantSpec) -> Option<usize> {
    let n = spec.n();
    if n == 0 || a.rows() != n || a.cols() != n {
        return None;
    }
    let canon = circulant(spec).ok()?;
    (0..n).find(|&s| (0..n).all(|r| a.row_words(r) == canon.row_words((r + s) % n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(rows: &[&str]) -> BoolMatrix {
        BoolMatrix::from_text(&rows.join("\n")).unwrap()
    }

    #[test]
    fn c44_layout() {
        let expected = bits(&[
            "10000111", "11000011", "11100001", "11110000", "01111000", "00111100", "00011110",
            "00001111",
        ]);
        assert_eq!(
            circulant(CirculantSpec::new(4, 4).unwrap()).unwrap(),
            expected
        );
    }

    #[test]
    fn identity_and_crown_extremes() {
        let id = circulant(CirculantSpec::new(1, 3).unwrap()).unwrap();
        assert_eq!(id, BoolMatrix::identity(4));

        let crown = circulant(CirculantSpec::new(3, 1).unwrap()).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(crown.get(r, c), (r + 4 - c) % 4 != 3);
            }
        }
    }

    #[test]
    fn degenerate_orders() {
        assert!(circulant(CirculantSpec { p: 0, q: 0 }).is_err());
        assert!(CirculantSpec::new(0, 0).is_err());
        let zero = circulant(CirculantSpec::new(0, 3).unwrap()).unwrap();
        assert_eq!(zero.count_ones(), 0);
        let one = circulant(CirculantSpec::new(3, 0).unwrap()).unwrap();
        assert_eq!(one, BoolMatrix::ones(3, 3));
    }

    #[test]
    fn product_examples() {
        let c = |p, q| circulant(CirculantSpec::new(p, q).unwrap()).unwrap();
        assert_eq!(c(1, 3).bool_product(&c(2, 2)).unwrap(), c(2, 2));
        assert_eq!(c(2, 2).bool_product(&c(2, 2)).unwrap(), c(3, 1));
        let m = bits(&["101", "011"]);
        assert_eq!(BoolMatrix::identity(2).bool_product(&m).unwrap(), m);
        assert!(matches!(
            m.bool_product(&m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rotate_rows_examples() {
        let c44 = circulant(CirculantSpec::new(4, 4).unwrap()).unwrap();
        assert_eq!(c44.rotate_rows(0).unwrap(), c44);
        assert_eq!(c44.rotate_rows(8).unwrap(), c44);
        assert_eq!(c44.rotate_rows(-1).unwrap(), c44.rotate_rows(7).unwrap());

        let p = BoolMatrix::identity(3).rotate_rows(1).unwrap();
        assert_eq!(p, bits(&["010", "001", "100"]));

        assert!(bits(&["10", "01", "11"]).rotate_rows(1).is_err());
    }

    #[test]
    fn rotation_by_minus_one_puts_last_row_first() {
        let spec = CirculantSpec::new(5, 3).unwrap();
        let canon = circulant(spec).unwrap();
        let target: Vec<bool> = "00011111".chars().map(|c| c == '1').collect();
        let s = (0..8)
            .find(|&s| canon.rotate_rows(s).unwrap().row(0) == target)
            .unwrap();
        assert_eq!(s, 7);
        let rotated = canon.rotate_rows(s).unwrap();
        assert_eq!(is_cyclic_variant(&rotated, spec), Some(7));
    }

    #[test]
    fn cyclic_variant_detection() {
        let spec = CirculantSpec::new(4, 4).unwrap();
        assert_eq!(is_cyclic_variant(&circulant(spec).unwrap(), spec), Some(0));
        assert_eq!(
            is_cyclic_variant(&BoolMatrix::ones(3, 3), CirculantSpec::new(2, 1).unwrap()),
            None
        );
        // first row (0,0,1,...,1) with q = 2
        let spec82 = CirculantSpec::new(8, 2).unwrap();
        let sec4 = BoolMatrix::from_fn(10, 10, |r, c| (c + 10 - r) % 10 >= 2);
        assert_eq!(sec4.row(9), {
            let mut v = vec![true; 10];
            v[0] = false;
            v[9] = false;
            v
        });
        assert_eq!(is_cyclic_variant(&sec4, spec82), Some(9));
        assert_eq!(is_cyclic_variant(&BoolMatrix::identity(3), spec82), None);
    }

    #[test]
    fn text_pbm_json_formats() {
        let id = BoolMatrix::identity(3);
        assert_eq!(id.to_text(), "100\n010\n001\n");
        assert_eq!(id.to_pbm(), "P1\n3 3\n1 0 0\n0 1 0\n0 0 1\n");
        assert_eq!(BoolMatrix::from_pbm(&id.to_pbm()).unwrap(), id);
        assert_eq!(
            BoolMatrix::from_pbm("P1\n# c\n3 1\n101\n").unwrap(),
            bits(&["101"])
        );
        assert_eq!(BoolMatrix::from_json_doc(&id.to_json_doc()).unwrap(), id);
        assert!(BoolMatrix::from_text("10\n1x\n").is_err());
        assert!(BoolMatrix::from_text("10\n1\n").is_err());
        assert!(BoolMatrix::from_pbm("P4\n1 1\n1").is_err());
        assert!(BoolMatrix::from_pbm("P1\n2 2\n1 0 1").is_err());
    }

    #[test]
    fn wide_rows_cross_word_boundary() {
        let n = 130;
        let spec = CirculantSpec::new(70, 60).unwrap();
        let c = circulant(spec).unwrap();
        for r in 0..n {
            assert_eq!(c.row_ones(r), 70);
            assert_eq!(c.col_ones(r), 70);
        }
        assert_eq!(c.transpose().transpose(), c);
        let id = BoolMatrix::identity(n);
        assert_eq!(id.bool_product(&c).unwrap(), c);
        assert_eq!(c.bool_product(&id).unwrap(), c);
    }
}
