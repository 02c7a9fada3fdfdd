//! Column-oriented matrices over `{0,…,l}` and the construction primitives
//! everything else is built from.
//!
//! Row and column indices are 0-based throughout the library. Entries are
//! stored column-major so that adding or removing a column is cheap.

use std::collections::HashSet;
use std::fmt;

use crate::error::{parse_err, Error, Result};

/// Largest alphabet bound supported by the text format (one digit per entry).
pub const MAX_ALPHABET: u8 = 9;

/// A column packed as an integer: the base-`(l+1)` number whose most
/// significant digit is the entry in row 0.
///
/// The natural order on `ColumnId` is the global enumeration order used by
/// closure and by every search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnId(pub u64);

impl ColumnId {
    pub fn encode(column: &[u8], alphabet: u8) -> ColumnId {
        let base = alphabet as u64 + 1;
        ColumnId(column.iter().fold(0u64, |acc, &e| acc * base + e as u64))
    }

    pub fn decode(self, rows: usize, alphabet: u8) -> Vec<u8> {
        let base = alphabet as u64 + 1;
        let mut out = vec![0u8; rows];
        let mut v = self.0;
        for slot in out.iter_mut().rev() {
            *slot = (v % base) as u8;
            v /= base;
        }
        out
    }

    /// Number of distinct columns of the given order, `(l+1)^rows`, if it fits.
    pub fn universe(rows: usize, alphabet: u8) -> Option<u64> {
        (alphabet as u64 + 1).checked_pow(u32::try_from(rows).ok()?)
    }
}

/// A set of row indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RowSubset(Vec<usize>);

impl RowSubset {
    pub fn new(mut indices: Vec<usize>) -> Result<RowSubset> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("repeated row index".into()));
        }
        Ok(RowSubset(indices))
    }

    pub fn all(n: usize) -> RowSubset {
        RowSubset((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    alphabet: u8,
    data: Vec<u8>,
    simple: bool,
}

impl Matrix {
    /// The `rows × 0` matrix.
    pub fn empty(rows: usize, alphabet: u8) -> Matrix {
        Matrix {
            rows,
            cols: 0,
            alphabet,
            data: Vec::new(),
            simple: true,
        }
    }

    pub fn from_columns<C: AsRef<[u8]>>(rows: usize, alphabet: u8, columns: &[C]) -> Result<Matrix> {
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(Error::InvalidArgument(format!(
                "alphabet bound must be in 1..={MAX_ALPHABET}, got {alphabet}"
            )));
        }
        let mut data = Vec::with_capacity(rows * columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(Error::InvalidArgument(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
            if let Some(&e) = c.iter().find(|&&e| e > alphabet) {
                return Err(Error::InvalidArgument(format!(
                    "entry {e} exceeds alphabet bound {alphabet}"
                )));
            }
            data.extend_from_slice(c);
        }
        Ok(Matrix::from_raw(rows, columns.len(), alphabet, data))
    }

    /// Builds a matrix from row strings such as `["0011", "0101"]`.
    pub fn from_row_strings(alphabet: u8, rows: &[&str]) -> Result<Matrix> {
        let mut text = String::new();
        let cols = rows.first().map_or(0, |r| r.len());
        text.push_str(&format!("{} {} {}\n", rows.len(), cols, alphabet));
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        parse_matrix(&text)
    }

    pub fn from_column_ids(rows: usize, alphabet: u8, ids: &[ColumnId]) -> Matrix {
        let mut data = Vec::with_capacity(rows * ids.len());
        for id in ids {
            data.extend(id.decode(rows, alphabet));
        }
        Matrix::from_raw(rows, ids.len(), alphabet, data)
    }

    fn from_raw(rows: usize, cols: usize, alphabet: u8, data: Vec<u8>) -> Matrix {
        let simple = if rows == 0 {
            cols <= 1
        } else {
            let mut seen = HashSet::with_capacity(cols);
            data.chunks(rows).all(|c| seen.insert(c))
        };
        Matrix {
            rows,
            cols,
            alphabet,
            data,
            simple,
        }
    }

    /// Order `v(M)`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Size `e(M)`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Alphabet bound `l`: entries lie in `{0,…,l}`.
    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet == 1
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.data[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.cols).map(|j| self.entry(i, j)).collect()
    }

    pub fn column_id(&self, j: usize) -> ColumnId {
        ColumnId::encode(self.column(j), self.alphabet)
    }

    pub fn column_ids(&self) -> Vec<ColumnId> {
        (0..self.cols).map(|j| self.column_id(j)).collect()
    }

    pub fn has_column(&self, column: &[u8]) -> bool {
        self.columns().any(|c| c == column)
    }

    /// Number of entries equal to `symbol` in row `i`.
    pub fn row_count(&self, i: usize, symbol: u8) -> usize {
        (0..self.cols).filter(|&j| self.entry(i, j) == symbol).count()
    }

    /// `M(A,B)`, keeping the relative order of both index lists.
    pub fn submatrix(&self, rows: &RowSubset, cols: &[usize]) -> Result<Matrix> {
        if let Some(&i) = rows.indices().iter().find(|&&i| i >= self.rows) {
            return Err(Error::OutOfRange(format!("row {i} of a {}-row matrix", self.rows)));
        }
        if let Some(&j) = cols.iter().find(|&&j| j >= self.cols) {
            return Err(Error::OutOfRange(format!("column {j} of a {}-column matrix", self.cols)));
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &j in cols {
            data.extend(rows.indices().iter().map(|&i| self.entry(i, j)));
        }
        Ok(Matrix::from_raw(rows.len(), cols.len(), self.alphabet, data))
    }

    /// `M(A,)`.
    pub fn restrict_rows(&self, rows: &RowSubset) -> Result<Matrix> {
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &all)
    }

    /// `1 − M`; only defined for 0/1 matrices.
    pub fn complement(&self) -> Result<Matrix> {
        if !self.is_binary() {
            return Err(Error::InvalidArgument("complement needs a 0/1 matrix".into()));
        }
        let data = self.data.iter().map(|&e| 1 - e).collect();
        Ok(Matrix::from_raw(self.rows, self.cols, 1, data))
    }

    /// Appends a copy of row `i` as the new last row.
    pub fn duplicate_row(&self, i: usize) -> Result<Matrix> {
        if i >= self.rows {
            return Err(Error::OutOfRange(format!("row {i} of a {}-row matrix", self.rows)));
        }
        let mut data = Vec::with_capacity((self.rows + 1) * self.cols);
        for c in self.columns() {
            data.extend_from_slice(c);
            data.push(c[i]);
        }
        Ok(Matrix::from_raw(self.rows + 1, self.cols, self.alphabet, data))
    }

    pub fn delete_row(&self, i: usize) -> Result<Matrix> {
        if i >= self.rows {
            return Err(Error::OutOfRange(format!("row {i} of a {}-row matrix", self.rows)));
        }
        let mut data = Vec::with_capacity((self.rows - 1) * self.cols);
        for c in self.columns() {
            data.extend(c.iter().enumerate().filter(|&(r, _)| r != i).map(|(_, &e)| e));
        }
        Ok(Matrix::from_raw(self.rows - 1, self.cols, self.alphabet, data))
    }

    /// Appends `n` rows filled with `value` below the matrix.
    pub fn pad_rows(&self, n: usize, value: u8) -> Matrix {
        let mut data = Vec::with_capacity((self.rows + n) * self.cols);
        for c in self.columns() {
            data.extend_from_slice(c);
            data.extend(std::iter::repeat_n(value, n));
        }
        Matrix::from_raw(self.rows + n, self.cols, self.alphabet, data)
    }

    /// Appends `row` (one entry per column) as the new last row.
    pub fn push_row(&self, row: &[u8]) -> Result<Matrix> {
        if row.len() != self.cols {
            return Err(Error::InvalidArgument(format!(
                "row has {} entries, matrix has {} columns",
                row.len(),
                self.cols
            )));
        }
        let mut data = Vec::with_capacity((self.rows + 1) * self.cols);
        for (c, &e) in self.columns().zip(row) {
            data.extend_from_slice(c);
            data.push(e);
        }
        Ok(Matrix::from_raw(self.rows + 1, self.cols, self.alphabet, data))
    }

    /// `[M₁,M₂]`.
    pub fn concat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::OrderMismatch(self.rows, other.rows));
        }
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                host: self.alphabet,
                pattern: other.alphabet,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix::from_raw(self.rows, self.cols + other.cols, self.alphabet, data))
    }

    /// `[M,C]`.
    pub fn with_column(&self, column: &[u8]) -> Result<Matrix> {
        if column.len() != self.rows {
            return Err(Error::OrderMismatch(self.rows, column.len()));
        }
        if column.iter().any(|&e| e > self.alphabet) {
            return Err(Error::InvalidArgument("column entry exceeds alphabet bound".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(column);
        Ok(Matrix::from_raw(self.rows, self.cols + 1, self.alphabet, data))
    }

    /// Same columns repeated `times` times, `tM`.
    pub fn repeat(&self, times: usize) -> Matrix {
        let data = self.data.repeat(times);
        Matrix::from_raw(self.rows, self.cols * times, self.alphabet, data)
    }

    /// Reorders rows: row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Matrix {
        assert_eq!(order.len(), self.rows);
        let mut data = Vec::with_capacity(self.data.len());
        for c in self.columns() {
            data.extend(order.iter().map(|&i| c[i]));
        }
        Matrix::from_raw(self.rows, self.cols, self.alphabet, data)
    }

    /// Reorders columns: column `j` of the result is column `order[j]` of `self`.
    pub fn permute_columns(&self, order: &[usize]) -> Matrix {
        assert_eq!(order.len(), self.cols);
        let mut data = Vec::with_capacity(self.data.len());
        for &j in order {
            data.extend_from_slice(self.column(j));
        }
        Matrix::from_raw(self.rows, self.cols, self.alphabet, data)
    }

    /// Columns sorted by `ColumnId`; handy for order-insensitive comparisons.
    pub fn sorted_columns(&self) -> Matrix {
        let mut order: Vec<usize> = (0..self.cols).collect();
        order.sort_by(|&a, &b| self.column(a).cmp(self.column(b)));
        self.permute_columns(&order)
    }

    /// Same set of columns, ignoring column order.
    pub fn same_columns(&self, other: &Matrix) -> bool {
        self.rows == other.rows
            && self.alphabet == other.alphabet
            && self.sorted_columns() == other.sorted_columns()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{} over [0,{}]", self.rows, self.cols, self.alphabet)?;
        for i in 0..self.rows {
            f.write_str(if i == 0 { ": " } else { " / " })?;
            for j in 0..self.cols {
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_matrix(self))
    }
}

/// `T_k^{lo..hi}`: every 0/1 column of order `k` whose weight lies in
/// `[lo, hi]`, in `ColumnId` order. `build_t(k, 0, k)` is `K_k`.
pub fn build_t(k: usize, lo: usize, hi: usize) -> Result<Matrix> {
    if lo > hi || hi > k {
        return Err(Error::InvalidArgument(format!("weight range {lo}..={hi} for order {k}")));
    }
    if k >= 63 {
        return Err(Error::Unsupported(format!("order {k} is too large to enumerate")));
    }
    let ids: Vec<ColumnId> = (0..1u64 << k)
        .filter(|v| (lo..=hi).contains(&(v.count_ones() as usize)))
        .map(ColumnId)
        .collect();
    Ok(Matrix::from_column_ids(k, 1, &ids))
}

/// `K_k^l`: all `(l+1)^k` columns over `{0,…,l}` in `ColumnId` order.
pub fn build_k_l(k: usize, alphabet: u8) -> Result<Matrix> {
    if k == 0 || alphabet == 0 || alphabet > MAX_ALPHABET {
        return Err(Error::InvalidArgument(format!("K_{k}^{alphabet}")));
    }
    let total = ColumnId::universe(k, alphabet)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::Unsupported(format!("K_{k}^{alphabet} is too large")))?;
    let ids: Vec<ColumnId> = (0..total).map(ColumnId).collect();
    Ok(Matrix::from_column_ids(k, alphabet, &ids))
}

/// Characteristic column `χ_Y` of order `n`.
pub fn chi(set: &[usize], n: usize) -> Result<Vec<u8>> {
    let mut col = vec![0u8; n];
    for &y in set {
        *col.get_mut(y)
            .ok_or_else(|| Error::OutOfRange(format!("element {y} of a {n}-set")))? = 1;
    }
    Ok(col)
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::with_capacity((m.cols + 1) * (m.rows + 1) + 16);
    out.push_str(&format!("{} {} {}\n", m.rows, m.cols, m.alphabet));
    for i in 0..m.rows {
        out.extend((0..m.cols).map(|j| char::from(b'0' + m.entry(i, j))));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = Lines::new(text);
    let m = lines.matrix()?;
    if let Some((no, line)) = lines.next_nonblank() {
        return Err(parse_err(no, 1, format!("unexpected trailing content {line:?}")));
    }
    Ok(m)
}

/// Line cursor shared by the matrix and family parsers.
pub(crate) struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Lines<'a> {
        let lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
        Lines { lines, pos: 0 }
    }

    /// 1-based number of the next line.
    pub(crate) fn line_no(&self) -> usize {
        self.pos + 1
    }

    pub(crate) fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    pub(crate) fn advance(&mut self) -> Option<&'a str> {
        let l = self.peek()?;
        self.pos += 1;
        Some(l)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.lines[self.pos.min(self.lines.len())..].iter().all(|l| l.trim().is_empty())
    }

    pub(crate) fn next_nonblank(&mut self) -> Option<(usize, &'a str)> {
        while let Some(l) = self.advance() {
            if !l.trim().is_empty() {
                return Some((self.pos, l));
            }
        }
        None
    }

    pub(crate) fn matrix(&mut self) -> Result<Matrix> {
        let header_no = self.line_no();
        let header = self
            .advance()
            .ok_or_else(|| parse_err(header_no, 1, "missing header line"))?;
        let (rows, cols, alphabet) = parse_header(header, header_no)?;
        let mut data = vec![0u8; rows * cols];
        for i in 0..rows {
            let no = self.line_no();
            let line = self
                .advance()
                .ok_or_else(|| parse_err(no, 1, format!("expected {rows} rows, found {i}")))?;
            let bytes = line.as_bytes();
            for (j, &b) in bytes.iter().enumerate() {
                if !b.is_ascii_digit() {
                    return Err(parse_err(no, j + 1, format!("illegal character {:?}", b as char)));
                }
                let d = b - b'0';
                if d > alphabet {
                    return Err(parse_err(no, j + 1, format!("digit {d} exceeds alphabet bound {alphabet}")));
                }
                if j < cols {
                    data[j * rows + i] = d;
                }
            }
            if bytes.len() != cols {
                return Err(parse_err(
                    no,
                    bytes.len().min(cols) + 1,
                    format!("ragged row: expected {cols} entries, found {}", bytes.len()),
                ));
            }
        }
        Ok(Matrix::from_raw(rows, cols, alphabet, data))
    }
}

fn parse_header(line: &str, no: usize) -> Result<(usize, usize, u8)> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 3 || fields.iter().any(|f| f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit())) {
        return Err(parse_err(no, 1, format!("malformed header {line:?}, expected \"n m l\"")));
    }
    let num = |f: &str| f.parse::<usize>().map_err(|e| parse_err(no, 1, format!("bad number {f:?}: {e}")));
    let rows = num(fields[0])?;
    let cols = num(fields[1])?;
    let alphabet = num(fields[2])?;
    if alphabet == 0 || alphabet > MAX_ALPHABET as usize {
        return Err(parse_err(no, 1, format!("alphabet bound {alphabet} outside 1..=9")));
    }
    Ok((rows, cols, alphabet as u8))
}

pub(crate) fn looks_like_header(line: &str) -> bool {
    let fields: Vec<&str> = line.split(' ').collect();
    fields.len() == 3 && fields.iter().all(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

/// Binomial coefficient for small arguments.
pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Matrix {
        Matrix::from_row_strings(1, &["0011", "0101"]).unwrap()
    }

    #[test]
    fn submatrix_examples() {
        let m = k2();
        let row = m.submatrix(&RowSubset::new(vec![0]).unwrap(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(row, Matrix::from_row_strings(1, &["0011"]).unwrap());

        let t31 = build_t(3, 1, 1).unwrap();
        let sub = t31.submatrix(&RowSubset::new(vec![1, 2]).unwrap(), &[1, 2]).unwrap();
        // t31 in ColumnId order is 001, 010, 100; columns 2,3 (1-based) on rows 2,3.
        assert_eq!(sub.column(0), &[1, 0]);
        assert_eq!(sub.column(1), &[0, 0]);
        assert!(m.submatrix(&RowSubset::new(vec![2]).unwrap(), &[0]).is_err());
        assert!(m.submatrix(&RowSubset::all(2), &[4]).is_err());
    }

    #[test]
    fn build_t_sizes() {
        let t = build_t(3, 1, 1).unwrap();
        assert_eq!(t.cols(), 3);
        assert!(t.columns().all(|c| c.iter().filter(|&&e| e == 1).count() == 1));
        assert_eq!(build_t(2, 0, 2).unwrap(), k2());
        assert_eq!(build_t(4, 0, 1).unwrap().cols(), 5);
        for k in 0..7 {
            for lo in 0..=k {
                for hi in lo..=k {
                    let expect: usize = (lo..=hi).map(|i| binomial(k, i)).sum();
                    assert_eq!(build_t(k, lo, hi).unwrap().cols(), expect);
                }
            }
        }
        assert!(build_t(3, 2, 1).is_err());
        assert!(build_t(3, 0, 4).is_err());
    }

    #[test]
    fn build_k_l_sizes() {
        let k12 = build_k_l(1, 2).unwrap();
        assert_eq!(k12.row(0), vec![0, 1, 2]);
        assert_eq!(build_k_l(2, 1).unwrap(), k2());
        assert_eq!(build_k_l(3, 2).unwrap().cols(), 27);
        assert!(build_k_l(3, 2).unwrap().is_simple());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&[], 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(chi(&[0, 1, 2, 3], 4).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(chi(&[0, 2], 4).unwrap(), vec![1, 0, 1, 0]);
        assert!(chi(&[4], 4).is_err());
    }

    #[test]
    fn elementary_operations() {
        let t31 = build_t(3, 1, 1).unwrap();
        let t32 = build_t(3, 2, 2).unwrap();
        assert!(t31.complement().unwrap().same_columns(&t32));
        assert_eq!(t31.complement().unwrap().complement().unwrap(), t31);
        assert!(build_k_l(2, 2).unwrap().complement().is_err());

        let d = t31.duplicate_row(1).unwrap();
        assert_eq!(d.rows(), 4);
        assert_eq!(d.row(3), t31.row(1));
        assert_eq!(d.delete_row(3).unwrap(), t31);

        let c = build_t(4, 0, 1).unwrap().concat(&build_t(4, 4, 4).unwrap()).unwrap();
        assert_eq!(c.cols(), 6);
        assert!(c.is_simple());
        let dup = c.concat(&build_t(4, 4, 4).unwrap()).unwrap();
        assert!(!dup.is_simple());
        assert!(c.concat(&build_t(3, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn degenerate_matrices() {
        let e = Matrix::empty(3, 1);
        assert!(e.is_simple());
        assert_eq!(e.cols(), 0);
        let z = Matrix::from_columns::<Vec<u8>>(0, 1, &[vec![]]).unwrap();
        assert!(z.is_simple());
        assert_eq!(parse_matrix(&format_matrix(&e)).unwrap(), e);
        assert_eq!(parse_matrix("0 0 1\n").unwrap(), Matrix::empty(0, 1));
    }

    #[test]
    fn column_ids() {
        let col = vec![1, 0, 2];
        let id = ColumnId::encode(&col, 2);
        assert_eq!(id, ColumnId(9 + 2));
        assert_eq!(id.decode(3, 2), col);
        assert_eq!(ColumnId::universe(3, 2), Some(27));
        assert_eq!(ColumnId::encode(&[1, 0, 1, 0], 1), ColumnId(10));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_matrix("2 4 1\n0011\n0101\n").unwrap(), k2());
        let m = parse_matrix("1 2 2\n02\n").unwrap();
        assert_eq!((m.rows(), m.cols(), m.alphabet()), (1, 2, 2));
        assert_eq!(m.row(0), vec![0, 2]);
    }

    #[test]
    fn parse_errors() {
        let pos = |e: Error| match e {
            Error::Parse { pos, .. } => (pos.line, pos.column),
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(pos(parse_matrix("2 4\n0011\n0101\n").unwrap_err()), (1, 1));
        assert_eq!(pos(parse_matrix("2 4 1\n0011\n01x1\n").unwrap_err()), (3, 3));
        assert_eq!(pos(parse_matrix("2 4 1\n0011\n010\n").unwrap_err()), (3, 4));
        assert_eq!(pos(parse_matrix("2 4 1\n0011\n01011\n").unwrap_err()), (3, 5));
        assert_eq!(pos(parse_matrix("1 2 1\n02\n").unwrap_err()), (2, 2));
        assert_eq!(pos(parse_matrix("2 2 1\n01\n").unwrap_err()), (3, 1));
        assert!(parse_matrix("1 1 1\n0\n1 1 1\n").is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(2, 3).len(), 0);
        assert_eq!(binomial(10, 3), 120);
    }
}
