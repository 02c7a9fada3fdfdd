//! Named matrices and generated families with their claimed properties.
//!
//! Printed matrices are text assets under `data/`; they are embedded at
//! build time and can be replaced by files from another directory.

mod hsf;
mod orbits;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use orbits::{rotation_closure, rotation_orbits};
pub use hsf::{
    bad_k_set_bound, bad_k_set_count, family_params, family_params_with, hsf_saturated, hsf_seed, star_matrix, star_pad,
    star_family, HsfParams, StarFamily,
};

use crate::error::{Error, Result};
use crate::family::{parse_family, Family};
use crate::matrix::{build_t, chi, parse_matrix, Matrix};
use crate::saturation::{close, is_saturated, ColumnOrder};

/// Lines of the Fano plane on `1..=7`.
pub const FANO_LINES: [[usize; 3]; 7] = [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

const EMBEDDED: &[(&str, &str)] = &[
    ("k3_sat_6x10", include_str!("../../data/k3_sat_6x10.txt")),
    ("k3_sat_4x10", include_str!("../../data/k3_sat_4x10.txt")),
    ("t30t33_m4", include_str!("../../data/t30t33_m4.txt")),
    ("t30t33_m5", include_str!("../../data/t30t33_m5.txt")),
    ("t30t33_m6", include_str!("../../data/t30t33_m6.txt")),
    ("t30t32t33_m4", include_str!("../../data/t30t32t33_m4.txt")),
    ("t30t32t33_m5", include_str!("../../data/t30t32t33_m5.txt")),
    ("t30t32t33_m6", include_str!("../../data/t30t32t33_m6.txt")),
    ("t3le2_m4", include_str!("../../data/t3le2_m4.txt")),
    ("t3le2_m5", include_str!("../../data/t3le2_m5.txt")),
    ("t3le2_extra_row", include_str!("../../data/t3le2_extra_row.txt")),
    ("t32_m5", include_str!("../../data/t32_m5.txt")),
];

/// Where printed matrices are read from.
#[derive(Debug, Clone, Default)]
pub struct Assets {
    dir: Option<PathBuf>,
}

impl Assets {
    /// The copies compiled into the library.
    pub fn embedded() -> Assets {
        Assets { dir: None }
    }

    /// `<dir>/<name>.txt` for every asset.
    pub fn from_dir(dir: impl Into<PathBuf>) -> Assets {
        Assets { dir: Some(dir.into()) }
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        EMBEDDED.iter().map(|(n, _)| *n)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn load(&self, name: &str) -> Result<Matrix> {
        match &self.dir {
            Some(dir) => parse_matrix(&std::fs::read_to_string(dir.join(format!("{name}.txt")))?),
            None => {
                let text = EMBEDDED
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, t)| *t)
                    .ok_or_else(|| Error::InvalidArgument(format!("no asset named {name:?}")))?;
                parse_matrix(text)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GalleryId {
    K2Sat,
    K3Sat,
    OneRow,
    Lt22Sat,
    Lt22Remark,
    Chain,
    Sat3,
    T30T33,
    T30T32T33,
    T3Le2,
    T32Sat,
}

impl GalleryId {
    pub const ALL: [GalleryId; 11] = [
        GalleryId::K2Sat,
        GalleryId::K3Sat,
        GalleryId::OneRow,
        GalleryId::Lt22Sat,
        GalleryId::Lt22Remark,
        GalleryId::Chain,
        GalleryId::Sat3,
        GalleryId::T30T33,
        GalleryId::T30T32T33,
        GalleryId::T3Le2,
        GalleryId::T32Sat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GalleryId::K2Sat => "K2_SAT",
            GalleryId::K3Sat => "K3_SAT",
            GalleryId::OneRow => "ONE_ROW",
            GalleryId::Lt22Sat => "LT22_SAT",
            GalleryId::Lt22Remark => "LT22_REMARK",
            GalleryId::Chain => "CHAIN",
            GalleryId::Sat3 => "SAT3",
            GalleryId::T30T33 => "T30T33",
            GalleryId::T30T32T33 => "T30T32T33",
            GalleryId::T3Le2 => "T3LE2",
            GalleryId::T32Sat => "T32_SAT",
        }
    }

    /// Names of the extra parameters after `n`.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            GalleryId::OneRow => &["m", "l"],
            GalleryId::Lt22Sat | GalleryId::Lt22Remark => &["l"],
            _ => &[],
        }
    }

    /// Smallest supported `n` for the given parameters.
    pub fn min_n(self, params: &[usize]) -> usize {
        match (self, params) {
            (GalleryId::K2Sat, _) => 1,
            (GalleryId::K3Sat, _) => 4,
            (GalleryId::OneRow, &[_, l]) => l.max(2),
            (GalleryId::Lt22Sat, &[l]) => l.max(2),
            (GalleryId::Lt22Remark, &[l]) => l.max(2),
            (GalleryId::Chain | GalleryId::Sat3, _) => 2,
            (GalleryId::T30T33 | GalleryId::T30T32T33 | GalleryId::T3Le2, _) => 4,
            (GalleryId::T32Sat, _) => 3,
            _ => usize::MAX,
        }
    }

    /// Parameter choices covered by gallery verification.
    pub fn param_sets(self) -> Vec<Vec<usize>> {
        match self {
            GalleryId::OneRow => {
                let mut v = vec![vec![0, 2], vec![1, 2]];
                for l in 3..=6 {
                    v.push(vec![0, l]);
                }
                for l in 2..=6 {
                    for m in 2..=l {
                        v.push(vec![m, l]);
                    }
                }
                v
            }
            GalleryId::Lt22Sat => vec![vec![1], vec![2], vec![3]],
            GalleryId::Lt22Remark => vec![vec![1], vec![2], vec![3]],
            _ => vec![vec![]],
        }
    }
}

impl fmt::Display for GalleryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GalleryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<GalleryId> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        GalleryId::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown gallery entry {s:?}")))
    }
}

/// Claimed number of columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeClaim {
    Exact(usize),
    AtMost(usize),
}

impl SizeClaim {
    pub fn holds(self, size: usize) -> bool {
        match self {
            SizeClaim::Exact(e) => size == e,
            SizeClaim::AtMost(e) => size <= e,
        }
    }
}

/// A gallery matrix, the family it is claimed saturated for, and its size.
#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub id: GalleryId,
    pub n: usize,
    pub params: Vec<usize>,
    pub matrix: Matrix,
    pub family: Family,
    pub size: SizeClaim,
}

impl GalleryEntry {
    /// Whether the matrix is saturated for its family and has the claimed size.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.matrix.rows() == self.n
            && self.size.holds(self.matrix.cols())
            && is_saturated(&self.matrix, &self.family)?.is_saturated())
    }

    pub fn label(&self) -> String {
        let mut s = format!("{}(n={}", self.id, self.n);
        for (name, v) in self.id.param_names().iter().zip(&self.params) {
            s.push_str(&format!(",{name}={v}"));
        }
        s.push(')');
        s
    }
}

fn family(text: &str) -> Family {
    parse_family(text).expect("built-in family text parses")
}

/// `χ_Y` for a set of 1-based row numbers.
fn chi1(set: &[usize], n: usize) -> Result<Vec<u8>> {
    let zero_based: Vec<usize> = set.iter().map(|&y| y - 1).collect();
    chi(&zero_based, n)
}

fn range1(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}

fn all_but(i: usize, n: usize) -> Vec<usize> {
    (1..=n).filter(|&y| y != i).collect()
}

fn from_cols(n: usize, cols: &[Vec<u8>]) -> Result<Matrix> {
    Matrix::from_columns(n, 1, cols)
}

fn simple(entry: GalleryEntry) -> Result<GalleryEntry> {
    if !entry.matrix.is_simple() {
        return Err(Error::Unsupported(format!("{} has repeated columns", entry.label())));
    }
    Ok(entry)
}

/// Repeats the last row of `m` until it has `n` rows.
fn repeat_last_row(m: &Matrix, n: usize) -> Result<Matrix> {
    let last = m.row(m.rows() - 1);
    let mut out = m.clone();
    while out.rows() < n {
        out = out.push_row(&last)?;
    }
    Ok(out)
}

fn append_row(m: &Matrix, row: &[u8], n: usize) -> Result<Matrix> {
    let mut out = m.clone();
    while out.rows() < n {
        out = out.push_row(row)?;
    }
    Ok(out)
}

/// `[T_n^{≤1}, M]` where the rows of `M` are the characteristic vectors of `sets`.
fn design_matrix(n: usize, sets: &[Vec<usize>]) -> Result<Matrix> {
    let base = build_t(n, 0, 1)?;
    let cols: Vec<Vec<u8>> = (1..=n)
        .map(|j| sets.iter().map(|x| u8::from(x.contains(&j))).collect())
        .collect();
    base.concat(&from_cols(n, &cols)?)
}

/// Builds a gallery entry from the embedded assets.
pub fn gallery(id: GalleryId, n: usize, params: &[usize]) -> Result<GalleryEntry> {
    gallery_with(&Assets::embedded(), id, n, params)
}

pub fn gallery_with(assets: &Assets, id: GalleryId, n: usize, params: &[usize]) -> Result<GalleryEntry> {
    if params.len() != id.param_names().len() {
        return Err(Error::InvalidArgument(format!(
            "{id} takes parameters {:?}, got {} values",
            id.param_names(),
            params.len()
        )));
    }
    let unsupported = || Error::Unsupported(format!("{id} with n={n} and parameters {params:?}"));
    if n < id.min_n(params) || n > 24 {
        return Err(unsupported());
    }
    let entry = |matrix: Matrix, family: Family, size: SizeClaim| GalleryEntry {
        id,
        n,
        params: params.to_vec(),
        matrix,
        family,
        size,
    };
    let e = match id {
        GalleryId::K2Sat => entry(build_t(n, 0, 1)?, family("K2"), SizeClaim::Exact(n + 1)),
        GalleryId::K3Sat => {
            let m = match n {
                4 => assets.load("k3_sat_4x10")?,
                5 => assets.load("k3_sat_6x10")?.delete_row(5)?,
                _ => repeat_last_row(&assets.load("k3_sat_6x10")?, n)?,
            };
            entry(m, family("K3"), SizeClaim::Exact(10))
        }
        GalleryId::OneRow => {
            let (m, l) = (params[0], params[1]);
            if l < 2 || m > l || (m == 1 && l != 2) {
                return Err(unsupported());
            }
            let fam = if m == 0 {
                family(&format!("{l}*C:1"))
            } else {
                family(&format!("{m}*C:0+{l}*C:1"))
            };
            let mut cols = Vec::new();
            let size = match m {
                0 if l == 2 => {
                    cols.push(chi1(&[], n)?);
                    cols.push(chi1(&range1(1, n), n)?);
                    2
                }
                0 => {
                    cols.push(chi1(&[], n)?);
                    cols.push(chi1(&range1(1, n), n)?);
                    for i in 1..=l - 2 {
                        cols.push(chi1(&all_but(i, n), n)?);
                    }
                    cols.push(chi1(&range1(1, l - 2), n)?);
                    l + 1
                }
                1 => {
                    // Only l = 2: T_n^n and χ_{[n]∖{1}}.
                    cols.push(chi1(&range1(1, n), n)?);
                    cols.push(chi1(&all_but(1, n), n)?);
                    2
                }
                _ => {
                    cols.push(chi1(&range1(1, n), n)?);
                    for i in 1..=m - 2 {
                        cols.push(chi1(&[i], n)?);
                    }
                    for i in 1..=l - 1 {
                        cols.push(chi1(&all_but(i, n), n)?);
                    }
                    cols.push(chi1(&range1(m - 1, l - 1), n)?);
                    l + m - 1
                }
            };
            entry(from_cols(n, &cols)?, fam, SizeClaim::Exact(size))
        }
        GalleryId::Lt22Sat => {
            let l = params[0];
            let fam = family(&format!("{l}*T:2:2"));
            let base = build_t(n, 0, 1)?;
            let (m, size) = match l {
                1 => (base, n + 1),
                2 => (base.with_column(&chi1(&range1(1, n), n)?)?, n + 2),
                3 if n == 4 => {
                    let sets: Vec<Vec<usize>> = (1..=4).map(|i| all_but(i, 4)).collect();
                    (design_matrix(4, &sets)?, 9)
                }
                3 if n == 7 => {
                    let sets: Vec<Vec<usize>> = FANO_LINES
                        .iter()
                        .map(|y| (1..=7).filter(|x| !y.contains(x)).collect())
                        .collect();
                    (design_matrix(7, &sets)?, 15)
                }
                3 => {
                    let mut cols = vec![chi1(&range1(1, n - 1), n)?, chi1(&range1(1, n), n)?];
                    for i in 1..n {
                        cols.push(chi1(&[i, n], n)?);
                    }
                    (base.concat(&from_cols(n, &cols)?)?, 2 * n + 2)
                }
                _ => return Err(unsupported()),
            };
            entry(m, fam, SizeClaim::Exact(size))
        }
        GalleryId::Lt22Remark => {
            let l = params[0];
            if l == 0 || l > n {
                return Err(unsupported());
            }
            let fam = family(&format!("{l}*T:2:2+C:01"));
            let cols: Vec<Vec<u8>> = (1..=l).map(|i| chi1(&all_but(i, n), n)).collect::<Result<_>>()?;
            let start = from_cols(n, &cols)?;
            let m = close(&start, &fam, &ColumnOrder::Ascending)?;
            entry(m, fam, SizeClaim::AtMost(2 << l))
        }
        GalleryId::Chain => {
            let cols: Vec<Vec<u8>> = (0..=n).map(|i| chi1(&range1(1, i), n)).collect::<Result<_>>()?;
            entry(from_cols(n, &cols)?, family("T:2:1"), SizeClaim::Exact(n + 1))
        }
        GalleryId::Sat3 => {
            let rest = range1(3, n);
            let with = |head: &[usize]| chi1(&[head, &rest[..]].concat(), n);
            let cols = vec![with(&[2])?, with(&[1])?, with(&[])?];
            entry(from_cols(n, &cols)?, family("T:2:0+T:2:2"), SizeClaim::Exact(3))
        }
        GalleryId::T30T33 => {
            let m = match n {
                4 => assets.load("t30t33_m4")?,
                5 => assets.load("t30t33_m5")?,
                _ => assets.load("t30t33_m6")?.pad_rows(n - 6, 0),
            };
            let size = if n <= 5 { 10 } else { 7 };
            entry(m, family("T:3:0+T:3:3"), SizeClaim::Exact(size))
        }
        GalleryId::T30T32T33 => {
            let m = match n {
                4 => assets.load("t30t32t33_m4")?,
                5 => assets.load("t30t32t33_m5")?,
                _ => repeat_last_row(&assets.load("t30t32t33_m6")?, n)?,
            };
            let size = if n <= 5 { 9 } else { 7 };
            entry(m, family("T:3:0+T:3:2+T:3:3"), SizeClaim::Exact(size))
        }
        GalleryId::T3Le2 => {
            let m = match n {
                4 => assets.load("t3le2_m4")?,
                _ => {
                    let row = assets.load("t3le2_extra_row")?.row(0);
                    append_row(&assets.load("t3le2_m5")?, &row, n)?
                }
            };
            entry(m, family("T:3:0-2"), SizeClaim::Exact(10))
        }
        GalleryId::T32Sat => {
            let mut cols = vec![chi1(&[], n)?];
            for i in 1..=n {
                cols.push(chi1(&[i], n)?);
            }
            cols.push(chi1(&range1(1, n), n)?);
            for j in 2..n {
                cols.push(chi1(&[1, j], n)?);
            }
            for j in 2..n {
                cols.push(chi1(&[j, n], n)?);
            }
            entry(from_cols(n, &cols)?, family("T:3:2"), SizeClaim::Exact(3 * n - 2))
        }
    };
    simple(e)
}

/// Every `(n, params)` the gallery verification covers for `id`, `n ≤ max_n`.
pub fn supported_instances(id: GalleryId, max_n: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for params in id.param_sets() {
        for n in id.min_n(&params)..=max_n {
            out.push((n, params.clone()));
        }
    }
    out
}
