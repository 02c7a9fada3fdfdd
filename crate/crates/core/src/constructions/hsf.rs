//! The generic construction of saturated matrices with `O(n^{k−1})` columns
//! for a family of `k`-row matrices.

use crate::error::{Error, Result};
use crate::family::{family_free, Family, ForbiddenFamily};
use crate::matrix::{binomial, build_t, subsets, Matrix};
use crate::saturation::{close, ColumnOrder};

/// The parameters `(l, d, m)` of a family of `k`-row matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HsfParams {
    /// Least weight level whose unbounded repetition is not free.
    pub l: usize,
    /// Most copies of `T_k^l` that stay free next to any number of lower columns.
    pub d: usize,
    /// Fewest copies of the lower columns that make `d + 1` copies not free.
    pub m: usize,
}

/// `[m·T_k^{<l}, d·T_k^l, T_k^{>l}]`.
fn layered(k: usize, l: usize, m: usize, d: usize) -> Result<Matrix> {
    let mut out = Matrix::empty(k, 1);
    if l > 0 {
        out = out.concat(&build_t(k, 0, l - 1)?.repeat(m))?;
    }
    out = out.concat(&build_t(k, l, l)?.repeat(d))?;
    if l < k {
        out = out.concat(&build_t(k, l + 1, k)?)?;
    }
    Ok(out)
}

fn check_members(fam: &Family, k: usize) -> Result<()> {
    if fam.alphabet() != 1 {
        return Err(Error::Unsupported("the construction needs 0/1 families".into()));
    }
    if fam.members().iter().any(|f| f.rows() != k) {
        return Err(Error::InvalidArgument(format!("every member must have {k} rows")));
    }
    Ok(())
}

/// `(l, d, m)` for an explicit family; multiplicities are tried up to one
/// more than the largest member size.
pub fn family_params(fam: &Family, k: usize) -> Result<HsfParams> {
    check_members(fam, k)?;
    let bound = 1 + fam.members().iter().map(Matrix::cols).max().unwrap_or(0);
    family_params_with(fam, k, bound)
}

/// `(l, d, m)` for any 0/1 family, testing multiplicities `1..=bound`.
pub fn family_params_with(fam: &dyn ForbiddenFamily, k: usize, bound: usize) -> Result<HsfParams> {
    if fam.violates(&build_t(k, 0, k)?)? {
        return Err(Error::InvalidArgument(format!(
            "K_{k} is not free of the family; the complete-matrix bound applies directly"
        )));
    }
    let free = |l, m, d| -> Result<bool> { family_free(&layered(k, l, m, d)?, fam) };
    let mut level = None;
    'levels: for l in 0..=k {
        for m in 1..=bound {
            if !free(l, m, m)? {
                level = Some(l);
                break 'levels;
            }
        }
    }
    let l = level.ok_or_else(|| {
        Error::InvalidArgument(format!("no level is reached with multiplicities up to {bound}"))
    })?;
    let all_free = |d| -> Result<bool> {
        for m in 1..=bound {
            if !free(l, m, d)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut d = 0;
    while d < bound && all_free(d + 1)? {
        d += 1;
    }
    let m = (1..=bound)
        .find_map(|m| match free(l, m, d + 1) {
            Ok(true) => None,
            Ok(false) => Some(Ok(m)),
            Err(e) => Some(Err(e)),
        })
        .transpose()?
        .ok_or_else(|| Error::InvalidArgument(format!("d + 1 copies stay free up to {bound}")))?;
    Ok(HsfParams { l, d, m })
}

/// `H`: the `(l+1)`-subsets of `1..=n` whose sum is `j (mod n)` for some `j ∈ [d−1]`.
fn hypergraph(n: usize, l: usize, d: usize) -> Vec<Vec<usize>> {
    if d <= 1 || l + 1 > n {
        return Vec::new();
    }
    subsets(n, l + 1)
        .into_iter()
        .map(|s| s.into_iter().map(|y| y + 1).collect::<Vec<usize>>())
        .filter(|y| {
            let r = y.iter().sum::<usize>() % n;
            (1..d).any(|j| j % n == r)
        })
        .collect()
}

fn chi_of(set: &[usize], n: usize) -> Vec<u8> {
    let mut c = vec![0u8; n];
    for &y in set {
        c[y - 1] = 1;
    }
    c
}

/// `[N, T_n^l]` where `N` has one column per edge of `H`.
fn seed_matrix(n: usize, l: usize, d: usize) -> Result<Matrix> {
    let cols: Vec<Vec<u8>> = hypergraph(n, l, d).iter().map(|y| chi_of(y, n)).collect();
    Matrix::from_columns(n, 1, &cols)?.concat(&build_t(n, l, l)?)
}

/// The free seed `[N, T_n^l]` for a family of `k`-row matrices with `l < k`.
pub fn hsf_seed(n: usize, fam: &dyn ForbiddenFamily, k: usize, params: HsfParams) -> Result<Matrix> {
    if params.l >= k {
        return Err(Error::InvalidArgument("the seed needs l < k".into()));
    }
    if params.l > n {
        return Err(Error::InvalidArgument(format!("l = {} exceeds n = {n}", params.l)));
    }
    let seed = seed_matrix(n, params.l, params.d)?;
    if fam.violates(&seed)? {
        return Err(Error::NotFree);
    }
    Ok(seed)
}

/// Number of bad `k`-sets `X`: some `l`-subset `A ⊆ X` lies in at most
/// `d − 2` edges of `H` that avoid `X ∖ A`. Zero when `d = 1`.
pub fn bad_k_set_count(n: usize, k: usize, l: usize, d: usize) -> usize {
    if d <= 1 || l > k || k > n {
        return 0;
    }
    let h = hypergraph(n, l, d);
    let mut bad = 0;
    for x in subsets(n, k) {
        let x: Vec<usize> = x.into_iter().map(|v| v + 1).collect();
        let is_bad = subsets(k, l).into_iter().any(|ai| {
            let a: Vec<usize> = ai.iter().map(|&i| x[i]).collect();
            let covering = h
                .iter()
                .filter(|y| a.iter().all(|v| y.contains(v)))
                .filter(|y| y.iter().all(|v| a.contains(v) || !x.contains(v)))
                .count();
            covering + 2 <= d
        });
        bad += usize::from(is_bad);
    }
    bad
}

/// `2(d−1)C(n,l−1)C(n,k−l) + C(n,l)(d−1)C(n,k−l−1)`.
pub fn bad_k_set_bound(n: usize, k: usize, l: usize, d: usize) -> usize {
    let c = |a: usize, b: Option<usize>| b.map_or(0, |b| binomial(a, b));
    let d1 = d.saturating_sub(1);
    2 * d1 * c(n, l.checked_sub(1)) * c(n, k.checked_sub(l)) + c(n, Some(l)) * d1 * c(n, (k + 1).checked_sub(l + 2).filter(|_| k > l))
}

/// `M*`: `d` zero rows appended below `m`.
pub fn star_pad(m: &Matrix, d: usize) -> Matrix {
    m.pad_rows(d, 0)
}

/// `N_s(d)`: the `(s+d)×d` matrix of columns `χ_{[s+d]∖{i}}`, `i ∈ [s+1, s+d]`.
pub fn star_matrix(s: usize, d: usize) -> Matrix {
    let n = s + d;
    let cols: Vec<Vec<u8>> = (s + 1..=n)
        .map(|i| (1..=n).map(|r| u8::from(r != i)).collect())
        .collect();
    Matrix::from_columns(n, 1, &cols).expect("columns have n entries")
}

/// `F*`: matrices `M` such that `[M*, N_{v(M)}]` is not free of `F`.
pub struct StarFamily<'a> {
    base: &'a dyn ForbiddenFamily,
    d: usize,
}

pub fn star_family(fam: &dyn ForbiddenFamily, d: usize) -> StarFamily<'_> {
    StarFamily { base: fam, d }
}

impl StarFamily<'_> {
    pub fn d(&self) -> usize {
        self.d
    }

    /// `[M*, N_{v(M)}]`.
    pub fn lift(&self, m: &Matrix) -> Result<Matrix> {
        star_pad(m, self.d).concat(&star_matrix(m.rows(), self.d))
    }
}

impl ForbiddenFamily for StarFamily<'_> {
    fn alphabet(&self) -> u8 {
        1
    }

    fn violates(&self, m: &Matrix) -> Result<bool> {
        self.base.violates(&self.lift(m)?)
    }

    fn creates(&self, m: &Matrix, column: &[u8]) -> Result<bool> {
        crate::family::check_new_column(m, column, 1)?;
        self.violates(&m.with_column(column)?)
    }

    fn describe(&self) -> String {
        format!("star({}, d={})", self.base.describe(), self.d)
    }
}

/// A saturated `n`-row matrix for a 0/1 family of `k`-row members, built by
/// the seed-and-close pipeline (recursing through `F*` when `l = k`).
pub fn hsf_saturated(n: usize, fam: &Family, k: usize) -> Result<Matrix> {
    check_members(fam, k)?;
    let bound = 1 + fam.members().iter().map(Matrix::cols).max().unwrap_or(0);
    pipeline(n, fam, k, bound)
}

fn pipeline(n: usize, fam: &dyn ForbiddenFamily, k: usize, bound: usize) -> Result<Matrix> {
    let empty = Matrix::empty(n, 1);
    if fam.violates(&build_t(k, 0, k)?)? {
        return close(&empty, fam, &ColumnOrder::Ascending);
    }
    let params = family_params_with(fam, k, bound)?;
    if params.l < k {
        let seed = hsf_seed(n, fam, k, params)?;
        return close(&seed, fam, &ColumnOrder::Ascending);
    }
    let d = params.d;
    if n <= d {
        return Err(Error::Unsupported(format!("n = {n} leaves no rows for the starred family (d = {d})")));
    }
    let star = star_family(fam, d);
    let inner = pipeline(n - d, &star, k, bound)?;
    let lifted = star.lift(&inner)?;
    close(&lifted, fam, &ColumnOrder::Ascending)
}
