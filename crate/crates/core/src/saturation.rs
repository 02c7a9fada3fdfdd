//! Saturation, monotone saturation, closure, and growing saturated matrices
//! by duplicating a row.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::containment::ContainmentWitness;
use crate::engine::Tracker;
use crate::error::{Error, Result};
use crate::family::{check_new_column, ForbiddenFamily};
use crate::matrix::{subsets, ColumnId, Matrix, RowSubset};

/// Hosts with more candidate columns than this are refused by the checks
/// that enumerate every absent column.
pub const MAX_UNIVERSE: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturationReport {
    Saturated,
    /// The matrix is not free; the witness is present for explicit families.
    NotAdmissible(Option<(usize, ContainmentWitness)>),
    /// This absent column can be added without losing freeness.
    Extendable(Vec<u8>),
}

impl SaturationReport {
    pub fn is_saturated(&self) -> bool {
        matches!(self, SaturationReport::Saturated)
    }
}

/// Freeness bookkeeping for a host that grows one column at a time: the
/// packed tracker when the family allows it, containment otherwise.
#[derive(Clone)]
pub(crate) enum Oracle<'a> {
    Fast(Tracker),
    Generic {
        fam: &'a dyn ForbiddenFamily,
        host: Matrix,
    },
}

impl<'a> Oracle<'a> {
    pub(crate) fn new(fam: &'a dyn ForbiddenFamily, n: usize) -> Oracle<'a> {
        match fam.as_explicit().and_then(|f| Tracker::new(f, n)) {
            Some(t) => Oracle::Fast(t),
            None => Oracle::Generic {
                fam,
                host: Matrix::empty(n, fam.alphabet()),
            },
        }
    }

    pub(crate) fn with_matrix(fam: &'a dyn ForbiddenFamily, m: &Matrix) -> Oracle<'a> {
        let mut o = Oracle::new(fam, m.rows());
        match &mut o {
            Oracle::Fast(t) => t.add_matrix(m),
            Oracle::Generic { host, .. } => *host = m.clone(),
        }
        o
    }

    pub(crate) fn creates(&self, col: &[u8]) -> Result<bool> {
        match self {
            Oracle::Fast(t) => Ok(t.creates(col)),
            Oracle::Generic { fam, host } => fam.creates(host, col),
        }
    }

    pub(crate) fn add(&mut self, col: &[u8]) -> Result<()> {
        match self {
            Oracle::Fast(t) => t.add(col),
            Oracle::Generic { host, .. } => *host = host.with_column(col)?,
        }
        Ok(())
    }

    pub(crate) fn remove(&mut self, col: &[u8]) -> Result<()> {
        match self {
            Oracle::Fast(t) => t.remove(col),
            Oracle::Generic { host, .. } => {
                let keep: Vec<usize> = (0..host.cols()).filter(|&j| host.column(j) != col).collect();
                *host = host.submatrix(&RowSubset::all(host.rows()), &keep)?;
            }
        }
        Ok(())
    }

    fn decode(&self, id: ColumnId) -> Vec<u8> {
        match self {
            Oracle::Fast(t) => id.decode(t.rows(), t.alphabet()),
            Oracle::Generic { host, .. } => id.decode(host.rows(), host.alphabet()),
        }
    }

    pub(crate) fn creates_id(&self, id: ColumnId) -> Result<bool> {
        match self {
            Oracle::Fast(t) => Ok(t.creates_id(id)),
            Oracle::Generic { .. } => self.creates(&self.decode(id)),
        }
    }

    pub(crate) fn add_id(&mut self, id: ColumnId) -> Result<()> {
        match self {
            Oracle::Fast(t) => {
                t.add_id(id);
                Ok(())
            }
            Oracle::Generic { .. } => self.add(&self.decode(id)),
        }
    }

    pub(crate) fn remove_id(&mut self, id: ColumnId) -> Result<()> {
        match self {
            Oracle::Fast(t) => {
                t.remove_id(id);
                Ok(())
            }
            Oracle::Generic { .. } => self.remove(&self.decode(id)),
        }
    }
}

fn universe(n: usize, alphabet: u8) -> Result<u64> {
    ColumnId::universe(n, alphabet)
        .filter(|&u| u <= MAX_UNIVERSE)
        .ok_or_else(|| Error::Unsupported(format!("{n} rows over [0,{alphabet}] has too many columns to enumerate")))
}

fn not_admissible(m: &Matrix, fam: &dyn ForbiddenFamily) -> Result<Option<SaturationReport>> {
    if let Some(explicit) = fam.as_explicit() {
        return Ok(explicit.find_violation(m)?.map(|w| SaturationReport::NotAdmissible(Some(w))));
    }
    Ok(fam.violates(m)?.then_some(SaturationReport::NotAdmissible(None)))
}

fn check_host(m: &Matrix, fam: &dyn ForbiddenFamily) -> Result<()> {
    if !m.is_simple() {
        return Err(Error::NotSimple);
    }
    if m.alphabet() != fam.alphabet() {
        return Err(Error::AlphabetMismatch {
            host: m.alphabet(),
            pattern: fam.alphabet(),
        });
    }
    Ok(())
}

/// Free, and every absent column (in `ColumnId` order) creates a member.
pub fn is_saturated(m: &Matrix, fam: &dyn ForbiddenFamily) -> Result<SaturationReport> {
    check_host(m, fam)?;
    let total = universe(m.rows(), m.alphabet())?;
    if let Some(r) = not_admissible(m, fam)? {
        return Ok(r);
    }
    let present: HashSet<ColumnId> = m.column_ids().into_iter().collect();
    let oracle = Oracle::with_matrix(fam, m);
    for id in (0..total).map(ColumnId).filter(|id| !present.contains(id)) {
        let col = id.decode(m.rows(), m.alphabet());
        if !oracle.creates(&col)? {
            return Ok(SaturationReport::Extendable(col));
        }
    }
    Ok(SaturationReport::Saturated)
}

/// Monotone saturation: every absent column creates a member on some row
/// subset, of a member's order, whose restriction was free before.
///
/// Any witnessing row set can be shrunk to the rows of one new copy, so only
/// subsets of member orders are examined; [`is_m_saturated_literal`] checks
/// the definition over all row subsets.
pub fn is_m_saturated(m: &Matrix, fam: &dyn ForbiddenFamily) -> Result<SaturationReport> {
    check_host(m, fam)?;
    let explicit = fam
        .as_explicit()
        .ok_or_else(|| Error::Unsupported("monotone saturation needs an explicit family".into()))?;
    let total = universe(m.rows(), m.alphabet())?;
    let present: HashSet<ColumnId> = m.column_ids().into_iter().collect();
    let absent = (0..total).map(ColumnId).filter(|id| !present.contains(id));

    let orders: Vec<usize> = explicit.member_orders().into_iter().filter(|&k| k <= m.rows()).collect();
    if orders.len() == 1 && orders[0] > 0 {
        if let Some(mut tracker) = Tracker::new(explicit, m.rows()) {
            tracker.add_matrix(m);
            let violated = tracker.violated_subsets();
            for id in absent {
                let col = id.decode(m.rows(), m.alphabet());
                if !tracker.creates_on_free_subsets(&col, &violated) {
                    return Ok(SaturationReport::Extendable(col));
                }
            }
            return Ok(SaturationReport::Saturated);
        }
    }

    let mut free_subsets: Vec<RowSubset> = Vec::new();
    for &k in &orders {
        for r in subsets(m.rows(), k) {
            let r = RowSubset::new(r)?;
            if !fam.violates(&m.restrict_rows(&r)?)? {
                free_subsets.push(r);
            }
        }
    }
    for id in absent {
        let col = id.decode(m.rows(), m.alphabet());
        let grown = m.with_column(&col)?;
        let mut creates = false;
        for r in &free_subsets {
            if fam.violates(&grown.restrict_rows(r)?)? {
                creates = true;
                break;
            }
        }
        if !creates {
            return Ok(SaturationReport::Extendable(col));
        }
    }
    Ok(SaturationReport::Saturated)
}

/// Monotone saturation straight from the definition, quantifying over every
/// row subset. Exponential in `v(M)`; meant for cross-checking.
pub fn is_m_saturated_literal(m: &Matrix, fam: &dyn ForbiddenFamily) -> Result<SaturationReport> {
    check_host(m, fam)?;
    let n = m.rows();
    if n >= 16 {
        return Err(Error::Unsupported("literal check is limited to 15 rows".into()));
    }
    let total = universe(n, m.alphabet())?;
    let present: HashSet<ColumnId> = m.column_ids().into_iter().collect();
    let mut free_sets = Vec::new();
    for mask in 0u32..1 << n {
        let r = RowSubset::new((0..n).filter(|&i| mask >> i & 1 == 1).collect())?;
        if !fam.violates(&m.restrict_rows(&r)?)? {
            free_sets.push(r);
        }
    }
    for id in (0..total).map(ColumnId).filter(|id| !present.contains(id)) {
        let col = id.decode(n, m.alphabet());
        let grown = m.with_column(&col)?;
        let mut ok = false;
        for r in &free_sets {
            if fam.violates(&grown.restrict_rows(r)?)? {
                ok = true;
                break;
            }
        }
        if !ok {
            return Ok(SaturationReport::Extendable(col));
        }
    }
    Ok(SaturationReport::Saturated)
}

/// Order in which [`close`] scans absent columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnOrder {
    Ascending,
    Descending,
    /// A uniformly shuffled order drawn from the seed.
    Shuffled(u64),
    /// These columns first, then every other column ascending.
    Explicit(Vec<ColumnId>),
}

/// Greedily adds absent columns that keep the matrix free. Creation is
/// monotone in the host, so a single scan yields a saturated matrix.
pub fn close(m: &Matrix, fam: &dyn ForbiddenFamily, order: &ColumnOrder) -> Result<Matrix> {
    check_host(m, fam)?;
    let total = universe(m.rows(), m.alphabet())?;
    if fam.violates(m)? {
        return Err(Error::NotFree);
    }
    let ids: Vec<ColumnId> = match order {
        ColumnOrder::Ascending => (0..total).map(ColumnId).collect(),
        ColumnOrder::Descending => (0..total).rev().map(ColumnId).collect(),
        ColumnOrder::Shuffled(seed) => {
            let mut v: Vec<ColumnId> = (0..total).map(ColumnId).collect();
            v.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            v
        }
        ColumnOrder::Explicit(first) => {
            if let Some(bad) = first.iter().find(|id| id.0 >= total) {
                return Err(Error::OutOfRange(format!("column id {}", bad.0)));
            }
            let listed: HashSet<ColumnId> = first.iter().copied().collect();
            first.iter().copied().chain((0..total).map(ColumnId).filter(|id| !listed.contains(id))).collect()
        }
    };
    let mut present: HashSet<ColumnId> = m.column_ids().into_iter().collect();
    let mut out = m.clone();
    let mut oracle = Oracle::with_matrix(fam, m);
    for id in ids {
        if present.contains(&id) {
            continue;
        }
        let col = id.decode(m.rows(), m.alphabet());
        if !oracle.creates(&col)? {
            oracle.add(&col)?;
            out = out.with_column(&col)?;
            present.insert(id);
        }
    }
    Ok(out)
}

/// Number of column pairs of `m` that agree outside row `i`.
pub fn pairs_equal_outside_row(m: &Matrix, i: usize) -> usize {
    let mut seen = HashSet::new();
    let mut d = 0;
    for c in m.columns() {
        let mut key = c.to_vec();
        key.remove(i);
        if !seen.insert(key) {
            d += 1;
        }
    }
    d
}

/// From a saturated `m`, builds a saturated matrix on one more row that
/// contains `duplicate_row(m, i)`. Only columns `(C′, b, 1−b)` on rows `i`
/// and the copy are candidates, where `(C′,0)` and `(C′,1)` are both columns
/// of `m`; every other absent column already creates a member.
pub fn extend_by_duplication(m: &Matrix, fam: &dyn ForbiddenFamily, i: usize) -> Result<Matrix> {
    check_host(m, fam)?;
    if !m.is_binary() {
        return Err(Error::InvalidArgument("row duplication needs a 0/1 matrix".into()));
    }
    let dup = m.duplicate_row(i)?;
    if fam.violates(&dup)? {
        return Err(Error::NotFree);
    }
    let n = m.rows();
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    for c in m.columns() {
        if c[i] != 0 {
            continue;
        }
        let mut other = c.to_vec();
        other[i] = 1;
        if m.has_column(&other) {
            let mut a = c.to_vec();
            a.push(1);
            let mut b = other;
            b.push(0);
            candidates.push(a);
            candidates.push(b);
        }
    }
    candidates.sort_by_key(|c| ColumnId::encode(c, 1));
    let mut out = dup;
    let mut oracle = Oracle::with_matrix(fam, &out);
    for col in candidates {
        debug_assert_eq!(col.len(), n + 1);
        check_new_column(&out, &col, 1)?;
        if !oracle.creates(&col)? {
            oracle.add(&col)?;
            out = out.with_column(&col)?;
        }
    }
    Ok(out)
}

/// A row whose deletion keeps `m` simple. When `e(M) ≤ v(M)` such a row
/// always exists; otherwise the first one, if any.
pub fn find_bondy_row(m: &Matrix) -> Option<usize> {
    (0..m.rows()).find(|&i| m.delete_row(i).is_ok_and(|d| d.is_simple()))
}

/// Every row has at least `2^{k−1} − 1` ones and as many zeros, the shape
/// forced on `K_k`-saturated matrices.
pub fn row_balance_check(m: &Matrix, k: usize) -> bool {
    let need = (1usize << k.saturating_sub(1)).saturating_sub(1);
    (0..m.rows()).all(|i| m.row_count(i, 1) >= need && m.row_count(i, 0) >= need)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{parse_family, Family};
    use crate::matrix::{build_t, parse_matrix};
    use rand::Rng;

    fn k(n: usize) -> Family {
        Family::single(build_t(n, 0, n).unwrap())
    }

    fn m6() -> Matrix {
        Matrix::from_row_strings(
            1,
            &["0000110111", "0011000111", "0101001011", "1000011011", "1010001101", "0100101101"],
        )
        .unwrap()
    }

    #[test]
    fn saturation_examples() {
        assert!(is_saturated(&m6(), &k(3)).unwrap().is_saturated());
        let t41 = build_t(4, 0, 1).unwrap();
        assert!(is_saturated(&t41, &k(2)).unwrap().is_saturated());
        let minus = t41.permute_columns(&[0, 1, 2, 3, 4]).submatrix(&RowSubset::all(4), &[0, 1, 2, 3]).unwrap();
        assert_eq!(is_saturated(&minus, &k(2)).unwrap(), SaturationReport::Extendable(t41.column(4).to_vec()));
        match is_saturated(&build_t(2, 0, 2).unwrap(), &k(2)).unwrap() {
            SaturationReport::NotAdmissible(Some((0, w))) => assert_eq!(w.row_map, vec![0, 1]),
            other => panic!("{other:?}"),
        }
        let dup = parse_matrix("1 2 1\n00\n").unwrap();
        assert!(matches!(is_saturated(&dup, &k(1)), Err(Error::NotSimple)));
    }

    #[test]
    fn m_saturation_reduction_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fams = ["K2", "T:2:1", "3*T:2:2", "T:3:0+T:3:3", "C:01+T:2:2", "K3"];
        for text in fams {
            let fam = parse_family(text).unwrap();
            for _ in 0..25 {
                let n = rng.gen_range(2..=4);
                let mut ids: Vec<u64> = (0..1 << n).collect();
                ids.shuffle(&mut rng);
                ids.truncate(rng.gen_range(0..=ids.len()));
                let m = Matrix::from_column_ids(n, 1, &ids.into_iter().map(ColumnId).collect::<Vec<_>>());
                let fast = is_m_saturated(&m, &fam).unwrap();
                let literal = is_m_saturated_literal(&m, &fam).unwrap();
                assert_eq!(fast.is_saturated(), literal.is_saturated(), "{text} {m:?}");
            }
        }
        assert!(is_m_saturated(&build_t(4, 0, 1).unwrap(), &k(2)).unwrap().is_saturated());
    }

    #[test]
    fn saturated_implies_m_saturated() {
        for (m, fam) in [(m6(), k(3)), (build_t(5, 0, 1).unwrap(), k(2))] {
            assert!(is_saturated(&m, &fam).unwrap().is_saturated());
            assert!(is_m_saturated(&m, &fam).unwrap().is_saturated());
        }
    }

    #[test]
    fn close_examples() {
        let c = close(&Matrix::empty(2, 1), &k(2), &ColumnOrder::Ascending).unwrap();
        assert_eq!(c.cols(), 3);
        assert!(is_saturated(&c, &k(2)).unwrap().is_saturated());
        assert_eq!(close(&m6(), &k(3), &ColumnOrder::Ascending).unwrap(), m6());
        let c4 = close(&Matrix::empty(4, 1), &k(3), &ColumnOrder::Ascending).unwrap();
        assert!((10..=11).contains(&c4.cols()));
        for seed in 0..20 {
            let r = close(&Matrix::empty(4, 1), &k(3), &ColumnOrder::Shuffled(seed)).unwrap();
            assert!(is_saturated(&r, &k(3)).unwrap().is_saturated());
        }
        assert!(matches!(close(&build_t(2, 0, 2).unwrap(), &k(2), &ColumnOrder::Descending), Err(Error::NotFree)));
    }

    #[test]
    fn duplication_extends_k3_witness() {
        let fam = k(3);
        for i in 0..6 {
            let seven = extend_by_duplication(&m6(), &fam, i).unwrap();
            assert_eq!((seven.rows(), seven.cols()), (7, 10));
            assert!(is_saturated(&seven, &fam).unwrap().is_saturated());
        }
    }

    #[test]
    fn duplication_without_pairs_keeps_size() {
        let m = build_t(4, 1, 1).unwrap();
        let fam = parse_family("T:2:0+T:2:2").unwrap();
        let closed = close(&m, &fam, &ColumnOrder::Ascending).unwrap();
        for i in 0..4 {
            if pairs_equal_outside_row(&closed, i) == 0 {
                let dup = closed.duplicate_row(i).unwrap();
                if !fam.violates(&dup).unwrap() {
                    assert_eq!(extend_by_duplication(&closed, &fam, i).unwrap().cols(), closed.cols());
                }
            }
        }
    }

    #[test]
    fn bondy_rows() {
        let m = build_t(3, 0, 1).unwrap().submatrix(&RowSubset::all(3), &[0, 1, 2]).unwrap();
        let i = find_bondy_row(&m).unwrap();
        assert!(m.delete_row(i).unwrap().is_simple());
        assert_eq!(find_bondy_row(&build_t(2, 0, 2).unwrap()), None);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let n = rng.gen_range(1..=7);
            let mut ids: Vec<u64> = (0..1 << n).collect();
            ids.shuffle(&mut rng);
            ids.truncate(rng.gen_range(0..=n));
            let m = Matrix::from_column_ids(n, 1, &ids.into_iter().map(ColumnId).collect::<Vec<_>>());
            let i = find_bondy_row(&m).expect("a deletable row exists when e <= v");
            assert!(m.delete_row(i).unwrap().is_simple());
        }
    }

    #[test]
    fn row_balance() {
        assert!(row_balance_check(&m6(), 3));
        assert!(!row_balance_check(&parse_matrix("2 3 1\n000\n011\n").unwrap(), 2));
    }
}
