//! Closed-form bounds and row shifting.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// An exact value of `forb`.
    ForbExact,
    SatLower,
    SatUpper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub value: BigUint,
    /// What the value is (e.g. `f(n,k-1)`).
    pub source: &'static str,
}

impl BoundValue {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            BoundKind::ForbExact => "forb-exact",
            BoundKind::SatLower => "sat-lower",
            BoundKind::SatUpper => "sat-upper",
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.kind_name(), self.value, self.source)
    }
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `f(n,k) = C(n,0) + … + C(n,k)`.
pub fn f(n: u64, k: u64) -> BigUint {
    (0..=k.min(n)).map(|i| binom(n, i)).sum()
}

/// `forb(n, K_k) = f(n, k−1)`.
pub fn sauer_forb(n: u64, k: u64) -> Result<BigUint> {
    if k == 0 || n + 1 < k {
        return Err(Error::InvalidArgument(format!("need n ≥ k−1 ≥ 0, got n={n}, k={k}")));
    }
    Ok(f(n, k - 1))
}

/// `forb(n, K_k^l) = Σ_{i<k} l^{n−i} C(n,i)` over the alphabet `[0,l]`.
pub fn sauer_forb_l(n: u64, k: u64, l: u64) -> Result<BigUint> {
    if l == 0 || k == 0 || n + 1 < k {
        return Err(Error::InvalidArgument(format!("need l ≥ 1, k ≥ 1, n ≥ k−1; got n={n}, k={k}, l={l}")));
    }
    let l = BigUint::from(l);
    Ok((0..k.min(n + 1)).map(|i| l.pow((n - i) as u32) * binom(n, i)).sum())
}

/// `2n + 1`, a lower bound on `sat(n, lT_2^2)` for `l ≥ 3`, `n ≥ 3`.
pub fn lt22_lower(n: u64) -> BigUint {
    BigUint::from(2 * n + 1)
}

/// Groups columns that agree outside row `i`; inside a group of size `s` the
/// row-`i` entries become `0, …, s−1`, assigned in increasing order of the
/// original entries.
pub fn shift_row(m: &Matrix, i: usize) -> Result<Matrix> {
    if i >= m.rows() {
        return Err(Error::OutOfRange(format!("row {i} of a {}-row matrix", m.rows())));
    }
    if !m.is_simple() {
        return Err(Error::NotSimple);
    }
    let mut groups: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    for j in 0..m.cols() {
        let mut key = m.column(j).to_vec();
        key.remove(i);
        groups.entry(key).or_default().push(j);
    }
    let mut cols: Vec<Vec<u8>> = m.columns().map(<[u8]>::to_vec).collect();
    for members in groups.values() {
        let mut sorted = members.clone();
        sorted.sort_by_key(|&j| (m.entry(i, j), j));
        for (value, &j) in sorted.iter().enumerate() {
            cols[j][i] = value as u8;
        }
    }
    Matrix::from_columns(m.rows(), m.alphabet(), &cols)
}

/// Shifts every row until nothing changes. The entry sum strictly drops on
/// every change, so this terminates.
pub fn shift_fixpoint(m: &Matrix) -> Result<Matrix> {
    let mut cur = m.clone();
    loop {
        let mut changed = false;
        for i in 0..cur.rows() {
            let next = shift_row(&cur, i)?;
            if next != cur {
                changed = true;
                cur = next;
            }
        }
        if !changed {
            return Ok(cur);
        }
    }
}

/// Every closed-form bound known for `fam` given as `K_k` or `K_k^l`.
pub fn complete_bounds(n: u64, k: u64, l: u64) -> Result<Vec<BoundValue>> {
    let mut out = Vec::new();
    if l == 1 {
        out.push(BoundValue {
            kind: BoundKind::ForbExact,
            value: sauer_forb(n, k)?,
            source: "f(n,k-1)",
        });
    } else {
        out.push(BoundValue {
            kind: BoundKind::ForbExact,
            value: sauer_forb_l(n, k, l)?,
            source: "sum_{i<k} l^(n-i) C(n,i)",
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{family_free, Family};
    use crate::matrix::{build_k_l, ColumnId};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn f_values() {
        assert_eq!(f(4, 2), big(11));
        assert_eq!(f(9, 0), big(1));
        assert_eq!(f(5, 5), big(32));
        assert_eq!(f(200, 200), BigUint::from(2u32).pow(200));
    }

    #[test]
    fn sauer_values() {
        assert_eq!(sauer_forb(4, 3).unwrap(), big(11));
        assert_eq!(sauer_forb(7, 1).unwrap(), big(1));
        assert_eq!(sauer_forb(5, 3).unwrap(), big(16));
        assert_eq!(sauer_forb_l(2, 1, 2).unwrap(), big(4));
        assert_eq!(sauer_forb_l(3, 1, 2).unwrap(), big(8));
        assert_eq!(sauer_forb_l(3, 2, 2).unwrap(), big(20));
        assert_eq!(sauer_forb_l(4, 2, 2).unwrap(), big(48));
        for n in 1..8 {
            for k in 1..=n {
                assert_eq!(sauer_forb_l(n, k, 1).unwrap(), f(n, k - 1));
            }
        }
        assert!(sauer_forb(1, 3).is_err());
    }

    #[test]
    fn extremal_matrix_size_matches_the_sum() {
        // All columns with fewer than k entries equal to l.
        for (n, k, l) in [(3usize, 2usize, 2u8), (4, 2, 2), (3, 1, 3), (4, 3, 2)] {
            let ids: Vec<ColumnId> = (0..ColumnId::universe(n, l).unwrap())
                .map(ColumnId)
                .filter(|id| id.decode(n, l).iter().filter(|&&x| x == l).count() < k)
                .collect();
            let m = Matrix::from_column_ids(n, l, &ids);
            assert_eq!(big(m.cols() as u64), sauer_forb_l(n as u64, k as u64, l as u64).unwrap());
            let fam = Family::single(build_k_l(k, l).unwrap());
            assert!(family_free(&m, &fam).unwrap());
            let s = shift_fixpoint(&m).unwrap();
            assert_eq!(s.cols(), m.cols());
        }
    }

    #[test]
    fn shift_examples() {
        let zero_row = Matrix::from_row_strings(1, &["0000", "0110", "1010"]).unwrap();
        assert_eq!(shift_row(&zero_row, 0).unwrap(), zero_row);
        let m = Matrix::from_row_strings(1, &["0011", "0101"]).unwrap();
        assert_eq!(shift_row(&m, 0).unwrap(), m);
        let k = build_k_l(2, 2).unwrap();
        assert_eq!(shift_row(&k, 1).unwrap(), k);
        let m = Matrix::from_row_strings(1, &["1", "0"]).unwrap();
        assert_eq!(shift_row(&m, 0).unwrap(), Matrix::from_row_strings(1, &["0", "0"]).unwrap());
    }

    #[test]
    fn shifting_keeps_freeness_and_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let l: u8 = rng.gen_range(1..=2);
            let k = rng.gen_range(1..=2.min(n));
            let fam = Family::single(build_k_l(k, l).unwrap());
            let universe = ColumnId::universe(n, l).unwrap();
            let mut ids: Vec<ColumnId> = (0..universe).filter(|_| rng.gen_bool(0.4)).map(ColumnId).collect();
            // Drop columns until free.
            while !family_free(&Matrix::from_column_ids(n, l, &ids), &fam).unwrap() {
                let j = rng.gen_range(0..ids.len());
                ids.remove(j);
            }
            let m = Matrix::from_column_ids(n, l, &ids);
            let s = shift_fixpoint(&m).unwrap();
            assert!(s.is_simple());
            assert_eq!(s.cols(), m.cols());
            assert!(family_free(&s, &fam).unwrap());
            for c in s.columns() {
                assert!(c.iter().filter(|&&x| x == l).count() < k);
            }
            assert!(big(s.cols() as u64) <= sauer_forb_l(n as u64, k as u64, l as u64).unwrap());
        }
    }
}
